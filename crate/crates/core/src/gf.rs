//! Arithmetic in GF(p^m).
//!
//! Elements are encoded as integers `c0 + c1 p + ... + c_{m-1} p^{m-1}` where
//! `c0 + c1 x + ...` is the residue modulo the field's defining polynomial.
//! With this encoding the prime subfield GF(p) sits inside every GF(p^m) as
//! the values `0..p`, so embedding a prime-field element is the identity on
//! its code.
//!
//! Multiplication goes through exp/log tables built from the smallest
//! primitive element; addition works digit by digit.

use std::fmt;
use std::sync::Arc;

use crate::error::{input, Error, Result};

/// Largest field order we build tables for.
pub const MAX_ORDER: u64 = 1 << 22;

/// Coefficients over GF(p), lowest degree first.
pub type Poly = Vec<u64>;

#[derive(Debug)]
struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Handle to an immutable finite field. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// GF(p^m) with the smallest monic irreducible modulus of degree `m`,
    /// where candidates are ordered by the integer code of their lower
    /// coefficients. For `m = 1` this is the polynomial `x`.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p as u64) || p >= 1 << 31 {
            return input(format!("{p} is not a prime below 2^31"));
        }
        if m == 0 {
            return input("extension degree must be at least 1");
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::Size(format!("GF({p}^{m}) exceeds the table limit")))?;
        let modulus = smallest_irreducible(p as u64, m as usize);
        let q = q as u32;
        let (exp, log) = build_tables(p as u64, &modulus, q);
        Ok(Field(Arc::new(FieldSpec {
            p,
            m,
            q,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            exp,
            log,
        })))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// Parses `GF(p)` or `GF(p^m)`.
    pub fn parse(s: &str) -> Result<Field> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Input(format!("bad field literal {s:?}")))?;
        let (p, m) = match inner.split_once('^') {
            Some((p, m)) => (p, m),
            None => (inner, "1"),
        };
        let p = p
            .parse()
            .map_err(|_| Error::Input(format!("bad field characteristic in {s:?}")))?;
        let m = m
            .parse()
            .map_err(|_| Error::Input(format!("bad field degree in {s:?}")))?;
        Field::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    /// Defining polynomial, lowest degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn same_characteristic(&self, other: &Field) -> bool {
        self.0.p == other.0.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = &*self.0;
        if s.m == 1 {
            let t = a as u64 + b as u64;
            return (t % s.p as u64) as u32;
        }
        if s.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..s.m {
            let d = (a % s.p + b % s.p) % s.p;
            out += d * place;
            a /= s.p;
            b /= s.p;
            place = place.wrapping_mul(s.p);
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let s = &*self.0;
        if s.p == 2 {
            return a;
        }
        if s.m == 1 {
            return (s.p - a) % s.p;
        }
        let mut a = a;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..s.m {
            let d = (s.p - a % s.p) % s.p;
            out += d * place;
            a /= s.p;
            place = place.wrapping_mul(s.p);
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = &*self.0;
        let e = s.log[a as usize] as u64 + s.log[b as usize] as u64;
        s.exp[(e % (s.q as u64 - 1)) as usize]
    }

    /// Inverse of a nonzero element; panics on zero. Use
    /// [`FieldElement::inv`] for a checked version.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let s = &*self.0;
        let l = s.log[a as usize];
        s.exp[((s.q - 1 - l) % (s.q - 1)) as usize]
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.0.q {
            return input(format!("{value} is not an element code of {self}"));
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.0.m as usize {
            return input(format!("too many coefficients for {self}"));
        }
        let mut value = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return input(format!("coefficient {c} out of range for {self}"));
            }
            value = value * self.0.p + c;
        }
        self.element(value)
    }

    /// Coefficients `[c0, c1, ..., c_{m-1}]` of an element code.
    pub fn coeffs(&self, mut value: u32) -> Vec<u32> {
        (0..self.0.m)
            .map(|_| {
                let c = value % self.0.p;
                value /= self.0.p;
                c
            })
            .collect()
    }

    /// Literal `[c0,c1,...]` for an element code.
    pub fn format_element(&self, value: u32) -> String {
        let parts: Vec<String> = self.coeffs(value).iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Parses `[c0,c1,...]`, or a bare integer for prime fields.
    pub fn parse_element(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Input(format!("bad coefficient in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(self.from_coeffs(&coeffs)?.value);
        }
        if self.is_prime_field() {
            let v: u32 = s
                .parse()
                .map_err(|_| Error::Input(format!("bad field element {s:?}")))?;
            return Ok(self.element(v)?.value);
        }
        input(format!("field element {s:?} must be a coefficient tuple"))
    }
}

/// An element together with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}∈{}",
            self.field.format_element(self.value),
            self.field
        )
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            input(format!("mixed fields {} and {}", self.field, other.field))
        }
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::Division);
        }
        Ok(self.with(self.field.inv(self.value)))
    }
}

/// Image of a prime-field element in an extension of the same
/// characteristic.
pub fn embed(e: &FieldElement, target: &Field) -> Result<FieldElement> {
    if !e.field.is_prime_field() {
        return Err(Error::Unsupported(
            "only prime fields can be embedded".into(),
        ));
    }
    if !e.field.same_characteristic(target) {
        return input(format!("cannot embed {} into {}", e.field, target));
    }
    target.element(e.value)
}

// ---- polynomials over GF(p) ------------------------------------------------

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Remainder of `a` modulo `b` (b nonzero).
pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

pub fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, modulus, p)
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or test: a monic `f` of degree `m` is irreducible iff
/// `gcd(f, x^(p^k) - x) = 1` for every `1 <= k <= m/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let m = f.len().saturating_sub(1);
    if m == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        xp = poly_powmod(&xp, p, &f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(&f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, m: usize) -> Poly {
    let count = p.pow(m as u32);
    for code in 0..count {
        let mut f: Poly = Vec::with_capacity(m + 1);
        let mut c = code;
        for _ in 0..m {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn encode(poly: &[u64], p: u64) -> u32 {
    poly.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn decode(mut v: u64, p: u64) -> Poly {
    let mut out = Vec::new();
    while v > 0 {
        out.push(v % p);
        v /= p;
    }
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build_tables(p: u64, modulus: &[u64], q: u32) -> (Vec<u32>, Vec<u32>) {
    let order = q as u64 - 1;
    if order == 0 {
        return (vec![1], vec![0]);
    }
    let factors = prime_factors(order);
    let generator = (1..q as u64)
        .map(|g| decode(g, p))
        .find(|g| {
            factors
                .iter()
                .all(|&r| poly_powmod(g, order / r, modulus, p) != vec![1])
        })
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur: Poly = vec![1];
    for (i, slot) in exp.iter_mut().enumerate() {
        let code = encode(&cur, p);
        *slot = code;
        log[code as usize] = i as u32;
        cur = poly_mulmod(&cur, &generator, modulus, p);
    }
    (exp, log)
}
