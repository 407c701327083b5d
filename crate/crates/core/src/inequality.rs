//! Polymatroid axioms, the Ingleton expression and its scans, linear rank
//! expressions, and throughput ratios.
//!
//! The scans run on the scaled-integer view of a rank vector whenever it
//! exists and fall back to exact rationals otherwise. Both paths share one
//! generic implementation, so they visit subsets in the same order and report
//! the same argmin.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{Signed, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::error::{input, Error, Result};
use crate::lattice::{RankVector, SubsetMask};
use crate::rational::{self, Rational};

/// Largest ground set for the full-definition axiom check (4^n pairs).
pub const MAX_FULL_CHECK: usize = 12;

/// Largest ground set for exhaustive Ingleton scans.
pub const MAX_EXHAUSTIVE: usize = 7;

trait Exact: Clone + Ord + Zero + Send + Sync + Add<Output = Self> + Sub<Output = Self> {}

impl<T: Clone + Ord + Zero + Send + Sync + Add<Output = T> + Sub<Output = T>> Exact for T {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// Normalization and nonnegativity.
    R1,
    /// Monotonicity.
    R2,
    /// Submodularity.
    R3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::R1 => "R1",
            Axiom::R2 => "R2",
            Axiom::R3 => "R3",
        };
        f.write_str(s)
    }
}

/// First failed axiom instance.
///
/// * R1: `sets = [A]`, `h(A) < 0`, or `A = ∅` with `h(∅) ≠ 0`.
/// * R2: `sets = [A, B]` with `A ⊆ B` and `h(A) > h(B)`.
/// * R3: `sets = [A, B]` with `h(A) + h(B) < h(A∪B) + h(A∩B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub sets: Vec<SubsetMask>,
    /// Amount by which the inequality fails (or `h(∅)` for normalization).
    pub amount: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Every instance of R1, R2 and R3.
    Full,
    /// `h(∅) = 0`, `h(X) ≥ h(X∖i)` and `I(i;j|K) ≥ 0`.
    Elemental,
}

/// Checks the polymatroid axioms, returning the first violation found.
///
/// Elemental mode checks, in this order: `h(∅) = 0`; `h(X) − h(X∖i) ≥ 0`
/// for ascending `i`; then `I(i;j|K) ≥ 0` for `i < j` in lexicographic order
/// and `K ⊆ X∖{i,j}` ascending. Full mode checks R1 over all subsets, R2
/// over all `A ⊆ B` (B outer), and R3 over all pairs (A outer), and is
/// limited to `n ≤ 12`.
pub fn check_polymatroid(h: &RankVector, mode: CheckMode) -> Result<Option<Violation>> {
    let n = h.n();
    if mode == CheckMode::Full && n > MAX_FULL_CHECK {
        return Err(Error::Size(format!(
            "full axiom check is limited to {MAX_FULL_CHECK} elements, got {n}"
        )));
    }
    let found = match (h.scaled(), mode) {
        (Some(s), CheckMode::Full) => full_check(&s.values, n),
        (Some(s), CheckMode::Elemental) => elemental_check(&s.values, n),
        (None, CheckMode::Full) => full_check(h.values(), n),
        (None, CheckMode::Elemental) => elemental_check(h.values(), n),
    };
    Ok(found.map(|(axiom, sets)| {
        let amount = match (axiom, sets.as_slice()) {
            (Axiom::R1, [a]) if a.is_empty() => h.at(*a).clone(),
            (Axiom::R1, [a]) => -h.at(*a).clone(),
            (Axiom::R2, [a, b]) => h.at(*a) - h.at(*b),
            (_, [a, b]) => h.at(a.union(*b)) + h.at(a.intersection(*b)) - h.at(*a) - h.at(*b),
            _ => unreachable!("violations carry one or two sets"),
        };
        Violation {
            axiom,
            sets,
            amount,
        }
    }))
}

/// Elemental check; `true` iff `h` is a polymatroid.
pub fn is_polymatroid(h: &RankVector) -> bool {
    check_polymatroid(h, CheckMode::Elemental)
        .expect("elemental mode has no size limit")
        .is_none()
}

fn full_check<T: Exact>(v: &[T], n: usize) -> Option<(Axiom, Vec<SubsetMask>)> {
    let size = 1u32 << n;
    if !v[0].is_zero() {
        return Some((Axiom::R1, vec![SubsetMask::EMPTY]));
    }
    let zero = T::zero();
    if let Some(a) = (0..size).find(|&a| v[a as usize] < zero) {
        return Some((Axiom::R1, vec![SubsetMask(a)]));
    }
    for b in 0..size {
        for a in SubsetMask(b).submasks() {
            if v[a.0 as usize] > v[b as usize] {
                return Some((Axiom::R2, vec![a, SubsetMask(b)]));
            }
        }
    }
    for a in 0..size {
        for b in 0..size {
            let lhs = v[a as usize].clone() + v[b as usize].clone();
            let rhs = v[(a | b) as usize].clone() + v[(a & b) as usize].clone();
            if lhs < rhs {
                return Some((Axiom::R3, vec![SubsetMask(a), SubsetMask(b)]));
            }
        }
    }
    None
}

fn elemental_check<T: Exact>(v: &[T], n: usize) -> Option<(Axiom, Vec<SubsetMask>)> {
    if !v[0].is_zero() {
        return Some((Axiom::R1, vec![SubsetMask::EMPTY]));
    }
    let full = ((1u64 << n) - 1) as u32;
    for i in 0..n {
        let rest = full & !(1 << i);
        if v[rest as usize] > v[full as usize] {
            return Some((Axiom::R2, vec![SubsetMask(rest), SubsetMask(full)]));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (bi, bj) = (1u32 << i, 1u32 << j);
            for k in SubsetMask(full & !bi & !bj).submasks() {
                let k = k.0;
                let lhs = v[(k | bi) as usize].clone() + v[(k | bj) as usize].clone();
                let rhs = v[k as usize].clone() + v[(k | bi | bj) as usize].clone();
                if lhs < rhs {
                    return Some((Axiom::R3, vec![SubsetMask(k | bi), SubsetMask(k | bj)]));
                }
            }
        }
    }
    None
}

/// `J(A1,A2,A3,A4) = h12 + h13 + h14 + h23 + h24 − h1 − h2 − h34 − h123 − h124`,
/// where `hXY` is the rank of the union `A_X ∪ A_Y`.
pub fn ingleton_score(h: &RankVector, q: [SubsetMask; 4]) -> Result<Rational> {
    for a in q {
        h.ground().check(a)?;
    }
    let [a1, a2, a3, a4] = q;
    let r = |m: SubsetMask| h.at(m);
    Ok(
        r(a1.union(a2)) + r(a1.union(a3)) + r(a1.union(a4)) + r(a2.union(a3)) + r(a2.union(a4))
            - r(a1)
            - r(a2)
            - r(a3.union(a4))
            - r(a1.union(a2).union(a3))
            - r(a1.union(a2).union(a4)),
    )
}

#[inline]
fn ingleton_raw<T: Exact>(v: &[T], a1: u32, a2: u32, a3: u32, a4: u32) -> T {
    let g = |m: u32| v[m as usize].clone();
    let a12 = a1 | a2;
    g(a12) + g(a1 | a3) + g(a1 | a4) + g(a2 | a3) + g(a2 | a4)
        - g(a1)
        - g(a2)
        - g(a3 | a4)
        - g(a12 | a3)
        - g(a12 | a4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// All quadruples with `A1 ≤ A2` and `A3 ≤ A4` (as masks).
    Exhaustive,
    /// Seeded pseudo-random quadruples.
    Sampled { trials: u64, seed: u64 },
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanMode::Exhaustive => f.write_str("exhaustive"),
            ScanMode::Sampled { .. } => f.write_str("sampled"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IngletonReport {
    pub min_score: Rational,
    pub argmin: [SubsetMask; 4],
    pub quadruples_checked: u64,
    pub mode: ScanMode,
}

/// Minimum of the Ingleton expression over a set of quadruples.
///
/// Exhaustive mode visits `A1 ≤ A2` and `A3 ≤ A4` with `A1`, then `A2`,
/// `A3`, `A4` ascending, which covers every quadruple up to the two swap
/// symmetries of `J`. Sampled mode draws `4 · trials` masks from SplitMix64
/// seeded with `seed`, each mask being the top `n` bits of one 64-bit output,
/// and groups them into consecutive quadruples. In both modes the argmin is
/// the first minimal quadruple in visiting order.
pub fn ingleton_scan(h: &RankVector, mode: ScanMode) -> Result<IngletonReport> {
    let n = h.n();
    if n == 0 {
        return input("Ingleton scan needs at least one element");
    }
    let (argmin, checked) = match mode {
        ScanMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE {
                return Err(Error::Size(format!(
                    "exhaustive Ingleton scan is limited to {MAX_EXHAUSTIVE} elements, \
                     got {n}; use sampled mode"
                )));
            }
            let size = 1u64 << n;
            let pairs = size * (size + 1) / 2;
            let argmin = match h.scaled() {
                Some(s) => exhaustive(&s.values, n),
                None => exhaustive(h.values(), n),
            };
            (argmin, pairs * pairs)
        }
        ScanMode::Sampled { trials, seed } => {
            if trials == 0 {
                return input("sampled scan needs at least one trial");
            }
            let argmin = match h.scaled() {
                Some(s) => sampled(&s.values, n, trials, seed),
                None => sampled(h.values(), n, trials, seed),
            };
            (argmin, trials)
        }
    };
    let argmin = argmin.map(SubsetMask);
    Ok(IngletonReport {
        min_score: ingleton_score(h, argmin)?,
        argmin,
        quadruples_checked: checked,
        mode,
    })
}

fn exhaustive<T: Exact>(v: &[T], n: usize) -> [u32; 4] {
    let size = 1u32 << n;
    // Each worker returns the first minimum of its slice; reducing by
    // (score, quadruple) keeps the sequential visiting order's answer.
    let best = (0..size)
        .into_par_iter()
        .map(|a1| {
            let mut best: Option<(T, [u32; 4])> = None;
            for a2 in a1..size {
                for a3 in 0..size {
                    for a4 in a3..size {
                        let j = ingleton_raw(v, a1, a2, a3, a4);
                        if best.as_ref().is_none_or(|(b, _)| j < *b) {
                            best = Some((j, [a1, a2, a3, a4]));
                        }
                    }
                }
            }
            best.expect("a1 ranges over a nonempty slice")
        })
        .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)))
        .expect("at least one quadruple");
    best.1
}

fn sampled<T: Exact>(v: &[T], n: usize, trials: u64, seed: u64) -> [u32; 4] {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let shift = 64 - n as u32;
    let mut draw = move || (rng.next_u64() >> shift) as u32;
    let mut best: Option<(T, [u32; 4])> = None;
    for _ in 0..trials {
        let q = [draw(), draw(), draw(), draw()];
        let j = ingleton_raw(v, q[0], q[1], q[2], q[3]);
        if best.as_ref().is_none_or(|(b, _)| j < *b) {
            best = Some((j, q));
        }
    }
    best.expect("trials > 0").1
}

/// `Σ c · h(∪ tuple)` over the terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearRankExpr {
    pub terms: Vec<(Rational, Vec<SubsetMask>)>,
}

impl LinearRankExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, coeff: Rational, sets: Vec<SubsetMask>) -> Self {
        self.terms.push((coeff, sets));
        self
    }

    /// The Ingleton expression at a fixed quadruple.
    pub fn ingleton(q: [SubsetMask; 4]) -> Self {
        let [a1, a2, a3, a4] = q;
        let (one, minus) = (rational::int(1), rational::int(-1));
        let mut e = Self::new();
        for pair in [[a1, a2], [a1, a3], [a1, a4], [a2, a3], [a2, a4]] {
            e = e.term(one.clone(), pair.to_vec());
        }
        e.term(minus.clone(), vec![a1])
            .term(minus.clone(), vec![a2])
            .term(minus.clone(), vec![a3, a4])
            .term(minus.clone(), vec![a1, a2, a3])
            .term(minus, vec![a1, a2, a4])
    }

    /// `h(A) + h(B) − h(A∪B) − h(A∩B)`.
    pub fn submodularity(a: SubsetMask, b: SubsetMask) -> Self {
        let (one, minus) = (rational::int(1), rational::int(-1));
        Self::new()
            .term(one.clone(), vec![a])
            .term(one, vec![b])
            .term(minus.clone(), vec![a, b])
            .term(minus, vec![a.intersection(b)])
    }
}

pub fn eval_expr(h: &RankVector, e: &LinearRankExpr) -> Result<Rational> {
    let mut total = Rational::zero();
    for (c, sets) in &e.terms {
        let mut u = SubsetMask::EMPTY;
        for &s in sets {
            h.ground().check(s)?;
            u = u.union(s);
        }
        total += c * h.at(u);
    }
    Ok(total)
}

/// `min h(N) / max h(D)` over the numerator and denominator sets.
pub fn dfz_ratio(h: &RankVector, nums: &[SubsetMask], dens: &[SubsetMask]) -> Result<Rational> {
    if nums.is_empty() || dens.is_empty() {
        return input("both numerator and denominator sets are required");
    }
    let mut lo: Option<&Rational> = None;
    for &a in nums {
        let r = h.rank(a)?;
        if lo.is_none_or(|l| r < l) {
            lo = Some(r);
        }
    }
    let mut hi: Option<&Rational> = None;
    for &b in dens {
        let r = h.rank(b)?;
        if !r.is_positive() {
            return Err(Error::Division);
        }
        if hi.is_none_or(|m| r > m) {
            hi = Some(r);
        }
    }
    Ok(lo.expect("nonempty") / hi.expect("nonempty"))
}
