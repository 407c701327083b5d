//! Text formats.
//!
//! `rankvec v1`:
//!
//! ```text
//! rankvec <n>
//! <mask in hex> <num>/<den>
//! ```
//!
//! one line per subset; subsets left out read as 0. The writer emits all
//! `2^n` entries in ascending mask order.
//!
//! `arr v1`:
//!
//! ```text
//! arr <field> <ambient-dim> <k>
//! subspace <name> <r>
//! <d field elements>      (r rows)
//! ```
//!
//! Each subspace is the span of its rows. Elements are coefficient tuples
//! `[c0,c1,...]`; prime-field elements may also be bare integers. Blank lines
//! and lines starting with `#` are ignored by both readers.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::lattice::{GroundSet, RankVector, SubsetMask};
use crate::linalg::Subspace;
use crate::rational::{self, Rational};
use crate::represent::Arrangement;

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_rankvec(h: &RankVector) -> String {
    let mut out = format!("rankvec {}\n", h.n());
    for a in h.masks() {
        let v = h.at(a);
        writeln!(out, "{:x} {}/{}", a, v.numer(), v.denom()).expect("string write");
    }
    out
}

pub fn read_rankvec(text: &str) -> Result<RankVector> {
    let mut lines = content_lines(text);
    let Some((ln, header)) = lines.next() else {
        return parse_err(0, "empty rankvec file");
    };
    let n: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["rankvec", n] => match n.parse() {
            Ok(n) => n,
            Err(_) => return parse_err(ln, format!("bad element count {n:?}")),
        },
        _ => return parse_err(ln, "expected `rankvec <n>`"),
    };
    let ground = GroundSet::new(n)?;
    let mut values = vec![Rational::zero(); ground.subset_count()];
    let mut given = vec![false; values.len()];
    for (ln, line) in lines {
        let [mask, value] = line.split_whitespace().collect::<Vec<_>>()[..] else {
            return parse_err(ln, "expected `<mask> <value>`");
        };
        let digits = mask.strip_prefix("0x").unwrap_or(mask);
        let Ok(m) = u32::from_str_radix(digits, 16) else {
            return parse_err(ln, format!("bad mask {mask:?}"));
        };
        if ground.check(SubsetMask(m)).is_err() {
            return parse_err(ln, format!("mask {mask} out of range for {n} elements"));
        }
        if std::mem::replace(&mut given[m as usize], true) {
            return parse_err(ln, format!("mask {mask} given twice"));
        }
        values[m as usize] = match rational::parse(value) {
            Ok(v) => v,
            Err(Error::Division) => return parse_err(ln, "zero denominator"),
            Err(_) => return parse_err(ln, format!("bad value {value:?}")),
        };
    }
    RankVector::new(ground, values)
}

pub fn write_arrangement(arr: &Arrangement) -> String {
    let f = arr.field();
    let mut out = format!("arr {} {} {}\n", f, arr.ambient_dim(), arr.len());
    for (i, s) in arr.subspaces().iter().enumerate() {
        writeln!(out, "subspace {} {}", arr.ground().label(i), s.dim()).expect("string write");
        for row in s.basis().row_iter() {
            let cells: Vec<String> = row.iter().map(|&v| f.format_element(v)).collect();
            writeln!(out, "{}", cells.join(" ")).expect("string write");
        }
    }
    out
}

pub fn read_arrangement(text: &str) -> Result<Arrangement> {
    let mut lines = content_lines(text);
    let Some((ln, header)) = lines.next() else {
        return parse_err(0, "empty arr file");
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (field, d, k) = match parts.as_slice() {
        ["arr", field, d, k] => {
            let field = Field::parse(field).or_else(|e| parse_err(ln, e.to_string()))?;
            let (Ok(d), Ok(k)) = (d.parse::<usize>(), k.parse::<usize>()) else {
                return parse_err(ln, "bad dimension or count");
            };
            (field, d, k)
        }
        _ => return parse_err(ln, "expected `arr <field> <ambient-dim> <k>`"),
    };
    let mut names = Vec::with_capacity(k);
    let mut subspaces = Vec::with_capacity(k);
    for _ in 0..k {
        let Some((ln, line)) = lines.next() else {
            return parse_err(0, format!("expected {k} subspaces, found {}", names.len()));
        };
        let [kw, name, r] = line.split_whitespace().collect::<Vec<_>>()[..] else {
            return parse_err(ln, "expected `subspace <name> <r>`");
        };
        if kw != "subspace" {
            return parse_err(ln, "expected `subspace <name> <r>`");
        }
        let Ok(r) = r.parse::<usize>() else {
            return parse_err(ln, format!("bad row count {r:?}"));
        };
        let mut rows = Vec::with_capacity(r);
        for _ in 0..r {
            let Some((ln, line)) = lines.next() else {
                return parse_err(0, format!("subspace {name} is missing rows"));
            };
            let row = line
                .split_whitespace()
                .map(|t| field.parse_element(t))
                .collect::<Result<Vec<u32>>>()
                .or_else(|e| parse_err(ln, e.to_string()))?;
            if row.len() != d {
                return parse_err(ln, format!("expected {d} entries, got {}", row.len()));
            }
            rows.push(row);
        }
        names.push(name.to_string());
        subspaces.push(Subspace::span(field.clone(), d, &rows)?);
    }
    if let Some((ln, _)) = lines.next() {
        return parse_err(ln, "trailing content after the last subspace");
    }
    Arrangement::new(field, d, subspaces, Some(names))
}

/// Renders a rational as `num/den` with the sign on the numerator.
pub fn fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
