//! All subspaces of a small `GF(q)^d`, and the rank vectors of every
//! `n`-tuple of them.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{input, Error, Result};
use crate::gf::Field;
use crate::lattice::{GroundSet, RankVector};
use crate::linalg::Subspace;
use crate::represent::Arrangement;

use super::{Generator, GeneratorSet};

pub const MAX_GEN_ELEMENTS: usize = 4;
pub const MAX_GEN_DIM: usize = 4;
/// Cap on `(number of subspaces)^n`.
pub const MAX_TUPLES: u64 = 1 << 31;

/// Every subspace of `GF(q)^d`, ordered by dimension and then by basis.
pub fn all_subspaces(field: &Field, d: usize) -> Result<Vec<Subspace>> {
    let q = field.order() as u64;
    if d > MAX_GEN_DIM || q.pow(d as u32) > 1 << 16 {
        return Err(Error::Size(format!(
            "subspace enumeration of {field}^{d} is too large"
        )));
    }
    // one representative per line: first nonzero coordinate equal to 1
    let mut points = Vec::new();
    for code in 1..q.pow(d as u32) {
        let mut c = code;
        let v: Vec<u32> = (0..d)
            .map(|_| {
                let x = (c % q) as u32;
                c /= q;
                x
            })
            .collect();
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            points.push(v);
        }
    }
    let zero = Subspace::zero(field.clone(), d);
    let mut seen: FxHashSet<Subspace> = FxHashSet::default();
    seen.insert(zero.clone());
    let mut all = vec![zero.clone()];
    let mut frontier = vec![zero];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for p in &points {
                if s.contains_vector(p) {
                    continue;
                }
                let mut e = s.echelon();
                e.insert(p);
                let t = e.into_subspace();
                if seen.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.sort_by_cached_key(|s| {
        (
            s.dim(),
            s.basis().row_iter().flatten().copied().collect::<Vec<_>>(),
        )
    });
    Ok(all)
}

/// Rank vectors of all `n`-tuples of subspaces of `GF(q)^d`, deduplicated.
/// Each generator keeps the lexicographically first tuple producing it, and
/// generators appear in the order of those tuples.
pub fn enumerate_generators(n: usize, field: &Field, d: usize) -> Result<GeneratorSet> {
    if n == 0 {
        return input("at least one element is required");
    }
    if n > MAX_GEN_ELEMENTS || d > MAX_GEN_DIM {
        return Err(Error::Size(format!(
            "generator enumeration is limited to n ≤ {MAX_GEN_ELEMENTS} and d ≤ {MAX_GEN_DIM}"
        )));
    }
    let subs = all_subspaces(field, d)?;
    let s = subs.len();
    let tuples = (s as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_TUPLES)
        .ok_or_else(|| Error::Size(format!("{s}^{n} subspace tuples exceed the limit")))?;

    let index: FxHashMap<&Subspace, u16> = subs
        .iter()
        .enumerate()
        .map(|(i, x)| (x, i as u16))
        .collect();
    let mut join = vec![0u16; s * s];
    for i in 0..s {
        for j in 0..s {
            let sum = subs[i].sum(&subs[j]).expect("same ambient space");
            join[i * s + j] = index[&sum];
        }
    }
    let dims: Vec<u64> = subs.iter().map(|x| x.dim() as u64).collect();
    let size = 1usize << n;

    // ranks packed four bits per subset (dimensions are at most 4)
    let chunks: Vec<Vec<(u64, Vec<u16>)>> = (0..s as u16)
        .into_par_iter()
        .map(|first| {
            let mut local = Vec::new();
            let mut seen = FxHashSet::default();
            let mut t = vec![0u16; n];
            t[0] = first;
            let mut idx = vec![0u16; size];
            loop {
                let mut key = 0u64;
                for mask in 1..size {
                    let low = mask.trailing_zeros() as usize;
                    let rest = mask & (mask - 1);
                    idx[mask] = if rest == 0 {
                        t[low]
                    } else {
                        join[idx[rest] as usize * s + t[low] as usize]
                    };
                    key |= dims[idx[mask] as usize] << (4 * mask);
                }
                if seen.insert(key) {
                    local.push((key, t.clone()));
                }
                // odometer over positions 1..n, last fastest
                let mut pos = n;
                loop {
                    pos -= 1;
                    if pos == 0 {
                        return local;
                    }
                    t[pos] += 1;
                    if (t[pos] as usize) < s {
                        break;
                    }
                    t[pos] = 0;
                }
            }
        })
        .collect();

    let ground = GroundSet::new(n)?;
    let mut seen = FxHashSet::default();
    let mut generators = Vec::new();
    for (key, t) in chunks.into_iter().flatten() {
        if !seen.insert(key) {
            continue;
        }
        let values: Vec<i64> = (0..size).map(|m| (key >> (4 * m) & 15) as i64).collect();
        let rank = RankVector::from_integers(ground.clone(), &values)?;
        let source = Arrangement::new(
            field.clone(),
            d,
            t.iter().map(|&i| subs[i as usize].clone()).collect(),
            None,
        )?;
        generators.push(Generator {
            rank,
            source: Some(source),
        });
    }
    Ok(GeneratorSet {
        ground,
        generators,
        tuples,
    })
}
