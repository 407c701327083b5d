//! Matroid recognition, circuits, connectivity, and the equality set of a
//! matroid: every `H(A|B) = 0` and `I(A;B) = 0` that holds in it.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{input, Error, Result};
use crate::inequality::is_polymatroid;
use crate::lattice::{RankVector, SubsetMask};
use crate::rational::{self, Rational};

/// Integer ranks of a matroid, or a precondition error.
fn matroid_ranks(h: &RankVector) -> Result<Vec<i64>> {
    if !is_matroid(h)? {
        return Err(Error::Precondition("rank vector is not a matroid".into()));
    }
    Ok(h.values()
        .iter()
        .map(|v| v.to_integer().to_i64().expect("bounded by n"))
        .collect())
}

/// Integral ranks with `h(A) ≤ |A|`. The input must be a polymatroid.
pub fn is_matroid(h: &RankVector) -> Result<bool> {
    if !is_polymatroid(h) {
        return Err(Error::Precondition(
            "rank vector is not a polymatroid".into(),
        ));
    }
    Ok(h.masks().all(|a| {
        let v = h.at(a);
        v.is_integer() && v <= &rational::int(a.len() as i64)
    }))
}

/// Minimal dependent sets, ordered by size and then by mask.
pub fn circuits(h: &RankVector) -> Result<Vec<SubsetMask>> {
    let r = matroid_ranks(h)?;
    Ok(circuits_of(&r))
}

fn circuits_of(r: &[i64]) -> Vec<SubsetMask> {
    let mut out: Vec<SubsetMask> = (1..r.len() as u32)
        .map(SubsetMask)
        .filter(|c| {
            let size = c.len() as i64;
            // dependent, and dropping any element leaves an independent set
            r[c.0 as usize] == size - 1
                && c.elements()
                    .all(|e| r[(c.0 & !(1 << e)) as usize] == size - 1)
        })
        .collect();
    out.sort_by_key(|c| (c.len(), c.0));
    out
}

/// Every pair of elements lies in a common circuit.
///
/// The verdict is cross-checked against the separator criterion (no proper
/// nonempty `A` with `h(A) + h(X∖A) = h(X)`); a disagreement is an internal
/// error.
pub fn is_connected(h: &RankVector) -> Result<bool> {
    let r = matroid_ranks(h)?;
    let n = h.n();
    let mut shared = vec![vec![false; n]; n];
    for c in circuits_of(&r) {
        for i in c.elements() {
            for j in c.elements() {
                shared[i][j] = true;
            }
        }
    }
    let by_circuits = (0..n).all(|i| (i + 1..n).all(|j| shared[i][j]));
    let by_separators = separator(h).is_none();
    if by_circuits != by_separators {
        return Err(Error::Internal(
            "circuit and separator connectivity disagree".into(),
        ));
    }
    Ok(by_circuits)
}

/// Smallest proper nonempty `A` with `h(A) + h(X∖A) = h(X)`, if any.
pub fn separator(h: &RankVector) -> Option<SubsetMask> {
    let full = h.ground().full();
    (1..full.0)
        .map(SubsetMask)
        .find(|&a| h.at(a) + h.at(full.difference(a)) == *h.full_rank())
}

/// One equality of a matroid's equality set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    /// `H(A | B) = 0`.
    CondZero { a: SubsetMask, b: SubsetMask },
    /// `I(A ; B) = 0`.
    IndepZero { a: SubsetMask, b: SubsetMask },
}

impl Predicate {
    pub fn describe(&self, ground: &crate::lattice::GroundSet) -> String {
        match *self {
            Predicate::CondZero { a, b } => {
                format!("H({}|{})=0", ground.describe(a), ground.describe(b))
            }
            Predicate::IndepZero { a, b } => {
                format!("I({};{})=0", ground.describe(a), ground.describe(b))
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Predicate::CondZero { a, b } => write!(f, "H({a:x}|{b:x})=0"),
            Predicate::IndepZero { a, b } => write!(f, "I({a:x};{b:x})=0"),
        }
    }
}

/// First equality of `M` that fails in `g`, or `None` when `g` satisfies
/// all of them.
///
/// Pairs `(A, B)` are streamed without building the set: `B` ascending in
/// the outer loop, `A` ascending inside, and for each pair the conditional
/// form before the independence form.
pub fn equality_set_check(m: &RankVector, g: &RankVector) -> Result<Option<Predicate>> {
    if m.n() != g.n() {
        return input(format!(
            "ground sets differ: {} and {} elements",
            m.n(),
            g.n()
        ));
    }
    let mr = matroid_ranks(m)?;
    Ok(match g.scaled() {
        Some(s) => first_failure(&mr, &s.values),
        None => first_failure(&mr, g.values()),
    })
}

fn first_failure<T>(m: &[i64], g: &[T]) -> Option<Predicate>
where
    T: Clone + Zero + PartialEq + Sync + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let size = m.len() as u32;
    (0..size).into_par_iter().find_map_first(|b| {
        let bi = b as usize;
        for a in 0..size {
            let (ai, ab) = (a as usize, (a | b) as usize);
            if m[ab] == m[bi] && g[ab] != g[bi] {
                return Some(Predicate::CondZero {
                    a: SubsetMask(a),
                    b: SubsetMask(b),
                });
            }
            if m[ai] + m[bi] == m[ab] && g[ai].clone() + g[bi].clone() - g[ab].clone() != T::zero()
            {
                return Some(Predicate::IndepZero {
                    a: SubsetMask(a),
                    b: SubsetMask(b),
                });
            }
        }
        None
    })
}

/// The constant `c` with `g = c · M`, for a connected matroid `M` and a
/// rank vector `g` satisfying the equality set of `M`.
pub fn proportionality(m: &RankVector, g: &RankVector) -> Result<Rational> {
    if !is_connected(m)? {
        return Err(Error::Precondition("matroid is not connected".into()));
    }
    if let Some(p) = equality_set_check(m, g)? {
        return Err(Error::Precondition(format!(
            "g violates the equality {}",
            p.describe(m.ground())
        )));
    }
    let first = SubsetMask::singleton(0);
    let base = m.at(first);
    if !base.is_positive() {
        return Err(Error::Precondition("first element is a loop".into()));
    }
    let c = g.at(first) / base;
    if let Some(a) = m.masks().find(|&a| g.at(a) != &(m.at(a) * &c)) {
        return Err(Error::Verification(format!(
            "g({}) = {} but c·M = {}",
            m.ground().describe(a),
            rational::display(g.at(a)),
            rational::display(&(m.at(a) * &c))
        )));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::lattice::GroundSet;
    use crate::rational::{int, ratio};
    use crate::represent::Arrangement;
    use proptest::prelude::*;

    const FANO: [[u32; 3]; 7] = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [0, 1, 1],
        [1, 1, 1],
        [1, 0, 1],
    ];

    fn lines(p: u32, d: usize, vecs: &[Vec<u32>]) -> RankVector {
        let spans: Vec<Vec<Vec<u32>>> = vecs.iter().map(|v| vec![v.clone()]).collect();
        Arrangement::from_vectors(Field::prime(p).unwrap(), d, &spans, None)
            .unwrap()
            .rank_vector()
    }

    fn fano() -> RankVector {
        lines(2, 3, &FANO.iter().map(|v| v.to_vec()).collect::<Vec<_>>())
    }

    fn free(n: usize) -> RankVector {
        RankVector::from_fn(GroundSet::new(n).unwrap(), |a| int(a.len() as i64))
    }

    /// Minimal dependent sets by checking every proper subset.
    fn brute_circuits(h: &RankVector) -> Vec<SubsetMask> {
        let dependent = |a: SubsetMask| h.at(a) < &int(a.len() as i64);
        let mut out: Vec<SubsetMask> = h
            .masks()
            .filter(|&c| dependent(c) && c.submasks().all(|s| s == c || !dependent(s)))
            .collect();
        out.sort_by_key(|c| (c.len(), c.0));
        out
    }

    #[test]
    fn recognition() {
        assert!(is_matroid(&fano()).unwrap());
        assert!(!is_matroid(&fano().scale(&ratio(1, 2)).unwrap()).unwrap());
        let violator = RankVector::from_fn(GroundSet::new(4).unwrap(), |a| match a.len() {
            0 => int(0),
            1 => int(2),
            2 if a.0 == 0b1100 => int(4),
            2 => int(3),
            _ => int(4),
        });
        assert!(!is_matroid(&violator).unwrap());
        let not_poly = RankVector::from_integers(GroundSet::new(1).unwrap(), &[1, 1]).unwrap();
        assert!(matches!(is_matroid(&not_poly), Err(Error::Precondition(_))));
    }

    #[test]
    fn fano_circuits() {
        let h = fano();
        let c = circuits(&h).unwrap();
        assert_eq!(c, brute_circuits(&h));
        assert_eq!(c.len(), 14);
        assert_eq!(c.iter().filter(|c| c.len() == 3).count(), 7);
        assert!(c.contains(&SubsetMask(0b1011)));
        assert!(circuits(&free(5)).unwrap().is_empty());
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&fano()).unwrap());
        assert!(!is_connected(&free(3)).unwrap());
        assert!(is_connected(&free(1)).unwrap());
        assert_eq!(separator(&free(3)), Some(SubsetMask(1)));
    }

    #[test]
    fn equality_sets() {
        let h = fano();
        assert_eq!(equality_set_check(&h, &h).unwrap(), None);
        assert_eq!(
            equality_set_check(&h, &h.scale(&int(3)).unwrap()).unwrap(),
            None
        );
        let v = equality_set_check(&h, &free(7)).unwrap().unwrap();
        assert_eq!(
            v,
            Predicate::CondZero {
                a: SubsetMask(0b1000),
                b: SubsetMask(0b11)
            }
        );
        assert!(equality_set_check(&h, &free(6)).is_err());
    }

    #[test]
    fn proportional_scalings() {
        let h = fano();
        for c in [int(0), int(1), ratio(5, 2), ratio(7, 3)] {
            assert_eq!(proportionality(&h, &h.scale(&c).unwrap()).unwrap(), c);
        }
        assert!(matches!(
            proportionality(&free(3), &free(3)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            proportionality(&h, &free(7)),
            Err(Error::Precondition(_))
        ));
    }

    fn random_lines() -> impl Strategy<Value = RankVector> {
        (prop_oneof![Just(2u32), Just(3u32)], 1usize..=4, 1usize..=6).prop_flat_map(|(p, d, n)| {
            proptest::collection::vec(proptest::collection::vec(0..p, d), n)
                .prop_map(move |vecs| lines(p, d, &vecs))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn circuits_match_brute_force(h in random_lines()) {
            prop_assert_eq!(circuits(&h).unwrap(), brute_circuits(&h));
            // is_connected errors if the two criteria disagree
            is_connected(&h).unwrap();
        }

        #[test]
        fn scaling_keeps_verdict(h in random_lines(), g in random_lines(), c in 1i64..9) {
            prop_assume!(h.n() == g.n());
            let plain = equality_set_check(&h, &g).unwrap().is_none();
            let scaled = equality_set_check(&h, &g.scale(&ratio(c, 3)).unwrap()).unwrap().is_none();
            prop_assert_eq!(plain, scaled);
        }
    }
}
