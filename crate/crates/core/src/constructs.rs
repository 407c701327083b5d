//! Named constructions: the Fano arrangement on `X1`, the 13-element
//! arrangement on `X2`, their equality lists, the ε-perturbation, direct
//! sums, `Φ` and `Φ^ε`, and the case analysis behind the fact that the
//! ε-perturbation of an Ingletonian polymatroid is Ingletonian.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{input, Error, Result};
use crate::gf::Field;
use crate::inequality::ingleton_score;
use crate::lattice::{GroundSet, RankVector, SubsetMask, MAX_ELEMENTS};
use crate::rational::{self, Rational};
use crate::represent::Arrangement;

pub const X1_LABELS: [&str; 7] = ["Y1", "Y2", "Y3", "W1", "W2", "W3", "W4"];

pub const X2_LABELS: [&str; 13] = [
    "Z1", "Z2", "Z3", "Z4", "Z5", "V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8",
];

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

pub fn x1_ground() -> GroundSet {
    GroundSet::with_labels(labels(&X1_LABELS)).expect("distinct labels")
}

pub fn x2_ground() -> GroundSet {
    GroundSet::with_labels(labels(&X2_LABELS)).expect("distinct labels")
}

/// Lines spanned by sums of unit vectors; `sums[i]` lists the unit
/// vectors (0-based) adding up to the generator of line `i`.
fn lines_from_sums(field: &Field, d: usize, sums: &[&[usize]], names: &[&str]) -> Arrangement {
    let spans: Vec<Vec<Vec<u32>>> = sums
        .iter()
        .map(|s| {
            let mut v = vec![0u32; d];
            for &i in s.iter() {
                v[i] = 1;
            }
            vec![v]
        })
        .collect();
    Arrangement::from_vectors(field.clone(), d, &spans, Some(labels(names)))
        .expect("fixed construction is well formed")
}

/// `Y_i = ⟨u_i⟩`, `W1 = ⟨u1+u2⟩`, `W2 = ⟨u2+u3⟩`, `W3 = ⟨u1+u2+u3⟩`,
/// `W4 = ⟨u1+u3⟩` in dimension 3. Over characteristic 2 this is the Fano
/// matroid.
pub fn fano_x1(field: &Field) -> Arrangement {
    lines_from_sums(
        field,
        3,
        &[&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 1, 2], &[0, 2]],
        &X1_LABELS,
    )
}

/// `Z_i = ⟨u_i⟩` and eight lines `V1..V8` in dimension 5.
pub fn dfz_x2(field: &Field) -> Arrangement {
    lines_from_sums(
        field,
        5,
        &[
            &[0],
            &[1],
            &[2],
            &[3],
            &[4],
            &[0, 1, 2],
            &[2, 3, 4],
            &[0, 1],
            &[0, 2],
            &[1, 2],
            &[2, 3],
            &[2, 4],
            &[3, 4],
        ],
        &X2_LABELS,
    )
}

/// An equality constraint on a rank vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equality {
    /// `h(∪ parts) = Σ h(part)`.
    Additive(Vec<SubsetMask>),
    /// `H(a | given) = 0`.
    CondZero { a: SubsetMask, given: SubsetMask },
}

impl Equality {
    /// Left side minus right side; zero iff the equality holds.
    pub fn residual(&self, h: &RankVector) -> Result<Rational> {
        match self {
            Equality::Additive(parts) => {
                let mut union = SubsetMask::EMPTY;
                let mut total = Rational::zero();
                for &p in parts {
                    total += h.rank(p)?;
                    union = union.union(p);
                }
                Ok(h.rank(union)? - total)
            }
            Equality::CondZero { a, given } => h.cond_entropy(*a, *given),
        }
    }

    pub fn holds(&self, h: &RankVector) -> Result<bool> {
        Ok(self.residual(h)?.is_zero())
    }

    pub fn describe(&self, ground: &GroundSet) -> String {
        match self {
            Equality::Additive(parts) => {
                let union = parts.iter().fold(SubsetMask::EMPTY, |u, &p| u.union(p));
                let sum: Vec<String> = parts
                    .iter()
                    .map(|&p| format!("H({})", ground.describe(p)))
                    .collect();
                format!("H({}) = {}", ground.describe(union), sum.join(" + "))
            }
            Equality::CondZero { a, given } => {
                format!("H({}|{}) = 0", ground.describe(*a), ground.describe(*given))
            }
        }
    }
}

fn additive(g: &GroundSet, names: &[&str]) -> Equality {
    Equality::Additive(names.iter().map(|n| g.mask_of(&[n])).collect())
}

fn cond(g: &GroundSet, a: &str, given: &[&str]) -> Equality {
    Equality::CondZero {
        a: g.mask_of(&[a]),
        given: g.mask_of(given),
    }
}

/// The 8 equalities characterising the Fano arrangement.
pub fn equalities_x1() -> Vec<Equality> {
    let g = x1_ground();
    vec![
        additive(&g, &["Y1", "Y2", "Y3"]),
        cond(&g, "W1", &["Y1", "Y2"]),
        cond(&g, "W2", &["Y2", "Y3"]),
        cond(&g, "W3", &["Y1", "W2"]),
        cond(&g, "W4", &["W1", "W2"]),
        cond(&g, "Y1", &["Y3", "W4"]),
        cond(&g, "Y2", &["W3", "W4"]),
        cond(&g, "Y3", &["W1", "W3"]),
    ]
}

/// The 16 equalities characterising the 13-element arrangement.
pub fn equalities_x2() -> Vec<Equality> {
    let g = x2_ground();
    vec![
        additive(&g, &["Z1", "Z2", "Z3", "Z4", "Z5"]),
        cond(&g, "V1", &["Z1", "Z2", "Z3"]),
        cond(&g, "V2", &["Z3", "Z4", "Z5"]),
        cond(&g, "V3", &["Z1", "Z2"]),
        cond(&g, "V4", &["Z1", "Z3"]),
        cond(&g, "V5", &["Z2", "Z3"]),
        cond(&g, "V6", &["Z3", "Z4"]),
        cond(&g, "V7", &["Z3", "Z5"]),
        cond(&g, "V8", &["Z4", "Z5"]),
        cond(&g, "Z1", &["V1", "V5"]),
        cond(&g, "Z2", &["V1", "V4"]),
        cond(&g, "Z3", &["V1", "V3"]),
        cond(&g, "Z3", &["V3", "V4", "V5", "V6", "V7", "V8"]),
        cond(&g, "Z3", &["V2", "V8"]),
        cond(&g, "Z4", &["V2", "V7"]),
        cond(&g, "Z5", &["V2", "V6"]),
    ]
}

/// `g(A) = min(h(A), h(X) − ε)` for `0 ≤ ε ≤ h(X)`.
pub fn epsilon_perturb(h: &RankVector, eps: &Rational) -> Result<RankVector> {
    let full = h.full_rank();
    if eps.is_negative() || eps > full {
        return input(format!(
            "ε = {} must lie in [0, {}]",
            rational::display(eps),
            rational::display(full)
        ));
    }
    let cap = full - eps;
    Ok(RankVector::from_fn(h.ground().clone(), |a| {
        let v = h.at(a);
        if *v > cap {
            cap.clone()
        } else {
            v.clone()
        }
    }))
}

/// `Φ(A) = h1(A ∩ X1) + h2(A ∩ X2)` on the concatenated ground set.
pub fn direct_sum(h1: &RankVector, h2: &RankVector) -> Result<RankVector> {
    let (n1, n2) = (h1.n(), h2.n());
    if n1 + n2 > MAX_ELEMENTS {
        return Err(Error::Size(format!(
            "direct sum on {} elements exceeds {MAX_ELEMENTS}",
            n1 + n2
        )));
    }
    let ground = if h1.ground().labels().is_some() || h2.ground().labels().is_some() {
        let mut ls: Vec<String> = (0..n1).map(|i| h1.ground().label(i)).collect();
        ls.extend((0..n2).map(|i| h2.ground().label(i)));
        GroundSet::with_labels(ls)?
    } else {
        GroundSet::new(n1 + n2)?
    };
    let low = h1.ground().full().0;
    Ok(RankVector::from_fn(ground, |a| {
        h1.at(SubsetMask(a.0 & low)) + h2.at(SubsetMask(a.0 >> n1))
    }))
}

/// `Φ` over the given fields for `X1` and `X2`.
pub fn phi(field_x1: &Field, field_x2: &Field) -> Result<RankVector> {
    direct_sum(
        &fano_x1(field_x1).rank_vector(),
        &dfz_x2(field_x2).rank_vector(),
    )
}

/// `Φ^ε` with `X1` over GF(2) and `X2` over GF(3).
pub fn phi_eps(eps: &Rational) -> Result<RankVector> {
    phi_eps_with(eps, &Field::prime(2)?, &Field::prime(3)?)
}

/// `Φ^ε` for `0 < ε ≤ min(Φ(X1), Φ(X2))`. Checks on the way out that the
/// perturbation leaves both restrictions untouched.
pub fn phi_eps_with(eps: &Rational, field_x1: &Field, field_x2: &Field) -> Result<RankVector> {
    let h1 = fano_x1(field_x1).rank_vector();
    let h2 = dfz_x2(field_x2).rank_vector();
    let bound = h1.full_rank().min(h2.full_rank()).clone();
    if !eps.is_positive() || *eps > bound {
        return input(format!(
            "ε = {} must lie in (0, {}]",
            rational::display(eps),
            rational::display(&bound)
        ));
    }
    let out = epsilon_perturb(&direct_sum(&h1, &h2)?, eps)?;
    let x1 = SubsetMask((1 << h1.n()) - 1);
    let x2 = SubsetMask(out.ground().full().0 & !x1.0);
    if out.restrict(x1)?.values() != h1.values() || out.restrict(x2)?.values() != h2.values() {
        return Err(Error::Internal("Φ^ε changed a restriction".into()));
    }
    Ok(out)
}

/// Index sets of the quadruple, as 4-bit masks over `{1,2,3,4}`.
mod idx {
    pub const S1: u8 = 0b0001;
    pub const S2: u8 = 0b0010;
    pub const P12: u8 = 0b0011;
    pub const P13: u8 = 0b0101;
    pub const P23: u8 = 0b0110;
    pub const P14: u8 = 0b1001;
    pub const P24: u8 = 0b1010;
    pub const P34: u8 = 0b1100;
    pub const T123: u8 = 0b0111;
    pub const T124: u8 = 0b1011;
    pub const T134: u8 = 0b1101;
    pub const T234: u8 = 0b1110;
    /// Positive terms of the Ingleton expression.
    pub const PLUS: [u8; 5] = [P12, P13, P23, P14, P24];
    /// Negative terms of the Ingleton expression.
    pub const MINUS: [u8; 5] = [S1, S2, P34, T123, T124];
}

/// Which case of the argument applies to a quadruple, determined by the
/// positive Ingleton terms whose rank reaches the perturbation cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PerturbationCase {
    /// No positive term is capped.
    Case1,
    /// Exactly one positive term is capped.
    Case2,
    /// `{13, 23}` or `{14, 24}`.
    Case3,
    /// `{12, x}`.
    Case4,
    /// `{13, 24}` or `{14, 23}`.
    Case5,
    /// `{13, 14}` or `{23, 24}`.
    Case6,
    /// Three or more positive terms capped.
    Case7,
}

impl PerturbationCase {
    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for PerturbationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}", self.number())
    }
}

/// Rank values of the 16 unions of a quadruple.
fn quad_values(h: &RankVector, q: [SubsetMask; 4]) -> Result<Vec<Rational>> {
    for a in q {
        h.ground().check(a)?;
    }
    Ok((0u8..16)
        .map(|s| {
            let u = (0..4)
                .filter(|i| s >> i & 1 == 1)
                .fold(SubsetMask::EMPTY, |u, i| u.union(q[i]));
            h.at(u).clone()
        })
        .collect())
}

fn check_eps(h: &RankVector, eps: &Rational) -> Result<Rational> {
    let full = h.full_rank();
    if eps.is_negative() || eps > full {
        return input(format!("ε = {} out of range", rational::display(eps)));
    }
    Ok(full - eps)
}

/// Positive Ingleton terms with `h ≥ h(X) − ε`, as a set of index masks.
fn capped_terms(hv: &[Rational], cap: &Rational) -> Vec<u8> {
    idx::PLUS
        .iter()
        .copied()
        .filter(|&t| hv[t as usize] >= *cap)
        .collect()
}

fn classify(capped: &[u8]) -> Result<PerturbationCase> {
    use idx::*;
    use PerturbationCase::*;
    let has = |t: u8| capped.contains(&t);
    Ok(match capped.len() {
        0 => Case1,
        1 => Case2,
        2 if has(P12) => Case4,
        2 if (has(P13) && has(P23)) || (has(P14) && has(P24)) => Case3,
        2 if (has(P13) && has(P24)) || (has(P14) && has(P23)) => Case5,
        2 if (has(P13) && has(P14)) || (has(P23) && has(P24)) => Case6,
        3..=5 => Case7,
        _ => {
            return Err(Error::Internal(format!(
                "unclassifiable capped pattern {capped:?}"
            )))
        }
    })
}

/// Case of the argument for the quadruple under the ε-perturbation of `h`.
pub fn perturbation_case(
    h: &RankVector,
    eps: &Rational,
    q: [SubsetMask; 4],
) -> Result<PerturbationCase> {
    let cap = check_eps(h, eps)?;
    let hv = quad_values(h, q)?;
    classify(&capped_terms(&hv, &cap))
}

/// Outcome of re-deriving `J_g ≥ 0` along the case's argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseCheck {
    pub case: PerturbationCase,
    /// Every inequality of the case's chain holds.
    pub chain_holds: bool,
    /// `J_g` at the quadruple.
    pub score: Rational,
}

fn sum(v: &[Rational], terms: &[u8]) -> Rational {
    terms
        .iter()
        .fold(Rational::zero(), |acc, &t| acc + &v[t as usize])
}

fn ge(v: &[Rational], lhs: &[u8], rhs: &[u8]) -> bool {
    sum(v, lhs) >= sum(v, rhs)
}

/// Re-derives the Ingleton inequality for the ε-perturbation `g` of `h` at
/// one quadruple by the steps of the matching case.
///
/// Cases 1 and 2 compare `g` against `h` and need `J_h ≥ 0` at the same
/// quadruple. From case 3 on, the capped positive terms equal the cap, which
/// bounds any negative term, and the remaining positive terms dominate the
/// remaining negative ones by a polymatroid inequality on `g`.
pub fn check_perturbation_case(
    h: &RankVector,
    eps: &Rational,
    q: [SubsetMask; 4],
) -> Result<CaseCheck> {
    use idx::*;
    use PerturbationCase::*;
    let cap = check_eps(h, eps)?;
    let hv = quad_values(h, q)?;
    let gv: Vec<Rational> = hv.iter().map(|v| v.min(&cap).clone()).collect();
    let capped = capped_terms(&hv, &cap);
    let case = classify(&capped)?;
    let j_h = sum(&hv, &PLUS) - sum(&hv, &MINUS);
    let has = |t: u8| capped.contains(&t);
    let rest: Vec<u8> = PLUS.iter().copied().filter(|t| !has(*t)).collect();

    // every negative term in `covered` is at most the cap that each capped
    // positive term attains
    let cap_covers = |covered: &[u8]| {
        covered.len() == capped.len()
            && capped.iter().all(|&t| gv[t as usize] == cap)
            && covered.iter().all(|&t| gv[t as usize] <= cap)
    };

    let chain_holds = match case {
        Case1 => {
            sum(&gv, &PLUS) == sum(&hv, &PLUS)
                && sum(&gv, &MINUS) <= sum(&hv, &MINUS)
                && !j_h.is_negative()
        }
        Case2 => {
            let p = capped[0];
            let t = if p == P14 || p == P24 { T124 } else { T123 };
            sum(&gv, &PLUS) == sum(&hv, &PLUS) - &hv[p as usize] + &cap
                && sum(&gv, &MINUS) <= sum(&hv, &MINUS) - &hv[t as usize] + &cap
                && hv[p as usize] <= hv[t as usize]
                && !j_h.is_negative()
        }
        Case3 if has(P13) => ge(&gv, &rest, &[S1, S2, T124]) && cap_covers(&[P34, T123]),
        Case3 => ge(&gv, &rest, &[S1, S2, T123]) && cap_covers(&[P34, T124]),
        Case4 => ge(&gv, &rest, &[S1, S2, P34]) && cap_covers(&[T123, T124]),
        Case5 if has(P13) => ge(&gv, &rest, &[S1, S2, T123]) && cap_covers(&[P34, T124]),
        Case5 => ge(&gv, &rest, &[S1, S2, T124]) && cap_covers(&[P34, T123]),
        Case6 => {
            let t = if has(P13) { T234 } else { T134 };
            ge(&gv, &rest, &[S1, S2, t]) && ge(&gv, &[t], &[P34]) && cap_covers(&[T123, T124])
        }
        Case7 => match rest.as_slice() {
            [] => cap_covers(&MINUS),
            [r] => {
                let single = if r & S1 != 0 { S1 } else { S2 };
                let others: Vec<u8> = MINUS.iter().copied().filter(|&t| t != single).collect();
                ge(&gv, &[*r], &[single]) && cap_covers(&others)
            }
            [P13, P14] => {
                ge(&gv, &[P13, P14], &[S1, T134])
                    && ge(&gv, &[T134], &[P34])
                    && cap_covers(&[S2, T123, T124])
            }
            [P23, P24] => {
                ge(&gv, &[P23, P24], &[S2, T234])
                    && ge(&gv, &[T234], &[P34])
                    && cap_covers(&[S1, T123, T124])
            }
            [r1, r2] => {
                // one term contains index 1, the other index 2
                let (a, b) = if r1 & S1 != 0 && r2 & S2 != 0 {
                    (*r1, *r2)
                } else {
                    (*r2, *r1)
                };
                ge(&gv, &[a], &[S1]) && ge(&gv, &[b], &[S2]) && cap_covers(&[P34, T123, T124])
            }
            _ => unreachable!("at least three of five terms are capped"),
        },
    };
    let score = sum(&gv, &PLUS) - sum(&gv, &MINUS);
    debug_assert_eq!(
        score,
        ingleton_score(&epsilon_perturb(h, eps)?, q)?,
        "quadruple values disagree with the perturbed vector"
    );
    Ok(CaseCheck {
        case,
        chain_holds,
        score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{
        check_polymatroid, ingleton_scan, is_polymatroid, CheckMode, ScanMode,
    };
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn fano_characteristic() {
        let g = x1_ground();
        let w124 = g.mask_of(&["W1", "W2", "W4"]);
        let h2 = fano_x1(&gf(2)).rank_vector();
        let h3 = fano_x1(&gf(3)).rank_vector();
        assert_eq!(h2.at(w124), &int(2));
        assert_eq!(h3.at(w124), &int(3));
        assert_eq!(h2.full_rank(), &int(3));
        let w4 = g.mask_of(&["W4"]);
        let w12 = g.mask_of(&["W1", "W2"]);
        assert_eq!(h2.cond_entropy(w4, w12).unwrap(), int(0));
        assert_eq!(h3.cond_entropy(w4, w12).unwrap(), int(1));
    }

    #[test]
    fn x2_characteristic() {
        let g = x2_ground();
        let z3 = g.mask_of(&["Z3"]);
        let v38 = g.mask_of(&["V3", "V4", "V5", "V6", "V7", "V8"]);
        let h3 = dfz_x2(&gf(3)).rank_vector();
        let h2 = dfz_x2(&gf(2)).rank_vector();
        assert_eq!(h3.cond_entropy(z3, v38).unwrap(), int(0));
        assert_eq!(h2.cond_entropy(z3, v38).unwrap(), int(1));
        assert_eq!(h3.full_rank(), &int(5));
        assert!(h3
            .masks()
            .filter(|a| a.len() == 1)
            .all(|a| h3.at(a) == &int(1)));
    }

    #[test]
    fn equality_lists() {
        assert_eq!(equalities_x1().len(), 8);
        assert_eq!(equalities_x2().len(), 16);
        let f2 = fano_x1(&gf(2)).rank_vector();
        assert!(equalities_x1().iter().all(|e| e.holds(&f2).unwrap()));
        let f3 = fano_x1(&gf(3)).rank_vector();
        let failed: Vec<String> = equalities_x1()
            .iter()
            .filter(|e| !e.holds(&f3).unwrap())
            .map(|e| e.describe(&x1_ground()))
            .collect();
        assert!(failed.contains(&"H(W4|W1W2) = 0".to_string()));
        let x3 = dfz_x2(&gf(3)).rank_vector();
        assert!(equalities_x2().iter().all(|e| e.holds(&x3).unwrap()));
        let x2 = dfz_x2(&gf(2)).rank_vector();
        let z3 = &equalities_x2()[12];
        assert_eq!(z3.describe(&x2_ground()), "H(Z3|V3V4V5V6V7V8) = 0");
        assert!(!z3.holds(&x2).unwrap());
        assert_eq!(
            equalities_x1()[0].describe(&x1_ground()),
            "H(Y1Y2Y3) = H(Y1) + H(Y2) + H(Y3)"
        );
    }

    #[test]
    fn perturbation_examples() {
        let h = fano_x1(&gf(2)).rank_vector();
        assert_eq!(epsilon_perturb(&h, &int(0)).unwrap(), h);
        let zero = epsilon_perturb(&h, &int(3)).unwrap();
        assert!(zero.values().iter().all(|v| v.is_zero()));
        let g = epsilon_perturb(&h, &int(1)).unwrap();
        assert_eq!(g.full_rank(), &int(2));
        assert!(g
            .masks()
            .filter(|a| a.len() == 1)
            .all(|a| g.at(a) == &int(1)));
        assert!(epsilon_perturb(&h, &int(4)).is_err());
        assert!(epsilon_perturb(&h, &int(-1)).is_err());
    }

    #[test]
    fn direct_sums() {
        let p = phi(&gf(2), &gf(3)).unwrap();
        assert_eq!(p.n(), 20);
        assert_eq!(p.full_rank(), &int(8));
        assert_eq!(p.at(SubsetMask(0x7f)), &int(3));
        assert_eq!(p.at(SubsetMask(0xfff80)), &int(5));
        assert_eq!(p.ground().label(7), "Z1");

        let h = fano_x1(&gf(2)).rank_vector();
        let z = RankVector::zeros(GroundSet::new(1).unwrap());
        let s = direct_sum(&h, &z).unwrap();
        for a in h.masks() {
            assert_eq!(s.at(a), h.at(a));
        }
        let big = RankVector::zeros(GroundSet::new(20).unwrap());
        assert!(matches!(direct_sum(&big, &h), Err(Error::Size(_))));
    }

    #[test]
    fn phi_eps_values() {
        let p = phi_eps(&int(1)).unwrap();
        let (x1, x2) = (SubsetMask(0x7f), SubsetMask(0xfff80));
        assert_eq!(p.full_rank(), &int(7));
        assert_eq!(p.at(x1), &int(3));
        assert_eq!(p.at(x2), &int(5));
        assert!(p.at(x1) + p.at(x2) > *p.full_rank());
        assert_eq!(phi_eps(&int(3)).unwrap().full_rank(), &int(5));
        assert!(phi_eps(&int(0)).is_err());
        assert!(phi_eps(&ratio(7, 2)).is_err());
        let half = phi_eps(&ratio(1, 2)).unwrap();
        assert_eq!(half.full_rank(), &ratio(15, 2));
        assert!(is_polymatroid(&half));
    }

    #[test]
    fn case_examples() {
        let h = fano_x1(&gf(2)).rank_vector();
        let g = x1_ground();
        let q = ["Y1", "Y2", "Y3", "W3"].map(|l| g.mask_of(&[l]));
        // pairs have rank 2 = h(X) − 1, so all five positive terms are capped
        assert_eq!(
            perturbation_case(&h, &int(1), q).unwrap(),
            PerturbationCase::Case7
        );
        let c = check_perturbation_case(&h, &int(1), q).unwrap();
        assert!(c.chain_holds && !c.score.is_negative());
        // below the cap nothing is touched
        assert_eq!(
            perturbation_case(&h, &int(0), q).unwrap(),
            PerturbationCase::Case1
        );
        assert_eq!(
            perturbation_case(&h, &int(0), [SubsetMask::EMPTY; 4]).unwrap(),
            PerturbationCase::Case1
        );
    }

    #[test]
    fn classification_is_exhaustive() {
        use idx::PLUS;
        for bits in 0u8..32 {
            let capped: Vec<u8> = (0..5)
                .filter(|i| bits >> i & 1 == 1)
                .map(|i| PLUS[i])
                .collect();
            classify(&capped).unwrap();
        }
    }

    #[test]
    fn all_cases_reached_and_verified() {
        let f = gf(3);
        let generic = Arrangement::from_vectors(
            f.clone(),
            3,
            &[
                vec![vec![1, 0, 0]],
                vec![vec![0, 1, 0]],
                vec![vec![0, 0, 1], vec![1, 1, 0]],
                vec![vec![1, 1, 1]],
            ],
            None,
        )
        .unwrap()
        .rank_vector();
        let mut seen = std::collections::BTreeSet::new();
        for eps in [ratio(1, 2), int(1), ratio(3, 2)] {
            for q in 0..1u32 << 16 {
                let quad = [q & 15, q >> 4 & 15, q >> 8 & 15, q >> 12].map(SubsetMask);
                let c = check_perturbation_case(&generic, &eps, quad).unwrap();
                assert!(c.chain_holds, "{} at {quad:?}", c.case);
                seen.insert(c.case);
            }
        }
        assert_eq!(seen.len(), 7, "{seen:?}");
    }

    fn random_arrangement_ranks() -> impl Strategy<Value = RankVector> {
        (prop_oneof![Just(2u32), Just(3u32)], 1usize..=4).prop_flat_map(|(p, d)| {
            proptest::collection::vec(
                proptest::collection::vec(proptest::collection::vec(0..p, d), 0..=2),
                4,
            )
            .prop_map(move |spans| {
                Arrangement::from_vectors(Field::prime(p).unwrap(), d, &spans, None)
                    .unwrap()
                    .rank_vector()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn perturbation_stays_ingletonian(h in random_arrangement_ranks(), num in 0i64..=12) {
            let eps = h.full_rank() * ratio(num, 12);
            let g = epsilon_perturb(&h, &eps).unwrap();
            prop_assert!(check_polymatroid(&g, CheckMode::Full).unwrap().is_none());
            let r = ingleton_scan(&g, ScanMode::Exhaustive).unwrap();
            prop_assert!(!r.min_score.is_negative());
        }

        #[test]
        fn every_quadruple_follows_its_case(
            h in random_arrangement_ranks(),
            num in 0i64..=6,
            q in proptest::array::uniform4(0u32..16),
        ) {
            let eps = h.full_rank() * ratio(num, 6);
            let c = check_perturbation_case(&h, &eps, q.map(SubsetMask)).unwrap();
            prop_assert!(c.chain_holds, "{} failed", c.case);
            prop_assert!(!c.score.is_negative());
        }
    }
}
