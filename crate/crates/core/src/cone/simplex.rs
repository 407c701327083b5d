//! Exact phase-one simplex for `A x = b, x ≥ 0`, with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Outcome of a feasibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// `x ≥ 0` with `A x = b`.
    Feasible(Vec<Rational>),
    /// `λ` with `λᵀA ≥ 0` and `λᵀb < 0`.
    Infeasible(Vec<Rational>),
}

/// Solves `min Σ a` over `D A x + a = D b`, `x, a ≥ 0`, where `D` flips the
/// rows with negative right-hand side. A zero optimum gives a solution;
/// otherwise the optimal dual `y` yields the Farkas vector `λ = −D y`.
///
/// `a` is given by columns: `cols[j]` is column `j` of `A`, of length `m`.
pub fn feasibility(cols: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let m = b.len();
    let k = cols.len();
    let width = k + m + 1;
    let sign: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let flip = |i: usize, v: &Rational| if sign[i] { -v.clone() } else { v.clone() };

    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            row.extend(cols.iter().map(|c| flip(i, &c[i])));
            row.extend((0..m).map(|r| {
                if r == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row.push(flip(i, &b[i]));
            row
        })
        .collect();
    // reduced costs: artificials cost 1 and start basic
    let mut cost: Vec<Rational> = (0..width)
        .map(|j| {
            if (k..k + m).contains(&j) {
                Rational::zero()
            } else {
                -t.iter().fold(Rational::zero(), |acc, row| acc + &row[j])
            }
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Bland: lowest-index column with negative reduced cost
    while let Some(enter) = (0..k + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // the phase-one objective is bounded below by zero
        let (pr, _) = leave.expect("phase one is bounded");
        pivot(&mut t, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    let objective = -cost[width - 1].clone();
    if objective.is_zero() {
        let mut x = vec![Rational::zero(); k];
        for (r, &v) in basis.iter().enumerate() {
            if v < k {
                x[v] = t[r][width - 1].clone();
            }
        }
        return Feasibility::Feasible(x);
    }
    // y_i = Σ_r c_B[r] · (B⁻¹)[r][i]; B⁻¹ sits in the artificial columns
    let lambda = (0..m)
        .map(|i| {
            let y = basis
                .iter()
                .enumerate()
                .filter(|(_, &v)| v >= k)
                .fold(Rational::zero(), |acc, (r, _)| acc + &t[r][k + i]);
            if sign[i] {
                y
            } else {
                -y
            }
        })
        .collect();
    Feasibility::Infeasible(lambda)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let inv = t[pr][pc].recip();
    for v in t[pr].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let prow = t[pr].clone();
    let eliminate = |row: &mut [Rational]| {
        let f = row[pc].clone();
        if f.is_zero() {
            return;
        }
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    };
    for (r, row) in t.iter_mut().enumerate() {
        if r != pr {
            eliminate(row);
        }
    }
    eliminate(cost);
}
