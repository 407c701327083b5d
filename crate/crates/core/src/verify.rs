//! End-to-end check of the computational facts behind the `Φ^ε`
//! construction: characteristic-dependent equalities, connectivity, the
//! direct sum and its perturbation, and Ingleton nonnegativity on a sample.

use num_traits::{Signed, Zero};

use crate::constructs::{
    dfz_x2, direct_sum, epsilon_perturb, equalities_x1, equalities_x2, fano_x1, x1_ground,
    x2_ground,
};
use crate::error::{input, Result};
use crate::gf::Field;
use crate::inequality::{ingleton_scan, is_polymatroid, ScanMode};
use crate::lattice::{GroundSet, RankVector, SubsetMask};
use crate::matroid::is_connected;
use crate::rational::{self, Rational};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub field_x1: Field,
    pub field_x2: Field,
    pub epsilon: Rational,
    pub trials: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            field_x1: Field::prime(2).expect("2 is prime"),
            field_x2: Field::prime(3).expect("3 is prime"),
            epsilon: rational::int(1),
            trials: 1_000_000,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub name: &'static str,
    pub passed: bool,
    /// The failure follows from the chosen options rather than a defect.
    pub expected_failure: bool,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub items: Vec<Item>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

fn item(name: &'static str, passed: bool, note: impl Into<String>) -> Item {
    Item {
        name,
        passed,
        expected_failure: false,
        note: note.into(),
    }
}

fn failed_equalities(
    list: &[crate::constructs::Equality],
    h: &RankVector,
    g: &GroundSet,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for e in list {
        if !e.holds(h)? {
            out.push(e.describe(g));
        }
    }
    Ok(out)
}

fn equality_item(
    name: &'static str,
    failed: Vec<String>,
    total: usize,
    needs_even: bool,
    field: &Field,
) -> Item {
    let even = field.characteristic() == 2;
    let matches_char = even == needs_even;
    let want = if needs_even { "even" } else { "odd" };
    let mut it = item(
        name,
        failed.is_empty(),
        if failed.is_empty() {
            format!("all {total} hold over {field}")
        } else {
            format!(
                "{} of {total} fail over {field}: {}",
                failed.len(),
                failed.join("; ")
            )
        },
    );
    if !it.passed && !matches_char {
        it.expected_failure = true;
        it.note
            .push_str(&format!(" (expected: needs {want} characteristic)"));
    }
    it
}

fn opposite(field: &Field) -> Result<Field> {
    Field::prime(if field.characteristic() == 2 { 3 } else { 2 })
}

/// Runs every check and reports each outcome.
pub fn verify_paper(opts: &VerifyOptions) -> Result<VerifyReport> {
    let (f1, f2) = (&opts.field_x1, &opts.field_x2);
    let h1 = fano_x1(f1).rank_vector();
    let h2 = dfz_x2(f2).rank_vector();
    let eps = &opts.epsilon;
    let bound = h1.full_rank().min(h2.full_rank()).clone();
    if eps.is_negative() || *eps > bound {
        return input(format!(
            "ε = {} must lie in [0, {}]",
            rational::display(eps),
            rational::display(&bound)
        ));
    }
    let (g1, g2) = (x1_ground(), x2_ground());
    let mut items = Vec::new();

    // characteristic dependence of the two pivotal equalities
    let w4 = g1.mask_of(&["W4"]);
    let w12 = g1.mask_of(&["W1", "W2"]);
    let z3 = g2.mask_of(&["Z3"]);
    let v38 = g2.mask_of(&["V3", "V4", "V5", "V6", "V7", "V8"]);
    let even = Field::prime(2)?;
    let odd = Field::prime(3)?;
    let w_even = fano_x1(&even).rank_vector().cond_entropy(w4, w12)?;
    let w_odd = fano_x1(&odd).rank_vector().cond_entropy(w4, w12)?;
    let z_odd = dfz_x2(&odd).rank_vector().cond_entropy(z3, v38)?;
    let z_even = dfz_x2(&even).rank_vector().cond_entropy(z3, v38)?;
    items.push(item(
        "characteristic",
        w_even.is_zero() && w_odd == rational::int(1) && z_odd.is_zero() && z_even == rational::int(1),
        format!(
            "H(W4|W1W2) = {} over GF(2), {} over GF(3); H(Z3|V3..V8) = {} over GF(3), {} over GF(2)",
            rational::display(&w_even),
            rational::display(&w_odd),
            rational::display(&z_odd),
            rational::display(&z_even)
        ),
    ));

    let l1 = equalities_x1();
    items.push(equality_item(
        "equalities-x1",
        failed_equalities(&l1, &h1, &g1)?,
        l1.len(),
        true,
        f1,
    ));
    let l2 = equalities_x2();
    items.push(equality_item(
        "equalities-x2",
        failed_equalities(&l2, &h2, &g2)?,
        l2.len(),
        false,
        f2,
    ));
    // over the opposite characteristic each list must break
    let other1 = fano_x1(&opposite(f1)?).rank_vector();
    let other2 = dfz_x2(&opposite(f2)?).rank_vector();
    let broken1 = failed_equalities(&l1, &other1, &g1)?.len();
    let broken2 = failed_equalities(&l2, &other2, &g2)?.len();
    items.push(item(
        "opposite-characteristic",
        broken1 > 0 && broken2 > 0,
        format!(
            "{broken1} X1 equalities fail over {}, {broken2} X2 equalities fail over {}",
            opposite(f1)?,
            opposite(f2)?
        ),
    ));

    let c1 = is_connected(&h1)?;
    let c2 = is_connected(&h2)?;
    items.push(item(
        "connected",
        c1 && c2,
        format!("X1 connected: {c1}, X2 connected: {c2}"),
    ));

    let phi = direct_sum(&h1, &h2)?;
    let n1 = h1.n();
    let x1 = SubsetMask((1 << n1) - 1);
    let x2 = SubsetMask(phi.ground().full().0 & !x1.0);
    let phi_connected = is_connected(&phi)?;
    let total = h1.full_rank() + h2.full_rank();
    items.push(item(
        "direct-sum",
        *phi.full_rank() == total && !phi_connected,
        format!(
            "Φ(X) = {}, Φ connected: {phi_connected}",
            rational::display(phi.full_rank())
        ),
    ));

    let pe = epsilon_perturb(&phi, eps)?;
    let (a, b, c) = (pe.at(x1), pe.at(x2), pe.full_rank());
    items.push(item(
        "phi-eps-values",
        a == h1.full_rank() && b == h2.full_rank() && *c == &total - eps,
        format!(
            "Φ^ε(X1) = {}, Φ^ε(X2) = {}, Φ^ε(X) = {}",
            rational::display(a),
            rational::display(b),
            rational::display(c)
        ),
    ));

    let r1 = pe.restrict(x1)?;
    let r2 = pe.restrict(x2)?;
    let same = r1.values() == h1.values() && r2.values() == h2.values();
    let eq1 = failed_equalities(&l1, &r1, &g1)?.len();
    let eq2 = failed_equalities(&l2, &r2, &g2)?.len();
    items.push(item(
        "restrictions",
        same,
        format!(
            "restrictions {} the component ranks; {eq1} X1 and {eq2} X2 equalities fail on them",
            if same { "equal" } else { "differ from" }
        ),
    ));

    let poly = is_polymatroid(&pe);
    items.push(item(
        "polymatroid",
        poly,
        format!("elemental axioms on {} elements", pe.n()),
    ));

    let scan = ingleton_scan(
        &pe,
        ScanMode::Sampled {
            trials: opts.trials,
            seed: opts.seed,
        },
    )?;
    items.push(item(
        "ingleton-sampled",
        !scan.min_score.is_negative(),
        format!(
            "min J = {} over {} quadruples (seed {})",
            rational::display(&scan.min_score),
            scan.quadruples_checked,
            opts.seed
        ),
    ));

    let strict = a + b > *c;
    let mut sup = item(
        "superadditivity",
        strict,
        format!(
            "Φ^ε(X1) + Φ^ε(X2) = {} {} Φ^ε(X) = {}",
            rational::display(&(a + b)),
            if strict { ">" } else { "=" },
            rational::display(c)
        ),
    );
    if !strict && eps.is_zero() {
        sup.expected_failure = true;
        sup.note.push_str(" (expected: needs ε > 0)");
    }
    items.push(sup);

    Ok(VerifyReport { items })
}
