//! Acceptance gate. Each criterion prints one PASS/FAIL line with its
//! wall time and limit; the process exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use polyrank::cone::{cone_member, enumerate_generators, verify_certificate, Certificate};
use polyrank::constructs::{
    dfz_x2, direct_sum, epsilon_perturb, equalities_x1, equalities_x2, fano_x1, phi_eps, x1_ground,
    x2_ground,
};
use polyrank::format::read_rankvec;
use polyrank::inequality::{
    check_polymatroid, dfz_ratio, ingleton_scan, is_polymatroid, CheckMode, ScanMode,
};
use polyrank::lattice::{GroundSet, RankVector, SubsetMask};
use polyrank::linalg::Subspace;
use polyrank::matroid::{is_connected, proportionality};
use polyrank::rational::{int, ratio, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{gf, random_arrangement, random_subspace};

type Outcome = Result<String, String>;

/// Name, time limit in seconds, and check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn golden(name: &str) -> RankVector {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    read_rankvec(&text).unwrap()
}

fn fano() -> RankVector {
    fano_x1(&gf(2)).rank_vector()
}

fn x2() -> RankVector {
    dfz_x2(&gf(3)).rank_vector()
}

fn construction_fidelity() -> Outcome {
    let f = fano();
    let x = x2();
    ensure(
        f.values() == golden("fano_gf2.rankvec").values(),
        "Fano differs from golden",
    )?;
    ensure(
        x.values() == golden("x2_gf3.rankvec").values(),
        "X2 differs from golden",
    )?;
    Ok(format!(
        "{} + {} entries equal",
        f.values().len(),
        x.values().len()
    ))
}

fn characteristic_dependence() -> Outcome {
    let g1 = x1_ground();
    let g2 = x2_ground();
    let w4 = g1.mask_of(&["W4"]);
    let w12 = g1.mask_of(&["W1", "W2"]);
    let z3 = g2.mask_of(&["Z3"]);
    let v = g2.mask_of(&["V3", "V4", "V5", "V6", "V7", "V8"]);
    let vals = [
        fano_x1(&gf(2)).rank_vector().cond_entropy(w4, w12).unwrap(),
        fano_x1(&gf(3)).rank_vector().cond_entropy(w4, w12).unwrap(),
        dfz_x2(&gf(3)).rank_vector().cond_entropy(z3, v).unwrap(),
        dfz_x2(&gf(2)).rank_vector().cond_entropy(z3, v).unwrap(),
    ];
    ensure(
        vals == [int(0), int(1), int(0), int(1)],
        format!("got {vals:?}"),
    )?;
    Ok("H(W4|W1W2) = 0, 1 and H(Z3|V3..V8) = 0, 1".into())
}

fn equality_lists() -> Outcome {
    let f = fano();
    let x = x2();
    for e in equalities_x1() {
        ensure(
            e.holds(&f).unwrap(),
            format!("fails: {}", e.describe(&x1_ground())),
        )?;
    }
    for e in equalities_x2() {
        ensure(
            e.holds(&x).unwrap(),
            format!("fails: {}", e.describe(&x2_ground())),
        )?;
    }
    Ok(format!(
        "{} + {} equalities hold",
        equalities_x1().len(),
        equalities_x2().len()
    ))
}

fn random_epsilon(rng: &mut StdRng, full: &Rational) -> Rational {
    let den = rng.gen_range(1..=6i64);
    let top = (full * int(den)).to_integer();
    let top: i64 = top.try_into().unwrap();
    ratio(rng.gen_range(0..=top), den)
}

fn perturbation_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let runs = 500;
    for i in 0..runs {
        let h = random_arrangement(&mut rng, 4, 4).rank_vector();
        let eps = random_epsilon(&mut rng, h.full_rank());
        let g = epsilon_perturb(&h, &eps).unwrap();
        if let Some(v) = check_polymatroid(&g, CheckMode::Full).unwrap() {
            return Err(format!("run {i}: {v:?}"));
        }
        let scan = ingleton_scan(&g, ScanMode::Exhaustive).unwrap();
        ensure(
            !scan.min_score.is_negative(),
            format!("run {i}: min J = {}", scan.min_score),
        )?;
    }
    Ok(format!(
        "{runs} perturbations are polymatroids with min J ≥ 0"
    ))
}

fn integer_perturb_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let runs = 100;
    let mut calls = 0;
    for i in 0..runs {
        let n = rng.gen_range(1..=4);
        let arr = random_arrangement(&mut rng, n, 4);
        let h = arr.rank_vector();
        let full = arr.rank_of(arr.ground().full());
        for k in 1..=full {
            let out = arr
                .integer_perturb(k)
                .map_err(|e| format!("run {i}, k = {k}: {e}"))?;
            let cap = int((full - k) as i64);
            for a in h.masks() {
                let dim = out.span_of(a).dim();
                let want = h.at(a).min(&cap).clone();
                ensure(
                    int(dim as i64) == want,
                    format!("run {i}, k = {k}, mask {a:x}: {dim} vs {want}"),
                )?;
            }
            calls += 1;
        }
    }
    Ok(format!("{runs} arrangements, {calls} perturbations exact"))
}

fn random_vector_n4(rng: &mut StdRng) -> RankVector {
    let ground = GroundSet::new(4).unwrap();
    match rng.gen_range(0..3) {
        0 => random_arrangement(rng, 4, 4).rank_vector(),
        1 => {
            let h = random_arrangement(rng, 4, 4).rank_vector();
            let target = rng.gen_range(1..16u32);
            let delta = ratio(rng.gen_range(-2..=2), 2);
            RankVector::from_fn(ground, |a| {
                let v = h.at(a).clone();
                if a.0 == target {
                    v + &delta
                } else {
                    v
                }
            })
        }
        _ => RankVector::from_fn(ground, |a| {
            if a.is_empty() {
                int(0)
            } else {
                int(rng.gen_range(0..=a.len() as i64 + 1))
            }
        }),
    }
}

fn elemental_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let runs = 10_000;
    let mut valid = 0;
    for i in 0..runs {
        let h = random_vector_n4(&mut rng);
        let full = check_polymatroid(&h, CheckMode::Full).unwrap().is_none();
        let elem = check_polymatroid(&h, CheckMode::Elemental)
            .unwrap()
            .is_none();
        ensure(
            full == elem,
            format!("vector {i}: full {full}, elemental {elem}"),
        )?;
        valid += full as usize;
    }
    Ok(format!("{runs} vectors agree ({valid} polymatroids)"))
}

fn projection_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let runs = 10_000;
    for i in 0..runs {
        let field = gf(if rng.gen_bool(0.5) { 2 } else { 3 });
        let d = rng.gen_range(1..=6);
        let a = random_subspace(&mut rng, &field, d, d);
        let b1 = random_subspace(&mut rng, &field, d, d);
        let b2 = random_subspace(&mut rng, &field, d, d);
        let t = |s: &Subspace| s.project_away(&a).unwrap();
        let dim = |s: &Subspace| s.dim() as i64;
        let err = |what: &str| format!("run {i}, d = {d}: {what}");
        let b12 = b1.sum(&b2).unwrap();

        // dimension of the image is the conditional rank
        ensure(
            dim(&t(&b1)) == dim(&a.sum(&b1).unwrap()) - dim(&a),
            err("dim T_A(B) ≠ H(B|A)"),
        )?;
        // image of a span is the span of the images
        let joint = t(&b1).sum(&t(&b2)).unwrap();
        ensure(t(&b12) == joint, err("T_A(B1 + B2) ≠ T_A(B1) + T_A(B2)"))?;
        // sandwich
        ensure(
            dim(&b12) >= dim(&joint) && dim(&joint) >= dim(&b12) - dim(&a),
            err("sandwich"),
        )?;
        // inclusion is preserved
        ensure(t(&b12).contains(&t(&b1)), err("monotonicity"))?;
        // trivial intersection keeps the dimension
        if a.intersect(&b1).unwrap().dim() == 0 {
            ensure(dim(&t(&b1)) == dim(&b1), err("dimension lost"))?;
        }
        ensure(
            dim(&a) + dim(&b1) == dim(&a.sum(&b1).unwrap()) + dim(&a.intersect(&b1).unwrap()),
            err("modular identity"),
        )?;
    }
    Ok(format!("{runs} random triples"))
}

fn connectivity_and_direct_sum() -> Outcome {
    let f = fano();
    let x = x2();
    ensure(is_connected(&f).unwrap(), "Fano not connected")?;
    ensure(is_connected(&x).unwrap(), "X2 not connected")?;
    let phi = direct_sum(&f, &x).unwrap();
    ensure(!is_connected(&phi).unwrap(), "Φ connected")?;
    ensure(*phi.full_rank() == int(8), "Φ(X) ≠ 8")?;
    let pe = phi_eps(&int(1)).unwrap();
    let x1 = SubsetMask(0x7f);
    let x2m = SubsetMask(0xfff80);
    let (a, b, c) = (pe.at(x1), pe.at(x2m), pe.full_rank());
    ensure(
        *a == int(3) && *b == int(5) && *c == int(7),
        format!("Φ^ε values {a}, {b}, {c}"),
    )?;
    ensure(a + b > *c, "no strict superadditivity")?;
    Ok("Fano, X2 connected; Φ not; Φ(X) = 8; 3 + 5 > 7".into())
}

fn ingleton_at_scale() -> Outcome {
    let t = Instant::now();
    let fano_scan = ingleton_scan(&fano(), ScanMode::Exhaustive).unwrap();
    let exhaustive = t.elapsed();
    ensure(
        !fano_scan.min_score.is_negative(),
        format!("Fano min J = {}", fano_scan.min_score),
    )?;
    ensure(
        exhaustive < Duration::from_secs(600),
        "exhaustive scan over 10 min",
    )?;

    let t = Instant::now();
    let pe = phi_eps(&int(1)).unwrap();
    let sampled = ingleton_scan(
        &pe,
        ScanMode::Sampled {
            trials: 1_000_000,
            seed: 1,
        },
    )
    .unwrap();
    let sampled_time = t.elapsed();
    ensure(
        !sampled.min_score.is_negative(),
        format!("Φ^ε min J = {}", sampled.min_score),
    )?;
    ensure(
        sampled_time < Duration::from_secs(120),
        "sampled scan over 2 min",
    )?;
    Ok(format!(
        "Fano: {} quadruples, min J = {} in {:.1?}; Φ^ε(1): {} samples, min J = {} in {:.1?}",
        fano_scan.quadruples_checked,
        fano_scan.min_score,
        exhaustive,
        sampled.quadruples_checked,
        sampled.min_score,
        sampled_time
    ))
}

fn ingleton_violator() -> RankVector {
    RankVector::from_fn(GroundSet::new(4).unwrap(), |a| match a.len() {
        0 => int(0),
        1 => int(2),
        2 if a.0 == 0b1100 => int(4),
        2 => int(3),
        _ => int(4),
    })
}

fn violator_and_cone() -> Outcome {
    let h = ingleton_violator();
    ensure(is_polymatroid(&h), "violator is not a polymatroid")?;
    let scan = ingleton_scan(&h, ScanMode::Exhaustive).unwrap();
    ensure(
        scan.min_score == int(-1),
        format!("min J = {}", scan.min_score),
    )?;
    let gens = enumerate_generators(4, &gf(2), 4)
        .unwrap()
        .union(enumerate_generators(4, &gf(3), 3).unwrap())
        .unwrap();
    let cert = cone_member(&h, &gens).unwrap();
    let Certificate::NonMember { functional } = &cert else {
        return Err("violator reported as a cone member".into());
    };
    ensure(
        verify_certificate(&h, &gens, &cert),
        "certificate does not verify",
    )?;
    let value = functional
        .iter()
        .zip(h.values())
        .fold(Rational::zero(), |acc, (l, v)| acc + l * v);
    Ok(format!(
        "min J = -1; {} generators; λ·h = {value}",
        gens.len()
    ))
}

fn dfz_ratios() -> Outcome {
    let g1 = x1_ground();
    let g2 = x2_ground();
    let masks = |g: &GroundSet, ls: &[&str]| -> Vec<SubsetMask> {
        ls.iter().map(|l| g.mask_of(&[l])).collect()
    };
    let r1 = dfz_ratio(
        &fano(),
        &masks(&g1, &["Y1", "Y2", "Y3"]),
        &masks(&g1, &["W1", "W2", "W3", "W4"]),
    )
    .unwrap();
    let r2 = dfz_ratio(
        &x2(),
        &masks(&g2, &["Z1", "Z2", "Z3", "Z4", "Z5"]),
        &masks(&g2, &["V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8"]),
    )
    .unwrap();
    ensure(r1 == int(1) && r2 == int(1), format!("ratios {r1}, {r2}"))?;
    Ok("both ratios are 1".into())
}

fn proportionality_suite() -> Outcome {
    for (name, m) in [("Fano", fano()), ("X2", x2())] {
        for c in [int(0), int(1), ratio(7, 3)] {
            let got = proportionality(&m, &m.scale(&c).unwrap()).map_err(|e| e.to_string())?;
            ensure(got == c, format!("{name}: expected {c}, got {got}"))?;
        }
    }
    Ok("c ∈ {0, 1, 7/3} recovered for both matroids".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("construction fidelity", 10, construction_fidelity),
        ("characteristic dependence", 10, characteristic_dependence),
        ("equality lists", 5, equality_lists),
        ("ε-perturbation suite", 300, perturbation_suite),
        ("integer perturbation suite", 300, integer_perturb_suite),
        ("elemental axiom equivalence", 60, elemental_equivalence),
        ("projection suite", 120, projection_suite),
        (
            "connectivity and direct sum",
            30,
            connectivity_and_direct_sum,
        ),
        ("Ingleton at scale", 720, ingleton_at_scale),
        ("Ingleton violator and cone", 600, violator_and_cone),
        ("DFZ ratios", 1, dfz_ratios),
        ("proportionality", 10, proportionality_suite),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let late = elapsed > Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the {limit} s limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name} [{:.2?} / {limit} s]: {detail}",
            i + 1,
            elapsed
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
