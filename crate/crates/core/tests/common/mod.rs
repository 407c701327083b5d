#![allow(dead_code)]

use polyrank::gf::Field;
use polyrank::linalg::Subspace;
use polyrank::represent::Arrangement;
use rand::Rng;

pub fn gf(p: u32) -> Field {
    Field::prime(p).unwrap()
}

pub fn random_vector<R: Rng>(rng: &mut R, p: u32, d: usize) -> Vec<u32> {
    (0..d).map(|_| rng.gen_range(0..p)).collect()
}

/// Span of up to `max_gens` random vectors.
pub fn random_subspace<R: Rng>(rng: &mut R, field: &Field, d: usize, max_gens: usize) -> Subspace {
    let p = field.characteristic();
    let k = rng.gen_range(0..=max_gens);
    let rows: Vec<Vec<u32>> = (0..k).map(|_| random_vector(rng, p, d)).collect();
    Subspace::span(field.clone(), d, &rows).unwrap()
}

/// `n` random subspaces of GF(2)^d or GF(3)^d.
pub fn random_arrangement<R: Rng>(rng: &mut R, n: usize, max_d: usize) -> Arrangement {
    let field = gf(if rng.gen_bool(0.5) { 2 } else { 3 });
    let d = rng.gen_range(1..=max_d);
    let subspaces = (0..n).map(|_| random_subspace(rng, &field, d, d)).collect();
    Arrangement::new(field, d, subspaces, None).unwrap()
}
