//! Finite sets of representable rank vectors and exact membership in the
//! cone they generate.
//!
//! A non-member verdict only rules out the finite cone of the given
//! generators, not the closure of all representable rank functions, unless
//! the generator set is known to be complete.

mod enumerate;
pub mod simplex;

pub use enumerate::{all_subspaces, enumerate_generators, MAX_GEN_DIM, MAX_GEN_ELEMENTS};

use num_traits::{Signed, Zero};
use rustc_hash::FxHashSet;

use crate::error::{input, Error, Result};
use crate::inequality::is_polymatroid;
use crate::lattice::{GroundSet, RankVector};
use crate::rational::Rational;
use crate::represent::Arrangement;
use simplex::Feasibility;

#[derive(Clone, Debug)]
pub struct Generator {
    pub rank: RankVector,
    /// Arrangement realising the rank vector, when known.
    pub source: Option<Arrangement>,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    ground: GroundSet,
    generators: Vec<Generator>,
    tuples: u64,
}

impl GeneratorSet {
    /// Deduplicated set from plain rank vectors; each must be a polymatroid
    /// on `n` elements.
    pub fn from_vectors(n: usize, vectors: Vec<RankVector>) -> Result<GeneratorSet> {
        let mut set = GeneratorSet {
            ground: GroundSet::new(n)?,
            generators: Vec::new(),
            tuples: 0,
        };
        let gens = vectors
            .into_iter()
            .map(|rank| Generator { rank, source: None })
            .collect();
        set.extend(gens)?;
        Ok(set)
    }

    fn extend(&mut self, gens: Vec<Generator>) -> Result<()> {
        let mut seen: FxHashSet<Vec<Rational>> = self
            .generators
            .iter()
            .map(|g| g.rank.values().to_vec())
            .collect();
        for g in gens {
            if g.rank.n() != self.ground.len() {
                return input(format!(
                    "generator on {} elements in a set over {}",
                    g.rank.n(),
                    self.ground.len()
                ));
            }
            if !is_polymatroid(&g.rank) {
                return input("generators must be polymatroids");
            }
            if seen.insert(g.rank.values().to_vec()) {
                self.generators.push(g);
            }
        }
        Ok(())
    }

    /// Adds the generators of `other` not already present.
    pub fn union(mut self, other: GeneratorSet) -> Result<GeneratorSet> {
        self.tuples += other.tuples;
        self.extend(other.generators)?;
        Ok(self)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter()
    }

    pub fn get(&self, i: usize) -> Option<&Generator> {
        self.generators.get(i)
    }

    /// Subspace tuples enumerated before deduplication.
    pub fn tuples(&self) -> u64 {
        self.tuples
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `h = Σ c_j f_j` with `c_j ≥ 0`, one coefficient per generator.
    Member { coefficients: Vec<Rational> },
    /// `λ · f_j ≥ 0` for every generator and `λ · h < 0`.
    NonMember { functional: Vec<Rational> },
}

impl Certificate {
    pub fn is_member(&self) -> bool {
        matches!(self, Certificate::Member { .. })
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Checks a certificate by exact arithmetic.
pub fn verify_certificate(h: &RankVector, gens: &GeneratorSet, cert: &Certificate) -> bool {
    let m = h.values().len();
    match cert {
        Certificate::Member { coefficients } => {
            coefficients.len() == gens.len()
                && coefficients.iter().all(|c| !c.is_negative())
                && (0..m).all(|i| {
                    gens.iter()
                        .zip(coefficients)
                        .fold(Rational::zero(), |acc, (g, c)| {
                            acc + c * &g.rank.values()[i]
                        })
                        == h.values()[i]
                })
        }
        Certificate::NonMember { functional } => {
            functional.len() == m
                && gens
                    .iter()
                    .all(|g| !dot(functional, g.rank.values()).is_negative())
                && dot(functional, h.values()).is_negative()
        }
    }
}

/// Decides whether `h` lies in the cone generated by `gens`.
pub fn cone_member(h: &RankVector, gens: &GeneratorSet) -> Result<Certificate> {
    if h.n() != gens.ground.len() {
        return input(format!(
            "rank vector on {} elements, generators on {}",
            h.n(),
            gens.ground.len()
        ));
    }
    let cols: Vec<Vec<Rational>> = gens.iter().map(|g| g.rank.values().to_vec()).collect();
    let cert = match simplex::feasibility(&cols, h.values()) {
        Feasibility::Feasible(coefficients) => Certificate::Member { coefficients },
        Feasibility::Infeasible(functional) => Certificate::NonMember { functional },
    };
    if !verify_certificate(h, gens, &cert) {
        return Err(Error::Internal("cone certificate failed to verify".into()));
    }
    Ok(cert)
}
