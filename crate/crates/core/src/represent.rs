//! Subspace arrangements and the rank vectors they induce, field lifting,
//! and the projection-based constructions that reshape an arrangement's
//! rank function while keeping it representable.

use rustc_hash::FxHashSet;

use crate::error::{input, Error, Result};
use crate::gf::Field;
use crate::lattice::{GroundSet, RankVector, SubsetMask, MAX_ELEMENTS};
use crate::linalg::{Echelon, Matrix, Projection, Subspace, MAX_AMBIENT};
use crate::rational;

/// Ordered subspaces of one ambient space over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    field: Field,
    ambient_dim: usize,
    subspaces: Vec<Subspace>,
    ground: GroundSet,
}

/// Result of a repair step: the projected arrangement and the subspace
/// that was projected away.
#[derive(Clone, Debug)]
pub struct Repair {
    pub arrangement: Arrangement,
    pub removed: Subspace,
}

/// A vector in the span of a (lifted) arrangement that avoids every
/// deficient flat.
#[derive(Clone, Debug)]
pub struct ExternalVector {
    /// Extension degree over the arrangement's prime field.
    pub degree: u32,
    /// The lifted arrangement the vector lives in.
    pub lifted: Arrangement,
    pub vector: Vec<u32>,
}

impl Arrangement {
    pub fn new(
        field: Field,
        ambient_dim: usize,
        subspaces: Vec<Subspace>,
        labels: Option<Vec<String>>,
    ) -> Result<Arrangement> {
        if subspaces.is_empty() {
            return input("an arrangement needs at least one subspace");
        }
        if subspaces.len() > MAX_ELEMENTS {
            return Err(Error::Size(format!(
                "{} subspaces exceed the limit of {MAX_ELEMENTS}",
                subspaces.len()
            )));
        }
        if ambient_dim > MAX_AMBIENT {
            return Err(Error::Size(format!(
                "ambient dimension {ambient_dim} exceeds {MAX_AMBIENT}"
            )));
        }
        for s in &subspaces {
            if s.field() != &field || s.ambient_dim() != ambient_dim {
                return input(format!(
                    "subspace over {}^{} in an arrangement over {field}^{ambient_dim}",
                    s.field(),
                    s.ambient_dim()
                ));
            }
        }
        let ground = match labels {
            Some(l) => {
                if l.len() != subspaces.len() {
                    return input("one label per subspace required");
                }
                GroundSet::with_labels(l)?
            }
            None => GroundSet::new(subspaces.len())?,
        };
        Ok(Arrangement {
            field,
            ambient_dim,
            subspaces,
            ground,
        })
    }

    /// Arrangement of subspaces each spanned by the given vectors.
    pub fn from_vectors(
        field: Field,
        ambient_dim: usize,
        spans: &[Vec<Vec<u32>>],
        labels: Option<Vec<String>>,
    ) -> Result<Arrangement> {
        let subspaces = spans
            .iter()
            .map(|rows| Subspace::span(field.clone(), ambient_dim, rows))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(field, ambient_dim, subspaces, labels)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    fn with_subspaces(&self, subspaces: Vec<Subspace>) -> Arrangement {
        Arrangement {
            field: subspaces
                .first()
                .map(|s| s.field().clone())
                .unwrap_or_else(|| self.field.clone()),
            ambient_dim: self.ambient_dim,
            subspaces,
            ground: self.ground.clone(),
        }
    }

    /// `⟨V_i, i ∈ α⟩`.
    pub fn span_of(&self, alpha: SubsetMask) -> Subspace {
        let mut e = Echelon::new(self.field.clone(), self.ambient_dim);
        for i in alpha.elements() {
            e.insert_all(self.subspaces[i].basis().row_iter());
        }
        e.into_subspace()
    }

    pub fn rank_of(&self, alpha: SubsetMask) -> usize {
        let mut e = Echelon::new(self.field.clone(), self.ambient_dim);
        for i in alpha.elements() {
            e.insert_all(self.subspaces[i].basis().row_iter());
        }
        e.rank()
    }

    /// Rank vector `h(α) = dim ⟨V_i, i ∈ α⟩`.
    ///
    /// Walks the subset lattice depth first so that each subset's echelon
    /// form extends its parent's (the subset minus its lowest element).
    pub fn rank_vector(&self) -> RankVector {
        let n = self.len();
        let mut ranks = vec![0i64; 1 << n];
        let root = Echelon::new(self.field.clone(), self.ambient_dim);
        self.rank_dfs(0, n, &root, &mut ranks);
        RankVector::from_integers(self.ground.clone(), &ranks).expect("2^n values")
    }

    fn rank_dfs(&self, mask: usize, below: usize, ech: &Echelon, ranks: &mut [i64]) {
        for j in 0..below {
            let mut e = ech.clone();
            e.insert_all(self.subspaces[j].basis().row_iter());
            let child = mask | 1 << j;
            ranks[child] = e.rank() as i64;
            self.rank_dfs(child, j, &e, ranks);
        }
    }

    /// Every subspace spanned over GF(p^m) instead of the prime field GF(p).
    pub fn lift(&self, m: u32) -> Result<Arrangement> {
        if !self.field.is_prime_field() {
            return Err(Error::Unsupported(format!(
                "lifting from the non-prime field {}",
                self.field
            )));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let target = Field::new(self.field.characteristic(), m)?;
        let subspaces = self
            .subspaces
            .iter()
            .map(|s| {
                // prime-field codes are the constant polynomials of the extension
                let b = s.basis();
                let data = b.row_iter().flatten().copied().collect();
                let m = Matrix::new(target.clone(), b.rows(), b.cols(), data)?;
                Ok(Subspace::from_matrix(&m))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arrangement {
            field: target,
            ambient_dim: self.ambient_dim,
            subspaces,
            ground: self.ground.clone(),
        })
    }

    /// Distinct nonzero flats `⟨V_α⟩` whose dimension is below the full
    /// rank, in order of the first subset producing them.
    pub fn deficient_flats(&self) -> Vec<Subspace> {
        let full = self.rank_of(self.ground.full());
        let mut seen = FxHashSet::default();
        let mut out = Vec::new();
        for alpha in 1..self.ground.subset_count() as u32 {
            let flat = self.span_of(SubsetMask(alpha));
            if flat.dim() > 0 && flat.dim() < full && seen.insert(flat.clone()) {
                out.push(flat);
            }
        }
        out
    }

    /// First vector of the full span, in lexicographic order of its
    /// coordinates over the span's RREF basis, lying outside every deficient
    /// flat. Works in the arrangement's current field; `None` when the field
    /// is too small.
    pub fn external_vector_in_field(&self) -> Option<Vec<u32>> {
        let span = self.span_of(self.ground.full());
        let flats = self.deficient_flats();
        let basis = span.basis();
        let c = basis.rows();
        if c == 0 {
            return None;
        }
        let q = self.field.order();
        let mut coords = vec![0u32; c];
        loop {
            // odometer: last coordinate varies fastest
            let mut pos = c;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                coords[pos] += 1;
                if coords[pos] < q {
                    break;
                }
                coords[pos] = 0;
            }
            let u = basis.left_mul(&coords);
            if flats.iter().all(|f| !f.contains_vector(&u)) {
                return Some(u);
            }
        }
    }

    /// Lifts a prime-field arrangement to the smallest GF(p^m) with
    /// `p^m` above the number of deficient flats, growing `m` one step at a
    /// time until a vector avoiding all deficient flats turns up.
    pub fn find_external_vector(&self) -> Result<ExternalVector> {
        if !self.field.is_prime_field() {
            return Err(Error::Unsupported(format!(
                "vector search needs a prime base field, got {}",
                self.field
            )));
        }
        if self.rank_of(self.ground.full()) == 0 {
            return input("the arrangement spans only the zero space");
        }
        let mut m = self.starting_degree();
        loop {
            let lifted = self.lift(m)?;
            if let Some(vector) = lifted.external_vector_in_field() {
                return Ok(ExternalVector {
                    degree: m,
                    lifted,
                    vector,
                });
            }
            m += 1;
        }
    }

    fn starting_degree(&self) -> u32 {
        let flats = self.deficient_flats().len() as u64;
        let p = self.field.characteristic() as u64;
        let mut m = 1;
        let mut q = p;
        while q <= flats {
            q *= p;
            m += 1;
        }
        m
    }

    /// Applies `T_A` to every subspace.
    pub fn project_away(&self, a: &Subspace) -> Result<Arrangement> {
        if a.field() != &self.field || a.ambient_dim() != self.ambient_dim {
            return input("projection subspace does not match the arrangement");
        }
        let p = Projection::away_from(a);
        Ok(self.with_subspaces(self.subspaces.iter().map(|s| p.apply(s)).collect()))
    }

    /// Arrangement whose rank vector is `min(h(α), h(full) − k)`.
    ///
    /// Each of the `k` rounds projects away a line spanned by a vector that
    /// lies in the full span but in no deficient flat, which lowers exactly
    /// the full-rank subsets by one. The field is lifted once, up front, far
    /// enough for every round: the deficient flats of a projected arrangement
    /// are images of the original ones, so their number never grows.
    pub fn integer_perturb(&self, k: usize) -> Result<Arrangement> {
        let h = self.rank_vector();
        let full = self.rank_of(self.ground.full());
        if k == 0 || k > full {
            return input(format!("k = {k} must lie in 1..={full}"));
        }
        let mut m = if self.field.is_prime_field() {
            self.starting_degree()
        } else {
            1
        };
        let result = loop {
            let start = if self.field.is_prime_field() {
                self.lift(m)?
            } else {
                self.clone()
            };
            match start.project_rounds(k) {
                Some(arr) => break arr,
                None if self.field.is_prime_field() => m += 1,
                None => {
                    return Err(Error::Unsupported(format!(
                        "{} is too small and non-prime fields cannot be lifted",
                        self.field
                    )))
                }
            }
        };
        let cap = rational::int((full - k) as i64);
        let expected = RankVector::from_fn(h.ground().clone(), |a| h.at(a).min(&cap).clone());
        if result.rank_vector() != expected {
            return Err(Error::Internal(
                "integer perturbation produced the wrong rank vector".into(),
            ));
        }
        Ok(result)
    }

    fn project_rounds(&self, k: usize) -> Option<Arrangement> {
        let mut cur = self.clone();
        for _ in 0..k {
            let u = cur.external_vector_in_field()?;
            let line = Subspace::span(cur.field.clone(), cur.ambient_dim, &[u]).ok()?;
            cur = cur.project_away(&line).ok()?;
        }
        Some(cur)
    }

    /// Projects away a subspace `A ⊆ V_c` that complements `⟨V_α⟩` inside
    /// `⟨V_c, V_α⟩`, after which `H(c | α) = 0` and `dim A` equals the old
    /// `H(c | α)`.
    pub fn fix_conditional(&self, c: usize, alpha: SubsetMask) -> Result<Repair> {
        if c >= self.len() {
            return input(format!("index {c} out of range"));
        }
        self.ground.check(alpha)?;
        if alpha.contains(c) {
            return input(format!("index {c} lies in the conditioning set"));
        }
        let mut ech = self.span_of(alpha).echelon();
        let mut chosen = Vec::new();
        for row in self.subspaces[c].basis().row_iter() {
            if ech.insert(row) {
                chosen.push(row.to_vec());
            }
        }
        let removed = Subspace::span(self.field.clone(), self.ambient_dim, &chosen)?;
        Ok(Repair {
            arrangement: self.project_away(&removed)?,
            removed,
        })
    }

    /// Projects away `A = Σ_{i∈β} V_i ∩ ⟨V_j, j ∈ β∖i⟩`, after which the
    /// members of `β` are independent and each keeps dimension
    /// `H(V_j | V_{β∖j})`.
    pub fn fix_independence(&self, beta: SubsetMask) -> Result<Repair> {
        self.ground.check(beta)?;
        if beta.len() < 2 {
            return input("at least two subspaces are needed");
        }
        let mut removed = Subspace::zero(self.field.clone(), self.ambient_dim);
        for i in beta.elements() {
            let others = self.span_of(beta.difference(SubsetMask::singleton(i)));
            let meet = self.subspaces[i].intersect(&others)?;
            removed = removed.sum(&meet)?;
        }
        Ok(Repair {
            arrangement: self.project_away(&removed)?,
            removed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn lines(field: &Field, d: usize, vecs: &[&[u32]]) -> Arrangement {
        let spans: Vec<Vec<Vec<u32>>> = vecs.iter().map(|v| vec![v.to_vec()]).collect();
        Arrangement::from_vectors(field.clone(), d, &spans, None).unwrap()
    }

    fn fano(field: &Field) -> Arrangement {
        lines(
            field,
            3,
            &[
                &[1, 0, 0],
                &[0, 1, 0],
                &[0, 0, 1],
                &[1, 1, 0],
                &[0, 1, 1],
                &[1, 1, 1],
                &[1, 0, 1],
            ],
        )
    }

    fn naive_ranks(arr: &Arrangement) -> Vec<usize> {
        (0..1u32 << arr.len())
            .map(|a| {
                let rows: Vec<Vec<u32>> = SubsetMask(a)
                    .elements()
                    .flat_map(|i| {
                        arr.subspaces()[i]
                            .basis()
                            .row_iter()
                            .map(|r| r.to_vec())
                            .collect::<Vec<_>>()
                    })
                    .collect();
                crate::linalg::rref(
                    &Matrix::from_rows(arr.field().clone(), arr.ambient_dim(), &rows).unwrap(),
                )
                .rows()
            })
            .collect()
    }

    #[test]
    fn incremental_ranks_match_naive() {
        for p in [2, 3] {
            let arr = fano(&gf(p));
            let h = arr.rank_vector();
            let naive = naive_ranks(&arr);
            for a in h.masks() {
                assert_eq!(h.at(a), &int(naive[a.0 as usize] as i64));
            }
        }
    }

    #[test]
    fn zero_subspace_ranks() {
        let arr = Arrangement::new(gf(2), 2, vec![Subspace::zero(gf(2), 2)], None).unwrap();
        assert_eq!(arr.rank_vector().values(), &[int(0), int(0)]);
        assert!(Arrangement::new(gf(2), 2, vec![], None).is_err());
    }

    #[test]
    fn lift_keeps_ranks() {
        let arr = fano(&gf(2));
        assert_eq!(arr.lift(1).unwrap(), arr);
        let lifted = arr.lift(3).unwrap();
        assert_eq!(lifted.field().order(), 8);
        assert_eq!(lifted.rank_vector(), arr.rank_vector());
        assert!(matches!(lifted.lift(2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn external_vector_fano() {
        let arr = fano(&gf(2));
        assert_eq!(arr.deficient_flats().len(), 14);
        let ev = arr.find_external_vector().unwrap();
        assert_eq!(ev.degree, 4);
        for flat in ev.lifted.deficient_flats() {
            assert!(!flat.contains_vector(&ev.vector));
        }
    }

    #[test]
    fn external_vector_trivial_cases() {
        let full = Arrangement::new(gf(2), 1, vec![Subspace::full(gf(2), 1)], None).unwrap();
        let ev = full.find_external_vector().unwrap();
        assert_eq!((ev.degree, ev.vector.clone()), (1, vec![1]));

        let two = lines(&gf(3), 2, &[&[1, 0], &[0, 1]]);
        let ev = two.find_external_vector().unwrap();
        assert_eq!((ev.degree, ev.vector.clone()), (1, vec![1, 1]));

        let zero = Arrangement::new(gf(2), 2, vec![Subspace::zero(gf(2), 2)], None).unwrap();
        assert!(matches!(zero.find_external_vector(), Err(Error::Input(_))));
    }

    #[test]
    fn integer_perturb_fano() {
        let arr = fano(&gf(2));
        let h = arr.rank_vector();
        let all_zero = arr.integer_perturb(3).unwrap().rank_vector();
        assert!(all_zero.values().iter().all(|v| v == &int(0)));
        let g = arr.integer_perturb(1).unwrap().rank_vector();
        for a in h.masks() {
            assert_eq!(g.at(a), h.at(a).min(&int(2)));
        }
        assert!(arr.integer_perturb(0).is_err());
        assert!(arr.integer_perturb(4).is_err());
    }

    #[test]
    fn integer_perturb_plane() {
        let arr = Arrangement::new(gf(2), 2, vec![Subspace::full(gf(2), 2)], None).unwrap();
        let out = arr.integer_perturb(1).unwrap();
        assert_eq!(out.subspaces()[0].dim(), 1);
    }

    #[test]
    fn fix_conditional_cases() {
        let f = gf(2);
        // V_c already inside ⟨V_α⟩
        let arr = lines(&f, 3, &[&[1, 0, 0], &[1, 0, 0]]);
        let r = arr.fix_conditional(0, SubsetMask(2)).unwrap();
        assert_eq!(r.removed.dim(), 0);
        assert_eq!(r.arrangement, arr);

        for p in [2, 3] {
            let arr = lines(&gf(p), 3, &[&[0, 0, 1], &[1, 0, 0]]);
            let before = arr
                .rank_vector()
                .cond_entropy(SubsetMask(1), SubsetMask(2))
                .unwrap();
            let r = arr.fix_conditional(0, SubsetMask(2)).unwrap();
            assert_eq!(int(r.removed.dim() as i64), before);
            let after = r.arrangement.rank_vector();
            assert_eq!(
                after.cond_entropy(SubsetMask(1), SubsetMask(2)).unwrap(),
                int(0)
            );
        }
        assert!(arr.fix_conditional(0, SubsetMask(1)).is_err());
    }

    #[test]
    fn fix_independence_cases() {
        let f = gf(2);
        let indep = lines(&f, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(
            indep.fix_independence(SubsetMask(3)).unwrap().removed.dim(),
            0
        );

        let spans = vec![
            vec![vec![1, 0, 0], vec![0, 1, 0]],
            vec![vec![0, 1, 0], vec![0, 0, 1]],
        ];
        let arr = Arrangement::from_vectors(f.clone(), 3, &spans, None).unwrap();
        let r = arr.fix_independence(SubsetMask(3)).unwrap();
        assert_eq!(
            r.removed,
            Subspace::span(f.clone(), 3, &[vec![0, 1, 0]]).unwrap()
        );
        let h = r.arrangement.rank_vector();
        assert_eq!(h.values(), &[int(0), int(1), int(1), int(2)]);

        let coplanar = lines(&gf(3), 2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let r = coplanar.fix_independence(SubsetMask(7)).unwrap();
        assert_eq!(r.removed.dim(), 2);
        assert!(r.arrangement.subspaces().iter().all(|s| s.dim() == 0));
        assert!(coplanar.fix_independence(SubsetMask(1)).is_err());
    }
}
