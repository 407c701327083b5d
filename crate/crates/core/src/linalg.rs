//! Subspace algebra over GF(p^m).
//!
//! Vectors are row vectors of element codes. A [`Subspace`] keeps its basis
//! in reduced row echelon form with zero rows removed, so two equal
//! subspaces have identical bases and equality is a plain comparison.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{input, Result};
use crate::gf::Field;

/// Largest ambient dimension accepted.
pub const MAX_AMBIENT: usize = 64;

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix over {} ({}x{})",
            self.field, self.rows, self.cols
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return input(format!(
                "{rows}x{cols} matrix needs {} entries",
                rows * cols
            ));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= field.order()) {
            return input(format!("{bad} is not an element of {field}"));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u32>]) -> Result<Matrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return input(format!(
                "row of length {} in a {cols}-column matrix",
                r.len()
            ));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn left_mul(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(coef, x));
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let data = self.row_iter().flat_map(|r| other.left_mul(r)).collect();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let f = &self.field;
        let mut aug: Vec<Vec<u32>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| u32::from(c == r)));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| aug[r][col] != 0)?;
            aug.swap(col, pivot);
            let inv = f.inv(aug[col][col]);
            for x in aug[col].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && row[col] != 0 {
                    let factor = row[col];
                    eliminate(f, row, &pivot_row, factor);
                }
            }
        }
        let data = aug.into_iter().flat_map(|row| row[n..].to_vec()).collect();
        Some(Matrix {
            field: self.field.clone(),
            rows: n,
            cols: n,
            data,
        })
    }
}

/// `row -= factor * pivot`.
#[inline]
fn eliminate(f: &Field, row: &mut [u32], pivot: &[u32], factor: u32) {
    let neg = f.neg(factor);
    for (x, &p) in row.iter_mut().zip(pivot) {
        if p != 0 {
            *x = f.add(*x, f.mul(neg, p));
        }
    }
}

/// Reduced row echelon form with zero rows removed.
pub fn rref(m: &Matrix) -> Matrix {
    let f = &m.field;
    let mut rows: Vec<Vec<u32>> = m.row_iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                eliminate(f, row, &pivot_row, factor);
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    Matrix {
        field: m.field.clone(),
        rows: rank,
        cols: m.cols,
        data: rows.concat(),
    }
}

/// Incremental row echelon form (not reduced), used where only ranks and
/// membership are needed.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Field, cols: usize) -> Echelon {
        Echelon {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u32]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] != 0 {
                let factor = v[p];
                eliminate(&self.field, v, row, factor);
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[p]);
        for x in v.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn insert_all<'a>(&mut self, rows: impl IntoIterator<Item = &'a [u32]>) {
        for r in rows {
            self.insert(r);
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }

    pub fn into_subspace(self) -> Subspace {
        let m = Matrix {
            field: self.field.clone(),
            rows: self.rows.len(),
            cols: self.cols,
            data: self.rows.concat(),
        };
        Subspace::from_matrix(&m)
    }
}

/// A subspace of GF(q)^d held by its canonical RREF basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.field.hash(state);
        self.basis.cols.hash(state);
        self.basis.data.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u32]> = self.basis.row_iter().collect();
        write!(f, "⟨{:?}⟩ ⊆ {}^{}", rows, self.basis.field, self.basis.cols)
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(field, ambient),
        }
    }

    pub fn from_matrix(m: &Matrix) -> Subspace {
        Subspace { basis: rref(m) }
    }

    /// Span of the given vectors.
    pub fn span(field: Field, ambient: usize, vectors: &[Vec<u32>]) -> Result<Subspace> {
        if ambient > MAX_AMBIENT {
            return input(format!("ambient dimension {ambient} exceeds {MAX_AMBIENT}"));
        }
        Ok(Subspace::from_matrix(&Matrix::from_rows(
            field, ambient, vectors,
        )?))
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn unit_vector(ambient: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; ambient];
        v[i] = 1;
        v
    }

    pub fn field(&self) -> &Field {
        &self.basis.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field().clone(), self.ambient_dim());
        e.insert_all(self.basis.row_iter());
        e
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() || self.ambient_dim() != other.ambient_dim() {
            return input(format!(
                "subspaces of {}^{} and {}^{} cannot be combined",
                self.field(),
                self.ambient_dim(),
                other.field(),
                other.ambient_dim()
            ));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        // RREF basis: subtract multiples of each row at its pivot
        let f = self.field();
        let mut v = v.to_vec();
        for row in self.basis.row_iter() {
            let p = row.iter().position(|&x| x != 0).expect("no zero rows");
            if v[p] != 0 {
                let factor = v[p];
                eliminate(f, &mut v, row, factor);
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.row_iter().all(|r| self.contains_vector(r))
    }

    /// `⟨A, B⟩`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let mut data = self.basis.data.clone();
        data.extend_from_slice(&other.basis.data);
        let m = Matrix {
            field: self.field().clone(),
            rows: self.dim() + other.dim(),
            cols: self.ambient_dim(),
            data,
        };
        Ok(Subspace::from_matrix(&m))
    }

    /// `A ∩ B` by Zassenhaus: reduce `[a | a]` and `[b | 0]` rows; the rows
    /// whose left half vanishes span the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let d = self.ambient_dim();
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for r in self.basis.row_iter() {
            let mut row = r.to_vec();
            row.extend_from_slice(r);
            rows.push(row);
        }
        for r in other.basis.row_iter() {
            let mut row = r.to_vec();
            row.extend(std::iter::repeat_n(0, d));
            rows.push(row);
        }
        let reduced = rref(&Matrix::from_rows(self.field().clone(), 2 * d, &rows)?);
        let meet: Vec<Vec<u32>> = reduced
            .row_iter()
            .filter(|r| r[..d].iter().all(|&x| x == 0))
            .map(|r| r[d..].to_vec())
            .collect();
        Subspace::span(self.field().clone(), d, &meet)
    }

    /// Complement `A*` with `A + A* = W` and `A ∩ A* = 0`, spanned by the
    /// first standard basis vectors (in index order) that are independent of
    /// `A` and of the ones already chosen.
    pub fn complement(&self) -> Subspace {
        let d = self.ambient_dim();
        let mut ech = self.echelon();
        let mut chosen = Vec::new();
        for i in 0..d {
            let e = Subspace::unit_vector(d, i);
            if ech.insert(&e) {
                chosen.push(e);
            }
        }
        Subspace::span(self.field().clone(), d, &chosen)
            .expect("unit vectors fit the ambient space")
    }

    /// `T_A(B)`: the image of `self` under projection away from `a`.
    pub fn project_away(&self, a: &Subspace) -> Result<Subspace> {
        self.compatible(a)?;
        Ok(Projection::away_from(a).apply(self))
    }
}

/// The linear map `T_A`: write `u = u1 + u2` with `u1` in the fixed
/// complement of `A` and `u2` in `A`, and keep `u1`.
#[derive(Clone, Debug)]
pub struct Projection {
    matrix: Matrix,
    removed: Subspace,
}

impl Projection {
    pub fn away_from(a: &Subspace) -> Projection {
        let field = a.field().clone();
        let d = a.ambient_dim();
        let comp = a.complement();
        let mut data = a.basis.data.clone();
        data.extend_from_slice(&comp.basis.data);
        let change = Matrix {
            field: field.clone(),
            rows: d,
            cols: d,
            data,
        };
        let inv = change.inverse().expect("A and its complement span W");
        // P = M^-1 · diag(0..0, 1..1) · M in row-vector convention
        let r = a.dim();
        let mut masked = inv.clone();
        for row in 0..d {
            for col in 0..r {
                masked.data[row * d + col] = 0;
            }
        }
        Projection {
            matrix: masked.mul(&change),
            removed: a.clone(),
        }
    }

    pub fn removed(&self) -> &Subspace {
        &self.removed
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply_vector(&self, u: &[u32]) -> Vec<u32> {
        self.matrix.left_mul(u)
    }

    pub fn apply(&self, b: &Subspace) -> Subspace {
        let image: Vec<u32> = b
            .basis
            .row_iter()
            .flat_map(|r| self.apply_vector(r))
            .collect();
        let m = Matrix {
            field: b.field().clone(),
            rows: b.dim(),
            cols: b.ambient_dim(),
            data: image,
        };
        Subspace::from_matrix(&m)
    }
}
