//! Dense matrices over `GF(q)` and exact Gaussian elimination.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::vector;

/// Row-major dense matrix. Shape mismatches between operands are programming
/// errors and panic; fallible constructors validate external data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

/// Reduced row echelon form together with its rank and pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Domain(format!(
                "matrix data has {} entries, expected {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|e| e.code() >= field.order()) {
            return Err(Error::Domain(format!("matrix entry {bad} out of range")));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Fe::ONE;
        }
        m
    }

    /// Stacks equal-length rows. `cols` is needed to describe a matrix with no rows.
    pub fn from_rows<R: AsRef<[Fe]>>(field: &Field, cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "row length mismatch");
            data.extend_from_slice(r.as_ref());
        }
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn row_vector(field: &Field, v: &[Fe]) -> Self {
        Self::from_rows(field, v.len(), &[v])
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix { field: field.clone(), rows, cols, data: field.random_vec(rows * cols, rng) }
    }

    /// Uniformly random invertible `k x k` matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(field: &Field, k: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, k, k, rng);
            if m.rank() == k {
                return m;
            }
        }
    }

    /// Permutation matrix with a single 1 in row `i` at column `perm[i]`.
    pub fn permutation(field: &Field, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.data[i * n + j] = Fe::ONE;
        }
        m
    }

    pub fn random_permutation<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        Self::permutation(field, &perm)
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Fe] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Fe]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                self.field.axpy(dst, a, other.row(l));
            }
        }
        out
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows, "vector length differs from row count");
        let mut out = vec![Fe::ZERO; self.cols];
        for (l, &a) in v.iter().enumerate() {
            self.field.axpy(&mut out, a, self.row(l));
        }
        out
    }

    /// Matrix times column vector: `self * v^T`, returned as a row.
    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols, "vector length differs from column count");
        self.row_iter().map(|r| vector::inner_product(&self.field, r, v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = vector::add(&self.field, &self.data, &other.data);
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = vector::sub(&self.field, &self.data, &other.data);
        Matrix { data, ..self.clone() }
    }

    pub fn scale(&self, c: Fe) -> Matrix {
        Matrix { data: vector::scale(&self.field, &self.data, c), ..self.clone() }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack needs equal row counts");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols, data }
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let picked: Vec<&[Fe]> = rows.iter().map(|&i| self.row(i)).collect();
        Self::from_rows(&self.field, self.cols, &picked)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(cols.iter().map(|&j| r[j]));
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols: cols.len(), data }
    }

    pub fn delete_cols(&self, cols: &[usize]) -> Matrix {
        let mut drop = vec![false; self.cols];
        for &j in cols {
            drop[j] = true;
        }
        let keep: Vec<usize> = (0..self.cols).filter(|&j| !drop[j]).collect();
        self.select_cols(&keep)
    }

    pub fn rref(&self) -> Rref {
        let mut basis = EchelonBasis::new(&self.field, self.cols);
        for r in self.row_iter() {
            basis.insert(r.to_vec());
        }
        let (matrix, pivots) = basis.into_rref();
        let rank = pivots.len();
        // keep the original row count: zero rows go at the bottom
        let mut data = matrix.data;
        data.resize(self.rows.max(rank) * self.cols, Fe::ZERO);
        let matrix = Matrix { field: self.field.clone(), rows: self.rows.max(rank), cols: self.cols, data };
        Rref { matrix, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(&self.field, self.cols);
        for r in self.row_iter() {
            basis.insert(r.to_vec());
            if basis.rank() == self.cols {
                break;
            }
        }
        basis.rank()
    }

    /// Whether `rank(self) <= threshold`, stopping elimination as soon as the
    /// rank exceeds the threshold.
    pub fn rank_at_most(&self, threshold: usize) -> bool {
        rank_capped(&self.field, self.cols, self.row_iter().map(|r| r.to_vec()), threshold + 1)
            <= threshold
    }

    /// Basis of the right kernel `{v : self * v^T = 0}`, one vector per row, in
    /// reduced row echelon form.
    pub fn nullspace(&self) -> Matrix {
        let rref = self.rref();
        let free = free_columns(self.cols, &rref.pivots);
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Fe::ZERO; self.cols];
            v[f] = Fe::ONE;
            for (i, &p) in rref.pivots.iter().enumerate() {
                v[p] = self.field.neg(rref.matrix.get(i, f));
            }
            rows.push(v);
        }
        let basis = Self::from_rows(&self.field, self.cols, &rows);
        if basis.rows == 0 {
            return basis;
        }
        let r = basis.rref();
        r.matrix.select_rows(&(0..r.rank).collect::<Vec<_>>())
    }

    /// One solution of `self * x^T = b^T`, with free variables set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(b.len(), self.rows, "right-hand side length differs from row count");
        let aug = self.hstack(&Self::from_rows(&self.field, 1, &b.iter().map(|&x| [x]).collect::<Vec<_>>()));
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &p) in rref.pivots.iter().enumerate() {
            x[p] = rref.matrix.get(i, self.cols);
        }
        Some(x)
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "only square matrices have inverses");
        let n = self.rows;
        let rref = self.hstack(&Self::identity(&self.field, n)).rref();
        if rref.pivots.iter().take(n).copied().ne(0..n) || rref.rank < n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(rref.matrix.select_rows(&(0..n).collect::<Vec<_>>()).select_cols(&cols))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { Fe::ONE } else { Fe::ZERO })
            })
    }
}

pub(crate) fn free_columns(cols: usize, pivots: &[usize]) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols).filter(|&j| !is_pivot[j]).collect()
}

/// `(I + b^T a)^{-1} = I - (1 / (1 + <a, b>)) b^T a`, or `None` when
/// `<a, b> = -1`, in which case `I + b^T a` is a nontrivial projection.
pub fn rank_one_update_inverse(field: &Field, a: &[Fe], b: &[Fe]) -> Option<Matrix> {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let denom = field.add(Fe::ONE, vector::inner_product(field, a, b));
    let coef = field.neg(field.inv(denom).ok()?);
    let mut m = Matrix::identity(field, n);
    for i in 0..n {
        let row_coef = field.mul(coef, b[i]);
        field.axpy(m.row_mut(i), row_coef, a);
    }
    Some(m)
}

/// Incrementally built row space in echelon form.
///
/// Each stored row is normalized to 1 at its pivot and is zero at the pivots
/// of all rows inserted before it, so reducing a vector against the rows in
/// insertion order clears every pivot coordinate.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    cols: usize,
    data: Vec<Fe>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, cols: usize) -> Self {
        EchelonBasis { field: field.clone(), cols, data: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.cols
    }

    fn basis_row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduces `v` in place against the basis; the result is zero iff `v` was
    /// in the span.
    pub fn reduce(&self, v: &mut [Fe]) {
        debug_assert_eq!(v.len(), self.cols);
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = v[p];
            if !c.is_zero() {
                self.field.axpy(v, self.field.neg(c), self.basis_row(i));
            }
        }
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        vector::is_zero(&w)
    }

    /// Adds `v` to the basis if it is independent; returns whether it was.
    pub fn insert(&mut self, mut v: Vec<Fe>) -> bool {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.reduce(&mut v);
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = self.field.inv(v[p]).expect("pivot is nonzero");
                self.field.scale_in_place(&mut v[p..], inv);
                self.data.extend_from_slice(&v);
                self.pivots.push(p);
                true
            }
        }
    }

    /// Canonical reduced row echelon form of the span, and its pivots.
    pub fn into_rref(self) -> (Matrix, Vec<usize>) {
        let EchelonBasis { field, cols, data, pivots } = self;
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let mut rows: Vec<Vec<Fe>> =
            order.iter().map(|&i| data[i * cols..(i + 1) * cols].to_vec()).collect();
        let sorted: Vec<usize> = order.iter().map(|&i| pivots[i]).collect();
        for r in (0..rows.len()).rev() {
            let p = sorted[r];
            let (above, rest) = rows.split_at_mut(r);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                let c = row[p];
                if !c.is_zero() {
                    field.axpy(row, field.neg(c), pivot_row);
                }
            }
        }
        (Matrix::from_rows(&field, cols, &rows), sorted)
    }
}

/// Rank of the span of `rows`, stopping early once it reaches `cap`.
pub fn rank_capped<I>(field: &Field, cols: usize, rows: I, cap: usize) -> usize
where
    I: IntoIterator<Item = Vec<Fe>>,
{
    let mut basis = EchelonBasis::new(field, cols);
    for r in rows {
        if basis.rank() >= cap || basis.is_full() {
            break;
        }
        basis.insert(r);
    }
    basis.rank()
}
