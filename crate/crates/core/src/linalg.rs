//! Small dense linear algebra over any [`Scalar`].
//!
//! Sizes never exceed a few dozen, so everything is row-major `Vec` storage
//! with Gaussian elimination. Pivoting picks the entry of largest magnitude,
//! which is partial pivoting for floats and harmless for exact fields.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column vector of fixed dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    data: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn zeros(n: usize) -> Self {
        Vector { data: vec![S::zero(); n] }
    }

    pub fn from_vec(data: Vec<S>) -> Self {
        Vector { data }
    }

    /// Standard basis vector `X_i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[i] = S::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn add(&self, o: &Self) -> Self {
        Vector::from_vec(self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Vector::from_vec(self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        Vector::from_vec(self.data.iter().map(|a| a.clone() * s.clone()).collect())
    }

    /// Euclidean dot product in the given basis.
    pub fn dot(&self, o: &Self) -> S {
        self.data
            .iter()
            .zip(&o.data)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_zero_within(tol))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Vector<T> {
        Vector::from_vec(self.data.iter().map(f).collect())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.data[i]
    }
}

impl<S> IndexMut<usize> for Vector<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.data[i]
    }
}

/// Dense `rows × cols` matrix. Square instances act as endomorphisms:
/// column `j` holds the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Linear endomorphism of a vector space, in a fixed basis.
pub type Endo<S> = Matrix<S>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<S>]) -> Self {
        let r = cols.first().map_or(0, Vector::dim);
        Self::from_fn(r, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        Vector::from_vec((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        Self::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * o[(k, j)].clone())
        })
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        Vector::from_vec(
            (0..self.rows)
                .map(|i| (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * v[k].clone()))
                .collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_zero_within(tol))
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.sub(o).is_zero_within(tol)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_zero_within(tol)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    fn pivot_row(&self, col: usize, from: usize, tol: f64) -> Option<usize> {
        (from..self.rows)
            .filter(|&r| !self[(r, col)].is_zero_within(tol))
            .max_by(|&a, &b| {
                self[(a, col)].abs_f64().partial_cmp(&self[(b, col)].abs_f64()).unwrap_or(std::cmp::Ordering::Equal)
            })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Determinant by elimination. Panics on non-square input.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            // exact zero test: tolerance-free elimination keeps exact fields exact
            let Some(p) = m.pivot_row(c, c, 0.0) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for r in (c + 1)..n {
                let f = m[(r, c)].clone() / piv.clone();
                if f.is_zero_within(0.0) {
                    continue;
                }
                for j in c..n {
                    let v = m[(r, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = self.pivot_row(c, row, tol) else {
                continue;
            };
            self.swap_rows(p, row);
            let piv = self[(row, c)].clone();
            for j in 0..self.cols {
                let v = self[(row, j)].clone() / piv.clone();
                self[(row, j)] = v;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self[(r, c)].clone();
                if f.is_zero_within(0.0) {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self[(r, j)].clone() - f.clone() * self[(row, j)].clone();
                    self[(r, j)] = v;
                }
            }
            pivots.push(c);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.clone().rref(tol).len()
    }

    /// Basis of the right null space `{x : Ax = 0}`.
    pub fn nullspace(&self, tol: f64) -> Vec<Vector<S>> {
        let mut m = self.clone();
        let pivots = m.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = Vector::zeros(self.cols);
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Inverse by Gauss–Jordan; `None` when singular within `tol`.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let pivots = aug.rref(tol);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Solve `Ax = b` for square nonsingular `A`.
    pub fn solve(&self, b: &Vector<S>, tol: f64) -> Option<Vector<S>> {
        self.inverse(tol).map(|inv| inv.apply(b))
    }

    /// Leading principal minors, in order of size.
    pub fn leading_minors(&self) -> Vec<S> {
        (1..=self.rows.min(self.cols))
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).det()
            })
            .collect()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Symmetric bilinear form (metric candidate) in a fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Gram<S> {
    m: Matrix<S>,
}

impl<S: Scalar> Gram<S> {
    /// Wraps a matrix, rejecting non-square or non-symmetric input.
    pub fn new(m: Matrix<S>, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("Gram matrix is {}x{}", m.rows(), m.cols())));
        }
        if !m.is_symmetric(tol) {
            return Err(Error::NotSymmetric);
        }
        Ok(Gram { m })
    }

    pub fn identity(n: usize) -> Self {
        Gram { m: Matrix::identity(n) }
    }

    pub fn diagonal(d: &[S]) -> Self {
        let n = d.len();
        Gram { m: Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { S::zero() }) }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.m
    }

    pub fn inner(&self, x: &Vector<S>, y: &Vector<S>) -> S {
        x.dot(&self.m.apply(y))
    }

    /// Sylvester's criterion: all leading principal minors positive.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        self.m.leading_minors().iter().all(|d| d.is_positive_within(tol))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Gram<T> {
        Gram { m: self.m.map(f) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn rat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse_exact() {
        let m = rat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), Rational::from_i64(18));
        let inv = m.inverse(0.0).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
    }

    #[test]
    fn singular_matrix() {
        let m = rat(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.det(), Rational::from_i64(0));
        assert!(m.inverse(0.0).is_none());
        let ns = m.nullspace(0.0);
        assert_eq!(ns.len(), 1);
        assert!(m.apply(&ns[0]).is_zero_within(0.0));
    }

    #[test]
    fn sylvester() {
        let g = Gram::new(rat(&[&[2, 1], &[1, 2]]), 0.0).unwrap();
        assert!(g.is_positive_definite(0.0));
        let h = Gram::new(rat(&[&[1, 2], &[2, 1]]), 0.0).unwrap();
        assert!(!h.is_positive_definite(0.0));
        assert!(Gram::new(rat(&[&[1, 2], &[0, 1]]), 0.0).is_err());
    }

    #[test]
    fn float_det_pivoting() {
        let m = Matrix::from_rows(vec![vec![1e-20, 1.0], vec![1.0, 1.0]]);
        assert!((m.det() + 1.0).abs() < 1e-12);
    }
}
