//! Dense matrices over a [`Scalar`] field.

use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {}x{} matrix", data.len(), rows, cols)));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in diag.into_iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn block_diag(blocks: &[&Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        (i < self.rows && j < self.cols).then(|| &self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a.clone() * b.clone();
                        out.data[i * other.cols + j] = out.data[i * other.cols + j].clone() + prod;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Matrix<T>, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix<T>) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Matrix<T>) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// True when every anti-diagonal is constant.
    pub fn is_hankel(&self) -> bool {
        (0..self.rows)
            .all(|i| (0..self.cols).all(|j| i == 0 || j + 1 == self.cols || self[(i, j)] == self[(i - 1, j + 1)]))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    /// Submatrix selected by the given row and column indices (kept in order).
    pub fn submatrix(&self, rowset: &[usize], colset: &[usize]) -> Result<Self> {
        if rowset.iter().any(|&i| i >= self.rows) || colset.iter().any(|&j| j >= self.cols) {
            return Err(Error::Dimension("index out of range".into()));
        }
        Ok(Self::from_fn(rowset.len(), colset.len(), |i, j| self[(rowset[i], colset[j])].clone()))
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("det of a {}x{} matrix", self.rows, self.cols)));
        }
        T::determinant(self)
    }

    /// Determinant of the submatrix on `rowset` × `colset`.
    ///
    /// Both sets must have the same size and be strictly increasing. The empty
    /// minor is 1.
    pub fn minor(&self, rowset: &[usize], colset: &[usize]) -> Result<T> {
        if rowset.len() != colset.len() {
            return Err(Error::Dimension("row and column sets differ in size".into()));
        }
        let increasing = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        if !increasing(rowset) || !increasing(colset) {
            return Err(Error::Dimension("index sets must be strictly increasing".into()));
        }
        self.submatrix(rowset, colset)?.det()
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("inverse of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let p = pivot_row(&a, k).ok_or(Error::Singular)?;
            if p != k {
                a.swap_rows(p, k);
                inv.swap_rows(p, k);
            }
            let piv = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = a[(k, j)].clone() / piv.clone();
                inv[(k, j)] = inv[(k, j)].clone() / piv.clone();
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let ak = a[(k, j)].clone() * f.clone();
                    a[(i, j)] = a[(i, j)].clone() - ak;
                    let ik = inv[(k, j)].clone() * f.clone();
                    inv[(i, j)] = inv[(i, j)].clone() - ik;
                }
            }
        }
        if !T::EXACT && inv.data.iter().any(|v| !v.to_f64().is_finite()) {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    /// Factorization `self = L·D·Lᵀ` with `L` unit lower triangular and `D`
    /// diagonal, computed without pivoting.
    pub fn ldlt(&self) -> Result<(Self, Self)> {
        if !self.is_square() {
            return Err(Error::Dimension("ldlt needs a square matrix".into()));
        }
        if !self.is_symmetric() {
            return Err(Error::Structure("ldlt needs a symmetric matrix".into()));
        }
        let n = self.rows;
        let mut l = Self::identity(n);
        let mut d: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut dk = self[(k, k)].clone();
            for s in 0..k {
                dk = dk - l[(k, s)].clone() * l[(k, s)].clone() * d[s].clone();
            }
            if dk.is_zero() {
                return Err(Error::Factorization(k));
            }
            for i in k + 1..n {
                let mut v = self[(i, k)].clone();
                for s in 0..k {
                    v = v - l[(i, s)].clone() * l[(k, s)].clone() * d[s].clone();
                }
                l[(i, k)] = v / dk.clone();
            }
            d.push(dk);
        }
        Ok((l, Self::diagonal(d)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

fn pivot_row<T: Scalar>(a: &Matrix<T>, k: usize) -> Option<usize> {
    let mut best = None;
    let mut best_mag = 0.0;
    for i in k..a.rows {
        let mag = a[(i, k)].magnitude();
        if !a[(i, k)].is_zero() && (best.is_none() || mag > best_mag) {
            best = Some(i);
            best_mag = mag;
            if T::EXACT {
                break;
            }
        }
    }
    best
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn gaussian_det<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let n = m.rows;
    let mut a = m.clone();
    let mut det = T::one();
    for k in 0..n {
        let Some(p) = pivot_row(&a, k) else {
            return Ok(T::zero());
        };
        if p != k {
            a.swap_rows(p, k);
            det = -det;
        }
        let piv = a[(k, k)].clone();
        det = det * piv.clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() / piv.clone();
            for j in k..n {
                let v = a[(k, j)].clone() * f.clone();
                a[(i, j)] = a[(i, j)].clone() - v;
            }
        }
    }
    Ok(det)
}

/// Fraction-free (Bareiss) determinant. Rows are first scaled to integers.
pub(crate) fn bareiss_det(m: &Matrix<BigRational>) -> Result<BigRational> {
    let n = m.rows;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = m.row(i).iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        a.push(m.row(i).iter().map(|q| q.numer() * (&l / q.denom())).collect());
        scale *= l;
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(p, k);
                    negate = !negate;
                }
                None => return Ok(BigRational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut det = BigRational::new(a[n - 1][n - 1].clone(), scale);
    if negate {
        det = -det;
    }
    Ok(det)
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on a shape mismatch; use [`Matrix::matmul`] for a checked product.
impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs).expect("matrix shapes do not conform")
    }
}
