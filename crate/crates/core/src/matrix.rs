//! Row-major dense matrices.
//!
//! The same container carries floating entries (`DenseMatrix`) for norms and
//! decompositions, and exact rationals (`ExactMatrix`) where the quantities
//! involved are rational and equalities are asserted.

use std::ops::{Add, Index, IndexMut, Mul};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type DenseMatrix = Matrix<f64>;
pub type ExactMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Submatrix on the given row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_symmetric_by(&self, mut eq: impl FnMut(&T, &T) -> bool) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| eq(&self[(i, j)], &self[(j, i)])))
    }

    fn check_same_shape<U>(&self, other: &Matrix<U>) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Entrywise scalar product, summed in row-major order.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + &(a * b)))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::filled(self.rows, other.cols, T::zero());
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(l, j)];
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = std::mem::replace(cell, T::zero()) + &prod;
                }
            }
        }
        Ok(out)
    }
}

impl<T: Clone + Signed + for<'a> Add<&'a T, Output = T>> Matrix<T> {
    /// Entrywise l1 norm.
    pub fn l1(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, a| acc + &a.abs())
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|a| a.is_finite())
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|a| a * c)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Entrywise l-infinity norm.
    pub fn linf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.linf())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_symmetric_by(|a, b| (a - b).abs() <= tol)
    }
}

impl ExactMatrix {
    pub fn to_f64(&self) -> DenseMatrix {
        use num_traits::ToPrimitive;
        self.map(|a| a.to_f64().unwrap_or(f64::NAN))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn inner_of_identities_is_dimension() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(i2.inner(&i2).unwrap(), 2.0);
    }

    #[test]
    fn inner_matches_naive_double_loop() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| (i as f64 + 1.0) * 0.37 - j as f64 * 1.1);
        let b = DenseMatrix::from_fn(3, 3, |i, j| ((i * 3 + j) as f64).sin());
        let mut naive = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                naive += a[(i, j)] * b[(i, j)];
            }
        }
        assert_eq!(a.inner(&b).unwrap(), naive);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = DenseMatrix::zeros(2, 3);
        let b = DenseMatrix::zeros(3, 2);
        assert!(matches!(a.inner(&b), Err(Error::Shape(_))));
        assert!(a.matmul(&a).is_err());
        assert!(DenseMatrix::from_vec(2, 2, vec![1.0]).is_err());
    }

    #[test]
    fn exact_l1_and_matmul() {
        let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        let a = ExactMatrix::from_vec(2, 2, vec![r(1, 2), r(-1, 3), r(0, 1), r(1, 6)]).unwrap();
        assert_eq!(a.l1(), r(1, 1));
        let id = ExactMatrix::from_fn(2, 2, |i, j| if i == j { r(1, 1) } else { r(0, 1) });
        assert_eq!(a.matmul(&id).unwrap(), a);
    }
}
