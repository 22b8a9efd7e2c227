//! Small dense complex matrices.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cabs, Real};

/// Square `n x n` complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![T::one(); n])
    }

    pub fn from_diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        m
    }

    /// Builds a matrix from rows; fails unless every row has `rows.len()` entries.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("matrix must have at least one row".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::new(T::from_real(x), T::zero())).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex<T>]> {
        self.data.chunks(self.n)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        ComplexMatrix { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &z| m.max(cabs(z)))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// `(M + M*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = Complex::new(T::from_real(0.5), T::zero());
        (self + &self.adjoint()).scale(half)
    }

    /// `max |M - M*|`.
    pub fn hermitian_residual(&self) -> T {
        (self - &self.adjoint()).max_abs()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::from_real(z.re.as_f64()), U::from_real(z.im.as_f64())))
                .collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// Reorders columns: column `k` of the result is column `perm[k]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for (k, &p) in perm.iter().enumerate() {
            for i in 0..n {
                m[(i, k)] = self[(i, p)];
            }
        }
        m
    }

    /// Determinant and `tr(M^{-1})` from one LU factorisation with partial pivoting.
    ///
    /// `tr(M^{-1})` is `None` when the matrix is numerically singular.
    pub fn det_and_trace_inverse(&self) -> (Complex<T>, Option<Complex<T>>) {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut det = Complex::<T>::one();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[i * n + k].norm_sqr()))
                .fold((k, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= T::zero() {
                return (Complex::zero(), None);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                det = -det;
            }
            let piv = lu[k * n + k];
            det = det * piv;
            for i in k + 1..n {
                let f = lu[i * n + k] / piv;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] = lu[i * n + j] - f * u;
                }
            }
        }
        // tr(M^{-1}) = sum_j (M^{-1})_{jj}; solve M x = e_j for each j
        let mut tr = Complex::<T>::zero();
        let mut x = vec![Complex::<T>::zero(); n];
        for j in 0..n {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = if perm[i] == j { Complex::one() } else { Complex::zero() };
            }
            for i in 0..n {
                let mut s = x[i];
                for k in 0..i {
                    s = s - lu[i * n + k] * x[k];
                }
                x[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[i];
                for k in i + 1..n {
                    s = s - lu[i * n + k] * x[k];
                }
                x[i] = s / lu[i * n + i];
            }
            tr = tr + x[j];
        }
        (det, Some(tr))
    }

    pub fn det(&self) -> Complex<T> {
        self.det_and_trace_inverse().0
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, o: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.n, o.n);
        ComplexMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, o: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.n, o.n);
        ComplexMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, o: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] = m.data[i * n + j] + a * o.data[k * n + j];
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_determinant_and_inverse_trace() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        let (det, tr) = m.det_and_trace_inverse();
        assert!((det.re - 5.0).abs() < 1e-14);
        // inverse is [[3,-1],[-1,2]]/5
        assert!((tr.unwrap().re - 1.0).abs() < 1e-14);
        let z = ComplexMatrix::<f64>::zeros(3);
        assert!(z.det_and_trace_inverse().1.is_none());
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let r = ComplexMatrix::<f64>::from_rows(vec![vec![Complex::new(1.0, 0.0)], vec![]]);
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }
}
