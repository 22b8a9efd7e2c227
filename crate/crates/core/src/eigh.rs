//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{cabs, r, Real};

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and the unitary matrix whose columns are the
/// corresponding eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    /// `U diag(lambda) U*`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let u = &self.eigenvectors;
        let d = ComplexMatrix::from_diag(&self.eigenvalues);
        &(u * &d) * &u.adjoint()
    }
}

fn off_diagonal_mass<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.n();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input is replaced by its Hermitian part first. Iteration stops once
/// the off-diagonal Frobenius mass drops below `50 eps ||M||_F`
/// (about `1e-14` in `f64`).
pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = m.n();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);
    let norm = a.frobenius();
    let tol = T::epsilon() * r::<T>(50.0) * norm;

    let mut converged = off_diagonal_mass(&a) <= tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { what: "Jacobi eigensolver", iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_mass(&a) <= tol;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = v.permute_columns(&order);
    normalize_phases(&mut eigenvectors);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// Makes the first non-negligible entry of each column real and positive.
pub fn normalize_phases<T: Real>(u: &mut ComplexMatrix<T>) {
    let n = u.n();
    let floor = r::<T>(1e-10);
    for j in 0..n {
        let Some(lead) = (0..n).map(|i| u[(i, j)]).find(|z| cabs(*z) > floor) else {
            continue;
        };
        let phase = lead.conj() / cabs(lead);
        for i in 0..n {
            u[(i, j)] = u[(i, j)] * phase;
        }
    }
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let h = cabs(apq);
    if h.is_zero() {
        return;
    }
    let n = a.n();
    let phase = apq / h; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (h + h);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    // G = D P with D = diag(1, e^{-i phi}) on (p, q)
    let cc = Complex::new(c, T::zero());
    let ss = Complex::new(s, T::zero());
    let gpp = cc;
    let gpq = ss;
    let gqp = -ss * phase.conj();
    let gqq = cc * phase.conj();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(app - t * h, T::zero());
    a[(q, q)] = Complex::new(aqq + t * h, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;
    use crate::scalar::c;

    #[test]
    fn diagonal_input_gives_sorted_permutation() {
        let m = ComplexMatrix::<f64>::from_diag(&[3.0, 1.0, 2.0]);
        let d = eigh(&m).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 2.0, 3.0]);
        let u = &d.eigenvectors;
        assert_eq!(u[(1, 0)], c(1.0, 0.0));
        assert_eq!(u[(2, 1)], c(1.0, 0.0));
        assert_eq!(u[(0, 2)], c(1.0, 0.0));
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let d = eigh(&m).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_reconstructs_in_all_precisions() {
        let rows = vec![
            vec![c(2.0, 0.0), c(1.0, -0.5), c(0.0, 0.25)],
            vec![c(1.0, 0.5), c(-1.0, 0.0), c(0.3, 0.7)],
            vec![c(0.0, -0.25), c(0.3, -0.7), c(0.5, 0.0)],
        ];
        let m64 = ComplexMatrix::<f64>::from_rows(rows).unwrap();
        let d = eigh(&m64).unwrap();
        assert!((&d.reconstruct() - &m64).max_abs() < 1e-14);

        let m32: ComplexMatrix<f32> = m64.cast();
        let d32 = eigh(&m32).unwrap();
        assert!((&d32.reconstruct() - &m32).max_abs() < 1e-5);

        let mdd: ComplexMatrix<Dd> = m64.cast();
        let ddd = eigh(&mdd).unwrap();
        assert!((&ddd.reconstruct() - &mdd).max_abs().as_f64() < 1e-29);
        for (a, b) in d.eigenvalues.iter().zip(&ddd.eigenvalues) {
            assert!((a - b.as_f64()).abs() < 1e-14);
        }
    }
}
