//! Univariate complex polynomials and simultaneous (Aberth) root finding.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{cabs, r, Real};

/// `sum_k coeffs[k] z^k`.
pub fn horner<T: Real>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
}

/// Value and first derivative.
pub fn horner_with_derivative<T: Real>(coeffs: &[Complex<T>], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Newton correction `p(z)/p'(z)` for `p(z) = det(zI - M)`, using
/// `p'/p = tr((zI - M)^{-1})`. Returns zero when `z` is an exact eigenvalue.
pub fn det_newton<T: Real>(m: &ComplexMatrix<T>, z: Complex<T>) -> Complex<T> {
    let n = m.n();
    let mut s = m.scale_real(-T::one());
    for i in 0..n {
        s[(i, i)] = s[(i, i)] + z;
    }
    match s.det_and_trace_inverse() {
        (_, Some(tr)) if !tr.is_zero() && tr.re.is_finite() && tr.im.is_finite() => Complex::<T>::one() / tr,
        _ => Complex::zero(),
    }
}

/// Aberth–Ehrlich iteration on `roots` in place.
///
/// `newton(z)` returns the Newton correction `p(z)/p'(z)`. Iterates until
/// every correction is below `tol * max(1, |z|)`; returns the number of sweeps.
pub fn aberth<T: Real, F>(roots: &mut [Complex<T>], newton: F, tol: T, max_iter: usize) -> Result<usize>
where
    F: Fn(Complex<T>) -> Complex<T>,
{
    let n = roots.len();
    for it in 1..=max_iter {
        let mut worst = T::zero();
        for i in 0..n {
            let zi = roots[i];
            let nt = newton(zi);
            if nt.is_zero() {
                continue;
            }
            let mut s = Complex::<T>::zero();
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    let d = zi - zj;
                    if !d.is_zero() {
                        s = s + Complex::<T>::one() / d;
                    }
                }
            }
            let w = nt / (Complex::<T>::one() - nt * s);
            let w = if w.re.is_finite() && w.im.is_finite() { w } else { nt };
            roots[i] = zi - w;
            let rel = cabs(w) / cabs(zi).max(T::one());
            if rel > worst {
                worst = rel;
            }
        }
        if worst <= tol {
            return Ok(it);
        }
    }
    Err(Error::NoConvergence { what: "Aberth iteration", iterations: max_iter })
}

/// All roots of the polynomial with ascending coefficients `coeffs`
/// (leading coefficient nonzero).
pub fn poly_roots<T: Real>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if lead.is_zero() {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    let monic: Vec<Complex<T>> = coeffs.iter().map(|&c| c / lead).collect();
    // Fujiwara bound halved, centred at the root mean
    let center = -monic[deg - 1] / T::of_usize(deg);
    let mut bound = T::zero();
    for (k, c) in monic[..deg].iter().enumerate() {
        let v = cabs(*c).powf(T::one() / T::of_usize(deg - k));
        if v > bound {
            bound = v;
        }
    }
    let radius = bound.max(r(1e-300));
    let mut roots: Vec<Complex<T>> = (0..deg)
        .map(|k| {
            let th = r::<T>(2.0) * T::PI() * T::of_usize(k) / T::of_usize(deg) + r(0.4);
            center + Complex::new(th.cos(), th.sin()) * radius
        })
        .collect();
    aberth(
        &mut roots,
        |z| {
            let (p, dp) = horner_with_derivative(&monic, z);
            if dp.is_zero() {
                Complex::zero()
            } else {
                p / dp
            }
        },
        T::epsilon() * r(4.0),
        500,
    )
    .or_else(|e| {
        // accept a stalled iteration whose residuals are at roundoff level
        let scale: T = monic.iter().map(|c| cabs(*c)).sum();
        let ok = roots.iter().all(|&z| {
            let zz = cabs(z).max(T::one());
            cabs(horner(&monic, z)) <= T::epsilon() * r(1e3) * scale * zz.powi(deg as i32)
        });
        if ok {
            Ok(0)
        } else {
            Err(e)
        }
    })?;
    Ok(roots)
}

/// Product `prod_j (z - roots[j])`.
pub fn from_roots_eval<T: Real>(roots: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    roots.iter().fold(Complex::one(), |acc, &w| acc * (z - w))
}
