//! Reference solutions: commuting pairs and the 2x2 case.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::{canonicalize, is_commuting, HermitianPair};
use crate::matrix::ComplexMatrix;
use crate::measure::{atoms_only, RepresentingMeasure};
use crate::quadrature::integrate_adaptive;

/// `A = [[a11, a12], [conj a12, a22]]`, `B = diag(b1, b2)`. Only `|a12|` matters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoByTwoInstance {
    pub a11: f64,
    pub a22: f64,
    pub a12_abs: f64,
    pub b1: f64,
    pub b2: f64,
}

impl TwoByTwoInstance {
    pub fn new(a11: f64, a22: f64, a12: Complex<f64>, b1: f64, b2: f64) -> Result<Self> {
        let a12_abs = a12.norm();
        if ![a11, a22, a12_abs, b1, b2].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("2x2 parameters must be finite".into()));
        }
        if !(b2 > b1) {
            return Err(Error::InvalidInput(format!("need b1 < b2, got b1 = {b1}, b2 = {b2}")));
        }
        Ok(TwoByTwoInstance { a11, a22, a12_abs, b1, b2 })
    }

    pub fn matrices(&self) -> (ComplexMatrix<f64>, ComplexMatrix<f64>) {
        let a = ComplexMatrix::from_real_rows(&[&[self.a11, self.a12_abs], &[self.a12_abs, self.a22]]).unwrap();
        (a, ComplexMatrix::from_diag(&[self.b1, self.b2]))
    }

    fn check_inside(&self, x: f64) -> Result<()> {
        if x > self.b1 && x < self.b2 {
            Ok(())
        } else {
            Err(Error::OutOfSupport { x, b1: self.b1, b2: self.b2 })
        }
    }

    /// `exp((a11 (b2 - x) + a22 (x - b1)) / (b2 - b1))`
    fn prefactor(&self, x: f64) -> f64 {
        ((self.a11 * (self.b2 - x) + self.a22 * (x - self.b1)) / (self.b2 - self.b1)).exp()
    }

    /// The two branch points `t` where the eigenvalues of `A - tB` collide.
    pub fn branch_points(&self) -> (Complex<f64>, Complex<f64>) {
        let d = self.b2 - self.b1;
        let re = (self.a22 - self.a11) / d;
        let im = 2.0 * self.a12_abs / d;
        (Complex::new(re, im), Complex::new(re, -im))
    }
}

/// Atoms `e^{a_j} delta_{b_j}` from a simultaneous diagonalisation.
pub fn commuting_measure(pair: &HermitianPair) -> Result<RepresentingMeasure> {
    if !is_commuting(pair, 1e-12) {
        return Err(Error::NotCommuting);
    }
    // no shift: atoms sit at the eigenvalues of B themselves
    let cp = canonicalize(pair, f64::NEG_INFINITY)?;
    Ok(atoms_only(&cp))
}

/// Density of the 2x2 measure on `(b1, b2)` by quadrature of
/// `int_0^{|a12|} cos(c u) sinh(sqrt(|a12|^2 - u^2)) du`, `u = |a12| sin(theta)`.
pub fn density2(inst: &TwoByTwoInstance, x: f64) -> Result<f64> {
    inst.check_inside(x)?;
    let a = inst.a12_abs;
    if a == 0.0 {
        return Ok(0.0);
    }
    let d = inst.b2 - inst.b1;
    let c = (inst.b2 + inst.b1 - 2.0 * x) / d;
    let f = |th: f64| {
        let (s, co) = th.sin_cos();
        (c * a * s).cos() * (a * co).sinh() * a * co
    };
    let rough = a * a.sinh().max(1.0);
    let integral = integrate_adaptive(f, 0.0, std::f64::consts::FRAC_PI_2, 1e-13 * rough, 2000)?;
    Ok(4.0 / (d * std::f64::consts::PI) * inst.prefactor(x) * integral)
}

/// Mehta–Kumar series with denominator exponent `2j - 1`, summed until the
/// next term drops below `tail_tol` times the partial sum.
pub fn mehta_kumar(inst: &TwoByTwoInstance, x: f64, tail_tol: f64) -> Result<f64> {
    inst.check_inside(x)?;
    let a2 = inst.a12_abs * inst.a12_abs;
    if a2 == 0.0 {
        return Ok(0.0);
    }
    let d = inst.b2 - inst.b1;
    let p = (inst.b2 - x) * (x - inst.b1);
    let mut term = a2 / d;
    let mut sum = 0.0;
    for j in 1..10_000usize {
        sum += term;
        let jf = j as f64;
        term *= a2 * p / (d * d * (jf + 1.0) * jf);
        if term < tail_tol * sum {
            return Ok(inst.prefactor(x) * sum);
        }
    }
    Err(Error::NoConvergence { what: "Mehta-Kumar series", iterations: 10_000 })
}

/// `lambda_1(t) = a11 - b1 t + O(1/t)`, analytic off the segment joining the
/// branch points.
pub fn lambda1_explicit(inst: &TwoByTwoInstance, t: Complex<f64>) -> Result<Complex<f64>> {
    let a = inst.a12_abs;
    let u = Complex::new(inst.a11 - inst.a22, 0.0) + t * (inst.b2 - inst.b1);
    // sqrt(u^2 + 4a^2) = u sqrt(1 + 4a^2/u^2), cut exactly on u in i[-2a, 2a]
    let on_cut = u.re.abs() <= 1e-14 * (1.0 + u.norm()) && u.im.abs() <= 2.0 * a;
    if on_cut || u.norm() == 0.0 {
        return Err(Error::OnBranchCut(format!("{t}")));
    }
    let s = u * (Complex::new(1.0, 0.0) + 4.0 * a * a / (u * u)).sqrt();
    Ok(0.5 * (Complex::new(inst.a22 + inst.a11, 0.0) - t * (inst.b2 + inst.b1) + s))
}

/// The other root: `(a11 + a22) - (b1 + b2) t - lambda_1(t)`.
pub fn lambda2_explicit(inst: &TwoByTwoInstance, t: Complex<f64>) -> Result<Complex<f64>> {
    let l1 = lambda1_explicit(inst, t)?;
    Ok(Complex::new(inst.a11 + inst.a22, 0.0) - t * (inst.b1 + inst.b2) - l1)
}
