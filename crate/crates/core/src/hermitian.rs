//! Hermitian pairs `(A, B)`, their canonical form, and direct evaluation of
//! `Tr exp(A - tB)`.

use num_complex::Complex;
use num_traits::Zero;

use crate::eigh::{eigh, normalize_phases};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Default Hermiticity / semidefiniteness tolerance for [`validate_pair`].
pub const DEFAULT_HERM_TOL: f64 = 1e-10;

/// Relative gap below which two eigenvalues of `B` are treated as equal.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// A validated pair: `A` Hermitian, `B` Hermitian positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPair {
    pub a: ComplexMatrix<f64>,
    pub b: ComplexMatrix<f64>,
    pub herm_tol: f64,
    /// Largest entry change made when replacing `A`, `B` by their Hermitian parts.
    pub symmetrization: f64,
}

impl HermitianPair {
    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// `Tr exp(A - tB)`.
    pub fn trace_exp(&self, t: f64) -> Result<f64> {
        trace_exp(&self.a, &self.b, t)
    }

    pub fn is_commuting(&self, tol: f64) -> bool {
        is_commuting(self, tol)
    }
}

/// Checks shapes, Hermiticity and semidefiniteness, and symmetrises both matrices.
pub fn validate_pair(a: ComplexMatrix<f64>, b: ComplexMatrix<f64>, herm_tol: f64) -> Result<HermitianPair> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!("A is {0}x{0} but B is {1}x{1}", a.n(), b.n())));
    }
    if !(herm_tol >= 0.0) {
        return Err(Error::InvalidInput(format!("herm_tol must be nonnegative, got {herm_tol}")));
    }
    for (name, m) in [("A", &a), ("B", &b)] {
        if m.rows().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(format!("matrix {name} has non-finite entries")));
        }
    }
    let mut symmetrization = 0.0f64;
    let mut fixed = Vec::with_capacity(2);
    for (name, m) in [("A", a), ("B", b)] {
        let residual = m.hermitian_residual();
        let tolerance = herm_tol * m.max_abs().max(1.0);
        if residual > tolerance {
            return Err(Error::NotHermitian { which: name, residual, tolerance });
        }
        let h = m.hermitian_part();
        symmetrization = symmetrization.max((&h - &m).max_abs());
        fixed.push(h);
    }
    let b = fixed.pop().unwrap();
    let a = fixed.pop().unwrap();
    let tolerance = herm_tol * b.max_abs().max(1.0);
    let min_eigenvalue = eigh(&b)?.eigenvalues[0];
    if min_eigenvalue < -tolerance {
        return Err(Error::NotPsd { min_eigenvalue, tolerance });
    }
    Ok(HermitianPair { a, b, herm_tol, symmetrization })
}

/// `(A~, B~)` with `B~ = diag(b)` ascending, `A~` block-diagonal inside
/// every group of equal `b`, and `b[0] > 0` after the recorded shift.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalPair {
    pub a_t: ComplexMatrix<f64>,
    /// Diagonal of `B~`, shift included.
    pub b: Vec<f64>,
    /// Unitary with `T0* A T0 = A~` and `T0* B T0 + eps I = diag(b)`.
    pub t0: ComplexMatrix<f64>,
    pub epsilon: f64,
}

impl CanonicalPair {
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Real diagonal `a~_jj`.
    pub fn a_diag(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.a_t[(j, j)].re).collect()
    }

    pub fn b_matrix(&self) -> ComplexMatrix<f64> {
        ComplexMatrix::from_diag(&self.b)
    }

    /// `Tr exp(A~ - t B~)`, which equals `exp(-eps t) Tr exp(A - tB)`.
    pub fn trace_exp(&self, t: f64) -> Result<f64> {
        trace_exp(&self.a_t, &self.b_matrix(), t)
    }

    /// True when `A~` is diagonal, i.e. `A` and `B` commute.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.n();
        let scale = self.a_t.max_abs().max(1.0);
        (0..n).all(|i| (0..n).all(|j| i == j || self.a_t[(i, j)].norm() <= tol * scale))
    }

    /// Index ranges of groups of equal `b`.
    pub fn groups(&self) -> Vec<std::ops::Range<usize>> {
        group_ranges(&self.b, 0.0)
    }

    /// Number of distinct values in `b`.
    pub fn distinct_b(&self) -> usize {
        self.groups().len()
    }
}

/// Default floor below which `B` counts as singular: `1e-8 max(1, |B|_max)`.
pub fn default_pd_floor(pair: &HermitianPair) -> f64 {
    1e-8 * pair.b.max_abs().max(1.0)
}

fn group_ranges(b: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=b.len() {
        if k == b.len() || b[k] - b[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Brings the pair into canonical form and shifts `B` to be positive definite.
///
/// If the smallest eigenvalue of `B` is at most `pd_floor`, every `b~_j` is
/// raised by `eps = 2 pd_floor - min eig(B)`.
pub fn canonicalize(pair: &HermitianPair, pd_floor: f64) -> Result<CanonicalPair> {
    let n = pair.n();
    let eb = eigh(&pair.b)?;
    let mut b = eb.eigenvalues;
    let mut t0 = eb.eigenvectors;
    let tol = DEGENERACY_TOL * b[n - 1].abs().max(1.0);
    let groups = group_ranges(&b, tol);

    let a_rot = &(&t0.adjoint() * &pair.a) * &t0;
    for g in groups.iter().filter(|g| g.len() > 1) {
        let k = g.len();
        let mut block = ComplexMatrix::<f64>::zeros(k);
        for (bi, i) in g.clone().enumerate() {
            for (bj, j) in g.clone().enumerate() {
                block[(bi, bj)] = a_rot[(i, j)];
            }
        }
        let w = eigh(&block)?.eigenvectors;
        // columns of T0 in this group become T0[:, g] W
        let old = t0.clone();
        for row in 0..n {
            for (bj, j) in g.clone().enumerate() {
                let mut s = Complex::zero();
                for (bi, i) in g.clone().enumerate() {
                    s += old[(row, i)] * w[(bi, bj)];
                }
                t0[(row, j)] = s;
            }
        }
        let mean = b[g.clone()].iter().sum::<f64>() / k as f64;
        for v in &mut b[g.clone()] {
            *v = mean;
        }
    }
    normalize_phases(&mut t0);

    let mut a_t = &(&t0.adjoint() * &pair.a) * &t0;
    for g in &groups {
        for i in g.clone() {
            for j in g.clone() {
                if i != j {
                    a_t[(i, j)] = Complex::zero();
                }
            }
        }
    }
    let a_t = a_t.hermitian_part();
    let mut a_t = a_t;
    for i in 0..n {
        a_t[(i, i)] = Complex::new(a_t[(i, i)].re, 0.0);
    }

    let epsilon = if b[0] <= pd_floor { 2.0 * pd_floor - b[0] } else { 0.0 };
    for v in &mut b {
        *v += epsilon;
    }
    Ok(CanonicalPair { a_t, b, t0, epsilon })
}

/// `Tr exp(A - tB) = sum_j exp(lambda_j)` over the eigenvalues of `A - tB`.
pub fn trace_exp<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, t: T) -> Result<T> {
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!("t must be finite, got {t}")));
    }
    let m = a - &b.scale_real(t);
    let d = eigh(&m)?;
    Ok(d.eigenvalues.iter().map(|l| l.exp()).sum())
}

/// `|AB - BA|_max <= tol max(1, |A|_max |B|_max)`.
pub fn is_commuting(pair: &HermitianPair, tol: f64) -> bool {
    let c = pair.a.commutator(&pair.b).max_abs();
    c <= tol * (pair.a.max_abs() * pair.b.max_abs()).max(1.0)
}

/// Coefficients `c_0..c_m` of `t -> Tr (A + tB)^m`, computed by multiplying
/// matrices whose entries are polynomials in `t`.
///
/// Requires `A` to be positive semidefinite as well.
pub fn lieb_seiringer_coeffs(pair: &HermitianPair, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidInput("power m must be at least 1".into()));
    }
    let tolerance = pair.herm_tol * pair.a.max_abs().max(1.0);
    let min_a = eigh(&pair.a)?.eigenvalues[0];
    if min_a < -tolerance {
        return Err(Error::HypothesisViolated(format!(
            "A must be positive semidefinite; smallest eigenvalue {min_a:e}"
        )));
    }
    let n = pair.n();
    // q[i][j][k]: coefficient of t^k in entry (i, j) of (A + tB)^p
    let mut q: Vec<Vec<Vec<Complex<f64>>>> = (0..n)
        .map(|i| (0..n).map(|j| vec![if i == j { Complex::new(1.0, 0.0) } else { Complex::zero() }]).collect())
        .collect();
    for p in 0..m {
        let mut next = vec![vec![vec![Complex::<f64>::zero(); p + 2]; n]; n];
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    let a = pair.a[(l, j)];
                    let b = pair.b[(l, j)];
                    if a.is_zero() && b.is_zero() {
                        continue;
                    }
                    for (k, &c) in q[i][l].iter().enumerate() {
                        next[i][j][k] += c * a;
                        next[i][j][k + 1] += c * b;
                    }
                }
            }
        }
        q = next;
    }
    Ok((0..=m).map(|k| (0..n).map(|i| q[i][i][k].re).sum()).collect())
}
