//! Numerical pass/fail checks: Laplace identity, positivity, support,
//! representation equivalence, branch invariants, complete monotonicity and
//! the polynomial-coefficient reformulation.

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::branch::{charpoly, pencil, roots_at, BranchTrack};
use crate::error::Result;
use crate::hermitian::{lieb_seiringer_coeffs, trace_exp, CanonicalPair, HermitianPair};
use crate::matrix::ComplexMatrix;
use crate::measure::{compute_measure, laplace_transform, DensityEngine, MeasureConfig, Representation, RepresentingMeasure};

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Wall-clock seconds; kept out of serialized reports.
    #[serde(skip)]
    pub runtime: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check { name: name.into(), residual, tolerance, passed: residual <= tolerance, runtime: 0.0 }
    }

    fn timed(mut self, start: Instant) -> Self {
        self.runtime = start.elapsed().as_secs_f64();
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// Things observed but not asserted.
    pub notes: Vec<String>,
    pub instance_digest: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// sha256 over the bit patterns of both matrices followed by `config`.
pub fn instance_digest(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, config: &str) -> String {
    let mut h = Sha256::new();
    h.update((a.n() as u64).to_le_bytes());
    for m in [a, b] {
        for row in m.rows() {
            for z in row {
                h.update(z.re.to_bits().to_le_bytes());
                h.update(z.im.to_bits().to_le_bytes());
            }
        }
    }
    h.update(config.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Relative Laplace residual at each `t`.
pub fn verify_laplace(pair: &HermitianPair, mu: &RepresentingMeasure, t_samples: &[f64]) -> Result<Vec<Check>> {
    let mut out = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let start = Instant::now();
        let f = pair.trace_exp(t)?;
        let res = (laplace_transform(mu, t) - f).abs() / f;
        out.push(Check::new(format!("laplace t={t}"), res, 1e-6).timed(start));
    }
    Ok(out)
}

/// `(-1)^m Delta_h^m f / h^m >= -tol_m` on a uniform grid, `m = 0..=m_max`,
/// with `tol_m = 1e-7 m! h^-m max|f|`. Residual is the worst violation.
pub fn verify_cm_samples(f: &[f64], h: f64, m_max: usize) -> Vec<Check> {
    let fmax = f.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let mut diff = f.to_vec();
    let mut fact = 1.0;
    let mut out = Vec::new();
    for m in 0..=m_max.min(f.len().saturating_sub(1)) {
        if m > 0 {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
            fact *= m as f64;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let hm = h.powi(-(m as i32));
        let worst = diff.iter().fold(0.0f64, |a, &d| a.max(-sign * d)) * hm;
        let tol = 1e-7 * fact * hm * fmax;
        out.push(Check::new(format!("complete monotonicity m={m}"), worst, tol));
    }
    out
}

/// Complete monotonicity of `t -> Tr exp(A - tB)` on `t_grid` (uniform).
pub fn verify_cm(pair: &HermitianPair, m_max: usize, t_grid: &[f64]) -> Result<Vec<Check>> {
    let start = Instant::now();
    let f: Vec<f64> = t_grid.iter().map(|&t| trace_exp(&pair.a, &pair.b, t)).collect::<Result<_>>()?;
    let h = if t_grid.len() > 1 { t_grid[1] - t_grid[0] } else { 1.0 };
    Ok(verify_cm_samples(&f, h, m_max).into_iter().map(|c| c.timed(start)).collect())
}

/// `n` points spaced uniformly on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// Minimum grid density against `-1e-9 scale`.
pub fn verify_positivity(mu: &RepresentingMeasure) -> Check {
    let min = mu.density.min_value().unwrap_or(0.0);
    Check::new("positivity", (-min).max(0.0), 1e-9 * mu.scale())
}

/// Nonnegativity of the coefficients of `Tr (A + tB)^m` for `m = 1..=m_max`,
/// and agreement with an evaluate-then-interpolate reconstruction.
pub fn verify_reformulation_i(pair: &HermitianPair, m_max: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let start = Instant::now();
        let c = lieb_seiringer_coeffs(pair, m)?;
        let scale = c.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        let worst = c.iter().fold(0.0f64, |a, &x| a.max(-x));
        out.push(Check::new(format!("coefficients nonnegative m={m}"), worst, 1e-10 * scale).timed(start));

        let start = Instant::now();
        let d = interpolated_coeffs(&pair.a, &pair.b, m);
        let rel = c
            .iter()
            .zip(&d)
            .map(|(x, y)| (x - y).abs() / x.abs().max(1e-300))
            .fold(0.0, f64::max);
        out.push(Check::new(format!("coefficients interpolation m={m}"), rel, 1e-8).timed(start));
    }
    Ok(out)
}

/// Coefficients of `t -> Tr (A + tB)^m` from its values on a circle of radius
/// `|A|_F / |B|_F`, by discrete Fourier transform.
pub fn interpolated_coeffs(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, m: usize) -> Vec<f64> {
    let rho = if b.frobenius() > 0.0 { (a.frobenius() / b.frobenius()).max(1e-3) } else { 1.0 };
    let np = m + 1;
    let vals: Vec<Complex<f64>> = (0..np)
        .map(|j| {
            let t = Complex::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / np as f64);
            let x = a + &b.scale(t);
            let mut p = x.clone();
            for _ in 1..m {
                p = &p * &x;
            }
            p.trace()
        })
        .collect();
    (0..np)
        .map(|k| {
            let s: Complex<f64> = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * ((j * k) % np) as f64 / np as f64))
                .sum();
            s.re / (np as f64 * rho.powi(k as i32))
        })
        .collect()
}

/// Closure, trace identity, conjugate symmetry and the product identity at
/// `samples` random `(zeta, t)`.
pub fn verify_branches(cp: &CanonicalPair, track: &BranchTrack<f64>, scale: f64, samples: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let start = Instant::now();
    out.push(Check::new("branch closure", track.closure_residual, 1e-9 * scale).timed(start));

    let start = Instant::now();
    let tra: f64 = cp.a_diag().iter().sum();
    let trb: f64 = cp.b.iter().sum();
    let mut worst = 0.0f64;
    for (k, z) in track.points.iter().enumerate() {
        let want = Complex::new(tra, 0.0) - z * trb;
        let got: Complex<f64> = track.values[k].iter().sum();
        worst = worst.max((got - want).norm() / want.norm().max(1.0));
    }
    out.push(Check::new("branch trace identity", worst, 1e-9).timed(start));

    let start = Instant::now();
    let nn = track.points.len();
    let mut worst = 0.0f64;
    for k in 1..nn {
        for j in 0..track.n() {
            worst = worst.max((track.values[k][j] - track.values[nn - k][j].conj()).norm());
        }
    }
    out.push(Check::new("branch conjugate symmetry", worst, 1e-10 * scale).timed(start));

    let start = Instant::now();
    let cpoly = charpoly(cp)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = track.contour.radius;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let t = disk(&mut rng, r);
        let roots = roots_at(cp, &cpoly, t)?;
        let zr = 1.0 + roots.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let zeta = disk(&mut rng, zr);
        let prod: Complex<f64> = roots.iter().map(|l| zeta - l).product();
        let mut m = pencil(&cp.a_t, &cp.b, t).scale_real(-1.0);
        for i in 0..cp.n() {
            m[(i, i)] += zeta;
        }
        let size: f64 = roots.iter().map(|l| zeta.norm() + l.norm()).product();
        worst = worst.max((prod - m.det()).norm() / size.max(1.0));
    }
    out.push(Check::new("branch product identity", worst, 1e-8).timed(start));
    Ok(out)
}

fn disk(rng: &mut ChaCha8Rng, r: f64) -> Complex<f64> {
    let rad = r * rng.gen::<f64>().sqrt();
    Complex::from_polar(rad, 2.0 * std::f64::consts::PI * rng.gen::<f64>())
}

/// Lower vs upper at every grid point, the all-branch sum at `samples`
/// random `t`, imaginary residuals, and the support probes.
pub fn verify_representations(engine: &DensityEngine, mu: &RepresentingMeasure, samples: usize, seed: u64) -> Result<Vec<Check>> {
    let scale = mu.scale();
    let mut out = Vec::new();

    let start = Instant::now();
    let mut worst = 0.0f64;
    for &t in &mu.density.points {
        let lo = engine.lower(t)?.value;
        let up = engine.upper(t)?.value;
        worst = worst.max((lo - up).abs());
    }
    out.push(Check::new("lower equals upper", worst, 1e-9 * scale).timed(start));

    let start = Instant::now();
    let (b1, bn) = mu.support;
    let w = bn - b1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let t = b1 - 0.1 * w + 1.2 * w * rng.gen::<f64>();
        worst = worst.max(engine.gap(t)?);
    }
    out.push(Check::new("all-branch sum vanishes", worst, 1e-9 * scale).timed(start));

    let start = Instant::now();
    let d = &mu.density;
    let worst = (0..d.len()).map(|i| d.imag_residuals[i] / (1.0 + d.values[i].abs())).fold(0.0, f64::max);
    out.push(Check::new("imaginary residual", worst, 1e-9).timed(start));

    let start = Instant::now();
    let mut worst = 0.0f64;
    for t in [b1 - 0.1 * w, bn + 0.1 * w] {
        for rep in [Representation::Lower, Representation::Upper] {
            worst = worst.max(engine.eval(t, rep)?.value.abs());
        }
    }
    out.push(Check::new("support", worst, 1e-10 * scale).timed(start));
    Ok(out)
}

/// Settings for a full verification run.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub measure: MeasureConfig,
    pub t_samples: Vec<f64>,
    /// Highest difference order and highest power in the coefficient check.
    pub m_max: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { measure: MeasureConfig::default(), t_samples: vec![0.0, 0.5, 1.0, 2.0, 5.0], m_max: 8, seed: 0 }
    }
}

/// Computes the measure and runs every applicable check.
pub fn verify_all(pair: &HermitianPair, cfg: &VerifyConfig, digest: String) -> Result<VerificationReport> {
    let start = Instant::now();
    let (mu, engine) = compute_measure(pair, &cfg.measure)?;
    let mut report = VerificationReport { instance_digest: digest, ..Default::default() };

    let f0 = pair.trace_exp(0.0)?;
    report.checks.push(Check::new("total mass", (mu.total_mass() - f0).abs() / f0, 1e-6).timed(start));
    report.checks.extend(verify_laplace(pair, &mu, &cfg.t_samples)?);
    report.checks.push(verify_positivity(&mu));
    match &engine {
        Some(e) => {
            report.checks.extend(verify_representations(e, &mu, 10, cfg.seed)?);
            report.checks.extend(verify_branches(e.canonical(), e.track(), mu.scale(), 20, cfg.seed)?);
            let inner = mu.density.min_value().unwrap_or(0.0);
            report.notes.push(format!("minimum interior density {inner:e}"));
        }
        None => report.notes.push("commuting pair: atoms only".into()),
    }
    report.checks.extend(verify_cm(pair, cfg.m_max, &uniform_grid(0.0, 5.0, 64))?);
    match verify_reformulation_i(pair, cfg.m_max) {
        Ok(c) => report.checks.extend(c),
        Err(crate::error::Error::HypothesisViolated(msg)) => report.notes.push(format!("coefficient check skipped: {msg}")),
        Err(e) => return Err(e),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{validate_pair, DEFAULT_HERM_TOL};
    use crate::random::{random_pair, random_psd_pair};

    #[test]
    fn cm_prototype_and_negative_control() {
        let grid = uniform_grid(0.0, 5.0, 64);
        let h = grid[1] - grid[0];
        let f: Vec<f64> = grid.iter().map(|t| (-t).exp()).collect();
        assert!(verify_cm_samples(&f, h, 10).iter().all(|c| c.passed));

        let grid = uniform_grid(0.0, 3.0, 64);
        let f: Vec<f64> = grid.iter().map(|t| (-t).exp() * t.cos()).collect();
        let checks = verify_cm_samples(&f, grid[1] - grid[0], 4);
        // m = 1: -f' = e^{-t}(cos t + sin t) turns negative past 3pi/4
        assert!(!checks[1].passed);
        assert!(checks.iter().any(|c| !c.passed));
    }

    #[test]
    fn reformulation_examples() {
        let i = ComplexMatrix::<f64>::identity(3);
        let p = validate_pair(i.clone(), i, DEFAULT_HERM_TOL).unwrap();
        assert!(verify_reformulation_i(&p, 6).unwrap().iter().all(|c| c.passed));
        let (a, b) = random_psd_pair(3, 5).unwrap();
        let p = validate_pair(a, b, DEFAULT_HERM_TOL).unwrap();
        let checks = verify_reformulation_i(&p, 13).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let (a, b) = random_pair(3, 5).unwrap();
        let p = validate_pair(a, b, DEFAULT_HERM_TOL).unwrap();
        assert!(verify_reformulation_i(&p, 3).is_err());
    }

    #[test]
    fn interpolation_recovers_binomials() {
        let i = ComplexMatrix::<f64>::identity(2);
        let c = interpolated_coeffs(&i, &i, 4);
        for (k, want) in [2.0, 8.0, 12.0, 8.0, 2.0].iter().enumerate() {
            assert!((c[k] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn commuting_report_passes() {
        let p = validate_pair(ComplexMatrix::from_diag(&[1.0, -0.5]), ComplexMatrix::from_diag(&[0.3, 2.0]), DEFAULT_HERM_TOL)
            .unwrap();
        let r = verify_all(&p, &VerifyConfig::default(), String::new()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let lap = r.checks.iter().find(|c| c.name == "laplace t=1").unwrap();
        assert!(lap.residual <= 1e-12);
    }

    #[test]
    fn random_report_passes() {
        let (a, b) = random_pair(3, 11).unwrap();
        let p = validate_pair(a, b, DEFAULT_HERM_TOL).unwrap();
        let r = verify_all(&p, &VerifyConfig::default(), String::new()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let mass = r.checks.iter().find(|c| c.name == "total mass").unwrap();
        let lap0 = r.checks.iter().find(|c| c.name == "laplace t=0").unwrap();
        assert_eq!(mass.residual, lap0.residual);
    }

    #[test]
    fn digest_depends_on_config() {
        let i = ComplexMatrix::<f64>::identity(2);
        let d1 = instance_digest(&i, &i, "grid=64");
        assert_eq!(d1, instance_digest(&i, &i, "grid=64"));
        assert_ne!(d1, instance_digest(&i, &i, "grid=32"));
        assert_eq!(d1.len(), 64);
    }
}
