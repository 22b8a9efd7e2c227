//! File formats and the commands behind the `bmv` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::branch::TrackConfig;
use crate::closed_form::{density2, mehta_kumar, TwoByTwoInstance};
use crate::error::{Error, Result};
use crate::hermitian::{validate_pair, HermitianPair, DEFAULT_HERM_TOL};
use crate::matrix::ComplexMatrix;
use crate::measure::{compute_measure, MeasureConfig, RepresentingMeasure, DEFAULT_QTOL};
use crate::random::random_pair;
use crate::verify::{instance_digest, verify_all, VerificationReport, VerifyConfig};

/// A matrix pair on disk; entries are `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_matrices(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>) -> Self {
        let conv = |m: &ComplexMatrix<f64>| m.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
        InstanceFile { n: a.n(), a: conv(a), b: conv(b), name: None, seed: None }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    fn matrix(&self, which: &str, rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix<f64>> {
        if rows.len() != self.n {
            return Err(Error::Parse(format!("{which} has {} rows, expected {}", rows.len(), self.n)));
        }
        let mut out = Vec::with_capacity(self.n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Parse(format!("{which} row {i} has {} entries, expected {}", row.len(), self.n)));
            }
            let mut r = Vec::with_capacity(self.n);
            for (j, &[re, im]) in row.iter().enumerate() {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(Error::Parse(format!("{which}[{i}][{j}] is not finite")));
                }
                r.push(Complex::new(re, im));
            }
            out.push(r);
        }
        ComplexMatrix::from_rows(out)
    }

    pub fn matrices(&self) -> Result<(ComplexMatrix<f64>, ComplexMatrix<f64>)> {
        if self.n == 0 {
            return Err(Error::Parse("n must be at least 1".into()));
        }
        Ok((self.matrix("A", &self.a)?, self.matrix("B", &self.b)?))
    }

    /// Validated pair; a Hermitian violation names the worst entry.
    pub fn to_pair(&self) -> Result<HermitianPair> {
        let (a, b) = self.matrices()?;
        for (which, m) in [("A", &a), ("B", &b)] {
            let tol = DEFAULT_HERM_TOL * m.max_abs().max(1.0);
            let mut worst = (0.0, 0, 0);
            for i in 0..m.n() {
                for j in i..m.n() {
                    let d = (m[(i, j)] - m[(j, i)].conj()).norm();
                    if d > worst.0 {
                        worst = (d, i, j);
                    }
                }
            }
            if worst.0 > tol {
                return Err(Error::Parse(format!(
                    "{which}[{}][{}] and {which}[{}][{}] are not conjugate (difference {:e})",
                    worst.1, worst.2, worst.2, worst.1, worst.0
                )));
            }
        }
        validate_pair(a, b, DEFAULT_HERM_TOL)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }
}

/// Command-line settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid: usize,
    pub delta: f64,
    pub pd_floor: Option<f64>,
    pub radius_factor: f64,
    pub max_doublings: usize,
    pub qtol: f64,
    pub t_samples: Vec<f64>,
    pub m_max: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        let t = TrackConfig::default();
        RunConfig {
            grid: 64,
            delta: 1e-6,
            pd_floor: None,
            radius_factor: t.radius_factor,
            max_doublings: t.max_doublings,
            qtol: DEFAULT_QTOL,
            t_samples: v.t_samples,
            m_max: v.m_max,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [("delta", self.delta), ("radius-factor", self.radius_factor), ("qtol", self.qtol)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("--{name} must be positive, got {v}")));
            }
        }
        if let Some(f) = self.pd_floor {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidInput(format!("--pd-floor must be positive, got {f}")));
            }
        }
        if self.grid < 16 {
            return Err(Error::InvalidInput(format!("--grid must be at least 16, got {}", self.grid)));
        }
        if let Some(t) = self.t_samples.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidInput(format!("--t-samples must be nonnegative, got {t}")));
        }
        Ok(())
    }

    pub fn measure_config(&self) -> MeasureConfig {
        MeasureConfig {
            grid_size: self.grid,
            delta: self.delta,
            pd_floor: self.pd_floor,
            qtol: self.qtol,
            track: TrackConfig { radius_factor: self.radius_factor, max_doublings: self.max_doublings, ..TrackConfig::default() },
        }
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { measure: self.measure_config(), t_samples: self.t_samples.clone(), m_max: self.m_max, seed: self.seed }
    }

    fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

pub fn measure_json(mu: &RepresentingMeasure) -> String {
    let mut s = serde_json::to_string_pretty(mu).expect("measure serializes");
    s.push('\n');
    s
}

/// `t,w,imag_residual`, sorted by `t`, shortest round-trip decimals.
pub fn density_csv(mu: &RepresentingMeasure) -> String {
    let d = &mu.density;
    let mut s = String::from("t,w,imag_residual\n");
    for i in 0..d.len() {
        writeln!(s, "{:?},{:?},{:?}", d.points[i], d.values[i], d.imag_residuals[i]).unwrap();
    }
    s
}

pub fn report_json(report: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let p = dir.join(name);
    fs::write(&p, contents).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    Ok(p)
}

/// Writes `measure.json` and `density.csv` into `out`.
pub fn cmd_measure(instance: &Path, cfg: &RunConfig, out: &Path) -> Result<RepresentingMeasure> {
    cfg.validate()?;
    let pair = InstanceFile::read(instance)?.to_pair()?;
    let (mu, _) = compute_measure(&pair, &cfg.measure_config())?;
    write(out, "measure.json", &measure_json(&mu))?;
    write(out, "density.csv", &density_csv(&mu))?;
    Ok(mu)
}

/// Writes `report.json` into `out`.
pub fn cmd_verify(instance: &Path, cfg: &RunConfig, out: &Path) -> Result<VerificationReport> {
    cfg.validate()?;
    let pair = InstanceFile::read(instance)?.to_pair()?;
    let digest = instance_digest(&pair.a, &pair.b, &cfg.canonical());
    let report = verify_all(&pair, &cfg.verify_config(), digest)?;
    write(out, "report.json", &report_json(&report))?;
    Ok(report)
}

/// One row of the 2x2 comparison table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormRow {
    pub x: f64,
    pub integral: f64,
    pub series: f64,
    pub contour: f64,
}

impl ClosedFormRow {
    pub fn max_pair_diff(&self) -> f64 {
        let v = [self.integral, self.series, self.contour];
        let hi = v.iter().copied().fold(f64::MIN, f64::max);
        let lo = v.iter().copied().fold(f64::MAX, f64::min);
        hi - lo
    }
}

/// Compares the three 2x2 densities at `x = b1 + i (b2 - b1)/points`, `0 < i < points`.
pub fn closed_form2_rows(inst: &TwoByTwoInstance, points: usize, cfg: &RunConfig) -> Result<Vec<ClosedFormRow>> {
    cfg.validate()?;
    if points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 subdivisions, got {points}")));
    }
    let (a, b) = inst.matrices();
    let pair = validate_pair(a, b, DEFAULT_HERM_TOL)?;
    let (_, engine) = compute_measure(&pair, &cfg.measure_config())?;
    let h = (inst.b2 - inst.b1) / points as f64;
    (1..points)
        .map(|i| {
            let x = inst.b1 + h * i as f64;
            let contour = match &engine {
                Some(e) => e.density(x)?.value,
                None => 0.0,
            };
            Ok(ClosedFormRow { x, integral: density2(inst, x)?, series: mehta_kumar(inst, x, 1e-17)?, contour })
        })
        .collect()
}

pub fn closed_form2_csv(rows: &[ClosedFormRow]) -> String {
    let mut s = String::from("x,w_integral,w_series,w_contour,max_pair_diff\n");
    for r in rows {
        writeln!(s, "{:?},{:?},{:?},{:?},{:?}", r.x, r.integral, r.series, r.contour, r.max_pair_diff()).unwrap();
    }
    s
}

/// Writes `density.csv` for the 2x2 instance into `out`.
pub fn cmd_closed_form2(inst: &TwoByTwoInstance, cfg: &RunConfig, out: &Path) -> Result<Vec<ClosedFormRow>> {
    let rows = closed_form2_rows(inst, cfg.grid, cfg)?;
    write(out, "density.csv", &closed_form2_csv(&rows))?;
    Ok(rows)
}

/// Writes a seeded random instance to `out`.
pub fn cmd_random(n: usize, seed: u64, out: &Path) -> Result<InstanceFile> {
    let (a, b) = random_pair(n, seed)?;
    let mut file = InstanceFile::from_matrices(&a, &b);
    file.name = Some(format!("random-{n}-{seed}"));
    file.seed = Some(seed);
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(out, file.to_json()).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn located_parse_errors() {
        let bad = r#"{"n": 2, "A": [[[0,0],[1,0]],[[1,0]]], "B": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        let e = InstanceFile::parse(bad).unwrap().to_pair().unwrap_err();
        assert!(e.to_string().contains("A row 1"), "{e}");
        let skew = r#"{"n": 2, "A": [[[0,0],[1,0]],[[2,0],[0,0]]], "B": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        let e = InstanceFile::parse(skew).unwrap().to_pair().unwrap_err();
        assert!(e.to_string().contains("A[0][1]"), "{e}");
        let e = InstanceFile::parse("{\"n\": 2,\n \"A\": oops}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn instance_round_trip() {
        let (a, b) = random_pair(3, 42).unwrap();
        let f = InstanceFile::from_matrices(&a, &b);
        let g = InstanceFile::parse(&f.to_json()).unwrap();
        assert_eq!(f, g);
        let (a2, b2) = g.matrices().unwrap();
        assert_eq!((a, b), (a2, b2));
        assert!(g.to_pair().is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let c = RunConfig { qtol: 0.0, ..RunConfig::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { grid: 8, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn commuting_csv_is_header_only() {
        let p = validate_pair(ComplexMatrix::from_diag(&[1.0, 2.0]), ComplexMatrix::from_diag(&[3.0, 4.0]), DEFAULT_HERM_TOL)
            .unwrap();
        let (mu, _) = compute_measure(&p, &MeasureConfig::default()).unwrap();
        assert_eq!(density_csv(&mu), "t,w,imag_residual\n");
        let back: RepresentingMeasure = serde_json::from_str(&measure_json(&mu)).unwrap();
        assert_eq!(back, mu);
    }
}
