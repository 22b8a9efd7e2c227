//! The representing measure: atoms at the eigenvalues of `B~` plus a density
//! given by contour integrals over the tracked branches.

use std::sync::OnceLock;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::branch::{choose_radius, track, BranchTrack, Contour, TrackConfig};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::hermitian::{canonicalize, default_pd_floor, CanonicalPair, HermitianPair};
use crate::quadrature::gauss_legendre_on;
use crate::scalar::{cabs, cexp, r, to_c64, Real};

/// Default quadrature tolerance (relative).
pub const DEFAULT_QTOL: f64 = 1e-10;

/// Largest contour node count the quadrature loop may double to.
pub const MAX_QUADRATURE_NODES: usize = 1 << 16;

/// Off-diagonal size below which `A~` counts as diagonal.
pub const COMMUTING_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Density samples at composite Gauss–Legendre points.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub imag_residuals: Vec<f64>,
    /// Quadrature weights of `points` for integrating against the density.
    pub weights: Vec<f64>,
    /// Estimated floating-point error of each value.
    pub error_estimates: Vec<f64>,
}

impl DensityGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_value(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::min)
    }
}

/// How the contour part of a measure was computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourInfo {
    pub radius: f64,
    pub nodes: usize,
    pub closure_residual: f64,
    /// Grid points that needed double-double evaluation.
    pub extended_points: usize,
    /// Largest `|lower - upper|` over the cross-checked points.
    pub cross_check: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentingMeasure {
    pub atoms: Vec<Atom>,
    pub density: DensityGrid,
    pub support: (f64, f64),
    pub epsilon: f64,
    pub contour: Option<ContourInfo>,
}

impl RepresentingMeasure {
    pub fn total_atom_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `max(1, total atom weight)`, the reference size for absolute tolerances.
    pub fn scale(&self) -> f64 {
        self.total_atom_weight().max(1.0)
    }

    pub fn total_mass(&self) -> f64 {
        laplace_transform(self, 0.0)
    }
}

/// `int e^{-ts} d mu(s)`: atoms plus the Gauss–Legendre sum over the density grid.
pub fn laplace_transform(mu: &RepresentingMeasure, t: f64) -> f64 {
    let atoms: f64 = mu.atoms.iter().map(|a| a.weight * (-t * a.location).exp()).sum();
    let d = &mu.density;
    let dens: f64 = (0..d.len()).map(|i| d.weights[i] * d.values[i] * (-t * d.points[i]).exp()).sum();
    atoms + dens
}

/// Which branches a contour sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// `b~_j < t`, positive sign.
    Lower,
    /// `b~_j > t`, negative sign.
    Upper,
    /// All branches; vanishes identically.
    All,
}

/// One contour-sum evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    pub imag: f64,
    /// Difference to the same sum over every other node.
    pub half_change: f64,
    /// Roundoff estimate.
    pub error: f64,
    pub extended: bool,
}

/// Per-precision data shared by all evaluations on one track.
struct ContourData<T> {
    nodes: usize,
    radius: f64,
    zeta: Vec<Complex<T>>,
    b_center: f64,
    b: Vec<f64>,
    /// `exp(lambda_jk + b_c zeta_k - m_j)`
    f: Vec<Vec<Complex<T>>>,
    m: Vec<f64>,
    fmag: Vec<Vec<f64>>,
    /// `eps (1 + |L_jk|) + err(lambda_jk)`
    lerr: Vec<Vec<f64>>,
}

impl<T: Real> ContourData<T> {
    fn new(track: &BranchTrack<T>) -> Self {
        let nn = track.contour.nodes;
        let b: Vec<f64> = track.labels.iter().map(|l| l.1).collect();
        let b_center = 0.5 * (b[0] + b[b.len() - 1]);
        let bc = T::from_real(b_center);
        let mut f = Vec::with_capacity(b.len());
        let mut m = Vec::with_capacity(b.len());
        let mut lerr = Vec::with_capacity(b.len());
        let mut fmag = Vec::with_capacity(b.len());
        for j in 0..b.len() {
            let l: Vec<Complex<T>> = (0..nn).map(|k| track.values[k][j] + track.points[k] * bc).collect();
            let mj = l.iter().map(|z| z.re.as_f64()).fold(f64::NEG_INFINITY, f64::max);
            let mt = T::from_real(mj);
            f.push(l.iter().map(|&z| cexp(Complex::new(z.re - mt, z.im))).collect());
            let eps = T::epsilon().as_f64();
            lerr.push((0..nn).map(|k| eps * (1.0 + cabs(to_c64(l[k]))) + track.errors[k][j]).collect());
            fmag.push(l.iter().map(|z| (z.re.as_f64() - mj).exp()).collect());
            m.push(mj);
        }
        ContourData { nodes: nn, radius: track.contour.radius, zeta: track.points.clone(), b_center, b, f, m, fmag, lerr }
    }

    /// Contour sum over `rep` at canonical coordinate `tc`.
    fn eval(&self, tc: f64, rep: Representation) -> DensityValue {
        let nn = self.nodes;
        let set: Vec<usize> = (0..self.b.len())
            .filter(|&j| match rep {
                Representation::Lower => self.b[j] < tc,
                Representation::Upper => self.b[j] > tc,
                Representation::All => true,
            })
            .collect();
        if set.is_empty() {
            return DensityValue { value: 0.0, imag: 0.0, half_change: 0.0, error: 0.0, extended: false };
        }
        let s = tc - self.b_center;
        let st = T::from_real(s);
        let e_t = s.abs() * self.radius;
        let et = T::from_real(e_t);
        let inv_n = T::one() / T::of_usize(nn);
        let mut g = Vec::with_capacity(nn);
        let mut gmag = Vec::with_capacity(nn);
        for z in &self.zeta {
            let e = *z * st;
            let v = cexp(Complex::new(e.re - et, e.im)) * *z * inv_n;
            gmag.push((e.re.as_f64() - e_t).exp() * self.radius / nn as f64);
            g.push(v);
        }
        let big = set.iter().map(|&j| self.m[j]).fold(f64::NEG_INFINITY, f64::max) + e_t;
        let mut full = Complex::<T>::zero();
        let mut half = Complex::<T>::zero();
        let mut err = 0.0;
        let eps = T::epsilon().as_f64();
        for &j in &set {
            let wf = (self.m[j] + e_t - big).exp();
            // in T: the branch sums cancel against each other
            let w = (T::from_real(self.m[j]) + et - T::from_real(big)).exp();
            let mut fj = Complex::<T>::zero();
            let mut hj = Complex::<T>::zero();
            for k in 0..nn {
                let term = self.f[j][k] * g[k];
                fj = fj + term;
                if k % 2 == 0 {
                    hj = hj + term;
                }
                let tm = self.fmag[j][k] * gmag[k] * wf;
                err += tm * (self.lerr[j][k] + eps * s.abs() * self.radius);
            }
            full = full + fj * w;
            half = half + hj * w * r::<T>(2.0);
        }
        let sign = if rep == Representation::Upper { -T::one() } else { T::one() };
        let scale = T::from_real(big).exp();
        let full = full * (scale * sign);
        let half = half * (scale * sign);
        DensityValue {
            value: full.re.as_f64(),
            imag: full.im.as_f64(),
            half_change: cabs(full - half).as_f64(),
            error: 4.0 * err * big.exp(),
            extended: false,
        }
    }
}

/// Evaluates densities on a fixed track, switching to double-double where
/// the f64 roundoff estimate is too large.
pub struct DensityEngine {
    cp: CanonicalPair,
    track: BranchTrack<f64>,
    data: ContourData<f64>,
    extended: OnceLock<Result<ContourData<Dd>>>,
    pub qtol: f64,
    pub scale: f64,
}

impl DensityEngine {
    pub fn new(cp: &CanonicalPair, track: BranchTrack<f64>, qtol: f64) -> Self {
        let data = ContourData::new(&track);
        let scale = cp.a_diag().iter().map(|a| a.exp()).sum::<f64>().max(1.0);
        DensityEngine { cp: cp.clone(), track, data, extended: OnceLock::new(), qtol, scale }
    }

    pub fn track(&self) -> &BranchTrack<f64> {
        &self.track
    }

    pub fn canonical(&self) -> &CanonicalPair {
        &self.cp
    }

    pub fn contour(&self) -> Contour {
        self.track.contour
    }

    /// Retracks on twice as many nodes.
    pub fn doubled(&self) -> Result<Self> {
        let c = Contour::new(self.track.contour.radius, self.track.contour.nodes * 2)?;
        Ok(DensityEngine::new(&self.cp, track(&self.cp, c)?, self.qtol))
    }

    fn extended(&self) -> Result<&ContourData<Dd>> {
        self.extended
            .get_or_init(|| self.track.refine::<Dd>(&self.cp).map(|t| ContourData::new(&t)))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Contour sum at original coordinate `t`.
    pub fn eval(&self, t: f64, rep: Representation) -> Result<DensityValue> {
        let tc = t + self.track.epsilon;
        let v = self.data.eval(tc, rep);
        if v.error <= 1e-3 * self.qtol * self.scale {
            return Ok(v);
        }
        let mut v = self.extended()?.eval(tc, rep);
        v.extended = true;
        Ok(v)
    }

    pub fn lower(&self, t: f64) -> Result<DensityValue> {
        self.eval(t, Representation::Lower)
    }

    pub fn upper(&self, t: f64) -> Result<DensityValue> {
        self.eval(t, Representation::Upper)
    }

    /// `|sum over all branches|`, zero in exact arithmetic.
    pub fn gap(&self, t: f64) -> Result<f64> {
        let v = self.eval(t, Representation::All)?;
        Ok(v.value.hypot(v.imag))
    }

    /// The representation with the smaller exponential growth on the contour at `t`.
    pub fn preferred(&self, t: f64) -> Representation {
        let tc = t + self.track.epsilon;
        let b = &self.data.b;
        if tc - b[0] <= b[b.len() - 1] - tc {
            Representation::Lower
        } else {
            Representation::Upper
        }
    }

    pub fn density(&self, t: f64) -> Result<DensityValue> {
        self.eval(t, self.preferred(t))
    }

    fn other(&self, t: f64) -> Representation {
        match self.preferred(t) {
            Representation::Lower => Representation::Upper,
            _ => Representation::Lower,
        }
    }

    fn converged(&self, v: &DensityValue) -> bool {
        v.half_change <= self.qtol * v.value.abs().max(self.scale)
    }
}

/// Contour-integral density at original coordinate `t`, lower representation.
pub fn density_lower<T: Real>(track: &BranchTrack<T>, t: f64) -> f64 {
    ContourData::new(track).eval(t + track.epsilon, Representation::Lower).value
}

/// Contour-integral density at original coordinate `t`, upper representation.
pub fn density_upper<T: Real>(track: &BranchTrack<T>, t: f64) -> f64 {
    ContourData::new(track).eval(t + track.epsilon, Representation::Upper).value
}

/// `|sum_j (1/2 pi i) oint e^{lambda_j + t zeta} d zeta|` over all branches.
pub fn representation_gap<T: Real>(track: &BranchTrack<T>, t: f64) -> f64 {
    let v = ContourData::new(track).eval(t + track.epsilon, Representation::All);
    v.value.hypot(v.imag)
}

/// Atoms-only measure for a diagonal `A~`.
pub fn atoms_only(cp: &CanonicalPair) -> RepresentingMeasure {
    let atoms = cp
        .a_diag()
        .iter()
        .zip(&cp.b)
        .map(|(&a, &b)| Atom { location: b - cp.epsilon, weight: a.exp() })
        .collect();
    RepresentingMeasure {
        atoms,
        density: DensityGrid::default(),
        support: (cp.b[0] - cp.epsilon, cp.b[cp.n() - 1] - cp.epsilon),
        epsilon: cp.epsilon,
        contour: None,
    }
}

/// Grid points (canonical coordinates) and weights: `grid_size` Gauss–Legendre
/// points in each gap between distinct `b~`, minus `delta`-neighbourhoods.
pub fn density_grid_points(cp: &CanonicalPair, grid_size: usize, delta: f64) -> (Vec<f64>, Vec<f64>) {
    let groups = cp.groups();
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    for w in groups.windows(2) {
        let lo = cp.b[w[0].start];
        let hi = cp.b[w[1].start];
        let (x, wt) = gauss_legendre_on::<f64>(grid_size, lo, hi);
        for (xi, wi) in x.into_iter().zip(wt) {
            if cp.b.iter().all(|&b| (xi - b).abs() > delta) {
                pts.push(xi);
                wts.push(wi);
            }
        }
    }
    (pts, wts)
}

/// Samples the density on the composite grid, doubling contour nodes until
/// every value is stable to `qtol`.
pub fn assemble_with(engine: &mut DensityEngine, grid_size: usize, delta_rel: f64) -> Result<RepresentingMeasure> {
    if grid_size < 16 {
        return Err(Error::InvalidInput(format!("grid size must be at least 16, got {grid_size}")));
    }
    if !(delta_rel > 0.0) {
        return Err(Error::InvalidInput("atom exclusion delta must be positive".into()));
    }
    let cp = engine.cp.clone();
    let eps = cp.epsilon;
    let delta = delta_rel * (cp.b[cp.n() - 1] - cp.b[0]);
    let (pts, wts) = density_grid_points(&cp, grid_size, delta);
    let points: Vec<f64> = pts.iter().map(|&x| x - eps).collect();
    let values = loop {
        let vals: Vec<DensityValue> = points.iter().map(|&t| engine.density(t)).collect::<Result<_>>()?;
        let bad = vals.iter().zip(&points).find(|(v, _)| !engine.converged(v));
        match bad {
            None => break vals,
            Some((v, &t)) => {
                if engine.contour().nodes >= MAX_QUADRATURE_NODES {
                    return Err(Error::QuadratureNotConverged { t, change: v.half_change });
                }
                *engine = engine.doubled()?;
            }
        }
    };
    // every tenth point against the other representation
    let mut cross = 0.0f64;
    for i in (0..points.len()).step_by(10) {
        let o = engine.eval(points[i], engine.other(points[i]))?;
        cross = cross.max((o.value - values[i].value).abs());
    }
    let atoms = cp
        .a_diag()
        .iter()
        .zip(&cp.b)
        .map(|(&a, &b)| Atom { location: b - eps, weight: a.exp() })
        .collect();
    let density = DensityGrid {
        points,
        imag_residuals: values.iter().map(|v| v.imag.abs()).collect(),
        error_estimates: values.iter().map(|v| v.error).collect(),
        values: values.iter().map(|v| v.value).collect(),
        weights: wts,
    };
    let c = engine.contour();
    Ok(RepresentingMeasure {
        atoms,
        density,
        support: (cp.b[0] - eps, cp.b[cp.n() - 1] - eps),
        epsilon: eps,
        contour: Some(ContourInfo {
            radius: c.radius,
            nodes: c.nodes,
            closure_residual: engine.track().closure_residual,
            extended_points: values.iter().filter(|v| v.extended).count(),
            cross_check: cross,
        }),
    })
}

/// Assembles the measure from a canonical pair and a certified track.
pub fn assemble(cp: &CanonicalPair, track: BranchTrack<f64>, grid_size: usize, delta: f64) -> Result<RepresentingMeasure> {
    if cp.is_diagonal(COMMUTING_TOL) {
        return Ok(atoms_only(cp));
    }
    let mut engine = DensityEngine::new(cp, track, DEFAULT_QTOL);
    assemble_with(&mut engine, grid_size, delta)
}

/// Settings for the whole measure computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureConfig {
    pub grid_size: usize,
    /// Atom exclusion radius relative to `b~_n - b~_1`.
    pub delta: f64,
    /// `None` means `1e-8 max(1, |B|_max)`.
    pub pd_floor: Option<f64>,
    pub qtol: f64,
    pub track: TrackConfig,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig { grid_size: 64, delta: 1e-6, pd_floor: None, qtol: DEFAULT_QTOL, track: TrackConfig::default() }
    }
}

/// Canonicalises, takes the commuting fast path when possible, otherwise
/// selects a contour, tracks and assembles. The engine is returned for
/// further evaluations.
pub fn compute_measure(pair: &HermitianPair, cfg: &MeasureConfig) -> Result<(RepresentingMeasure, Option<DensityEngine>)> {
    let floor = cfg.pd_floor.unwrap_or_else(|| default_pd_floor(pair));
    if !(floor > 0.0) {
        return Err(Error::InvalidInput(format!("pd_floor must be positive, got {floor}")));
    }
    if !(cfg.qtol > 0.0) {
        return Err(Error::InvalidInput(format!("quadrature tolerance must be positive, got {}", cfg.qtol)));
    }
    let cp = canonicalize(pair, floor)?;
    if cp.is_diagonal(COMMUTING_TOL) {
        return Ok((atoms_only(&cp), None));
    }
    let (_, tr) = choose_radius(&cp, &cfg.track)?;
    let mut engine = DensityEngine::new(&cp, tr, cfg.qtol);
    let mu = assemble_with(&mut engine, cfg.grid_size, cfg.delta)?;
    Ok((mu, Some(engine)))
}
