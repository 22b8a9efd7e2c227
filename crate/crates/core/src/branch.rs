//! The branches `lambda_j(t)` of `det(lambda I - (A - tB)) = 0` on a circle
//! `|t| = R` enclosing every branch point.

use num_complex::Complex;
use num_traits::Zero;
use rustfft::FftPlanner;

use crate::eigh::eigh;
use crate::error::{Error, Result};
use crate::hermitian::CanonicalPair;
use crate::matrix::ComplexMatrix;
use crate::poly::{aberth, det_newton, horner, poly_roots};
use crate::scalar::{cabs, r, to_c64, Real};

/// Largest number of nodes (as a power of two) tracking may use.
pub const MAX_NODES_LOG2: u32 = 20;

/// Coefficients of `det(lambda I - (A - tB)) = sum_j p_j(t) lambda^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    /// `coeffs[j][k]` multiplies `lambda^j t^k`; `coeffs[j].len() == n - j + 1`.
    pub coeffs: Vec<Vec<f64>>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients (ascending in `lambda`) of the polynomial at fixed `t`.
    pub fn at(&self, t: Complex<f64>) -> Vec<Complex<f64>> {
        self.coeffs
            .iter()
            .map(|p| p.iter().rev().fold(Complex::zero(), |acc, &c| acc * t + c))
            .collect()
    }

    pub fn eval(&self, lambda: Complex<f64>, t: Complex<f64>) -> Complex<f64> {
        horner(&self.at(t), lambda)
    }

    /// Roots in `lambda` at fixed `t`, by Aberth iteration on the coefficients.
    pub fn roots(&self, t: Complex<f64>) -> Result<Vec<Complex<f64>>> {
        poly_roots(&self.at(t))
    }
}

/// `A~ - t B~` for complex `t`.
pub fn pencil<T: Real>(a: &ComplexMatrix<T>, b: &[T], t: Complex<T>) -> ComplexMatrix<T> {
    let mut m = a.clone();
    for (i, &bi) in b.iter().enumerate() {
        m[(i, i)] = m[(i, i)] - t * bi;
    }
    m
}

fn char_det(a: &ComplexMatrix<f64>, b: &[f64], lambda: Complex<f64>, t: Complex<f64>) -> Complex<f64> {
    let mut m = pencil(a, b, t).scale_real(-1.0);
    for i in 0..a.n() {
        m[(i, i)] += lambda;
    }
    m.det()
}

/// Bivariate interpolation of the characteristic polynomial from `(n+1)^2`
/// determinant evaluations at scaled roots of unity in `lambda` and `t`.
pub fn charpoly(cp: &CanonicalPair) -> Result<CharPoly> {
    let n = cp.n();
    let m = n + 1;
    let sl = cp.a_t.frobenius().max(1.0);
    let st = sl / cp.b[n - 1].max(f64::MIN_POSITIVE);
    let w = |k: usize| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % m) as f64 / m as f64);
    let mut g = vec![vec![Complex::<f64>::zero(); m]; m];
    for (ia, row) in g.iter_mut().enumerate() {
        for (ib, v) in row.iter_mut().enumerate() {
            *v = char_det(&cp.a_t, &cp.b, w(ia) * sl, w(ib) * st);
        }
    }
    let mut coeffs = vec![Vec::new(); m];
    let mut dropped = 0.0f64;
    let mut largest = 0.0f64;
    for (j, p) in coeffs.iter_mut().enumerate() {
        for k in 0..m {
            let mut s = Complex::<f64>::zero();
            for (ia, row) in g.iter().enumerate() {
                for (ib, v) in row.iter().enumerate() {
                    // w(m - x) = conj(w(x))
                    s += v * w(m - (j * ia + k * ib) % m);
                }
            }
            let s = s / (m * m) as f64;
            largest = largest.max(s.norm());
            if j + k > n {
                dropped = dropped.max(s.norm());
            } else {
                p.push(s.re / sl.powi(j as i32) / st.powi(k as i32));
                dropped = dropped.max(s.im.abs());
            }
        }
    }
    let residual = dropped / largest.max(f64::MIN_POSITIVE);
    if residual > 1e-8 {
        return Err(Error::IllConditioned { residual });
    }
    let tr_a: f64 = cp.a_diag().iter().sum();
    let tr_b: f64 = cp.b.iter().sum();
    coeffs[n] = vec![1.0];
    coeffs[n - 1] = vec![-tr_a, tr_b];
    let cpoly = CharPoly { coeffs };
    // off-grid spot check
    for (lr, tr) in [((0.37, -0.81), (0.59, 0.23)), ((-1.3, 0.4), (-0.2, -0.95))] {
        let lambda = Complex::new(lr.0, lr.1) * sl;
        let t = Complex::new(tr.0, tr.1) * st;
        let want = char_det(&cp.a_t, &cp.b, lambda, t);
        let got = cpoly.eval(lambda, t);
        let rel = (got - want).norm() / (want.norm() + sl.powi(n as i32) * 1e-3);
        if rel > 1e-8 {
            return Err(Error::IllConditioned { residual: rel });
        }
    }
    Ok(cpoly)
}

/// Polishes approximate eigenvalues of `A~ - tB~` by Aberth steps on the determinant.
pub fn polish<T: Real>(a: &ComplexMatrix<T>, b: &[T], t: Complex<T>, roots: &mut [Complex<T>], max_iter: usize) -> Result<()> {
    let m = pencil(a, b, t);
    let tol = T::epsilon() * r(8.0);
    match aberth(roots, |z| det_newton(&m, z), tol, max_iter) {
        Ok(_) => Ok(()),
        Err(e) => {
            // a stalled final sweep is fine if the determinant is at roundoff level
            let scale = m.frobenius() + roots.iter().map(|&z| cabs(z)).fold(T::zero(), T::max);
            let ok = roots.iter().all(|&z| cabs(det_newton(&m, z)) <= scale * T::epsilon() * r(1e4));
            if ok {
                Ok(())
            } else {
                Err(e)
            }
        }
    }
}

/// `|p/p'|` at each root plus a roundoff floor: the attainable accuracy of the roots.
fn newton_sizes<T: Real>(a: &ComplexMatrix<T>, b: &[T], t: Complex<T>, roots: &[Complex<T>]) -> Vec<f64> {
    let m = pencil(a, b, t);
    let eps = T::epsilon().as_f64();
    roots
        .iter()
        .map(|&z| cabs(det_newton(&m, z)).as_f64() + eps * (1.0 + cabs(z).as_f64()))
        .collect()
}

/// All roots of `lambda -> det(lambda I - (A~ - tB~))`.
pub fn roots_at(cp: &CanonicalPair, cpoly: &CharPoly, t: Complex<f64>) -> Result<Vec<Complex<f64>>> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::InvalidInput("t must be finite".into()));
    }
    let mut roots = cpoly.roots(t)?;
    polish(&cp.a_t, &cp.b, t, &mut roots, 60)?;
    Ok(roots)
}

/// Circle of radius `radius` centred at the origin, sampled at `nodes`
/// equally spaced points starting at `t = radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contour {
    pub radius: f64,
    pub nodes: usize,
}

impl Contour {
    pub fn new(radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("contour radius must be positive, got {radius}")));
        }
        if nodes < 64 || !nodes.is_power_of_two() {
            return Err(Error::InvalidInput(format!("node count must be a power of two >= 64, got {nodes}")));
        }
        Ok(Contour { radius, nodes })
    }

    /// Nodes `R e^{2 pi i k / N}`, exactly conjugation-symmetric.
    pub fn points<T: Real>(&self) -> Vec<Complex<T>> {
        let n = self.nodes;
        let rad = T::from_real(self.radius);
        let mut out = vec![Complex::<T>::zero(); n];
        for k in 0..=n / 2 {
            let z = unit_point::<T>(k, n) * rad;
            out[k] = z;
            if k > 0 && k < n / 2 {
                out[n - k] = z.conj();
            }
        }
        out
    }
}

/// `e^{2 pi i k / n}` with exact values on the axes.
fn unit_point<T: Real>(k: usize, n: usize) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    if 4 * k == 0 {
        return Complex::new(o, z);
    }
    if 4 * k == n {
        return Complex::new(z, o);
    }
    if 2 * k == n {
        return Complex::new(-o, z);
    }
    if 4 * k == 3 * n {
        return Complex::new(z, -o);
    }
    let th = r::<T>(2.0) * T::PI() * T::of_usize(k) / T::of_usize(n);
    let (s, c) = th.sin_cos();
    Complex::new(c, s)
}

/// Branch values on the contour; column `j` follows `a~_jj - b~_j t + O(1/t)`.
#[derive(Clone, Debug)]
pub struct BranchTrack<T> {
    pub contour: Contour,
    pub points: Vec<Complex<T>>,
    /// `values[k][j] = lambda_j(points[k])`.
    pub values: Vec<Vec<Complex<T>>>,
    /// Size of a final Newton correction at each value, an estimate of its error.
    pub errors: Vec<Vec<f64>>,
    /// `(a~_jj, b~_j)` in canonical (shifted) coordinates.
    pub labels: Vec<(f64, f64)>,
    /// Shift applied to `B`; densities are reported at `t - epsilon`.
    pub epsilon: f64,
    pub closure_residual: f64,
    /// Smallest ratio second-best / best label distance at `t = R`.
    pub label_margin: f64,
    /// Intermediate steps inserted between stored nodes.
    pub substeps: usize,
}

impl<T: Real> BranchTrack<T> {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// `1 + max |lambda|` over the track.
    pub fn scale(&self) -> f64 {
        1.0 + self
            .values
            .iter()
            .flatten()
            .map(|z| cabs(*z).as_f64())
            .fold(0.0, f64::max)
    }
}

/// Tuning for radius selection and tracking.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackConfig {
    pub radius_factor: f64,
    pub max_doublings: usize,
    /// Final radius is this multiple of the smallest certified one.
    pub radius_safety: f64,
    pub bisect_steps: usize,
}

impl Default for TrackConfig {
    fn default() -> Self {
        TrackConfig { radius_factor: 1.0, max_doublings: 20, radius_safety: 1.1, bisect_steps: 4 }
    }
}

/// Minimal cost assignment: `result[i]` is the column given to row `i`.
pub fn assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n > 8 {
        return greedy_assignment(cost);
    }
    // Hungarian method with potentials, 1-based internally
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=n {
        out[p[j] - 1] = j - 1;
    }
    out
}

fn greedy_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, row) in cost.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            pairs.push((c, i, j));
        }
    }
    pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (_, i, j) in pairs {
        if out[i] == usize::MAX && !taken[j] {
            out[i] = j;
            taken[j] = true;
        }
    }
    out
}

fn min_gap(z: &[Complex<f64>], floor: f64) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm();
            if d > floor {
                g = g.min(d);
            }
        }
    }
    g
}

/// Reorders `new` so that entry `j` continues `prev[j]`.
fn match_to(prev: &[Complex<f64>], new: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let cost: Vec<Vec<f64>> = prev.iter().map(|p| new.iter().map(|q| (p - q).norm_sqr()).collect()).collect();
    let a = assignment(&cost);
    a.iter().map(|&j| new[j]).collect()
}

struct Stepper<'a> {
    a: &'a ComplexMatrix<f64>,
    b: &'a [f64],
    radius: f64,
    max_depth: u32,
    substeps: usize,
}

impl Stepper<'_> {
    fn point(&self, theta: f64) -> Complex<f64> {
        Complex::from_polar(self.radius, theta)
    }

    /// Continues `prev` (at angle `th0`) to angle `th1`.
    fn advance(&mut self, prev: &[Complex<f64>], th0: f64, th1: f64, t1: Complex<f64>, depth: u32) -> Result<Vec<Complex<f64>>> {
        let mut cand = prev.to_vec();
        let ok = polish(self.a, self.b, t1, &mut cand, 40).is_ok();
        let scale = 1.0 + prev.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let gap = min_gap(prev, 1e-7 * scale);
        let next = match_to(prev, &cand);
        let moved = prev.iter().zip(&next).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        if ok && moved <= 0.5 * gap {
            return Ok(next);
        }
        if depth >= self.max_depth {
            return Err(Error::TrackingAmbiguous { nodes: 1usize << MAX_NODES_LOG2 });
        }
        self.substeps += 1;
        let mid = 0.5 * (th0 + th1);
        let tm = self.point(mid);
        let half = self.advance(prev, th0, mid, tm, depth + 1)?;
        self.advance(&half, mid, th1, t1, depth + 1)
    }
}

/// Tracks all branches once around `contour`, labelling them at `t = R`.
pub fn track(cp: &CanonicalPair, contour: Contour) -> Result<BranchTrack<f64>> {
    let nn = contour.nodes;
    let points = contour.points::<f64>();
    let rad = contour.radius;
    let labels: Vec<(f64, f64)> = cp.a_diag().into_iter().zip(cp.b.iter().copied()).collect();

    // t = R is real, so the start is a Hermitian eigenproblem
    let start = eigh(&pencil(&cp.a_t, &cp.b, Complex::new(rad, 0.0)))?;
    let roots: Vec<Complex<f64>> = start.eigenvalues.iter().map(|&x| Complex::new(x, 0.0)).collect();
    let predictions: Vec<Complex<f64>> = labels.iter().map(|&(a, b)| Complex::new(a - b * rad, 0.0)).collect();
    // column j of the track gets the root assigned to label j
    let cost: Vec<Vec<f64>> = predictions.iter().map(|p| roots.iter().map(|z| (p - z).norm()).collect()).collect();
    let assign = assignment(&cost);
    let first: Vec<Complex<f64>> = assign.iter().map(|&i| roots[i]).collect();
    let label_margin = label_margin(&labels, &predictions, &first);

    let log2 = nn.trailing_zeros();
    let mut stepper = Stepper {
        a: &cp.a_t,
        b: &cp.b,
        radius: rad,
        max_depth: MAX_NODES_LOG2.saturating_sub(log2),
        substeps: 0,
    };
    let dth = 2.0 * std::f64::consts::PI / nn as f64;
    let mut values = Vec::with_capacity(nn);
    values.push(first.clone());
    let mut cur = first.clone();
    for k in 0..nn {
        let t1 = if k + 1 == nn { points[0] } else { points[k + 1] };
        cur = stepper.advance(&cur, k as f64 * dth, (k + 1) as f64 * dth, t1, 0)?;
        if k + 1 < nn {
            values.push(cur.clone());
        }
    }
    let closure_residual = cur.iter().zip(&first).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let errors = (0..nn).map(|k| newton_sizes(&cp.a_t, &cp.b, points[k], &values[k])).collect();
    Ok(BranchTrack {
        contour,
        points,
        values,
        errors,
        labels,
        epsilon: cp.epsilon,
        closure_residual,
        label_margin,
        substeps: stepper.substeps,
    })
}

/// For each root, distance to the nearest *other* label class over distance
/// to its own label; labels with identical `(a, b)` form one class.
fn label_margin(labels: &[(f64, f64)], predictions: &[Complex<f64>], assigned: &[Complex<f64>]) -> f64 {
    let same = |i: usize, j: usize| {
        let (a1, b1) = labels[i];
        let (a2, b2) = labels[j];
        (a1 - a2).abs() <= 1e-12 * (1.0 + a1.abs()) && (b1 - b2).abs() <= 1e-12 * (1.0 + b1.abs())
    };
    let mut margin = f64::INFINITY;
    for (j, z) in assigned.iter().enumerate() {
        let own = (z - predictions[j]).norm();
        let other = (0..labels.len())
            .filter(|&i| !same(i, j))
            .map(|i| (z - predictions[i]).norm())
            .fold(f64::INFINITY, f64::min);
        let ratio = if own == 0.0 { f64::INFINITY } else { other / own };
        margin = margin.min(ratio);
    }
    margin
}

/// Size of the nonnegative-frequency Laurent part of `lambda_j + b_j t - a_jj`
/// on the contour (zero when the branch is analytic outside the circle), and
/// of the coefficients near the Nyquist frequency (zero when resolved).
pub fn exterior_analyticity(track: &BranchTrack<f64>) -> (f64, f64) {
    let nn = track.contour.nodes;
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(nn);
    let mut positive = 0.0f64;
    let mut nyquist = 0.0f64;
    for (j, &(a, b)) in track.labels.iter().enumerate() {
        let mut buf: Vec<Complex<f64>> =
            (0..nn).map(|k| track.values[k][j] + track.points[k] * b - a).collect();
        fft.process(&mut buf);
        for (m, c) in buf.iter().enumerate() {
            let c = c.norm() / nn as f64;
            if m <= nn / 4 {
                positive = positive.max(c);
            }
            if m >= 3 * nn / 8 && m <= 5 * nn / 8 {
                nyquist = nyquist.max(c);
            }
        }
    }
    (positive, nyquist)
}

/// Outcome of testing one radius.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub radius: f64,
    pub nodes: usize,
    pub closure: f64,
    pub label_margin: f64,
    pub exterior: f64,
    pub passed: bool,
}

/// Tracks at `radius`, doubling the node count until the Laurent data is
/// resolved, and tests closure, labelling and exterior analyticity.
pub fn certify(cp: &CanonicalPair, radius: f64, nodes: usize) -> Result<(Certificate, Option<BranchTrack<f64>>)> {
    let max_nodes = 8 * nodes;
    let mut nodes = nodes;
    loop {
        let contour = Contour::new(radius, nodes)?;
        let tr = match track(cp, contour) {
            Ok(tr) => tr,
            Err(Error::TrackingAmbiguous { .. }) => {
                let cert = Certificate { radius, nodes, closure: f64::INFINITY, label_margin: 0.0, exterior: f64::INFINITY, passed: false };
                return Ok((cert, None));
            }
            Err(e) => return Err(e),
        };
        let scale = tr.scale();
        let tol = 1e-9 * scale;
        let (positive, nyquist) = exterior_analyticity(&tr);
        if nyquist > tol && nodes < max_nodes {
            nodes *= 2;
            continue;
        }
        let passed = tr.closure_residual <= tol && tr.label_margin >= 2.0 && positive <= tol && nyquist <= tol;
        let cert = Certificate {
            radius,
            nodes,
            closure: tr.closure_residual,
            label_margin: tr.label_margin,
            exterior: positive.max(nyquist),
            passed,
        };
        return Ok((cert, Some(tr)));
    }
}

/// Initial node count `64 n`, rounded up to a power of two.
pub fn initial_nodes(n: usize) -> usize {
    (64 * n).next_power_of_two()
}

/// Picks the contour: search by halving/doubling from a scale estimate, then
/// geometric bisection, then a safety factor. Returns the contour and its track.
pub fn choose_radius(cp: &CanonicalPair, cfg: &TrackConfig) -> Result<(Contour, BranchTrack<f64>)> {
    let n = cp.n();
    let spread = cp.b[n - 1] - cp.b[0];
    if cp.distinct_b() < 2 || spread <= 0.0 {
        return Err(Error::InvalidInput("radius selection needs at least two distinct eigenvalues of B".into()));
    }
    if !(cfg.radius_factor > 0.0) {
        return Err(Error::InvalidInput("radius factor must be positive".into()));
    }
    let r0 = cfg.radius_factor * (2.0 * cp.a_t.frobenius()).max(1e-3 * spread) / spread;
    let n0 = initial_nodes(n);
    let (c0, _) = certify(cp, r0, n0)?;
    let (mut lo, mut hi): (Option<f64>, Option<Certificate>);
    if c0.passed {
        hi = Some(c0);
        lo = None;
        for _ in 0..40 {
            let rr = hi.as_ref().unwrap().radius / 2.0;
            let (c, _) = certify(cp, rr, n0)?;
            if c.passed {
                hi = Some(c);
            } else {
                lo = Some(rr);
                break;
            }
        }
    } else {
        lo = Some(r0);
        hi = None;
        for _ in 0..cfg.max_doublings {
            let rr = lo.unwrap() * 2.0;
            let (c, _) = certify(cp, rr, n0)?;
            if c.passed {
                hi = Some(c);
                break;
            }
            lo = Some(rr);
        }
    }
    let Some(mut best) = hi else {
        return Err(Error::RadiusOverflow { doublings: cfg.max_doublings, radius: lo.unwrap_or(r0) });
    };
    if let Some(mut l) = lo {
        for _ in 0..cfg.bisect_steps {
            let mid = (l * best.radius).sqrt();
            let (c, _) = certify(cp, mid, n0)?;
            if c.passed {
                best = c;
            } else {
                l = mid;
            }
        }
    }
    let radius = best.radius * cfg.radius_safety.max(1.0);
    let (c, tr) = certify(cp, radius, n0)?;
    match (c.passed, tr) {
        (true, Some(tr)) => Ok((tr.contour, tr)),
        _ => {
            let (c, tr) = certify(cp, best.radius, n0)?;
            match (c.passed, tr) {
                (true, Some(tr)) => Ok((tr.contour, tr)),
                _ => Err(Error::RadiusOverflow { doublings: cfg.max_doublings, radius: best.radius }),
            }
        }
    }
}

impl BranchTrack<f64> {
    /// Re-solves every node in precision `T`, starting from these values.
    /// Only the upper half is solved; the lower half follows by conjugation.
    pub fn refine<T: Real>(&self, cp: &CanonicalPair) -> Result<BranchTrack<T>> {
        let nn = self.contour.nodes;
        let points = self.contour.points::<T>();
        let a: ComplexMatrix<T> = cp.a_t.cast();
        let b: Vec<T> = cp.b.iter().map(|&x| T::from_real(x)).collect();
        let mut values: Vec<Vec<Complex<T>>> = vec![Vec::new(); nn];
        let mut errors: Vec<Vec<f64>> = vec![Vec::new(); nn];
        for k in 0..=nn / 2 {
            let mut z: Vec<Complex<T>> = self.values[k].iter().map(|w| Complex::new(T::from_real(w.re), T::from_real(w.im))).collect();
            if k == 0 || 2 * k == nn {
                // real node: the pencil is Hermitian
                for v in &mut z {
                    v.im = T::zero();
                }
            }
            polish(&a, &b, points[k], &mut z, 8)?;
            if k == 0 || 2 * k == nn {
                for v in &mut z {
                    v.im = T::zero();
                }
            }
            let scale = 1.0 + self.values[k].iter().map(|w| w.norm()).fold(0.0, f64::max);
            for (w, v) in self.values[k].iter().zip(&z) {
                if (to_c64(*v) - w).norm() > 1e-8 * scale {
                    return Err(Error::TrackingAmbiguous { nodes: nn });
                }
            }
            errors[k] = newton_sizes(&a, &b, points[k], &z);
            values[k] = z;
        }
        for k in nn / 2 + 1..nn {
            values[k] = values[nn - k].iter().map(|z| z.conj()).collect();
            errors[k] = errors[nn - k].clone();
        }
        Ok(BranchTrack {
            contour: self.contour,
            points,
            values,
            errors,
            labels: self.labels.clone(),
            epsilon: self.epsilon,
            closure_residual: self.closure_residual,
            label_margin: self.label_margin,
            substeps: self.substeps,
        })
    }
}
