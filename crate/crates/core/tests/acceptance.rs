use std::fs;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bmv_measure::eigh::eigh;
use bmv_measure::io::{closed_form2_rows, cmd_measure, cmd_random, cmd_verify, RunConfig};
use bmv_measure::random::{random_pair, random_psd_pair};
use bmv_measure::verify::{uniform_grid, verify_branches, verify_cm, verify_cm_samples, verify_reformulation_i, verify_representations};
use bmv_measure::{compute_measure, laplace_transform, mehta_kumar, validate_pair, Matrix, MeasureConfig, TwoByTwoInstance};

struct Line {
    ok: bool,
    detail: String,
}

fn line(ok: bool, detail: String) -> Line {
    Line { ok, detail }
}

fn criteria_1_3_4_5_6() -> Vec<Line> {
    let start = Instant::now();
    let (mut lap, mut eq, mut gap, mut pos, mut sup) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut eq_ok, mut gap_ok, mut pos_ok, mut sup_ok, mut br_ok, mut cm_ok) = (true, true, true, true, true, true);
    let mut br = [0.0f64; 4];
    let mut errors = Vec::new();
    let mut lap_time = 0.0;
    for i in 0..20u64 {
        let n = 2 + (i % 4) as usize;
        let seed = 1000 + i;
        let (a, b) = random_pair(n, seed).unwrap();
        let pair = validate_pair(a, b, 1e-10).unwrap();
        let t0 = Instant::now();
        let (mu, engine) = match compute_measure(&pair, &MeasureConfig::default()) {
            Ok(x) => x,
            Err(e) => {
                errors.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let f = pair.trace_exp(t).unwrap();
            lap = lap.max((laplace_transform(&mu, t) - f).abs() / f);
        }
        lap_time += t0.elapsed().as_secs_f64();
        let engine = engine.expect("random pairs do not commute");
        let scale = mu.scale();
        let reps = verify_representations(&engine, &mu, 10, seed).unwrap();
        for c in &reps {
            match c.name.as_str() {
                "lower equals upper" => {
                    eq = eq.max(c.residual / scale);
                    eq_ok &= c.passed;
                }
                "all-branch sum vanishes" => {
                    gap = gap.max(c.residual / scale);
                    gap_ok &= c.passed;
                }
                "support" => {
                    sup = sup.max(c.residual / scale);
                    sup_ok &= c.passed;
                }
                _ => {}
            }
        }
        let min = mu.density.min_value().unwrap_or(0.0);
        pos = pos.max(-min / scale);
        pos_ok &= min >= -1e-9 * scale;
        for (k, c) in verify_branches(engine.canonical(), engine.track(), scale, 20, seed).unwrap().iter().enumerate() {
            br[k] = br[k].max(c.residual);
            br_ok &= c.passed;
        }
        cm_ok &= verify_cm(&pair, 8, &uniform_grid(0.0, 5.0, 64)).unwrap().iter().all(|c| c.passed);
    }
    let grid = uniform_grid(0.0, 3.0, 64);
    let control: Vec<f64> = grid.iter().map(|t| (-t).exp() * t.cos()).collect();
    let control_fails = verify_cm_samples(&control, grid[1] - grid[0], 4).iter().any(|c| !c.passed);
    let none = errors.is_empty();
    let err = if none { String::new() } else { format!("; errors: {}", errors.join(", ")) };
    let total = start.elapsed().as_secs_f64();
    vec![
        line(
            none && lap <= 1e-6 && lap_time < 30.0,
            format!("Laplace identity: worst relative residual {lap:.3e} over 20 instances, measure time {lap_time:.1} s{err}"),
        ),
        line(
            none && eq_ok && gap_ok,
            format!("representation equivalence: lower/upper {eq:.3e}*scale, all-branch sum {gap:.3e}*scale"),
        ),
        line(none && pos_ok && sup_ok, format!("positivity and support: worst negativity {pos:.3e}*scale, outside probes {sup:.3e}*scale")),
        line(
            none && br_ok,
            format!(
                "branch invariants: closure {:.3e}, trace {:.3e}, conjugate symmetry {:.3e}, product {:.3e}",
                br[0], br[1], br[2], br[3]
            ),
        ),
        line(
            cm_ok && control_fails,
            format!("complete monotonicity m<=8 on all instances: {cm_ok}; e^-t cos t rejected: {control_fails} ({total:.1} s total)"),
        ),
    ]
}

fn criterion_2() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = RunConfig::default();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for _ in 0..10 {
        let a11 = rng.gen_range(-1.5..1.5);
        let a22 = rng.gen_range(-1.5..1.5);
        let a12 = Complex::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.0..6.3));
        let b1 = rng.gen_range(0.0..1.0);
        let b2 = b1 + rng.gen_range(0.5..2.0);
        let inst = TwoByTwoInstance::new(a11, a22, a12, b1, b2).unwrap();
        match closed_form2_rows(&inst, 51, &cfg) {
            Ok(rows) => {
                assert_eq!(rows.len(), 50);
                worst = rows.iter().map(|r| r.max_pair_diff()).fold(worst, f64::max);
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    let mid = TwoByTwoInstance::new(0.0, 0.0, Complex::new(1.0, 0.0), 0.0, 1.0).unwrap();
    let series = mehta_kumar(&mid, 0.5, 1e-17).unwrap();
    let row = closed_form2_rows(&mid, 2, &cfg).unwrap()[0];
    let mid_err = (row.contour - series).abs().max(row.max_pair_diff());
    line(
        failures.is_empty() && worst <= 1e-8 && mid_err <= 1e-8 && (series - 1.13032).abs() < 1e-5,
        format!("closed forms: worst pairwise difference {worst:.3e} over 10 instances, midpoint w(1/2) = {} (off by {mid_err:.3e})", row.contour),
    )
}

fn criterion_7() -> Line {
    let mut worst_neg = 0.0f64;
    let mut worst_interp = 0.0f64;
    let mut ok = true;
    for i in 0..10u64 {
        let n = 2 + (i % 2) as usize;
        let (a, b) = random_psd_pair(n, 2000 + i).unwrap();
        let pair = validate_pair(a, b, 1e-10).unwrap();
        for c in verify_reformulation_i(&pair, 13).unwrap() {
            ok &= c.passed;
            if c.name.contains("nonnegative") {
                worst_neg = worst_neg.max(c.residual);
            } else {
                worst_interp = worst_interp.max(c.residual);
            }
        }
    }
    line(ok, format!("coefficients of Tr(A+tB)^m, m<=13: worst negativity {worst_neg:.3e}, interpolation mismatch {worst_interp:.3e}"))
}

fn criterion_8() -> Line {
    let mut worst_loc = 0.0f64;
    let mut worst_w = 0.0f64;
    let mut worst_lap = 0.0f64;
    for seed in 0..10u64 {
        let n = 2 + (seed % 4) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let da: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut db: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        if seed % 3 == 0 {
            db[0] = 0.0;
        }
        let (g, _) = random_pair(n, seed).unwrap();
        let u = eigh(&g).unwrap().eigenvectors;
        let rot = |d: &[f64]| -> Matrix {
            if seed % 2 == 0 {
                Matrix::from_diag(d)
            } else {
                (&(&u * &Matrix::from_diag(d)) * &u.adjoint()).hermitian_part()
            }
        };
        let pair = validate_pair(rot(&da), rot(&db), 1e-10).unwrap();
        let (mu, engine) = compute_measure(&pair, &MeasureConfig::default()).unwrap();
        assert!(engine.is_none() && mu.density.is_empty());
        let mut want: Vec<(f64, f64)> = db.iter().zip(&da).map(|(&b, &a)| (b, a.exp())).collect();
        want.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut got: Vec<(f64, f64)> = mu.atoms.iter().map(|a| (a.location, a.weight)).collect();
        got.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (g, w) in got.iter().zip(&want) {
            worst_loc = worst_loc.max((g.0 - w.0).abs() / w.0.abs().max(1.0));
            worst_w = worst_w.max((g.1 - w.1).abs() / w.1);
        }
        for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let exact: f64 = want.iter().map(|(b, w)| w * (-t * b).exp()).sum();
            worst_lap = worst_lap.max((laplace_transform(&mu, t) - exact).abs() / exact);
        }
    }
    line(
        worst_loc <= 1e-12 && worst_w <= 1e-12 && worst_lap <= 1e-12,
        format!("commuting pairs: atom locations {worst_loc:.3e}, weights {worst_w:.3e}, Laplace {worst_lap:.3e}"),
    )
}

fn criterion_9() -> Line {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("instance.json");
    cmd_random(3, 42, &inst).unwrap();
    let again = dir.path().join("again.json");
    cmd_random(3, 42, &again).unwrap();
    let mut same = fs::read(&inst).unwrap() == fs::read(&again).unwrap();
    let cfg = RunConfig::default();
    for run in ["one", "two"] {
        let out = dir.path().join(run);
        cmd_measure(&inst, &cfg, &out).unwrap();
        cmd_verify(&inst, &cfg, &out).unwrap();
    }
    for f in ["measure.json", "density.csv", "report.json"] {
        same &= fs::read(dir.path().join("one").join(f)).unwrap() == fs::read(dir.path().join("two").join(f)).unwrap();
    }
    line(same, "byte-identical instance, measure.json, density.csv and report.json across runs".into())
}

fn main() {
    let mut lines: Vec<(usize, Line)> = Vec::new();
    let mut r = criteria_1_3_4_5_6().into_iter();
    lines.push((1, r.next().unwrap()));
    lines.push((2, criterion_2()));
    lines.push((3, r.next().unwrap()));
    lines.push((4, r.next().unwrap()));
    lines.push((5, r.next().unwrap()));
    lines.push((6, r.next().unwrap()));
    lines.push((7, criterion_7()));
    lines.push((8, criterion_8()));
    lines.push((9, criterion_9()));
    for (k, l) in &lines {
        println!("criterion {k}: {} - {}", if l.ok { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed: Vec<usize> = lines.iter().filter(|(_, l)| !l.ok).map(|(k, _)| *k).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
