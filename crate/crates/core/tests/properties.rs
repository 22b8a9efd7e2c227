use proptest::prelude::*;

use bmv_measure::eigh::eigh;
use bmv_measure::io::{measure_json, InstanceFile};
use bmv_measure::random::{random_pair, random_psd_pair};
use bmv_measure::verify::{interpolated_coeffs, Check};
use bmv_measure::{
    canonicalize, compute_measure, density2, lambda1_explicit, laplace_transform, lieb_seiringer_coeffs, mehta_kumar,
    validate_pair, Matrix, MeasureConfig, RepresentingMeasure, TwoByTwoInstance, C64,
};

fn hermitian(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n).prop_map(move |v| {
        let rows = (0..n).map(|i| (0..n).map(|j| C64::new(v[i * n + j].0, v[i * n + j].1)).collect()).collect();
        Matrix::from_rows(rows).unwrap().hermitian_part()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs(m in (1usize..7).prop_flat_map(hermitian)) {
        let d = eigh(&m).unwrap();
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let res = (&d.reconstruct() - &m).max_abs();
        prop_assert!(res <= 1e-12 * m.max_abs().max(1.0), "{res}");
    }

    #[test]
    fn canonical_form_preserves_spectrum_and_shift(n in 2usize..6, seed in any::<u64>(), t in -2.0..4.0f64) {
        let (a, mut b) = random_pair(n, seed).unwrap();
        if seed % 2 == 0 {
            // make B singular so the shift is exercised
            let lo = eigh(&b).unwrap().eigenvalues[0];
            for i in 0..n {
                b[(i, i)] -= lo;
            }
        }
        let p = validate_pair(a.clone(), b, 1e-10).unwrap();
        let cp = canonicalize(&p, 1e-8).unwrap();
        let ea = eigh(&a).unwrap().eigenvalues;
        let ec = eigh(&cp.a_t).unwrap().eigenvalues;
        for (x, y) in ea.iter().zip(&ec) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
        let tra = a.trace().re;
        prop_assert!((cp.a_t.trace().re - tra).abs() <= 1e-12 * tra.abs().max(1.0));
        let f = p.trace_exp(t).unwrap();
        let g = cp.trace_exp(t).unwrap() * (cp.epsilon * t).exp();
        prop_assert!((f - g).abs() <= 1e-10 * f);
    }

    #[test]
    fn trace_exp_decreases_for_definite_b(n in 2usize..6, seed in any::<u64>()) {
        let (a, b) = random_pair(n, seed).unwrap();
        let p = validate_pair(a, b, 1e-10).unwrap();
        let f: Vec<f64> = (0..40).map(|i| p.trace_exp(0.25 * i as f64).unwrap()).collect();
        prop_assert!(f.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn coefficients_match_interpolation(n in 2usize..4, seed in any::<u64>(), m in 1usize..10) {
        let (a, b) = random_psd_pair(n, seed).unwrap();
        let p = validate_pair(a, b, 1e-10).unwrap();
        let c = lieb_seiringer_coeffs(&p, m).unwrap();
        let d = interpolated_coeffs(&p.a, &p.b, m);
        prop_assert_eq!(c.len(), m + 1);
        for (x, y) in c.iter().zip(&d) {
            prop_assert!(*x >= 0.0);
            prop_assert!((x - y).abs() <= 1e-8 * x.abs(), "{} vs {}", x, y);
        }
    }

    #[test]
    fn check_passes_iff_within_tolerance(r in 0.0..2.0f64, t in 0.0..2.0f64) {
        prop_assert_eq!(Check::new("x", r, t).passed, r <= t);
    }

    #[test]
    fn closed_forms_agree(a11 in -2.0..2.0f64, a22 in -2.0..2.0f64, a12 in 0.05..3.0f64,
                          b1 in 0.0..2.0f64, w in 0.2..3.0f64, s in 0.01..0.99f64) {
        let inst = TwoByTwoInstance::new(a11, a22, C64::new(a12, 0.0), b1, b1 + w).unwrap();
        let x = b1 + s * w;
        let i = density2(&inst, x).unwrap();
        let m = mehta_kumar(&inst, x, 1e-17).unwrap();
        prop_assert!(i > 0.0);
        prop_assert!((i - m).abs() <= 1e-10 * i.max(1.0), "{} vs {}", i, m);
    }

    #[test]
    fn explicit_branches_satisfy_vieta(a11 in -2.0..2.0f64, a12 in 0.1..2.0f64, re in -5.0..5.0f64, im in 0.5..5.0f64) {
        let inst = TwoByTwoInstance::new(a11, 0.3, C64::new(a12, 0.0), 0.5, 1.7).unwrap();
        let t = C64::new(re, im + 2.0 * a12 / 1.2);
        let l1 = lambda1_explicit(&inst, t).unwrap();
        let g = (l1 + t * inst.b1 - inst.a11) * (l1 + t * inst.b2 - inst.a22) - a12 * a12;
        prop_assert!(g.norm() <= 1e-10 * (1.0 + l1.norm()).powi(2));
    }

    #[test]
    fn instance_files_round_trip(n in 2usize..6, seed in any::<u64>()) {
        let (a, b) = random_pair(n, seed).unwrap();
        let f = InstanceFile::from_matrices(&a, &b);
        let g = InstanceFile::parse(&f.to_json()).unwrap();
        prop_assert_eq!(g.matrices().unwrap(), (a, b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn measures_are_positive_and_represent_f(n in 2usize..5, seed in any::<u64>()) {
        let (a, b) = random_pair(n, seed).unwrap();
        let p = validate_pair(a, b, 1e-10).unwrap();
        let (mu, _) = compute_measure(&p, &MeasureConfig::default()).unwrap();
        let scale = mu.scale();
        prop_assert!(mu.density.min_value().unwrap() >= -1e-9 * scale);
        for t in [0.0, 1.0, 3.0] {
            let f = p.trace_exp(t).unwrap();
            prop_assert!((laplace_transform(&mu, t) - f).abs() <= 1e-6 * f);
        }
        for a in &mu.atoms {
            prop_assert!(a.weight > 0.0 && a.location >= -1e-12);
        }
        let back: RepresentingMeasure = serde_json::from_str(&measure_json(&mu)).unwrap();
        prop_assert_eq!(back, mu);
    }
}
