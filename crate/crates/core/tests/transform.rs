mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use spherical_frames::{
    analyze, best_approximant, best_approximant_kernel_form, build_grid, build_weighted_design, coeff_len, eval_y,
    kernel_k, synthesize, synthesize_on_grid, weighted_least_squares, CoeffVector, Complex64, Error, HarmonicIndex,
    SampleVector,
};

fn idx(n: usize, k: i64) -> HarmonicIndex {
    HarmonicIndex::new(n, k).unwrap()
}

#[test]
fn addition_theorem() {
    let mut rng = common::rng(7);
    for _ in 0..50 {
        let a = common::random_point(&mut rng);
        let b = common::random_point(&mut rng);
        for n in 0..=12 {
            let sum: Complex64 = (-(n as i64)..=n as i64)
                .map(|k| eval_y(idx(n, k), &a) * eval_y(idx(n, k), &b).conj())
                .sum();
            assert!((sum - kernel_k(n, &a, &b)).norm() < 1e-11, "n={n}");
        }
    }
}

#[test]
fn discrete_reproducing_kernel() {
    // Σ_η μ(η) K_n(ξ, η) Y_nk(η) = Y_nk(ξ) for n < N
    let g = build_grid(6).unwrap();
    let mut rng = common::rng(8);
    let xi = common::random_point(&mut rng);
    for n in 0..6 {
        for k in -(n as i64)..=n as i64 {
            let y = SampleVector::from_fn(&g, |p| eval_y(idx(n, k), p) * kernel_k(n, &xi, p));
            let lhs = g.integrate_values(y.values()).unwrap();
            assert!((lhs - eval_y(idx(n, k), &xi)).norm() < 1e-12);
        }
    }
}

#[test]
fn analyze_examples() {
    let g = build_grid(4).unwrap();
    let s = SampleVector::from_fn(&g, |p| eval_y(idx(2, -1), p));
    let c = analyze(&g, &s, 4).unwrap();
    for flat in 0..coeff_len(4) {
        let expected = if flat == idx(2, -1).flat() { 1.0 } else { 0.0 };
        assert!((c.entries()[flat] - expected).norm() < 1e-12, "flat={flat}");
    }

    let one = SampleVector::from_fn(&g, |_| Complex64::new(1.0, 0.0));
    let c = analyze(&g, &one, 4).unwrap();
    assert_abs_diff_eq!(c.entries()[0].re, 1.0, epsilon = 1e-13);
    assert!(c.entries()[1..].iter().all(|v| v.norm() < 1e-13));

    assert!(matches!(analyze(&g, &one, 5), Err(Error::DegreeExceedsGrid { .. })));
    let other = build_grid(3).unwrap();
    assert!(analyze(&other, &one, 3).is_err());
}

#[test]
fn synthesize_examples() {
    let g = build_grid(3).unwrap();
    let c = CoeffVector::unit(3, idx(0, 0)).unwrap();
    let s = synthesize_on_grid(&c, &g);
    assert!(s.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));

    let c = CoeffVector::unit(3, idx(1, 1)).unwrap();
    let s = synthesize_on_grid(&c, &g);
    for (v, p) in s.values().iter().zip(g.points()) {
        assert!((v - eval_y(idx(1, 1), p)).norm() < 1e-15);
    }
}

#[test]
fn round_trips() {
    let mut rng = common::rng(9);
    for n in [2, 3, 4, 8, 16] {
        let g = build_grid(n).unwrap();
        let c = common::random_coeffs(&mut rng, n);
        let back = analyze(&g, &synthesize_on_grid(&c, &g), n).unwrap();
        assert!(back.max_abs_diff(&c) < 1e-11 * common::max_abs(c.entries()), "N={n}");

        let s = SampleVector::from_fn(&g, |p| eval_y(idx(n - 1, 0), p) + Complex64::new(0.0, 0.5));
        let again = synthesize_on_grid(&analyze(&g, &s, n).unwrap(), &g);
        assert!(common::max_abs_diff(again.values(), s.values()) < 1e-11);
    }
}

#[test]
fn parseval_on_band_limited_data() {
    let mut rng = common::rng(10);
    for n in [2, 5, 9] {
        let g = build_grid(n).unwrap();
        let c = common::random_coeffs(&mut rng, n);
        let f = synthesize_on_grid(&c, &g);
        assert_abs_diff_eq!(
            g.norm(f.values()).unwrap().powi(2),
            c.norm_sqr(),
            epsilon = 1e-11 * c.norm_sqr()
        );
    }
}

#[test]
fn design_matrix_shape_and_gram() {
    let g = build_grid(3).unwrap();
    let phi = build_weighted_design(&g, 3).unwrap();
    assert_eq!((phi.rows(), phi.cols()), (21, 9));
    assert!(phi.gram().identity_deviation() < 1e-13);
    let dense = common::dense_weighted_design(&g, 3);
    for r in 0..21 {
        for c in 0..9 {
            assert!((phi.get(r, c) - dense[(r, c)]).norm() < 1e-14);
        }
    }
}

#[test]
fn least_squares_matches_dense_oracles() {
    let mut rng = common::rng(11);
    for trial in 0..20 {
        let n = 1 + trial % 4;
        let g = build_grid(n).unwrap();
        let m = 1 + trial % n;
        let values: Vec<Complex64> = (0..g.len()).map(|_| common::random_complex(&mut rng)).collect();
        let samples = SampleVector::new(n, values.clone()).unwrap();
        let fit = weighted_least_squares(&g, &samples, m).unwrap();
        let normal = common::normal_equation_solve(&g, &values, m);
        let svd = common::svd_least_squares(&g, &values, m);
        assert!(common::max_abs_diff(fit.coeffs.entries(), &normal) < 1e-9);
        assert!(common::max_abs_diff(fit.coeffs.entries(), &svd) < 1e-9);

        let analyzed = analyze(&g, &samples, m).unwrap();
        assert!(analyzed.max_abs_diff(&fit.coeffs) < 1e-13);
    }
}

#[test]
fn least_squares_examples() {
    let g = build_grid(4).unwrap();
    let s = SampleVector::from_fn(&g, |p| eval_y(idx(1, 0), p));
    let fit = weighted_least_squares(&g, &s, 4).unwrap();
    assert!(fit.residual < 1e-12);
    assert!((fit.coeffs.get(idx(1, 0)) - 1.0).norm() < 1e-12);

    // a degree the fit cannot see leaves the whole weighted sample norm as residual
    let s = SampleVector::from_fn(&g, |p| eval_y(idx(2, 1), p));
    let fit = weighted_least_squares(&g, &s, 2).unwrap();
    let f1_norm = common::weighted_samples(&g, s.values()).norm();
    assert_abs_diff_eq!(fit.residual, f1_norm, epsilon = 1e-12);
    assert!(fit.coeffs.norm() < 1e-12);
}

#[test]
fn best_approximant_forms_agree() {
    let mut rng = common::rng(12);
    for n in [2, 3, 5] {
        let g = build_grid(n).unwrap();
        let values: Vec<Complex64> = (0..g.len()).map(|_| common::random_complex(&mut rng)).collect();
        let s = SampleVector::new(n, values).unwrap();
        for m in 1..=n {
            let a = best_approximant(&g, &s, m).unwrap();
            let b = best_approximant_kernel_form(&g, &s, m).unwrap();
            assert!(common::max_abs_diff(a.values(), b.values()) < 1e-11, "N={n} m={m}");
        }
    }
}

#[test]
fn off_grid_reconstruction() {
    let mut rng = common::rng(13);
    let g = build_grid(8).unwrap();
    let c = common::random_coeffs(&mut rng, 8);
    let back = analyze(&g, &synthesize_on_grid(&c, &g), 8).unwrap();
    let points = common::random_points(&mut rng, 10);
    let direct: Vec<Complex64> = points
        .iter()
        .map(|p| {
            (0..coeff_len(8))
                .map(|f| c.entries()[f] * eval_y(HarmonicIndex::from_flat(f), p))
                .sum()
        })
        .collect();
    assert!(common::max_abs_diff(&synthesize(&back, &points), &direct) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn analysis_inverts_synthesis(n in 1usize..12, seed in any::<u64>()) {
        let g = build_grid(n).unwrap();
        let c = common::random_coeffs(&mut common::rng(seed), n);
        let back = analyze(&g, &synthesize_on_grid(&c, &g), n).unwrap();
        prop_assert!(back.max_abs_diff(&c) < 1e-12);
    }

    #[test]
    fn residual_is_orthogonal_to_the_fit(n in 1usize..7, seed in any::<u64>()) {
        let g = build_grid(n).unwrap();
        let mut rng = common::rng(seed);
        let values: Vec<Complex64> = (0..g.len()).map(|_| common::random_complex(&mut rng)).collect();
        let s = SampleVector::new(n, values).unwrap();
        let fit = weighted_least_squares(&g, &s, n).unwrap();
        let fitted = synthesize_on_grid(&fit.coeffs, &g);
        let resid: Vec<Complex64> = s.values().iter().zip(fitted.values()).map(|(a, b)| a - b).collect();
        prop_assert!(g.inner_product(&resid, fitted.values()).unwrap().norm() < 1e-12);
        let total = g.norm(s.values()).unwrap().powi(2);
        prop_assert!((fit.residual.powi(2) + fit.coeffs.norm_sqr() - total).abs() < 1e-11);
    }
}
