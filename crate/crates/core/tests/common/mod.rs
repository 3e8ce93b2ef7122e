#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spherical_frames::{coeff_len, eval_y, CoeffVector, Complex64, HarmonicIndex, SpherePoint, SphericalGrid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut impl Rng) -> SpherePoint {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    SpherePoint::from_angles(z.acos(), phi)
}

pub fn random_points(rng: &mut impl Rng, count: usize) -> Vec<SpherePoint> {
    (0..count).map(|_| random_point(rng)).collect()
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random coefficients supported on degrees `window`, stored up to `window.end`.
pub fn random_coeffs_in(rng: &mut impl Rng, window: std::ops::Range<usize>) -> CoeffVector {
    let mut c = CoeffVector::zeros(window.end);
    for flat in coeff_len(window.start)..coeff_len(window.end) {
        c.entries_mut()[flat] = random_complex(rng);
    }
    c
}

pub fn random_coeffs(rng: &mut impl Rng, max_degree: usize) -> CoeffVector {
    random_coeffs_in(rng, 0..max_degree)
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Direct evaluation of `Σ_{n ∈ window} Σ_k conj(Y_nk(center)) Y_nk(point)`.
pub fn kernel_double_sum(window: std::ops::Range<usize>, center: &SpherePoint, point: &SpherePoint) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for n in window {
        for k in -(n as i64)..=n as i64 {
            let idx = HarmonicIndex::new(n, k).unwrap();
            total += eval_y(idx, center).conj() * eval_y(idx, point);
        }
    }
    total
}

/// `Φ₁` assembled entry by entry from `eval_y`.
pub fn dense_weighted_design(grid: &SphericalGrid, max_degree: usize) -> DMatrix<Complex64> {
    let weights: Vec<f64> = grid.weights().collect();
    DMatrix::from_fn(grid.len(), coeff_len(max_degree), |row, col| {
        eval_y(HarmonicIndex::from_flat(col), &grid.points()[row]) * weights[row].sqrt()
    })
}

pub fn weighted_samples(grid: &SphericalGrid, values: &[Complex64]) -> DVector<Complex64> {
    DVector::from_iterator(
        values.len(),
        values.iter().zip(grid.weights()).map(|(v, w)| v * w.sqrt()),
    )
}

/// Solves the normal equations `Φ₁ᴴΦ₁ a = Φ₁ᴴ f₁` by LU.
pub fn normal_equation_solve(grid: &SphericalGrid, values: &[Complex64], max_degree: usize) -> Vec<Complex64> {
    let phi = dense_weighted_design(grid, max_degree);
    let f1 = weighted_samples(grid, values);
    let lhs = phi.adjoint() * &phi;
    let rhs = phi.adjoint() * f1;
    lhs.lu().solve(&rhs).expect("full rank").iter().copied().collect()
}

/// Least squares through an SVD of `Φ₁`, never forming the normal matrix.
pub fn svd_least_squares(grid: &SphericalGrid, values: &[Complex64], max_degree: usize) -> Vec<Complex64> {
    let phi = dense_weighted_design(grid, max_degree);
    let f1 = weighted_samples(grid, values);
    phi.svd(true, true)
        .solve(&f1, 1e-12)
        .expect("svd solve")
        .iter()
        .copied()
        .collect()
}
