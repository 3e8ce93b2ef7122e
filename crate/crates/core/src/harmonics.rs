//! Orthonormal spherical harmonics and the reproducing kernels `K_n`.
//!
//! `Y_nk(θ, φ) = sqrt(2n+1) P̄_n^{|k|}(cos θ) e^{ikφ}` is orthonormal under
//! the surface measure scaled to total mass one. Coefficient vectors use the
//! flat layout `n² + n + k`, i.e. `Y_00, Y_1,-1, Y_10, Y_11, Y_2,-2, ...`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SpherePoint;
use crate::legendre::{assoc_legendre_schmidt, legendre_unchecked, schmidt_table_unchecked, triangle_index};

/// A degree/order pair with `|k| <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    degree: usize,
    order: i64,
}

impl HarmonicIndex {
    pub fn new(degree: usize, order: i64) -> Result<Self> {
        if order.unsigned_abs() as usize > degree {
            return Err(Error::InvalidIndex { degree, order });
        }
        Ok(Self { degree, order })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Position in the flat layout, `n² + n + k`.
    pub fn flat(&self) -> usize {
        let n = self.degree as i64;
        (n * n + n + self.order) as usize
    }

    /// Inverse of [`HarmonicIndex::flat`].
    pub fn from_flat(flat: usize) -> Self {
        let degree = (flat as f64).sqrt() as usize;
        // guard against sqrt rounding for large perfect squares
        let degree = if degree * degree > flat {
            degree - 1
        } else if (degree + 1) * (degree + 1) <= flat {
            degree + 1
        } else {
            degree
        };
        let order = flat as i64 - (degree * degree + degree) as i64;
        Self { degree, order }
    }
}

/// Number of coefficients for degrees `< max_degree`.
pub fn coeff_len(max_degree: usize) -> usize {
    max_degree * max_degree
}

/// `Y_nk` at `point`.
///
/// `Y_{n,-k}` is the exact conjugate of `Y_{n,k}`: both share the real
/// factor and the phase `cos(|k|φ) ± i sin(|k|φ)`.
pub fn eval_y(idx: HarmonicIndex, point: &SpherePoint) -> Complex64 {
    let n = idx.degree();
    let m = idx.order().unsigned_abs() as usize;
    let p = assoc_legendre_schmidt(n, m, point.cos_theta()).expect("unit point, valid index");
    let amplitude = (2.0 * n as f64 + 1.0).sqrt() * p;
    let angle = m as f64 * point.phi();
    let phase = Complex64::new(angle.cos(), angle.sin());
    let value = phase * amplitude;
    if idx.order() < 0 {
        value.conj()
    } else {
        value
    }
}

/// All `Y_nk(point)` with `n < max_degree` in flat layout, sharing one
/// associated-Legendre table.
pub fn eval_y_batch(max_degree: usize, point: &SpherePoint) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coeff_len(max_degree)];
    eval_y_batch_into(max_degree, point, &mut out);
    out
}

pub(crate) fn eval_y_batch_into(max_degree: usize, point: &SpherePoint, out: &mut [Complex64]) {
    let table = schmidt_table_unchecked(max_degree, point.cos_theta());
    let phases: Vec<Complex64> = (0..max_degree)
        .map(|m| {
            let angle = m as f64 * point.phi();
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    for n in 0..max_degree {
        let scale = (2.0 * n as f64 + 1.0).sqrt();
        let center = n * n + n;
        for m in 0..=n {
            let value = phases[m] * (scale * table[triangle_index(n, m)]);
            out[center + m] = value;
            out[center - m] = value.conj();
        }
    }
}

/// `Σ_{n ∈ degrees} (2n+1) P_n(t)` with a single Legendre recurrence.
pub fn kernel_sum(degrees: std::ops::Range<usize>, t: f64) -> f64 {
    let t = t.clamp(-1.0, 1.0);
    if degrees.is_empty() {
        return 0.0;
    }
    let (mut p_prev, mut p) = (1.0, t);
    let mut total = 0.0;
    for n in 0..degrees.end {
        let value = match n {
            0 => 1.0,
            1 => t,
            _ => {
                let nf = (n - 1) as f64;
                let next = ((2.0 * nf + 1.0) * t * p - nf * p_prev) / (nf + 1.0);
                p_prev = p;
                p = next;
                next
            }
        };
        if n >= degrees.start {
            total += (2.0 * n as f64 + 1.0) * value;
        }
    }
    total
}

/// Reproducing kernel `K_n(ξ, η) = (2n+1) P_n(ξ·η)`.
pub fn kernel_k(n: usize, xi: &SpherePoint, eta: &SpherePoint) -> f64 {
    let (p, _) = legendre_unchecked(n, xi.dot(eta));
    (2.0 * n as f64 + 1.0) * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_point(rng: &mut impl Rng) -> SpherePoint {
        let z: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(0.0..2.0 * PI);
        SpherePoint::from_angles(z.acos(), phi)
    }

    #[test]
    fn flat_layout() {
        let cases = [(0, 0, 0), (1, -1, 1), (1, 0, 2), (1, 1, 3), (2, -1, 5), (3, 3, 15)];
        for (n, k, flat) in cases {
            let idx = HarmonicIndex::new(n, k).unwrap();
            assert_eq!(idx.flat(), flat);
            assert_eq!(HarmonicIndex::from_flat(flat), idx);
        }
        for flat in 0..10_000 {
            assert_eq!(HarmonicIndex::from_flat(flat).flat(), flat);
        }
        assert!(HarmonicIndex::new(1, 2).is_err());
        assert!(HarmonicIndex::new(1, -2).is_err());
    }

    #[test]
    fn low_degree_values() {
        let p = SpherePoint::from_angles(0.4, 2.0);
        let y00 = eval_y(HarmonicIndex::new(0, 0).unwrap(), &p);
        assert_eq!(y00, Complex64::new(1.0, 0.0));

        let north = SpherePoint::from_angles(0.0, 0.0);
        let y10 = eval_y(HarmonicIndex::new(1, 0).unwrap(), &north);
        assert_abs_diff_eq!(y10.re, 3.0f64.sqrt(), epsilon = 1e-15);

        // sqrt(3) * P̄_1^1(0) * e^{iπ/2} with P̄_1^1(0) = 1/sqrt(2)
        let q = SpherePoint::from_angles(PI / 2.0, PI / 2.0);
        let y11 = eval_y(HarmonicIndex::new(1, 1).unwrap(), &q);
        assert_abs_diff_eq!(y11.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y11.im, 1.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn conjugation_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_point(&mut rng);
            for n in 0..10 {
                for k in 1..=n as i64 {
                    let a = eval_y(HarmonicIndex::new(n, k).unwrap(), &p);
                    let b = eval_y(HarmonicIndex::new(n, -k).unwrap(), &p);
                    assert_eq!(a.conj(), b);
                }
            }
        }
    }

    #[test]
    fn batch_matches_pointwise() {
        assert_eq!(
            eval_y_batch(1, &SpherePoint::from_angles(1.0, 1.0)),
            vec![Complex64::new(1.0, 0.0)]
        );
        let eq = eval_y_batch(2, &SpherePoint::from_angles(PI / 2.0, 0.0));
        assert_eq!(eq[1], eq[3].conj());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let p = random_point(&mut rng);
            let batch = eval_y_batch(12, &p);
            for (flat, value) in batch.iter().enumerate() {
                let single = eval_y(HarmonicIndex::from_flat(flat), &p);
                assert!((value - single).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn kernel_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_point(&mut rng);
        let b = random_point(&mut rng);
        assert_eq!(kernel_k(0, &a, &b), 1.0);
        assert_eq!(kernel_k(1, &a, &a), 3.0);
        let sum: Complex64 = (-5..=5)
            .map(|k| {
                let idx = HarmonicIndex::new(5, k).unwrap();
                eval_y(idx, &a) * eval_y(idx, &b).conj()
            })
            .sum();
        assert_abs_diff_eq!(sum.re, kernel_k(5, &a, &b), epsilon = 1e-11);
        assert_abs_diff_eq!(sum.im, 0.0, epsilon = 1e-11);
    }

    #[test]
    fn kernel_sum_matches_terms() {
        for &t in &[-1.0, -0.3, 0.0, 0.25, 0.9, 1.0] {
            for start in 0..6 {
                for end in start..12 {
                    let direct: f64 = (start..end)
                        .map(|n| (2.0 * n as f64 + 1.0) * legendre_unchecked(n, t).0)
                        .sum();
                    assert_abs_diff_eq!(kernel_sum(start..end, t), direct, epsilon = 1e-12);
                }
            }
        }
        assert_eq!(kernel_sum(0..4, 1.0), 16.0);
    }
}
