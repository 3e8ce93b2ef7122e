//! The Gauss-Legendre × equiangular nodal set on the sphere and its
//! discrete measure.
//!
//! Nodes are `(θ_k, φ_j) = (arccos λ_k, 2πj/(2N+1))` for the `N` Legendre
//! roots `λ_k` (ascending, so `θ` descends) and `j = 0..=2N`. The canonical
//! node order is row-major with the ring index `k` outer and `j` inner. Every
//! node on ring `k` carries the weight `A_k / (2(2N+1))`, so the weights sum
//! to one.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::legendre::{christoffel_numbers, QuadratureRule};

/// A point on the unit sphere, kept in both Cartesian and angular form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    xyz: [f64; 3],
    theta: f64,
    phi: f64,
}

impl SpherePoint {
    /// Point at colatitude `theta ∈ [0, π]` and longitude `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            xyz: [st * cp, st * sp, ct],
            theta,
            phi,
        }
    }

    /// Normalizes `(x, y, z)` onto the sphere. Fails on the zero vector.
    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Precondition(format!(
                "cannot project ({x}, {y}, {z}) onto the sphere"
            )));
        }
        let (x, y, z) = (x / norm, y / norm, z / norm);
        let theta = z.clamp(-1.0, 1.0).acos();
        let mut phi = y.atan2(x);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        Ok(Self {
            xyz: [x, y, z],
            theta,
            phi,
        })
    }

    pub fn xyz(&self) -> [f64; 3] {
        self.xyz
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `cos θ`, the argument of the associated Legendre functions.
    pub fn cos_theta(&self) -> f64 {
        self.xyz[2]
    }

    /// Dot product clamped to `[-1, 1]`.
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        let [a, b, c] = self.xyz;
        let [d, e, f] = other.xyz;
        (a * d + b * e + c * f).clamp(-1.0, 1.0)
    }
}

/// The nodal set `X` with its discrete measure `μ_N`.
#[derive(Debug, Clone)]
pub struct SphericalGrid {
    degree: usize,
    rule: QuadratureRule,
    thetas: Vec<f64>,
    phis: Vec<f64>,
    ring_weights: Vec<f64>,
    points: Vec<SpherePoint>,
}

impl SphericalGrid {
    /// Grid of degree `n`: `n` rings of `2n + 1` nodes.
    pub fn new(n: usize) -> Result<Self> {
        let rule = christoffel_numbers(n)?;
        let per_ring = 2 * n + 1;
        let thetas: Vec<f64> = rule.nodes().iter().map(|x| x.acos()).collect();
        let phis: Vec<f64> = (0..per_ring).map(|j| 2.0 * PI * j as f64 / per_ring as f64).collect();
        let ring_weights: Vec<f64> = rule.weights().iter().map(|a| a / (2.0 * per_ring as f64)).collect();

        let mut points = Vec::with_capacity(n * per_ring);
        for (&lambda, &theta) in rule.nodes().iter().zip(&thetas) {
            let sin_theta = (1.0 - lambda * lambda).sqrt();
            for &phi in &phis {
                let (sp, cp) = phi.sin_cos();
                points.push(SpherePoint {
                    xyz: [sin_theta * cp, sin_theta * sp, lambda],
                    theta,
                    phi,
                });
            }
        }
        Ok(Self {
            degree: n,
            rule,
            thetas,
            phis,
            ring_weights,
            points,
        })
    }

    /// The grid degree `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `L = N(2N+1)`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    /// Nodes per ring, `2N + 1`.
    pub fn ring_len(&self) -> usize {
        self.phis.len()
    }

    /// Canonical index of node `(ring, j)`, both zero-based.
    pub fn node_index(&self, ring: usize, j: usize) -> usize {
        ring * self.ring_len() + j
    }

    /// `(ring, j)` of a canonical index, both zero-based.
    pub fn node_position(&self, index: usize) -> (usize, usize) {
        (index / self.ring_len(), index % self.ring_len())
    }

    /// `μ_N` at a node.
    pub fn weight(&self, index: usize) -> f64 {
        self.ring_weights[index / self.ring_len()]
    }

    /// Per-ring weights `A_k / (2(2N+1))`.
    pub fn ring_weights(&self) -> &[f64] {
        &self.ring_weights
    }

    /// Node weights in canonical order.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.ring_weights
            .iter()
            .flat_map(move |&w| std::iter::repeat_n(w, self.ring_len()))
    }

    /// The Cartesian image `X'` in canonical order.
    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    /// Weighted sum over canonical node order, compensated so that
    /// well-resolved integrals land on the correctly rounded value.
    pub fn integrate_values(&self, values: &[Complex64]) -> Result<Complex64> {
        self.check_len(values.len())?;
        let mut acc = CompensatedSum::default();
        for (v, w) in values.iter().zip(self.weights()) {
            acc.add(v * w);
        }
        Ok(acc.total())
    }

    /// Discrete inner product `Σ f conj(g) μ` in canonical order.
    pub fn inner_product(&self, f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        let mut acc = CompensatedSum::default();
        for ((a, b), w) in f.iter().zip(g).zip(self.weights()) {
            acc.add(a * b.conj() * w);
        }
        Ok(acc.total())
    }

    /// Discrete norm `sqrt(Σ |f|² μ)`.
    pub fn norm(&self, f: &[Complex64]) -> Result<f64> {
        self.check_len(f.len())?;
        Ok(f.iter()
            .zip(self.weights())
            .map(|(v, w)| v.norm_sqr() * w)
            .sum::<f64>()
            .sqrt())
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }
}

/// Builds the grid of degree `n`.
pub fn build_grid(n: usize) -> Result<SphericalGrid> {
    SphericalGrid::new(n)
}

/// The Cartesian nodes of `grid` in canonical order.
pub fn to_cartesian(grid: &SphericalGrid) -> Vec<SpherePoint> {
    grid.points().to_vec()
}

/// Function values at the nodes of a degree-`N` grid, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector {
    grid_degree: usize,
    values: Vec<Complex64>,
}

impl SampleVector {
    pub fn new(grid_degree: usize, values: Vec<Complex64>) -> Result<Self> {
        let expected = grid_degree * (2 * grid_degree + 1);
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Self { grid_degree, values })
    }

    /// Samples `f` at every node of `grid`.
    pub fn from_fn<F: FnMut(&SpherePoint) -> Complex64>(grid: &SphericalGrid, f: F) -> Self {
        Self {
            grid_degree: grid.degree(),
            values: grid.points().iter().map(f).collect(),
        }
    }

    pub fn grid_degree(&self) -> usize {
        self.grid_degree
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_grid(&self, grid: &SphericalGrid) -> Result<()> {
        if self.grid_degree != grid.degree() {
            return Err(Error::Precondition(format!(
                "samples belong to a degree-{} grid, not degree {}",
                self.grid_degree,
                grid.degree()
            )));
        }
        grid.check_len(self.values.len())
    }
}

/// Neumaier summation, applied to real and imaginary parts separately.
#[derive(Default)]
struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        let (re, cre) = neumaier_step(self.sum.re, x.re);
        let (im, cim) = neumaier_step(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.carry += Complex64::new(cre, cim);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn neumaier_step(sum: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let lost = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, lost)
}

/// `Σ_{k,j} f(z_kj) μ_N(z_kj)` in canonical order.
pub fn discrete_integral(grid: &SphericalGrid, samples: &SampleVector) -> Result<Complex64> {
    samples.check_grid(grid)?;
    grid.integrate_values(samples.values())
}
