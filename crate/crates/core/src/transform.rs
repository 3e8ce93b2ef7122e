//! Discrete Laplace-Fourier analysis and synthesis, and the weighted
//! least-squares problem on the nodal set.
//!
//! With `Φ₁ = I_N Φ` (rows scaled by `sqrt(μ_N)`), the Gram matrix
//! `Φ₁ᴴ Φ₁` is the identity for every max degree `m <= N`, so the
//! least-squares solution is `ã = Φ₁ᴴ f₁` and coincides with the discrete
//! Laplace-Fourier coefficients. Nothing here forms or inverts a normal
//! matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{SampleVector, SpherePoint, SphericalGrid};
use crate::harmonics::{coeff_len, eval_y_batch, eval_y_batch_into, kernel_sum, HarmonicIndex};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Laplace-Fourier coefficients `α_nk` for `n < max_degree`, flat layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    max_degree: usize,
    entries: Vec<Complex64>,
}

impl CoeffVector {
    pub fn zeros(max_degree: usize) -> Self {
        Self {
            max_degree,
            entries: vec![ZERO; coeff_len(max_degree)],
        }
    }

    pub fn new(max_degree: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != coeff_len(max_degree) {
            return Err(Error::LengthMismatch {
                expected: coeff_len(max_degree),
                found: entries.len(),
            });
        }
        Ok(Self { max_degree, entries })
    }

    /// A single unit coefficient at `idx`.
    pub fn unit(max_degree: usize, idx: HarmonicIndex) -> Result<Self> {
        if idx.degree() >= max_degree {
            return Err(Error::DegreeExceedsGrid {
                max_degree: idx.degree() + 1,
                grid_degree: max_degree,
            });
        }
        let mut c = Self::zeros(max_degree);
        c.entries[idx.flat()] = Complex64::new(1.0, 0.0);
        Ok(c)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// `α_nk`, or zero when `n` is beyond the stored range.
    pub fn get(&self, idx: HarmonicIndex) -> Complex64 {
        self.entries.get(idx.flat()).copied().unwrap_or(ZERO)
    }

    pub fn set(&mut self, idx: HarmonicIndex, value: Complex64) -> Result<()> {
        let slot = self.entries.get_mut(idx.flat()).ok_or(Error::DegreeExceedsGrid {
            max_degree: idx.degree() + 1,
            grid_degree: self.max_degree,
        })?;
        *slot = value;
        Ok(())
    }

    /// Degree of each entry, in flat order.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.max_degree).flat_map(|n| std::iter::repeat_n(n, 2 * n + 1))
    }

    /// `‖f‖²` by Parseval.
    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Continuous inner product `⟨f, g⟩ = Σ α_nk(f) conj(α_nk(g))`.
    /// Missing high-degree entries count as zero.
    pub fn inner(&self, other: &CoeffVector) -> Complex64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b.conj()).sum()
    }

    /// Copy padded with zeros (or truncated) to `max_degree`.
    pub fn resized(&self, max_degree: usize) -> CoeffVector {
        let mut out = Self::zeros(max_degree);
        let n = out.entries.len().min(self.entries.len());
        out.entries[..n].copy_from_slice(&self.entries[..n]);
        out
    }

    /// Max-abs difference after padding both to a common degree.
    pub fn max_abs_diff(&self, other: &CoeffVector) -> f64 {
        let m = self.max_degree.max(other.max_degree);
        let (a, b) = (self.resized(m), other.resized(m));
        a.entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

fn check_degree(grid: &SphericalGrid, max_degree: usize) -> Result<()> {
    if max_degree > grid.degree() {
        return Err(Error::DegreeExceedsGrid {
            max_degree,
            grid_degree: grid.degree(),
        });
    }
    if max_degree == 0 {
        return Err(Error::ZeroOrder(0));
    }
    Ok(())
}

/// Discrete Laplace-Fourier coefficients
/// `α_nk = Σ f(ξ) conj(Y_nk(ξ)) μ_N(ξ)` for `n < max_degree`.
///
/// Each coefficient is accumulated in canonical node order. Rejects
/// `max_degree > N`, where discrete orthogonality no longer holds.
pub fn analyze(grid: &SphericalGrid, samples: &SampleVector, max_degree: usize) -> Result<CoeffVector> {
    samples.check_grid(grid)?;
    check_degree(grid, max_degree)?;
    Ok(analyze_unchecked(grid, samples.values(), max_degree))
}

pub(crate) fn analyze_unchecked(grid: &SphericalGrid, values: &[Complex64], max_degree: usize) -> CoeffVector {
    let mut coeffs = CoeffVector::zeros(max_degree);
    let mut row = vec![ZERO; coeff_len(max_degree)];
    for ((point, f), w) in grid.points().iter().zip(values).zip(grid.weights()) {
        eval_y_batch_into(max_degree, point, &mut row);
        let fw = f * w;
        for (alpha, y) in coeffs.entries.iter_mut().zip(&row) {
            *alpha += fw * y.conj();
        }
    }
    coeffs
}

/// `f(η) = Σ α_nk Y_nk(η)` at every point.
pub fn synthesize(coeffs: &CoeffVector, points: &[SpherePoint]) -> Vec<Complex64> {
    let mut row = vec![ZERO; coeffs.entries.len()];
    points
        .iter()
        .map(|p| {
            eval_y_batch_into(coeffs.max_degree, p, &mut row);
            coeffs.entries.iter().zip(&row).fold(ZERO, |acc, (a, y)| acc + a * y)
        })
        .collect()
}

/// Synthesis at the nodes of `grid`, as a sample vector.
pub fn synthesize_on_grid(coeffs: &CoeffVector, grid: &SphericalGrid) -> SampleVector {
    SampleVector::new(grid.degree(), synthesize(coeffs, grid.points())).expect("one value per node")
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// `Aᴴ A`.
    pub fn gram(&self) -> DenseMatrix {
        let c = self.cols;
        let mut out = vec![ZERO; c * c];
        for r in 0..self.rows {
            let row = self.row(r);
            for a in 0..c {
                let left = row[a].conj();
                for b in 0..c {
                    out[a * c + b] += left * row[b];
                }
            }
        }
        DenseMatrix {
            rows: c,
            cols: c,
            data: out,
        }
    }

    /// `max |A - I|` for a square matrix.
    pub fn identity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((self.get(r, c) - target).norm());
            }
        }
        worst
    }
}

/// `Φ₁`: row `(k', j)` and column `(n, k)` hold `Y_nk(ξ_k'j) sqrt(μ_N(ξ_k'j))`.
pub fn build_weighted_design(grid: &SphericalGrid, max_degree: usize) -> Result<DenseMatrix> {
    check_degree(grid, max_degree)?;
    Ok(weighted_design_unchecked(grid, max_degree))
}

pub(crate) fn weighted_design_unchecked(grid: &SphericalGrid, max_degree: usize) -> DenseMatrix {
    let cols = coeff_len(max_degree);
    let mut data = Vec::with_capacity(grid.len() * cols);
    for (point, w) in grid.points().iter().zip(grid.weights()) {
        let scale = w.sqrt();
        data.extend(eval_y_batch(max_degree, point).into_iter().map(|y| y * scale));
    }
    DenseMatrix {
        rows: grid.len(),
        cols,
        data,
    }
}

/// `max |Φ₁ᴴ Φ₁ - I|` via the explicit matrix product.
pub fn gram_residual(grid: &SphericalGrid, max_degree: usize) -> Result<f64> {
    check_degree(grid, max_degree)?;
    Ok(weighted_design_unchecked(grid, max_degree).gram().identity_deviation())
}

/// The same quantity as [`gram_residual`] by `m⁴` pairwise discrete
/// inner products `⟨Y_n'k', Y_nk⟩_X`.
pub fn gram_residual_pairwise(grid: &SphericalGrid, max_degree: usize) -> Result<f64> {
    check_degree(grid, max_degree)?;
    let columns: Vec<Vec<Complex64>> = (0..coeff_len(max_degree))
        .map(|flat| {
            let idx = HarmonicIndex::from_flat(flat);
            grid.points().iter().map(|p| crate::harmonics::eval_y(idx, p)).collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (a, ya) in columns.iter().enumerate() {
        for (b, yb) in columns.iter().enumerate() {
            let ip = grid.inner_product(yb, ya)?;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).norm());
        }
    }
    Ok(worst)
}

/// Solution of the weighted problem `min ‖f₁ - Φ₁ a‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresFit {
    pub coeffs: CoeffVector,
    /// `‖f₁ - Φ₁ ã‖₂` in the `sqrt(μ)`-weighted norm.
    pub residual: f64,
}

/// Closed-form weighted least squares: `ã = Φ₁ᴴ f₁`.
///
/// Each row of `Φ₁` is built on the fly; the residual is accumulated in the
/// same pass over the nodes after the coefficients are known.
pub fn weighted_least_squares(
    grid: &SphericalGrid,
    samples: &SampleVector,
    max_degree: usize,
) -> Result<LeastSquaresFit> {
    samples.check_grid(grid)?;
    check_degree(grid, max_degree)?;
    let cols = coeff_len(max_degree);
    let mut row = vec![ZERO; cols];
    let mut coeffs = CoeffVector::zeros(max_degree);
    for ((point, f), w) in grid.points().iter().zip(samples.values()).zip(grid.weights()) {
        let scale = w.sqrt();
        let f1 = f * scale;
        eval_y_batch_into(max_degree, point, &mut row);
        for (alpha, y) in coeffs.entries.iter_mut().zip(&row) {
            *alpha += (y * scale).conj() * f1;
        }
    }
    let fitted = weighted_fitted_values(grid, &coeffs);
    let residual = samples
        .values()
        .iter()
        .zip(grid.weights())
        .zip(&fitted)
        .map(|((f, w), g)| (f * w.sqrt() - g).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(LeastSquaresFit { coeffs, residual })
}

fn weighted_fitted_values(grid: &SphericalGrid, coeffs: &CoeffVector) -> Vec<Complex64> {
    synthesize(coeffs, grid.points())
        .into_iter()
        .zip(grid.weights())
        .map(|(v, w)| v * w.sqrt())
        .collect()
}

/// The weighted best approximant `f̃ = Φ₁ ã`, one entry per node.
pub fn best_approximant(grid: &SphericalGrid, samples: &SampleVector, max_degree: usize) -> Result<SampleVector> {
    let fit = weighted_least_squares(grid, samples, max_degree)?;
    SampleVector::new(grid.degree(), weighted_fitted_values(grid, &fit.coeffs))
}

/// The best approximant through reproducing kernels:
/// `sqrt(μ(ξ)) Σ_η μ(η) f(η) Σ_{n<m} K_n(η, ξ)` at every node `ξ`.
pub fn best_approximant_kernel_form(
    grid: &SphericalGrid,
    samples: &SampleVector,
    max_degree: usize,
) -> Result<SampleVector> {
    samples.check_grid(grid)?;
    check_degree(grid, max_degree)?;
    let weights: Vec<f64> = grid.weights().collect();
    let values = grid
        .points()
        .iter()
        .zip(&weights)
        .map(|(xi, w_xi)| {
            let inner = grid
                .points()
                .iter()
                .zip(samples.values())
                .zip(&weights)
                .fold(ZERO, |acc, ((eta, f), w)| {
                    acc + f * (w * kernel_sum(0..max_degree, eta.dot(xi)))
                });
            inner * w_xi.sqrt()
        })
        .collect();
    SampleVector::new(grid.degree(), values)
}
