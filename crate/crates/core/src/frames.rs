//! Multiresolution on the sphere: the ladder of band-limited spaces
//! `V_j = Π_{m_j - 1}`, the weighted scaling functions
//! `φ_j(·, ξ) = Σ_{n<m_j} K_n(·, ξ)`, the wavelets
//! `ψ_j(·, ξ) = Σ_{m_j≤n<m_{j+1}} K_n(·, ξ)`, and the tight frames they form
//! at the grid nodes.
//!
//! Levels are numbered from 1. Scaling level `j` needs `m_j <= N`
//! (`j <= j0`); wavelet level `j` needs `m_{j+1} <= N` (`j <= j0 - 1`).
//!
//! Frame coefficients are the unweighted discrete inner products
//! `⟨f, φ_j(·, ξ)⟩_X`. The node weights enter only at synthesis and in the
//! frame norm `Σ μ(ξ) |c(ξ)|²`.

use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{SampleVector, SpherePoint, SphericalGrid};
use crate::harmonics::{coeff_len, eval_y_batch, kernel_sum};
use crate::transform::{analyze, synthesize_on_grid, CoeffVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Strictly increasing degree cutoffs `m_1 < m_2 < ...` capped by the grid
/// degree `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiresolutionLadder {
    cutoffs: Vec<usize>,
    cap: usize,
    top_level: usize,
}

impl MultiresolutionLadder {
    /// Cutoffs above `cap` are kept but their levels are unusable; at least
    /// `m_1 <= cap` is required.
    pub fn new(cutoffs: Vec<usize>, cap: usize) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::InvalidLadder("no cutoffs".into()));
        }
        if cutoffs[0] == 0 {
            return Err(Error::InvalidLadder("cutoffs must be positive".into()));
        }
        if let Some(w) = cutoffs.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidLadder(format!(
                "cutoffs must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let top_level = cutoffs.iter().take_while(|&&m| m <= cap).count();
        if top_level == 0 {
            return Err(Error::InvalidLadder(format!(
                "first cutoff {} exceeds the grid degree {cap}",
                cutoffs[0]
            )));
        }
        Ok(Self {
            cutoffs,
            cap,
            top_level,
        })
    }

    /// `m_j = j` for `j = 1..=cap`.
    pub fn uniform(cap: usize) -> Result<Self> {
        Self::new((1..=cap).collect(), cap)
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `j0`, the largest level with `m_j <= N`.
    pub fn top_level(&self) -> usize {
        self.top_level
    }

    /// `m_j` for `1 <= j <= j0`.
    pub fn cutoff(&self, level: usize) -> Result<usize> {
        self.check_scaling_level(level)?;
        Ok(self.cutoffs[level - 1])
    }

    fn check_scaling_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.top_level {
            return Err(Error::LevelOutOfRange {
                level,
                max: self.top_level,
            });
        }
        Ok(())
    }

    fn check_wavelet_level(&self, level: usize) -> Result<()> {
        if level == 0 || level + 1 > self.top_level {
            return Err(Error::LevelOutOfRange {
                level,
                max: self.top_level.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// Degrees spanned by the level-`j` functions of the given kind.
    pub fn degree_window(&self, kind: FrameKind, level: usize) -> Result<Range<usize>> {
        match kind {
            FrameKind::Scaling => {
                self.check_scaling_level(level)?;
                Ok(0..self.cutoffs[level - 1])
            }
            FrameKind::Wavelet => {
                self.check_wavelet_level(level)?;
                Ok(self.cutoffs[level - 1]..self.cutoffs[level])
            }
        }
    }

    fn check_grid(&self, grid: &SphericalGrid) -> Result<()> {
        if grid.degree() != self.cap {
            return Err(Error::Precondition(format!(
                "ladder is capped at degree {}, grid has degree {}",
                self.cap,
                grid.degree()
            )));
        }
        Ok(())
    }
}

/// Scaling functions `φ_j` (spanning `V_j`) or wavelets `ψ_j` (spanning
/// `W_j = V_{j+1} ⊖ V_j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameKind {
    Scaling,
    Wavelet,
}

/// `φ_j(point, center) = Σ_{n<m_j} (2n+1) P_n(point·center)`.
pub fn scaling_phi(
    ladder: &MultiresolutionLadder,
    level: usize,
    center: &SpherePoint,
    point: &SpherePoint,
) -> Result<f64> {
    frame_kernel(ladder, FrameKind::Scaling, level, center, point)
}

/// `ψ_j(point, center) = Σ_{m_j≤n<m_{j+1}} (2n+1) P_n(point·center)`.
pub fn wavelet_psi(
    ladder: &MultiresolutionLadder,
    level: usize,
    center: &SpherePoint,
    point: &SpherePoint,
) -> Result<f64> {
    frame_kernel(ladder, FrameKind::Wavelet, level, center, point)
}

pub fn frame_kernel(
    ladder: &MultiresolutionLadder,
    kind: FrameKind,
    level: usize,
    center: &SpherePoint,
    point: &SpherePoint,
) -> Result<f64> {
    let window = ladder.degree_window(kind, level)?;
    Ok(kernel_sum(window, point.dot(center)))
}

/// Level-`j` frame coefficients `c(ξ) = ⟨f, φ_j(·, ξ)⟩_X` (or with `ψ_j`),
/// one per node in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCoefficients {
    kind: FrameKind,
    level: usize,
    grid_degree: usize,
    values: Vec<Complex64>,
}

impl FrameCoefficients {
    pub fn new(kind: FrameKind, level: usize, grid_degree: usize, values: Vec<Complex64>) -> Result<Self> {
        let expected = grid_degree * (2 * grid_degree + 1);
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Self {
            kind,
            level,
            grid_degree,
            values,
        })
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn grid_degree(&self) -> usize {
        self.grid_degree
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `Σ μ(ξ) |c(ξ)|²`.
    pub fn weighted_norm_sqr(&self, grid: &SphericalGrid) -> f64 {
        self.values
            .iter()
            .zip(grid.weights())
            .map(|(c, w)| w * c.norm_sqr())
            .sum()
    }
}

/// `out[a] = Σ_b values[b] μ(b) kernel(node_b · target_a)` over all nodes `b`,
/// accumulated in canonical order.
fn kernel_apply(
    grid: &SphericalGrid,
    window: &Range<usize>,
    values: &[Complex64],
    targets: &[SpherePoint],
) -> Vec<Complex64> {
    let weighted: Vec<Complex64> = values.iter().zip(grid.weights()).map(|(v, w)| v * w).collect();
    targets
        .iter()
        .map(|target| {
            grid.points().iter().zip(&weighted).fold(ZERO, |acc, (node, v)| {
                acc + v * kernel_sum(window.clone(), node.dot(target))
            })
        })
        .collect()
}

fn analyze_kind(
    ladder: &MultiresolutionLadder,
    kind: FrameKind,
    level: usize,
    grid: &SphericalGrid,
    samples: &SampleVector,
) -> Result<FrameCoefficients> {
    ladder.check_grid(grid)?;
    samples.check_grid(grid)?;
    let window = ladder.degree_window(kind, level)?;
    // the kernels are real, so conjugation is a no-op
    let values = kernel_apply(grid, &window, samples.values(), grid.points());
    FrameCoefficients::new(kind, level, grid.degree(), values)
}

fn synthesize_kind(
    ladder: &MultiresolutionLadder,
    kind: FrameKind,
    level: usize,
    grid: &SphericalGrid,
    coeffs: &FrameCoefficients,
    points: &[SpherePoint],
) -> Result<Vec<Complex64>> {
    ladder.check_grid(grid)?;
    let window = ladder.degree_window(kind, level)?;
    if coeffs.kind != kind || coeffs.level != level {
        return Err(Error::Precondition(format!(
            "coefficients are {:?} level {}, expected {:?} level {}",
            coeffs.kind, coeffs.level, kind, level
        )));
    }
    grid.check_len(coeffs.values.len())?;
    Ok(kernel_apply(grid, &window, &coeffs.values, points))
}

/// `c(ξ) = ⟨f, φ_j(·, ξ)⟩_X` at every node. Equals `f(ξ)` when `f ∈ V_j`.
pub fn frame_analyze(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    samples: &SampleVector,
) -> Result<FrameCoefficients> {
    analyze_kind(ladder, FrameKind::Scaling, level, grid, samples)
}

/// `c(ξ) = ⟨f, ψ_j(·, ξ)⟩_X` at every node. Equals `f(ξ)` when `f ∈ W_j`.
pub fn wavelet_analyze(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    samples: &SampleVector,
) -> Result<FrameCoefficients> {
    analyze_kind(ladder, FrameKind::Wavelet, level, grid, samples)
}

/// `f(η) = Σ_ξ c(ξ) φ_j(η, ξ) μ(ξ)`; reproduces `R_j f` everywhere.
pub fn frame_synthesize(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    coeffs: &FrameCoefficients,
    points: &[SpherePoint],
) -> Result<Vec<Complex64>> {
    synthesize_kind(ladder, FrameKind::Scaling, level, grid, coeffs, points)
}

/// `f(η) = Σ_ξ c(ξ) ψ_j(η, ξ) μ(ξ)`; reproduces `Q_j f` everywhere.
pub fn wavelet_synthesize(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    coeffs: &FrameCoefficients,
    points: &[SpherePoint],
) -> Result<Vec<Complex64>> {
    synthesize_kind(ladder, FrameKind::Wavelet, level, grid, coeffs, points)
}

fn mask_degrees(coeffs: &CoeffVector, window: Range<usize>) -> CoeffVector {
    let mut out = coeffs.clone();
    let degrees: Vec<usize> = coeffs.degrees().collect();
    for (value, n) in out.entries_mut().iter_mut().zip(degrees) {
        if !window.contains(&n) {
            *value = ZERO;
        }
    }
    out
}

/// `R_j`: keeps the degrees `n < m_j`.
pub fn project_v(ladder: &MultiresolutionLadder, level: usize, coeffs: &CoeffVector) -> Result<CoeffVector> {
    let window = ladder.degree_window(FrameKind::Scaling, level)?;
    Ok(mask_degrees(coeffs, window))
}

/// `Q_j`: keeps the degrees `m_j <= n < m_{j+1}`. The input must carry
/// every degree below `m_{j+1}`.
pub fn project_w(ladder: &MultiresolutionLadder, level: usize, coeffs: &CoeffVector) -> Result<CoeffVector> {
    let window = ladder.degree_window(FrameKind::Wavelet, level)?;
    if coeffs.max_degree() < window.end {
        return Err(Error::Precondition(format!(
            "coefficients stop at degree {}, wavelet level {level} needs degrees below {}",
            coeffs.max_degree(),
            window.end
        )));
    }
    Ok(mask_degrees(coeffs, window))
}

/// `R_1 f + Σ_{k<j} Q_k f`, which equals `R_j f`.
pub fn telescope(ladder: &MultiresolutionLadder, level: usize, coeffs: &CoeffVector) -> Result<CoeffVector> {
    let mut total = project_v(ladder, 1, coeffs)?;
    for k in 1..level {
        let detail = project_w(ladder, k, coeffs)?;
        for (t, d) in total.entries_mut().iter_mut().zip(detail.entries()) {
            *t += d;
        }
    }
    ladder.degree_window(FrameKind::Scaling, level)?;
    Ok(total)
}

/// Both sides of a tight-frame identity: `lhs = ‖f‖²` (Parseval) and
/// `rhs = Σ μ(ξ) |⟨f, κ(·, ξ)⟩_X|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl FrameCheck {
    /// `|lhs - rhs| / lhs`, or the absolute gap when `lhs == 0`.
    pub fn relative_gap(&self) -> f64 {
        let gap = (self.lhs - self.rhs).abs();
        if self.lhs == 0.0 {
            gap
        } else {
            gap / self.lhs
        }
    }
}

fn frame_check_kind(
    ladder: &MultiresolutionLadder,
    kind: FrameKind,
    level: usize,
    grid: &SphericalGrid,
    coeffs: &CoeffVector,
) -> Result<FrameCheck> {
    ladder.degree_window(kind, level)?;
    if coeffs.max_degree() > grid.degree() {
        return Err(Error::DegreeExceedsGrid {
            max_degree: coeffs.max_degree(),
            grid_degree: grid.degree(),
        });
    }
    let samples = synthesize_on_grid(coeffs, grid);
    let frame = analyze_kind(ladder, kind, level, grid, &samples)?;
    Ok(FrameCheck {
        lhs: coeffs.norm_sqr(),
        rhs: frame.weighted_norm_sqr(grid),
    })
}

/// Tight-frame identity in `V_j`. Inputs outside `V_j` are accepted; the
/// result then reports the measured gap.
pub fn tight_frame_check(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    coeffs: &CoeffVector,
) -> Result<FrameCheck> {
    frame_check_kind(ladder, FrameKind::Scaling, level, grid, coeffs)
}

/// Tight-frame identity in `W_j`, with `ψ_j` kernels.
pub fn wavelet_frame_check(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    coeffs: &CoeffVector,
) -> Result<FrameCheck> {
    frame_check_kind(ladder, FrameKind::Wavelet, level, grid, coeffs)
}

/// Laplace-Fourier coefficients of `φ_j(·, center)` or `ψ_j(·, center)`:
/// `conj(Y_nk(center))` inside the degree window, zero elsewhere.
pub fn kernel_coefficients(
    ladder: &MultiresolutionLadder,
    kind: FrameKind,
    level: usize,
    center: &SpherePoint,
) -> Result<CoeffVector> {
    let window = ladder.degree_window(kind, level)?;
    let y = eval_y_batch(window.end, center);
    let mut out = CoeffVector::zeros(window.end);
    for (slot, value) in out.entries_mut()[coeff_len(window.start)..]
        .iter_mut()
        .zip(&y[coeff_len(window.start)..])
    {
        *slot = value.conj();
    }
    Ok(out)
}

/// The element of least norm in `V_j` (or `W_j`) taking the value 1 at
/// `center`: `φ_j(·, center) / m_j²`, or `ψ_j(·, center) / (m_{j+1}² - m_j²)`.
pub fn min_norm_interpolant(
    ladder: &MultiresolutionLadder,
    kind: FrameKind,
    level: usize,
    center: &SpherePoint,
) -> Result<CoeffVector> {
    let window = ladder.degree_window(kind, level)?;
    let dim = (coeff_len(window.end) - coeff_len(window.start)) as f64;
    let mut out = kernel_coefficients(ladder, kind, level, center)?;
    for value in out.entries_mut() {
        *value /= dim;
    }
    Ok(out)
}

fn kernel_mean(
    ladder: &MultiresolutionLadder,
    kind: FrameKind,
    level: usize,
    grid: &SphericalGrid,
    center: &SpherePoint,
) -> Result<f64> {
    ladder.check_grid(grid)?;
    let window = ladder.degree_window(kind, level)?;
    Ok(grid
        .points()
        .iter()
        .zip(grid.weights())
        .map(|(p, w)| w * kernel_sum(window.clone(), p.dot(center)))
        .sum())
}

/// `∫_X φ_j(·, center) dμ_N`, which is 1.
pub fn scaling_mean(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    center: &SpherePoint,
) -> Result<f64> {
    kernel_mean(ladder, FrameKind::Scaling, level, grid, center)
}

/// `∫_X ψ_j(·, center) dμ_N`, which is 0. Requires `m_j > 1`.
pub fn wavelet_mean(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    center: &SpherePoint,
) -> Result<f64> {
    let window = ladder.degree_window(FrameKind::Wavelet, level)?;
    if window.start <= 1 {
        return Err(Error::Precondition(format!(
            "wavelet mean needs m_j > 1, level {level} has m_j = {}",
            window.start
        )));
    }
    kernel_mean(ladder, FrameKind::Wavelet, level, grid, center)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValues {
    pub phi_mean: f64,
    pub psi_mean: f64,
}

/// Both mean values at one level; fails wherever either precondition does.
pub fn mean_value_checks(
    ladder: &MultiresolutionLadder,
    level: usize,
    grid: &SphericalGrid,
    center: &SpherePoint,
) -> Result<MeanValues> {
    Ok(MeanValues {
        psi_mean: wavelet_mean(ladder, level, grid, center)?,
        phi_mean: scaling_mean(ladder, level, grid, center)?,
    })
}

/// Fejér mean `(1/n) Σ_{m=1}^{n} S_m f`; the degree-`d` coefficient is
/// scaled by `(n - d)/n`. Requires `1 <= n <= N`.
pub fn fejer_mean(grid: &SphericalGrid, samples: &SampleVector, n: usize) -> Result<CoeffVector> {
    if n == 0 || n > grid.degree() {
        return Err(Error::Precondition(format!(
            "Fejér parameter must lie in 1..={}, got {n}",
            grid.degree()
        )));
    }
    let mut coeffs = analyze(grid, samples, n)?;
    let degrees: Vec<usize> = coeffs.degrees().collect();
    for (value, d) in coeffs.entries_mut().iter_mut().zip(degrees) {
        *value *= (n - d) as f64 / n as f64;
    }
    Ok(coeffs)
}

/// de la Vallée-Poussin mean `(1/n) Σ_{m=n}^{2n-1} S_m f`; degrees below
/// `n` are kept, degree `d >= n` is scaled by `(2n - 1 - d)/n`. Requires
/// `2n - 1 <= N`.
pub fn vallee_poussin_mean(grid: &SphericalGrid, samples: &SampleVector, n: usize) -> Result<CoeffVector> {
    if n == 0 || 2 * n - 1 > grid.degree() {
        return Err(Error::Precondition(format!(
            "de la Vallée-Poussin parameter needs 1 <= n and 2n - 1 <= {}, got {n}",
            grid.degree()
        )));
    }
    let top = 2 * n - 1;
    let mut coeffs = analyze(grid, samples, top)?;
    let degrees: Vec<usize> = coeffs.degrees().collect();
    for (value, d) in coeffs.entries_mut().iter_mut().zip(degrees) {
        if d >= n {
            *value *= (top - d) as f64 / n as f64;
        }
    }
    Ok(coeffs)
}

/// `(1/|levels|) Σ_{m ∈ levels} S_m f` at `points`, each partial sum taken
/// through the level-`m` scaling frame of the ladder `m_j = j`.
fn partial_sum_average(
    grid: &SphericalGrid,
    samples: &SampleVector,
    levels: Range<usize>,
    points: &[SpherePoint],
) -> Result<Vec<Complex64>> {
    let ladder = MultiresolutionLadder::uniform(grid.degree())?;
    let count = levels.len() as f64;
    let mut total = vec![ZERO; points.len()];
    for level in levels {
        let coeffs = frame_analyze(&ladder, level, grid, samples)?;
        let partial = frame_synthesize(&ladder, level, grid, &coeffs, points)?;
        for (t, p) in total.iter_mut().zip(partial) {
            *t += p;
        }
    }
    Ok(total.into_iter().map(|t| t / count).collect())
}

/// The Fejér mean evaluated through level-`j` frame data with `m_j = j`.
pub fn fejer_via_frames(
    grid: &SphericalGrid,
    samples: &SampleVector,
    n: usize,
    points: &[SpherePoint],
) -> Result<Vec<Complex64>> {
    if n == 0 || n > grid.degree() {
        return Err(Error::Precondition(format!("Fejér parameter {n} out of range")));
    }
    partial_sum_average(grid, samples, 1..n + 1, points)
}

/// The de la Vallée-Poussin mean through level-`j` frame data with `m_j = j`.
pub fn vallee_poussin_via_frames(
    grid: &SphericalGrid,
    samples: &SampleVector,
    n: usize,
    points: &[SpherePoint],
) -> Result<Vec<Complex64>> {
    if n == 0 || 2 * n - 1 > grid.degree() {
        return Err(Error::Precondition(format!(
            "de la Vallée-Poussin parameter {n} out of range"
        )));
    }
    partial_sum_average(grid, samples, n..2 * n, points)
}

/// One level of a frame decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelDecomposition {
    pub level: usize,
    pub cutoff: usize,
    pub scaling: FrameCoefficients,
    /// Absent at the top level `j0`.
    pub wavelet: Option<FrameCoefficients>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub levels: Vec<LevelDecomposition>,
    /// Max over nodes of `|R_1 f + Σ_{k<j0} Q_k f - R_{j0} f|`, every term
    /// synthesized from frame coefficients.
    pub telescoping_error: f64,
    /// Max over nodes of `|R_1 f + Σ_{k<j0} Q_k f - f|`.
    pub reconstruction_error: f64,
    /// `‖f - (R_1 f + Σ_{k<j0} Q_k f)‖_X`.
    pub residual_norm: f64,
}

/// Scaling-frame coefficients at every level `1..=j0`, wavelet-frame
/// coefficients at `1..j0`, and the telescoped reconstruction at the nodes.
pub fn decompose(
    ladder: &MultiresolutionLadder,
    grid: &SphericalGrid,
    samples: &SampleVector,
) -> Result<Decomposition> {
    ladder.check_grid(grid)?;
    samples.check_grid(grid)?;
    let top = ladder.top_level();
    let mut levels = Vec::with_capacity(top);
    for level in 1..=top {
        let scaling = frame_analyze(ladder, level, grid, samples)?;
        let wavelet = if level < top {
            Some(wavelet_analyze(ladder, level, grid, samples)?)
        } else {
            None
        };
        levels.push(LevelDecomposition {
            level,
            cutoff: ladder.cutoff(level)?,
            scaling,
            wavelet,
        });
    }

    let nodes = grid.points();
    let mut recon = frame_synthesize(ladder, 1, grid, &levels[0].scaling, nodes)?;
    for entry in &levels[..top - 1] {
        let detail = wavelet_synthesize(
            ladder,
            entry.level,
            grid,
            entry.wavelet.as_ref().expect("below top level"),
            nodes,
        )?;
        for (r, d) in recon.iter_mut().zip(detail) {
            *r += d;
        }
    }
    let top_approx = frame_synthesize(ladder, top, grid, &levels[top - 1].scaling, nodes)?;

    let max_diff = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let telescoping_error = max_diff(&recon, &top_approx);
    let reconstruction_error = max_diff(&recon, samples.values());
    let diff: Vec<Complex64> = samples.values().iter().zip(&recon).map(|(f, r)| f - r).collect();
    let residual_norm = grid.norm(&diff)?;
    Ok(Decomposition {
        levels,
        telescoping_error,
        reconstruction_error,
        residual_norm,
    })
}
