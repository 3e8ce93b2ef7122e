//! Python bindings for `spherical_frames`.
//!
//! Complex data crosses the boundary as lists of Python `complex`.
//! Coefficient vectors are flat lists of length `m²` in the layout
//! `n² + n + k`; sample vectors follow the grid's canonical node order.
//! Points are `(theta, phi)` tuples.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sf::{CoeffVector, FrameCoefficients, FrameKind, HarmonicIndex, SampleVector, SpherePoint};
use spherical_frames as sf;

fn to_py(err: sf::Error) -> PyErr {
    match err {
        sf::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn coeffs_from(values: Vec<Complex64>) -> PyResult<CoeffVector> {
    let m = (values.len() as f64).sqrt().round() as usize;
    if m * m != values.len() || m == 0 {
        return Err(PyValueError::new_err(format!(
            "coefficient list has length {}, expected a positive square",
            values.len()
        )));
    }
    CoeffVector::new(m, values).map_err(to_py)
}

fn points_from(points: &[(f64, f64)]) -> Vec<SpherePoint> {
    points
        .iter()
        .map(|&(theta, phi)| SpherePoint::from_angles(theta, phi))
        .collect()
}

fn point(p: (f64, f64)) -> SpherePoint {
    SpherePoint::from_angles(p.0, p.1)
}

/// The nodal grid of degree `N`: `N` Gauss-Legendre rings by `2N+1` longitudes.
#[pyclass(name = "Grid", module = "sphframe", frozen)]
struct PyGrid {
    inner: sf::SphericalGrid,
}

impl PyGrid {
    fn samples(&self, values: Vec<Complex64>) -> PyResult<SampleVector> {
        SampleVector::new(self.inner.degree(), values).map_err(to_py)
    }
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: sf::build_grid(n).map_err(to_py)?,
        })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Grid(N={}, nodes={})", self.inner.degree(), self.inner.len())
    }

    #[getter]
    fn thetas(&self) -> Vec<f64> {
        self.inner.thetas().to_vec()
    }

    #[getter]
    fn phis(&self) -> Vec<f64> {
        self.inner.phis().to_vec()
    }

    /// Per-node weights `μ_N`, canonical order.
    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().collect()
    }

    /// `(theta, phi)` of every node, canonical order.
    #[getter]
    fn points(&self) -> Vec<(f64, f64)> {
        self.inner.points().iter().map(|p| (p.theta(), p.phi())).collect()
    }

    #[getter]
    fn xyz(&self) -> Vec<[f64; 3]> {
        self.inner.points().iter().map(|p| p.xyz()).collect()
    }

    fn integrate(&self, values: Vec<Complex64>) -> PyResult<Complex64> {
        self.inner.integrate_values(&values).map_err(to_py)
    }

    fn inner_product(&self, f: Vec<Complex64>, g: Vec<Complex64>) -> PyResult<Complex64> {
        self.inner.inner_product(&f, &g).map_err(to_py)
    }

    fn norm(&self, f: Vec<Complex64>) -> PyResult<f64> {
        self.inner.norm(&f).map_err(to_py)
    }

    /// Samples `Y_nk` at every node.
    fn sample_harmonic(&self, n: usize, k: i64) -> PyResult<Vec<Complex64>> {
        let idx = HarmonicIndex::new(n, k).map_err(to_py)?;
        Ok(self.inner.points().iter().map(|p| sf::eval_y(idx, p)).collect())
    }
}

/// A strictly increasing list of degree cutoffs `m_1 < m_2 < ...` with cap `N`.
/// Levels are 1-based.
#[pyclass(name = "Ladder", module = "sphframe", frozen)]
struct PyLadder {
    inner: sf::MultiresolutionLadder,
}

impl PyLadder {
    fn frame(
        &self,
        kind: FrameKind,
        level: usize,
        grid: &PyGrid,
        coeffs: Vec<Complex64>,
    ) -> PyResult<FrameCoefficients> {
        FrameCoefficients::new(kind, level, grid.inner.degree(), coeffs).map_err(to_py)
    }
}

#[pymethods]
impl PyLadder {
    #[new]
    fn new(cutoffs: Vec<usize>, cap: usize) -> PyResult<Self> {
        Ok(Self {
            inner: sf::MultiresolutionLadder::new(cutoffs, cap).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn uniform(cap: usize) -> PyResult<Self> {
        Ok(Self {
            inner: sf::MultiresolutionLadder::uniform(cap).map_err(to_py)?,
        })
    }

    #[getter]
    fn cutoffs(&self) -> Vec<usize> {
        self.inner.cutoffs().to_vec()
    }

    #[getter]
    fn top_level(&self) -> usize {
        self.inner.top_level()
    }

    fn __repr__(&self) -> String {
        format!("Ladder(cutoffs={:?}, cap={})", self.inner.cutoffs(), self.inner.cap())
    }

    fn scaling_phi(&self, level: usize, center: (f64, f64), at: (f64, f64)) -> PyResult<f64> {
        sf::scaling_phi(&self.inner, level, &point(center), &point(at)).map_err(to_py)
    }

    fn wavelet_psi(&self, level: usize, center: (f64, f64), at: (f64, f64)) -> PyResult<f64> {
        sf::wavelet_psi(&self.inner, level, &point(center), &point(at)).map_err(to_py)
    }

    /// `⟨f, φ_j(·, ξ)⟩_X` at every node.
    fn frame_analyze(&self, level: usize, grid: &PyGrid, samples: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let samples = grid.samples(samples)?;
        let c = sf::frame_analyze(&self.inner, level, &grid.inner, &samples).map_err(to_py)?;
        Ok(c.values().to_vec())
    }

    fn wavelet_analyze(&self, level: usize, grid: &PyGrid, samples: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let samples = grid.samples(samples)?;
        let c = sf::wavelet_analyze(&self.inner, level, &grid.inner, &samples).map_err(to_py)?;
        Ok(c.values().to_vec())
    }

    fn frame_synthesize(
        &self,
        level: usize,
        grid: &PyGrid,
        coeffs: Vec<Complex64>,
        points: Vec<(f64, f64)>,
    ) -> PyResult<Vec<Complex64>> {
        let c = self.frame(FrameKind::Scaling, level, grid, coeffs)?;
        sf::frame_synthesize(&self.inner, level, &grid.inner, &c, &points_from(&points)).map_err(to_py)
    }

    fn wavelet_synthesize(
        &self,
        level: usize,
        grid: &PyGrid,
        coeffs: Vec<Complex64>,
        points: Vec<(f64, f64)>,
    ) -> PyResult<Vec<Complex64>> {
        let c = self.frame(FrameKind::Wavelet, level, grid, coeffs)?;
        sf::wavelet_synthesize(&self.inner, level, &grid.inner, &c, &points_from(&points)).map_err(to_py)
    }

    /// `(‖f‖², Σ μ |⟨f, φ_j(·, ξ)⟩_X|²)` for a coefficient list `f`.
    fn tight_frame_check(&self, level: usize, grid: &PyGrid, coeffs: Vec<Complex64>) -> PyResult<(f64, f64)> {
        let check = sf::tight_frame_check(&self.inner, level, &grid.inner, &coeffs_from(coeffs)?).map_err(to_py)?;
        Ok((check.lhs, check.rhs))
    }

    fn wavelet_frame_check(&self, level: usize, grid: &PyGrid, coeffs: Vec<Complex64>) -> PyResult<(f64, f64)> {
        let check = sf::wavelet_frame_check(&self.inner, level, &grid.inner, &coeffs_from(coeffs)?).map_err(to_py)?;
        Ok((check.lhs, check.rhs))
    }

    /// Per-level frame and wavelet coefficients plus reconstruction diagnostics.
    fn decompose<'py>(&self, py: Python<'py>, grid: &PyGrid, samples: Vec<Complex64>) -> PyResult<Bound<'py, PyDict>> {
        let samples = grid.samples(samples)?;
        let d = sf::decompose(&self.inner, &grid.inner, &samples).map_err(to_py)?;
        let levels = d
            .levels
            .iter()
            .map(|level| {
                let entry = PyDict::new(py);
                entry.set_item("j", level.level)?;
                entry.set_item("m_j", level.cutoff)?;
                entry.set_item("frame_coeffs", level.scaling.values().to_vec())?;
                if let Some(w) = &level.wavelet {
                    entry.set_item("wavelet_coeffs", w.values().to_vec())?;
                }
                Ok(entry)
            })
            .collect::<PyResult<Vec<_>>>()?;
        let out = PyDict::new(py);
        out.set_item("levels", levels)?;
        out.set_item("residual_norm", d.residual_norm)?;
        out.set_item("reconstruction_error", d.reconstruction_error)?;
        out.set_item("telescoping_error", d.telescoping_error)?;
        Ok(out)
    }
}

#[pyfunction]
fn legendre(n: usize, x: f64) -> PyResult<f64> {
    sf::legendre(n, x).map_err(to_py)
}

#[pyfunction]
fn legendre_roots(n: usize) -> PyResult<Vec<f64>> {
    sf::legendre_roots(n).map_err(to_py)
}

/// `(nodes, weights)` of the `n`-point Gauss-Legendre rule.
#[pyfunction]
fn christoffel_numbers(n: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = sf::christoffel_numbers(n).map_err(to_py)?;
    Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
}

#[pyfunction]
fn assoc_legendre_schmidt(n: usize, k: usize, x: f64) -> PyResult<f64> {
    sf::assoc_legendre_schmidt(n, k, x).map_err(to_py)
}

#[pyfunction]
fn eval_y(n: usize, k: i64, theta: f64, phi: f64) -> PyResult<Complex64> {
    let idx = HarmonicIndex::new(n, k).map_err(to_py)?;
    Ok(sf::eval_y(idx, &SpherePoint::from_angles(theta, phi)))
}

/// `Σ_{start<=n<end} (2n+1) P_n(t)`.
#[pyfunction]
fn kernel_sum(start: usize, end: usize, t: f64) -> f64 {
    sf::kernel_sum(start..end, t)
}

#[pyfunction]
fn analyze(grid: &PyGrid, samples: Vec<Complex64>, m: usize) -> PyResult<Vec<Complex64>> {
    let samples = grid.samples(samples)?;
    Ok(sf::analyze(&grid.inner, &samples, m).map_err(to_py)?.into_entries())
}

#[pyfunction]
fn synthesize(coeffs: Vec<Complex64>, points: Vec<(f64, f64)>) -> PyResult<Vec<Complex64>> {
    Ok(sf::synthesize(&coeffs_from(coeffs)?, &points_from(&points)))
}

#[pyfunction]
fn synthesize_on_grid(coeffs: Vec<Complex64>, grid: &PyGrid) -> PyResult<Vec<Complex64>> {
    Ok(sf::synthesize_on_grid(&coeffs_from(coeffs)?, &grid.inner).into_values())
}

/// `(coefficients, weighted residual)` of the closed-form fit.
#[pyfunction]
fn weighted_least_squares(grid: &PyGrid, samples: Vec<Complex64>, m: usize) -> PyResult<(Vec<Complex64>, f64)> {
    let samples = grid.samples(samples)?;
    let fit = sf::weighted_least_squares(&grid.inner, &samples, m).map_err(to_py)?;
    Ok((fit.coeffs.into_entries(), fit.residual))
}

#[pyfunction]
fn gram_residual(grid: &PyGrid, m: usize) -> PyResult<f64> {
    sf::gram_residual(&grid.inner, m).map_err(to_py)
}

#[pyfunction]
fn fejer_mean(grid: &PyGrid, samples: Vec<Complex64>, n: usize) -> PyResult<Vec<Complex64>> {
    let samples = grid.samples(samples)?;
    Ok(sf::fejer_mean(&grid.inner, &samples, n).map_err(to_py)?.into_entries())
}

#[pyfunction]
fn vallee_poussin_mean(grid: &PyGrid, samples: Vec<Complex64>, n: usize) -> PyResult<Vec<Complex64>> {
    let samples = grid.samples(samples)?;
    Ok(sf::vallee_poussin_mean(&grid.inner, &samples, n)
        .map_err(to_py)?
        .into_entries())
}

#[pymodule]
fn sphframe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyLadder>()?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add_function(wrap_pyfunction!(legendre_roots, m)?)?;
    m.add_function(wrap_pyfunction!(christoffel_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(assoc_legendre_schmidt, m)?)?;
    m.add_function(wrap_pyfunction!(eval_y, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_sum, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_on_grid, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_least_squares, m)?)?;
    m.add_function(wrap_pyfunction!(gram_residual, m)?)?;
    m.add_function(wrap_pyfunction!(fejer_mean, m)?)?;
    m.add_function(wrap_pyfunction!(vallee_poussin_mean, m)?)?;
    Ok(())
}
