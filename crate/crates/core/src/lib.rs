//! Spherical harmonic analysis on a Gauss-Legendre × equiangular grid.
//!
//! On the nodal set of degree `N` (`N` rings at the Legendre roots, `2N+1`
//! equally spaced longitudes each) the orthonormal spherical harmonics of
//! degree `< N` stay orthonormal under the discrete measure. This makes the
//! weighted least-squares problem collapse to `ã = Φ₁ᴴ f₁`, gives exact
//! analysis and synthesis of band-limited functions, and yields tight
//! frames of scaling functions and wavelets at every level of a
//! multiresolution ladder.
//!
//! ```
//! use spherical_frames::{analyze, build_grid, eval_y, HarmonicIndex, SampleVector};
//!
//! let grid = build_grid(4).unwrap();
//! let idx = HarmonicIndex::new(2, -1).unwrap();
//! let samples = SampleVector::from_fn(&grid, |p| eval_y(idx, p));
//! let coeffs = analyze(&grid, &samples, 4).unwrap();
//! assert!((coeffs.get(idx).re - 1.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod frames;
pub mod grid;
pub mod harmonics;
pub mod io;
pub mod legendre;
pub mod transform;

pub use error::{Error, Result};
pub use frames::{
    decompose, fejer_mean, fejer_via_frames, frame_analyze, frame_kernel, frame_synthesize, kernel_coefficients,
    mean_value_checks, min_norm_interpolant, project_v, project_w, scaling_mean, scaling_phi, telescope,
    tight_frame_check, vallee_poussin_mean, vallee_poussin_via_frames, wavelet_analyze, wavelet_frame_check,
    wavelet_mean, wavelet_psi, wavelet_synthesize, Decomposition, FrameCheck, FrameCoefficients, FrameKind,
    LevelDecomposition, MeanValues, MultiresolutionLadder,
};
pub use grid::{build_grid, discrete_integral, to_cartesian, SampleVector, SpherePoint, SphericalGrid};
pub use harmonics::{coeff_len, eval_y, eval_y_batch, kernel_k, kernel_sum, HarmonicIndex};
pub use legendre::{
    assoc_legendre_schmidt, christoffel_numbers, lagrange_fundamental, legendre, legendre_roots,
    legendre_value_and_derivative, QuadratureRule,
};
pub use num_complex::Complex64;
pub use transform::{
    analyze, best_approximant, best_approximant_kernel_form, build_weighted_design, gram_residual,
    gram_residual_pairwise, synthesize, synthesize_on_grid, weighted_least_squares, CoeffVector, DenseMatrix,
    LeastSquaresFit,
};
