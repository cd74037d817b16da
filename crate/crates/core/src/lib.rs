//! Numerical laboratory for mean-convex level-set flows.
//!
//! The crate simulates mean curvature flow (MCF) and its rescaled variant,
//! reconstructs the arrival-time function of a mean-convex front on a grid,
//! traces gradient flow lines of that function, and provides the spectral
//! toolbox for the drift Laplacian on Euclidean space and on round
//! cylinders: Hermite eigenfunctions, the kernel of `L + 1`, graph
//! mean-curvature linearization, and the Almgren-type frequency function.
//!
//! The modules mirror the pipeline:
//!
//! * [`geometry`] — discrete hypersurfaces (plane curves, profiles of
//!   revolution, extracted isosurfaces), curvature, Gaussian area,
//!   shrinker residual, and cylinder fitting.
//! * [`mcf`] — explicit MCF / rescaled-MCF stepping and instrumented
//!   rescaled runs (Gaussian-area gaps, fitted cylinders, axis-projected
//!   curvature-gradient integrals).
//! * [`arrival`] — arrival-time fields recorded from front crossings,
//!   the degenerate-elliptic residual, Lojasiewicz ratios, critical-set
//!   analysis, and gradient-inequality exponent fits.
//! * [`flowline`] — adaptive gradient-flow-line tracing with arclength
//!   diagnostics, tangent/secant limit estimators, and asymptotic checks.
//! * [`spectral`] — drift Laplacian, Hermite eigenbases, cylinder kernel
//!   projection, graph mean-curvature linearization, frequency function,
//!   and the polynomial/exponential growth dichotomy.
//! * [`report`] — scenario configs, named checks, machine-readable
//!   reports, and plot-data extraction.

pub mod arrival;
pub mod error;
pub mod flowline;
pub mod geometry;
pub mod mcf;
pub mod report;
pub mod spectral;
pub mod util;

pub use error::{Error, Result};
