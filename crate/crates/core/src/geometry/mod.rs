//! Discrete hypersurfaces and their differential-geometric quantities.
//!
//! Surfaces are closed plane curves in R^2, meridian profiles of surfaces
//! of revolution in R^3, or polylines extracted from level-set grids. All
//! quantities use the sum convention for mean curvature (H = n/R on the
//! round sphere of radius R, positive with the outward normal).

mod area;
mod cylinder;
mod isosurface;
mod resample;
mod surface;

pub use area::{gaussian_area, GaussianArea, GaussianQuadrature};
pub use cylinder::{fit_cylinder, CylinderFit, FitOptions, GraphNorms, ShrinkerCylinder, WeightedCloud};
pub use isosurface::extract_level_2d;
pub use resample::{resample, target_sample_count};
pub use surface::{
    mean_curvature, shrinker_residual, EndCondition, SampleGeom, Surface, SurfaceKind,
};
