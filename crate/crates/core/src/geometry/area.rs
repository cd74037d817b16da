//! Gaussian-weighted surface area F(Sigma) = int_Sigma e^{-|x|^2/4}.

use super::surface::{EndCondition, Surface};
use crate::error::Result;
use crate::util::quad;
use serde::{Deserialize, Serialize};

/// Quadrature configuration for Gaussian-weighted integrals over
/// surfaces, balls, and spheres.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianQuadrature {
    /// Truncation radius R; mass beyond it is bounded by the reported tail.
    pub truncation_radius: f64,
    /// Nodes for axis integrals with weight e^{-a^2/4}.
    pub axis_nodes: usize,
    /// Polynomial exactness degree for sphere product rules.
    pub sphere_degree: usize,
}

impl Default for GaussianQuadrature {
    fn default() -> Self {
        GaussianQuadrature {
            truncation_radius: 12.0,
            axis_nodes: 24,
            sphere_degree: 12,
        }
    }
}

impl GaussianQuadrature {
    /// Axis rule (nodes, weights) for int g(a) e^{-a^2/4} da.
    pub fn axis_rule(&self) -> (Vec<f64>, Vec<f64>) {
        quad::gauss_axis_weight(self.axis_nodes)
    }

    /// Product rule on the sphere S^m of radius rho.
    pub fn sphere_rule(&self, m: usize, rho: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
        quad::sphere_rule(m, rho, self.sphere_degree)
    }

    /// Upper bound for the Gaussian mass outside the truncation ball in
    /// R^d: |S^{d-1}| R^{d-2} e^{-R^2/4} times a modest constant.
    pub fn tail_bound(&self, ambient_dim: usize) -> f64 {
        let r = self.truncation_radius;
        let poly = crate::util::unit_sphere_area(ambient_dim.saturating_sub(1))
            * r.powi(ambient_dim as i32 - 2).max(1.0)
            * 4.0;
        poly * (-r * r / 4.0).exp()
    }
}

/// Gaussian area of a surface with its tail diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianArea {
    pub value: f64,
    pub tail_bound: f64,
    /// Set when samples exit the truncation ball, so the tail bound is
    /// the only control on the discarded mass.
    pub tail_flagged: bool,
}

/// F(Sigma) by the trapezoid rule over the surface samples (spectrally
/// accurate on smooth closed curves, second order otherwise).
pub fn gaussian_area(surface: &Surface, quad: &GaussianQuadrature) -> Result<GaussianArea> {
    let geoms = surface.geometry()?;
    let mut value = 0.0;
    let mut outside = false;
    for (p, g) in surface.samples.iter().zip(&geoms) {
        let r2 = p.x * p.x + p.y * p.y;
        if r2.sqrt() > quad.truncation_radius {
            outside = true;
        }
        let w = (-r2 / 4.0).exp();
        let measure = if surface.is_curve() {
            g.ds
        } else {
            g.ds * std::f64::consts::TAU * p.y
        };
        value += measure * w;
    }
    // capped profiles: the mirror stencil weights the polar strip with the
    // full end-ring circumference; replace that by the true disc area
    if let EndCondition::Capped = surface.end {
        for idx in [0, surface.len() - 1] {
            let p = surface.samples[idx];
            let w = (-(p.x * p.x + p.y * p.y) / 4.0).exp();
            value -= 0.5 * std::f64::consts::TAU * p.y * p.y * w;
        }
    }
    Ok(GaussianArea {
        value,
        tail_bound: quad.tail_bound(surface.ambient_dim()),
        tail_flagged: outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Surface;
    use approx::assert_relative_eq;

    #[test]
    fn circle_gaussian_area_closed_form() {
        // F(S^1_R) = 2 pi R e^{-R^2/4}; at R = 2 this is 4 pi / e
        let q = GaussianQuadrature::default();
        let s = Surface::circle(2.0, [0.0, 0.0], 256);
        let f = gaussian_area(&s, &q).unwrap();
        assert_relative_eq!(
            f.value,
            4.0 * std::f64::consts::PI * (-1.0f64).exp(),
            max_relative = 1e-10
        );
        assert!(!f.tail_flagged);
    }

    #[test]
    fn sphere_gaussian_area_closed_form() {
        // F(S^2_R) = 4 pi R^2 e^{-R^2/4}
        let q = GaussianQuadrature::default();
        for r in [1.0, 2.0, 2.5] {
            let s = Surface::sphere_profile(r, 0.0, 400);
            let f = gaussian_area(&s, &q).unwrap();
            assert_relative_eq!(
                f.value,
                4.0 * std::f64::consts::PI * r * r * (-r * r / 4.0).exp(),
                max_relative = 1e-5
            );
        }
    }

    #[test]
    fn gaussian_area_maximized_at_shrinker_radius() {
        // among round circles, d/dR [2 pi R e^{-R^2/4}] = 0 at R = sqrt(2)
        let q = GaussianQuadrature::default();
        let f = |r: f64| {
            gaussian_area(&Surface::circle(r, [0.0, 0.0], 256), &q)
                .unwrap()
                .value
        };
        let star = 2f64.sqrt();
        let fs = f(star);
        for r in [star - 0.05, star + 0.05, 1.0, 2.0] {
            assert!(fs > f(r), "F({star}) = {fs} should beat F({r}) = {}", f(r));
        }
        // central difference of the closed form vanishes at sqrt(2)
        let d = (f(star + 1e-4) - f(star - 1e-4)) / 2e-4;
        assert!(d.abs() < 1e-5, "dF/dR at shrinker radius = {d}");
    }

    #[test]
    fn rotation_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let q = GaussianQuadrature::default();
        let s = Surface::circle(1.7, [0.0, 0.0], 300);
        let f0 = gaussian_area(&s, &q).unwrap().value;
        for _ in 0..4 {
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rot = nalgebra::Rotation2::new(th);
            let mut t = s.clone();
            for p in &mut t.samples {
                *p = rot * *p;
            }
            let f1 = gaussian_area(&t, &q).unwrap().value;
            assert!(((f1 - f0) / f0).abs() < 1e-10);
        }
    }

    #[test]
    fn tail_flag_on_large_surface() {
        let q = GaussianQuadrature {
            truncation_radius: 3.0,
            ..Default::default()
        };
        let s = Surface::circle(4.0, [0.0, 0.0], 64);
        let f = gaussian_area(&s, &q).unwrap();
        assert!(f.tail_flagged);
        assert!(f.tail_bound > 0.0);
    }
}
