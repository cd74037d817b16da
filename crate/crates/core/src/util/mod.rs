//! Shared numerical utilities: quadrature rules, an adaptive ODE stepper,
//! least-squares fits, dense grids, and smooth grid interpolation.

pub mod fit;
pub mod grid;
pub mod interp;
pub mod ode;
pub mod quad;

/// Surface measure of the unit sphere S^{m} in R^{m+1}.
pub fn unit_sphere_area(m: usize) -> f64 {
    // |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
    let a = (m as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(a) / gamma(a)
}

/// Gamma function for half-integer and integer arguments (exact recursion).
pub fn gamma(x: f64) -> f64 {
    let two_x = (2.0 * x).round();
    assert!(
        (2.0 * x - two_x).abs() < 1e-12 && x > 0.0,
        "gamma only needed at positive half-integers, got {x}"
    );
    let mut k = two_x as u64;
    // gamma(1/2) = sqrt(pi), gamma(1) = 1, gamma(x+1) = x gamma(x)
    let mut acc = if k % 2 == 1 {
        std::f64::consts::PI.sqrt()
    } else {
        1.0
    };
    let base = if k % 2 == 1 { 1 } else { 2 };
    while k > base {
        k -= 2;
        acc *= k as f64 / 2.0;
    }
    acc
}

/// Even Gaussian moment with this crate's weight: int x^{2p} e^{-x^2/4} dx.
pub fn gaussian_moment(p: u32) -> f64 {
    // substitute x = 2t: 2^{2p+1} int t^{2p} e^{-t^2} dt = 2^{2p+1} Gamma(p + 1/2)
    2f64.powi(2 * p as i32 + 1) * gamma(p as f64 + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(unit_sphere_area(1), 2.0 * std::f64::consts::PI);
        assert_relative_eq!(unit_sphere_area(2), 4.0 * std::f64::consts::PI);
        assert_relative_eq!(
            unit_sphere_area(3),
            2.0 * std::f64::consts::PI * std::f64::consts::PI
        );
    }

    #[test]
    fn gaussian_moments() {
        // int e^{-x^2/4} = 2 sqrt(pi); int x^2 e^{-x^2/4} = 4 sqrt(pi)
        assert_relative_eq!(gaussian_moment(0), 2.0 * std::f64::consts::PI.sqrt());
        assert_relative_eq!(gaussian_moment(1), 4.0 * std::f64::consts::PI.sqrt());
        assert_relative_eq!(gaussian_moment(2), 24.0 * std::f64::consts::PI.sqrt());
    }
}
