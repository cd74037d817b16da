//! Gauss quadrature rules (Golub–Welsch) and product rules on spheres.

use nalgebra::DMatrix;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let k = k as f64;
        off.push(k / (4.0 * k * k - 1.0).sqrt());
    }
    golub_welsch(&off, 2.0)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|wi| wi * half).collect(),
    )
}

/// Nodes and weights of an n-point Gauss–Hermite rule for weight e^{-t^2}.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        off.push((k as f64 / 2.0).sqrt());
    }
    golub_welsch(&off, std::f64::consts::PI.sqrt())
}

/// Gauss rule for the axis weight e^{-a^2/4} on the real line.
///
/// Substituting a = 2t into int g(a) e^{-a^2/4} da gives 2 int g(2t) e^{-t^2} dt.
pub fn gauss_axis_weight(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_hermite(n);
    (
        t.iter().map(|ti| 2.0 * ti).collect(),
        w.iter().map(|wi| 2.0 * wi).collect(),
    )
}

fn golub_welsch(off_diag: &[f64], total_mass: f64) -> (Vec<f64>, Vec<f64>) {
    let n = off_diag.len() + 1;
    if n == 1 {
        return (vec![0.0], vec![total_mass]);
    }
    let mut j = DMatrix::<f64>::zeros(n, n);
    for (k, &b) in off_diag.iter().enumerate() {
        j[(k, k + 1)] = b;
        j[(k + 1, k)] = b;
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], total_mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Quadrature nodes (as ambient coordinates) and weights on the sphere S^m
/// of radius `rho` in R^{m+1}, exact for polynomials of degree <= `deg`.
///
/// m = 0 is the two-point set {-rho, rho}; m = 1 uses the periodic
/// trapezoid rule; m = 2 a Gauss–Legendre x trapezoid product rule.
pub fn sphere_rule(m: usize, rho: f64, deg: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    match m {
        0 => (vec![vec![-rho], vec![rho]], vec![1.0, 1.0]),
        1 => {
            let q = (deg + 2).max(8);
            let mut pts = Vec::with_capacity(q);
            let w = rho * std::f64::consts::TAU / q as f64;
            for i in 0..q {
                let th = std::f64::consts::TAU * i as f64 / q as f64;
                pts.push(vec![rho * th.cos(), rho * th.sin()]);
            }
            (pts, vec![w; q])
        }
        2 => {
            let nz = (deg / 2 + 2).max(6);
            let nphi = (deg + 2).max(8);
            let (z, wz) = gauss_legendre(nz);
            let mut pts = Vec::with_capacity(nz * nphi);
            let mut wts = Vec::with_capacity(nz * nphi);
            let wphi = std::f64::consts::TAU / nphi as f64;
            for (zi, wzi) in z.iter().zip(&wz) {
                let s = (1.0 - zi * zi).max(0.0).sqrt();
                for i in 0..nphi {
                    let ph = std::f64::consts::TAU * i as f64 / nphi as f64;
                    pts.push(vec![rho * s * ph.cos(), rho * s * ph.sin(), rho * zi]);
                    wts.push(rho * rho * wzi * wphi);
                }
            }
            (pts, wts)
        }
        _ => panic!("sphere_rule supports m <= 2 (got m = {m})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{gaussian_moment, unit_sphere_area};
    use approx::assert_relative_eq;

    #[test]
    fn legendre_exactness() {
        let (x, w) = gauss_legendre(6);
        // int_{-1}^{1} x^k for k = 0, 2, 4, 10 (degree 11 exact with 6 nodes)
        for k in [0u32, 2, 4, 10] {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
            assert_relative_eq!(q, 2.0 / (k as f64 + 1.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn axis_weight_moments() {
        let (x, w) = gauss_axis_weight(12);
        for p in 0..6u32 {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(2 * p as i32)).sum();
            assert_relative_eq!(q, gaussian_moment(p), max_relative = 1e-10);
        }
    }

    #[test]
    fn sphere_rules_integrate_polynomials() {
        for m in [1usize, 2] {
            let rho = 1.7;
            let (pts, w) = sphere_rule(m, rho, 8);
            let area: f64 = w.iter().sum();
            assert_relative_eq!(
                area,
                unit_sphere_area(m) * rho.powi(m as i32),
                max_relative = 1e-10
            );
            // int x_0^2 = |S^m| rho^{m+2} / (m+1)
            let q: f64 = pts.iter().zip(&w).map(|(p, wi)| wi * p[0] * p[0]).sum();
            assert_relative_eq!(
                q,
                unit_sphere_area(m) * rho.powi(m as i32 + 2) / (m as f64 + 1.0),
                max_relative = 1e-9
            );
        }
    }
}
