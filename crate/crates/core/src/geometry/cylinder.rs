//! Shrinker cylinders S^{n-k}_{sqrt(2(n-k))} x R^k and Gaussian-L^2
//! cylinder fitting.

use super::surface::{EndCondition, Surface};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// A round shrinker cylinder: the product of a sphere of radius
/// sqrt(2(n-k)) with a k-dimensional axis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShrinkerCylinder {
    pub n: usize,
    pub k: usize,
    pub center: Vec<f64>,
    /// k orthonormal axis directions in R^{n+1}.
    pub axis_frame: Vec<Vec<f64>>,
    /// Fixed at sqrt(2(n-k)).
    pub radius: f64,
}

impl ShrinkerCylinder {
    pub fn new(n: usize, k: usize, center: Vec<f64>, axis_frame: Vec<Vec<f64>>) -> Result<Self> {
        if k >= n.max(1) || center.len() != n + 1 || axis_frame.len() != k {
            return Err(Error::Unsupported(format!(
                "invalid cylinder parameters n={n}, k={k}"
            )));
        }
        for (i, a) in axis_frame.iter().enumerate() {
            let na = norm(a);
            if (na - 1.0).abs() > 1e-12 {
                return Err(Error::Unsupported(format!(
                    "axis vector {i} not unit (|a| = {na})"
                )));
            }
            for b in axis_frame.iter().take(i) {
                if dot(a, b).abs() > 1e-12 {
                    return Err(Error::Unsupported("axis frame not orthonormal".into()));
                }
            }
        }
        Ok(ShrinkerCylinder {
            n,
            k,
            center,
            axis_frame,
            radius: (2.0 * (n - k) as f64).sqrt(),
        })
    }

    /// Canonical cylinder with axis along the first k coordinates.
    pub fn standard(n: usize, k: usize) -> Self {
        let mut frame = Vec::new();
        for i in 0..k {
            let mut a = vec![0.0; n + 1];
            a[i] = 1.0;
            frame.push(a);
        }
        ShrinkerCylinder::new(n, k, vec![0.0; n + 1], frame).unwrap()
    }

    /// Component of `v` along the axis subspace.
    pub fn pi_axis(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for a in &self.axis_frame {
            let c = dot(a, v);
            for (o, ai) in out.iter_mut().zip(a) {
                *o += c * ai;
            }
        }
        out
    }

    /// Component of `v` orthogonal to the axis.
    pub fn pi(&self, v: &[f64]) -> Vec<f64> {
        let ax = self.pi_axis(v);
        v.iter().zip(&ax).map(|(vi, ai)| vi - ai).collect()
    }

    /// Operator norm of Pi_self - Pi_other.
    pub fn projection_gap(&self, other: &ShrinkerCylinder) -> f64 {
        let d = self.center.len();
        let mut m = DMatrix::<f64>::zeros(d, d);
        for a in &self.axis_frame {
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] -= a[i] * a[j];
                }
            }
        }
        for a in &other.axis_frame {
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += a[i] * a[j];
                }
            }
        }
        m.singular_values().max()
    }

    /// Decomposes p - center into (axis coordinates, radial vector).
    pub fn split(&self, p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let v: Vec<f64> = p.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let coords: Vec<f64> = self.axis_frame.iter().map(|a| dot(a, &v)).collect();
        let mut q = v;
        for (a, c) in self.axis_frame.iter().zip(&coords) {
            for (qi, ai) in q.iter_mut().zip(a) {
                *qi -= c * ai;
            }
        }
        (coords, q)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Ambient point samples with surface-measure weights.
#[derive(Debug, Clone)]
pub struct WeightedCloud {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl WeightedCloud {
    /// Samples a surface as an ambient point cloud; profiles are expanded
    /// into rings of `ring_samples` points.
    pub fn from_surface(surface: &Surface, ring_samples: usize) -> Result<WeightedCloud> {
        let geoms = surface.geometry()?;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        if surface.is_curve() {
            for (p, g) in surface.samples.iter().zip(&geoms) {
                points.push(vec![p.x, p.y]);
                weights.push(g.ds);
            }
        } else {
            let q = ring_samples.max(8);
            for (p, g) in surface.samples.iter().zip(&geoms) {
                let ring_w = g.ds * std::f64::consts::TAU * p.y / q as f64;
                for j in 0..q {
                    let th = std::f64::consts::TAU * j as f64 / q as f64;
                    points.push(vec![p.x, p.y * th.cos(), p.y * th.sin()]);
                    weights.push(ring_w);
                }
            }
        }
        Ok(WeightedCloud { points, weights })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitOptions {
    /// Only samples with |x| <= fit_radius enter the fit (0 = all).
    pub fit_radius: f64,
    pub ring_samples: usize,
    pub max_iters: usize,
    /// Optional frozen frame: skip the optimization and only extract the
    /// graph data.
    pub fixed: Option<(Vec<f64>, Vec<Vec<f64>>)>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            fit_radius: 0.0,
            ring_samples: 16,
            max_iters: 40,
            fixed: None,
        }
    }
}

/// Gaussian Sobolev seminorm squares of the graph function, orders 0..=3.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GraphNorms {
    pub order_sq: [f64; 4],
    /// Sum of the squares: the W^{3,2} norm squared analogue.
    pub w32_sq: f64,
    pub sup: f64,
    /// Largest |x| among graphical samples.
    pub graphical_radius: f64,
}

#[derive(Debug, Clone)]
pub struct CylinderFit {
    pub cylinder: ShrinkerCylinder,
    /// Graph samples (axis coordinate(s), angle-free weight, w value) with
    /// w measured along the inward normal: surface radius = rho - w.
    pub graph: Vec<(Vec<f64>, f64, f64)>,
    pub norms: GraphNorms,
    /// Gaussian-weighted mean distance to the axis over the fit region.
    pub mean_radius: f64,
    pub objective: f64,
}

/// Fits the Gaussian-L^2 minimizing cylinder of axis dimension `k` to a
/// surface and extracts the graph function w (inward convention).
///
/// The fit is initialized from the Gaussian-weighted inertia tensor and
/// refined by Gauss–Newton over the transverse center components and (for
/// k = 1) the axis direction.
pub fn fit_cylinder(surface: &Surface, k: usize, opts: &FitOptions) -> Result<CylinderFit> {
    let n = surface.dim();
    let cloud = WeightedCloud::from_surface(surface, opts.ring_samples)?;
    let mut fit = fit_cylinder_cloud(&cloud, n, k, opts)?;
    fit.norms = graph_norms(surface, &fit.cylinder, fit.norms.sup, fit.norms.graphical_radius)?;
    Ok(fit)
}

/// Cloud-level cylinder fit; see [`fit_cylinder`]. Sobolev norms beyond
/// the sup are left empty because the cloud carries no 1D parametrization.
pub fn fit_cylinder_cloud(
    cloud: &WeightedCloud,
    n: usize,
    k: usize,
    opts: &FitOptions,
) -> Result<CylinderFit> {
    if k >= n.max(1) {
        return Err(Error::Unsupported(format!("fit_cylinder needs k < n (k={k}, n={n})")));
    }
    if k > 1 {
        return Err(Error::Unsupported(
            "fit_cylinder supports k <= 1 surfaces in this build".into(),
        ));
    }
    let rho = (2.0 * (n - k) as f64).sqrt();
    let d = n + 1;

    // Gaussian-weighted selection
    let mut idx: Vec<usize> = Vec::new();
    for (i, p) in cloud.points.iter().enumerate() {
        let r = norm(p);
        if opts.fit_radius <= 0.0 || r <= opts.fit_radius {
            idx.push(i);
        }
    }
    if idx.len() < 8 {
        return Err(Error::Resolution("too few samples inside fit radius".into()));
    }
    let gw: Vec<f64> = idx
        .iter()
        .map(|&i| cloud.weights[i] * (-dot(&cloud.points[i], &cloud.points[i]) / 4.0).exp())
        .collect();
    let wtot: f64 = gw.iter().sum();

    let (center, frame) = if let Some((c, f)) = &opts.fixed {
        (c.clone(), f.clone())
    } else {
        // inertia initialization
        let mut c = vec![0.0; d];
        for (&i, &w) in idx.iter().zip(&gw) {
            for (cj, pj) in c.iter_mut().zip(&cloud.points[i]) {
                *cj += w * pj;
            }
        }
        for cj in &mut c {
            *cj /= wtot;
        }
        let mut frame: Vec<Vec<f64>> = Vec::new();
        if k == 1 {
            let mut m = DMatrix::<f64>::zeros(d, d);
            for (&i, &w) in idx.iter().zip(&gw) {
                let p = &cloud.points[i];
                for a in 0..d {
                    for b in 0..d {
                        m[(a, b)] += w * (p[a] - c[a]) * (p[b] - c[b]);
                    }
                }
            }
            let eig = m.symmetric_eigen();
            // largest spread is the translation-invariant axis
            let mut best = 0;
            for j in 1..d {
                if eig.eigenvalues[j] > eig.eigenvalues[best] {
                    best = j;
                }
            }
            let mut a: Vec<f64> = (0..d).map(|r| eig.eigenvectors[(r, best)]).collect();
            // deterministic orientation
            let lead = a.iter().cloned().find(|v| v.abs() > 1e-9).unwrap_or(1.0);
            if lead < 0.0 {
                for ai in &mut a {
                    *ai = -*ai;
                }
            }
            frame.push(a);
        }
        refine_fit(cloud, &idx, &gw, rho, c, frame, k, opts.max_iters)
    };

    let cyl = ShrinkerCylinder::new(n, k, center, frame)?;

    // graph extraction on the full cloud within the fit radius
    let mut graph = Vec::with_capacity(idx.len());
    let mut sup = 0.0f64;
    let mut graphical_radius = 0.0f64;
    let mut mean_r = 0.0;
    let mut objective = 0.0;
    for (&i, &w) in idx.iter().zip(&gw) {
        let p = &cloud.points[i];
        let (coords, q) = cyl.split(p);
        let qn = norm(&q);
        if qn < 0.05 * rho {
            return Err(Error::NotGraphical {
                index: i,
                q_norm: qn,
            });
        }
        let wval = rho - qn;
        sup = sup.max(wval.abs());
        graphical_radius = graphical_radius.max(norm(p));
        mean_r += w * qn;
        objective += w * wval * wval;
        graph.push((coords, w, wval));
    }
    mean_r /= wtot;

    Ok(CylinderFit {
        cylinder: cyl,
        graph,
        norms: GraphNorms {
            sup,
            graphical_radius,
            ..Default::default()
        },
        mean_radius: mean_r,
        objective,
    })
}

#[allow(clippy::too_many_arguments)]
fn refine_fit(
    cloud: &WeightedCloud,
    idx: &[usize],
    gw: &[f64],
    rho: f64,
    mut center: Vec<f64>,
    mut frame: Vec<Vec<f64>>,
    k: usize,
    max_iters: usize,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = center.len();
    let objective = |c: &[f64], f: &[Vec<f64>]| -> f64 {
        let cyl = ShrinkerCylinder {
            n: d - 1,
            k,
            center: c.to_vec(),
            axis_frame: f.to_vec(),
            radius: rho,
        };
        idx.iter()
            .zip(gw)
            .map(|(&i, &w)| {
                let (_, q) = cyl.split(&cloud.points[i]);
                let r = rho - norm(&q);
                w * r * r
            })
            .sum()
    };
    let mut best = objective(&center, &frame);
    for _ in 0..max_iters {
        // parameters: transverse center shifts (d - k) + axis tilt (k = 1: d - 1)
        let cyl = ShrinkerCylinder {
            n: d - 1,
            k,
            center: center.clone(),
            axis_frame: frame.clone(),
            radius: rho,
        };
        // orthonormal basis of the transverse subspace
        let mut trans: Vec<Vec<f64>> = Vec::new();
        for a in 0..d {
            let mut e = vec![0.0; d];
            e[a] = 1.0;
            let mut t = cyl.pi(&e);
            for b in &trans {
                let c = dot(&t, b);
                for (ti, bi) in t.iter_mut().zip(b) {
                    *ti -= c * bi;
                }
            }
            let nt = norm(&t);
            if nt > 1e-9 {
                for ti in &mut t {
                    *ti /= nt;
                }
                trans.push(t);
            }
            if trans.len() == d - k {
                break;
            }
        }
        let np = (d - k) + if k == 1 { d - 1 } else { 0 };
        let mut jtj = DMatrix::<f64>::zeros(np, np);
        let mut jtr = DVector::<f64>::zeros(np);
        for (&i, &w) in idx.iter().zip(gw) {
            let p = &cloud.points[i];
            let (coords, q) = cyl.split(p);
            let qn = norm(&q).max(1e-12);
            let qhat: Vec<f64> = q.iter().map(|v| v / qn).collect();
            let r = rho - qn;
            let mut grad = Vec::with_capacity(np);
            // d r / d center_t = + <qhat, t>
            for t in &trans {
                grad.push(dot(&qhat, t));
            }
            if k == 1 {
                // axis tilt directions: the same transverse basis, scaled
                // by the axis coordinate
                let a_coord = coords[0];
                for t in trans.iter().take(d - 1) {
                    grad.push(dot(&qhat, t) * a_coord);
                }
            }
            for a in 0..np {
                jtr[a] += w * grad[a] * r;
                for b in 0..np {
                    jtj[(a, b)] += w * grad[a] * grad[b];
                }
            }
        }
        for a in 0..np {
            jtj[(a, a)] += 1e-12;
        }
        let Some(delta) = jtj.lu().solve(&jtr) else {
            break;
        };
        // r = rho - |q|; moving center along t by eps changes r by
        // +<qhat,t> eps, so the Gauss-Newton step subtracts delta
        let mut scale = 1.0;
        let mut improved = false;
        for _half in 0..12 {
            let mut c2 = center.clone();
            for (a, t) in trans.iter().enumerate() {
                for (cj, tj) in c2.iter_mut().zip(t) {
                    *cj -= scale * delta[a] * tj;
                }
            }
            let mut f2 = frame.clone();
            if k == 1 {
                let mut a2 = f2[0].clone();
                for (b, t) in trans.iter().take(d - 1).enumerate() {
                    for (aj, tj) in a2.iter_mut().zip(t) {
                        *aj -= scale * delta[d - k + b] * tj;
                    }
                }
                let na = norm(&a2);
                for aj in &mut a2 {
                    *aj /= na;
                }
                f2[0] = a2;
            }
            let val = objective(&c2, &f2);
            if val < best {
                best = val;
                center = c2;
                frame = f2;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if !improved || best < 1e-28 {
            break;
        }
    }
    (center, frame)
}

/// Gaussian Sobolev norms of the graph function along the meridian (or
/// around the circle for k = 0 curves), orders 0..=3 by finite differences
/// on a uniform resample of w.
fn graph_norms(
    surface: &Surface,
    cyl: &ShrinkerCylinder,
    sup: f64,
    graphical_radius: f64,
) -> Result<GraphNorms> {
    // parametrize w along the meridian samples (profiles) or by angle
    // (curves); both give a 1D periodic-or-open sample sequence
    let rho = cyl.radius;
    let mut coords: Vec<f64> = Vec::new();
    let mut wvals: Vec<f64> = Vec::new();
    if surface.is_curve() {
        for p in &surface.samples {
            let v = [p.x - cyl.center[0], p.y - cyl.center[1]];
            let qn = (v[0] * v[0] + v[1] * v[1]).sqrt();
            coords.push(v[1].atan2(v[0]) * rho);
            wvals.push(rho - qn);
        }
    } else {
        for p in &surface.samples {
            let amb = [p.x, p.y, 0.0];
            let (c, q) = cyl.split(&amb);
            coords.push(if c.is_empty() { p.x } else { c[0] });
            wvals.push(rho - norm(&q));
        }
    }
    // uniform resample by linear interpolation for clean stencils
    let m = wvals.len();
    let periodic = surface.is_curve();
    let (lo, hi) = (
        coords.iter().cloned().fold(f64::INFINITY, f64::min),
        coords.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let mm = m.clamp(32, 4096);
    let span = if periodic {
        std::f64::consts::TAU * rho
    } else {
        hi - lo
    };
    let hstep = span / mm as f64;
    let mut order: Vec<Vec<f64>> = vec![Vec::with_capacity(mm); 4];
    let mut pairs: Vec<(f64, f64)> = coords.iter().cloned().zip(wvals.iter().cloned()).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let sample = |x: f64| -> f64 {
        let i = pairs.partition_point(|p| p.0 < x);
        if i == 0 {
            pairs[0].1
        } else if i >= pairs.len() {
            pairs[pairs.len() - 1].1
        } else {
            let (x0, w0) = pairs[i - 1];
            let (x1, w1) = pairs[i];
            let t = (x - x0) / (x1 - x0).max(1e-300);
            w0 + t * (w1 - w0)
        }
    };
    let grid: Vec<f64> = (0..mm).map(|i| lo + hstep * i as f64).collect();
    let w0: Vec<f64> = grid.iter().map(|&x| sample(x)).collect();
    order[0] = w0;
    for o in 1..4 {
        let prev = &order[o - 1];
        let mut cur = vec![0.0; mm];
        for i in 0..mm {
            let (a, b) = if periodic {
                (prev[(i + mm - 1) % mm], prev[(i + 1) % mm])
            } else if i == 0 {
                (prev[0], prev[1])
            } else if i == mm - 1 {
                (prev[mm - 2], prev[mm - 1])
            } else {
                (prev[i - 1], prev[i + 1])
            };
            let div = if i == 0 || i == mm - 1 { 1.0 } else { 2.0 };
            cur[i] = (b - a) / (div * hstep);
        }
        order[o] = cur;
    }
    let mut norms = GraphNorms {
        sup,
        graphical_radius,
        ..Default::default()
    };
    let ring = if surface.is_curve() {
        1.0
    } else {
        std::f64::consts::TAU * rho
    };
    for (o, vals) in order.iter().enumerate() {
        let mut acc = 0.0;
        for (i, v) in vals.iter().enumerate() {
            let axis_sq = if periodic { rho * rho } else { grid[i] * grid[i] + rho * rho };
            acc += v * v * hstep * ring * (-axis_sq / 4.0).exp();
        }
        norms.order_sq[o] = acc;
    }
    norms.w32_sq = norms.order_sq.iter().sum();
    Ok(norms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Surface;
    use approx::assert_relative_eq;

    #[test]
    fn exact_cylinder_fit() {
        let s = Surface::cylinder_profile(2f64.sqrt(), 16.0, 200);
        let fit = fit_cylinder(&s, 1, &FitOptions::default()).unwrap();
        let a = &fit.cylinder.axis_frame[0];
        assert!((a[0].abs() - 1.0).abs() < 1e-10, "axis {a:?}");
        assert!(a[1].abs() < 1e-10 && a[2].abs() < 1e-10);
        assert!(fit.norms.sup < 1e-9, "sup w = {}", fit.norms.sup);
        assert_relative_eq!(fit.mean_radius, 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn sphere_fit_recovers_center() {
        let mut s = Surface::circle(2f64.sqrt(), [0.3, -0.2], 128);
        s.mean_convex = true;
        let fit = fit_cylinder(&s, 0, &FitOptions::default()).unwrap();
        assert_relative_eq!(fit.cylinder.center[0], 0.3, epsilon = 1e-8);
        assert_relative_eq!(fit.cylinder.center[1], -0.2, epsilon = 1e-8);
        assert!(fit.norms.sup < 1e-8);
    }

    #[test]
    fn manufactured_axisymmetric_graph_recovered() {
        // r(x) = rho - w(x), w = 0.01 sin(x) window: fitted with the frame
        // frozen to the true one, w is recovered pointwise
        let rho = 2f64.sqrt();
        let m = 600;
        let samples: Vec<nalgebra::Vector2<f64>> = (0..m)
            .map(|i| {
                let x = -12.0 + 24.0 * i as f64 / (m - 1) as f64;
                let w = 0.01 * x.sin() * (-(x / 5.0).powi(4)).exp();
                nalgebra::Vector2::new(x, rho - w)
            })
            .collect();
        let s = Surface {
            kind: crate::geometry::SurfaceKind::ProfileOfRevolution,
            samples,
            end: EndCondition::Clamped {
                ramp_start: 9.5,
                ramp_end: 12.0,
                radius: rho,
            },
            mean_convex: true,
        };
        let opts = FitOptions {
            fixed: Some((vec![0.0; 3], vec![vec![1.0, 0.0, 0.0]])),
            ..Default::default()
        };
        let fit = fit_cylinder(&s, 1, &opts).unwrap();
        let mut max_err = 0.0f64;
        for (coords, _, w) in &fit.graph {
            let x = coords[0];
            let expect = 0.01 * x.sin() * (-(x / 5.0_f64).powi(4)).exp();
            max_err = max_err.max((w - expect).abs());
        }
        assert!(max_err < 1e-6, "graph recovery error {max_err}");
    }

    #[test]
    fn fit_equivariance_under_rotation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // a gently wavy cylinder cloud rotated in the (x, y) ambient plane:
        // the fitted axis must rotate by the same angle
        let rho = 2f64.sqrt();
        let m = 300;
        let mk = |theta: f64| -> WeightedCloud {
            let rot = |p: [f64; 3]| -> Vec<f64> {
                vec![
                    theta.cos() * p[0] - theta.sin() * p[1],
                    theta.sin() * p[0] + theta.cos() * p[1],
                    p[2],
                ]
            };
            let mut points = Vec::new();
            let mut weights = Vec::new();
            for i in 0..m {
                let x = -8.0 + 16.0 * i as f64 / (m - 1) as f64;
                let r = rho - 0.02 * (0.7 * x).cos() * (-(x / 4.0_f64).powi(4)).exp();
                for j in 0..24 {
                    let ph = std::f64::consts::TAU * j as f64 / 24.0;
                    points.push(rot([x, r * ph.cos(), r * ph.sin()]));
                    weights.push(r * 16.0 / m as f64 * std::f64::consts::TAU / 24.0);
                }
            }
            WeightedCloud { points, weights }
        };
        let base = fit_cylinder_cloud(&mk(0.0), 2, 1, &FitOptions::default()).unwrap();
        for _ in 0..3 {
            let theta: f64 = rng.gen_range(0.2..1.3);
            let fit = fit_cylinder_cloud(&mk(theta), 2, 1, &FitOptions::default()).unwrap();
            let a0 = &base.cylinder.axis_frame[0];
            let expect = [
                theta.cos() * a0[0] - theta.sin() * a0[1],
                theta.sin() * a0[0] + theta.cos() * a0[1],
                a0[2],
            ];
            let a = &fit.cylinder.axis_frame[0];
            let cosang = (a[0] * expect[0] + a[1] * expect[1] + a[2] * expect[2]).abs();
            let angle = cosang.min(1.0).acos();
            assert!(angle < 1e-8, "axis angle error {angle} at theta {theta}");
        }
    }
}
