//! The discrete hypersurface type and per-sample geometry.

use crate::error::{Error, Result};
use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    /// Closed simple curve in R^2 (hypersurface dimension n = 1),
    /// oriented counterclockwise.
    PlaneCurve,
    /// Meridian (x, r(x)) of a rotationally symmetric surface in R^3
    /// (n = 2), samples ordered by increasing x with r > 0.
    ProfileOfRevolution,
    /// Closed polyline extracted from a 2D level-set grid; treated as a
    /// plane curve for all geometric operations.
    LevelsetIsosurface,
}

/// How a profile meridian terminates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EndCondition {
    /// Plane curves: periodic in the sample index.
    Closed,
    /// Profile meets the rotation axis smoothly at both ends.
    Capped,
    /// Profile is periodic in x with the given period.
    Periodic { period: f64 },
    /// Truncated cylinder: samples with |x| >= ramp_start are blended
    /// toward the reference radius, fully pinned beyond ramp_end.
    Clamped {
        ramp_start: f64,
        ramp_end: f64,
        radius: f64,
    },
}

/// Per-sample differential geometry.
#[derive(Debug, Clone)]
pub struct SampleGeom {
    /// Unit tangent in the sample plane, in index order.
    pub tangent: Vector2<f64>,
    /// Outward unit normal in the sample plane.
    pub normal: Vector2<f64>,
    /// Signed in-plane curvature (positive when bending away from the
    /// outward normal, so a round circle has kappa = 1/R).
    pub kappa: f64,
    /// Mean curvature (sum of principal curvatures).
    pub h: f64,
    /// Arclength weight of the sample (half the adjacent chord lengths).
    pub ds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Surface {
    pub kind: SurfaceKind,
    pub samples: Vec<Vector2<f64>>,
    pub end: EndCondition,
    pub mean_convex: bool,
}

impl Surface {
    /// Hypersurface dimension n.
    pub fn dim(&self) -> usize {
        match self.kind {
            SurfaceKind::PlaneCurve | SurfaceKind::LevelsetIsosurface => 1,
            SurfaceKind::ProfileOfRevolution => 2,
        }
    }

    /// Ambient dimension n + 1.
    pub fn ambient_dim(&self) -> usize {
        self.dim() + 1
    }

    pub fn is_curve(&self) -> bool {
        self.dim() == 1
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Closed CCW circle of radius `r` about `center` with `m` samples.
    pub fn circle(r: f64, center: [f64; 2], m: usize) -> Surface {
        let samples = (0..m)
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / m as f64;
                Vector2::new(center[0] + r * th.cos(), center[1] + r * th.sin())
            })
            .collect();
        Surface {
            kind: SurfaceKind::PlaneCurve,
            samples,
            end: EndCondition::Closed,
            mean_convex: true,
        }
    }

    /// Closed CCW ellipse with semiaxes (a, b), sampled uniformly in the
    /// parameter angle.
    pub fn ellipse(a: f64, b: f64, m: usize) -> Surface {
        let samples = (0..m)
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / m as f64;
                Vector2::new(a * th.cos(), b * th.sin())
            })
            .collect();
        Surface {
            kind: SurfaceKind::PlaneCurve,
            samples,
            end: EndCondition::Closed,
            mean_convex: true,
        }
    }

    /// Sphere of radius `r` centered on the axis at x = cx, as a capped
    /// meridian with `m` samples placed at half-offset from the poles.
    pub fn sphere_profile(r: f64, cx: f64, m: usize) -> Surface {
        let samples = (0..m)
            .map(|i| {
                let phi = std::f64::consts::PI * (1.0 - (i as f64 + 0.5) / m as f64);
                Vector2::new(cx + r * phi.cos(), r * phi.sin())
            })
            .collect();
        Surface {
            kind: SurfaceKind::ProfileOfRevolution,
            samples,
            end: EndCondition::Capped,
            mean_convex: true,
        }
    }

    /// Straight cylinder r = rho, periodic with the given period, sampled
    /// uniformly in x on [-period/2, period/2).
    pub fn cylinder_profile(rho: f64, period: f64, m: usize) -> Surface {
        let samples = (0..m)
            .map(|i| {
                let x = -period / 2.0 + period * i as f64 / m as f64;
                Vector2::new(x, rho)
            })
            .collect();
        Surface {
            kind: SurfaceKind::ProfileOfRevolution,
            samples,
            end: EndCondition::Periodic { period },
            mean_convex: true,
        }
    }

    /// Truncated near-cylinder r(x) on [-x_max, x_max] with clamped ends.
    pub fn clamped_profile(
        radius: f64,
        x_max: f64,
        ramp_start: f64,
        m: usize,
        r_of_x: impl Fn(f64) -> f64,
    ) -> Surface {
        let samples = (0..m)
            .map(|i| {
                let x = -x_max + 2.0 * x_max * i as f64 / (m - 1) as f64;
                Vector2::new(x, r_of_x(x))
            })
            .collect();
        Surface {
            kind: SurfaceKind::ProfileOfRevolution,
            samples,
            end: EndCondition::Clamped {
                ramp_start,
                ramp_end: x_max,
                radius,
            },
            mean_convex: true,
        }
    }

    /// Rotationally symmetric dumbbell r(x) = (neck + coef x^2) sqrt(1 - (x/half_len)^2)
    /// on (-half_len, half_len), resampled to roughly uniform arclength.
    pub fn dumbbell_profile(neck: f64, coef: f64, half_len: f64, m: usize) -> Surface {
        let prof = |x: f64| (neck + coef * x * x) * (1.0 - (x / half_len) * (x / half_len)).sqrt();
        // seed with a parameter grid biased toward the ends, then resample
        let seed: Vec<Vector2<f64>> = (0..4 * m)
            .map(|i| {
                let t = std::f64::consts::PI * (1.0 - (i as f64 + 0.5) / (4 * m) as f64);
                let x = half_len * t.cos();
                Vector2::new(x, prof(x))
            })
            .collect();
        let s = Surface {
            kind: SurfaceKind::ProfileOfRevolution,
            samples: seed,
            end: EndCondition::Capped,
            mean_convex: true,
        };
        let total = s.total_arclength();
        super::resample(&s, total / m as f64).expect("dumbbell resample")
    }

    /// Neighbor points for the stencil at sample `i`, honoring the end
    /// condition (mirror ghosts at caps, x-shifted wrap for periodic).
    pub fn stencil(&self, i: usize) -> Result<(Vector2<f64>, Vector2<f64>, Vector2<f64>)> {
        let m = self.samples.len();
        if m < 3 {
            return Err(Error::DegenerateStencil {
                index: i,
                reason: "fewer than 3 samples".into(),
            });
        }
        let cur = self.samples[i];
        let prev = if i > 0 {
            self.samples[i - 1]
        } else {
            match self.end {
                EndCondition::Closed => self.samples[m - 1],
                EndCondition::Capped => Vector2::new(cur.x, -cur.y),
                EndCondition::Periodic { period } => {
                    let p = self.samples[m - 1];
                    Vector2::new(p.x - period, p.y)
                }
                EndCondition::Clamped { radius, .. } => {
                    let d = self.samples[1].x - cur.x;
                    Vector2::new(cur.x - d, radius)
                }
            }
        };
        let next = if i + 1 < m {
            self.samples[i + 1]
        } else {
            match self.end {
                EndCondition::Closed => self.samples[0],
                EndCondition::Capped => Vector2::new(cur.x, -cur.y),
                EndCondition::Periodic { period } => {
                    let p = self.samples[0];
                    Vector2::new(p.x + period, p.y)
                }
                EndCondition::Clamped { radius, .. } => {
                    let d = cur.x - self.samples[m - 2].x;
                    Vector2::new(cur.x + d, radius)
                }
            }
        };
        Ok((prev, cur, next))
    }

    /// Differential geometry at sample `i`.
    pub fn geom_at(&self, i: usize) -> Result<SampleGeom> {
        let (prev, cur, next) = self.stencil(i)?;
        let e0 = cur - prev;
        let e1 = next - cur;
        let a = e0.norm();
        let b = e1.norm();
        if a < 1e-300 || b < 1e-300 {
            return Err(Error::DegenerateStencil {
                index: i,
                reason: "coincident samples".into(),
            });
        }
        let chord = next - prev;
        let c = chord.norm();
        if c < 1e-300 {
            return Err(Error::DegenerateStencil {
                index: i,
                reason: "stencil folds back on itself".into(),
            });
        }
        let tangent = chord / c;
        // circumscribed-circle curvature: exact on circles, second order
        // in general
        let cross = e0.x * e1.y - e0.y * e1.x;
        let kappa_ccw = 2.0 * cross / (a * b * c);
        let (normal, kappa, h) = match self.kind {
            SurfaceKind::PlaneCurve | SurfaceKind::LevelsetIsosurface => {
                // CCW orientation: outward normal is the right rotation
                let normal = Vector2::new(tangent.y, -tangent.x);
                (normal, kappa_ccw, kappa_ccw)
            }
            SurfaceKind::ProfileOfRevolution => {
                // samples ordered by increasing x: outward is the left rotation
                let normal = Vector2::new(-tangent.y, tangent.x);
                let kappa = -kappa_ccw;
                let r = cur.y;
                if r <= 0.0 {
                    return Err(Error::DegenerateStencil {
                        index: i,
                        reason: format!("profile radius {r} <= 0"),
                    });
                }
                (normal, kappa, kappa + normal.y / r)
            }
        };
        // chord-to-arc correction (arc/chord = 1 + (c kappa)^2/24 + ...),
        // fourth-order accurate and exact in the circle-family gauge
        let corr = |c: f64| c * (1.0 + c * c * kappa * kappa / 24.0);
        Ok(SampleGeom {
            tangent,
            normal,
            kappa,
            h,
            ds: 0.5 * (corr(a) + corr(b)),
        })
    }

    /// Geometry at every sample.
    pub fn geometry(&self) -> Result<Vec<SampleGeom>> {
        (0..self.len()).map(|i| self.geom_at(i)).collect()
    }

    pub fn total_arclength(&self) -> f64 {
        let m = self.len();
        let mut l = 0.0;
        for i in 0..m {
            let j = (i + 1) % m;
            if j == 0 {
                match self.end {
                    EndCondition::Closed => l += (self.samples[0] - self.samples[m - 1]).norm(),
                    EndCondition::Capped => {
                        // close through both poles
                        l += 2.0 * self.samples[m - 1].y.abs() / 2.0
                            + 2.0 * self.samples[0].y.abs() / 2.0;
                    }
                    EndCondition::Periodic { period } => {
                        let p = self.samples[0];
                        l += (Vector2::new(p.x + period, p.y) - self.samples[m - 1]).norm();
                    }
                    EndCondition::Clamped { .. } => {}
                }
            } else {
                l += (self.samples[j] - self.samples[i]).norm();
            }
        }
        l
    }

    /// Signed enclosed area of a closed plane curve (positive for CCW).
    pub fn enclosed_area(&self) -> f64 {
        let m = self.len();
        let mut a = 0.0;
        for i in 0..m {
            let p = self.samples[i];
            let q = self.samples[(i + 1) % m];
            a += p.x * q.y - q.x * p.y;
        }
        0.5 * a
    }

    pub fn centroid(&self) -> Vector2<f64> {
        let mut c = Vector2::zeros();
        for p in &self.samples {
            c += p;
        }
        c / self.len() as f64
    }

    pub fn max_radius_about(&self, c: Vector2<f64>) -> f64 {
        self.samples
            .iter()
            .map(|p| (p - c).norm())
            .fold(0.0, f64::max)
    }

    /// Structural validation per kind: sample counts, simplicity,
    /// positivity and ordering of profiles, and (when the flag is set)
    /// mean convexity at every sample.
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SurfaceKind::PlaneCurve | SurfaceKind::LevelsetIsosurface => {
                if self.len() < 16 {
                    return Err(Error::Parse(format!(
                        "plane curve needs >= 16 samples, got {}",
                        self.len()
                    )));
                }
                if self.enclosed_area() <= 0.0 {
                    return Err(Error::Parse(
                        "plane curve must be counterclockwise (negative enclosed area)".into(),
                    ));
                }
                if self.self_intersects() {
                    return Err(Error::Parse(
                        "plane curve self-intersects at sample resolution".into(),
                    ));
                }
            }
            SurfaceKind::ProfileOfRevolution => {
                if self.len() < 8 {
                    return Err(Error::Parse("profile needs >= 8 samples".into()));
                }
                for w in self.samples.windows(2) {
                    if w[1].x <= w[0].x {
                        return Err(Error::Parse("profile x must be strictly increasing".into()));
                    }
                }
                if self.samples.iter().any(|p| p.y <= 0.0) {
                    return Err(Error::Parse("profile radius must be positive".into()));
                }
            }
        }
        if self.mean_convex {
            for i in 0..self.len() {
                let g = self.geom_at(i)?;
                if g.h <= 0.0 {
                    return Err(Error::StepRejected { index: i, h: g.h });
                }
            }
        }
        Ok(())
    }

    fn self_intersects(&self) -> bool {
        let m = self.len();
        let seg = |i: usize| (self.samples[i], self.samples[(i + 1) % m]);
        for i in 0..m {
            let (a, b) = seg(i);
            for j in (i + 2)..m {
                if i == 0 && j == m - 1 {
                    continue; // adjacent through the wrap
                }
                let (c, d) = seg(j);
                if segments_cross(a, b, c, d) {
                    return true;
                }
            }
        }
        false
    }

    /// Writes the surface exchange CSV (header `x0,x1` for curves,
    /// `x,r` for profiles).
    pub fn to_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        let header = if self.is_curve() { "x0,x1" } else { "x,r" };
        writeln!(f, "{header}")?;
        for p in &self.samples {
            writeln!(f, "{:.17e},{:.17e}", p.x, p.y)?;
        }
        Ok(())
    }

    /// Reads the surface exchange CSV; the header selects the kind.
    pub fn from_csv(path: &Path) -> Result<Surface> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut lines = f.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty surface CSV".into()))??;
        let kind = match header.trim() {
            "x0,x1" => SurfaceKind::PlaneCurve,
            "x,r" => SurfaceKind::ProfileOfRevolution,
            other => {
                return Err(Error::Parse(format!(
                    "unrecognized surface CSV header `{other}`"
                )))
            }
        };
        let mut samples = Vec::new();
        for (ln, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split(',');
            let x: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad row {} in surface CSV", ln + 2)))?;
            let y: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad row {} in surface CSV", ln + 2)))?;
            samples.push(Vector2::new(x, y));
        }
        let end = match kind {
            SurfaceKind::PlaneCurve | SurfaceKind::LevelsetIsosurface => EndCondition::Closed,
            SurfaceKind::ProfileOfRevolution => EndCondition::Capped,
        };
        Ok(Surface {
            kind,
            samples,
            end,
            mean_convex: false,
        })
    }
}

fn segments_cross(a: Vector2<f64>, b: Vector2<f64>, c: Vector2<f64>, d: Vector2<f64>) -> bool {
    let orient = |p: Vector2<f64>, q: Vector2<f64>, r: Vector2<f64>| {
        (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    };
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Mean curvature at one sample (sum convention, H = n/R on round spheres).
pub fn mean_curvature(surface: &Surface, index: usize) -> Result<f64> {
    Ok(surface.geom_at(index)?.h)
}

/// Per-sample shrinker residual phi = H - <x, n>/2. This is exactly the
/// negative of the rescaled-MCF normal speed used by the flow engine.
pub fn shrinker_residual(surface: &Surface) -> Result<Vec<f64>> {
    let geoms = surface.geometry()?;
    Ok(surface
        .samples
        .iter()
        .zip(&geoms)
        .map(|(p, g)| {
            // for profiles the ambient inner product <x, n> reduces to the
            // meridian one: x.nx + r.nr, independent of the ring angle
            g.h - 0.5 * (p.x * g.normal.x + p.y * g.normal.y)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circle_curvature_is_exact() {
        let s = Surface::circle(2.0, [0.0, 0.0], 64);
        for i in [0usize, 7, 33] {
            assert_relative_eq!(mean_curvature(&s, i).unwrap(), 0.5, epsilon = 1e-13);
        }
    }

    #[test]
    fn sphere_profile_curvature() {
        let s = Surface::sphere_profile(1.5, 0.0, 200);
        // H = 2/R, exact away from the caps and second order at them
        for i in [0usize, 1, 50, 100, 199] {
            assert_relative_eq!(mean_curvature(&s, i).unwrap(), 2.0 / 1.5, max_relative = 1e-3);
        }
        assert_relative_eq!(mean_curvature(&s, 100).unwrap(), 2.0 / 1.5, epsilon = 1e-12);
    }

    #[test]
    fn ellipse_flattest_point_matches_closed_form() {
        // kappa(theta) = a b / (a^2 sin^2 + b^2 cos^2)^{3/2}; flattest at
        // the co-vertex (0, b)
        let (a, b) = (2.0, 1.0);
        let m = 512;
        let s = Surface::ellipse(a, b, m);
        let i = m / 4; // theta = pi/2
        let kappa = a * b / a.powi(3); // = b / a^2
        assert_relative_eq!(mean_curvature(&s, i).unwrap(), kappa, max_relative = 1e-4);
    }

    #[test]
    fn cylinder_profile_curvature() {
        let s = Surface::cylinder_profile(2f64.sqrt(), 8.0, 64);
        for i in 0..s.len() {
            assert_relative_eq!(
                mean_curvature(&s, i).unwrap(),
                1.0 / 2f64.sqrt(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn shrinker_residuals() {
        // sphere of radius sqrt(2n) is a shrinker
        let n1 = Surface::circle(2f64.sqrt(), [0.0, 0.0], 128);
        for phi in shrinker_residual(&n1).unwrap() {
            assert!(phi.abs() < 1e-8, "circle shrinker residual {phi}");
        }
        let n2 = Surface::sphere_profile(2.0, 0.0, 256);
        for phi in shrinker_residual(&n2).unwrap() {
            assert!(phi.abs() < 1e-6, "sphere shrinker residual {phi}");
        }
        let cyl = Surface::cylinder_profile(2f64.sqrt(), 8.0, 64);
        for phi in shrinker_residual(&cyl).unwrap() {
            assert!(phi.abs() < 1e-12, "cylinder shrinker residual {phi}");
        }
        // sphere of radius 2 sqrt(2n): phi = n/(2 sqrt(2n)) - sqrt(2n)
        let n = 2.0f64;
        let r = 2.0 * (2.0 * n).sqrt();
        let big = Surface::sphere_profile(r, 0.0, 512);
        let expect = n / r - 0.5 * r;
        for phi in shrinker_residual(&big).unwrap() {
            assert_relative_eq!(phi, expect, max_relative = 1e-4);
        }
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        let s = Surface::ellipse(1.0, 0.6, 64);
        s.to_csv(&path).unwrap();
        let t = Surface::from_csv(&path).unwrap();
        assert_eq!(t.kind, SurfaceKind::PlaneCurve);
        assert_eq!(t.len(), 64);
        for (p, q) in s.samples.iter().zip(&t.samples) {
            assert_relative_eq!(p.x, q.x);
            assert_relative_eq!(p.y, q.y);
        }
    }

    #[test]
    fn validation_catches_bad_curves() {
        let mut s = Surface::circle(1.0, [0.0, 0.0], 32);
        s.samples.reverse(); // clockwise
        assert!(s.validate().is_err());

        // figure-eight self-intersection
        let fig8: Vec<Vector2<f64>> = (0..64)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 64.0;
                Vector2::new(t.sin(), (2.0 * t).sin())
            })
            .collect();
        let s = Surface {
            kind: SurfaceKind::PlaneCurve,
            samples: fig8,
            end: EndCondition::Closed,
            mean_convex: false,
        };
        assert!(s.validate().is_err());
    }
}
