//! Level-set extraction from 2D grids (marching squares with subcell
//! interpolation), producing closed polyline surfaces.

use super::surface::{EndCondition, Surface, SurfaceKind};
use crate::error::{Error, Result};
use crate::util::grid::GridField;
use nalgebra::Vector2;
use std::collections::HashMap;

/// Extracts the closed contour {values = level} from a 2D grid as a
/// [`SurfaceKind::LevelsetIsosurface`]. Returns the longest loop, oriented
/// counterclockwise. Cells outside the mask are ignored.
pub fn extract_level_2d(grid: &GridField, level: f64) -> Result<Surface> {
    assert_eq!(grid.dim, 2);
    let (ni, nj) = (grid.shape[0], grid.shape[1]);
    let value = |i: usize, j: usize| grid.values[i * nj + j] - level;
    let ok = |i: usize, j: usize| grid.mask[i * nj + j];

    // edge key: (i, j, horizontal?) for the edge from (i,j) to (i+1,j) or (i,j+1)
    type EdgeKey = (usize, usize, bool);
    let cross = |a: f64, b: f64| (a > 0.0) != (b > 0.0);
    let lerp = |i: usize, j: usize, horiz: bool| -> Vector2<f64> {
        let (a, b) = if horiz {
            (value(i, j), value(i + 1, j))
        } else {
            (value(i, j), value(i, j + 1))
        };
        let t = a / (a - b);
        let p = grid.position(&[i, j]);
        if horiz {
            Vector2::new(p[0] + t * grid.spacing, p[1])
        } else {
            Vector2::new(p[0], p[1] + t * grid.spacing)
        }
    };

    // per cell, connect crossing edges into segments
    let mut links: HashMap<EdgeKey, Vec<EdgeKey>> = HashMap::new();
    for i in 0..ni - 1 {
        for j in 0..nj - 1 {
            if !(ok(i, j) && ok(i + 1, j) && ok(i, j + 1) && ok(i + 1, j + 1)) {
                continue;
            }
            let mut edges: Vec<EdgeKey> = Vec::new();
            if cross(value(i, j), value(i + 1, j)) {
                edges.push((i, j, true));
            }
            if cross(value(i, j + 1), value(i + 1, j + 1)) {
                edges.push((i, j + 1, true));
            }
            if cross(value(i, j), value(i, j + 1)) {
                edges.push((i, j, false));
            }
            if cross(value(i + 1, j), value(i + 1, j + 1)) {
                edges.push((i + 1, j, false));
            }
            if edges.len() == 2 {
                links.entry(edges[0]).or_default().push(edges[1]);
                links.entry(edges[1]).or_default().push(edges[0]);
            }
            // ambiguous saddle cells (4 crossings) are rare at our
            // resolutions; pair arbitrarily but consistently
            if edges.len() == 4 {
                links.entry(edges[0]).or_default().push(edges[2]);
                links.entry(edges[2]).or_default().push(edges[0]);
                links.entry(edges[1]).or_default().push(edges[3]);
                links.entry(edges[3]).or_default().push(edges[1]);
            }
        }
    }
    if links.is_empty() {
        return Err(Error::Resolution("level set does not cross the grid".into()));
    }

    // walk loops; keep the longest
    let mut visited: HashMap<EdgeKey, bool> = HashMap::new();
    let mut best: Vec<Vector2<f64>> = Vec::new();
    let mut keys: Vec<EdgeKey> = links.keys().cloned().collect();
    keys.sort_unstable();
    for start in keys {
        if *visited.get(&start).unwrap_or(&false) {
            continue;
        }
        let mut loop_pts: Vec<Vector2<f64>> = Vec::new();
        let mut prev: Option<EdgeKey> = None;
        let mut cur = start;
        loop {
            visited.insert(cur, true);
            loop_pts.push(lerp(cur.0, cur.1, cur.2));
            let nexts = &links[&cur];
            let next = nexts
                .iter()
                .find(|&&e| Some(e) != prev && !*visited.get(&e).unwrap_or(&false));
            match next {
                Some(&e) => {
                    prev = Some(cur);
                    cur = e;
                }
                None => break,
            }
            if cur == start {
                break;
            }
        }
        if loop_pts.len() > best.len() {
            best = loop_pts;
        }
    }
    if best.len() < 16 {
        return Err(Error::Resolution(format!(
            "extracted contour has only {} points",
            best.len()
        )));
    }
    let mut s = Surface {
        kind: SurfaceKind::LevelsetIsosurface,
        samples: best,
        end: EndCondition::Closed,
        mean_convex: false,
    };
    if s.enclosed_area() < 0.0 {
        s.samples.reverse();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_circle_contour() {
        let mut g = GridField::new(vec![-2.0, -2.0], vec![101, 101], 0.04);
        for f in 0..g.len() {
            let idx = g.unflatten(f);
            let p = g.position(&idx[..2]);
            g.values[f] = p[0] * p[0] + p[1] * p[1];
            g.mask[f] = true;
        }
        let s = extract_level_2d(&g, 1.0).unwrap();
        assert!(s.len() > 100);
        for p in &s.samples {
            assert!((p.norm() - 1.0).abs() < 2e-3, "contour point off circle: {p:?}");
        }
        // curvature of the extracted contour approximates 1/R = 1
        let mut mean_h = 0.0;
        for i in 0..s.len() {
            mean_h += s.geom_at(i).unwrap().h;
        }
        mean_h /= s.len() as f64;
        assert!((mean_h - 1.0).abs() < 0.05, "mean curvature {mean_h}");
    }
}
