//! Dense uniform grids in 2 or 3 dimensions with a validity mask.

use serde::{Deserialize, Serialize};

/// A uniform grid over an axis-aligned box. Values are stored flat in
/// row-major order (last index fastest); `mask[i]` marks cells where the
/// value is defined.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridField {
    pub dim: usize,
    pub shape: Vec<usize>,
    pub origin: Vec<f64>,
    pub spacing: f64,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl GridField {
    pub fn new(origin: Vec<f64>, shape: Vec<usize>, spacing: f64) -> Self {
        let dim = shape.len();
        assert!(dim == 2 || dim == 3, "grids are 2- or 3-dimensional");
        let len: usize = shape.iter().product();
        GridField {
            dim,
            shape,
            origin,
            spacing,
            values: vec![0.0; len],
            mask: vec![false; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn flat(&self, idx: &[usize]) -> usize {
        match self.dim {
            2 => idx[0] * self.shape[1] + idx[1],
            _ => (idx[0] * self.shape[1] + idx[1]) * self.shape[2] + idx[2],
        }
    }

    pub fn unflatten(&self, mut f: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        if self.dim == 2 {
            idx[1] = f % self.shape[1];
            idx[0] = f / self.shape[1];
        } else {
            idx[2] = f % self.shape[2];
            f /= self.shape[2];
            idx[1] = f % self.shape[1];
            idx[0] = f / self.shape[1];
        }
        idx
    }

    pub fn position(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(d, &i)| self.origin[d] + self.spacing * i as f64)
            .collect()
    }

    #[inline]
    pub fn masked(&self, idx: &[usize]) -> bool {
        self.mask[self.flat(idx)]
    }

    /// True when every cell within `radius` grid steps of `idx` (in the
    /// max-norm) is inside the mask; used to keep stencils valid.
    pub fn neighborhood_ok(&self, idx: &[usize], radius: usize) -> bool {
        let r = radius as isize;
        let mut cursor = vec![0isize; self.dim];
        for d in 0..self.dim {
            let i = idx[d] as isize;
            if i - r < 0 || i + r >= self.shape[d] as isize {
                return false;
            }
        }
        // enumerate the max-norm ball
        loop {
            let probe: Vec<usize> = (0..self.dim)
                .map(|d| (idx[d] as isize + cursor[d]) as usize)
                .collect();
            if !self.masked(&probe) {
                return false;
            }
            let mut d = 0;
            loop {
                cursor[d] += 1;
                if cursor[d] <= r {
                    break;
                }
                cursor[d] = -r;
                d += 1;
                if d == self.dim {
                    return true;
                }
            }
        }
    }

    /// Centered gradient at an interior masked cell (second order).
    pub fn gradient(&self, idx: &[usize]) -> Option<Vec<f64>> {
        if !self.neighborhood_ok(idx, 1) {
            return None;
        }
        let mut g = Vec::with_capacity(self.dim);
        for d in 0..self.dim {
            let mut ip = idx.to_vec();
            let mut im = idx.to_vec();
            ip[d] += 1;
            im[d] -= 1;
            g.push((self.values[self.flat(&ip)] - self.values[self.flat(&im)]) / (2.0 * self.spacing));
        }
        Some(g)
    }

    /// Centered Hessian at an interior masked cell (second order).
    pub fn hessian(&self, idx: &[usize]) -> Option<nalgebra::DMatrix<f64>> {
        if !self.neighborhood_ok(idx, 1) {
            return None;
        }
        let h = self.spacing;
        let c = self.values[self.flat(idx)];
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for a in 0..self.dim {
            let mut ip = idx.to_vec();
            let mut im = idx.to_vec();
            ip[a] += 1;
            im[a] -= 1;
            m[(a, a)] =
                (self.values[self.flat(&ip)] - 2.0 * c + self.values[self.flat(&im)]) / (h * h);
            for b in (a + 1)..self.dim {
                let mut pp = idx.to_vec();
                let mut pm = idx.to_vec();
                let mut mp = idx.to_vec();
                let mut mm = idx.to_vec();
                pp[a] += 1;
                pp[b] += 1;
                pm[a] += 1;
                pm[b] -= 1;
                mp[a] -= 1;
                mp[b] += 1;
                mm[a] -= 1;
                mm[b] -= 1;
                let v = (self.values[self.flat(&pp)] - self.values[self.flat(&pm)]
                    - self.values[self.flat(&mp)]
                    + self.values[self.flat(&mm)])
                    / (4.0 * h * h);
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quadratic_grid() -> GridField {
        let mut g = GridField::new(vec![-1.0, -1.0], vec![21, 21], 0.1);
        for f in 0..g.len() {
            let idx = g.unflatten(f);
            let p = g.position(&idx[..2]);
            g.values[f] = p[0] * p[0] - 0.5 * p[0] * p[1] + 2.0 * p[1] * p[1];
            g.mask[f] = true;
        }
        g
    }

    #[test]
    fn exact_on_quadratics() {
        let g = quadratic_grid();
        let idx = [7usize, 12];
        let p = g.position(&idx);
        let grad = g.gradient(&idx).unwrap();
        assert_relative_eq!(grad[0], 2.0 * p[0] - 0.5 * p[1], epsilon = 1e-12);
        assert_relative_eq!(grad[1], -0.5 * p[0] + 4.0 * p[1], epsilon = 1e-12);
        let h = g.hessian(&idx).unwrap();
        assert_relative_eq!(h[(0, 0)], 2.0, epsilon = 1e-10);
        assert_relative_eq!(h[(0, 1)], -0.5, epsilon = 1e-10);
        assert_relative_eq!(h[(1, 1)], 4.0, epsilon = 1e-10);
    }
}
