//! Cubic-convolution (Catmull–Rom) interpolation of grid fields with
//! analytic gradient and Hessian of the interpolant.

use super::grid::GridField;
use nalgebra::DMatrix;

#[inline]
fn cr_weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        -0.5 * t3 + t2 - 0.5 * t,
        1.5 * t3 - 2.5 * t2 + 1.0,
        -1.5 * t3 + 2.0 * t2 + 0.5 * t,
        0.5 * t3 - 0.5 * t2,
    ]
}

#[inline]
fn cr_dweights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    [
        -1.5 * t2 + 2.0 * t - 0.5,
        4.5 * t2 - 5.0 * t,
        -4.5 * t2 + 4.0 * t + 0.5,
        1.5 * t2 - t,
    ]
}

#[inline]
fn cr_ddweights(t: f64) -> [f64; 4] {
    [
        -3.0 * t + 2.0,
        9.0 * t - 5.0,
        -9.0 * t + 4.0,
        3.0 * t - 1.0,
    ]
}

/// Smooth evaluator over a [`GridField`]. Evaluation succeeds only where
/// the full 4^d stencil lies inside the mask.
pub struct CubicInterp<'a> {
    pub grid: &'a GridField,
}

pub struct JetSample {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: DMatrix<f64>,
}

impl<'a> CubicInterp<'a> {
    pub fn new(grid: &'a GridField) -> Self {
        CubicInterp { grid }
    }

    fn locate(&self, x: &[f64]) -> Option<(Vec<usize>, Vec<f64>)> {
        let g = self.grid;
        let mut base = Vec::with_capacity(g.dim);
        let mut frac = Vec::with_capacity(g.dim);
        for d in 0..g.dim {
            let s = (x[d] - g.origin[d]) / g.spacing;
            let i = s.floor();
            let t = s - i;
            let i = i as isize;
            if i - 1 < 0 || i + 2 >= g.shape[d] as isize {
                return None;
            }
            base.push(i as usize);
            frac.push(t);
        }
        // require the whole 4^d stencil to be masked
        let mut cursor = vec![-1isize; g.dim];
        loop {
            let probe: Vec<usize> = (0..g.dim)
                .map(|d| (base[d] as isize + cursor[d]) as usize)
                .collect();
            if !g.masked(&probe) {
                return None;
            }
            let mut d = 0;
            loop {
                cursor[d] += 1;
                if cursor[d] <= 2 {
                    break;
                }
                cursor[d] = -1;
                d += 1;
                if d == g.dim {
                    return Some((base, frac));
                }
            }
        }
    }

    /// True when `x` has a complete masked stencil.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.locate(x).is_some()
    }

    pub fn value(&self, x: &[f64]) -> Option<f64> {
        let (base, frac) = self.locate(x)?;
        Some(self.tensor_sum(&base, &frac, &[]))
    }

    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let (base, frac) = self.locate(x)?;
        Some(
            (0..self.grid.dim)
                .map(|d| self.tensor_sum(&base, &frac, &[d]) / self.grid.spacing)
                .collect(),
        )
    }

    /// Value, gradient, and Hessian of the interpolant at `x`.
    pub fn jet(&self, x: &[f64]) -> Option<JetSample> {
        let (base, frac) = self.locate(x)?;
        let dim = self.grid.dim;
        let h = self.grid.spacing;
        let value = self.tensor_sum(&base, &frac, &[]);
        let gradient: Vec<f64> = (0..dim)
            .map(|d| self.tensor_sum(&base, &frac, &[d]) / h)
            .collect();
        let mut hess = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in a..dim {
                let v = self.tensor_sum(&base, &frac, &[a, b]) / (h * h);
                hess[(a, b)] = v;
                hess[(b, a)] = v;
            }
        }
        Some(JetSample {
            value,
            gradient,
            hessian: hess,
        })
    }

    /// Tensor-product sum with derivative weights along the axes listed in
    /// `deriv` (an axis appearing twice selects the second derivative).
    fn tensor_sum(&self, base: &[usize], frac: &[f64], deriv: &[usize]) -> f64 {
        let g = self.grid;
        let dim = g.dim;
        let mut w = [[0.0f64; 4]; 3];
        for d in 0..dim {
            let order = deriv.iter().filter(|&&a| a == d).count();
            w[d] = match order {
                0 => cr_weights(frac[d]),
                1 => cr_dweights(frac[d]),
                _ => cr_ddweights(frac[d]),
            };
        }
        let mut acc = 0.0;
        match dim {
            2 => {
                for (a, wa) in w[0].iter().enumerate() {
                    let i0 = base[0] + a - 1;
                    let row = i0 * g.shape[1] + base[1] - 1;
                    for (b, wb) in w[1].iter().enumerate() {
                        acc += wa * wb * g.values[row + b];
                    }
                }
            }
            _ => {
                for (a, wa) in w[0].iter().enumerate() {
                    let i0 = base[0] + a - 1;
                    for (b, wb) in w[1].iter().enumerate() {
                        let i1 = base[1] + b - 1;
                        let row = (i0 * g.shape[1] + i1) * g.shape[2] + base[2] - 1;
                        let wab = wa * wb;
                        for (c, wc) in w[2].iter().enumerate() {
                            acc += wab * wc * g.values[row + c];
                        }
                    }
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reproduces_quadratics_and_derivatives() {
        let mut g = GridField::new(vec![-1.0, -1.0, -1.0], vec![17, 17, 17], 0.125);
        for f in 0..g.len() {
            let idx = g.unflatten(f);
            let p = g.position(&idx);
            g.values[f] = 1.0 + p[0] + p[0] * p[1] + 3.0 * p[2] * p[2];
            g.mask[f] = true;
        }
        let it = CubicInterp::new(&g);
        let x = [0.31, -0.22, 0.17];
        let jet = it.jet(&x).unwrap();
        assert_relative_eq!(
            jet.value,
            1.0 + x[0] + x[0] * x[1] + 3.0 * x[2] * x[2],
            epsilon = 1e-10
        );
        assert_relative_eq!(jet.gradient[0], 1.0 + x[1], epsilon = 1e-9);
        assert_relative_eq!(jet.gradient[2], 6.0 * x[2], epsilon = 1e-9);
        assert_relative_eq!(jet.hessian[(0, 1)], 1.0, epsilon = 1e-8);
        assert_relative_eq!(jet.hessian[(2, 2)], 6.0, epsilon = 1e-8);
    }

    #[test]
    fn rejects_outside_mask() {
        let mut g = GridField::new(vec![0.0, 0.0], vec![8, 8], 1.0);
        for f in 0..g.len() {
            g.mask[f] = true;
        }
        g.mask[3 * 8 + 3] = false;
        let it = CubicInterp::new(&g);
        assert!(it.value(&[3.4, 3.4]).is_none());
        assert!(it.value(&[6.1, 6.1]).is_none()); // stencil exits grid
    }
}
