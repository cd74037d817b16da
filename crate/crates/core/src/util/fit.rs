//! Small least-squares helpers: log–log power-law fits and tail extrapolation.

use crate::error::{Error, Result};

/// Result of a power-law fit y = C x^p in log–log coordinates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub constant: f64,
    /// Half-width of an approximate 95% confidence interval on the exponent.
    pub exponent_ci: f64,
    pub samples: usize,
    pub decades: f64,
}

/// Least-squares fit of `y ~ C x^p` from positive sample pairs.
///
/// Requires at least `min_samples` pairs whose x-range spans at least
/// `min_decades` decades; otherwise the fit is refused as ill-conditioned.
pub fn power_law_fit(pairs: &[(f64, f64)], min_samples: usize, min_decades: f64) -> Result<PowerFit> {
    let data: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if data.len() < min_samples {
        return Err(Error::Resolution(format!(
            "power-law fit needs >= {min_samples} positive samples, got {}",
            data.len()
        )));
    }
    let lx_min = data.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let lx_max = data.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let decades = (lx_max - lx_min) / std::f64::consts::LN_10;
    if decades < min_decades {
        return Err(Error::IllConditionedFit {
            decades,
            needed: min_decades,
        });
    }
    let n = data.len() as f64;
    let mx = data.iter().map(|p| p.0).sum::<f64>() / n;
    let my = data.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = data.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = data.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = data
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let dof = (data.len().max(3) - 2) as f64;
    let se = (ss_res / dof / sxx).sqrt();
    Ok(PowerFit {
        exponent: slope,
        constant: intercept.exp(),
        exponent_ci: 1.96 * se,
        samples: data.len(),
        decades,
    })
}

/// Aitken delta-squared extrapolation of a near-geometric tail, applied
/// per coordinate to the last three points. Falls back to the final point
/// when the denominator degenerates.
pub fn aitken_tail(points: &[Vec<f64>]) -> Vec<f64> {
    let m = points.len();
    if m < 3 {
        return points.last().cloned().unwrap_or_default();
    }
    let (a, b, c) = (&points[m - 3], &points[m - 2], &points[m - 1]);
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let d1 = b[i] - a[i];
        let d2 = c[i] - b[i];
        let den = d2 - d1;
        if den.abs() > 1e-14 * (d1.abs() + d2.abs()).max(1e-300) {
            out.push(c[i] - d2 * d2 / den);
        } else {
            out.push(c[i]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_exponent() {
        let pairs: Vec<(f64, f64)> = (1..=40)
            .map(|i| {
                let x = 10f64.powf(-3.0 + 2.5 * i as f64 / 40.0);
                (x, 2.7 * x.powf(1.5))
            })
            .collect();
        let fit = power_law_fit(&pairs, 20, 2.0).unwrap();
        assert_relative_eq!(fit.exponent, 1.5, epsilon = 1e-10);
        assert_relative_eq!(fit.constant, 2.7, max_relative = 1e-9);
    }

    #[test]
    fn refuses_narrow_range() {
        let pairs: Vec<(f64, f64)> = (0..30).map(|i| (1.0 + i as f64 * 1e-3, 1.0)).collect();
        assert!(matches!(
            power_law_fit(&pairs, 20, 2.0),
            Err(Error::IllConditionedFit { .. })
        ));
    }

    #[test]
    fn aitken_geometric() {
        // x_k = 1 + 0.5^k converges to 1
        let pts: Vec<Vec<f64>> = (3..7).map(|k| vec![1.0 + 0.5f64.powi(k)]).collect();
        let x = aitken_tail(&pts);
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
    }
}
