//! Explicit diagonal states showing that the rank factors in the 1-norm /
//! 2-norm and fidelity / overlap conversions cannot be improved.

use serde::{Deserialize, Serialize};

use crate::qudit_sim::DensityOperator;
use crate::{Error, Result};

/// A ratio computed from an explicit construction next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRatio {
    pub computed: f64,
    pub closed_form: f64,
    /// The construction has no room (e.g. full rank) and the ratio is trivially 0.
    pub degenerate: bool,
}

/// `a = diag(a_1..a_r, 0..)`, `b = diag(a_i - eps, r eps/(d - r), ..)`; returns
/// `||a - b||_1^2 / ||a - b||_2^2`, which equals `4 r (1 - r/d)`.
pub fn norm_extremal_onetwo_with(a: &[f64], d: usize, eps: f64) -> Result<ExtremalRatio> {
    let r = a.len();
    if r == 0 || r > d {
        return Err(Error::InvalidRank { rank: r, dim: d });
    }
    if a.windows(2).any(|w| w[0] < w[1]) || (a.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::arg("spectrum must be sorted descending and sum to 1"));
    }
    let closed_form = 4.0 * r as f64 * (1.0 - r as f64 / d as f64);
    if r == d {
        return Ok(ExtremalRatio { computed: 0.0, closed_form, degenerate: true });
    }
    let a_r = a[r - 1];
    let tail = r as f64 * eps / (d - r) as f64;
    if !(eps > 0.0 && eps < a_r) || a_r - eps < tail {
        return Err(Error::domain(format!("epsilon {eps} too large for this spectrum and dimension")));
    }
    let mut pa = vec![0.0; d];
    let mut pb = vec![tail; d];
    for i in 0..r {
        pa[i] = a[i];
        pb[i] = a[i] - eps;
    }
    let (ra, rb) = (DensityOperator::diagonal(&pa)?, DensityOperator::diagonal(&pb)?);
    let one = 2.0 * ra.trace_distance(&rb)?;
    let two = (ra.matrix() - rb.matrix()).norm_squared();
    Ok(ExtremalRatio { computed: one * one / two, closed_form, degenerate: false })
}

/// [`norm_extremal_onetwo_with`] for the uniform rank-`r` spectrum.
pub fn norm_extremal_onetwo(r: usize, d: usize, eps: f64) -> Result<ExtremalRatio> {
    if r == 0 {
        return Err(Error::InvalidRank { rank: r, dim: d });
    }
    norm_extremal_onetwo_with(&vec![1.0 / r as f64; r], d, eps)
}

/// `rho = diag(1 - eps, eps/d, .., eps/d, 0)`, `sigma = diag(0, eps/d, .., 1 - eps)`
/// in dimension `d + 2`; returns `||sqrt(rho) sqrt(sigma)||_1^2 / Tr(rho sigma) = d`.
pub fn fidelity_extremal(d: usize, eps: f64) -> Result<ExtremalRatio> {
    if d == 0 {
        return Err(Error::InvalidDimension("d must be >= 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let mut p = vec![eps / d as f64; d + 2];
    let mut s = p.clone();
    p[0] = 1.0 - eps;
    p[d + 1] = 0.0;
    s[0] = 0.0;
    s[d + 1] = 1.0 - eps;
    let (rho, sigma) = (DensityOperator::diagonal(&p)?, DensityOperator::diagonal(&s)?);
    let f = rho.fidelity(&sigma)?;
    Ok(ExtremalRatio { computed: f * f / rho.overlap(&sigma)?, closed_form: d as f64, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn onetwo_examples() {
        let x = norm_extremal_onetwo(4, 64, 1e-3).unwrap();
        assert!((x.computed - 15.0).abs() < 1e-6);
        assert_eq!(x.closed_form, 15.0);
        assert!(norm_extremal_onetwo(3, 3, 1e-3).unwrap().degenerate);
        assert!(norm_extremal_onetwo(4, 64, 0.3).is_err());
        let skew = norm_extremal_onetwo_with(&[0.5, 0.3, 0.2], 20, 0.01).unwrap();
        assert!((skew.computed - skew.closed_form).abs() < 1e-6);
    }

    #[test]
    fn fidelity_example() {
        let x = fidelity_extremal(10, 0.2).unwrap();
        assert!((x.computed - 10.0).abs() < 1e-6);
    }
}
