use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn check_ell(ell: u64) -> Result<()> {
    if ell == 0 || !ell.is_multiple_of(2) {
        return Err(Error::domain(format!("interval length must be even and positive, got {ell}")));
    }
    Ok(())
}

/// Large-`q` mutual information between the first `x` sites of an interval
/// of length `ell` and the remaining `ell - x`, in units of `log q`:
/// `min(2T, x) + min(2T, ell - x) - min(2T, ell)`.
pub fn mi_profile(x: u64, t: u64, ell: u64) -> Result<f64> {
    if x > ell {
        return Err(Error::domain(format!("cut {x} outside interval of length {ell}")));
    }
    let w = 2 * t;
    Ok((w.min(x) + w.min(ell - x) - w.min(ell)) as f64)
}

/// Area under the profile, `2T (ell - 2T)`, zero once `2T >= ell`.
pub fn trapezoid_area(t: u64, ell: u64) -> f64 {
    if 2 * t >= ell {
        0.0
    } else {
        (2 * t * (ell - 2 * t)) as f64
    }
}

/// The profile sampled at every even cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidProfile {
    pub ell: u64,
    pub t: u64,
    pub samples: Vec<(u64, f64)>,
}

impl TrapezoidProfile {
    pub fn new(t: u64, ell: u64) -> Result<Self> {
        check_ell(ell)?;
        let samples = (0..=ell).step_by(2).map(|x| Ok((x, mi_profile(x, t, ell)?))).collect::<Result<_>>()?;
        Ok(TrapezoidProfile { ell, t, samples })
    }

    pub fn max_value(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(0.0, f64::max)
    }

    /// Trapezoidal rule with step 2 over the samples.
    pub fn area(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1].0 - w[0].0) as f64 * 0.5 * (w[0].1 + w[1].1)).sum()
    }
}

fn check_eps_half(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/2), got {eps}")));
    }
    Ok(())
}

/// `max(0, ((ell - 2T) T - 5 eps ell^2) / 4)`, the gate-count lower bound
/// implied by the mutual-information profile.
pub fn complexity_lower_bound(t: f64, ell: f64, eps: f64) -> Result<f64> {
    check_eps_half(eps)?;
    if !(t >= 0.0 && t <= ell / 2.0) {
        return Err(Error::domain(format!("need 0 <= T <= ell/2, got T={t}, ell={ell}")));
    }
    Ok((((ell - 2.0 * t) * t - 5.0 * eps * ell * ell) / 4.0).max(0.0))
}

/// `4 m ln q + 5 eps ell ln(q / eps)`: mutual information a region can carry
/// across a cut crossed by `m` gates, up to an `eps`-approximation.
pub fn mi_gate_bound(m: f64, q: f64, eps: f64, ell: f64) -> Result<f64> {
    check_eps_half(eps)?;
    if m < 0.0 || ell < 0.0 || q < 1.0 {
        return Err(Error::domain("need m >= 0, ell >= 0 and q >= 1"));
    }
    Ok(4.0 * m * q.ln() + 5.0 * eps * ell * (q / eps).ln())
}

/// Continuity of mutual information: `10 eps ln(d_min / eps)`.
pub fn mi_continuity(eps: f64, d_min: f64) -> Result<f64> {
    check_eps_half(eps)?;
    if d_min < 1.0 {
        return Err(Error::domain(format!("dimension must be >= 1, got {d_min}")));
    }
    Ok(10.0 * eps * (d_min / eps).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_examples() {
        for x in 0..=10 {
            assert_eq!(mi_profile(x, 0, 10).unwrap(), 0.0);
        }
        assert_eq!(mi_profile(4, 2, 8).unwrap(), 4.0);
        assert_eq!(mi_profile(2, 3, 10).unwrap(), 2.0);
        assert!(mi_profile(11, 1, 10).is_err());
    }

    #[test]
    fn area_examples() {
        assert_eq!(trapezoid_area(0, 12), 0.0);
        assert_eq!(trapezoid_area(3, 12), 36.0);
        assert_eq!(trapezoid_area(7, 12), 0.0);
        let p = TrapezoidProfile::new(3, 12).unwrap();
        assert_eq!(p.area(), 36.0);
        assert_eq!(p.max_value(), 6.0);
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(complexity_lower_bound(25.0, 100.0, 0.001).unwrap(), 300.0);
        assert_eq!(complexity_lower_bound(50.0, 100.0, 0.001).unwrap(), 0.0);
        assert_eq!(complexity_lower_bound(10.0, 100.0, 0.4).unwrap(), 0.0);
        assert!(complexity_lower_bound(10.0, 100.0, 0.5).is_err());
    }

    #[test]
    fn mi_bound_examples() {
        let v = mi_gate_bound(3.0, 2.0, 0.01, 10.0).unwrap();
        assert!((v - (12.0 * 2f64.ln() + 0.5 * 200f64.ln())).abs() < 1e-12);
        assert!(mi_gate_bound(0.0, 2.0, 1e-12, 10.0).unwrap() < 1e-8);
        assert!((mi_continuity(0.1, 4.0).unwrap() - 40f64.ln()).abs() < 1e-12);
        assert!(mi_continuity(0.6, 4.0).is_err());
    }
}
