use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which side of the bipartition the complexity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// The interval of length `ell < L/2`.
    Small,
    /// Its complement, of length `L - ell`.
    Large,
}

/// A piecewise value; at the transition `T = ell/2` the late branch is
/// returned and both one-sided limits are exposed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piecewise {
    pub value: f64,
    pub at_transition: bool,
    pub early: f64,
    pub late: f64,
}

impl Piecewise {
    fn new(t: f64, ell: f64, early: f64, late: f64) -> Self {
        let at_transition = t == ell / 2.0;
        let value = if t < ell / 2.0 { early } else { late };
        Piecewise { value, at_transition, early, late }
    }
}

fn check(s: f64, beta: f64) -> Result<()> {
    if !(s > 0.0 && beta > 0.0) {
        return Err(Error::domain("entropy density and inverse temperature must be positive"));
    }
    Ok(())
}

/// Volume-type holographic complexity after subtracting the thermal value:
/// small region `(s/beta) {ell T; 0}`, large region `(s/beta) {(L - ell) T; L T}`
/// before and after `T = ell/2`.
pub fn holographic_complexity(ell: f64, big_l: f64, t: f64, s: f64, beta: f64, region: Region) -> Result<Piecewise> {
    check(s, beta)?;
    if !(ell >= 0.0 && ell <= big_l && t >= 0.0) {
        return Err(Error::domain("need 0 <= ell <= L and T >= 0"));
    }
    let c = s / beta;
    Ok(match region {
        Region::Small => Piecewise::new(t, ell, c * ell * t, 0.0),
        Region::Large => Piecewise::new(t, ell, c * (big_l - ell) * t, c * big_l * t),
    })
}

/// Entanglement entropy of the interval: `s {2T; ell}`.
pub fn holographic_entropy(ell: f64, t: f64, s: f64) -> Result<Piecewise> {
    check(s, 1.0)?;
    if !(ell >= 0.0 && t >= 0.0) {
        return Err(Error::domain("need ell >= 0 and T >= 0"));
    }
    Ok(Piecewise::new(t, ell, s * 2.0 * t, s * ell))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches() {
        for r in [Region::Small, Region::Large] {
            assert_eq!(holographic_complexity(10.0, 40.0, 0.0, 2.0, 0.5, r).unwrap().value, 0.0);
        }
        assert_eq!(holographic_entropy(10.0, 0.0, 3.0).unwrap().value, 0.0);
        let below = holographic_complexity(10.0, 40.0, 4.999, 2.0, 0.5, Region::Small).unwrap();
        assert!((below.value - 4.0 * 10.0 * 4.999).abs() < 1e-9);
        let above = holographic_complexity(10.0, 40.0, 5.001, 2.0, 0.5, Region::Small).unwrap();
        assert_eq!(above.value, 0.0);
        let large = holographic_complexity(10.0, 40.0, 6.0, 2.0, 0.5, Region::Large).unwrap();
        assert_eq!(large.value, 4.0 * 40.0 * 6.0);
    }

    #[test]
    fn transition_returns_late_branch() {
        let v = holographic_complexity(10.0, 40.0, 5.0, 1.0, 1.0, Region::Small).unwrap();
        assert!(v.at_transition);
        assert_eq!(v.value, 0.0);
        assert_eq!(v.early, 50.0);
        let e = holographic_entropy(10.0, 5.0, 1.0).unwrap();
        assert!(e.at_transition);
        // Entropy is continuous at the transition.
        assert_eq!(e.early, e.late);
    }
}
