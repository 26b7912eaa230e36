//! Exact ensemble-averaged purity of an interval on the infinite chain.
//!
//! Averaging the purity of an interval of length `l` over Haar brickwork
//! circuits reduces to a sum over domain-wall configurations weighted by
//! `eta^{length}`, `eta = q/(q^2+1)`. In lattice coordinates the two walls start
//! at `(l/2, 0)` and `(0, l/2)`, move up or right, and stop once they meet.
//! Everything here is exact big-integer / big-rational arithmetic unless the
//! function name says otherwise; floating variants accept real `q >= 1`.

mod binomial;
mod paths;
mod purity;

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

pub use binomial::binomial;
pub use paths::{j_paths, j_paths_sep, n_merge, n_z, separation_counts};
pub use purity::{
    default_z_max, lemma_a1_partial_sum, lemma_a1_partial_sum_f64, prop2_bounds, prop2_bounds_f64,
    purity_exact, purity_f64, q_function, q_identity_residuals, tail_identity, Prop2Bounds,
    QIdentityResiduals, TailIdentity,
};

/// Exact nonnegative path count.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathCount(pub BigUint);

impl PathCount {
    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.0).unwrap_or(f64::INFINITY)
    }

    pub fn ln(&self) -> f64 {
        binomial::ln_big(&self.0)
    }
}

impl fmt::Display for PathCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for PathCount {
    fn from(v: u64) -> Self {
        PathCount(BigUint::from(v))
    }
}

/// Exact rational with a floating rendering. `exact` is `None` in floating mode
/// (non-integer `q`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityValue {
    #[serde(skip)]
    pub exact: Option<BigRational>,
    pub value: f64,
}

impl PurityValue {
    pub(crate) fn from_exact(r: BigRational) -> Self {
        let value = rational_to_f64(&r);
        PurityValue { exact: Some(r), value }
    }
}

/// Domain-wall weight per unit length, `q/(q^2+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eta(pub BigRational);

impl Eta {
    pub fn new(q: u64) -> crate::Result<Self> {
        if q == 0 {
            return Err(crate::Error::arg("local dimension q must be >= 1"));
        }
        let q = num_bigint::BigInt::from(q);
        Ok(Eta(BigRational::new(q.clone(), &q * &q + 1)))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

/// Converts a (possibly huge) rational to `f64` through logs when the parts
/// overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::{Signed, ToPrimitive, Zero};
    if r.is_zero() {
        return 0.0;
    }
    let direct = r.numer().to_f64().zip(r.denom().to_f64()).map(|(n, d)| n / d);
    if let Some(v) = direct {
        if v.is_finite() && v != 0.0 && r.numer().bits() < 1000 && r.denom().bits() < 1000 {
            return v;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let n = binomial::ln_big(r.numer().abs().magnitude());
    let d = binomial::ln_big(r.denom().magnitude());
    sign * (n - d).exp()
}
