use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::binomial::{binomial, ln_big};
use super::paths::{check_even, n_z_series, separation_counts};
use super::{PurityValue, rational_to_f64};
use crate::{Error, Result};

/// Truncation used by the floating series when the caller has no preference:
/// `l + 2T + 120`. Terms decay like `(2 eta)^{2z}` with `2 eta <= 4/5` for
/// `q >= 2`, so 120 extra diagonals put the tail below 1e-8.
pub fn default_z_max(ell: u64, t: u64) -> u64 {
    ell + 2 * t + 120
}

fn check_interval(ell: u64) -> Result<u64> {
    let half = check_even(ell)?;
    if half == 0 {
        return Err(Error::arg("interval length must be >= 2"));
    }
    Ok(half)
}

fn check_q_int(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::arg("local dimension q must be >= 1"));
    }
    Ok(())
}

fn check_q_real(q: f64) -> Result<()> {
    if q.is_nan() || q < 1.0 || !q.is_finite() {
        return Err(Error::domain(format!("local dimension q must be a real number >= 1, got {q}")));
    }
    Ok(())
}

fn ln_eta(q: f64) -> f64 {
    q.ln() - (q * q + 1.0).ln()
}

/// Exact `P(T;l) = J(T;l) eta^{2T} + sum_{z < T + l/2} N(z;l) eta^{2z-l}`.
pub fn purity_exact(q: u64, ell: u64, t: u64) -> Result<PurityValue> {
    check_q_int(q)?;
    let half = check_interval(ell)?;
    let j: BigUint = separation_counts(t, ell)?.into_iter().map(|c| c.0).sum();
    // Common denominator (q^2+1)^{2T}; every merged term has 2z - l <= 2T - 2.
    let qb = BigUint::from(q);
    let den_base = &qb * &qb + 1u32;
    let mut num = j * Pow::pow(&qb, 2 * t);
    if t > 0 {
        let nz = n_z_series(t + half - 1, ell)?;
        for (z, count) in nz.iter().enumerate().skip(half as usize) {
            if count.is_zero() {
                continue;
            }
            let len = 2 * z as u64 - ell;
            num += count * Pow::pow(&qb, len) * Pow::pow(&den_base, 2 * t - len);
        }
    }
    let den = Pow::pow(&den_base, 2 * t);
    Ok(PurityValue::from_exact(BigRational::new(BigInt::from(num), BigInt::from(den))))
}

/// Floating evaluation of the same series for real `q >= 1`.
pub fn purity_f64(q: f64, ell: u64, t: u64) -> Result<f64> {
    check_q_real(q)?;
    let half = check_interval(ell)?;
    let le = ln_eta(q);
    let j: BigUint = separation_counts(t, ell)?.into_iter().map(|c| c.0).sum();
    let mut total = (ln_big(&j) + 2.0 * t as f64 * le).exp();
    if t > 0 {
        let nz = n_z_series(t + half - 1, ell)?;
        for (z, count) in nz.iter().enumerate().skip(half as usize) {
            if !count.is_zero() {
                total += (ln_big(count) + (2 * z as u64 - ell) as f64 * le).exp();
            }
        }
    }
    Ok(total)
}

/// Exact truncation `sum_{x+y <= z_max} N(x,y;l) eta^{2x+2y-l}`, which increases
/// to `q^{-l}` as `z_max -> infinity`.
pub fn lemma_a1_partial_sum(q: u64, ell: u64, z_max: u64) -> Result<PurityValue> {
    check_q_int(q)?;
    check_even(ell)?;
    let nz = n_z_series(z_max, ell)?;
    let qb = BigUint::from(q);
    let den_base = &qb * &qb + 1u32;
    let top = (2 * z_max).saturating_sub(ell);
    let mut num = BigUint::zero();
    for (z, count) in nz.iter().enumerate() {
        let z = z as u64;
        if count.is_zero() || 2 * z < ell {
            continue;
        }
        let len = 2 * z - ell;
        num += count * Pow::pow(&qb, len) * Pow::pow(&den_base, top - len);
    }
    let den = Pow::pow(&den_base, top);
    Ok(PurityValue::from_exact(BigRational::new(BigInt::from(num), BigInt::from(den))))
}

/// Floating version of [`lemma_a1_partial_sum`] for real `q >= 1`.
pub fn lemma_a1_partial_sum_f64(q: f64, ell: u64, z_max: u64) -> Result<f64> {
    check_q_real(q)?;
    let le = ln_eta(q);
    let nz = n_z_series(z_max, ell)?;
    Ok(nz
        .iter()
        .enumerate()
        .filter(|(z, c)| !c.is_zero() && 2 * *z as u64 >= ell)
        .map(|(z, c)| (ln_big(c) + (2 * z as u64 - ell) as f64 * le).exp())
        .sum())
}

/// Truncated `Q(l) = sum_{a,b >= 0} N(a + l/2, b + l/2; l) eta^{2a+2b}`, keeping
/// merge points with `x + y <= z_max`.
pub fn q_function(ell: u64, eta: f64, z_max: u64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 0.5) {
        return Err(Error::domain(format!("eta must lie in (0, 1/2], got {eta}")));
    }
    let le = eta.ln();
    let nz = n_z_series(z_max, ell)?;
    Ok(nz
        .iter()
        .enumerate()
        .filter(|(z, c)| !c.is_zero() && *z as u64 >= ell)
        .map(|(z, c)| (ln_big(c) + (2 * (z as u64 - ell)) as f64 * le).exp())
        .sum())
}

/// Residuals of `Q(0) = 1`, `Q(l) Q(2) = Q(l+2)` and `Q(2) = (1 + q^{-2})^2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QIdentityResiduals {
    pub q0_minus_one: f64,
    pub multiplicativity: f64,
    pub q2_closed_form: f64,
}

pub fn q_identity_residuals(q: f64, ell: u64, z_max: u64) -> Result<QIdentityResiduals> {
    check_q_real(q)?;
    check_even(ell)?;
    let eta = q / (q * q + 1.0);
    let q0 = q_function(0, eta, z_max)?;
    let q2 = q_function(2, eta, z_max)?;
    let ql = q_function(ell, eta, z_max)?;
    let ql2 = q_function(ell + 2, eta, z_max)?;
    Ok(QIdentityResiduals {
        q0_minus_one: q0 - 1.0,
        multiplicativity: ql * q2 - ql2,
        q2_closed_form: q2 - (1.0 + 1.0 / (q * q)).powi(2),
    })
}

/// Lower and upper bounds on `P(T;l) - q^{-l}`:
/// `(1 - q^{-2}) C(2T,T) eta^{2T} / (T+1)` and `(2 q/(q^2+1))^{2T}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop2Bounds {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl Prop2Bounds {
    pub fn lower_f64(&self) -> f64 {
        rational_to_f64(&self.lower)
    }

    pub fn upper_f64(&self) -> f64 {
        rational_to_f64(&self.upper)
    }

    /// Exact check `lower <= excess <= upper`.
    pub fn contains(&self, excess: &BigRational) -> bool {
        &self.lower <= excess && excess <= &self.upper
    }
}

pub fn prop2_bounds(q: u64, ell: u64, t: u64) -> Result<Prop2Bounds> {
    check_q_int(q)?;
    check_interval(ell)?;
    let qb = BigInt::from(q);
    let q2 = &qb * &qb;
    let den_base: BigInt = &q2 + BigInt::one();
    let e = 2 * t as u32;
    let eta_pow = BigRational::new(Pow::pow(&qb, e), Pow::pow(&den_base, e));
    let central = BigRational::from_integer(BigInt::from(binomial(2 * t as i64, t as i64)));
    let one_minus = BigRational::one() - BigRational::new(BigInt::one(), q2.clone());
    let lower = one_minus * central * eta_pow / BigRational::from_integer(BigInt::from(t + 1));
    let two_q: BigInt = &qb * BigInt::from(2u8);
    let upper = BigRational::new(Pow::pow(&two_q, e), Pow::pow(&den_base, e));
    Ok(Prop2Bounds { lower, upper })
}

/// Floating bounds for real `q >= 1`, as `(lower, upper)`.
pub fn prop2_bounds_f64(q: f64, ell: u64, t: u64) -> Result<(f64, f64)> {
    check_q_real(q)?;
    check_interval(ell)?;
    let le = ln_eta(q);
    let tf = t as f64;
    let central = ln_big(&binomial(2 * t as i64, t as i64));
    let lower = (1.0 - 1.0 / (q * q)) / (tf + 1.0) * (central + 2.0 * tf * le).exp();
    let upper = (2.0 * tf * ((2.0 * q).ln() - (q * q + 1.0).ln())).exp();
    Ok((lower, upper))
}

/// Both sides of the late-merge identity
/// `sum_{z >= T + l/2} N(z;l) eta^{2z-l} = eta^{2T} sum_r J(r;T;l) q^{-r}`,
/// the left truncated at `z <= T + l/2 + extra`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIdentity {
    pub merged_tail: f64,
    pub separated_sum: f64,
}

pub fn tail_identity(q: f64, ell: u64, t: u64, extra: u64) -> Result<TailIdentity> {
    check_q_real(q)?;
    let half = check_interval(ell)?;
    let le = ln_eta(q);
    let start = t + half;
    let nz = n_z_series(start + extra, ell)?;
    let merged_tail = nz
        .iter()
        .enumerate()
        .skip(start as usize)
        .filter(|(_, c)| !c.is_zero())
        .map(|(z, c)| (ln_big(c) + (2 * z as u64 - ell) as f64 * le).exp())
        .sum();
    let separated_sum = separation_counts(t, ell)?
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.0.is_zero())
        .map(|(h, c)| (c.ln() + 2.0 * t as f64 * le - 2.0 * h as f64 * q.ln()).exp())
        .sum();
    Ok(TailIdentity { merged_tail, separated_sum })
}
