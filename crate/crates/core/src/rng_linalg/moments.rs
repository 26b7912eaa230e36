use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{sample_haar_isometry, RngStream};
use crate::{EnsembleEstimate, Error, Execution, Result};

/// `E[((1/m) sum_{i<2m} x_i^2)^k] = prod_{j<k} (1 + j/m)` for `x_i ~ N(0, 1/2)`,
/// as an exact rational.
pub fn chi2_moment_exact(m: u64, k: u64) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::arg("chi-square moment needs m >= 1"));
    }
    let m_big = BigInt::from(m);
    let mut acc = BigRational::from_integer(1.into());
    for j in 0..k {
        acc *= BigRational::new(&m_big + BigInt::from(j), m_big.clone());
    }
    Ok(acc)
}

/// Monte Carlo estimate of the same moment from `samples` Gaussian draws.
pub fn chi2_moment_mc(m: usize, k: i32, samples: usize, rng: &RngStream, exec: Execution) -> Result<EnsembleEstimate> {
    if m == 0 {
        return Err(Error::arg("chi-square moment needs m >= 1"));
    }
    if samples == 0 {
        return Err(Error::arg("need at least one sample"));
    }
    let xs = exec.map_trials(samples, |i| {
        let mut g = rng.child(i as u64).rng();
        let s: f64 = (0..2 * m)
            .map(|_| {
                let x: f64 = g.sample(StandardNormal);
                0.5 * x * x
            })
            .sum();
        (s / m as f64).powi(k)
    });
    Ok(EnsembleEstimate::from_samples(&xs, rng.seed))
}

fn check_overlap_dims(d: usize, p: usize, q: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension("dimension must be >= 1".into()));
    }
    if p == 0 || p > d {
        return Err(Error::InvalidRank { rank: p, dim: d });
    }
    if q == 0 || q > d {
        return Err(Error::InvalidRank { rank: q, dim: d });
    }
    Ok(())
}

/// Samples of `Z = (d/pq) Tr(U P U^dag Q)` over Haar `U`, with `P`, `Q` the
/// coordinate projectors of rank `p`, `q`. Only the first `p` columns of `U`
/// enter, so each trial draws a Haar isometry instead of a full unitary.
pub fn overlap_samples(d: usize, p: usize, q: usize, trials: usize, rng: &RngStream, exec: Execution) -> Result<Vec<f64>> {
    check_overlap_dims(d, p, q)?;
    let scale = d as f64 / (p * q) as f64;
    exec.try_map_trials(trials, |i| {
        let mut g = rng.child(i as u64).rng();
        let v = sample_haar_isometry(d, p, &mut g)?;
        let tr: f64 = v.rows(0, q).iter().map(|z| z.norm_sqr()).sum();
        Ok(scale * tr)
    })
}

/// Monte Carlo estimate of `E[Z^k]` for the normalised projector overlap `Z`.
pub fn projector_overlap_moment_mc(
    d: usize,
    p: usize,
    q: usize,
    k: i32,
    trials: usize,
    rng: &RngStream,
    exec: Execution,
) -> Result<EnsembleEstimate> {
    if k < 1 {
        return Err(Error::arg("moment order k must be >= 1"));
    }
    if trials == 0 {
        return Err(Error::arg("need at least one trial"));
    }
    let zs = overlap_samples(d, p, q, trials, rng, exec)?;
    let pow: Vec<f64> = zs.iter().map(|z| z.powi(k)).collect();
    Ok(EnsembleEstimate::from_samples(&pow, rng.seed))
}

/// Tail bound `exp(-pq f(z))` with `f(z) = z - ln(1+z)`, valid for the upper
/// tail `Pr[Z >= 1+z]` when `z > 0` and the lower tail `Pr[Z <= 1+z]` when
/// `-1 < z < 0`.
pub fn tail_bound(z: f64, p: usize, q: usize) -> Result<f64> {
    if z.is_nan() || z <= -1.0 {
        return Err(Error::domain(format!("tail bound needs z > -1, got {z}")));
    }
    if p == 0 || q == 0 {
        return Err(Error::arg("ranks must be >= 1"));
    }
    let f = z - z.ln_1p();
    Ok((-((p * q) as f64) * f).exp())
}

/// Empirical tail frequency next to its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheck {
    pub z: f64,
    pub frequency: f64,
    /// Binomial standard error `sqrt(f(1-f)/n)`.
    pub stderr: f64,
    pub bound: f64,
    pub trials: usize,
}

impl TailCheck {
    /// Frequency does not exceed the bound by more than `k` binomial standard errors.
    pub fn holds(&self, k: f64) -> bool {
        self.frequency <= self.bound + k * self.stderr
    }
}

/// Counts `Z >= 1+z` (for `z > 0`) or `Z <= 1+z` (for `z < 0`) over precomputed samples.
pub fn tail_exceedance(samples: &[f64], z: f64, p: usize, q: usize) -> Result<TailCheck> {
    let bound = tail_bound(z, p, q)?;
    let n = samples.len();
    if n == 0 {
        return Err(Error::arg("no samples"));
    }
    let hits = if z >= 0.0 {
        samples.iter().filter(|&&x| x >= 1.0 + z).count()
    } else {
        samples.iter().filter(|&&x| x <= 1.0 + z).count()
    };
    let f = hits as f64 / n as f64;
    Ok(TailCheck { z, frequency: f, stderr: (f * (1.0 - f) / n as f64).sqrt(), bound, trials: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_moment_examples() {
        assert_eq!(chi2_moment_exact(5, 0).unwrap(), ratio(1, 1));
        assert_eq!(chi2_moment_exact(1, 2).unwrap(), ratio(2, 1));
        assert_eq!(chi2_moment_exact(4, 3).unwrap(), ratio(15, 8));
        assert_eq!(chi2_moment_exact(64, 2).unwrap(), ratio(65, 64));
        assert!(chi2_moment_exact(0, 1).is_err());
        for m in 1..50 {
            assert_eq!(chi2_moment_exact(m, 1).unwrap(), ratio(1, 1));
        }
    }

    #[test]
    fn monte_carlo_matches_exact_moment() {
        let est = chi2_moment_mc(4, 3, 200_000, &RngStream::new(3), Execution::Parallel).unwrap();
        let exact = chi2_moment_exact(4, 3).unwrap().to_f64().unwrap();
        assert!(est.within(exact, 4.0), "{est:?} vs {exact}");
    }

    #[test]
    fn first_overlap_moment_is_one() {
        for (d, p, q) in [(2, 1, 1), (8, 3, 2), (16, 4, 4)] {
            let e = projector_overlap_moment_mc(d, p, q, 1, 20_000, &RngStream::new(d as u64), Execution::Parallel)
                .unwrap();
            assert!(e.within(1.0, 4.0), "d={d} {e:?}");
        }
    }

    #[test]
    fn second_moment_respects_gaussian_majorant() {
        let e = projector_overlap_moment_mc(16, 8, 8, 2, 10_000, &RngStream::new(4), Execution::Parallel).unwrap();
        let bound = chi2_moment_exact(64, 2).unwrap().to_f64().unwrap();
        assert!(e.mean <= bound + 4.0 * e.stderr);
    }

    #[test]
    fn full_rank_overlap_is_deterministic() {
        let zs = overlap_samples(5, 5, 2, 10, &RngStream::new(1), Execution::Sequential).unwrap();
        assert!(zs.iter().all(|z| (z - 1.0).abs() < 1e-12));
    }

    #[test]
    fn tail_bound_values() {
        assert_eq!(tail_bound(0.0, 3, 4).unwrap(), 1.0);
        let v = tail_bound(1.0, 1, 1).unwrap();
        assert!((v - (-(1.0 - 2f64.ln())).exp()).abs() < 1e-15);
        assert!((v - 0.7358).abs() < 1e-4);
        assert!(tail_bound(-1.0, 1, 1).is_err());
        assert!(tail_bound(-0.5, 2, 2).unwrap() < 1.0);
    }

    #[test]
    fn tail_frequency_below_bound() {
        let zs = overlap_samples(32, 4, 4, 20_000, &RngStream::new(8), Execution::Parallel).unwrap();
        for z in [-0.5, 0.25, 0.5, 1.0] {
            let c = tail_exceedance(&zs, z, 4, 4).unwrap();
            assert!(c.holds(4.0), "{c:?}");
        }
    }
}
