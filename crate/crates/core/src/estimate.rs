use serde::{Deserialize, Serialize};

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by `sqrt(trials)`.
    pub stderr: f64,
    pub trials: usize,
    pub seed: u64,
}

impl EnsembleEstimate {
    /// Summarises per-trial samples. Uses the unbiased (n-1) variance; a single
    /// sample reports zero standard error.
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        if n == 0 {
            return EnsembleEstimate { mean: f64::NAN, stderr: f64::NAN, trials: 0, seed };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        EnsembleEstimate { mean, stderr: (var / n as f64).sqrt(), trials: n, seed }
    }

    /// Sample standard deviation implied by the stored standard error.
    pub fn std_dev(&self) -> f64 {
        self.stderr * (self.trials as f64).sqrt()
    }

    /// Sample variance implied by the stored standard error.
    pub fn variance(&self) -> f64 {
        self.std_dev().powi(2)
    }

    /// `|mean - target| <= k * stderr`, with a tiny absolute floor so that
    /// deterministic (zero-variance) estimates compare sanely.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr + 1e-12
    }

    /// Combined standard error of the difference of two independent estimates.
    pub fn joint_stderr(&self, other: &EnsembleEstimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stderr_matches_definition() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let e = EnsembleEstimate::from_samples(&xs, 0);
        assert_eq!(e.mean, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((e.stderr - sd / 2.0).abs() < 1e-15);
        assert!((e.std_dev() - sd).abs() < 1e-14);
    }

    #[test]
    fn constant_samples_have_zero_error() {
        let e = EnsembleEstimate::from_samples(&[1.0; 10], 3);
        assert_eq!(e.stderr, 0.0);
        assert!(e.within(1.0, 4.0));
    }
}
