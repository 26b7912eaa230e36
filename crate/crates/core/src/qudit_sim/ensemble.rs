use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::density::{reduce, region_entropy, region_purity, DensityOperator, EntropyKind};
use super::{run_brickwork, CircuitGeometry, IntervalSpec, StateVector};
use crate::rng_linalg::RngStream;
use crate::{EnsembleEstimate, Error, Execution, Result};

/// Per-realization quantity averaged by [`ensemble_average`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "metric")]
pub enum Metric {
    Purity,
    Renyi2,
    VonNeumann,
    /// `(1/2) || rho - 1/dim ||_1`.
    TraceDistanceToMaximallyMixed,
    /// `I(A:B)` with `A` the first `cut` sites of the interval, `B` the rest.
    MutualInformation { cut: usize, kind: EntropyKind },
}

/// Region entropies of one realization, keyed by site list and kind, so that
/// metrics evaluated on the same state share their partial traces.
#[derive(Debug, Default)]
pub struct EntropyCache(HashMap<(Vec<usize>, EntropyKind), f64>);

impl EntropyCache {
    pub fn entropy(&mut self, state: &StateVector, sites: &[usize], kind: EntropyKind) -> Result<f64> {
        let mut key = sites.to_vec();
        key.sort_unstable();
        if let Some(&s) = self.0.get(&(key.clone(), kind)) {
            return Ok(s);
        }
        let s = region_entropy(state, sites, kind)?;
        self.0.insert((key, kind), s);
        Ok(s)
    }
}

impl Metric {
    /// Evaluates the metric on one realization.
    pub fn evaluate(&self, state: &StateVector, geometry: &CircuitGeometry, interval: &IntervalSpec) -> Result<f64> {
        self.evaluate_cached(state, geometry, interval, &mut EntropyCache::default())
    }

    pub fn evaluate_cached(
        &self,
        state: &StateVector,
        geometry: &CircuitGeometry,
        interval: &IntervalSpec,
        cache: &mut EntropyCache,
    ) -> Result<f64> {
        let sites = interval.sites(geometry);
        match *self {
            Metric::Purity => region_purity(state, &sites),
            Metric::Renyi2 => cache.entropy(state, &sites, EntropyKind::Renyi2),
            Metric::VonNeumann => cache.entropy(state, &sites, EntropyKind::VonNeumann),
            Metric::TraceDistanceToMaximallyMixed => {
                let rho = reduce(state, &sites)?;
                rho.trace_distance(&DensityOperator::maximally_mixed(rho.dims().to_vec()))
            }
            Metric::MutualInformation { cut, kind } => {
                let (a, b) = interval.split(geometry, cut)?;
                if a.iter().any(|s| b.contains(s)) {
                    return Err(Error::arg("mutual information needs disjoint regions"));
                }
                let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
                Ok(cache.entropy(state, &a, kind)? + cache.entropy(state, &b, kind)? - cache.entropy(state, &ab, kind)?)
            }
        }
    }
}

/// Per-trial values of each metric; `out[m][i]` is metric `m` on trial `i`.
/// Every metric of a trial is evaluated on the same circuit realization,
/// drawn from `rng.child(i)`.
pub fn ensemble_samples(
    metrics: &[Metric],
    geometry: &CircuitGeometry,
    interval: &IntervalSpec,
    depth: usize,
    trials: usize,
    rng: &RngStream,
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    if trials == 0 {
        return Err(Error::arg("trials must be positive"));
    }
    interval.validate(geometry, depth)?;
    geometry.check_memory()?;
    let per_trial = exec.try_map_trials(trials, |i| {
        let state = run_brickwork(geometry, depth, &rng.child(i as u64))?;
        let mut cache = EntropyCache::default();
        metrics.iter().map(|m| m.evaluate_cached(&state, geometry, interval, &mut cache)).collect::<Result<Vec<f64>>>()
    })?;
    Ok((0..metrics.len()).map(|m| per_trial.iter().map(|row| row[m]).collect()).collect())
}

/// Mean and standard error of `metric` over independent circuits.
pub fn ensemble_average(
    metric: Metric,
    geometry: &CircuitGeometry,
    interval: &IntervalSpec,
    depth: usize,
    trials: usize,
    rng: &RngStream,
    exec: Execution,
) -> Result<EnsembleEstimate> {
    let samples = ensemble_samples(&[metric], geometry, interval, depth, trials, rng, exec)?;
    Ok(EnsembleEstimate::from_samples(&samples[0], rng.seed))
}

/// Estimates of several metrics sharing the same circuit realizations.
pub fn ensemble_profile(
    metrics: &[Metric],
    geometry: &CircuitGeometry,
    interval: &IntervalSpec,
    depth: usize,
    trials: usize,
    rng: &RngStream,
    exec: Execution,
) -> Result<Vec<EnsembleEstimate>> {
    let samples = ensemble_samples(metrics, geometry, interval, depth, trials, rng, exec)?;
    Ok(samples.iter().map(|s| EnsembleEstimate::from_samples(s, rng.seed)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit_sim::Boundary;

    #[test]
    fn depth_zero_purity_is_exact() {
        let g = CircuitGeometry::uniform(2, 6, Boundary::Ring).unwrap();
        let iv = IntervalSpec::new(0, 2);
        let e = ensemble_average(Metric::Purity, &g, &iv, 0, 5, &RngStream::new(1), Execution::Sequential).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn zero_trials_rejected() {
        let g = CircuitGeometry::uniform(2, 6, Boundary::Ring).unwrap();
        let iv = IntervalSpec::new(1, 2);
        assert!(ensemble_average(Metric::Purity, &g, &iv, 1, 0, &RngStream::new(1), Execution::Sequential).is_err());
    }

    #[test]
    fn schedule_independent() {
        let g = CircuitGeometry::uniform(2, 8, Boundary::Ring).unwrap();
        let iv = IntervalSpec::new(1, 4);
        let rng = RngStream::new(17);
        let a = ensemble_samples(&[Metric::Renyi2], &g, &iv, 3, 16, &rng, Execution::Sequential).unwrap();
        let b = ensemble_samples(&[Metric::Renyi2], &g, &iv, 3, 16, &rng, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mi_at_zero_cut_vanishes() {
        let g = CircuitGeometry::uniform(2, 8, Boundary::Ring).unwrap();
        let iv = IntervalSpec::new(1, 4);
        let m = Metric::MutualInformation { cut: 0, kind: EntropyKind::VonNeumann };
        let s = ensemble_samples(&[m], &g, &iv, 1, 4, &RngStream::new(2), Execution::Sequential).unwrap();
        assert!(s[0].iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn shared_cache_matches_direct_evaluation() {
        use super::super::density::mutual_information;
        let g = CircuitGeometry::uniform(3, 6, Boundary::Ring).unwrap();
        let iv = IntervalSpec::new(1, 4);
        let state = run_brickwork(&g, 3, &RngStream::new(9)).unwrap();
        let mut cache = EntropyCache::default();
        for kind in [EntropyKind::Renyi2, EntropyKind::VonNeumann] {
            for cut in 0..=4 {
                let cached = Metric::MutualInformation { cut, kind }.evaluate_cached(&state, &g, &iv, &mut cache).unwrap();
                let (a, b) = iv.split(&g, cut).unwrap();
                let direct = mutual_information(&state, &a, &b, kind).unwrap();
                assert!((cached - direct).abs() < 1e-12, "cut {cut}");
            }
        }
    }
}
