//! Does a subsystem remember which gates prepared it?
//!
//! Two circuits that differ in a single brick (`U -> V U`) are run on the same
//! gate realization, and the fidelity between the two reduced states of an
//! interval is averaged over realizations. Sites alternate between dimension
//! `q` (even sites) and `Q` (odd sites).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::qudit_sim::{reduce, region_purity, Boundary, Circuit, CircuitGeometry, IntervalSpec, StateVector};
use crate::rng_linalg::{sample_haar_unitary, RngStream, UnitaryMatrix};
use crate::{EnsembleEstimate, Error, Execution, Result, C64};

/// Where a brick sits relative to the interval's entanglement wedge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Inside,
    Adjacent,
    Outside,
}

/// Lightcone classification of bricks for an interval at final depth `T`:
/// a brick at layer `t` is inside when both of its sites lie in the interval
/// shrunk by `T - t` sites at each end, adjacent when exactly one does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeRule {
    pub interval: IntervalSpec,
    pub depth: usize,
}

impl WedgeRule {
    pub fn new(interval: IntervalSpec, depth: usize) -> Self {
        WedgeRule { interval, depth }
    }

    fn in_shrunk(&self, geometry: &CircuitGeometry, site: usize, shrink: usize) -> bool {
        let l = geometry.sites();
        let offset = (site + l - self.interval.start % l) % l;
        offset >= shrink && offset + shrink < self.interval.len
    }

    pub fn classify(&self, geometry: &CircuitGeometry, layer: usize, sites: (usize, usize)) -> Result<Placement> {
        if layer == 0 || layer > self.depth {
            return Err(Error::arg(format!("layer {layer} outside 1..={}", self.depth)));
        }
        let shrink = self.depth - layer;
        let hits = [sites.0, sites.1].iter().filter(|&&s| self.in_shrunk(geometry, s, shrink)).count();
        Ok(match hits {
            2 => Placement::Inside,
            1 => Placement::Adjacent,
            _ => Placement::Outside,
        })
    }
}

/// A modified brick `U -> V U` at layer `layer` on bond `bond`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub layer: usize,
    pub bond: usize,
    pub v: UnitaryMatrix,
}

impl Perturbation {
    pub fn new(layer: usize, bond: usize, v: UnitaryMatrix) -> Self {
        Perturbation { layer, bond, v }
    }

    /// Sites of the brick, checking that layer `layer` carries a gate there.
    pub fn sites(&self, geometry: &CircuitGeometry) -> Result<(usize, usize)> {
        let pair = geometry.bond_sites(self.bond)?;
        if self.layer == 0 || !geometry.layer_bonds(self.layer).contains(&pair) {
            return Err(Error::arg(format!("layer {} has no brick on bond {}", self.layer, self.bond)));
        }
        Ok(pair)
    }

    pub fn placement(&self, geometry: &CircuitGeometry, interval: &IntervalSpec, depth: usize) -> Result<Placement> {
        WedgeRule::new(*interval, depth).classify(geometry, self.layer, self.sites(geometry)?)
    }
}

/// Ring of `sites` qudits alternating `q, Q, q, Q, ...`.
pub fn alternating_ring(q: usize, big_q: usize, sites: usize) -> Result<CircuitGeometry> {
    CircuitGeometry::alternating(q, big_q, sites, Boundary::Ring)
}

fn is_identity(v: &UnitaryMatrix) -> bool {
    *v == UnitaryMatrix::identity(v.dim())
}

/// Fidelity between the interval states of one circuit with and without the
/// perturbation.
pub fn perturbed_fidelity(circuit: &Circuit, interval: &IntervalSpec, perturbation: &Perturbation) -> Result<f64> {
    let geometry = circuit.geometry();
    let depth = circuit.depth();
    if perturbation.layer > depth {
        return Err(Error::arg(format!("perturbation layer {} exceeds depth {depth}", perturbation.layer)));
    }
    let (a, b) = perturbation.sites(geometry)?;
    let dims = geometry.site_dims();
    if perturbation.v.dim() != dims[a] * dims[b] {
        return Err(Error::DimensionMismatch { expected: dims[a] * dims[b], got: perturbation.v.dim() });
    }
    let t = perturbation.layer;
    let mut rho = StateVector::zero(geometry)?;
    circuit.apply_layers(&mut rho, 1, t - 1)?;
    let mut sigma = rho.clone();
    for brick in circuit.layer(t) {
        rho.apply_gate(brick.a, brick.b, &brick.gate)?;
        sigma.apply_gate(brick.a, brick.b, &brick.gate)?;
        if (brick.a, brick.b) == (a, b) && !is_identity(&perturbation.v) {
            sigma.apply_gate(a, b, &perturbation.v)?;
        }
    }
    circuit.apply_layers(&mut rho, t + 1, depth)?;
    circuit.apply_layers(&mut sigma, t + 1, depth)?;
    let sites = interval.sites(geometry);
    reduce(&rho, &sites)?.fidelity(&reduce(&sigma, &sites)?)
}

/// Per-trial fidelities of the brickwork memory experiment; trial `i` samples
/// its gates from `rng.child(i)` and both branches share them.
pub fn memory_samples(
    geometry: &CircuitGeometry,
    interval: &IntervalSpec,
    depth: usize,
    perturbation: &Perturbation,
    trials: usize,
    rng: &RngStream,
    exec: Execution,
) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::arg("trials must be positive"));
    }
    if perturbation.layer > depth {
        return Err(Error::arg(format!("perturbation layer {} exceeds depth {depth}", perturbation.layer)));
    }
    interval.validate(geometry, depth)?;
    perturbation.sites(geometry)?;
    geometry.check_memory()?;
    exec.try_map_trials(trials, |i| {
        let circuit = Circuit::sample(geometry, depth, &rng.child(i as u64))?;
        perturbed_fidelity(&circuit, interval, perturbation)
    })
}

/// Mean fidelity `F(rho_l, sigma_l)` over circuit realizations.
pub fn memory_experiment(
    geometry: &CircuitGeometry,
    interval: &IntervalSpec,
    depth: usize,
    perturbation: &Perturbation,
    trials: usize,
    rng: &RngStream,
    exec: Execution,
) -> Result<EnsembleEstimate> {
    let xs = memory_samples(geometry, interval, depth, perturbation, trials, rng, exec)?;
    Ok(EnsembleEstimate::from_samples(&xs, rng.seed))
}

/// Large-dimension prediction for the brickwork experiment: 1 in the late
/// phase or outside the wedge, `|Tr V| / (q Q)` inside the wedge early on.
pub fn memory_prediction(q: usize, big_q: usize, ell: usize, depth: usize, placement: Placement, v: &UnitaryMatrix) -> Option<f64> {
    let late = (2 * depth) as f64 * (q as f64).ln() > (ell as f64 / 2.0) * ((q * big_q) as f64).ln();
    match placement {
        _ if late => Some(1.0),
        Placement::Outside => Some(1.0),
        Placement::Inside => Some(v.trace().norm() / (q * big_q) as f64),
        Placement::Adjacent => None,
    }
}

/// Depth at which the two purity branches `q^{-2T}` and `(qQ)^{-l/2}` cross:
/// `l (ln q + ln Q) / (4 ln q)`.
pub fn phase_boundary(q: f64, big_q: f64, ell: f64) -> Result<f64> {
    if q < 2.0 || big_q < 2.0 {
        return Err(Error::domain("q and Q must be >= 2"));
    }
    Ok(ell * (q.ln() + big_q.ln()) / (4.0 * q.ln()))
}

/// Monte Carlo purity of an interval next to the two-branch prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenyiPhaseReport {
    pub purity: EnsembleEstimate,
    /// `q^{-2T}`.
    pub early_branch: f64,
    /// `(qQ)^{-l/2}`.
    pub late_branch: f64,
    /// `max` of the branches.
    pub predicted: f64,
    /// `|ln(mean / predicted)| <= ln(slack)`.
    pub within_slack: bool,
}

/// Multiplicative slack allowed between measured and predicted purity.
pub const RENYI_SLACK: f64 = 2.0;

pub fn renyi_phase_check(
    geometry: &CircuitGeometry,
    interval: &IntervalSpec,
    depth: usize,
    trials: usize,
    rng: &RngStream,
    exec: Execution,
) -> Result<RenyiPhaseReport> {
    if trials == 0 {
        return Err(Error::arg("trials must be positive"));
    }
    interval.validate(geometry, depth)?;
    let sites = interval.sites(geometry);
    let dims = geometry.site_dims();
    let (q, big_q) = (dims[0] as f64, dims[1] as f64);
    let xs = exec.try_map_trials(trials, |i| {
        let state = crate::qudit_sim::run_brickwork(geometry, depth, &rng.child(i as u64))?;
        region_purity(&state, &sites)
    })?;
    let purity = EnsembleEstimate::from_samples(&xs, rng.seed);
    let early_branch = q.powf(-2.0 * depth as f64);
    let late_branch = (q * big_q).powf(-(interval.len as f64) / 2.0);
    let predicted = early_branch.max(late_branch);
    let within_slack = (purity.mean / predicted).ln().abs() <= RENYI_SLACK.ln();
    Ok(RenyiPhaseReport { purity, early_branch, late_branch, predicted, within_slack })
}

/// `tr_Q V` for `V` on `C^q (x) C^Q` (the `q` factor first).
pub fn partial_trace_big(v: &UnitaryMatrix, q: usize, big_q: usize) -> Result<DMatrix<C64>> {
    if v.dim() != q * big_q {
        return Err(Error::DimensionMismatch { expected: q * big_q, got: v.dim() });
    }
    let m = v.matrix();
    Ok(DMatrix::from_fn(q, q, |i, j| (0..big_q).map(|k| m[(i * big_q + k, j * big_q + k)]).sum()))
}

/// Warmup predictions: `tr_q sqrt(tr_Q(V) tr_Q(V)^dag) / (qQ)` for `q << Q`,
/// and 1 for `q >> Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarmupPrediction {
    pub small_q: f64,
    pub large_q: f64,
}

pub fn warmup_prediction(q: usize, big_q: usize, v: &UnitaryMatrix) -> Result<WarmupPrediction> {
    let m = partial_trace_big(v, q, big_q)?;
    let trace_norm: f64 = m.singular_values().iter().sum();
    Ok(WarmupPrediction { small_q: trace_norm / (q * big_q) as f64, large_q: 1.0 })
}

/// `F(tr_q[U|0><0|U^dag], tr_q[V U|0><0|U^dag V^dag])` averaged over Haar `U`
/// on `C^q (x) C^Q`.
pub fn warmup_fidelity_mc(q: usize, big_q: usize, v: &UnitaryMatrix, trials: usize, rng: &RngStream, exec: Execution) -> Result<EnsembleEstimate> {
    let d = q * big_q;
    if v.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: v.dim() });
    }
    if trials == 0 {
        return Err(Error::arg("trials must be positive"));
    }
    let identity = is_identity(v);
    let xs = exec.try_map_trials(trials, |i| {
        let u = sample_haar_unitary(d, &rng.child(i as u64))?;
        let psi: Vec<C64> = u.matrix().column(0).iter().copied().collect();
        let phi: Vec<C64> = if identity { psi.clone() } else { (v.matrix() * u.matrix().column(0)).iter().copied().collect() };
        let rho = reduce(&StateVector::from_amplitudes(vec![q, big_q], psi)?, &[1])?;
        let sigma = reduce(&StateVector::from_amplitudes(vec![q, big_q], phi)?, &[1])?;
        rho.fidelity(&sigma)
    })?;
    Ok(EnsembleEstimate::from_samples(&xs, rng.seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_classification() {
        let g = alternating_ring(2, 6, 8).unwrap();
        let iv = IntervalSpec::new(1, 4);
        let rule = WedgeRule::new(iv, 1);
        assert_eq!(rule.classify(&g, 1, (2, 3)).unwrap(), Placement::Inside);
        assert_eq!(rule.classify(&g, 1, (0, 1)).unwrap(), Placement::Adjacent);
        assert_eq!(rule.classify(&g, 1, (4, 5)).unwrap(), Placement::Adjacent);
        assert_eq!(rule.classify(&g, 1, (6, 7)).unwrap(), Placement::Outside);
        let deep = WedgeRule::new(IntervalSpec::new(1, 6), 3);
        let g10 = alternating_ring(2, 6, 10).unwrap();
        // Shrunk by 2 at layer 1: offsets 2..4 are sites 3, 4.
        assert_eq!(deep.classify(&g10, 1, (2, 3)).unwrap(), Placement::Adjacent);
        assert_eq!(deep.classify(&g10, 2, (3, 4)).unwrap(), Placement::Inside);
        assert_eq!(deep.classify(&g10, 1, (0, 1)).unwrap(), Placement::Outside);
        assert!(deep.classify(&g10, 4, (3, 4)).is_err());
    }

    #[test]
    fn wedge_wraps_around_ring() {
        let g = alternating_ring(2, 2, 8).unwrap();
        let rule = WedgeRule::new(IntervalSpec::new(7, 4), 1);
        assert_eq!(rule.classify(&g, 1, (0, 1)).unwrap(), Placement::Inside);
        assert_eq!(rule.classify(&g, 1, (6, 7)).unwrap(), Placement::Adjacent);
    }

    #[test]
    fn identity_perturbation_is_invisible() {
        let g = alternating_ring(2, 3, 6).unwrap();
        let iv = IntervalSpec::new(2, 2);
        let p = Perturbation::new(1, 2, UnitaryMatrix::identity(6));
        let xs = memory_samples(&g, &iv, 2, &p, 10, &RngStream::new(4), Execution::Sequential).unwrap();
        assert!(xs.iter().all(|&f| f == 1.0));
    }

    #[test]
    fn perturbation_validation() {
        let g = alternating_ring(2, 3, 6).unwrap();
        let iv = IntervalSpec::new(1, 2);
        let p = Perturbation::new(3, 2, UnitaryMatrix::identity(6));
        assert!(memory_samples(&g, &iv, 2, &p, 1, &RngStream::new(1), Execution::Sequential).is_err());
        let wrong_bond = Perturbation::new(1, 1, UnitaryMatrix::identity(6));
        assert!(wrong_bond.sites(&g).is_err());
        let wrong_dim = Perturbation::new(1, 2, UnitaryMatrix::identity(4));
        assert!(memory_samples(&g, &iv, 1, &wrong_dim, 1, &RngStream::new(1), Execution::Sequential).is_err());
    }

    #[test]
    fn boundary_examples() {
        assert!((phase_boundary(3.0, 3.0, 6.0).unwrap() - 3.0).abs() < 1e-12);
        assert!((phase_boundary(2.0, 8.0, 4.0).unwrap() - 4.0).abs() < 1e-12);
        let mut prev = 0.0;
        for big_q in 2..50 {
            let t = phase_boundary(2.0, big_q as f64, 4.0).unwrap();
            assert!(t > prev);
            prev = t;
        }
    }

    #[test]
    fn warmup_prediction_cases() {
        let w = UnitaryMatrix::clock(2).kron(&UnitaryMatrix::identity(16));
        assert!((warmup_prediction(2, 16, &w).unwrap().small_q - 1.0).abs() < 1e-12);
        let traceless = UnitaryMatrix::identity(2).kron(&UnitaryMatrix::clock(16));
        assert!(warmup_prediction(2, 16, &traceless).unwrap().small_q < 1e-12);
        let e = warmup_fidelity_mc(2, 4, &UnitaryMatrix::identity(8), 20, &RngStream::new(1), Execution::Sequential).unwrap();
        assert_eq!((e.mean, e.stderr), (1.0, 0.0));
    }

    #[test]
    fn renyi_depth_zero() {
        let g = alternating_ring(2, 3, 6).unwrap();
        let r = renyi_phase_check(&g, &IntervalSpec::new(0, 2), 0, 3, &RngStream::new(1), Execution::Sequential).unwrap();
        assert_eq!(r.purity.mean, 1.0);
        assert!(r.within_slack);
    }
}
