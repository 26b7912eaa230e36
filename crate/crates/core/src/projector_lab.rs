//! Fidelity statistics of pairs of random projector states `sigma = P / r`.
//!
//! For rank-`r` projectors `P1 = V1 V1^dag` and `P2 = V2 V2^dag` the nonzero
//! eigenvalues of `P1 P2 P1` are those of the `r x r` matrix `G G^dag` with
//! `G = V1^dag V2`, so fidelities cost `O(d r^2)` rather than a `d x d`
//! diagonalization. In the limit `r, d -> inf` at fixed `w = r/d < 1/2` the
//! eigenvalues follow the density
//! `rho(l) = sqrt(a - l) / (2 pi w sqrt(l) (1 - l))` on `[0, a]`, `a = 4w(1-w)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::rng_linalg::{sample_projector, Projector, RngStream};
use crate::{Error, Execution, Result, C64};

/// Fidelity of one pair together with the spectrum it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySample {
    pub d: usize,
    pub r: usize,
    pub fidelity: f64,
    /// The `r` largest eigenvalues of `P1 P2 P1`, ascending.
    pub eigenvalues: Vec<f64>,
}

/// `F(P1/r, P2/r) = (1/r) sum_i sqrt(l_i)`.
pub fn fidelity_sample(p1: &Projector, p2: &Projector) -> Result<FidelitySample> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { expected: p1.dim(), got: p2.dim() });
    }
    if p1.rank() != p2.rank() {
        return Err(Error::arg("projectors must have equal rank"));
    }
    let g: DMatrix<C64> = p1.basis().adjoint() * p2.basis();
    let gram = &g * g.adjoint();
    let mut eigenvalues: Vec<f64> = gram.symmetric_eigenvalues().iter().map(|l| l.clamp(0.0, 1.0)).collect();
    eigenvalues.sort_by(f64::total_cmp);
    let r = p1.rank();
    let fidelity = eigenvalues.iter().map(|l| l.sqrt()).sum::<f64>() / r as f64;
    Ok(FidelitySample { d: p1.dim(), r, fidelity, eigenvalues })
}

/// Independent pairs of Haar projectors; pair `i` uses `rng.child(i)`.
pub fn sample_fidelities(d: usize, r: usize, pairs: usize, rng: &RngStream, exec: Execution) -> Result<Vec<FidelitySample>> {
    exec.try_map_trials(pairs, |i| {
        let s = rng.child(i as u64);
        let p1 = sample_projector(d, r, &s.child(0))?;
        let p2 = sample_projector(d, r, &s.child(1))?;
        fidelity_sample(&p1, &p2)
    })
}

fn check_w(w: f64) -> Result<()> {
    if !(w > 0.0 && w <= 0.5) {
        return Err(Error::domain(format!("w = r/d must lie in (0, 1/2], got {w}")));
    }
    Ok(())
}

/// `E F = (2/pi) (sqrt((1-w)/w) - ((1-2w)/w) arcsin(sqrt w))`.
pub fn fidelity_mean_analytic(w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(2.0 / PI * (((1.0 - w) / w).sqrt() - (1.0 - 2.0 * w) / w * w.sqrt().asin()))
}

/// Small-`w` behaviour of the mean: `(8 / 3 pi) sqrt w`.
pub fn fidelity_mean_asymptote(w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(8.0 / (3.0 * PI) * w.sqrt())
}

/// `Var F = 2 w (1-w) / (pi^2 r^2)`.
pub fn fidelity_variance_analytic(w: f64, r: usize) -> Result<f64> {
    check_w(w)?;
    if r == 0 {
        return Err(Error::InvalidRank { rank: 0, dim: 0 });
    }
    Ok(2.0 * w * (1.0 - w) / (PI * PI * (r * r) as f64))
}

/// The limiting eigenvalue density at `l` (zero outside `(0, a)`).
pub fn eigen_density(l: f64, w: f64) -> Result<f64> {
    check_open_w(w)?;
    let a = 4.0 * w * (1.0 - w);
    if l <= 0.0 || l >= a {
        return Ok(0.0);
    }
    Ok((a - l).sqrt() / (2.0 * PI * w * l.sqrt() * (1.0 - l)))
}

fn check_open_w(w: f64) -> Result<()> {
    if !(w > 0.0 && w < 0.5) {
        return Err(Error::domain(format!("w must lie in (0, 1/2), got {w}")));
    }
    Ok(())
}

/// Absolute accuracy demanded of [`eigen_density_moment`].
pub const QUADRATURE_TOL: f64 = 1e-12;

/// `int l^n rho(l) dl`. With `l = a sin^2 t` the integrand becomes
/// `(a / (pi w)) cos^2 t (a sin^2 t)^n / (1 - a sin^2 t)` on `[0, pi/2]`,
/// smooth at both ends.
pub fn eigen_density_moment(w: f64, n: f64) -> Result<f64> {
    check_open_w(w)?;
    if n < 0.0 {
        return Err(Error::domain(format!("moment order must be >= 0, got {n}")));
    }
    let a = 4.0 * w * (1.0 - w);
    let f = |t: f64| {
        let s2 = t.sin().powi(2);
        let l = a * s2;
        let ln = if n == 0.0 { 1.0 } else { l.powf(n) };
        a / (PI * w) * t.cos().powi(2) * ln / (1.0 - l)
    };
    let out = quadrature::integrate(f, 0.0, PI / 2.0, QUADRATURE_TOL);
    if !out.integral.is_finite() || out.error_estimate > 1e3 * QUADRATURE_TOL {
        return Err(Error::Numerical(format!(
            "quadrature did not converge (estimate {:e} after {} evaluations)",
            out.error_estimate, out.num_function_evaluations
        )));
    }
    Ok(out.integral)
}

/// Quadratic approximation to the large-deviation rate,
/// `ln Pr(F) ~ -r^2 pi^2 (F - E F)^2 / (4 w (1 - w))`. Higher orders in
/// `F - E F` are not included.
pub fn log_prob_fidelity(f: f64, w: f64, r: usize) -> Result<f64> {
    let mean = fidelity_mean_analytic(w)?;
    let r2 = (r * r) as f64;
    Ok(-r2 * PI * PI / (4.0 * w * (1.0 - w)) * (f - mean).powi(2))
}

/// Outcome of [`greedy_packing`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub d: usize,
    pub r: usize,
    pub eps: f64,
    pub count: usize,
    pub draws: usize,
    pub seed: u64,
    /// Largest pairwise fidelity in the final audit (0 for a single state).
    pub max_pairwise_fidelity: f64,
    /// Draw indices of the accepted states.
    pub accepted: Vec<usize>,
}

/// Draws `max_draws` projector states (draw `i` from `rng.child(i)`) and keeps
/// each one whose fidelity to every kept state is below `eps`. All kept pairs
/// are re-checked at the end.
pub fn greedy_packing(d: usize, r: usize, eps: f64, max_draws: usize, rng: &RngStream, exec: Execution) -> Result<PackingResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let mut kept: Vec<Projector> = Vec::new();
    let mut accepted = Vec::new();
    for i in 0..max_draws {
        let p = sample_projector(d, r, &rng.child(i as u64))?;
        let fids = exec.try_map_trials(kept.len(), |j| fidelity_sample(&kept[j], &p).map(|s| s.fidelity))?;
        if fids.iter().all(|&f| f < eps) {
            kept.push(p);
            accepted.push(i);
        }
    }
    let mut max_pairwise_fidelity: f64 = 0.0;
    for i in 0..kept.len() {
        for j in 0..i {
            let f = fidelity_sample(&kept[i], &kept[j])?.fidelity;
            if f >= eps {
                return Err(Error::Numerical(format!("audit failed: pair ({i}, {j}) has fidelity {f}")));
            }
            max_pairwise_fidelity = max_pairwise_fidelity.max(f);
        }
    }
    Ok(PackingResult { d, r, eps, count: kept.len(), draws: max_draws, seed: rng.seed, max_pairwise_fidelity, accepted })
}

/// `(||Q - P||_1, 2 Tr(Q (1 - P)))` for two projectors of equal rank.
pub fn displacement_sides(p: &Projector, q: &Projector) -> Result<(f64, f64)> {
    if p.dim() != q.dim() || p.rank() != q.rank() {
        return Err(Error::arg("projectors must share dimension and rank"));
    }
    let diff = q.matrix() - p.matrix();
    let lhs: f64 = diff.symmetric_eigenvalues().iter().map(|l| l.abs()).sum();
    let rhs = 2.0 * (q.rank() as f64 - p.overlap(q));
    Ok((lhs, rhs))
}

/// Summary of [`displacement_distance_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementReport {
    pub trials: usize,
    pub violations: usize,
    /// `min(lhs - rhs)` over the trials.
    pub min_slack: f64,
}

/// Tolerance used when counting violations of `||UPU^dag - P||_1 >= 2 Tr(UPU^dag (1 - P))`.
pub const DISPLACEMENT_TOL: f64 = 1e-8;

/// Checks `||U P U^dag - P||_1 >= 2 Tr(U P U^dag (1 - P))` for `P` the
/// coordinate projector of rank `r` and Haar `U`.
pub fn displacement_distance_check(d: usize, r: usize, trials: usize, rng: &RngStream, exec: Execution) -> Result<DisplacementReport> {
    let p = Projector::coordinate(d, r)?;
    let slacks = exec.try_map_trials(trials, |i| {
        let q = sample_projector(d, r, &rng.child(i as u64))?;
        let (lhs, rhs) = displacement_sides(&p, &q)?;
        Ok::<f64, Error>(lhs - rhs)
    })?;
    Ok(DisplacementReport {
        trials,
        violations: slacks.iter().filter(|&&s| s < -DISPLACEMENT_TOL).count(),
        min_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_closed_form() {
        assert!((fidelity_mean_analytic(0.5).unwrap() - 2.0 / PI).abs() < 1e-15);
        let m = fidelity_mean_analytic(0.01).unwrap();
        let a = fidelity_mean_asymptote(0.01).unwrap();
        assert!((m / a - 1.0).abs() < 0.02);
        assert!(fidelity_mean_analytic(0.6).is_err());
        assert!(fidelity_mean_analytic(0.0).is_err());
    }

    #[test]
    fn variance_closed_form() {
        let v = fidelity_variance_analytic(1.0 / 16.0, 8).unwrap();
        assert!((v - 1.855e-4).abs() < 1e-7);
        assert!(fidelity_variance_analytic(0.25, 100_000).unwrap() < 1e-10);
    }

    #[test]
    fn density_moments() {
        for w in [0.01, 1.0 / 16.0, 0.2, 0.45] {
            assert!((eigen_density_moment(w, 0.0).unwrap() - 1.0).abs() < 1e-8);
            assert!((eigen_density_moment(w, 1.0).unwrap() - w).abs() < 1e-8, "w={w}");
            let half = eigen_density_moment(w, 0.5).unwrap();
            assert!((half - fidelity_mean_analytic(w).unwrap()).abs() < 1e-6, "w={w}");
        }
    }

    #[test]
    fn log_prob_quadratic() {
        let w = 1.0 / 16.0;
        let m = fidelity_mean_analytic(w).unwrap();
        assert_eq!(log_prob_fidelity(m, w, 8).unwrap(), 0.0);
        let v = log_prob_fidelity(m + 0.05, w, 8).unwrap();
        let expected = -64.0 * PI * PI / (4.0 * w * (1.0 - w)) * 0.0025;
        assert!((v - expected).abs() < 1e-10 * expected.abs());
        // Gaussian with variance s^2 has ln Pr = -(F - m)^2 / (2 s^2).
        let implied = -0.0025 / (2.0 * v);
        assert!((implied - fidelity_variance_analytic(w, 8).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn fidelity_sample_matches_dense_formula() {
        let rng = RngStream::new(3);
        let p1 = sample_projector(12, 3, &rng.child(0)).unwrap();
        let p2 = sample_projector(12, 3, &rng.child(1)).unwrap();
        let s = fidelity_sample(&p1, &p2).unwrap();
        let m1 = p1.matrix();
        let dense = &m1 * p2.matrix() * &m1;
        let mut e: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        let top: f64 = e[9..].iter().map(|l| l.max(0.0).sqrt()).sum::<f64>() / 3.0;
        assert!((top - s.fidelity).abs() < 1e-8);
        assert!(s.eigenvalues.iter().all(|&l| (0.0..=1.0).contains(&l)));
        let same = fidelity_sample(&p1, &p1).unwrap();
        assert!((same.fidelity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn packing_floor() {
        let res = greedy_packing(8, 4, 0.01, 5, &RngStream::new(1), Execution::Sequential).unwrap();
        assert_eq!(res.count, 1);
        assert_eq!(res.accepted, vec![0]);
    }

    #[test]
    fn displacement_identity() {
        let p = Projector::coordinate(6, 2).unwrap();
        let (l, r) = displacement_sides(&p, &p).unwrap();
        assert!(l.abs() < 1e-12 && r.abs() < 1e-12);
        let rep = displacement_distance_check(16, 4, 100, &RngStream::new(5), Execution::Sequential).unwrap();
        assert_eq!(rep.violations, 0);
    }
}
