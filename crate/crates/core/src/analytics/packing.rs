//! Lower bounds on the number of well-separated states, all as `ln N`.

use std::f64::consts::PI;

use super::report::{BoundReport, Scale};

/// States near `1/d` pairwise `beta`-separated in trace norm, drawn from an
/// `eps_design`-approximate `k`-design inside an `alpha`-ball:
/// `ln N > k ln(2 - beta/alpha) - ln 15`, valid for `k < d`, `eps_design < 1`.
pub fn packing_design_bound(k: u64, d: u64, alpha: f64, beta: f64, eps_design: f64) -> BoundReport {
    let ratio = beta / alpha;
    let r = BoundReport::new(
        "packing_design",
        &[("k", k as f64), ("d", d as f64), ("alpha", alpha), ("beta", beta), ("eps_design", eps_design)],
        Scale::Ln,
    )
    .require("alpha > 0", alpha > 0.0)
    .require("beta <= 2 alpha", beta <= 2.0 * alpha)
    .require("k < d", k < d)
    .require("eps_design < 1", (0.0..1.0).contains(&eps_design));
    let r = r.evaluate(|| k as f64 * (2.0 - ratio).ln() - 15f64.ln());
    let nonvacuous = r.value.is_some_and(|v| v > 0.0);
    r.advise("guarantees more than one state", nonvacuous)
}

/// Same with arbitrary unitaries: `ln N0 >= (1 - beta/alpha)^2 d^2 / 16`, for `beta < alpha`.
pub fn packing_full_bound(d: u64, alpha: f64, beta: f64) -> BoundReport {
    BoundReport::new("packing_full", &[("d", d as f64), ("alpha", alpha), ("beta", beta)], Scale::Ln)
        .require("alpha > 0", alpha > 0.0)
        .require("beta < alpha", beta < alpha)
        .evaluate(|| (1.0 - beta / alpha).powi(2) * (d * d) as f64 / 16.0)
}

/// Pairwise almost orthogonal rank-`r` states: `ln N >= (eps - r/d)^2 r d / 2`, for `r < eps d`.
pub fn packing_rank_bound(r: u64, d: u64, eps: f64) -> BoundReport {
    let (rf, df) = (r as f64, d as f64);
    BoundReport::new("packing_rank", &[("r", rf), ("d", df), ("eps", eps)], Scale::Ln)
        .require("r >= 1", r >= 1)
        .require("r < eps d", rf < eps * df)
        .evaluate(|| 0.5 * (eps - rf / df).powi(2) * rf * df)
}

/// Rank-`r` states with all pairwise fidelities below `eps`:
/// `ln N = (pi^2 / 4) eps^2 r d`, meaningful for `sqrt(r/d) << eps < 1`.
pub fn packing_fidelity_count(r: u64, d: u64, eps: f64) -> BoundReport {
    let (rf, df) = (r as f64, d as f64);
    BoundReport::new("packing_fidelity", &[("r", rf), ("d", df), ("eps", eps)], Scale::Ln)
        .require("1 <= r <= d", r >= 1 && r <= d)
        .require("eps > 0", eps > 0.0)
        .advise("sqrt(r/d) < eps", (rf / df).sqrt() < eps)
        .advise("eps < 1", eps < 1.0)
        .advise("r < d/2", 2 * r < d)
        .evaluate(|| PI * PI / 4.0 * eps * eps * rf * df)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_bound() {
        let r = packing_design_bound(100, 1000, 1.0, 1.0, 0.1);
        assert!((r.value.unwrap() + 15f64.ln()).abs() < 1e-12);
        assert!(!r.condition("guarantees more than one state").unwrap().valid);
        let r = packing_design_bound(10, 1000, 1.0, 2.0, 0.1);
        assert_eq!(r.value, Some(f64::NEG_INFINITY));
        let r = packing_design_bound(10, 1000, 1.0, 2.5, 0.1);
        assert_eq!(r.value, None);
        let r = packing_design_bound(1000, 100, 1.0, 0.5, 0.1);
        assert_eq!(r.value, None);
        let r = packing_design_bound(50, 100, 1.0, 0.2, 0.1);
        assert!(r.valid());
        assert!((r.value.unwrap() - (50.0 * 1.8f64.ln() - 15f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn full_and_rank_bounds() {
        assert_eq!(packing_full_bound(8, 1.0, 0.5).value, Some(1.0));
        assert_eq!(packing_full_bound(8, 1.0, 1.0).value, None);
        let r = packing_rank_bound(2, 32, 0.5);
        assert!((r.value.unwrap() - 0.5 * (0.5f64 - 1.0 / 16.0).powi(2) * 64.0).abs() < 1e-12);
        assert_eq!(packing_rank_bound(20, 32, 0.5).value, None);
    }

    #[test]
    fn fidelity_count() {
        let r = packing_fidelity_count(2, 32, 0.5);
        assert!((r.value.unwrap() - 39.478).abs() < 1e-3);
        assert!(r.valid());
        let r = packing_fidelity_count(8, 32, 0.3);
        assert!(r.value.is_some());
        assert!(!r.condition("sqrt(r/d) < eps").unwrap().valid);
    }
}
