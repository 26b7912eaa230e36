use super::report::{BoundReport, Scale};
use crate::{Error, Result};

/// Depth after which an interval of length `ell` is `eps`-close to maximally
/// mixed in trace distance: `ell/2 (1 + 3 ln 2 / ln q) + 3 ln(1/eps) / ln q`.
pub fn thermalization_time(q: f64, ell: f64, eps: f64) -> Result<f64> {
    if q < 2.0 {
        return Err(Error::domain(format!("q must be >= 2, got {q}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    let lq = q.ln();
    Ok(ell / 2.0 * (1.0 + 3.0 * std::f64::consts::LN_2 / lq) + 3.0 * (1.0 / eps).ln() / lq)
}

/// `ln k!` via summation (exact enough for the `k` that matter here).
fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Upper bound on `Pr[F(rho, sigma) >= 1 - delta]` for `sigma` the reduced state
/// on `ell` of `L` sites of an `eps_design`-approximate `k`-design output:
/// `(1 + eps) / ((1 - delta)^{2k} q^{k(2 ell - L)}) min(e^{k^2 q^{-(L - ell)}}, k!)`.
///
/// Flagged (not refused) unless `ell > L/2`, where the bound can drop below 1.
pub fn prob_overlap_bound(k: u64, eps_design: f64, delta: f64, ell: u64, big_l: u64, q: f64) -> Result<BoundReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if ell > big_l {
        return Err(Error::domain(format!("interval {ell} longer than the chain {big_l}")));
    }
    let kf = k as f64;
    let report = BoundReport::new(
        "prob_overlap",
        &[("k", kf), ("eps_design", eps_design), ("delta", delta), ("ell", ell as f64), ("L", big_l as f64), ("q", q)],
        Scale::Linear,
    )
    .require("q >= 1", q >= 1.0)
    .require("eps_design >= 0", eps_design >= 0.0)
    .advise("ell > L/2", 2 * ell > big_l)
    .advise("eps_design < 1", eps_design < 1.0);
    Ok(report.evaluate(|| {
        let lq = q.ln();
        let gauss = kf * kf * (-((big_l - ell) as f64) * lq).exp();
        let ln = (1.0 + eps_design).ln() - 2.0 * kf * (1.0 - delta).ln() - kf * (2.0 * ell as f64 - big_l as f64) * lq
            + gauss.min(ln_factorial(k));
        ln.exp()
    }))
}

/// `T / L^exponent`: the design order (equivalently, gate count up to the same
/// polynomial) reached at depth `T`. The exponent has no default.
pub fn gate_count_lower_bound(t: f64, big_l: f64, poly_exponent: f64) -> Result<BoundReport> {
    if big_l < 1.0 || t < 0.0 {
        return Err(Error::domain("need L >= 1 and T >= 0"));
    }
    let report = BoundReport::new("gate_count", &[("T", t), ("L", big_l), ("poly_exponent", poly_exponent)], Scale::Linear)
        .require("poly_exponent >= 0", poly_exponent >= 0.0);
    Ok(report.evaluate(|| t / big_l.powf(poly_exponent)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermalization_examples() {
        let v = thermalization_time(2.0, 4.0, 0.1).unwrap();
        assert!((v - (8.0 + 3.0 * 10f64.ln() / 2f64.ln())).abs() < 1e-12);
        assert!((v - 17.966).abs() < 1e-3);
        let inf = thermalization_time(1e300, 6.0, 0.5).unwrap();
        assert!((inf - 3.0).abs() < 0.05);
        let eps1 = thermalization_time(3.0, 6.0, 1.0).unwrap();
        assert!((eps1 - 3.0 * (1.0 + 3.0 * 2f64.ln() / 3f64.ln())).abs() < 1e-12);
        assert!(thermalization_time(1.5, 6.0, 0.1).is_err());
    }

    #[test]
    fn overlap_bound_examples() {
        let r = prob_overlap_bound(0, 0.3, 0.5, 6, 10, 2.0).unwrap();
        assert!((r.value.unwrap() - 1.3).abs() < 1e-12);
        let r = prob_overlap_bound(4, 0.0, 0.9, 6, 10, 2.0).unwrap();
        let expected = 0.1f64.powi(-8) * 2f64.powi(-8) * 1f64.exp().min(24.0);
        assert!((r.value.unwrap() / expected - 1.0).abs() < 1e-12);
        assert!(r.valid());
        let r = prob_overlap_bound(2, 0.0, 0.5, 4, 10, 2.0).unwrap();
        assert!(!r.condition("ell > L/2").unwrap().valid);
        assert!(r.value.is_some());
        assert!(prob_overlap_bound(2, 0.0, 1.0, 4, 10, 2.0).is_err());
    }

    #[test]
    fn overlap_bound_single_copy() {
        // min(e^{q^{-(L-l)}}, 1!) = 1
        for (ell, big_l, q) in [(6, 10, 2.0), (7, 8, 3.0), (5, 5, 5.0)] {
            let v = prob_overlap_bound(1, 0.0, 0.3, ell, big_l, q).unwrap().value.unwrap();
            let expected = 0.7f64.powi(-2) * q.powi(-(2 * ell as i32 - big_l as i32));
            assert!((v - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn overlap_bound_nonincreasing_in_q() {
        for k in 1..6 {
            let mut prev = f64::INFINITY;
            for q in 2..40 {
                let v = prob_overlap_bound(k, 0.1, 0.9, 7, 12, q as f64).unwrap().value.unwrap();
                assert!(v <= prev * (1.0 + 1e-12), "k={k} q={q}");
                prev = v;
            }
        }
    }

    #[test]
    fn gate_count() {
        assert_eq!(gate_count_lower_bound(100.0, 10.0, 2.0).unwrap().value, Some(1.0));
        assert_eq!(gate_count_lower_bound(100.0, 10.0, -1.0).unwrap().value, None);
    }
}
