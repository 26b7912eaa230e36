//! Domain-wall counts against direct enumeration of walker pairs, and the
//! exact purity against its closed forms and bounds.

use std::collections::HashMap;

use brickwork_core::domainwall::{
    binomial, j_paths, j_paths_sep, lemma_a1_partial_sum, n_merge, n_z, prop2_bounds, purity_exact, q_function,
    q_identity_residuals, tail_identity, PathCount,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use proptest::prelude::*;

/// Walker A starts at (h, 0), walker B at (0, h); every step both move right
/// or up. Walks every joint history of `steps` steps, stopping a branch at
/// its first coincidence.
struct Enumeration {
    /// First meeting points (x, y) -> number of histories.
    merges: HashMap<(i64, i64), u64>,
    /// Histories still unmerged after exactly `steps` steps (a coincidence on
    /// the last step counts here with separation 0), by l1 separation.
    alive: HashMap<i64, u64>,
}

fn enumerate(half: i64, steps: usize) -> Enumeration {
    let mut e = Enumeration { merges: HashMap::new(), alive: HashMap::new() };
    fn go(a: (i64, i64), b: (i64, i64), left: usize, first: bool, e: &mut Enumeration) {
        if !first && a == b {
            *e.merges.entry(a).or_default() += 1;
            if left == 0 {
                *e.alive.entry(0).or_default() += 1;
            }
            return;
        }
        if left == 0 {
            let sep = (a.0 - b.0).abs() + (a.1 - b.1).abs();
            *e.alive.entry(sep).or_default() += 1;
            return;
        }
        for da in [(1, 0), (0, 1)] {
            for db in [(1, 0), (0, 1)] {
                go((a.0 + da.0, a.1 + da.1), (b.0 + db.0, b.1 + db.1), left - 1, false, e);
            }
        }
    }
    if half == 0 {
        e.merges.insert((0, 0), 1);
        return e;
    }
    go((half, 0), (0, half), steps, true, &mut e);
    e
}

#[test]
fn merge_counts_match_enumeration() {
    for ell in (2..=8).step_by(2) {
        let half = ell / 2;
        let steps = 8;
        let e = enumerate(half as i64, steps);
        // Every meeting point reachable within `steps` steps.
        for x in 0..=(half + steps as u64) {
            for y in 0..=(half + steps as u64) {
                let tau = (x + y) as i64 - half as i64;
                if tau < 1 || tau > steps as i64 {
                    continue;
                }
                let brute = e.merges.get(&(x as i64, y as i64)).copied().unwrap_or(0);
                assert_eq!(n_merge(x, y, ell).unwrap(), PathCount::from(brute), "x={x} y={y} l={ell}");
            }
        }
        for z in 0..=(half + steps as u64) {
            let brute: u64 = e.merges.iter().filter(|((x, y), _)| (x + y) as u64 == z).map(|(_, c)| c).sum();
            assert_eq!(n_z(z, ell).unwrap(), PathCount::from(brute), "z={z} l={ell}");
        }
    }
    assert_eq!(n_merge(0, 0, 0).unwrap(), PathCount::from(1));
}

#[test]
fn restricted_counts_match_enumeration() {
    for ell in (2..=8).step_by(2) {
        for t in 0..=6u64 {
            let e = enumerate(ell as i64 / 2, t as usize);
            let total: u64 = e.alive.values().sum();
            assert_eq!(j_paths(t, ell).unwrap(), PathCount::from(total), "T={t} l={ell}");
            for r in (0..=(2 * t + ell)).step_by(2) {
                let brute = e.alive.get(&(r as i64)).copied().unwrap_or(0);
                assert_eq!(j_paths_sep(r, t, ell).unwrap(), PathCount::from(brute), "r={r} T={t} l={ell}");
            }
        }
    }
}

#[test]
fn reflection_closed_form() {
    for ell in [2u64, 4, 6] {
        for t in 0..=8u64 {
            let c = BigInt::from(binomial(2 * t as i64, t as i64)) - BigInt::from(binomial(2 * t as i64, (t + ell) as i64));
            assert_eq!(BigInt::from(j_paths_sep(ell, t, ell).unwrap().0), c, "T={t} l={ell}");
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn purity_closed_form_before_merging() {
    for q in [2u64, 3, 5] {
        let qb = BigInt::from(q);
        let base = BigRational::new(&qb * 2, &qb * &qb + 1);
        for ell in (2..=12).step_by(2) {
            for t in 0..ell / 2 {
                let p = purity_exact(q, ell, t).unwrap();
                assert_eq!(p.exact.unwrap(), Pow::pow(&base, 2 * t as u32), "q={q} l={ell} T={t}");
            }
        }
    }
    assert_eq!(purity_exact(2, 4, 1).unwrap().exact.unwrap(), rat(16, 25));
    assert_eq!(purity_exact(2, 2, 1).unwrap().exact.unwrap(), rat(16, 25));
}

#[test]
fn sandwich_and_monotone_decay() {
    for q in [2u64, 3, 5] {
        let floor = BigRational::new(BigInt::one(), BigInt::from(q));
        for ell in (2..=10).step_by(2) {
            let q_ell = Pow::pow(&floor, ell as u32);
            let mut prev: Option<BigRational> = None;
            for t in 0..=12 {
                let p = purity_exact(q, ell, t).unwrap().exact.unwrap();
                let excess = &p - &q_ell;
                assert!(prop2_bounds(q, ell, t).unwrap().contains(&excess), "q={q} l={ell} T={t}");
                assert!(p <= BigRational::one() && p >= q_ell);
                if let Some(prev) = prev {
                    assert!(p <= prev);
                }
                prev = Some(p);
            }
        }
    }
}

#[test]
fn truncated_sum_identities() {
    for (q, ell) in [(2u64, 2u64), (2, 4), (2, 6), (3, 2), (3, 4), (3, 6)] {
        let s = lemma_a1_partial_sum(q, ell, 200).unwrap().value;
        assert!((s - (q as f64).powi(-(ell as i32))).abs() < 1e-6, "q={q} l={ell}");
    }
    assert_eq!(lemma_a1_partial_sum(2, 0, 0).unwrap().value, 1.0);
    let eta = 2.0 / 5.0;
    assert_eq!(q_function(0, eta, 0).unwrap(), 1.0);
    assert!((q_function(2, eta, 300).unwrap() - 25.0 / 16.0).abs() < 1e-8);
    let r = q_identity_residuals(2.0, 2, 300).unwrap();
    assert!(r.multiplicativity.abs() < 1e-6, "{r:?}");
}

#[test]
fn tail_identity_holds() {
    for q in [2.0, 3.0, 4.5] {
        for ell in [2u64, 4, 6] {
            for t in 0..8 {
                let id = tail_identity(q, ell, t, 120).unwrap();
                assert!((id.merged_tail - id.separated_sum).abs() < 1e-8, "q={q} l={ell} T={t} {id:?}");
            }
        }
    }
}

proptest! {
    #[test]
    fn purity_within_physical_range(q in 2u64..8, half in 1u64..8, t in 0u64..20) {
        let ell = 2 * half;
        let p = purity_exact(q, ell, t).unwrap();
        let floor = (q as f64).powi(-(ell as i32));
        prop_assert!(p.value <= 1.0 + 1e-15);
        prop_assert!(p.value >= floor * (1.0 - 1e-12));
    }

    #[test]
    fn unrestricted_before_lightcone(half in 1u64..10, t in 0u64..10) {
        prop_assume!(t < half);
        prop_assert_eq!(j_paths(t, 2 * half).unwrap(), PathCount(num_bigint::BigUint::from(4u32).pow(t as u32)));
    }

    #[test]
    fn odd_lengths_rejected(half in 0u64..20, x in 0u64..30, y in 0u64..30) {
        prop_assert!(n_merge(x, y, 2 * half + 1).is_err());
    }
}
