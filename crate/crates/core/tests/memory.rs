//! Memory experiments: which single-brick perturbations survive in an
//! interval's reduced state.

use brickwork_core::memory_lab::{
    alternating_ring, memory_experiment, memory_samples, phase_boundary, renyi_phase_check, warmup_fidelity_mc, warmup_prediction,
    Perturbation, Placement,
};
use brickwork_core::qudit_sim::IntervalSpec;
use brickwork_core::rng_linalg::{sample_haar_unitary, UnitaryMatrix};
use brickwork_core::{Execution, RngStream};

const PAR: Execution = Execution::Parallel;

fn conjugate_by_swap(v: &UnitaryMatrix, d: usize) -> UnitaryMatrix {
    let s = UnitaryMatrix::swap(d, d);
    UnitaryMatrix::from_matrix(s.matrix() * v.matrix() * s.matrix()).unwrap()
}

#[test]
fn mirror_placements_agree() {
    let g = alternating_ring(2, 2, 10).unwrap();
    let iv = IntervalSpec::new(2, 6);
    let v = UnitaryMatrix::clock(2).kron(&UnitaryMatrix::identity(2));
    let left = Perturbation::new(2, 3, v.clone());
    let right = Perturbation::new(2, 5, conjugate_by_swap(&v, 2));
    assert_eq!(left.placement(&g, &iv, 2).unwrap(), Placement::Inside);
    assert_eq!(right.placement(&g, &iv, 2).unwrap(), Placement::Inside);
    let a = memory_experiment(&g, &iv, 2, &left, 600, &RngStream::new(1), PAR).unwrap();
    let b = memory_experiment(&g, &iv, 2, &right, 600, &RngStream::new(2), PAR).unwrap();
    assert!((a.mean - b.mean).abs() <= 4.0 * a.joint_stderr(&b), "{a:?} {b:?}");
}

#[test]
fn memory_loss_is_monotone_in_depth() {
    let g = alternating_ring(2, 4, 8).unwrap();
    let iv = IntervalSpec::new(1, 4);
    let v = UnitaryMatrix::clock(8);
    let boundary = phase_boundary(2.0, 4.0, 4.0).unwrap();
    let mut prev: Option<brickwork_core::EnsembleEstimate> = None;
    let depths = [1usize, 3, 5];
    assert!(depths[0] as f64 <= boundary && depths[2] as f64 > boundary);
    for t in depths {
        let p = Perturbation::new(t, 2, v.clone());
        assert_eq!(p.placement(&g, &iv, t).unwrap(), Placement::Inside);
        let est = memory_experiment(&g, &iv, t, &p, 200, &RngStream::new(t as u64), PAR).unwrap();
        assert!(est.mean <= 1.0 + 1e-8);
        if let Some(prev) = prev {
            assert!(est.mean >= prev.mean - 2.0 * est.joint_stderr(&prev), "T={t}: {est:?} after {prev:?}");
        }
        prev = Some(est);
    }
}

#[test]
fn untouched_interval_remembers_nothing_outside() {
    let g = alternating_ring(2, 4, 8).unwrap();
    let iv = IntervalSpec::new(1, 4);
    let p = Perturbation::new(1, 6, UnitaryMatrix::clock(8));
    assert_eq!(p.placement(&g, &iv, 1).unwrap(), Placement::Outside);
    let est = memory_experiment(&g, &iv, 1, &p, 50, &RngStream::new(3), PAR).unwrap();
    assert!((est.mean - 1.0).abs() < 1e-8, "{est:?}");
}

#[test]
fn fidelities_stay_in_range() {
    let g = alternating_ring(2, 3, 8).unwrap();
    let iv = IntervalSpec::new(0, 4);
    for (layer, bond) in [(1, 0), (2, 3), (2, 1), (2, 7)] {
        let p = Perturbation::new(layer, bond, sample_haar_unitary(6, &RngStream::new(bond as u64)).unwrap());
        for f in memory_samples(&g, &iv, 2, &p, 40, &RngStream::new(10), PAR).unwrap() {
            assert!((0.0..=1.0 + 1e-8).contains(&f), "layer {layer} bond {bond}: {f}");
        }
    }
}

#[test]
fn warmup_small_subsystem() {
    let (q, big_q) = (2, 16);
    let slack = 1.0 / big_q as f64;
    let clock = UnitaryMatrix::clock(q * big_q);
    let pred = warmup_prediction(q, big_q, &clock).unwrap();
    let est = warmup_fidelity_mc(q, big_q, &clock, 2000, &RngStream::new(4), PAR).unwrap();
    assert!((est.mean - pred.small_q).abs() <= 4.0 * est.stderr + slack, "{est:?} vs {pred:?}");
    let local = UnitaryMatrix::clock(q).kron(&UnitaryMatrix::identity(big_q));
    let est = warmup_fidelity_mc(q, big_q, &local, 200, &RngStream::new(5), PAR).unwrap();
    assert!((est.mean - 1.0).abs() < 1e-8);
    let same = warmup_fidelity_mc(q, big_q, &UnitaryMatrix::identity(q * big_q), 20, &RngStream::new(6), PAR).unwrap();
    assert_eq!((same.mean, same.stderr), (1.0, 0.0));
}

#[test]
fn warmup_large_subsystem() {
    let v = sample_haar_unitary(32, &RngStream::new(77)).unwrap();
    let est = warmup_fidelity_mc(16, 2, &v, 500, &RngStream::new(7), PAR).unwrap();
    assert!(est.mean > 0.85, "{est:?}");
}

#[test]
fn renyi_branches() {
    let g = alternating_ring(2, 6, 8).unwrap();
    let rng = RngStream::new(8);
    let zero = renyi_phase_check(&g, &IntervalSpec::new(1, 4), 0, 5, &rng, PAR).unwrap();
    assert_eq!(zero.purity.mean, 1.0);
    let early = renyi_phase_check(&g, &IntervalSpec::new(1, 4), 1, 300, &rng, PAR).unwrap();
    assert!(early.early_branch > early.late_branch && early.within_slack, "{early:?}");
    let g10 = alternating_ring(2, 6, 10).unwrap();
    let late = renyi_phase_check(&g10, &IntervalSpec::new(0, 2), 4, 200, &rng, PAR).unwrap();
    assert!(late.late_branch > late.early_branch && late.within_slack, "{late:?}");
}

#[test]
fn phase_boundary_examples() {
    assert!((phase_boundary(3.0, 3.0, 6.0).unwrap() - 3.0).abs() < 1e-12);
    assert!((phase_boundary(2.0, 8.0, 4.0).unwrap() - 4.0).abs() < 1e-12);
    let mut prev = 0.0;
    for big_q in 2..20 {
        let t = phase_boundary(2.0, big_q as f64, 4.0).unwrap();
        assert!(t > prev);
        prev = t;
    }
}
