mod common;

use common::{c, random_pcds};
use num_complex::Complex;
use pcds::capacity::{
    capacity_bounds, closed_form_dephasing_q, closed_form_dephasing_qe, combined_channel_q_direct, lemma1_capacity,
    optimize_block_states, q_capacity_pcds, q_capacity_pcds_with, q_weight_profile, qe_capacity_pcds, CapacityResult,
    Method, OptimizerConfig,
};
use pcds::channel::KrausChannel;
use pcds::matrix::DensityMatrix;
use pcds::pcds::{make_combined, make_dephasing, make_single_decay, BlockPartition, PcdsChannel};
use pcds::{random, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn factory_channels() -> Vec<(String, PcdsChannel<f64>)> {
    let mut out = Vec::new();
    for (a, b, k) in [(1, 1, 0.3), (2, 2, 0.7), (1, 4, 0.5), (3, 2, 0.9), (2, 1, 0.0)] {
        out.push((format!("dephasing ({a},{b},{k})"), make_dephasing(a, b, c(k)).unwrap()));
    }
    for (d, g) in [(3, 0.2), (4, 0.4), (5, 0.5)] {
        out.push((format!("decay d_C={d} γ={g}"), make_single_decay(d, g).unwrap()));
    }
    for (g, k) in [(0.1, 0.5), (0.4, 0.9), (0.3, 0.0)] {
        out.push((format!("combined γ={g} κ={k}"), make_combined(3, g, c(k)).unwrap()));
    }
    out
}

fn assert_consistent(name: &str, r: &CapacityResult<f64>) {
    assert!(r.lower_bound - 1e-9 <= r.value && r.value <= r.upper_bound + 1e-9, "{name}: bounds violated");
    if !r.optimal_p.is_empty() {
        assert!(r.optimal_p.iter().all(|&p| p >= 0.0), "{name}: negative weight");
        assert!((r.optimal_p.iter().sum::<f64>() - 1.0).abs() <= 1e-10, "{name}: weights do not sum to 1");
    }
}

#[test]
fn spec_examples_for_q() {
    let q = q_capacity_pcds(&make_dephasing::<f64>(2, 2, c(1.0)).unwrap()).unwrap();
    assert!((q.value - 2.0).abs() < 1e-6);
    let q = q_capacity_pcds(&make_dephasing::<f64>(1, 4, c(0.0)).unwrap()).unwrap();
    assert!((q.value - 2.0).abs() < 1e-6);
    let q = q_capacity_pcds(&make_single_decay::<f64>(4, 0.5).unwrap()).unwrap();
    assert!((q.value - 3f64.log2()).abs() < 1e-6);
    let q = q_capacity_pcds(&make_single_decay::<f64>(4, 0.8).unwrap()).unwrap();
    assert_eq!(q.method, Method::BoundSandwich);
    assert!((q.value - 3f64.log2()).abs() < 1e-6);
}

#[test]
fn spec_examples_for_qe() {
    let id = PcdsChannel::from_channel(KrausChannel::<f64>::identity(5), BlockPartition::two(2, 3).unwrap()).unwrap();
    let q = qe_capacity_pcds(&id).unwrap();
    assert!((q.value - 5f64.log2()).abs() < 1e-6);
    let q = qe_capacity_pcds(&make_combined::<f64>(3, 0.0, c(1.0)).unwrap()).unwrap();
    assert!((q.value - 3f64.log2()).abs() < 1e-6);
}

#[test]
fn results_respect_their_bounds() {
    for (name, pc) in factory_channels() {
        assert_consistent(&name, &q_capacity_pcds(&pc).unwrap());
        assert_consistent(&name, &qe_capacity_pcds(&pc).unwrap());
    }
    for g in [0.6, 0.9] {
        let pc = make_combined::<f64>(4, g, c(0.7)).unwrap();
        assert_consistent("combined above one half", &q_capacity_pcds(&pc).unwrap());
    }
}

#[test]
fn optimizer_matches_scalar_forms() {
    for (a, b) in [(1, 1), (1, 3), (2, 3), (3, 1), (2, 2)] {
        for k in [0.0, 0.35, 0.8, 1.0] {
            let pc = make_dephasing::<f64>(a, b, c(k)).unwrap();
            let q = q_capacity_pcds(&pc).unwrap().value;
            let qe = qe_capacity_pcds(&pc).unwrap().value;
            assert!((q - closed_form_dephasing_q(a, b, k).unwrap()).abs() < 1e-5, "Q ({a},{b},{k})");
            assert!((qe - closed_form_dephasing_qe(a, b, k).unwrap()).abs() < 1e-5, "QE ({a},{b},{k})");
        }
    }
    for g in [0.05, 0.25, 0.45] {
        for k in [0.1, 0.5, 0.95] {
            let q = q_capacity_pcds(&make_combined::<f64>(3, g, c(k)).unwrap()).unwrap().value;
            assert!((q - combined_channel_q_direct(g, k).unwrap()).abs() < 1e-5);
        }
    }
}

#[test]
fn capacity_decreases_with_damping() {
    let mut prev = f64::INFINITY;
    for i in 0..=5 {
        let q = q_capacity_pcds(&make_single_decay::<f64>(3, i as f64 / 10.0).unwrap()).unwrap().value;
        assert!(q <= prev + 1e-6, "γ={}: {q} > {prev}", i as f64 / 10.0);
        prev = q;
    }
}

#[test]
fn capacity_increases_with_coherence() {
    for (a, b) in [(1, 1), (2, 3)] {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=10 {
            let q = q_capacity_pcds(&make_dephasing::<f64>(a, b, c(i as f64 / 10.0)).unwrap()).unwrap().value;
            assert!(q >= prev - 1e-6);
            prev = q;
        }
    }
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=10 {
        let q = q_capacity_pcds(&make_combined::<f64>(3, 0.3, c(i as f64 / 10.0)).unwrap()).unwrap().value;
        assert!(q >= prev - 1e-6);
        prev = q;
    }
}

#[test]
fn assistance_never_hurts() {
    for (name, pc) in factory_channels() {
        let q = q_capacity_pcds(&pc).unwrap().value;
        let qe = qe_capacity_pcds(&pc).unwrap().value;
        assert!(qe >= q - 1e-8, "{name}: Q_E {qe} < Q {q}");
    }
}

#[test]
fn phase_of_kappa_is_irrelevant() {
    for phi in [0.4, 2.1, -1.3] {
        let k = 0.6;
        let rotated = Complex::from_polar(k, phi);
        for (plain, turned) in [
            (make_dephasing::<f64>(2, 2, c(k)).unwrap(), make_dephasing::<f64>(2, 2, rotated).unwrap()),
            (make_combined::<f64>(3, 0.2, c(k)).unwrap(), make_combined::<f64>(3, 0.2, rotated).unwrap()),
        ] {
            let dq = q_capacity_pcds(&plain).unwrap().value - q_capacity_pcds(&turned).unwrap().value;
            let dqe = qe_capacity_pcds(&plain).unwrap().value - qe_capacity_pcds(&turned).unwrap().value;
            assert!(dq.abs() < 1e-8 && dqe.abs() < 1e-8, "φ={phi}: {dq:e} {dqe:e}");
        }
    }
}

#[test]
fn random_restarts_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for (name, pc) in factory_channels() {
        let best = q_capacity_pcds(&pc).unwrap();
        let dims = pc.partition().dims().to_vec();
        for _ in 0..50 {
            let start: Vec<DensityMatrix<f64>> = dims.iter().map(|&d| random::density(d, &mut rng)).collect();
            let (v, _) = optimize_block_states(&pc, &best.optimal_p, &start).unwrap();
            assert!((v - best.value).abs() < 1e-6, "{name}: restart {v} vs {}", best.value);
        }
    }
}

#[test]
fn random_degradable_channels_restart_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..5 {
        let (pc, kinds) = random_pcds(&mut rng, 2, 5);
        let best = q_capacity_pcds(&pc).unwrap();
        for _ in 0..10 {
            let start: Vec<DensityMatrix<f64>> =
                pc.partition().dims().iter().map(|&d| random::density(d, &mut rng)).collect();
            let (v, _) = optimize_block_states(&pc, &best.optimal_p, &start).unwrap();
            assert!((v - best.value).abs() < 1e-6, "{kinds:?}: {v} vs {}", best.value);
        }
    }
}

/// The outer search over `p` assumes a single maximum; audit it on a dense grid.
#[test]
fn weight_profile_is_unimodal() {
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    for (name, pc) in factory_channels() {
        let profile = q_weight_profile(&pc, &grid).unwrap();
        let peak = profile
            .iter()
            .enumerate()
            .fold(0, |best, (i, &v)| if v > profile[best] { i } else { best });
        let rises = profile[..=peak].windows(2).all(|w| w[1] >= w[0] - 1e-9);
        let falls = profile[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-9);
        assert!(rises && falls, "{name}: profile not unimodal");
        let q = q_capacity_pcds(&pc).unwrap().value;
        assert!(q >= profile[peak] - 1e-9, "{name}: golden {q} below grid {}", profile[peak]);
    }
}

#[test]
fn lemma1_values() {
    assert_eq!(lemma1_capacity(&make_single_decay::<f64>(3, 0.5).unwrap()).map(|q| (q * 1e12).round()), Some(1e12));
    let q = lemma1_capacity(&make_single_decay::<f64>(5, 0.5).unwrap()).unwrap();
    assert!((q - 2.0).abs() < 1e-12);
    assert!(lemma1_capacity(&make_dephasing::<f64>(2, 2, c(0.9)).unwrap()).is_none());
}

#[test]
fn bounds_examples() {
    let b = capacity_bounds(&make_single_decay::<f64>(4, 0.3).unwrap()).unwrap();
    assert!(b.lower >= 3f64.log2() - 1e-9);
    let id = PcdsChannel::from_channel(KrausChannel::<f64>::identity(4), BlockPartition::two(2, 2).unwrap()).unwrap();
    assert!((capacity_bounds(&id).unwrap().upper - 2.0).abs() < 1e-9);
    let b = capacity_bounds(&make_dephasing::<f64>(2, 2, c(0.0)).unwrap()).unwrap();
    assert!((b.lower - 1.0).abs() < 1e-6);
}

#[test]
fn combined_plateau_above_one_half() {
    for k in [0.3, 0.7] {
        let at_half = q_capacity_pcds(&make_combined::<f64>(3, 0.5, c(k)).unwrap()).unwrap();
        let later = q_capacity_pcds(&make_combined::<f64>(3, 0.9, c(k)).unwrap()).unwrap();
        assert_eq!(later.method, Method::BoundSandwich);
        assert!((at_half.value - later.value).abs() < 1e-6);
    }
}

#[test]
fn unclosed_sandwich_is_an_error() {
    // A decay block above one half next to a dephased (not identity) block:
    // no bound pins the capacity down.
    let adc = pcds::pcds::qubit_adc::<f64>(0.8).unwrap().into_kraus();
    let z = pcds::matrix::ComplexMatrix::from_diagonal(&[1.0, -1.0]);
    let ident = pcds::matrix::ComplexMatrix::identity(2);
    let blocks = vec![adc, vec![ident.scale(0.9f64.sqrt()), z.scale(0.1f64.sqrt())]];
    let pc = PcdsChannel::from_blocks(BlockPartition::two(2, 2).unwrap(), blocks).unwrap();
    match q_capacity_pcds(&pc) {
        Err(Error::UndeterminedDegradability { lower, upper }) => assert!(lower < upper),
        other => panic!("expected an error, got {other:?}"),
    }
}

#[test]
fn seed_changes_nothing_on_symmetric_blocks() {
    let pc = make_combined::<f64>(4, 0.3, c(0.4)).unwrap();
    let a = q_capacity_pcds_with(&pc, &OptimizerConfig { seed: 1, restarts: 3 }).unwrap().value;
    let b = q_capacity_pcds(&pc).unwrap().value;
    assert_eq!(a, b);
}

#[test]
fn single_precision_runs() {
    let q = q_capacity_pcds(&make_dephasing::<f32>(1, 1, Complex::new(0.6, 0.0)).unwrap()).unwrap();
    let want = closed_form_dephasing_q(1, 1, 0.6f64).unwrap();
    assert!((q.value as f64 - want).abs() < 1e-3);
}
