mod common;

use common::{c, random_pcds};
use num_complex::Complex;
use pcds::capacity::{coherent_information, delta_s_p, j_p_functional};
use pcds::channel::KrausChannel;
use pcds::matrix::{
    entropy_of_hermitian, hermitian_eigen, hermitian_eigenvalues, partial_trace, von_neumann_entropy, ComplexMatrix,
    DensityMatrix, Factor,
};
use pcds::pcds::{is_pcds, make_dephasing, BlockPartition};
use pcds::random;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), d in 1usize..7) {
        let h = random::hermitian::<f64, _>(d, &mut rng(seed));
        let sum: f64 = hermitian_eigenvalues(&h).unwrap().iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-8);
    }

    #[test]
    fn eigen_decomposition_reconstructs(seed in any::<u64>(), d in 1usize..7) {
        let h = random::hermitian::<f64, _>(d, &mut rng(seed));
        let e = hermitian_eigen(&h).unwrap();
        prop_assert!(e.reconstruct().frobenius_distance(&h) <= 1e-9 * h.frobenius_norm().max(1.0));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in 1usize..6) {
        let mut r = rng(seed);
        let rho = random::density::<f64, _>(d, &mut r);
        let u = random::unitary::<f64, _>(d, &mut r);
        let s1 = von_neumann_entropy(&rho);
        let s2 = entropy_of_hermitian(&u.sandwich(rho.as_matrix()));
        prop_assert!((s1 - s2).abs() < 1e-8);
        prop_assert!(s1 >= -1e-9 && s1 <= (d as f64).log2() + 1e-9);
    }

    #[test]
    fn entropy_gain_of_mixing_is_nonnegative(seed in any::<u64>(), d in 1usize..6, p in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let a = random::density::<f64, _>(d, &mut r);
        let b = random::density::<f64, _>(d, &mut r);
        prop_assert!(delta_s_p(p, &a, &b).unwrap() >= -1e-9);
    }

    #[test]
    fn partial_trace_keeps_states(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let rho = random::density::<f64, _>(da * db, &mut rng(seed));
        for which in [Factor::A, Factor::B] {
            let reduced = partial_trace(rho.as_matrix(), da, db, which).unwrap();
            prop_assert!(DensityMatrix::new(reduced).is_ok());
        }
    }

    #[test]
    fn channel_and_complement_agree_on_pure_inputs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (pc, _) = random_pcds(&mut r, 2, 5);
        let psi = random::pure_state::<f64, _>(pc.partition().total(), &mut r);
        let ch = pc.channel();
        let s_out = entropy_of_hermitian(&ch.apply(psi.as_matrix()).unwrap());
        let s_env = entropy_of_hermitian(&ch.complementary().apply(psi.as_matrix()).unwrap());
        prop_assert!((s_out - s_env).abs() < 1e-8);
    }

    #[test]
    fn block_built_channels_are_pcds(seed in any::<u64>(), n in 2usize..4) {
        let (pc, _) = random_pcds(&mut rng(seed), n, 6);
        prop_assert!(is_pcds(pc.channel(), pc.partition()).unwrap().is_pcds);
    }

    #[test]
    fn pcds_closed_under_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let part = BlockPartition::two(2, 2).unwrap();
        let (first, second) = loop {
            let (a, _) = random_pcds(&mut r, 2, 4);
            let (b, _) = random_pcds(&mut r, 2, 4);
            if a.partition() == &part && b.partition() == &part {
                break (a, b);
            }
        };
        let composed = KrausChannel::compose(second.channel(), first.channel()).unwrap();
        prop_assert!(is_pcds(&composed, &part).unwrap().is_pcds);
    }

    /// A PCDS channel maps block-diagonal inputs to block-diagonal outputs.
    #[test]
    fn block_diagonal_inputs_stay_block_diagonal(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let (pc, _) = random_pcds(&mut r, 2, 6);
        let dims = pc.partition().dims().to_vec();
        let taus: Vec<DensityMatrix<f64>> = dims.iter().map(|&d| random::density(d, &mut r)).collect();
        let rho = pc.block_diagonal_state(&[p, 1.0 - p], &taus).unwrap();
        let out = pc.channel().apply(rho.as_matrix()).unwrap();
        let part = pc.partition();
        for i in 0..part.total() {
            for j in 0..part.total() {
                if part.block_of(i) != part.block_of(j) {
                    prop_assert!(out[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dephasing_phase_does_not_change_entropies(seed in any::<u64>(), k in 0.0f64..=1.0, phi in -3.0f64..3.0) {
        let mut r = rng(seed);
        let plain = make_dephasing::<f64>(2, 1, c(k)).unwrap();
        let turned = make_dephasing::<f64>(2, 1, Complex::from_polar(k, phi)).unwrap();
        let rho = random::density::<f64, _>(3, &mut r);
        let a = coherent_information(plain.channel(), &rho).unwrap();
        let b = coherent_information(turned.channel(), &rho).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn j_functional_endpoints(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (pc, _) = random_pcds(&mut r, 2, 5);
        let (a, b) = (pc.diagonal_block(0).unwrap(), pc.diagonal_block(1).unwrap());
        let ta = random::density::<f64, _>(a.dim_in(), &mut r);
        let tb = random::density::<f64, _>(b.dim_in(), &mut r);
        let j1 = j_p_functional(1.0, &a, &ta, &b, &tb).unwrap();
        let j0 = j_p_functional(0.0, &a, &ta, &b, &tb).unwrap();
        prop_assert!((j1 - coherent_information(&a, &ta).unwrap()).abs() < 1e-9);
        prop_assert!((j0 - coherent_information(&b, &tb).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn choi_round_trip(seed in any::<u64>()) {
        let (pc, _) = random_pcds(&mut rng(seed), 2, 4);
        let ch = pc.channel();
        let back = ch.choi().to_kraus().unwrap();
        prop_assert!(back.transfer_matrix().max_abs_diff(&ch.transfer_matrix()) < 1e-9);
    }
}

#[test]
fn single_precision_eigenvalues_track_double() {
    let mut r = rng(3);
    for _ in 0..20 {
        let h = random::hermitian::<f64, _>(4, &mut r);
        let lo: ComplexMatrix<f32> = h.cast();
        let a = hermitian_eigenvalues(&h).unwrap();
        let b = hermitian_eigenvalues(&lo).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - *y as f64).abs() < 1e-4);
        }
    }
}
