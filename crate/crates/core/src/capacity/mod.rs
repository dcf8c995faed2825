//! Quantum and entanglement-assisted capacities of PCDS channels.
//!
//! Degradable channels get a single-letter optimum restricted to the diagonal
//! blocks. Anything else goes through [`capacity_bounds`] and only gets a
//! value when the bounds close.

mod bounds;
mod closed_form;
mod functionals;
mod optimize;

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::degradability::{find_antidegrading_map, find_degrading_map, pcds_degradability, DegradabilityVerdict, Status};
use crate::error::{Error, Result};
use crate::matrix::DensityMatrix;
use crate::pcds::PcdsChannel;
use crate::scalar::Real;

pub use bounds::{capacity_bounds, capacity_bounds_with, Bounds, SANDWICH_GAP};
pub use closed_form::{closed_form_dephasing_q, closed_form_dephasing_qe, combined_channel_q_direct, lemma1_capacity};
pub use functionals::{coherent_information, delta_s_p, i_p_functional, j_p_functional, mutual_information};
pub use optimize::{block_strategy, OptimizerConfig, Strategy, EG_TOL, GOLDEN_TOL, MIN_STEP};

use optimize::{Objective, Problem, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    SingleLetterOptimized,
    BoundSandwich,
    AntidegradableZero,
}

#[derive(Debug, Clone)]
pub struct CapacityResult<T> {
    pub value: T,
    pub optimal_p: Vec<T>,
    pub optimal_block_states: Vec<DensityMatrix<T>>,
    pub lower_bound: T,
    pub upper_bound: T,
    pub method: Method,
    pub degradability: DegradabilityVerdict<T>,
}

/// Serialized form of a [`CapacityResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityJson {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: Method,
    pub p: Vec<f64>,
    pub degradable: Status,
}

impl<T: Real> CapacityResult<T> {
    pub fn to_json_value(&self) -> CapacityJson {
        CapacityJson {
            value: self.value.to_f64_lossy(),
            lower: self.lower_bound.to_f64_lossy(),
            upper: self.upper_bound.to_f64_lossy(),
            method: self.method,
            p: self.optimal_p.iter().map(|x| x.to_f64_lossy()).collect(),
            degradable: self.degradability.status,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("capacity result serializes")
    }

    pub fn gap(&self) -> T {
        self.upper_bound - self.lower_bound
    }

    fn optimized(sol: Solution<T>, degradability: DegradabilityVerdict<T>) -> Self {
        Self {
            value: sol.value,
            optimal_p: sol.p,
            optimal_block_states: sol.states,
            lower_bound: sol.value,
            upper_bound: sol.value,
            method: Method::SingleLetterOptimized,
            degradability,
        }
    }
}

fn maximize<T: Real>(problem: &Problem<T>, simplex: bool) -> Solution<T> {
    match problem.num_blocks() {
        1 => problem.maximize_single(),
        2 if !simplex => problem.maximize_two_blocks(),
        _ => problem.maximize_simplex(),
    }
}

pub(crate) fn pcds_verdict<T: Real>(pc: &PcdsChannel<T>) -> Result<DegradabilityVerdict<T>> {
    pcds_degradability(pc, find_degrading_map)
}

fn is_antidegradable<T: Real>(ch: &KrausChannel<T>) -> Result<bool> {
    Ok(find_antidegrading_map(ch)?.status == Status::Degradable)
}

fn uniform_states<T: Real>(pc: &PcdsChannel<T>) -> Vec<DensityMatrix<T>> {
    pc.partition().dims().iter().map(|&d| DensityMatrix::maximally_mixed(d)).collect()
}

fn q_capacity_impl<T: Real>(pc: &PcdsChannel<T>, config: &OptimizerConfig, simplex: bool) -> Result<CapacityResult<T>> {
    let verdict = pcds_verdict(pc)?;
    if verdict.is_degradable() {
        let problem = Problem::from_pcds(pc, Objective::Coherent, *config);
        return Ok(CapacityResult::optimized(maximize(&problem, simplex), verdict));
    }
    let n = pc.num_blocks();
    if is_antidegradable(pc.channel())? {
        let zero = T::zero();
        let mut p = vec![zero; n];
        p[0] = T::one();
        return Ok(CapacityResult {
            value: zero,
            optimal_p: p,
            optimal_block_states: uniform_states(pc),
            lower_bound: zero,
            upper_bound: zero,
            method: Method::AntidegradableZero,
            degradability: verdict,
        });
    }
    if let Some(q) = lemma1_capacity(pc) {
        return Ok(CapacityResult {
            value: q,
            optimal_p: Vec::new(),
            optimal_block_states: Vec::new(),
            lower_bound: q,
            upper_bound: q,
            method: Method::ClosedForm,
            degradability: verdict,
        });
    }
    let b = capacity_bounds_with(pc, config)?;
    if b.gap() > T::tol(SANDWICH_GAP) {
        return Err(Error::UndeterminedDegradability {
            lower: b.lower.to_f64_lossy(),
            upper: b.upper.to_f64_lossy(),
        });
    }
    Ok(CapacityResult {
        value: b.lower,
        optimal_p: b.witness_p,
        optimal_block_states: b.witness_states,
        lower_bound: b.lower,
        upper_bound: b.upper,
        method: Method::BoundSandwich,
        degradability: verdict,
    })
}

/// Quantum capacity of a PCDS channel, optimizing only over block-diagonal
/// inputs when the channel is certified degradable.
pub fn q_capacity_pcds<T: Real>(pc: &PcdsChannel<T>) -> Result<CapacityResult<T>> {
    q_capacity_pcds_with(pc, &OptimizerConfig::default())
}

pub fn q_capacity_pcds_with<T: Real>(pc: &PcdsChannel<T>, config: &OptimizerConfig) -> Result<CapacityResult<T>> {
    q_capacity_impl(pc, config, false)
}

/// Same problem as [`q_capacity_pcds`] with the block weights optimized on the
/// simplex, for any number of blocks.
pub fn q_capacity_multiblock<T: Real>(pc: &PcdsChannel<T>) -> Result<CapacityResult<T>> {
    q_capacity_multiblock_with(pc, &OptimizerConfig::default())
}

pub fn q_capacity_multiblock_with<T: Real>(pc: &PcdsChannel<T>, config: &OptimizerConfig) -> Result<CapacityResult<T>> {
    q_capacity_impl(pc, config, true)
}

/// Entanglement-assisted capacity; single letter for every channel.
pub fn qe_capacity_pcds<T: Real>(pc: &PcdsChannel<T>) -> Result<CapacityResult<T>> {
    qe_capacity_pcds_with(pc, &OptimizerConfig::default())
}

pub fn qe_capacity_pcds_with<T: Real>(pc: &PcdsChannel<T>, config: &OptimizerConfig) -> Result<CapacityResult<T>> {
    let verdict = pcds_verdict(pc)?;
    let problem = Problem::from_pcds(pc, Objective::Mutual, *config);
    let sol = maximize(&problem, false);
    let blocks: Vec<T> = (0..pc.num_blocks())
        .map(|l| Ok(qe_capacity_with(&pc.diagonal_block(l)?, config)))
        .collect::<Result<_>>()?;
    let lower = blocks.iter().copied().fold(T::neg_infinity(), T::max);
    let upper = blocks.iter().map(|&q| T::lit(2.0).powf(q)).sum::<T>().log2();
    Ok(CapacityResult {
        value: sol.value,
        optimal_p: sol.p,
        optimal_block_states: sol.states,
        lower_bound: lower,
        upper_bound: upper,
        method: Method::SingleLetterOptimized,
        degradability: verdict,
    })
}

/// Maximal coherent information of a single channel. This is its quantum
/// capacity only when the channel is degradable.
pub fn max_coherent_information<T: Real>(ch: &KrausChannel<T>) -> T {
    max_coherent_information_with(ch, &OptimizerConfig::default())
}

pub fn max_coherent_information_with<T: Real>(ch: &KrausChannel<T>, config: &OptimizerConfig) -> T {
    Problem::single(ch, Objective::Coherent, *config).maximize_single().value
}

/// Entanglement-assisted capacity of a single channel, `½ max S(ρ) + I_coh`.
pub fn qe_capacity<T: Real>(ch: &KrausChannel<T>) -> T {
    qe_capacity_with(ch, &OptimizerConfig::default())
}

pub fn qe_capacity_with<T: Real>(ch: &KrausChannel<T>, config: &OptimizerConfig) -> T {
    Problem::single(ch, Objective::Mutual, *config).maximize_single().value
}

/// Quantum capacity of a single channel: the single-letter optimum when
/// degradable, zero when antidegradable, an error otherwise.
pub fn q_capacity<T: Real>(ch: &KrausChannel<T>) -> Result<CapacityResult<T>> {
    let verdict = find_degrading_map(ch)?;
    if verdict.is_degradable() {
        let sol = Problem::single(ch, Objective::Coherent, OptimizerConfig::default()).maximize_single();
        return Ok(CapacityResult::optimized(sol, verdict));
    }
    if is_antidegradable(ch)? {
        return Ok(CapacityResult {
            value: T::zero(),
            optimal_p: vec![T::one()],
            optimal_block_states: vec![DensityMatrix::maximally_mixed(ch.dim_in())],
            lower_bound: T::zero(),
            upper_bound: T::zero(),
            method: Method::AntidegradableZero,
            degradability: verdict,
        });
    }
    Err(Error::UndeterminedDegradability {
        lower: 0.0,
        upper: (ch.dim_in().min(ch.dim_out()) as f64).log2(),
    })
}

/// Block-coordinate ascent of the coherent-information objective at fixed
/// weights `p`, started from `start`. Returns the value reached and the states.
pub fn optimize_block_states<T: Real>(
    pc: &PcdsChannel<T>,
    p: &[T],
    start: &[DensityMatrix<T>],
) -> Result<(T, Vec<DensityMatrix<T>>)> {
    let n = pc.num_blocks();
    if p.len() != n || start.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} blocks but {} weights and {} states",
            p.len(),
            start.len()
        )));
    }
    if let Some(l) = (0..n).find(|&l| start[l].dim() != pc.partition().dim(l)) {
        return Err(Error::DimensionMismatch(format!(
            "start state {l} has dimension {}, block has {}",
            start[l].dim(),
            pc.partition().dim(l)
        )));
    }
    let problem = Problem::from_pcds(pc, Objective::Coherent, OptimizerConfig::default());
    let mut taus: Vec<_> = start.iter().map(|s| s.as_matrix().clone()).collect();
    let value = problem.solve_states(p, &mut taus);
    let states = taus.into_iter().map(|t| DensityMatrix::new_unchecked(t.hermitian_part())).collect();
    Ok((value, states))
}

/// Inner maximum (over block states) of the two-block objective at each
/// weight in `ps`; used to audit unimodality of the outer search.
pub fn q_weight_profile<T: Real>(pc: &PcdsChannel<T>, ps: &[T]) -> Result<Vec<T>> {
    if pc.num_blocks() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "weight profile needs two blocks, got {}",
            pc.num_blocks()
        )));
    }
    let problem = Problem::from_pcds(pc, Objective::Coherent, OptimizerConfig::default());
    let mut taus = problem.initial_states();
    Ok(ps
        .iter()
        .map(|&p| {
            let mut fresh = problem.initial_states();
            let a = problem.solve_states(&[p, T::one() - p], &mut fresh);
            let b = problem.solve_states(&[p, T::one() - p], &mut taus);
            a.max(b)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{binary_entropy, c};
    use crate::pcds::{make_combined, make_dephasing, make_single_decay, qubit_adc, BlockPartition};

    fn h(x: f64) -> f64 {
        binary_entropy(x).unwrap()
    }

    #[test]
    fn dephasing_endpoints() {
        let q = q_capacity_pcds(&make_dephasing::<f64>(2, 2, c(1.0)).unwrap()).unwrap();
        assert!((q.value - 2.0).abs() < 1e-6);
        let q = q_capacity_pcds(&make_dephasing::<f64>(1, 4, c(0.0)).unwrap()).unwrap();
        assert!((q.value - 2.0).abs() < 1e-6);
        assert_eq!(q.method, Method::SingleLetterOptimized);
    }

    #[test]
    fn dephasing_interior_matches_scalar_form() {
        for k in [0.3, 0.8] {
            let q = q_capacity_pcds(&make_dephasing::<f64>(2, 2, c(k)).unwrap()).unwrap();
            let want = 1.0 - h((1.0 - k) / 2.0) + 1.0;
            assert!((q.value - want).abs() < 1e-6, "κ={k}: {} vs {want}", q.value);
            assert!((q.optimal_p[0] - 0.5).abs() < 1e-3);
            let qe = qe_capacity_pcds(&make_dephasing::<f64>(2, 2, c(k)).unwrap()).unwrap();
            let want = 1.0 - 0.5 * h((1.0 - k) / 2.0) + 1.0;
            assert!((qe.value - want).abs() < 1e-6, "κ={k}: {} vs {want}", qe.value);
            assert!(qe.lower_bound <= qe.value + 1e-9 && qe.value <= qe.upper_bound + 1e-9);
        }
    }

    #[test]
    fn decay_plateau() {
        let l3 = 3f64.log2();
        let q = q_capacity_pcds(&make_single_decay::<f64>(4, 0.5).unwrap()).unwrap();
        assert!((q.value - l3).abs() < 1e-6, "{}", q.value);
        let q = q_capacity_pcds(&make_single_decay::<f64>(4, 0.8).unwrap()).unwrap();
        assert_eq!(q.method, Method::BoundSandwich);
        assert!((q.value - l3).abs() < 1e-6 && q.gap() < 1e-6);
    }

    #[test]
    fn combined_matches_direct_form() {
        let pc = make_combined::<f64>(3, 0.3, c(0.6)).unwrap();
        let q = q_capacity_pcds(&pc).unwrap().value;
        let d = combined_channel_q_direct(0.3, 0.6).unwrap();
        assert!((q - d).abs() < 1e-6, "{q} vs {d}");
    }

    #[test]
    fn qubit_adc_single_channel() {
        let q = q_capacity(&qubit_adc::<f64>(0.5).unwrap()).unwrap();
        assert!(q.value.abs() < 1e-9);
        let q = q_capacity(&qubit_adc::<f64>(0.7).unwrap()).unwrap();
        assert_eq!(q.method, Method::AntidegradableZero);
    }

    #[test]
    fn multiblock_identity_and_dephasing() {
        let id = PcdsChannel::from_channel(KrausChannel::<f64>::identity(3), BlockPartition::new(vec![1, 1, 1]).unwrap()).unwrap();
        let q = q_capacity_multiblock(&id).unwrap();
        assert!((q.value - 3f64.log2()).abs() < 1e-6);
        let part = BlockPartition::new(vec![1, 1, 2]).unwrap();
        let kraus = (0..3).map(|l| part.projector::<f64>(l).unwrap()).collect();
        let deph = PcdsChannel::from_channel(KrausChannel::new(kraus).unwrap(), part).unwrap();
        let q = q_capacity_multiblock(&deph).unwrap();
        assert!((q.value - 1.0).abs() < 1e-6, "{}", q.value);
    }

    #[test]
    fn json_fields() {
        let q = q_capacity_pcds(&make_dephasing::<f64>(1, 1, c(0.5)).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&q.to_json()).unwrap();
        for key in ["value", "lower", "upper", "method", "p", "degradable"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["method"], "SingleLetterOptimized");
    }
}
