//! Lower and upper bounds on the quantum capacity of a PCDS channel.

use num_complex::Complex;

use crate::degradability::{find_antidegrading_map, find_degrading_map, Status};
use crate::error::{Error, Result};
use crate::matrix::DensityMatrix;
use crate::pcds::{make_combined, make_dephasing, make_single_decay, Family, PcdsChannel};
use crate::scalar::Real;

use super::closed_form::restricted_dephasing;
use super::optimize::{Objective, OptimizerConfig, Problem};
use super::{pcds_verdict, q_capacity_pcds_with};

/// Bounds closer than this give a value.
pub const SANDWICH_GAP: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct Bounds<T> {
    pub lower: T,
    pub upper: T,
    /// Block weights and states achieving `lower`.
    pub witness_p: Vec<T>,
    pub witness_states: Vec<DensityMatrix<T>>,
}

impl<T: Real> Bounds<T> {
    pub fn gap(&self) -> T {
        self.upper - self.lower
    }

    pub fn pair(&self) -> (T, T) {
        (self.lower, self.upper)
    }
}

/// Capacity of one diagonal block, if its degradability can be settled.
fn block_capacity<T: Real>(pc: &PcdsChannel<T>, l: usize, config: &OptimizerConfig) -> Result<Option<(T, DensityMatrix<T>)>> {
    let block = pc.diagonal_block(l)?;
    if find_degrading_map(&block)?.status == Status::Degradable {
        let sol = Problem::single(&block, Objective::Coherent, *config).maximize_single();
        let state = sol.states.into_iter().next().expect("one block");
        return Ok(Some((sol.value, state)));
    }
    if find_antidegrading_map(&block)?.status == Status::Degradable {
        return Ok(Some((T::zero(), DensityMatrix::maximally_mixed(block.dim_in()))));
    }
    Ok(None)
}

/// Upper bounds from earlier members of the factory family: the channel is a
/// later channel composed with them, so data processing applies.
fn family_upper<T: Real>(pc: &PcdsChannel<T>, config: &OptimizerConfig) -> Result<Option<T>> {
    let d_c = pc.partition().total();
    let half = T::lit(0.5);
    let q = |p: PcdsChannel<T>| q_capacity_pcds_with(&p, config).map(|r| r.value);
    match pc.family() {
        Family::SingleDecay { gamma } if gamma > 0.5 => Ok(Some(q(make_single_decay(d_c, half)?)?)),
        Family::Combined { gamma, kappa } if gamma > 0.5 => {
            let kappa = Complex::new(T::lit(kappa.re), T::lit(kappa.im));
            let decayed = q(make_combined(d_c, half, kappa)?)?;
            let dephased = q(make_dephasing(2, d_c - 2, kappa)?)?;
            Ok(Some(decayed.min(dephased)))
        }
        _ => Ok(None),
    }
}

/// Best available lower and upper bounds on `Q`.
///
/// Lower: the best block capacity, or coding on a pure fixed point of one
/// block together with an identity block. Upper: `log₂ d_C`, data processing
/// from family predecessors, and `log₂ Σ 2^{Q_ℓ}` when the channel is
/// degradable.
pub fn capacity_bounds<T: Real>(pc: &PcdsChannel<T>) -> Result<Bounds<T>> {
    capacity_bounds_with(pc, &OptimizerConfig::default())
}

pub fn capacity_bounds_with<T: Real>(pc: &PcdsChannel<T>, config: &OptimizerConfig) -> Result<Bounds<T>> {
    let part = pc.partition();
    let n = pc.num_blocks();
    let mixed: Vec<DensityMatrix<T>> = part.dims().iter().map(|&d| DensityMatrix::maximally_mixed(d)).collect();
    let unit = |l: usize| {
        let mut p = vec![T::zero(); n];
        p[l] = T::one();
        p
    };

    let mut best = Bounds {
        lower: T::zero(),
        upper: T::from_usize_lossy(part.total()).log2(),
        witness_p: unit(0),
        witness_states: mixed.clone(),
    };
    let mut block_q = Vec::with_capacity(n);
    for l in 0..n {
        let cap = block_capacity(pc, l, config)?;
        if let Some((q, state)) = &cap {
            if *q > best.lower {
                best.lower = *q;
                best.witness_p = unit(l);
                best.witness_states = mixed.clone();
                best.witness_states[l] = state.clone();
            }
        }
        block_q.push(cap.map(|c| c.0));
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let Some(r) = restricted_dephasing(pc, a, b) else { continue };
            if r.value > best.lower {
                let mut p = vec![T::zero(); n];
                p[a] = r.p;
                p[b] = T::one() - r.p;
                let mut states = mixed.clone();
                states[a] = DensityMatrix::from_pure(&r.psi).unwrap_or_else(|_| mixed[a].clone());
                best.lower = r.value;
                best.witness_p = p;
                best.witness_states = states;
            }
        }
    }

    if let Some(u) = family_upper(pc, config)? {
        best.upper = best.upper.min(u);
    }
    if block_q.iter().all(Option::is_some) && pcds_verdict(pc)?.is_degradable() {
        let sum: T = block_q.iter().flatten().map(|&q| T::lit(2.0).powf(q)).sum();
        best.upper = best.upper.min(sum.log2());
    }
    if best.lower > best.upper + T::tol(1e-9) {
        return Err(Error::NumericalFailure(format!(
            "lower bound {} exceeds upper bound {}",
            best.lower, best.upper
        )));
    }
    Ok(best)
}
