//! Degradability certificates.
//!
//! A channel `Φ` is degradable when `Φ̃ = Λ ∘ Φ` for some channel `Λ`. On
//! transfer matrices this is `T(Λ)·T(Φ) = T(Φ̃)`; the minimal-norm solution
//! `T(Φ̃)·pinv(T(Φ))` is tested for consistency (residual) and for complete
//! positivity and trace preservation through its Choi matrix.
//!
//! When `T(Φ)` has full row rank the solution is unique, so a CP failure is a
//! proof of non-degradability. Otherwise the kernel leaves freedom that a
//! minimal-norm solve does not explore and the verdict is `Undetermined`.

use serde::{Deserialize, Serialize};

use crate::channel::{ChoiMatrix, KrausChannel, CP_TOL};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Svd, SINGULAR_CUTOFF};
use crate::pcds::PcdsChannel;
use crate::scalar::Real;

/// Residual at or below which the linear reconstruction is accepted.
pub const ACCEPT_RESIDUAL: f64 = 1e-8;
/// Residual above which no linear solution exists.
pub const REJECT_RESIDUAL: f64 = 1e-6;
/// Tolerance on `‖Tr_out C(Λ) − I‖_max`.
pub const CONNECTING_TP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Degradable,
    NotDegradable,
    Undetermined,
}

/// Outcome of a degradability (or, with roles swapped, antidegradability) test.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradabilityVerdict<T> {
    pub status: Status,
    /// `‖T(Λ)T(Φ) − T(Φ̃)‖_F`.
    pub residual: T,
    pub min_choi_eig: T,
    /// The connecting map when `status == Degradable`.
    pub certificate: Option<KrausChannel<T>>,
    /// Dimension of the freedom left in `T(Λ)` by the linear constraints.
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: Status,
    pub residual: f64,
    pub min_choi_eig: f64,
}

impl<T: Real> DegradabilityVerdict<T> {
    pub fn is_degradable(&self) -> bool {
        self.status == Status::Degradable
    }

    pub fn to_json_value(&self) -> VerdictJson {
        VerdictJson {
            status: self.status,
            residual: self.residual.to_f64_lossy(),
            min_choi_eig: self.min_choi_eig.to_f64_lossy(),
        }
    }
}

/// Solves `Λ ∘ from = to` for `Λ` and classifies the minimal-norm solution.
pub fn connecting_map<T: Real>(from: &KrausChannel<T>, to: &KrausChannel<T>) -> Result<DegradabilityVerdict<T>> {
    if from.dim_in() != to.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "channels act on dimensions {} and {}",
            from.dim_in(),
            to.dim_in()
        )));
    }
    let t_from = from.transfer_matrix();
    let t_to = to.transfer_matrix();
    let svd = Svd::new(&t_from);
    let rel = T::tol(SINGULAR_CUTOFF);
    let t_lambda = &t_to * &svd.pseudo_inverse(rel);
    let residual = (&t_lambda * &t_from).frobenius_distance(&t_to);
    let kernel_dim = t_from.rows() - svd.rank(rel);

    let choi = ChoiMatrix::from_transfer(&t_lambda, from.dim_out(), to.dim_out())?;
    let min_choi_eig = choi.min_eigenvalue();
    let cp = min_choi_eig >= -T::tol(CP_TOL);
    let tp = choi.tp_residual() <= T::tol(CONNECTING_TP_TOL);

    let status = if residual > T::tol(REJECT_RESIDUAL) {
        Status::NotDegradable
    } else if residual <= T::tol(ACCEPT_RESIDUAL) && cp && tp {
        Status::Degradable
    } else if kernel_dim == 0 && !cp {
        Status::NotDegradable
    } else {
        Status::Undetermined
    };
    let certificate = match status {
        Status::Degradable => Some(choi.to_kraus()?),
        _ => None,
    };
    Ok(DegradabilityVerdict {
        status,
        residual,
        min_choi_eig,
        certificate,
        kernel_dim,
    })
}

/// Looks for `Λ` with `Φ̃ = Λ ∘ Φ`. Zero Kraus operators are pruned first.
pub fn find_degrading_map<T: Real>(ch: &KrausChannel<T>) -> Result<DegradabilityVerdict<T>> {
    let phi = ch.pruned();
    connecting_map(&phi, &phi.complementary())
}

/// Looks for `Λ` with `Φ = Λ ∘ Φ̃`; `Degradable` here means antidegradable.
pub fn find_antidegrading_map<T: Real>(ch: &KrausChannel<T>) -> Result<DegradabilityVerdict<T>> {
    let phi = ch.pruned();
    connecting_map(&phi.complementary(), &phi)
}

/// Global degrading map `Λ_EC = ⊕ₗ Λ_{E Aₗ}` from per-block maps into a
/// common environment: the union of block Kraus operators padded to the full
/// input dimension.
pub fn direct_sum_degrading<T: Real>(blocks: &[KrausChannel<T>]) -> Result<KrausChannel<T>> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no block maps supplied".into()))?;
    let env = first.dim_out();
    if let Some(l) = blocks.iter().position(|b| b.dim_out() != env) {
        return Err(Error::DimensionMismatch(format!(
            "block map {l} outputs dimension {}, block 0 outputs {env}",
            blocks[l].dim_out()
        )));
    }
    let total: usize = blocks.iter().map(KrausChannel::dim_in).sum();
    let mut kraus = Vec::new();
    let mut offset = 0;
    for b in blocks {
        for k in b.kraus() {
            let mut m = ComplexMatrix::zeros(env, total);
            m.set_block(0, offset, k);
            kraus.push(m);
        }
        offset += b.dim_in();
    }
    KrausChannel::new_cpt(kraus)
}

/// Block-wise degradability test for a PCDS channel.
///
/// `oracle` decides each diagonal block; the channel is degradable iff every
/// block is. When all blocks certify, the global map is assembled with
/// [`direct_sum_degrading`] against the shared-index environment and checked
/// on transfer matrices.
pub fn pcds_degradability<T: Real, F>(pc: &PcdsChannel<T>, oracle: F) -> Result<DegradabilityVerdict<T>>
where
    F: Fn(&KrausChannel<T>) -> Result<DegradabilityVerdict<T>>,
{
    let n = pc.num_blocks();
    let mut verdicts = Vec::with_capacity(n);
    for l in 0..n {
        verdicts.push(oracle(&pc.diagonal_block(l)?)?);
    }
    let worst_residual = verdicts.iter().map(|v| v.residual).fold(T::zero(), T::max);
    let worst_eig = verdicts.iter().map(|v| v.min_choi_eig).fold(T::infinity(), T::min);
    let kernel_dim = verdicts.iter().map(|v| v.kernel_dim).sum();
    let combined = |status| DegradabilityVerdict {
        status,
        residual: worst_residual,
        min_choi_eig: worst_eig,
        certificate: None,
        kernel_dim,
    };
    if verdicts.iter().any(|v| v.status == Status::NotDegradable) {
        return Ok(combined(Status::NotDegradable));
    }
    if verdicts.iter().any(|v| v.status == Status::Undetermined) {
        return Ok(combined(Status::Undetermined));
    }

    // Re-solve each block against its complementary in the shared environment
    // (zero Kraus operators kept), so the block maps have a common codomain.
    let mut block_maps = Vec::with_capacity(n);
    for l in 0..n {
        let block = pc.diagonal_block(l)?;
        let v = connecting_map(&block, &block.complementary())?;
        match v.certificate {
            Some(map) if v.status == Status::Degradable => block_maps.push(map),
            _ => return Ok(combined(Status::Undetermined)),
        }
    }
    let lambda = direct_sum_degrading(&block_maps)?;
    let global = pc.channel();
    let lhs = &lambda.transfer_matrix() * &global.transfer_matrix();
    let residual = lhs.frobenius_distance(&global.complementary().transfer_matrix());
    let min_choi_eig = lambda.choi().min_eigenvalue();
    let status = if residual <= T::tol(ACCEPT_RESIDUAL) {
        Status::Degradable
    } else {
        Status::Undetermined
    };
    Ok(DegradabilityVerdict {
        status,
        residual,
        min_choi_eig,
        certificate: (status == Status::Degradable).then_some(lambda),
        kernel_dim,
    })
}
