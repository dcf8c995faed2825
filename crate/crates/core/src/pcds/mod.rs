//! Partially coherent direct-sum (PCDS) structure.
//!
//! The input space is split into contiguous blocks. A channel is PCDS when
//! every Kraus operator is block diagonal; the per-block operators then share
//! the global Kraus index, which is also the environment index of the
//! complementary channel.

mod factories;
mod fixed_point;

use num_complex::Complex;

use crate::channel::{KrausChannel, TP_TOL};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DensityMatrix};
use crate::scalar::Real;

pub use factories::{make_combined, make_dephasing, make_mad, make_single_decay, qubit_adc, MadRate};
pub use fixed_point::{fixed_point, FixedPoint};

/// Off-block entries above this magnitude break the PCDS structure.
pub const OFF_BLOCK_TOL: f64 = 1e-10;

/// Ordered block dimensions `(d₁, …, dₙ)`, `n ≥ 2`, each block contiguous.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockPartition {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "a partition needs at least two blocks, got {}",
                dims.len()
            )));
        }
        if let Some(l) = dims.iter().position(|&d| d == 0) {
            return Err(Error::DimensionMismatch(format!("block {l} has dimension 0")));
        }
        let offsets = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        Ok(Self { dims, offsets })
    }

    /// `H_A ⊕ H_B`.
    pub fn two(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim(&self, l: usize) -> usize {
        self.dims[l]
    }

    pub fn offset(&self, l: usize) -> usize {
        self.offsets[l]
    }

    pub fn range(&self, l: usize) -> std::ops::Range<usize> {
        self.offsets[l]..self.offsets[l] + self.dims[l]
    }

    /// Block containing basis index `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        (0..self.dims.len()).find(|&l| self.range(l).contains(&i))
    }

    fn check_index(&self, l: usize) -> Result<()> {
        if l >= self.dims.len() {
            return Err(Error::IndexOutOfRange {
                index: l,
                len: self.dims.len(),
            });
        }
        Ok(())
    }

    pub fn projector<T: Real>(&self, l: usize) -> Result<ComplexMatrix<T>> {
        self.check_index(l)?;
        Ok(ComplexMatrix::embed(&ComplexMatrix::identity(self.dims[l]), self.total(), self.offsets[l]))
    }

    fn check_total(&self, d: usize) -> Result<()> {
        if self.total() != d {
            return Err(Error::DimensionMismatch(format!(
                "partition {:?} sums to {}, channel dimension is {d}",
                self.dims,
                self.total()
            )));
        }
        Ok(())
    }
}

/// Which factory built a channel. Capacity bounds for non-degradable channels
/// use it to locate a degradable channel that the given one degrades from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `Δ^(κ)` with κ on the coherences between the two blocks.
    Dephasing { kappa: Complex<f64> },
    /// `Ω^[γ]`, decay `|1⟩ → |0⟩` inside block A.
    SingleDecay { gamma: f64 },
    /// `Ω^[γ](κ) = Δ^(κ) ∘ Ω^[γ]`.
    Combined { gamma: f64, kappa: Complex<f64> },
    Custom,
}

/// Result of [`is_pcds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcdsCheck<T> {
    pub is_pcds: bool,
    pub max_off_block: T,
}

/// Checks that every Kraus operator is block diagonal w.r.t. `partition`.
pub fn is_pcds<T: Real>(ch: &KrausChannel<T>, partition: &BlockPartition) -> Result<PcdsCheck<T>> {
    if ch.dim_in() != ch.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "PCDS structure needs equal input and output dimensions, got {} -> {}",
            ch.dim_in(),
            ch.dim_out()
        )));
    }
    partition.check_total(ch.dim_in())?;
    let d = ch.dim_in();
    let block: Vec<usize> = (0..d).map(|i| partition.block_of(i).unwrap_or(0)).collect();
    let mut worst = T::zero();
    for k in ch.kraus() {
        for i in 0..d {
            for j in 0..d {
                if block[i] != block[j] {
                    worst = worst.max(k[(i, j)].norm());
                }
            }
        }
    }
    Ok(PcdsCheck {
        is_pcds: worst <= T::tol(OFF_BLOCK_TOL),
        max_off_block: worst,
    })
}

/// A channel together with its block structure and per-block Kraus lists.
#[derive(Debug, Clone, PartialEq)]
pub struct PcdsChannel<T> {
    partition: BlockPartition,
    channel: KrausChannel<T>,
    block_kraus: Vec<Vec<ComplexMatrix<T>>>,
    family: Family,
}

impl<T: Real> PcdsChannel<T> {
    /// Global Kraus `j` is the direct sum of the `j`-th operator of each block.
    pub fn from_blocks(partition: BlockPartition, block_kraus: Vec<Vec<ComplexMatrix<T>>>) -> Result<Self> {
        let n = partition.num_blocks();
        if block_kraus.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} block Kraus lists for {n} blocks",
                block_kraus.len()
            )));
        }
        let k = block_kraus[0].len();
        if k == 0 {
            return Err(Error::DimensionMismatch("empty Kraus list for block 0".into()));
        }
        for (l, list) in block_kraus.iter().enumerate() {
            if list.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "block {l} has {} Kraus operators, block 0 has {k}; pad with zeros",
                    list.len()
                )));
            }
            let d = partition.dim(l);
            if let Some(j) = list.iter().position(|m| m.rows() != d || m.cols() != d) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {j} of block {l} is not {d}x{d}"
                )));
            }
        }
        let kraus = (0..k)
            .map(|j| {
                let parts: Vec<_> = block_kraus.iter().map(|list| list[j].clone()).collect();
                ComplexMatrix::direct_sum(&parts)
            })
            .collect();
        let channel = KrausChannel::new_cpt(kraus)?;
        Ok(Self {
            partition,
            channel,
            block_kraus,
            family: Family::Custom,
        })
    }

    /// Extracts the block structure of a channel that is PCDS w.r.t. `partition`.
    pub fn from_channel(channel: KrausChannel<T>, partition: BlockPartition) -> Result<Self> {
        let check = is_pcds(&channel, &partition)?;
        if !check.is_pcds {
            return Err(Error::DomainError(format!(
                "channel is not block diagonal w.r.t. {:?} (off-block entry {:e})",
                partition.dims(),
                check.max_off_block.to_f64_lossy()
            )));
        }
        let report = channel.validate_cpt();
        if report.residual > T::tol(TP_TOL) {
            return Err(Error::NotTracePreserving {
                residual: report.residual.to_f64_lossy(),
            });
        }
        let block_kraus = (0..partition.num_blocks())
            .map(|l| {
                let (o, d) = (partition.offset(l), partition.dim(l));
                channel.kraus().iter().map(|m| m.block(o, o, d, d)).collect()
            })
            .collect();
        Ok(Self {
            partition,
            channel,
            block_kraus,
            family: Family::Custom,
        })
    }

    pub(crate) fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn channel(&self) -> &KrausChannel<T> {
        &self.channel
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.num_blocks()
    }

    pub fn block_kraus(&self, l: usize) -> Result<&[ComplexMatrix<T>]> {
        self.partition.check_index(l)?;
        Ok(&self.block_kraus[l])
    }

    /// `Φ_ℓℓ[·] = Σⱼ M_ℓ⁽ʲ⁾ · M_ℓ⁽ʲ⁾†` on block `ℓ`, zero operators kept so the
    /// Kraus index stays aligned with the global channel.
    pub fn diagonal_block(&self, l: usize) -> Result<KrausChannel<T>> {
        self.partition.check_index(l)?;
        KrausChannel::new(self.block_kraus[l].clone())
    }

    /// Embeds a block operator into the full space.
    pub fn embed(&self, l: usize, tau: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        self.partition.check_index(l)?;
        let d = self.partition.dim(l);
        if tau.rows() != d || tau.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "block {l} has dimension {d}, operator is {}x{}",
                tau.rows(),
                tau.cols()
            )));
        }
        Ok(ComplexMatrix::embed(tau, self.partition.total(), self.partition.offset(l)))
    }

    /// Block-diagonal state `⊕ₗ pₗ τₗ`.
    pub fn block_diagonal_state(&self, p: &[T], taus: &[DensityMatrix<T>]) -> Result<DensityMatrix<T>> {
        let n = self.num_blocks();
        if p.len() != n || taus.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "need {n} weights and block states, got {} and {}",
                p.len(),
                taus.len()
            )));
        }
        let mut rho = ComplexMatrix::zeros(self.partition.total(), self.partition.total());
        for l in 0..n {
            rho += &self.embed(l, &taus[l].as_matrix().scale(p[l]))?;
        }
        DensityMatrix::new(rho)
    }
}
