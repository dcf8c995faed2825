//! Random PCDS channels built from degradable blocks.
#![allow(dead_code)]

use num_complex::Complex;
use pcds::matrix::ComplexMatrix;
use pcds::pcds::{qubit_adc, BlockPartition, PcdsChannel};
use pcds::random;
use rand::Rng;

pub type M = ComplexMatrix<f64>;

pub fn c(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

#[derive(Debug, Clone, Copy)]
pub enum BlockKind {
    Decay(f64),
    Dephasing { dim: usize, q: f64 },
    Identity(usize),
}

impl BlockKind {
    pub fn dim(&self) -> usize {
        match *self {
            BlockKind::Decay(_) => 2,
            BlockKind::Dephasing { dim, .. } | BlockKind::Identity(dim) => dim,
        }
    }

    pub fn kraus(&self) -> Vec<M> {
        match *self {
            BlockKind::Decay(g) => qubit_adc::<f64>(g).unwrap().into_kraus(),
            BlockKind::Dephasing { dim, q } => {
                let phases: Vec<Complex<f64>> = (0..dim)
                    .map(|k| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / dim as f64))
                    .collect();
                let z = M::from_fn(dim, dim, |i, j| if i == j { phases[i] } else { c(0.0) });
                vec![M::identity(dim).scale(q.sqrt()), z.scale((1.0 - q).sqrt())]
            }
            BlockKind::Identity(dim) => vec![M::identity(dim)],
        }
    }
}

pub fn random_kind<R: Rng>(rng: &mut R, max_dim: usize) -> BlockKind {
    loop {
        let kind = match rng.gen_range(0..3) {
            0 => BlockKind::Decay(rng.gen_range(0.05..0.45)),
            1 => BlockKind::Dephasing {
                dim: rng.gen_range(1..=3),
                q: rng.gen_range(0.1..0.9),
            },
            _ => BlockKind::Identity(rng.gen_range(1..=3)),
        };
        if kind.dim() <= max_dim {
            return kind;
        }
    }
}

/// Mixes a Kraus list padded to `k` operators by a random `k × k` unitary;
/// the block channel is unchanged but its environment vectors rotate.
pub fn mixed_kraus<R: Rng>(ops: &[M], k: usize, rng: &mut R) -> Vec<M> {
    let d = ops[0].rows();
    let mut padded = ops.to_vec();
    padded.resize(k, M::zeros(d, d));
    let u = random::unitary::<f64, _>(k, rng);
    (0..k)
        .map(|i| {
            let mut acc = M::zeros(d, d);
            for (j, op) in padded.iter().enumerate() {
                acc += &op.scale_complex(u[(i, j)]);
            }
            acc
        })
        .collect()
}

/// Random PCDS channel with `n` blocks on at most `max_total` dimensions.
pub fn random_pcds<R: Rng>(rng: &mut R, n: usize, max_total: usize) -> (PcdsChannel<f64>, Vec<BlockKind>) {
    loop {
        let kinds: Vec<BlockKind> = (0..n).map(|_| random_kind(rng, 3)).collect();
        let total: usize = kinds.iter().map(BlockKind::dim).sum();
        if total > max_total {
            continue;
        }
        let k = kinds.iter().map(|b| b.kraus().len()).max().unwrap();
        let blocks = kinds.iter().map(|b| mixed_kraus(&b.kraus(), k, rng)).collect();
        let partition = BlockPartition::new(kinds.iter().map(BlockKind::dim).collect()).unwrap();
        return (PcdsChannel::from_blocks(partition, blocks).unwrap(), kinds);
    }
}
