//! Channel families: dephasing, multi-level amplitude damping, and their
//! combination.

use num_complex::Complex;

use super::{BlockPartition, Family, PcdsChannel};
use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{c, ComplexMatrix};
use crate::scalar::Real;

const DOMAIN_SLACK: f64 = 1e-12;

fn check_kappa<T: Real>(kappa: Complex<T>) -> Result<T> {
    let k = kappa.norm();
    if !(k <= T::one() + T::tol(DOMAIN_SLACK)) {
        return Err(Error::DomainError(format!("|κ| = {} exceeds 1", k.to_f64_lossy())));
    }
    Ok(k.min(T::one()))
}

fn check_gamma<T: Real>(gamma: T) -> Result<T> {
    let slack = T::tol(DOMAIN_SLACK);
    if !(gamma >= -slack && gamma <= T::one() + slack) {
        return Err(Error::DomainError(format!(
            "damping γ = {} outside [0, 1]",
            gamma.to_f64_lossy()
        )));
    }
    Ok(gamma.max(T::zero()).min(T::one()))
}

fn check_decay_dim(d_c: usize) -> Result<()> {
    if d_c < 3 {
        return Err(Error::DomainError(format!(
            "single-decay channels need d_C ≥ 3, got {d_c}"
        )));
    }
    Ok(())
}

fn to_f64_complex<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// Qubit amplitude damping `{diag(1, √(1−γ)), √γ|0⟩⟨1|}`.
pub fn qubit_adc<T: Real>(gamma: T) -> Result<KrausChannel<T>> {
    let g = check_gamma(gamma)?;
    KrausChannel::new_cpt(adc_kraus(g).to_vec())
}

fn adc_kraus<T: Real>(g: T) -> [ComplexMatrix<T>; 2] {
    let mut m0 = ComplexMatrix::identity(2);
    m0[(1, 1)] = c((T::one() - g).sqrt());
    let mut m1 = ComplexMatrix::zeros(2, 2);
    m1[(0, 1)] = c(g.sqrt());
    [m0, m1]
}

/// `Δ^(κ)` on `H_A ⊕ H_B`: Kraus `{κP_A + P_B, √(1−|κ|²)P_A}`.
///
/// Diagonal blocks are untouched, `Θ_AB ↦ κΘ_AB`, `Θ_BA ↦ κ*Θ_BA`.
pub fn make_dephasing<T: Real>(d_a: usize, d_b: usize, kappa: Complex<T>) -> Result<PcdsChannel<T>> {
    let k = check_kappa(kappa)?;
    let ia = ComplexMatrix::identity(d_a);
    let ib = ComplexMatrix::identity(d_b);
    let rest = (T::one() - k * k).max(T::zero()).sqrt();
    let pc = PcdsChannel::from_blocks(
        BlockPartition::two(d_a, d_b)?,
        vec![
            vec![ia.scale_complex(kappa), ia.scale(rest)],
            vec![ib, ComplexMatrix::zeros(d_b, d_b)],
        ],
    )?;
    Ok(pc.with_family(Family::Dephasing {
        kappa: to_f64_complex(kappa),
    }))
}

/// One decay rate `γ_{ji}` from level `from` (j) to level `to` (i < j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadRate<T> {
    pub from: usize,
    pub to: usize,
    pub gamma: T,
}

/// Multi-level amplitude damping: `{M⁽⁰⁾} ∪ {√γ_{ji}|i⟩⟨j|}` with
/// `M⁽⁰⁾ = |0⟩⟨0| + Σⱼ √(1−ξⱼ)|j⟩⟨j|` and `ξⱼ = Σᵢ γ_{ji} ≤ 1`.
pub fn make_mad<T: Real>(d_c: usize, rates: &[MadRate<T>]) -> Result<KrausChannel<T>> {
    if d_c == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    let mut xi = vec![T::zero(); d_c];
    for r in rates {
        if !(r.to < r.from && r.from < d_c) {
            return Err(Error::DomainError(format!(
                "decay {} -> {} is not a downward transition in dimension {d_c}",
                r.from, r.to
            )));
        }
        check_gamma(r.gamma)?;
        xi[r.from] += r.gamma;
    }
    for (j, &x) in xi.iter().enumerate() {
        if x > T::one() + T::tol(DOMAIN_SLACK) {
            return Err(Error::RateOverflow {
                level: j,
                total: x.to_f64_lossy(),
            });
        }
    }
    let m0 = ComplexMatrix::from_diagonal(
        &xi.iter()
            .map(|&x| (T::one() - x).max(T::zero()).sqrt())
            .collect::<Vec<_>>(),
    );
    let mut kraus = vec![m0];
    for r in rates {
        let mut m = ComplexMatrix::zeros(d_c, d_c);
        m[(r.to, r.from)] = c(r.gamma.max(T::zero()).sqrt());
        kraus.push(m);
    }
    KrausChannel::new_cpt(kraus)
}

/// `Ω^[γ]`: decay `|1⟩ → |0⟩` only; partition `(2, d_C − 2)`.
pub fn make_single_decay<T: Real>(d_c: usize, gamma: T) -> Result<PcdsChannel<T>> {
    check_decay_dim(d_c)?;
    let g = check_gamma(gamma)?;
    let d_b = d_c - 2;
    let [a0, a1] = adc_kraus(g);
    let pc = PcdsChannel::from_blocks(
        BlockPartition::two(2, d_b)?,
        vec![vec![a0, a1], vec![ComplexMatrix::identity(d_b), ComplexMatrix::zeros(d_b, d_b)]],
    )?;
    Ok(pc.with_family(Family::SingleDecay {
        gamma: g.to_f64_lossy(),
    }))
}

/// `Ω^[γ](κ) = Δ^(κ) ∘ Ω^[γ]` with three Kraus operators:
/// `diag(1, √(1−γ)) ⊕ κ*I_B`, `√γ|0⟩⟨1| ⊕ 0`, `0 ⊕ √(1−|κ|²)I_B`.
pub fn make_combined<T: Real>(d_c: usize, gamma: T, kappa: Complex<T>) -> Result<PcdsChannel<T>> {
    check_decay_dim(d_c)?;
    let g = check_gamma(gamma)?;
    let k = check_kappa(kappa)?;
    let d_b = d_c - 2;
    let [a0, a1] = adc_kraus(g);
    let ib = ComplexMatrix::identity(d_b);
    let rest = (T::one() - k * k).max(T::zero()).sqrt();
    let pc = PcdsChannel::from_blocks(
        BlockPartition::two(2, d_b)?,
        vec![
            vec![a0, a1, ComplexMatrix::zeros(2, 2)],
            vec![ib.scale_complex(kappa.conj()), ComplexMatrix::zeros(d_b, d_b), ib.scale(rest)],
        ],
    )?;
    Ok(pc.with_family(Family::Combined {
        gamma: g.to_f64_lossy(),
        kappa: to_f64_complex(kappa),
    }))
}
