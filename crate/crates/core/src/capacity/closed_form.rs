//! Scalar reductions of the capacity problem for the factory families.

use num_complex::Complex;

use crate::degradability::{find_antidegrading_map, find_degrading_map, Status};
use crate::error::{Error, Result};
use crate::matrix::{binary_entropy_unchecked as h2, ComplexMatrix};
use crate::pcds::{fixed_point, FixedPoint, PcdsChannel};
use crate::scalar::Real;

use super::optimize::bracketed_max;

const CLOSED_FORM_TOL: f64 = 1e-10;

fn check_kappa<T: Real>(kappa_abs: T) -> Result<()> {
    if !(kappa_abs >= T::zero() && kappa_abs <= T::one() + T::tol(1e-12)) {
        return Err(Error::DomainError(format!("|κ| = {kappa_abs} outside [0, 1]")));
    }
    Ok(())
}

fn check_dims(d_a: usize, d_b: usize) -> Result<()> {
    if d_a == 0 || d_b == 0 {
        return Err(Error::DomainError(format!("block dimensions ({d_a}, {d_b}) must be positive")));
    }
    Ok(())
}

/// Entropy of the two-level environment state of the dephasing family at weight `p`.
fn env_entropy<T: Real>(p: T, kappa_abs: T) -> T {
    let k2 = (kappa_abs * kappa_abs).min(T::one());
    let disc = (T::one() - T::lit(4.0) * p * (T::one() - p) * (T::one() - k2)).max(T::zero());
    h2((T::one() + disc.sqrt()) / T::lit(2.0))
}

/// Returns the maximizing weight of block A and the maximum.
fn dephasing_max<T: Real>(d_a: usize, d_b: usize, kappa_abs: T, env_weight: T) -> Result<(T, T)> {
    check_dims(d_a, d_b)?;
    check_kappa(kappa_abs)?;
    let ratio = (T::from_usize_lossy(d_a) / T::from_usize_lossy(d_b)).log2();
    let f = |p: T| h2(p) + p * ratio - env_weight * env_entropy(p, kappa_abs);
    let (p, best) = bracketed_max(f, T::tol(CLOSED_FORM_TOL));
    Ok((p, T::from_usize_lossy(d_b).log2() + best))
}

/// Quantum capacity of the dephasing family with maximally mixed block states,
/// as a one-dimensional maximization over the block weight.
pub fn closed_form_dephasing_q<T: Real>(d_a: usize, d_b: usize, kappa_abs: T) -> Result<T> {
    dephasing_max(d_a, d_b, kappa_abs, T::one()).map(|r| r.1)
}

/// Entanglement-assisted counterpart of [`closed_form_dephasing_q`].
pub fn closed_form_dephasing_qe<T: Real>(d_a: usize, d_b: usize, kappa_abs: T) -> Result<T> {
    dephasing_max(d_a, d_b, kappa_abs, T::lit(0.5)).map(|r| r.1)
}

fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Two-parameter form of the qutrit combined channel capacity (decay block a
/// qubit, identity block one-dimensional). Only valid while the decay block is
/// degradable.
pub fn combined_channel_q_direct<T: Real>(gamma: T, kappa_abs: T) -> Result<T> {
    if !(gamma >= T::zero() && gamma <= T::lit(0.5)) {
        return Err(Error::DomainError(format!(
            "γ = {gamma} outside [0, 1/2]; use the bound sandwich instead"
        )));
    }
    check_kappa(kappa_abs)?;
    let k2 = (kappa_abs * kappa_abs).min(T::one());
    let two = T::lit(2.0);
    let inner = |p: T, t: T| {
        let l0 = p * gamma * t;
        let a = T::one() - l0;
        let disc = (T::lit(4.0) * (T::one() - p) * p * (k2 - T::one()) * (T::one() - gamma * t) + a * a).max(T::zero());
        let lp = (a + disc.sqrt()) / two;
        let lm = (a - disc.sqrt()) / two;
        h2(p) + p * h2((T::one() - gamma) * t) + xlog2x(l0) + xlog2x(lp) + xlog2x(lm)
    };
    let tol = T::tol(CLOSED_FORM_TOL);
    let (_, best) = bracketed_max(|p: T| bracketed_max(|t: T| inner(p, t), tol).1, tol);
    Ok(best)
}

/// The scalars `c_j` when every operator is `c_j I`.
fn identity_coefficients<T: Real>(ops: &[ComplexMatrix<T>]) -> Option<Vec<Complex<T>>> {
    let tol = T::tol(1e-12);
    ops.iter()
        .map(|m| {
            let z = m[(0, 0)];
            let d = m.rows();
            let ok = (0..d).all(|i| {
                (0..d).all(|j| {
                    let want = if i == j { z } else { Complex::new(T::zero(), T::zero()) };
                    (m[(i, j)] - want).norm() <= tol
                })
            });
            ok.then_some(z)
        })
        .collect()
}

/// A pure state `ψ` with `M_j ψ = a_j ψ` for every Kraus operator of a block.
pub(crate) struct PureFixedPoint<T> {
    pub psi: Vec<Complex<T>>,
    pub coefficients: Vec<Complex<T>>,
}

pub(crate) fn pure_fixed_point<T: Real>(pc: &PcdsChannel<T>, l: usize) -> Option<PureFixedPoint<T>> {
    let block = pc.diagonal_block(l).ok()?;
    let FixedPoint::Unique { state, pure: true } = fixed_point(&block).ok()? else {
        return None;
    };
    let eig = crate::matrix::eigen::jacobi(state.as_matrix(), true);
    let psi = eig.vector(eig.values.len() - 1);
    let coefficients = block
        .kraus()
        .iter()
        .map(|m| {
            let mpsi = m.mul_vec(&psi);
            psi.iter().zip(&mpsi).map(|(a, b)| a.conj() * b).sum()
        })
        .collect();
    Some(PureFixedPoint { psi, coefficients })
}

/// Coding on `span{ψ} ⊕ B` when block `b` acts as the identity and block `a`
/// has a pure fixed point `ψ`.
pub(crate) struct RestrictedDephasing<T> {
    pub value: T,
    /// Weight on `ψ`.
    pub p: T,
    pub psi: Vec<Complex<T>>,
}

/// The restriction is a dephasing channel with `d_A = 1` whose coherence is
/// the overlap of the two environment vectors.
pub(crate) fn restricted_dephasing<T: Real>(pc: &PcdsChannel<T>, a: usize, b: usize) -> Option<RestrictedDephasing<T>> {
    let c = identity_coefficients(pc.block_kraus(b).ok()?)?;
    let fp = pure_fixed_point(pc, a)?;
    let overlap: Complex<T> = fp.coefficients.iter().zip(&c).map(|(x, y)| *x * y.conj()).sum();
    let (p, value) = dephasing_max(1, pc.partition().dim(b), overlap.norm().min(T::one()), T::one()).ok()?;
    Some(RestrictedDephasing { value, p, psi: fp.psi })
}

pub(crate) fn block_is_identity<T: Real>(pc: &PcdsChannel<T>, l: usize) -> bool {
    pc.block_kraus(l).ok().and_then(identity_coefficients).is_some()
}

/// `log₂(d_B + 1)` when block B acts as the identity and block A is both
/// degradable and antidegradable with a pure fixed point; `None` when any of
/// these cannot be certified.
pub fn lemma1_capacity<T: Real>(pc: &PcdsChannel<T>) -> Option<T> {
    if pc.num_blocks() != 2 {
        return None;
    }
    let (a, b) = (0, 1);
    if !block_is_identity(pc, b) {
        return None;
    }
    let block = pc.diagonal_block(a).ok()?;
    let degradable = find_degrading_map(&block).ok()?.status == Status::Degradable;
    let anti = find_antidegrading_map(&block).ok()?.status == Status::Degradable;
    if !(degradable && anti) {
        return None;
    }
    pure_fixed_point(pc, a)?;
    Some(T::from_usize_lossy(pc.partition().dim(b) + 1).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{binary_entropy, c};
    use crate::pcds::{make_dephasing, make_single_decay};

    fn h(x: f64) -> f64 {
        binary_entropy(x).unwrap()
    }

    #[test]
    fn qubit_dephasing_and_endpoints() {
        for k in [0.0, 0.3, 0.7, 1.0] {
            let q = closed_form_dephasing_q(1, 1, k).unwrap();
            assert!((q - (1.0 - h((1.0 - k) / 2.0))).abs() < 1e-9, "κ={k}");
            let qe = closed_form_dephasing_qe(1, 1, k).unwrap();
            assert!((qe - (1.0 - 0.5 * h((1.0 - k) / 2.0))).abs() < 1e-9, "κ={k}");
        }
        assert!((closed_form_dephasing_q(3, 3, 0.0).unwrap() - 3f64.log2()).abs() < 1e-9);
        assert!((closed_form_dephasing_q(1, 4, 0.0f64).unwrap() - 2.0).abs() < 1e-9);
        assert!((closed_form_dephasing_q(2, 3, 1.0).unwrap() - 5f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn equal_blocks_shift_by_a_constant() {
        for k in [0.1, 0.5, 0.9] {
            let d = closed_form_dephasing_q(3, 3, k).unwrap() - closed_form_dephasing_q(1, 1, k).unwrap();
            assert!((d - 3f64.log2()).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(closed_form_dephasing_q(1, 1, 1.5).is_err());
        assert!(closed_form_dephasing_q(0, 1, 0.5).is_err());
        assert!(combined_channel_q_direct(0.7, 0.5).is_err());
    }

    #[test]
    fn combined_direct_examples() {
        assert!((combined_channel_q_direct(0.0f64, 1.0).unwrap() - 3f64.log2()).abs() < 1e-9);
        assert!((combined_channel_q_direct(0.0f64, 0.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((combined_channel_q_direct(0.5f64, 1.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lemma1_examples() {
        let q = lemma1_capacity(&make_single_decay::<f64>(3, 0.5).unwrap()).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
        let q = lemma1_capacity(&make_single_decay::<f64>(5, 0.5).unwrap()).unwrap();
        assert!((q - 2.0).abs() < 1e-12);
        assert!(lemma1_capacity(&make_dephasing::<f64>(2, 2, c(0.9)).unwrap()).is_none());
        assert!(lemma1_capacity(&make_single_decay::<f64>(3, 0.3).unwrap()).is_none());
    }

    #[test]
    fn restricted_bound_on_decay_family() {
        let pc = make_single_decay::<f64>(4, 0.8).unwrap();
        let q = restricted_dephasing(&pc, 0, 1).unwrap().value;
        assert!((q - 3f64.log2()).abs() < 1e-9);
    }
}
