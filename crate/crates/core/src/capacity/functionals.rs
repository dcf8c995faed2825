//! Entropic functionals of channels and states.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{binary_entropy, entropy_of_hermitian, von_neumann_entropy, ComplexMatrix, DensityMatrix};
use crate::scalar::Real;

fn check_dims<T: Real>(ch: &KrausChannel<T>, rho: &DensityMatrix<T>) -> Result<()> {
    if ch.dim_in() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel input dimension {} but state dimension {}",
            ch.dim_in(),
            rho.dim()
        )));
    }
    Ok(())
}

/// `S(Φ(ρ)) − S(Φ̃(ρ))`.
pub fn coherent_information<T: Real>(ch: &KrausChannel<T>, rho: &DensityMatrix<T>) -> Result<T> {
    check_dims(ch, rho)?;
    let out = ch.apply_unchecked(rho.as_matrix());
    let env = ch.complementary().apply_unchecked(rho.as_matrix());
    Ok(entropy_of_hermitian(&out) - entropy_of_hermitian(&env))
}

/// `S(ρ) + S(Φ(ρ)) − S(Φ̃(ρ))`.
pub fn mutual_information<T: Real>(ch: &KrausChannel<T>, rho: &DensityMatrix<T>) -> Result<T> {
    Ok(von_neumann_entropy(rho) + coherent_information(ch, rho)?)
}

/// `S(pρ′ + (1−p)ρ″) − pS(ρ′) − (1−p)S(ρ″)`.
pub fn delta_s_p<T: Real>(p: T, a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    check_weight(p)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(delta_s_matrices(p, a.as_matrix(), b.as_matrix()))
}

pub(crate) fn delta_s_matrices<T: Real>(p: T, a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    let q = T::one() - p;
    let mix = &a.scale(p) + &b.scale(q);
    entropy_of_hermitian(&mix) - p * entropy_of_hermitian(a) - q * entropy_of_hermitian(b)
}

fn check_weight<T: Real>(p: T) -> Result<()> {
    binary_entropy(p).map(|_| ())
}

/// Block channels sharing the Kraus index, so their complementary outputs
/// live in one environment.
fn check_shared<T: Real>(phi_a: &KrausChannel<T>, phi_b: &KrausChannel<T>) -> Result<()> {
    if phi_a.num_kraus() != phi_b.num_kraus() {
        return Err(Error::DimensionMismatch(format!(
            "block channels have {} and {} Kraus operators; the shared index needs equal counts",
            phi_a.num_kraus(),
            phi_b.num_kraus()
        )));
    }
    Ok(())
}

/// `J_p = p·I_coh(Φ_A; τ_A) + (1−p)·I_coh(Φ_B; τ_B) − ΔS_p(Φ̃_A[τ_A], Φ̃_B[τ_B])`.
pub fn j_p_functional<T: Real>(
    p: T,
    phi_a: &KrausChannel<T>,
    tau_a: &DensityMatrix<T>,
    phi_b: &KrausChannel<T>,
    tau_b: &DensityMatrix<T>,
) -> Result<T> {
    check_weight(p)?;
    check_shared(phi_a, phi_b)?;
    let ia = coherent_information(phi_a, tau_a)?;
    let ib = coherent_information(phi_b, tau_b)?;
    let ea = phi_a.complementary().apply_unchecked(tau_a.as_matrix());
    let eb = phi_b.complementary().apply_unchecked(tau_b.as_matrix());
    Ok(p * ia + (T::one() - p) * ib - delta_s_matrices(p, &ea, &eb))
}

/// `I_p`: as [`j_p_functional`] with mutual informations in place of coherent ones.
pub fn i_p_functional<T: Real>(
    p: T,
    phi_a: &KrausChannel<T>,
    tau_a: &DensityMatrix<T>,
    phi_b: &KrausChannel<T>,
    tau_b: &DensityMatrix<T>,
) -> Result<T> {
    let j = j_p_functional(p, phi_a, tau_a, phi_b, tau_b)?;
    let q = T::one() - p;
    Ok(j + p * von_neumann_entropy(tau_a) + q * von_neumann_entropy(tau_b))
}
