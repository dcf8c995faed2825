//! Channels as Kraus sets, with Choi and transfer-matrix views.
//!
//! Conventions: `vec` stacks columns, so the transfer matrix is
//! `T = Σⱼ conj(Mⱼ) ⊗ Mⱼ` and `T·vec(ρ) = vec(Φ(ρ))`. The Choi matrix is
//! unnormalized, `Σⱼ vec(Mⱼ) vec(Mⱼ)†`, living on `input ⊗ output` with trace
//! `dim_in`.

mod io;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{self, c, ComplexMatrix, DensityMatrix, Factor};
use crate::scalar::Real;

pub use io::{parse_channel_document, ChannelDocument};

/// Tolerance on `‖Σ M†M − I‖_max`.
pub const TP_TOL: f64 = 1e-9;
/// Kraus operators with Frobenius norm below this are dropped by [`KrausChannel::pruned`].
pub const PRUNE_TOL: f64 = 1e-12;
/// Choi eigenvalues at or above `−CP_TOL` count as nonnegative.
pub const CP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix<T>>,
}

/// Outcome of [`KrausChannel::validate_cpt`]. Complete positivity is implied by
/// the Kraus form and always reported as `true`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptReport<T> {
    pub is_cp: bool,
    pub is_tp: bool,
    pub residual: T,
}

impl<T: Real> KrausChannel<T> {
    /// Structural check only: nonempty list, shared dimensions.
    pub fn new(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::DimensionMismatch("zero-sized Kraus operator".into()));
        }
        for (j, k) in kraus.iter().enumerate() {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {j} is {}x{}, expected {dim_out}x{dim_in}",
                    k.rows(),
                    k.cols()
                )));
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    /// Like [`new`](Self::new) but also requires trace preservation.
    pub fn new_cpt(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let ch = Self::new(kraus)?;
        let report = ch.validate_cpt();
        if !report.is_tp {
            return Err(Error::NotTracePreserving {
                residual: report.residual.to_f64_lossy(),
            });
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    pub fn unitary(u: ComplexMatrix<T>) -> Result<Self> {
        Self::new_cpt(vec![u])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    pub fn into_kraus(self) -> Vec<ComplexMatrix<T>> {
        self.kraus
    }

    /// `Σⱼ Mⱼ† Mⱼ`.
    pub fn kraus_normalization(&self) -> ComplexMatrix<T> {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc += &(&k.adjoint() * k);
        }
        acc
    }

    pub fn validate_cpt(&self) -> CptReport<T> {
        let residual = self
            .kraus_normalization()
            .max_abs_diff(&ComplexMatrix::identity(self.dim_in));
        CptReport {
            is_cp: true,
            is_tp: residual <= T::tol(TP_TOL),
            residual,
        }
    }

    fn check_input(&self, rho: &ComplexMatrix<T>) -> Result<()> {
        if rho.rows() != self.dim_in || rho.cols() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input is {0}x{0}, got {1}x{2}",
                self.dim_in,
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(())
    }

    /// `Σⱼ Mⱼ ρ Mⱼ†` on an arbitrary operator.
    pub fn apply(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        self.check_input(rho)?;
        Ok(self.apply_unchecked(rho))
    }

    pub(crate) fn apply_unchecked(&self, rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += &k.sandwich(rho);
        }
        out
    }

    /// Output state for a valid input state.
    pub fn apply_state(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let out = self.apply(rho.as_matrix())?;
        DensityMatrix::from_unnormalized(out)
    }

    /// `outer ∘ inner`, Kraus operators `{Aᵢ Bⱼ}` ordered with `i` major.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.dim_in != inner.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: outer takes dimension {}, inner produces {}",
                outer.dim_in, inner.dim_out
            )));
        }
        let kraus = outer
            .kraus
            .iter()
            .flat_map(|a| inner.kraus.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            dim_in: inner.dim_in,
            dim_out: outer.dim_out,
            kraus,
        })
    }

    /// `p·self + (1−p)·other` as the union of scaled Kraus sets.
    pub fn convex_mix(&self, p: T, other: &Self) -> Result<Self> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::DimensionMismatch(
                "convex mixture needs channels with equal dimensions".into(),
            ));
        }
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::DomainError(format!(
                "mixing weight {} outside [0, 1]",
                p.to_f64_lossy()
            )));
        }
        let (a, b) = (p.sqrt(), (T::one() - p).sqrt());
        let kraus = self
            .kraus
            .iter()
            .map(|k| k.scale(a))
            .chain(other.kraus.iter().map(|k| k.scale(b)))
            .collect();
        Ok(Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus,
        })
    }

    /// Drops Kraus operators of negligible norm, keeping at least one.
    pub fn pruned(&self) -> Self {
        let cut = T::tol(PRUNE_TOL);
        let mut kraus: Vec<_> = self
            .kraus
            .iter()
            .filter(|k| k.frobenius_norm() >= cut)
            .cloned()
            .collect();
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(self.dim_out, self.dim_in));
        }
        Self { kraus, ..*self }
    }

    /// Appends a zero Kraus operator (same channel, larger environment).
    pub fn with_zero_kraus(&self) -> Self {
        let mut kraus = self.kraus.clone();
        kraus.push(ComplexMatrix::zeros(self.dim_out, self.dim_in));
        Self { kraus, ..*self }
    }

    pub fn choi(&self) -> ChoiMatrix<T> {
        let n = self.dim_in * self.dim_out;
        let mut mat = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            let v = k.vec();
            mat += &ComplexMatrix::outer(&v, &v);
        }
        ChoiMatrix {
            mat,
            dim_in: self.dim_in,
            dim_out: self.dim_out,
        }
    }

    pub fn transfer_matrix(&self) -> ComplexMatrix<T> {
        let mut t = ComplexMatrix::zeros(self.dim_out * self.dim_out, self.dim_in * self.dim_in);
        for k in &self.kraus {
            t += &k.conj().kron(k);
        }
        t
    }

    /// Complementary channel onto an environment of dimension `num_kraus`.
    ///
    /// Kraus operator `Rᵢ` has row `j` equal to row `i` of `Mⱼ`, so the output
    /// entry `(j, j′)` is `Tr[Mⱼ′† Mⱼ ρ]`.
    pub fn complementary(&self) -> Self {
        let k = self.kraus.len();
        let kraus = (0..self.dim_out)
            .map(|i| ComplexMatrix::from_fn(k, self.dim_in, |j, col| self.kraus[j][(i, col)]))
            .collect();
        Self {
            dim_in: self.dim_in,
            dim_out: k,
            kraus,
        }
    }

    pub fn cast<U: Real>(&self) -> KrausChannel<U> {
        KrausChannel {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus: self.kraus.iter().map(ComplexMatrix::cast).collect(),
        }
    }

    /// Rebuilds a Kraus set from a transfer matrix of a CP map.
    ///
    /// Negative Choi eigenvalues (roundoff) are discarded.
    pub fn from_transfer(t: &ComplexMatrix<T>, dim_in: usize, dim_out: usize) -> Result<Self> {
        ChoiMatrix::from_transfer(t, dim_in, dim_out)?.to_kraus()
    }
}

/// Choi matrix on `input ⊗ output`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<T> {
    pub mat: ComplexMatrix<T>,
    pub dim_in: usize,
    pub dim_out: usize,
}

impl<T: Real> ChoiMatrix<T> {
    /// Reshuffles a transfer matrix: `C[i + j·dₒ, i′ + j′·dₒ] = T[i + i′·dₒ, j + j′·dᵢ]`.
    pub fn from_transfer(t: &ComplexMatrix<T>, dim_in: usize, dim_out: usize) -> Result<Self> {
        if t.rows() != dim_out * dim_out || t.cols() != dim_in * dim_in {
            return Err(Error::DimensionMismatch(format!(
                "transfer matrix {}x{} does not match dimensions {dim_in} -> {dim_out}",
                t.rows(),
                t.cols()
            )));
        }
        let n = dim_in * dim_out;
        let mat = ComplexMatrix::from_fn(n, n, |r, s| {
            let (i, j) = (r % dim_out, r / dim_out);
            let (ip, jp) = (s % dim_out, s / dim_out);
            t[(i + ip * dim_out, j + jp * dim_in)]
        });
        Ok(Self {
            mat,
            dim_in,
            dim_out,
        })
    }

    pub fn min_eigenvalue(&self) -> T {
        let h = self.mat.hermitian_part();
        matrix::eigen::jacobi(&h, false)
            .values
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn is_cp(&self) -> bool {
        self.min_eigenvalue() >= -T::tol(CP_TOL)
    }

    /// Partial trace over the output factor; the identity for TP maps.
    pub fn input_marginal(&self) -> ComplexMatrix<T> {
        // Stored index is i + j·dₒ, i.e. input-major: factor A is the input.
        matrix::partial_trace(&self.mat, self.dim_in, self.dim_out, Factor::B)
            .expect("Choi dimensions factor by construction")
            .transpose()
    }

    /// `‖Tr_out C − I‖_max`.
    pub fn tp_residual(&self) -> T {
        self.input_marginal()
            .max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    /// Kraus operators `√λ·unvec(v)` from the positive part of the spectrum.
    pub fn to_kraus(&self) -> Result<KrausChannel<T>> {
        let h = self.mat.hermitian_part();
        let eig = matrix::eigen::jacobi(&h, true);
        let scale = eig.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let cut = T::tol(PRUNE_TOL) * scale.max(T::one());
        let mut kraus = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate().rev() {
            if lam <= cut {
                continue;
            }
            let v: Vec<Complex<T>> = eig.vector(k).into_iter().map(|z| z * lam.sqrt()).collect();
            kraus.push(ComplexMatrix::unvec(&v, self.dim_out, self.dim_in)?);
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(self.dim_out, self.dim_in));
        }
        KrausChannel::new(kraus)
    }
}

/// Replaces every input by a fixed state: Kraus `{|i⟩⟨j|·√σ-decomposition}`.
pub fn replacement_channel<T: Real>(sigma: &DensityMatrix<T>, dim_in: usize) -> KrausChannel<T> {
    let d = sigma.dim();
    let eig = matrix::eigen::jacobi(sigma.as_matrix(), true);
    let mut kraus = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= T::tol(PRUNE_TOL) {
            continue;
        }
        let v = eig.vector(k);
        for j in 0..dim_in {
            kraus.push(ComplexMatrix::from_fn(d, dim_in, |r, col| {
                if col == j {
                    v[r] * lam.sqrt()
                } else {
                    c(T::zero())
                }
            }));
        }
    }
    KrausChannel {
        dim_in,
        dim_out: d,
        kraus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;
    type K = KrausChannel<f64>;

    fn adc(g: f64) -> K {
        K::new_cpt(vec![
            M::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - g).sqrt()]]),
            M::from_real_rows(&[&[0.0, g.sqrt()], &[0.0, 0.0]]),
        ])
        .unwrap()
    }

    fn sample_state() -> M {
        M::from_rows(vec![
            vec![c(0.6), Complex::new(0.1, 0.2)],
            vec![Complex::new(0.1, -0.2), c(0.4)],
        ])
        .unwrap()
    }

    #[test]
    fn validate_cpt_reports_residual() {
        let id = K::identity(3).validate_cpt();
        assert!(id.is_tp && id.is_cp && id.residual == 0.0);
        let r = K::new(vec![M::identity(2).scale(0.9)]).unwrap().validate_cpt();
        assert!(!r.is_tp);
        assert!((r.residual - 0.19).abs() < 1e-15);
        assert!(matches!(
            K::new_cpt(vec![M::identity(2).scale(0.9)]),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn ragged_kraus_list_rejected() {
        let e = K::new(vec![M::identity(2), M::identity(3)]).unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch(ref s) if s.contains("operator 1")));
    }

    #[test]
    fn adc_action() {
        let one = M::unit(2, 2, 1, 1);
        assert!(adc(1.0).apply(&one).unwrap().max_abs_diff(&M::unit(2, 2, 0, 0)) < 1e-15);
        let half = adc(0.5).apply(&one).unwrap();
        assert!(half.max_abs_diff(&M::from_diagonal(&[0.5, 0.5])) < 1e-15);
        assert!(adc(0.5).apply(&M::identity(3)).is_err());
    }

    #[test]
    fn compose_adc_semigroup() {
        let two = K::compose(&adc(0.5), &adc(0.5)).unwrap();
        let rho = sample_state();
        let lhs = two.apply(&rho).unwrap();
        let rhs = adc(0.75).apply(&rho).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn choi_examples() {
        let id = K::identity(2).choi();
        let expect = M::from_real_rows(&[
            &[1.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(id.mat, expect);
        let deph = K::new(vec![M::unit(2, 2, 0, 0), M::unit(2, 2, 1, 1)]).unwrap().choi();
        assert_eq!(deph.mat, M::from_diagonal(&[1.0, 0.0, 0.0, 1.0]));
        let a = adc(0.3).choi();
        assert!((a.mat.trace().re - 2.0).abs() < 1e-14);
        assert!(a.tp_residual() < 1e-14 && a.is_cp());
        let ev = matrix::hermitian_eigenvalues(&a.mat).unwrap();
        assert_eq!(ev.iter().filter(|&&x| x > 1e-12).count(), 2);
    }

    #[test]
    fn transfer_matrix_acts_on_vec() {
        let ch = adc(0.3);
        let rho = sample_state();
        let lhs = ch.transfer_matrix().mul_vec(&rho.vec());
        let rhs = ch.apply(&rho).unwrap().vec();
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).norm() < 1e-14);
        }
        let deph = K::new(vec![M::unit(2, 2, 0, 0), M::unit(2, 2, 1, 1)]).unwrap();
        assert_eq!(deph.transfer_matrix(), M::from_diagonal(&[1.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn choi_transfer_round_trip() {
        let ch = adc(0.3);
        let choi = ChoiMatrix::from_transfer(&ch.transfer_matrix(), 2, 2).unwrap();
        assert!(choi.mat.max_abs_diff(&ch.choi().mat) < 1e-15);
        let rebuilt = choi.to_kraus().unwrap();
        let rho = sample_state();
        assert!(rebuilt.apply(&rho).unwrap().max_abs_diff(&ch.apply(&rho).unwrap()) < 1e-12);
    }

    #[test]
    fn complementary_of_adc_swaps_gamma() {
        // The complement of ADC(γ) is ADC(1−γ) up to a unitary on E, so the
        // output spectra coincide.
        let rho = sample_state();
        for g in [0.2, 0.5, 0.8] {
            let env = adc(g).complementary().apply(&rho).unwrap();
            let other = adc(1.0 - g).apply(&rho).unwrap();
            let s1 = matrix::entropy_of_hermitian(&env);
            let s2 = matrix::entropy_of_hermitian(&other);
            assert!((s1 - s2).abs() < 1e-12, "γ={g}");
            assert!(adc(g).complementary().validate_cpt().is_tp);
        }
    }

    #[test]
    fn complementary_matches_overlap_formula() {
        let ch = adc(0.4);
        let rho = sample_state();
        let env = ch.complementary().apply(&rho).unwrap();
        for j in 0..2 {
            for jp in 0..2 {
                let want = (&(&ch.kraus()[jp].adjoint() * &ch.kraus()[j]) * &rho).trace();
                assert!((env[(j, jp)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pruning_and_zero_padding() {
        let ch = adc(0.3).with_zero_kraus();
        assert_eq!(ch.num_kraus(), 3);
        assert_eq!(ch.pruned().num_kraus(), 2);
        let rho = sample_state();
        let a = matrix::entropy_of_hermitian(&ch.complementary().apply(&rho).unwrap());
        let b = matrix::entropy_of_hermitian(&adc(0.3).complementary().apply(&rho).unwrap());
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn replacement_channel_outputs_sigma() {
        let sigma = DensityMatrix::from_probabilities(&[0.25, 0.75]).unwrap();
        let ch = replacement_channel(&sigma, 3);
        assert!(ch.validate_cpt().is_tp);
        let out = ch.apply(&M::from_diagonal(&[0.2, 0.3, 0.5])).unwrap();
        assert!(out.max_abs_diff(sigma.as_matrix()) < 1e-15);
    }
}
