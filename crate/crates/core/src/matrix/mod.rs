//! Dense complex linear algebra and entropic primitives.
//!
//! Everything downstream (channels, Choi and transfer matrices, density
//! operators) is stored as a [`ComplexMatrix`]. Vectorization uses column
//! stacking throughout: `vec(X)[i + j·rows] = X[i][j]`.

mod density;
pub(crate) mod eigen;
mod entropy;
mod svd;

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use density::DensityMatrix;
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use entropy::{binary_entropy, entropy_of_hermitian, shannon_entropy, von_neumann_entropy};
pub(crate) use entropy::binary_entropy_unchecked;
pub use svd::{Svd, SINGULAR_CUTOFF};

/// Hermiticity tolerance on entries.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Which tensor factor [`partial_trace`] removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    A,
    B,
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "({:?}, {:?}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[inline]
pub(crate) fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = c(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if r == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols, data })
    }

    /// Real matrix from nested `f64` rows. Panics on ragged input; intended for literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let nested = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(T::lit(x))).collect())
            .collect();
        Self::from_rows(nested).expect("rectangular literal")
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = c(x);
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// `|i⟩⟨j|` in dimension `rows × cols`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = c(T::one());
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn real_diagonal(&self) -> Vec<T> {
        self.diagonal().into_iter().map(|z| z.re).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex<T> {
        self.diagonal().into_iter().fold(c(T::zero()), |acc, z| acc + z)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// `max |M[i][j] − conj(M[j][i])|`; infinite for non-square input.
    pub fn hermiticity_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= T::tol(HERMITIAN_TOL)
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + adj[(i, j)]) * T::lit(0.5))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Column-stacked vectorization.
    pub fn vec(&self) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    /// Inverse of [`ComplexMatrix::vec`].
    pub fn unvec(v: &[Complex<T>], rows: usize, cols: usize) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} cannot be reshaped to {rows}x{cols}",
                v.len()
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| v[i + j * rows]))
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(c(T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.matmul(rhs))
    }

    fn matmul(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs[(k, j)];
                    out.data[i * rhs.cols + j] += a * b;
                }
            }
        }
        out
    }

    /// `A ρ A†`.
    pub fn sandwich(&self, rho: &Self) -> Self {
        self.matmul(rho).matmul(&self.adjoint())
    }

    /// Sub-matrix with rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Writes `sub` at offset `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, sub: &Self) {
        for i in 0..sub.rows {
            for j in 0..sub.cols {
                self[(r0 + i, c0 + j)] = sub[(i, j)];
            }
        }
    }

    /// Places `sub` on the diagonal of a `d × d` zero matrix at `offset`.
    pub fn embed(sub: &Self, d: usize, offset: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m.set_block(offset, offset, sub);
        m
    }

    /// Direct sum `A ⊕ B ⊕ …`.
    pub fn direct_sum(parts: &[Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            m.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    /// Entrywise maximum distance, infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Frobenius distance, infinite on shape mismatch.
    pub fn frobenius_distance(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// Converts the scalar type (e.g. `f64` → `f32`).
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    /// Panics on shape mismatch; use [`ComplexMatrix::try_mul`] for a checked product.
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> std::ops::AddAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn add_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += *b;
        }
    }
}

/// Traces out one factor of a matrix on `C^{dA} ⊗ C^{dB}`.
///
/// Basis ordering is `|a⟩⊗|b⟩ ↦ a·dB + b`.
pub fn partial_trace<T: Real>(
    m: &ComplexMatrix<T>,
    dim_a: usize,
    dim_b: usize,
    which: Factor,
) -> Result<ComplexMatrix<T>> {
    if !m.is_square() || dim_a == 0 || dim_b == 0 || m.rows() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix does not factor as {dim_a}·{dim_b}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(match which {
        Factor::B => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).fold(c(T::zero()), |acc, b| acc + m[(i * dim_b + b, j * dim_b + b)])
        }),
        Factor::A => ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).fold(c(T::zero()), |acc, a| acc + m[(a * dim_b + i, a * dim_b + j)])
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn bell_projector() -> M {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [c(s), c(0.0), c(0.0), c(s)];
        M::outer(&v, &v)
    }

    #[test]
    fn partial_trace_of_identity() {
        let pt = partial_trace(&M::identity(4), 2, 2, Factor::B).unwrap();
        assert!(pt.max_abs_diff(&M::identity(2).scale(2.0)) < 1e-14);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let ket00 = M::unit(4, 4, 0, 0);
        let pt = partial_trace(&ket00, 2, 2, Factor::B).unwrap();
        assert!(pt.max_abs_diff(&M::unit(2, 2, 0, 0)) < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        for f in [Factor::A, Factor::B] {
            let pt = partial_trace(&bell_projector(), 2, 2, f).unwrap();
            assert!(pt.max_abs_diff(&M::identity(2).scale(0.5)) < 1e-14);
        }
    }

    #[test]
    fn partial_trace_of_tensor_product() {
        let x = M::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let y = M::from_real_rows(&[&[0.5, 0.0, 1.0], &[0.0, 2.0, 0.0], &[1.0, 0.0, 0.5]]);
        let xy = x.kron(&y);
        let tr_b = partial_trace(&xy, 2, 3, Factor::B).unwrap();
        assert!(tr_b.max_abs_diff(&x.scale_complex(y.trace())) < 1e-12);
        let tr_a = partial_trace(&xy, 2, 3, Factor::A).unwrap();
        assert!(tr_a.max_abs_diff(&y.scale_complex(x.trace())) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_factorisation() {
        assert!(matches!(
            partial_trace(&M::identity(5), 2, 2, Factor::A),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn vec_is_column_stacking() {
        let m = M::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let v: Vec<f64> = m.vec().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(M::unvec(&m.vec(), 2, 2).unwrap(), m);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let rows = vec![vec![c(1.0), c(0.0)], vec![c(1.0)]];
        assert!(M::from_rows(rows).is_err());
    }
}
