//! One-sided (Hestenes) Jacobi singular value decomposition.

use num_complex::Complex;

use super::{c, ComplexMatrix};
use crate::scalar::Real;

/// Relative cutoff below which singular values are treated as zero.
pub const SINGULAR_CUTOFF: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// `A = U diag(σ) V†` for an `m × n` matrix; `U` is `m × n`, `V` is `n × n`.
///
/// Columns of `U` paired with a zero singular value are left as zero vectors.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub sigma: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut g = a.clone();
        let mut v = ComplexMatrix::identity(n);
        let eps = T::epsilon() * T::lit(4.0);

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut alpha = T::zero();
                    let mut beta = T::zero();
                    let mut gamma = c(T::zero());
                    for r in 0..m {
                        let gi = g[(r, i)];
                        let gj = g[(r, j)];
                        alpha += gi.norm_sqr();
                        beta += gj.norm_sqr();
                        gamma += gi.conj() * gj;
                    }
                    let mag = gamma.norm();
                    if mag == T::zero() || mag <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (T::lit(2.0) * mag);
                    let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                    let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let cs = T::one() / (T::one() + t * t).sqrt();
                    let sn = cs * t;
                    let ec = (gamma / mag).conj();
                    let rot = |x: &mut ComplexMatrix<T>, rows: usize| {
                        for r in 0..rows {
                            let xi = x[(r, i)];
                            let xj = x[(r, j)];
                            x[(r, i)] = xi * cs - xj * ec * sn;
                            x[(r, j)] = xi * sn + xj * ec * cs;
                        }
                    };
                    rot(&mut g, m);
                    rot(&mut v, n);
                }
            }
            if !rotated {
                break;
            }
        }

        let sigma: Vec<T> = (0..n)
            .map(|k| (0..m).map(|r| g[(r, k)].norm_sqr()).sum::<T>().sqrt())
            .collect();
        let u = ComplexMatrix::from_fn(m, n, |r, k| {
            if sigma[k] > T::zero() {
                g[(r, k)] / sigma[k]
            } else {
                c(T::zero())
            }
        });
        Svd { u, sigma, v }
    }

    pub fn max_singular_value(&self) -> T {
        self.sigma.iter().copied().fold(T::zero(), T::max)
    }

    fn cutoff(&self, relative: T) -> T {
        relative * self.max_singular_value()
    }

    /// Number of singular values above `relative · σ_max`.
    pub fn rank(&self, relative: T) -> usize {
        let cut = self.cutoff(relative);
        self.sigma.iter().filter(|&&s| s > cut).count()
    }

    /// Moore–Penrose pseudo-inverse, `V Σ⁺ U†`.
    pub fn pseudo_inverse(&self, relative: T) -> ComplexMatrix<T> {
        let cut = self.cutoff(relative);
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = ComplexMatrix::zeros(n, m);
        for (k, &s) in self.sigma.iter().enumerate() {
            if s <= cut || s == T::zero() {
                continue;
            }
            let inv = T::one() / s;
            for i in 0..n {
                let vik = self.v[(i, k)] * inv;
                for j in 0..m {
                    out[(i, j)] += vik * self.u[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Orthonormal basis (as vectors) of the numerical null space of `A`.
    pub fn null_space(&self, absolute: T) -> Vec<Vec<Complex<T>>> {
        self.sigma
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= absolute)
            .map(|(k, _)| self.v.column(k))
            .collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let (m, n) = (self.u.rows(), self.v.rows());
        let us = ComplexMatrix::from_fn(m, n, |r, k| self.u[(r, k)] * self.sigma[k]);
        &us * &self.v.adjoint()
    }
}
