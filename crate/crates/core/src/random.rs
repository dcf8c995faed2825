//! Random states, unitaries and Hermitian matrices for tests and multistart.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{ComplexMatrix, DensityMatrix};
use crate::scalar::Real;

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// Ginibre matrix with standard complex Gaussian entries.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Hermitian matrix with entries uniform in `[−1, 1]` (real and imaginary parts).
pub fn hermitian<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = Complex::new(T::lit(rng.gen_range(-1.0..=1.0)), T::zero());
        for j in (i + 1)..d {
            let z = Complex::new(T::lit(rng.gen_range(-1.0..=1.0)), T::lit(rng.gen_range(-1.0..=1.0)));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g: ComplexMatrix<T> = ginibre(d, d, rng);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.column(j);
        for u in &cols {
            let proj: Complex<T> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= *y * proj;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for x in &mut v {
            *x = *x / n;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Full-rank random state `GG†/Tr(GG†)` (Hilbert–Schmidt measure).
pub fn density<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix<T> {
    let g: ComplexMatrix<T> = ginibre(d, d, rng);
    let m = (&g * &g.adjoint()).hermitian_part();
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(m.scale(T::one() / tr))
}

/// Random pure state.
pub fn pure_state<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix<T> {
    let v: Vec<Complex<T>> = (0..d).map(|_| gaussian(rng)).collect();
    DensityMatrix::from_pure(&v).expect("Gaussian vector is nonzero")
}
