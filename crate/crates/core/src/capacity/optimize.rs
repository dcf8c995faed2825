//! Maximization of block-restricted coherent and mutual information.
//!
//! For block weights `P` and block states `τₗ` the objective is
//!
//! ```text
//! Q:   H(P) + Σ pₗ S(Φₗ τₗ)                 − S(Σ pₗ Φ̃ₗ τₗ)
//! Q_E: H(P) + ½ Σ pₗ [S(τₗ) + S(Φₗ τₗ)]     − ½ S(Σ pₗ Φ̃ₗ τₗ)
//! ```
//!
//! with the block complementaries sharing the global Kraus index as their
//! environment basis. Both are concave in the unnormalized blocks `pₗτₗ`
//! (the first one for degradable channels), which is what makes golden
//! section in `p` and block-coordinate ascent in the states sound.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::KrausChannel;
use crate::matrix::{c, entropy_of_hermitian, shannon_entropy, ComplexMatrix, DensityMatrix};
use crate::pcds::PcdsChannel;
use crate::random;
use crate::scalar::Real;

/// Tolerance of every golden-section search.
pub const GOLDEN_TOL: f64 = 1e-9;
/// Direct search stops once its step falls below this.
pub const MIN_STEP: f64 = 1e-8;
/// Exponentiated-gradient stopping threshold on `max |ΔP|`.
pub const EG_TOL: f64 = 1e-8;

const IMPROVEMENT_TOL: f64 = 1e-14;
const MAX_ROUNDS: usize = 100;
const MAX_SWEEPS: usize = 200;
const MAX_EG_ITERS: usize = 5000;
const SCALAR_TOL: f64 = 1e-12;

/// Knobs for the multistart direct search used on blocks without symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub restarts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { seed: 42, restarts: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Objective {
    Coherent,
    Mutual,
}

/// How a block's state is optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Kraus operators are multiples of the identity: `τ = I/d` is optimal.
    Fixed,
    /// Every global Kraus operator commutes up to sign with each basis sign
    /// flip of the block, so diagonal states suffice.
    Diagonal,
    General,
}

struct Block<T> {
    dim: usize,
    channel: KrausChannel<T>,
    comp: KrausChannel<T>,
    strategy: Strategy,
}

pub(crate) struct Problem<T> {
    blocks: Vec<Block<T>>,
    env_dim: usize,
    objective: Objective,
    config: OptimizerConfig,
}

/// Optimum of a [`Problem`].
#[derive(Debug, Clone)]
pub(crate) struct Solution<T> {
    pub value: T,
    pub p: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
}

fn is_scalar_identity<T: Real>(m: &ComplexMatrix<T>) -> bool {
    let tol = T::tol(SCALAR_TOL);
    let d = m.rows();
    let z = m[(0, 0)];
    (0..d).all(|i| (0..d).all(|j| {
        let want = if i == j { z } else { c(T::zero()) };
        (m[(i, j)] - want).norm() <= tol
    }))
}

/// `M D = ±D M` for `D` flipping the sign of basis vector `k`.
fn commutes_up_to_sign<T: Real>(m: &ComplexMatrix<T>, k: usize) -> bool {
    let tol = T::tol(SCALAR_TOL);
    let mut sign = None;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m[(i, j)].norm() <= tol {
                continue;
            }
            let s = (i == k) == (j == k);
            match sign {
                None => sign = Some(s),
                Some(prev) if prev != s => return false,
                _ => {}
            }
        }
    }
    true
}

/// Strategy for block `[offset, offset + dim)` of a channel with Kraus set `global`.
pub fn block_strategy<T: Real>(global: &[ComplexMatrix<T>], block: &[ComplexMatrix<T>], offset: usize) -> Strategy {
    let dim = block.first().map_or(1, ComplexMatrix::rows);
    if dim == 1 || block.iter().all(is_scalar_identity) {
        Strategy::Fixed
    } else if (offset..offset + dim).all(|k| global.iter().all(|m| commutes_up_to_sign(m, k))) {
        Strategy::Diagonal
    } else {
        Strategy::General
    }
}

/// Golden-section maximization on `[a, b]`.
pub(crate) fn golden_max<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T) -> (T, T) {
    let r = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coarse grid on `[0, 1]` to bracket the maximum, then golden section.
pub(crate) fn bracketed_max<T: Real>(mut f: impl FnMut(T) -> T, tol: T) -> (T, T) {
    const GRID: usize = 10;
    let h = T::one() / T::from_usize_lossy(GRID);
    let mut best = (T::zero(), f(T::zero()));
    for i in 1..=GRID {
        let x = T::from_usize_lossy(i) * h;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let lo = (best.0 - h).max(T::zero());
    let hi = (best.0 + h).min(T::one());
    let inner = golden_max(&mut f, lo, hi, tol);
    if inner.1 > best.1 {
        inner
    } else {
        best
    }
}

fn state_from_params<T: Real>(theta: &[T], d: usize) -> ComplexMatrix<T> {
    let mut l = ComplexMatrix::zeros(d, d);
    let mut idx = 0;
    for i in 0..d {
        l[(i, i)] = c(theta[idx]);
        idx += 1;
        for j in 0..i {
            l[(i, j)] = Complex::new(theta[idx], theta[idx + 1]);
            idx += 2;
        }
    }
    let m = &l * &l.adjoint();
    let tr = m.trace().re;
    if tr <= T::zero() {
        return ComplexMatrix::identity(d).scale(T::one() / T::from_usize_lossy(d));
    }
    m.scale(T::one() / tr)
}

/// Cholesky factor of `τ + εI`, flattened in the layout of [`state_from_params`].
fn params_from_state<T: Real>(tau: &ComplexMatrix<T>) -> Vec<T> {
    let d = tau.rows();
    let jitter = T::tol(1e-12);
    let mut l = ComplexMatrix::<T>::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let mut s = tau[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            if i == j {
                l[(i, i)] = c((s.re + jitter).max(jitter).sqrt());
            } else {
                l[(i, j)] = s / l[(j, j)].re;
            }
        }
    }
    let mut theta = Vec::with_capacity(d * d);
    for i in 0..d {
        theta.push(l[(i, i)].re);
        for j in 0..i {
            theta.push(l[(i, j)].re);
            theta.push(l[(i, j)].im);
        }
    }
    theta
}

/// Compass search with step halving.
fn compass<T: Real>(f: &mut impl FnMut(&[T]) -> T, mut theta: Vec<T>) -> (Vec<T>, T) {
    let mut val = f(&theta);
    let mut step = T::lit(0.5);
    let min_step = T::tol(MIN_STEP);
    while step >= min_step {
        let mut improved = false;
        for k in 0..theta.len() {
            for dir in [T::one(), -T::one()] {
                let old = theta[k];
                theta[k] = old + dir * step;
                let v = f(&theta);
                if v > val {
                    val = v;
                    improved = true;
                    break;
                }
                theta[k] = old;
            }
        }
        if !improved {
            step = step / T::lit(2.0);
        }
    }
    (theta, val)
}

impl<T: Real> Problem<T> {
    pub fn from_pcds(pc: &PcdsChannel<T>, objective: Objective, config: OptimizerConfig) -> Self {
        let global = pc.channel().kraus();
        let blocks = (0..pc.num_blocks())
            .map(|l| {
                let channel = pc.diagonal_block(l).expect("block index in range");
                let strategy = block_strategy(global, channel.kraus(), pc.partition().offset(l));
                Block {
                    dim: channel.dim_in(),
                    comp: channel.complementary(),
                    channel,
                    strategy,
                }
            })
            .collect();
        Self {
            blocks,
            env_dim: pc.channel().num_kraus(),
            objective,
            config,
        }
    }

    /// A single channel seen as a one-block problem.
    pub fn single(ch: &KrausChannel<T>, objective: Objective, config: OptimizerConfig) -> Self {
        let ch = ch.pruned();
        let strategy = block_strategy(ch.kraus(), ch.kraus(), 0);
        let env_dim = ch.num_kraus();
        Self {
            blocks: vec![Block {
                dim: ch.dim_in(),
                comp: ch.complementary(),
                channel: ch,
                strategy,
            }],
            env_dim,
            objective,
            config,
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    #[cfg(test)]
    pub fn strategies(&self) -> Vec<Strategy> {
        self.blocks.iter().map(|b| b.strategy).collect()
    }

    /// Weight of the environment entropy term.
    fn env_coef(&self) -> T {
        match self.objective {
            Objective::Coherent => T::one(),
            Objective::Mutual => T::lit(0.5),
        }
    }

    /// Per-block output term `w(τ)`.
    fn block_term(&self, l: usize, tau: &ComplexMatrix<T>) -> T {
        let out = entropy_of_hermitian(&self.blocks[l].channel.apply_unchecked(tau));
        match self.objective {
            Objective::Coherent => out,
            Objective::Mutual => T::lit(0.5) * (out + entropy_of_hermitian(tau)),
        }
    }

    fn env_output(&self, l: usize, tau: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.blocks[l].comp.apply_unchecked(tau)
    }

    fn env_mix(&self, p: &[T], envs: &[ComplexMatrix<T>], skip: Option<usize>) -> ComplexMatrix<T> {
        let mut mix = ComplexMatrix::zeros(self.env_dim, self.env_dim);
        for (l, e) in envs.iter().enumerate() {
            if Some(l) != skip && p[l] > T::zero() {
                mix += &e.scale(p[l]);
            }
        }
        mix
    }

    /// Full objective at weights `p` and block states `taus`.
    pub fn value(&self, p: &[T], taus: &[ComplexMatrix<T>]) -> T {
        let envs: Vec<_> = (0..self.blocks.len()).map(|l| self.env_output(l, &taus[l])).collect();
        self.value_with_envs(p, taus, &envs)
    }

    fn value_with_envs(&self, p: &[T], taus: &[ComplexMatrix<T>], envs: &[ComplexMatrix<T>]) -> T {
        let mut v = shannon_entropy(p);
        for l in 0..self.blocks.len() {
            if p[l] > T::zero() {
                v += p[l] * self.block_term(l, &taus[l]);
            }
        }
        v - self.env_coef() * entropy_of_hermitian(&self.env_mix(p, envs, None))
    }

    pub fn initial_states(&self) -> Vec<ComplexMatrix<T>> {
        self.blocks
            .iter()
            .map(|b| ComplexMatrix::identity(b.dim).scale(T::one() / T::from_usize_lossy(b.dim)))
            .collect()
    }

    /// Block-coordinate ascent over the states at fixed weights, starting from `taus`.
    pub fn solve_states(&self, p: &[T], taus: &mut [ComplexMatrix<T>]) -> T {
        let n = self.blocks.len();
        let mut envs: Vec<_> = (0..n).map(|l| self.env_output(l, &taus[l])).collect();
        let mut current = self.value_with_envs(p, taus, &envs);
        let active: Vec<usize> = (0..n)
            .filter(|&l| p[l] > T::zero() && self.blocks[l].strategy != Strategy::Fixed)
            .collect();
        for l in 0..n {
            if self.blocks[l].strategy == Strategy::Fixed {
                let d = self.blocks[l].dim;
                taus[l] = ComplexMatrix::identity(d).scale(T::one() / T::from_usize_lossy(d));
                envs[l] = self.env_output(l, &taus[l]);
            }
        }
        if active.is_empty() {
            return self.value_with_envs(p, taus, &envs);
        }
        for _ in 0..MAX_ROUNDS {
            let before = current;
            for &l in &active {
                let rest = self.env_mix(p, &envs, Some(l));
                taus[l] = self.optimize_block(l, p[l], &rest, &taus[l]);
                envs[l] = self.env_output(l, &taus[l]);
            }
            current = self.value_with_envs(p, taus, &envs);
            if active.len() == 1 || current - before <= T::tol(IMPROVEMENT_TOL) {
                break;
            }
        }
        current
    }

    /// Maximizes `w(τ) − (c/pₗ)·S(pₗ Φ̃ₗ τ + rest)`, i.e. the objective divided by `pₗ`.
    fn optimize_block(&self, l: usize, pl: T, rest: &ComplexMatrix<T>, start: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let coef = self.env_coef() / pl;
        let f = |tau: &ComplexMatrix<T>| {
            let env = &self.env_output(l, tau).scale(pl) + rest;
            self.block_term(l, tau) - coef * entropy_of_hermitian(&env)
        };
        match self.blocks[l].strategy {
            Strategy::Fixed => start.clone(),
            Strategy::Diagonal => {
                let x = diagonal_ascent(|x: &[T]| f(&ComplexMatrix::from_diagonal(x)), start.real_diagonal());
                ComplexMatrix::from_diagonal(&x)
            }
            Strategy::General => self.general_search(f, start),
        }
    }

    fn general_search(&self, f: impl Fn(&ComplexMatrix<T>) -> T, start: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let d = start.rows();
        let mut g = |theta: &[T]| f(&state_from_params(theta, d));
        let (mut best_theta, mut best) = compass(&mut g, params_from_state(start));
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        for _ in 1..self.config.restarts.max(1) {
            let init = random::density::<T, _>(d, &mut rng);
            let (theta, v) = compass(&mut g, params_from_state(init.as_matrix()));
            if v > best {
                best = v;
                best_theta = theta;
            }
        }
        state_from_params(&best_theta, d)
    }

    fn solution(&self, p: Vec<T>, taus: Vec<ComplexMatrix<T>>, value: T) -> Solution<T> {
        Solution {
            value,
            p,
            states: taus.into_iter().map(|t| DensityMatrix::new_unchecked(t.hermitian_part())).collect(),
        }
    }

    /// One block: maximize over its state only.
    pub fn maximize_single(&self) -> Solution<T> {
        let p = vec![T::one()];
        let mut taus = self.initial_states();
        let value = self.solve_states(&p, &mut taus);
        self.solution(p, taus, value)
    }

    /// Two blocks: golden section over `p` with the states re-optimized (warm
    /// started) at every trial weight.
    pub fn maximize_two_blocks(&self) -> Solution<T> {
        assert_eq!(self.blocks.len(), 2, "two-block optimizer");
        let mut warm = self.initial_states();
        let mut eval = |p: T| {
            let w = [p, T::one() - p];
            self.solve_states(&w, &mut warm)
        };
        let (p, _) = bracketed_max(&mut eval, T::tol(GOLDEN_TOL));
        let w = vec![p, T::one() - p];
        let mut taus = self.initial_states();
        let mut value = self.solve_states(&w, &mut taus);
        // a warm-started pass can only do better
        let mut again = taus.clone();
        let v2 = self.solve_states(&w, &mut again);
        if v2 > value {
            value = v2;
            taus = again;
        }
        self.solution(w, taus, value)
    }

    /// Any number of blocks: exponentiated-gradient ascent on the simplex,
    /// alternating with state optimization at fixed weights.
    pub fn maximize_simplex(&self) -> Solution<T> {
        let n = self.blocks.len();
        let mut p = vec![T::one() / T::from_usize_lossy(n); n];
        let mut taus = self.initial_states();
        let mut value = self.solve_states(&p, &mut taus);
        let mut eta = T::one();
        for _ in 0..MAX_EG_ITERS {
            let target = self.eg_target(&p, &taus);
            let mut accepted = None;
            let mut step = eta;
            while step >= T::tol(1e-6) {
                let cand = eg_step(&p, &target, step);
                let v = self.value(&cand, &taus);
                if v >= value - T::tol(IMPROVEMENT_TOL) {
                    accepted = Some(cand);
                    break;
                }
                step = step / T::lit(2.0);
            }
            let Some(cand) = accepted else { break };
            let delta = p.iter().zip(&cand).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max);
            p = cand;
            value = self.solve_states(&p, &mut taus);
            eta = (step * T::lit(2.0)).min(T::one());
            if delta < T::tol(EG_TOL) {
                break;
            }
        }
        self.solution(p, taus, value)
    }

    /// Mirror-ascent target `qₗ ∝ 2^{w(τₗ) + c·Tr[Φ̃ₗτₗ log₂ ω]}`; a full step
    /// (`η = 1`) lands on it.
    fn eg_target(&self, p: &[T], taus: &[ComplexMatrix<T>]) -> Vec<T> {
        let n = self.blocks.len();
        let envs: Vec<_> = (0..n).map(|l| self.env_output(l, &taus[l])).collect();
        let omega = self.env_mix(p, &envs, None);
        let eig = crate::matrix::eigen::jacobi(&omega.hermitian_part(), true);
        let tiny = T::min_positive_value().sqrt();
        let logs: Vec<T> = eig.values.iter().map(|&x| x.max(tiny).log2()).collect();
        let exps: Vec<T> = (0..n)
            .map(|l| {
                let mut tr_log = T::zero();
                for (k, &lg) in logs.iter().enumerate() {
                    let v = eig.vector(k);
                    let ev = envs[l].mul_vec(&v);
                    let w: Complex<T> = v.iter().zip(&ev).map(|(a, b)| a.conj() * b).sum();
                    tr_log += w.re * lg;
                }
                self.block_term(l, &taus[l]) + self.env_coef() * tr_log
            })
            .collect();
        let m = exps.iter().copied().fold(T::neg_infinity(), T::max);
        let w: Vec<T> = exps.iter().map(|&e| T::lit(2.0).powf(e - m)).collect();
        let z: T = w.iter().copied().sum();
        w.into_iter().map(|x| x / z).collect()
    }
}

/// `p^{1−η} q^η`, renormalized.
fn eg_step<T: Real>(p: &[T], q: &[T], eta: T) -> Vec<T> {
    let raw: Vec<T> = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            if a <= T::zero() || b <= T::zero() {
                T::zero()
            } else {
                (a.ln() * (T::one() - eta) + b.ln() * eta).exp()
            }
        })
        .collect();
    let z: T = raw.iter().copied().sum();
    raw.into_iter().map(|x| x / z).collect()
}

/// Pairwise mass-transfer coordinate ascent over the probability simplex.
fn diagonal_ascent<T: Real>(f: impl Fn(&[T]) -> T, start: Vec<T>) -> Vec<T> {
    let d = start.len();
    let total: T = start.iter().copied().map(|x| x.max(T::zero())).sum();
    let mut x: Vec<T> = if total > T::zero() {
        start.iter().map(|&v| v.max(T::zero()) / total).collect()
    } else {
        vec![T::one() / T::from_usize_lossy(d); d]
    };
    let mut val = f(&x);
    for _ in 0..MAX_SWEEPS {
        let before = val;
        for i in 0..d {
            for j in (i + 1)..d {
                let s = x[i] + x[j];
                if s <= T::zero() {
                    continue;
                }
                let mut y = x.clone();
                let mut g = |u: T| {
                    y[i] = s * u;
                    y[j] = s - s * u;
                    f(&y)
                };
                let (u, v) = bracketed_max(&mut g, T::tol(GOLDEN_TOL));
                if v > val {
                    x[i] = s * u;
                    x[j] = s - s * u;
                    val = v;
                }
            }
        }
        if val - before <= T::tol(IMPROVEMENT_TOL) {
            break;
        }
    }
    x
}
