//! Seeded generation of random structured inputs.
//!
//! [`Rng`] wraps a ChaCha8 stream cipher keyed by a 64-bit seed, with an
//! independent 64-bit stream counter. A campaign uses `Rng::new(seed, trial)`
//! for each trial, so trials can run in any order or in parallel and still
//! produce the same draws.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::eig::eig_hermitian;
use super::matrix::{CMatrix, HermitianMatrix, C64};
use crate::calculus::Interval;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    /// Log-uniform in `(lo, hi]` of `x − 1`; used for exponents `r > 1`
    /// so that values close to 1 are well represented.
    pub fn exponent_in(&mut self, lo: f64, hi: f64) -> f64 {
        let (a, b) = ((lo - 1.0).max(1e-6).ln(), (hi - 1.0).ln());
        1.0 + (a + (b - a) * (1.0 - self.uniform())).exp()
    }

    /// Pair of independent standard normals by Box–Muller.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (r * c, r * s)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let (a, b) = self.normal_pair();
        C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<C64> {
        loop {
            let v: Vec<C64> = (0..n).map(|_| self.complex_normal()).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-300 {
                return v.into_iter().map(|z| z / norm).collect();
            }
        }
    }

    /// Vector with `‖x‖ ≤ 1`, norm uniform in `[0, 1]`.
    pub fn ball_vector(&mut self, n: usize) -> Vec<C64> {
        let r = self.uniform();
        self.unit_vector(n).into_iter().map(|z| z * r).collect()
    }
}

/// Orthonormalizes the columns of `m` (modified Gram–Schmidt with one
/// reorthogonalization pass). The implied `R` factor has a positive real
/// diagonal, which fixes the phase of every column.
pub fn orthonormalize_columns(m: &CMatrix) -> Result<CMatrix> {
    let (rows, cols) = m.shape();
    if cols > rows {
        return Err(Error::InvalidParameter(format!(
            "cannot orthonormalize {cols} columns in dimension {rows}"
        )));
    }
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.col(j);
        for _ in 0..2 {
            for u in &q {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidParameter("rank-deficient frame".into()));
        }
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| q[j][i]))
}

/// Haar-distributed unitary: Gram–Schmidt of a complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut Rng) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Empty);
    }
    loop {
        let g = rng.gaussian_matrix(n, n);
        // A singular Gaussian draw has probability zero; redraw if it happens.
        if let Ok(u) = orthonormalize_columns(&g) {
            return Ok(u);
        }
    }
}

/// Random orthonormal `n×k` frame.
pub fn random_frame(n: usize, k: usize, rng: &mut Rng) -> Result<CMatrix> {
    loop {
        match orthonormalize_columns(&rng.gaussian_matrix(n, k)) {
            Ok(f) => return Ok(f),
            Err(Error::InvalidParameter(msg)) if msg == "rank-deficient frame" => continue,
            Err(e) => return Err(e),
        }
    }
}

/// `U diag(λ) U*` with `λ` uniform in `J` and `U` Haar; records `J`.
pub fn random_hermitian(n: usize, interval: Interval, rng: &mut Rng) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if !(interval.lo.is_finite() && interval.hi.is_finite()) || interval.lo > interval.hi {
        return Err(Error::InvalidParameter(format!(
            "random_hermitian needs a finite nonempty interval, got {interval}"
        )));
    }
    if interval.lo == interval.hi {
        return Ok(HermitianMatrix::from_parts_unchecked(
            CMatrix::identity(n).scale(interval.lo),
            Some(interval),
        ));
    }
    let lambda: Vec<f64> = (0..n).map(|_| rng.uniform_in(interval.lo, interval.hi)).collect();
    let u = random_unitary(n, rng)?;
    let m = u.matmul(&CMatrix::from_real_diag(&lambda))?.matmul(&u.adjoint())?;
    Ok(HermitianMatrix::from_parts_unchecked(
        m.hermitian_part(),
        Some(interval),
    ))
}

/// Random positive semidefinite `G G*` with `G` an `n×rank` Gaussian.
pub fn random_psd(n: usize, rank: usize, rng: &mut Rng) -> HermitianMatrix {
    let g = rng.gaussian_matrix(n, rank.max(1));
    let m = g.matmul(&g.adjoint()).expect("shapes agree");
    HermitianMatrix::from_parts_unchecked(m.hermitian_part(), None)
}

/// Draws `ℓ` Gaussian `n×m` matrices `Y_i` and rescales them all by
/// `s = 1/√max(1, λ₁(Σ α_i Y_i*Y_i))`, so `Σ α_i X_i*X_i ≤ I_m`.
///
/// With all weights zero the constraint is vacuous and the raw draws are
/// returned.
pub fn random_map_family(ell: usize, n: usize, m: usize, weights: &[f64], rng: &mut Rng) -> Result<Vec<CMatrix>> {
    if weights.len() != ell {
        return Err(Error::InvalidParameter(format!(
            "expected {ell} weights, got {}",
            weights.len()
        )));
    }
    if weights.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
    }
    let draws: Vec<CMatrix> = (0..ell).map(|_| rng.gaussian_matrix(n, m)).collect();
    if weights.iter().all(|&a| a == 0.0) {
        return Ok(draws);
    }
    Ok(rescale_subunital(draws, weights))
}

/// Applies the common rescaling of [`random_map_family`] to given matrices.
pub fn rescale_subunital(draws: Vec<CMatrix>, weights: &[f64]) -> Vec<CMatrix> {
    let m = draws[0].cols();
    let mut gram = CMatrix::zeros(m, m);
    for (y, &a) in draws.iter().zip(weights) {
        gram.axpy(a, &y.adjoint().matmul(y).expect("shapes agree"))
            .expect("shapes agree");
    }
    let top = eig_hermitian(&HermitianMatrix::from_parts_unchecked(gram.hermitian_part(), None))
        .map(|e| e.max())
        .unwrap_or(1.0);
    if top <= 1.0 {
        return draws;
    }
    let s = 1.0 / top.sqrt();
    draws.into_iter().map(|y| y.scale(s)).collect()
}
