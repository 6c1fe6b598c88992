//! Dense row-major complex matrices.
//!
//! `CMatrix` is deliberately small: it carries just the arithmetic the
//! eigensolver, the functional calculus and the positive-map machinery need.
//! Hermitian matrices are wrapped in [`HermitianMatrix`], which remembers an
//! optional interval known to contain the spectrum.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::calculus::Interval;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative Hermiticity tolerance: `‖A − A*‖_F ≤ HERMITIAN_TOL·max(1, ‖A‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance for spectrum-in-interval membership.
pub const SPECTRUM_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diag(&vec![1.0; n])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting empty or non-finite input.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_vec",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::from_vec(r, c, data)
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.iter().flat_map(|row| row.iter().copied()).collect())
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(d[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Column vector from complex entries.
    pub fn column(v: &[C64]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i])
    }

    /// Matrix unit `E_ij` of size `n×n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = C64::new(1.0, 0.0);
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
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `X* A X`, the congruence used throughout the positive-map code.
    pub fn congruence(&self, x: &CMatrix) -> Result<CMatrix> {
        x.adjoint().matmul(&self.matmul(x)?)
    }

    pub fn try_add(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    /// `self += s·rhs`.
    pub fn axpy(&mut self, s: f64, rhs: &CMatrix) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op: "axpy",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b * s;
        }
        Ok(())
    }

    fn zip_with(&self, rhs: &CMatrix, op: &'static str, f: impl Fn(C64, C64) -> C64) -> Result<CMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// `‖A − A*‖_F`; infinite for non-square input.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_residual() <= rel_tol * self.frobenius_norm().max(1.0)
    }

    /// `(A + A*)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        let n = self.rows;
        Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = rhs.shape();
        Self::from_fn(r1 * r2, c1 * c2, |i, j| self[(i / r2, j / c2)] * rhs[(i % r2, j % c2)])
    }

    /// Block-diagonal repetition `diag(A, …, A)` with `copies` blocks.
    pub fn block_diag_repeat(&self, copies: usize) -> CMatrix {
        let (r, c) = self.shape();
        let mut out = CMatrix::zeros(r * copies, c * copies);
        for b in 0..copies {
            out.set_block(b * r, b * c, self);
        }
        out
    }

    pub fn block_diag(blocks: &[CMatrix]) -> Result<CMatrix> {
        if blocks.is_empty() {
            return Err(Error::Empty);
        }
        let rows = blocks.iter().map(CMatrix::rows).sum();
        let cols = blocks.iter().map(CMatrix::cols).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// Vertical stack of equally wide matrices.
    pub fn vstack(blocks: &[CMatrix]) -> Result<CMatrix> {
        let first = blocks.first().ok_or(Error::Empty)?;
        if let Some(bad) = blocks.iter().find(|b| b.cols != first.cols) {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: first.shape(),
                right: bad.shape(),
            });
        }
        let rows = blocks.iter().map(CMatrix::rows).sum();
        let mut data = Vec::with_capacity(rows * first.cols);
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        Ok(CMatrix {
            rows,
            cols: first.cols,
            data,
        })
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &CMatrix) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(r0 + i, c0 + j)] = src[(i, j)];
            }
        }
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// `A x` for a vector `x`.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `⟨A x, x⟩`.
    pub fn quadratic_form(&self, x: &[C64]) -> Result<C64> {
        let ax = self.apply(x)?;
        Ok(ax.iter().zip(x).map(|(a, b)| a * b.conj()).sum())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

// The operator impls panic on shape mismatch; fallible callers use the
// `try_*`/`matmul` methods.
impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("shape mismatch in +")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("shape mismatch in -")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("shape mismatch in *")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Wire form: `{"n": rows, "re": [[..]], "im": [[..]]}`. Non-square matrices
/// add `"m": cols`; a missing `"im"` means a real matrix.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let grid = |part: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| part(&self[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            n: self.rows,
            m: (!self.is_square()).then_some(self.cols),
            re: grid(|z| z.re),
            im: Some(grid(|z| z.im)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(d)?;
        let rows = raw.n;
        let cols = raw.m.unwrap_or(rows);
        let check = |g: &Vec<Vec<f64>>, name: &str| -> std::result::Result<(), D::Error> {
            if g.len() != rows || g.iter().any(|r| r.len() != cols) {
                return Err(D::Error::custom(format!(
                    "`{name}` must be a {rows}x{cols} array of numbers"
                )));
            }
            Ok(())
        };
        check(&raw.re, "re")?;
        if let Some(im) = &raw.im {
            check(im, "im")?;
        }
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| C64::new(raw.re[i][j], raw.im.as_ref().map_or(0.0, |im| im[i][j])))
            .collect();
        CMatrix::from_vec(rows, cols, data).map_err(D::Error::custom)
    }
}

/// Hermitian matrix, optionally tagged with an interval `J` that contains its
/// spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    base: CMatrix,
    spectrum_interval: Option<Interval>,
}

impl HermitianMatrix {
    /// Validates Hermiticity within [`HERMITIAN_TOL`] and stores the exact
    /// Hermitian part.
    pub fn new(base: CMatrix) -> Result<Self> {
        base.require_square()?;
        let residual = base.hermitian_residual();
        if residual > HERMITIAN_TOL * base.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(HermitianMatrix {
            base: base.hermitian_part(),
            spectrum_interval: None,
        })
    }

    /// Same as [`new`](Self::new) and additionally checks that every
    /// eigenvalue lies in `interval` (within [`SPECTRUM_TOL`]).
    pub fn with_interval(base: CMatrix, interval: Interval) -> Result<Self> {
        let mut h = Self::new(base)?;
        let eig = crate::linalg::eig_hermitian(&h)?;
        for &l in &eig.eigenvalues {
            if !interval.contains_within(l, SPECTRUM_TOL) {
                return Err(Error::SpectrumOutsideDomain {
                    eigenvalue: l,
                    lo: interval.lo,
                    hi: interval.hi,
                });
            }
        }
        h.spectrum_interval = Some(interval);
        Ok(h)
    }

    /// Wraps a matrix known to be Hermitian by construction.
    pub(crate) fn from_parts_unchecked(base: CMatrix, spectrum_interval: Option<Interval>) -> Self {
        HermitianMatrix {
            base,
            spectrum_interval,
        }
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        Self::from_parts_unchecked(CMatrix::from_real_diag(d), None)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diag(&vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.base.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> CMatrix {
        self.base
    }

    pub fn spectrum_interval(&self) -> Option<Interval> {
        self.spectrum_interval
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.base.frobenius_norm()
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.base.trace().re
    }
}

impl AsRef<CMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.base
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.base.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = CMatrix::deserialize(d)?;
        HermitianMatrix::new(m).map_err(D::Error::custom)
    }
}
