//! Positive and completely positive linear maps `M_n → M_m`.
//!
//! Conventions, used consistently by the Choi, Kraus and Stinespring code:
//!
//! * Choi matrix: `C = Σ_{ij} E_ij ⊗ Φ(E_ij)`, so block `(i, j)` of `C` is
//!   `Φ(E_ij)` and `C` is `nm × nm`.
//! * Kraus form: `Φ(A) = Σ_j K_j* A K_j` with `K_j` of shape `n × m`.
//! * An eigenpair `(λ, v)` of `C` gives `K = √λ · conj(reshape(v))`, where
//!   `reshape` reads `v` row-major into an `n × m` matrix.
//! * Stinespring: `V` is the vertical stack of the `K_j` and `π(A)` is the
//!   block-diagonal repetition of `A`, so `Φ(A) = V* π(A) V`.

use serde::{Deserialize, Serialize};

use crate::calculus::Interval;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, random_hermitian, CMatrix, HermitianMatrix, Rng, C64};

/// Eigenvalues of a Choi matrix at or below this fraction of the largest
/// are treated as zero when extracting Kraus operators.
pub const KRAUS_RANK_TOL: f64 = 1e-10;

/// PSD tolerance for POVM effects and for the unit image of subunital maps.
pub const PSD_TOL: f64 = 1e-10;

/// Relative bound on `‖Φ(A) − V*π(A)V‖_F` accepted by [`stinespring`].
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

const RECONSTRUCTION_PROBES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedTerm {
    pub alpha: f64,
    pub map: PositiveMap,
}

/// Structural description of a positive linear map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PositiveMap {
    /// `A ↦ X* A X` with `X` of shape `n × m`.
    Congruence {
        #[serde(rename = "X")]
        x: CMatrix,
    },
    /// `A ↦ Σ α_i Φ_i(A)`, `α_i ≥ 0`.
    #[serde(rename = "sum")]
    WeightedSum { terms: Vec<WeightedTerm> },
    /// `A ↦ Σ_i A_ii P_i` with PSD `P_i`; `n` is the number of effects.
    #[serde(rename = "povm")]
    DiagonalPovm {
        #[serde(rename = "P")]
        effects: Vec<CMatrix>,
    },
    /// Reads `A` as an `ℓ × ℓ` block matrix and returns `X* A_ii X`.
    #[serde(rename = "block")]
    BlockExtraction {
        i: usize,
        ell: usize,
        #[serde(rename = "X")]
        x: CMatrix,
    },
    /// `A ↦ Aᵀ` on `M_n`: positive but not completely positive.
    Transpose { n: usize },
    /// `A ↦ X* Φ(A) X`.
    Conjugated {
        map: Box<PositiveMap>,
        #[serde(rename = "X")]
        x: CMatrix,
    },
}

impl PositiveMap {
    pub fn identity(n: usize) -> Self {
        PositiveMap::Congruence {
            x: CMatrix::identity(n),
        }
    }

    pub fn congruence(x: CMatrix) -> Self {
        PositiveMap::Congruence { x }
    }

    pub fn weighted_sum(terms: impl IntoIterator<Item = (f64, PositiveMap)>) -> Self {
        PositiveMap::WeightedSum {
            terms: terms
                .into_iter()
                .map(|(alpha, map)| WeightedTerm { alpha, map })
                .collect(),
        }
    }

    /// Validates the map description and returns `(n_in, m_out)`.
    pub fn dims(&self) -> Result<(usize, usize)> {
        match self {
            PositiveMap::Congruence { x } => Ok(x.shape()),
            PositiveMap::WeightedSum { terms } => {
                let first = terms
                    .first()
                    .ok_or_else(|| Error::InvalidParameter("weighted sum needs at least one term".into()))?;
                let dims = first.map.dims()?;
                for t in terms {
                    if !(t.alpha >= 0.0) || !t.alpha.is_finite() {
                        return Err(Error::InvalidParameter(format!("negative weight {}", t.alpha)));
                    }
                    let d = t.map.dims()?;
                    if d != dims {
                        return Err(Error::DimensionMismatch {
                            op: "weighted sum",
                            left: dims,
                            right: d,
                        });
                    }
                }
                Ok(dims)
            }
            PositiveMap::DiagonalPovm { effects } => {
                let first = effects
                    .first()
                    .ok_or_else(|| Error::InvalidParameter("POVM needs effects".into()))?;
                let m = first.require_square()?;
                for p in effects {
                    if p.shape() != (m, m) {
                        return Err(Error::DimensionMismatch {
                            op: "povm",
                            left: (m, m),
                            right: p.shape(),
                        });
                    }
                    check_psd(p, "POVM effect")?;
                }
                Ok((effects.len(), m))
            }
            PositiveMap::BlockExtraction { i, ell, x } => {
                if *i >= *ell {
                    return Err(Error::InvalidParameter(format!("block index {i} outside 0..{ell}")));
                }
                Ok((ell * x.rows(), x.cols()))
            }
            PositiveMap::Transpose { n } => {
                if *n == 0 {
                    return Err(Error::Empty);
                }
                Ok((*n, *n))
            }
            PositiveMap::Conjugated { map, x } => {
                let (n, m) = map.dims()?;
                if x.rows() != m {
                    return Err(Error::DimensionMismatch {
                        op: "conjugated",
                        left: (n, m),
                        right: x.shape(),
                    });
                }
                Ok((n, x.cols()))
            }
        }
    }

    pub fn is_transpose_free(&self) -> bool {
        match self {
            PositiveMap::Transpose { .. } => false,
            PositiveMap::WeightedSum { terms } => terms.iter().all(|t| t.map.is_transpose_free()),
            PositiveMap::Conjugated { map, .. } => map.is_transpose_free(),
            _ => true,
        }
    }
}

fn check_psd(p: &CMatrix, what: &str) -> Result<()> {
    let h = HermitianMatrix::new(p.clone())?;
    let eig = eig_hermitian(&h)?;
    if eig.min() < -PSD_TOL * eig.max().abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "{what} is not positive semidefinite (λ_min = {:e})",
            eig.min()
        )));
    }
    Ok(())
}

/// `Φ(A)`.
pub fn apply_map(map: &PositiveMap, a: &CMatrix) -> Result<CMatrix> {
    let (n, _) = map.dims()?;
    if a.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "apply_map",
            left: (n, n),
            right: a.shape(),
        });
    }
    apply_unchecked(map, a)
}

fn apply_unchecked(map: &PositiveMap, a: &CMatrix) -> Result<CMatrix> {
    match map {
        PositiveMap::Congruence { x } => a.congruence(x),
        PositiveMap::WeightedSum { terms } => {
            let mut out: Option<CMatrix> = None;
            for t in terms {
                let v = apply_unchecked(&t.map, a)?;
                match out.as_mut() {
                    Some(acc) => acc.axpy(t.alpha, &v)?,
                    None => out = Some(v.scale(t.alpha)),
                }
            }
            Ok(out.expect("validated nonempty"))
        }
        PositiveMap::DiagonalPovm { effects } => {
            let m = effects[0].rows();
            let mut out = CMatrix::zeros(m, m);
            for (i, p) in effects.iter().enumerate() {
                let aii = a[(i, i)];
                for (o, v) in (0..m * m).map(|k| (k / m, k % m)).zip(p.as_slice()) {
                    out[o] += aii * v;
                }
            }
            Ok(out)
        }
        PositiveMap::BlockExtraction { i, x, .. } => {
            let b = x.rows();
            a.block(i * b, i * b, b, b).congruence(x)
        }
        PositiveMap::Transpose { .. } => Ok(a.transpose()),
        PositiveMap::Conjugated { map, x } => apply_unchecked(map, a)?.congruence(x),
    }
}

/// `Φ(I_n)`.
pub fn unit_image(map: &PositiveMap) -> Result<CMatrix> {
    let (n, _) = map.dims()?;
    apply_unchecked(map, &CMatrix::identity(n))
}

/// The amplification `Φ_k([A_ij]) = [Φ(A_ij)]` on `k × k` block matrices.
pub fn apply_amplified(map: &PositiveMap, a: &CMatrix, k: usize) -> Result<CMatrix> {
    let (n, m) = map.dims()?;
    if a.shape() != (k * n, k * n) {
        return Err(Error::DimensionMismatch {
            op: "apply_amplified",
            left: (k * n, k * n),
            right: a.shape(),
        });
    }
    let mut out = CMatrix::zeros(k * m, k * m);
    for i in 0..k {
        for j in 0..k {
            let img = apply_unchecked(map, &a.block(i * n, j * n, n, n))?;
            out.set_block(i * m, j * m, &img);
        }
    }
    Ok(out)
}

/// `C = Σ_{ij} E_ij ⊗ Φ(E_ij)`.
pub fn choi_matrix(map: &PositiveMap) -> Result<HermitianMatrix> {
    let (n, m) = map.dims()?;
    let mut c = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            let img = apply_unchecked(map, &CMatrix::unit(n, i, j))?;
            c.set_block(i * m, j * m, &img);
        }
    }
    HermitianMatrix::new(c)
}

/// Smallest eigenvalue of the Choi matrix.
pub fn choi_min_eigenvalue(map: &PositiveMap) -> Result<f64> {
    Ok(eig_hermitian(&choi_matrix(map)?)?.min())
}

/// `λ_min(C) ≥ −tol·max(1, λ_max(C))`.
pub fn is_completely_positive(map: &PositiveMap, tol: f64) -> Result<bool> {
    let eig = eig_hermitian(&choi_matrix(map)?)?;
    Ok(eig.min() >= -tol * eig.max().abs().max(1.0))
}

/// Kraus operators from a PSD Choi matrix of a map `M_n → M_m`.
///
/// Eigenpairs with `λ ≤ tol·λ_max` are dropped; a Choi matrix with an
/// eigenvalue below `−tol·max(1, λ_max)` is rejected.
pub fn kraus_from_choi(c: &HermitianMatrix, n: usize, m: usize, tol: f64) -> Result<Vec<CMatrix>> {
    if c.dim() != n * m {
        return Err(Error::DimensionMismatch {
            op: "kraus_from_choi",
            left: (c.dim(), c.dim()),
            right: (n * m, n * m),
        });
    }
    let eig = eig_hermitian(c)?;
    let top = eig.max();
    if eig.min() < -tol * top.abs().max(1.0) {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: eig.min(),
        });
    }
    let mut kraus = Vec::new();
    for (idx, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= tol * top {
            break;
        }
        let s = l.sqrt();
        let v = eig.eigenvectors.col(idx);
        kraus.push(CMatrix::from_fn(n, m, |i, a| v[i * m + a].conj() * s));
    }
    if kraus.is_empty() {
        kraus.push(CMatrix::zeros(n, m));
    }
    Ok(kraus)
}

/// `Φ(A) = V* π(A) V`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StinespringDilation {
    /// `kn × m`, the vertical stack of the Kraus operators.
    #[serde(rename = "V")]
    pub v: CMatrix,
    pub kraus: Vec<CMatrix>,
    /// Number of copies of `A` in `π(A)`.
    pub pi_block_count: usize,
    /// `‖V*V − I_m‖_F`; at most `1e-10` when the map is unital.
    pub isometry_defect: f64,
    /// Largest relative reconstruction residual over the probe matrices.
    pub reconstruction_residual: f64,
}

impl StinespringDilation {
    /// `π(A) = diag(A, …, A)`.
    pub fn pi(&self, a: &CMatrix) -> CMatrix {
        a.block_diag_repeat(self.pi_block_count)
    }

    /// `V* π(A) V`.
    pub fn reconstruct(&self, a: &CMatrix) -> Result<CMatrix> {
        self.pi(a).congruence(&self.v)
    }

    pub fn is_isometry(&self, tol: f64) -> bool {
        self.isometry_defect <= tol
    }
}

/// Builds the Stinespring dilation of a completely positive map and checks
/// the reconstruction on 20 random Hermitian matrices.
pub fn stinespring(map: &PositiveMap, tol: f64) -> Result<StinespringDilation> {
    let (n, m) = map.dims()?;
    let choi = choi_matrix(map)?;
    let kraus = kraus_from_choi(&choi, n, m, tol)?;
    let v = CMatrix::vstack(&kraus)?;
    let isometry_defect = (&v.adjoint().matmul(&v)? - &CMatrix::identity(m)).frobenius_norm();
    let mut dilation = StinespringDilation {
        pi_block_count: kraus.len(),
        v,
        kraus,
        isometry_defect,
        reconstruction_residual: 0.0,
    };
    let mut rng = Rng::new(0x5715_e5b1, n as u64 * 1000 + m as u64);
    let mut worst: f64 = 0.0;
    for _ in 0..RECONSTRUCTION_PROBES {
        let a = random_hermitian(n, Interval::symmetric(1.0), &mut rng)?;
        let direct = apply_unchecked(map, a.matrix())?;
        let via = dilation.reconstruct(a.matrix())?;
        let rel = (&direct - &via).frobenius_norm() / direct.frobenius_norm().max(1.0);
        worst = worst.max(rel);
    }
    dilation.reconstruction_residual = worst;
    if worst > RECONSTRUCTION_TOL {
        return Err(Error::Reconstruction {
            residual: worst,
            bound: RECONSTRUCTION_TOL,
        });
    }
    Ok(dilation)
}

/// `‖Φ(I) − I‖_F ≤ tol`.
pub fn is_unital(map: &PositiveMap, tol: f64) -> Result<bool> {
    let (_, m) = map.dims()?;
    Ok((&unit_image(map)? - &CMatrix::identity(m)).frobenius_norm() <= tol)
}

/// `Ψ(X) = Φ(I)^{-1/2} Φ(X) Φ(I)^{-1/2}`, which is unital whenever `Φ(I)` is
/// positive definite.
pub fn normalize_unital(map: &PositiveMap) -> Result<PositiveMap> {
    let unit = HermitianMatrix::new(unit_image(map)?)?;
    let eig = eig_hermitian(&unit)?;
    if eig.min() <= PSD_TOL * eig.max().max(0.0) || eig.min() <= 0.0 {
        return Err(Error::SingularUnit(format!(
            "λ(Φ(I)) spans [{:e}, {:e}]",
            eig.min(),
            eig.max()
        )));
    }
    let inv_sqrt = eig.reconstruct_with(|l| 1.0 / l.sqrt());
    Ok(match map {
        PositiveMap::Congruence { x } => PositiveMap::Congruence {
            x: x.matmul(&inv_sqrt)?,
        },
        other => PositiveMap::Conjugated {
            map: Box::new(other.clone()),
            x: inv_sqrt,
        },
    })
}

/// `A ↦ Σ_j K_j* A K_j`, the map described by a Kraus list.
pub fn map_from_kraus(kraus: &[CMatrix]) -> PositiveMap {
    PositiveMap::weighted_sum(kraus.iter().map(|k| (1.0, PositiveMap::congruence(k.clone()))))
}

/// Phase-insensitive distance between two matrices: `min_θ ‖A − e^{iθ}B‖_F`.
pub fn distance_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let inner: C64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| y.conj() * x).sum();
    let phase = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    (a - &b.scale_complex(phase)).frobenius_norm()
}
