//! Random instances that satisfy each checker's hypotheses by construction.

use super::CampaignConfig;
use crate::calculus::{ConvexFunctionSpec, Interval};
use crate::cpmaps::{unit_image, PositiveMap, WeightedTerm};
use crate::error::{Error, Result};
use crate::inequalities::*;
use crate::linalg::random::{random_frame, random_psd};
use crate::linalg::{eig_hermitian_matrix, random_hermitian, random_map_family, CMatrix, HermitianMatrix, Rng};

/// Default spectrum interval; always contains 0.
pub const DEFAULT_J: Interval = Interval { lo: -3.0, hi: 3.0 };

/// Exponent range for `|t|^r` when it appears as a function choice.
pub const ABS_POW_RANGE: (f64, f64) = (1.0, 3.0);

/// Functions that are submultiplicative on the whole line.
const SUBMULTIPLICATIVE_IDS: [&str; 2] = ["abs_pow", "square"];

fn pick<'a, T>(items: &'a [T], rng: &mut Rng) -> &'a T {
    &items[rng.int_in(0, items.len() - 1)]
}

fn draw_function(ids: &[String], domain: Option<Interval>, rng: &mut Rng) -> Result<ConvexFunctionSpec> {
    let id = pick(ids, rng);
    let r = (id == "abs_pow" || id == "half_pow").then(|| rng.exponent_in(ABS_POW_RANGE.0, ABS_POW_RANGE.1));
    ConvexFunctionSpec::from_id(id, r, domain)
}

fn hermitians(count: usize, n: usize, j: Interval, rng: &mut Rng) -> Result<Vec<HermitianMatrix>> {
    (0..count).map(|_| random_hermitian(n, j, rng)).collect()
}

fn probability_vector(len: usize, rng: &mut Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.uniform_in(0.05, 1.0)).collect();
    WeightVector::normalized(&raw).values
}

fn exponent(cfg: &CampaignConfig, lo: f64, hi: f64, rng: &mut Rng) -> Result<f64> {
    let a = cfg.r_range.0.max(lo);
    let b = cfg.r_range.1.min(hi);
    if !(a <= b) || a < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "{}: exponent range [{}, {}] does not meet the allowed range [{lo}, {hi}]",
            cfg.theorem_id, cfg.r_range.0, cfg.r_range.1
        )));
    }
    if a == b {
        return Ok(a);
    }
    Ok(rng.exponent_in(a, b))
}

/// A positive map `M_n → M_m` with `Φ(I) > 0` almost surely when `n ≥ m`.
fn random_positive_map(n: usize, m: usize, rng: &mut Rng) -> Result<PositiveMap> {
    Ok(match rng.int_in(0, 3) {
        0 | 1 => PositiveMap::congruence(rng.gaussian_matrix(n, m)),
        2 => PositiveMap::DiagonalPovm {
            effects: (0..n).map(|_| random_psd(m, m, rng).into_matrix()).collect(),
        },
        _ => PositiveMap::Conjugated {
            map: Box::new(PositiveMap::Transpose { n }),
            x: rng.gaussian_matrix(n, m),
        },
    })
}

/// Scales `α` so that `Σ α_i Φ_i(I) ≤ I`.
fn fit_subunital(alpha: &mut [f64], maps: &[PositiveMap]) -> Result<()> {
    let mut unit: Option<CMatrix> = None;
    for (a, map) in alpha.iter().zip(maps) {
        let u = unit_image(map)?;
        match unit.as_mut() {
            Some(acc) => acc.axpy(*a, &u)?,
            None => unit = Some(u.scale(*a)),
        }
    }
    let top = eig_hermitian_matrix(&unit.expect("at least one map").hermitian_part())?.max();
    if top > 1.0 {
        // A hair below 1 so rounding in the checker's own sum stays inside.
        let s = (1.0 - 1e-12) / top;
        alpha.iter_mut().for_each(|a| *a *= s);
    }
    Ok(())
}

/// One candidate instance for `cfg.theorem_id`.
pub fn generate_instance(cfg: &CampaignConfig, rng: &mut Rng) -> Result<Instance> {
    let n = rng.int_in(cfg.n_range.0, cfg.n_range.1);
    let m = rng.int_in(cfg.m_range.0, cfg.m_range.1);
    let ell = rng.int_in(cfg.ell_range.0, cfg.ell_range.1);
    let fids = &cfg.function_ids;
    Ok(match cfg.theorem_id.as_str() {
        "bohr" => Instance::ScalarBohr(ScalarBohrInstance {
            z: rng.complex_normal(),
            w: rng.complex_normal(),
            p: exponent(cfg, 1.0, f64::INFINITY, rng)?,
        }),
        "vasic" => Instance::VasicKeckic(VasicKeckicInstance {
            z: (0..ell).map(|_| rng.complex_normal()).collect(),
            p: (0..ell).map(|_| rng.uniform_in(0.05, 2.0)).collect(),
            r: exponent(cfg, 1.0, f64::INFINITY, rng)?,
        }),
        "jensen-vec" => Instance::JensenVector(JensenVectorInstance {
            f: draw_function(fids, Some(DEFAULT_J), rng)?,
            a: random_hermitian(n, DEFAULT_J, rng)?,
            x: rng.ball_vector(n),
        }),
        "jensen-map" => {
            let m = m.min(n);
            if rng.uniform() < 0.5 {
                let map = if rng.uniform() < 0.5 {
                    PositiveMap::congruence(random_map_family(1, n, m, &[1.0], rng)?.remove(0))
                } else {
                    let mut effects: Vec<CMatrix> = (0..n).map(|_| random_psd(m, m, rng).into_matrix()).collect();
                    let mut total = CMatrix::zeros(m, m);
                    for e in &effects {
                        total.axpy(1.0, e)?;
                    }
                    let top = eig_hermitian_matrix(&total.hermitian_part())?.max();
                    let s = rng.uniform_in(0.5, 1.0) / top;
                    effects.iter_mut().for_each(|e| *e = e.scale(s));
                    PositiveMap::DiagonalPovm { effects }
                };
                Instance::JensenMap(JensenMapInstance {
                    f: draw_function(fids, Some(DEFAULT_J), rng)?,
                    a: random_hermitian(n, DEFAULT_J, rng)?,
                    map,
                    x: rng.ball_vector(m),
                    variant: JensenVariant::Subunital,
                })
            } else {
                // Unital: an isometry, or a convex combination of isometries.
                let k = rng.int_in(1, 3);
                let weights = probability_vector(k, rng);
                let mut terms = Vec::with_capacity(k);
                for &w in &weights {
                    terms.push((w, PositiveMap::congruence(random_frame(n, m, rng)?)));
                }
                let map = if k == 1 {
                    terms.remove(0).1
                } else {
                    PositiveMap::weighted_sum(terms)
                };
                let j = if rng.uniform() < 0.5 {
                    DEFAULT_J
                } else {
                    Interval::new(0.5, 3.0)
                };
                Instance::JensenMap(JensenMapInstance {
                    f: draw_function(fids, Some(j), rng)?,
                    a: random_hermitian(n, j, rng)?,
                    map,
                    x: rng.unit_vector(m),
                    variant: JensenVariant::UnitalRemark,
                })
            }
        }
        "thm1" => {
            let maps: Vec<PositiveMap> = (0..ell)
                .map(|_| random_positive_map(n, m, rng))
                .collect::<Result<_>>()?;
            let mut alpha: Vec<f64> = (0..ell).map(|_| rng.uniform_in(0.1, 1.0)).collect();
            fit_subunital(&mut alpha, &maps)?;
            Instance::WeakMajor(WeakMajorInstance {
                f: draw_function(fids, Some(DEFAULT_J), rng)?,
                a: random_hermitian(n, DEFAULT_J, rng)?,
                maps: alpha
                    .into_iter()
                    .zip(maps)
                    .map(|(alpha, map)| WeightedTerm { alpha, map })
                    .collect(),
            })
        }
        "cornew" => {
            let usable: Vec<String> = fids
                .iter()
                .filter(|id| SUBMULTIPLICATIVE_IDS.contains(&id.as_str()))
                .cloned()
                .collect();
            let ids = if usable.is_empty() { fids } else { &usable };
            let alpha: Vec<f64> = (0..ell).map(|_| rng.uniform_in(0.1, 1.0)).collect();
            let x = random_map_family(ell, n, m, &alpha, rng)?;
            Instance::Congruence(CongruenceInstance {
                f: draw_function(ids, None, rng)?,
                a: hermitians(ell, n, DEFAULT_J, rng)?,
                x,
                alpha,
            })
        }
        "cor45" => {
            let r = exponent(cfg, 1.0, f64::INFINITY, rng)?;
            let p: Vec<f64> = (0..ell).map(|_| rng.uniform_in(0.05, 1.0)).collect();
            let w: Vec<f64> = p.iter().map(|v| v.powf(1.0 / (1.0 - r))).collect();
            let wn = WeightVector::normalized(&w).values;
            Instance::EigenBohr(EigenBohrInstance {
                a: hermitians(ell, n, DEFAULT_J, rng)?,
                x: random_map_family(ell, n, n, &wn, rng)?,
                p,
                r,
            })
        }
        "zh" => Instance::NormBohr(NormBohrInstance {
            a: hermitians(ell, n, DEFAULT_J, rng)?,
            p: probability_vector(ell, rng),
            r: exponent(cfg, 1.0, 2.0, rng)?,
        }),
        "prop-r2" => Instance::PointwiseBohr(PointwiseBohrInstance {
            a: (0..ell).map(|_| rng.gaussian_matrix(n, n)).collect(),
            p: probability_vector(ell, rng),
            r: exponent(cfg, 2.0, f64::INFINITY, rng)?,
        }),
        "sumsq" => Instance::SumSquare(SumSquareInstance {
            a: (0..ell).map(|_| rng.gaussian_matrix(n, n)).collect(),
            p: probability_vector(ell, rng),
        }),
        "inc-convex" => {
            let id = pick(fids, rng).clone();
            // |t|^r and t² are increasing only on the nonnegative half.
            let j = if matches!(id.as_str(), "abs_pow" | "square" | "half_pow") {
                Interval::new(0.0, 3.0)
            } else {
                DEFAULT_J
            };
            Instance::IncreasingConvex(IncreasingConvexInstance {
                f: draw_function(&[id], Some(j), rng)?,
                a: hermitians(ell, n, j, rng)?,
                p: probability_vector(ell, rng),
            })
        }
        other => {
            return Err(Error::Unknown {
                what: "theorem",
                id: other.to_string(),
            })
        }
    })
}

/// An instance of the eigenvalue Bohr inequality near its equality set:
/// `A_i = c_i U_i B U_i* + ε_i H_i`, `X_i = U_i` Haar unitary, with
/// `c_i ∝ p_i^{1/(1−r)}`. At `ε = 0` both sides equal `λ(|B|^r)` for every
/// `k`, so halving the right-hand side must break the inequality.
pub fn near_equality_eigen_bohr(
    n: usize,
    ell: usize,
    r: f64,
    perturbation: f64,
    rng: &mut Rng,
) -> Result<EigenBohrInstance> {
    let p: Vec<f64> = (0..ell).map(|_| rng.uniform_in(0.05, 1.0)).collect();
    let c = WeightVector::normalized(&p.iter().map(|v| v.powf(1.0 / (1.0 - r))).collect::<Vec<_>>()).values;
    let b = random_hermitian(n, DEFAULT_J, rng)?;
    let mut a = Vec::with_capacity(ell);
    let mut x = Vec::with_capacity(ell);
    for ci in c {
        let u = crate::linalg::random_unitary(n, rng)?;
        let mut ai = b.matrix().congruence(&u.adjoint())?.scale(ci);
        let h = random_hermitian(n, Interval::symmetric(1.0), rng)?;
        ai.axpy(perturbation * ci * rng.uniform(), h.matrix())?;
        a.push(HermitianMatrix::new(ai)?);
        x.push(u);
    }
    Ok(EigenBohrInstance { a, x, p, r })
}
