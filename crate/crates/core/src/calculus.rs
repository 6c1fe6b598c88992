//! Scalar convex functions with numerically verified hypotheses, and the
//! Hermitian functional calculus `f(A) = U diag(f(λ)) U*`.
//!
//! Every [`ConvexFunctionSpec`] carries [`FunctionFlags`] established by
//! grid scans over its domain. The flags are evidence, not proofs: a checker
//! that needs, say, `f(0) ≤ 0` refuses to run when the flag is false, but a
//! true flag only means no counterexample was found on the grid.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, CMatrix, HermitianMatrix};

/// Eigenvalues this far outside the domain are clamped rather than rejected.
pub const DOMAIN_CLAMP_TOL: f64 = 1e-9;

/// Grid used when a spec is constructed.
pub const DEFAULT_SCAN_GRID: usize = 201;

/// Points at which finiteness of `f` is checked on construction.
pub const FINITENESS_GRID: usize = 1000;

const SCAN_TOL: f64 = 1e-12;

/// Closed real interval; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn real_line() -> Self {
        Interval::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn symmetric(half_width: f64) -> Self {
        Interval::new(-half_width, half_width)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_within(&self, t: f64, tol: f64) -> bool {
        self.lo - tol <= t && t <= self.hi + tol
    }

    pub fn clamp(&self, t: f64) -> f64 {
        t.max(self.lo).min(self.hi)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Finite window used for grid scans: infinite ends are replaced by a
    /// point `10·max(1, |end|)` beyond the finite end (or ±10 for the whole line).
    pub fn scan_window(&self) -> Interval {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => *self,
            (true, false) => Interval::new(self.lo, self.lo + 10.0 * self.lo.abs().max(1.0)),
            (false, true) => Interval::new(self.hi - 10.0 * self.hi.abs().max(1.0), self.hi),
            (false, false) => Interval::symmetric(10.0),
        }
    }

    pub fn grid(&self, points: usize) -> Vec<f64> {
        let w = self.scan_window();
        if points < 2 || w.lo == w.hi {
            return vec![w.lo];
        }
        let h = (w.hi - w.lo) / (points - 1) as f64;
        (0..points)
            .map(|i| if i + 1 == points { w.hi } else { w.lo + h * i as f64 })
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

// `[lo, hi]`, with `null` standing for an infinite end.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let end = |x: f64| x.is_finite().then_some(x);
        [end(self.lo), end(self.hi)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let [lo, hi] = <[Option<f64>; 2]>::deserialize(d)?;
        let iv = Interval::new(lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY));
        if iv.lo > iv.hi {
            return Err(D::Error::custom(format!("empty interval {iv}")));
        }
        Ok(iv)
    }
}

/// The built-in scalar functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FunctionKind {
    /// `|t|^r`
    AbsPow { r: f64 },
    /// `t²`
    Square,
    /// `e^t − 1`
    ExpMinusOne,
    /// `max(t, 0)`
    PositivePart,
    /// `t`
    Linear,
    /// `t^{r/2}` on `[0, ∞)`
    HalfPow { r: f64 },
    /// `t³`, a non-convex control.
    Cube,
}

impl FunctionKind {
    pub fn id(&self) -> &'static str {
        match self {
            FunctionKind::AbsPow { .. } => "abs_pow",
            FunctionKind::Square => "square",
            FunctionKind::ExpMinusOne => "exp_m1",
            FunctionKind::PositivePart => "pos_part",
            FunctionKind::Linear => "linear",
            FunctionKind::HalfPow { .. } => "half_pow",
            FunctionKind::Cube => "cube",
        }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            FunctionKind::AbsPow { r } | FunctionKind::HalfPow { r } => Some(r),
            _ => None,
        }
    }

    pub fn from_id(id: &str, r: Option<f64>) -> Result<Self> {
        let need_r = || {
            r.filter(|r| r.is_finite() && *r > 0.0)
                .ok_or_else(|| Error::InvalidParameter(format!("function `{id}` needs a positive parameter `r`")))
        };
        Ok(match id {
            "abs_pow" => FunctionKind::AbsPow { r: need_r()? },
            "square" => FunctionKind::Square,
            "exp_m1" => FunctionKind::ExpMinusOne,
            "pos_part" => FunctionKind::PositivePart,
            "linear" => FunctionKind::Linear,
            "half_pow" => FunctionKind::HalfPow { r: need_r()? },
            "cube" => FunctionKind::Cube,
            other => {
                return Err(Error::Unknown {
                    what: "function id",
                    id: other.to_string(),
                })
            }
        })
    }

    /// Largest interval on which the formula is defined.
    pub fn natural_domain(&self) -> Interval {
        match self {
            FunctionKind::HalfPow { .. } => Interval::new(0.0, f64::INFINITY),
            _ => Interval::real_line(),
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            FunctionKind::AbsPow { r } => t.abs().powf(r),
            FunctionKind::Square => t * t,
            FunctionKind::ExpMinusOne => t.exp_m1(),
            FunctionKind::PositivePart => t.max(0.0),
            FunctionKind::Linear => t,
            FunctionKind::HalfPow { r } => {
                if t < 0.0 {
                    f64::NAN
                } else {
                    t.powf(r / 2.0)
                }
            }
            FunctionKind::Cube => t * t * t,
        }
    }
}

/// Hypothesis flags, each established by a numeric scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFlags {
    pub convex_on_j: bool,
    pub zero_in_j: bool,
    pub f0_nonpositive: bool,
    pub increasing: bool,
    pub submultiplicative: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexFunctionSpec {
    kind: FunctionKind,
    domain: Interval,
    flags: FunctionFlags,
}

impl ConvexFunctionSpec {
    /// Builds a spec, checks that `f` is finite on a 1,000-point grid over
    /// the domain, and runs the flag scans.
    pub fn new(kind: FunctionKind, domain: Interval) -> Result<Self> {
        let natural = kind.natural_domain();
        if domain.lo < natural.lo || domain.hi > natural.hi || domain.lo > domain.hi {
            return Err(Error::InvalidParameter(format!(
                "domain {domain} is not inside the natural domain {natural} of `{}`",
                kind.id()
            )));
        }
        for t in domain.grid(FINITENESS_GRID) {
            if !kind.eval(t).is_finite() {
                return Err(Error::NonFiniteValue {
                    id: kind.id().to_string(),
                    at: t,
                });
            }
        }
        let mut spec = ConvexFunctionSpec {
            kind,
            domain,
            flags: FunctionFlags::default(),
        };
        spec.flags = validate_function_spec(&spec, DEFAULT_SCAN_GRID);
        Ok(spec)
    }

    pub fn from_id(id: &str, r: Option<f64>, domain: Option<Interval>) -> Result<Self> {
        let kind = FunctionKind::from_id(id, r)?;
        Self::new(kind, domain.unwrap_or_else(|| kind.natural_domain()))
    }

    /// Same function re-validated on another domain.
    pub fn on_domain(&self, domain: Interval) -> Result<Self> {
        Self::new(self.kind, domain)
    }

    pub fn abs_pow(r: f64, domain: Interval) -> Result<Self> {
        Self::new(FunctionKind::AbsPow { r }, domain)
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn id(&self) -> &'static str {
        self.kind.id()
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn flags(&self) -> FunctionFlags {
        self.flags
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.kind.eval(t)
    }

    /// Evaluates after clamping a point that is within [`DOMAIN_CLAMP_TOL`]
    /// (relative) of the domain.
    pub fn eval_in_domain(&self, t: f64) -> Result<f64> {
        let tol = DOMAIN_CLAMP_TOL * t.abs().max(1.0);
        if !self.domain.contains_within(t, tol) {
            return Err(Error::SpectrumOutsideDomain {
                eigenvalue: t,
                lo: self.domain.lo,
                hi: self.domain.hi,
            });
        }
        let v = self.kind.eval(self.domain.clamp(t));
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                id: self.id().to_string(),
                at: t,
            });
        }
        Ok(v)
    }
}

impl fmt::Display for ConvexFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind.param() {
            Some(r) => write!(f, "{}(r={}) on {}", self.id(), r, self.domain),
            None => write!(f, "{} on {}", self.id(), self.domain),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    domain: Option<Interval>,
}

impl Serialize for ConvexFunctionSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionJson {
            id: self.id().to_string(),
            r: self.kind.param(),
            domain: Some(self.domain),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexFunctionSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FunctionJson::deserialize(d)?;
        ConvexFunctionSpec::from_id(&raw.id, raw.r, raw.domain).map_err(D::Error::custom)
    }
}

/// Runs the hypothesis scans on a `grid_size`-point grid over the domain
/// (its scan window when unbounded).
///
/// * convexity: `f((u+v)/2) ≤ (f(u)+f(v))/2` for every grid pair whose
///   midpoint is a grid point;
/// * monotonicity: consecutive grid values nondecreasing;
/// * submultiplicativity: `f(uv) ≤ f(u)f(v)` for grid pairs with `uv` in the
///   domain.
///
/// All comparisons allow `1e-12·max(1, |values|)`.
pub fn validate_function_spec(f: &ConvexFunctionSpec, grid_size: usize) -> FunctionFlags {
    let grid_size = grid_size.max(3);
    let grid = f.domain.grid(grid_size);
    let vals: Vec<f64> = grid.iter().map(|&t| f.eval(t)).collect();
    let finite = vals.iter().all(|v| v.is_finite());
    let slack = |a: f64, b: f64| SCAN_TOL * a.abs().max(b.abs()).max(1.0);

    let mut convex = finite;
    'outer: for i in 0..vals.len() {
        for j in (i + 2..vals.len()).step_by(2) {
            let mid = vals[(i + j) / 2];
            let chord = 0.5 * (vals[i] + vals[j]);
            if mid > chord + slack(vals[i], vals[j]) {
                convex = false;
                break 'outer;
            }
        }
    }

    let increasing = finite && vals.windows(2).all(|w| w[1] >= w[0] - slack(w[0], w[1]));

    let zero_in_j = f.domain.contains(0.0);
    let f0_nonpositive = zero_in_j && f.eval(0.0) <= 0.0;

    // The product scan is quadratic in evaluations, so it uses a coarser grid.
    let sub_grid = f.domain.grid(grid_size.min(101));
    let sub_vals: Vec<f64> = sub_grid.iter().map(|&t| f.eval(t)).collect();
    let mut submultiplicative = finite;
    'sub: for (u, fu) in sub_grid.iter().zip(&sub_vals) {
        for (v, fv) in sub_grid.iter().zip(&sub_vals) {
            let uv = u * v;
            if !f.domain.contains(uv) {
                continue;
            }
            let prod = fu * fv;
            let fuv = f.eval(uv);
            if !(fuv <= prod + slack(fuv, prod)) {
                submultiplicative = false;
                break 'sub;
            }
        }
    }

    FunctionFlags {
        convex_on_j: convex,
        zero_in_j,
        f0_nonpositive,
        increasing,
        submultiplicative,
    }
}

/// `f(A) = U diag(f(λ_j)) U*`.
///
/// Eigenvalues slightly outside the domain of `f` (see
/// [`DOMAIN_CLAMP_TOL`]) are clamped to the nearest endpoint.
pub fn apply_fun(f: &ConvexFunctionSpec, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(a)?;
    let mut mapped = Vec::with_capacity(eig.eigenvalues.len());
    for &l in &eig.eigenvalues {
        mapped.push(f.eval_in_domain(l)?);
    }
    let mut it = mapped.into_iter();
    let m = eig.reconstruct_with(|_| it.next().expect("one value per eigenvalue"));
    Ok(HermitianMatrix::from_parts_unchecked(m, None))
}

/// `|A|^r` for `r ≥ 1`, computed from the eigendecomposition of `A*A`.
pub fn abs_power(a: &CMatrix, r: f64) -> Result<HermitianMatrix> {
    a.require_square()?;
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("abs_power needs r ≥ 1, got {r}")));
    }
    let gram = HermitianMatrix::from_parts_unchecked(a.adjoint().matmul(a)?.hermitian_part(), None);
    let eig = eig_hermitian(&gram)?;
    let half = r / 2.0;
    Ok(HermitianMatrix::from_parts_unchecked(
        eig.reconstruct_with(|l| l.max(0.0).powf(half)),
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{abs_matrix, C64};

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn square_of_diagonal() {
        let f = ConvexFunctionSpec::new(FunctionKind::Square, Interval::symmetric(3.0)).unwrap();
        let out = apply_fun(&f, &HermitianMatrix::from_real_diag(&[1.0, -2.0])).unwrap();
        assert!(close(out.matrix(), &CMatrix::from_real_diag(&[1.0, 4.0]), 1e-14));
    }

    #[test]
    fn exp_m1_of_zero() {
        let f = ConvexFunctionSpec::new(FunctionKind::ExpMinusOne, Interval::symmetric(1.0)).unwrap();
        let out = apply_fun(&f, &HermitianMatrix::from_real_diag(&[0.0, 0.0])).unwrap();
        assert_eq!(out.frobenius_norm(), 0.0);
    }

    #[test]
    fn abs_pow_of_swap_is_identity() {
        let f = ConvexFunctionSpec::abs_pow(1.5, Interval::symmetric(2.0)).unwrap();
        let x = HermitianMatrix::new(CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()).unwrap();
        let out = apply_fun(&f, &x).unwrap();
        assert!(close(out.matrix(), &CMatrix::identity(2), 1e-12));
    }

    #[test]
    fn spectrum_outside_domain_rejected() {
        let f = ConvexFunctionSpec::new(FunctionKind::Square, Interval::new(0.0, 1.0)).unwrap();
        let r = apply_fun(&f, &HermitianMatrix::from_real_diag(&[2.0]));
        assert!(matches!(r, Err(Error::SpectrumOutsideDomain { .. })));
    }

    #[test]
    fn spectrum_just_outside_domain_is_clamped() {
        let f = ConvexFunctionSpec::new(FunctionKind::HalfPow { r: 3.0 }, Interval::new(0.0, f64::INFINITY)).unwrap();
        let out = apply_fun(&f, &HermitianMatrix::from_real_diag(&[-1e-12, 4.0])).unwrap();
        assert!(close(out.matrix(), &CMatrix::from_real_diag(&[0.0, 8.0]), 1e-12));
    }

    #[test]
    fn abs_power_examples() {
        let a = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let sq = abs_power(&a, 2.0).unwrap();
        assert!(close(sq.matrix(), &CMatrix::from_real_diag(&[0.0, 4.0]), 1e-13));
        assert!(close(sq.matrix(), &a.adjoint().matmul(&a).unwrap(), 1e-13));

        let b = CMatrix::from_real_diag(&[-2.0, 1.0]);
        let cube = abs_power(&b, 3.0).unwrap();
        assert!(close(cube.matrix(), &CMatrix::from_real_diag(&[8.0, 1.0]), 1e-12));

        let c = CMatrix::from_fn(3, 3, |i, j| C64::new((i + 2 * j) as f64, i as f64 - j as f64));
        let one = abs_power(&c, 1.0).unwrap();
        assert!(close(one.matrix(), abs_matrix(&c).unwrap().matrix(), 1e-10));
    }

    #[test]
    fn abs_power_rejects_small_exponent() {
        assert!(abs_power(&CMatrix::identity(2), 0.5).is_err());
    }

    #[test]
    fn cube_is_not_convex_on_symmetric_interval() {
        let f = ConvexFunctionSpec::new(FunctionKind::Cube, Interval::symmetric(1.0)).unwrap();
        assert!(!f.flags().convex_on_j);
    }

    #[test]
    fn abs_pow_flags() {
        let f = ConvexFunctionSpec::abs_pow(1.5, Interval::symmetric(2.0)).unwrap();
        let fl = f.flags();
        assert!(fl.convex_on_j && fl.zero_in_j && fl.f0_nonpositive && fl.submultiplicative);
        assert!(!fl.increasing);
    }

    #[test]
    fn linear_flags_are_grid_limited() {
        // f(uv) = uv = f(u)f(v): the product scan sees equality everywhere,
        // so the flag passes even though nothing is proven off the grid.
        let f = ConvexFunctionSpec::new(FunctionKind::Linear, Interval::symmetric(1.0)).unwrap();
        let fl = validate_function_spec(&f, 41);
        assert!(fl.convex_on_j && fl.increasing && fl.submultiplicative);
    }

    #[test]
    fn exp_m1_and_pos_part_are_not_submultiplicative() {
        let e = ConvexFunctionSpec::new(FunctionKind::ExpMinusOne, Interval::symmetric(3.0)).unwrap();
        assert!(!e.flags().submultiplicative);
        assert!(e.flags().increasing && e.flags().convex_on_j && e.flags().f0_nonpositive);
        let p = ConvexFunctionSpec::new(FunctionKind::PositivePart, Interval::symmetric(3.0)).unwrap();
        assert!(!p.flags().submultiplicative);
    }

    #[test]
    fn zero_outside_domain() {
        let e = ConvexFunctionSpec::new(FunctionKind::ExpMinusOne, Interval::new(1.0, 2.0)).unwrap();
        assert!(!e.flags().zero_in_j && !e.flags().f0_nonpositive && e.flags().convex_on_j);
    }

    #[test]
    fn spec_json() {
        let f: ConvexFunctionSpec = serde_json::from_str(r#"{"id": "abs_pow", "r": 2.5, "J": [-3, 3]}"#).unwrap();
        assert_eq!(f.kind(), FunctionKind::AbsPow { r: 2.5 });
        assert_eq!(f.domain(), Interval::symmetric(3.0));
        let half: ConvexFunctionSpec = serde_json::from_str(r#"{"id": "half_pow", "r": 3}"#).unwrap();
        assert_eq!(half.domain().hi, f64::INFINITY);
        assert!(serde_json::to_string(&half).unwrap().contains("[0.0,null]"));
        assert!(serde_json::from_str::<ConvexFunctionSpec>(r#"{"id": "sinh"}"#).is_err());
        assert!(serde_json::from_str::<ConvexFunctionSpec>(r#"{"id": "abs_pow"}"#).is_err());
    }
}
