use serde::Serialize;

use crate::calculus::{ConvexFunctionSpec, Interval};
use crate::cpmaps::{apply_map, stinespring, PositiveMap, WeightedTerm, KRAUS_RANK_TOL};
use crate::error::Result;
use crate::inequalities::*;
use crate::linalg::{CMatrix, HermitianMatrix, C64};

/// One row of the demo table: the two sides at index `k` and their slack.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoRow {
    pub name: String,
    /// 1-based comparison index; 1 for scalar rows.
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

fn rows_from(name: &str, rep: &CheckReport, out: &mut Vec<DemoRow>) {
    for (i, (l, r)) in rep.partial_sums_lhs.iter().zip(&rep.partial_sums_rhs).enumerate() {
        out.push(DemoRow {
            name: name.to_string(),
            k: i + 1,
            lhs: *l,
            rhs: *r,
            slack: r - l,
        });
    }
}

/// The worked equality cases plus the diagonal example with slack 1.
pub fn demo() -> Result<Vec<DemoRow>> {
    let opts = CheckOptions::default();
    let mut rows = Vec::new();
    let one = C64::new(1.0, 0.0);

    rows_from("bohr z=1 w=1 p=2", &check_scalar_bohr(one, one, 2.0, &opts), &mut rows);

    let (p, r) = ([0.5, 0.3, 0.2], 2.5);
    let z: Vec<C64> = p.iter().map(|v: &f64| C64::new(v.powf(1.0 / (1.0 - r)), 0.0)).collect();
    rows_from(
        "vasic stationary z_j = p_j^(1/(1-r))",
        &check_vasic_keckic(&z, &p, r, &opts),
        &mut rows,
    );

    // The identity map on M_2 dilates with a single Kraus operator.
    let id = PositiveMap::identity(2);
    let dil = stinespring(&id, KRAUS_RANK_TOL)?;
    let a = CMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, -2.0]])?;
    let direct = apply_map(&id, &a)?.frobenius_norm();
    let via = dil.reconstruct(&a)?.frobenius_norm();
    rows.push(DemoRow {
        name: "stinespring identity ‖V*π(A)V‖ vs ‖Φ(A)‖".into(),
        k: 1,
        lhs: via,
        rhs: direct,
        slack: direct - via,
    });

    let i2 = CMatrix::identity(2);
    let e1 = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
    let e2 = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
    let rep = check_eigen_bohr(&[e1, e2], &[i2.clone(), i2.clone()], &[0.5, 0.5], 2.0, &opts)?;
    rows_from("cor45 diag(1,0), diag(0,1), r=2", &rep, &mut rows);

    // ℓ = 1 collapses every inequality to equality.
    let a = HermitianMatrix::from_real_diag(&[2.0, -1.0]);
    let f = ConvexFunctionSpec::abs_pow(2.0, Interval::new(-3.0, 3.0))?;
    let maps = [WeightedTerm {
        alpha: 1.0,
        map: PositiveMap::identity(2),
    }];
    rows_from(
        "thm1 ℓ=1 identity map",
        &check_thm_weak_major(&f, &a, &maps, &opts)?,
        &mut rows,
    );
    rows_from(
        "cor45 ℓ=1 X=I p=1 r=3",
        &check_eigen_bohr(std::slice::from_ref(&a), &[i2], &[1.0], 3.0, &opts)?,
        &mut rows,
    );
    rows_from(
        "zh ℓ=1 r=1.5",
        &check_norm_bohr(std::slice::from_ref(&a), &[1.0], 1.5, &opts)?,
        &mut rows,
    );
    rows_from(
        "prop-r2 ℓ=1 r=2",
        &check_pointwise_bohr_r2(&[a.into_matrix()], &[1.0], 2.0, &opts)?,
        &mut rows,
    );
    Ok(rows)
}
