use bohr_core::calculus::{ConvexFunctionSpec, FunctionKind, Interval};
use bohr_core::cpmaps::{PositiveMap, WeightedTerm};
use bohr_core::inequalities::*;
use bohr_core::linalg::random::random_hermitian;
use bohr_core::linalg::{eig_hermitian_matrix, random_map_family, CMatrix, HermitianMatrix, Rng, C64};

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn diag(v: &[f64]) -> HermitianMatrix {
    HermitianMatrix::from_real_diag(v)
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
    }
}

fn unit_f(id: &str, r: Option<f64>) -> ConvexFunctionSpec {
    ConvexFunctionSpec::from_id(id, r, Some(Interval::new(-3.0, 3.0))).unwrap()
}

#[test]
fn scalar_bohr_equality_case() {
    let r = check_scalar_bohr(c(1.0), c(1.0), 2.0, &opts());
    assert!(r.holds && r.equality);
    assert_eq!(r.partial_sums_lhs, vec![4.0]);
    assert_eq!(r.partial_sums_rhs, vec![4.0]);
}

#[test]
fn scalar_bohr_trivial_and_random() {
    let r = check_scalar_bohr(c(1.0), c(0.0), 2.0, &opts());
    assert!(r.holds && !r.equality);
    assert_eq!((r.partial_sums_lhs[0], r.partial_sums_rhs[0]), (1.0, 2.0));

    let mut rng = Rng::new(11, 0);
    for _ in 0..200 {
        let (z, w) = (rng.complex_normal(), rng.complex_normal());
        let r = check_scalar_bohr(z, w, 3.0, &opts());
        // |z+w|² ≤ 3|z|² + 1.5|w|², evaluated independently.
        let slack = 3.0 * z.norm_sqr() + 1.5 * w.norm_sqr() - (z + w).norm_sqr();
        assert!(r.holds);
        assert!((r.min_slack - slack).abs() < 1e-12);
    }
}

#[test]
fn scalar_bohr_rejects_p_at_most_one() {
    let r = check_scalar_bohr(c(1.0), c(1.0), 1.0, &opts());
    assert_eq!(r.verdict, Verdict::NotApplicable);
    assert!(!r.is_violation());
}

#[test]
fn vasic_single_term_is_equality() {
    let r = check_vasic_keckic(&[C64::new(0.3, -1.2)], &[0.7], 2.5, &opts());
    assert!(r.holds);
    assert!(r.min_slack.abs() <= 1e-10);
}

#[test]
fn vasic_stationary_point() {
    let p = [0.5, 2.0, 1.3];
    let r = 3.0;
    let z: Vec<C64> = p.iter().map(|x: &f64| c(x.powf(1.0 / (1.0 - r)))).collect();
    let rep = check_vasic_keckic(&z, &p, r, &opts());
    assert!(rep.holds);
    assert!(rep.min_slack.abs() <= 1e-10, "{}", rep.min_slack);
}

#[test]
fn vasic_parallelogram() {
    let z = [C64::new(1.0, 2.0), C64::new(-0.5, 0.25)];
    let rep = check_vasic_keckic(&z, &[1.0, 1.0], 2.0, &opts());
    let rhs = 2.0 * (z[0].norm_sqr() + z[1].norm_sqr());
    assert!((rep.partial_sums_rhs[0] - rhs).abs() < 1e-12);
    assert!(rep.holds);
    let bad = check_vasic_keckic(&z, &[1.0, 1.0], 0.9, &opts());
    assert!(bad.is_not_applicable());
}

#[test]
fn jensen_vector_examples() {
    let f = ConvexFunctionSpec::abs_pow(1.7, Interval::new(-3.0, 3.0)).unwrap();
    let a = diag(&[2.0, -1.0, 0.5]);
    let zero = vec![c(0.0); 3];
    let r = check_jensen_vector(&f, &a, &zero, &opts()).unwrap();
    assert!(r.holds);

    let e = vec![c(0.0), c(1.0), c(0.0)];
    let r = check_jensen_vector(&f, &a, &e, &opts()).unwrap();
    assert!(r.holds && r.equality);

    let mut rng = Rng::new(5, 1);
    for _ in 0..100 {
        let a = random_hermitian(4, Interval::new(-3.0, 3.0), &mut rng).unwrap();
        let x = rng.ball_vector(4);
        let r = check_jensen_vector(&f, &a, &x, &opts()).unwrap();
        assert!(r.holds, "{r:?}");
    }

    let long = vec![c(1.0), c(1.0), c(0.0)];
    assert!(check_jensen_vector(&f, &a, &long, &opts()).unwrap().is_not_applicable());
}

#[test]
fn jensen_map_examples() {
    let f = unit_f("square", None);
    let a = diag(&[1.5, -0.5]);
    let id = PositiveMap::identity(2);
    let x = vec![c(1.0), c(0.0)];
    let r = check_jensen_map(&f, &a, &id, &x, JensenVariant::Subunital, &opts()).unwrap();
    assert!(r.holds && r.equality);

    let mut rng = Rng::new(9, 2);
    for _ in 0..100 {
        let a = random_hermitian(4, Interval::new(-3.0, 3.0), &mut rng).unwrap();
        let xm = random_map_family(1, 4, 3, &[1.0], &mut rng).unwrap().remove(0);
        let map = PositiveMap::congruence(xm.clone());
        let x = rng.ball_vector(3);
        let r = check_jensen_map(&f, &a, &map, &x, JensenVariant::Subunital, &opts()).unwrap();
        // A rank-deficient Φ(I) is not strictly positive; skip those draws.
        if r.is_not_applicable() {
            continue;
        }
        assert!(r.holds, "{r:?}");
    }

    // Unital POVM map, f = e^t − 1 on [1, 2] which does not contain 0.
    let f = ConvexFunctionSpec::from_id("exp_m1", None, Some(Interval::new(1.0, 2.0))).unwrap();
    let p0 = CMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap();
    let p1 = &CMatrix::identity(2) - &p0;
    let povm = PositiveMap::DiagonalPovm { effects: vec![p0, p1] };
    let a = HermitianMatrix::new(CMatrix::from_real_rows(&[&[1.5, 0.3], &[0.3, 1.4]]).unwrap()).unwrap();
    let x = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
    let r = check_jensen_map(&f, &a, &povm, &x, JensenVariant::UnitalRemark, &opts()).unwrap();
    assert!(r.holds, "{r:?}");
    let r = check_jensen_map(&f, &a, &povm, &x, JensenVariant::Subunital, &opts()).unwrap();
    assert!(r.is_not_applicable());
}

#[test]
fn thm1_identity_and_linear_are_equalities() {
    let mut rng = Rng::new(21, 0);
    let a = random_hermitian(4, Interval::new(-3.0, 3.0), &mut rng).unwrap();
    let maps = vec![WeightedTerm {
        alpha: 1.0,
        map: PositiveMap::identity(4),
    }];
    for f in [
        unit_f("abs_pow", Some(2.5)),
        unit_f("exp_m1", None),
        unit_f("pos_part", None),
    ] {
        let r = check_thm_weak_major(&f, &a, &maps, &opts()).unwrap();
        assert!(r.holds && r.equality, "{r:?}");
    }

    let xs = random_map_family(3, 4, 3, &[0.5, 0.3, 0.2], &mut rng).unwrap();
    let maps: Vec<WeightedTerm> = xs
        .into_iter()
        .zip([0.5, 0.3, 0.2])
        .map(|(x, alpha)| WeightedTerm {
            alpha,
            map: PositiveMap::congruence(x),
        })
        .collect();
    let r = check_thm_weak_major(&unit_f("linear", None), &a, &maps, &opts()).unwrap();
    assert!(r.holds);
    assert!(r.min_slack.abs() < 1e-10);
}

#[test]
fn thm1_random_instance_and_ordering_oracle() {
    let mut rng = Rng::new(3, 3);
    let f = unit_f("abs_pow", Some(2.5));
    for _ in 0..20 {
        let a = random_hermitian(6, Interval::new(-3.0, 3.0), &mut rng).unwrap();
        let alpha = [0.2, 0.5, 0.3];
        let xs = random_map_family(3, 6, 4, &alpha, &mut rng).unwrap();
        let maps: Vec<WeightedTerm> = xs
            .iter()
            .zip(alpha)
            .map(|(x, alpha)| WeightedTerm {
                alpha,
                map: PositiveMap::congruence(x.clone()),
            })
            .collect();
        let r = check_thm_weak_major(&f, &a, &maps, &opts()).unwrap();
        assert!(r.holds, "{r:?}");

        // LHS oracle: f applied to the eigenvalues of S, then sorted descending.
        let mut s = CMatrix::zeros(4, 4);
        for (x, al) in xs.iter().zip(alpha) {
            s.axpy(al, &a.matrix().congruence(x).unwrap()).unwrap();
        }
        let mut fv: Vec<f64> = eig_hermitian_matrix(&s.hermitian_part())
            .unwrap()
            .eigenvalues
            .iter()
            .map(|&l| f.eval(l))
            .collect();
        fv.sort_by(|a, b| b.total_cmp(a));
        let sums: Vec<f64> = fv
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        assert_close(&r.partial_sums_lhs, &sums, 1e-10);
    }
}

#[test]
fn thm1_rejects_superunital_family() {
    let a = diag(&[1.0, -1.0]);
    let maps = vec![WeightedTerm {
        alpha: 2.0,
        map: PositiveMap::identity(2),
    }];
    let r = check_thm_weak_major(&unit_f("square", None), &a, &maps, &opts()).unwrap();
    assert!(r.is_not_applicable());
    assert!(r.failed_hypotheses().any(|h| h.name.contains("≤ I")));
}

#[test]
fn cornew_examples() {
    let f = ConvexFunctionSpec::abs_pow(2.3, Interval::real_line()).unwrap();
    let a = diag(&[1.0, -2.0, 0.5]);
    let r = check_cor_congruence(&f, std::slice::from_ref(&a), &[CMatrix::identity(3)], &[1.0], &opts()).unwrap();
    assert!(r.holds && r.equality, "{r:?}");

    // ℓ = 2, X_i = I/√2, α = (1, 1), f = t², commuting diagonals.
    let sq = ConvexFunctionSpec::from_id("square", None, None).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let x = CMatrix::identity(2).scale(h);
    let a1 = diag(&[2.0, 0.0]);
    let a2 = diag(&[0.0, 4.0]);
    let r = check_cor_congruence(&sq, &[a1, a2], &[x.clone(), x], &[1.0, 1.0], &opts()).unwrap();
    // S = ½(A₁ + A₂) = diag(1, 2), f(S) = diag(1, 4).
    // RHS = ½ diag(4, 0) + ½ diag(0, 16) = diag(2, 8).
    assert_close(&r.partial_sums_lhs, &[4.0, 5.0], 1e-12);
    assert_close(&r.partial_sums_rhs, &[8.0, 10.0], 1e-12);
    assert!(r.holds);

    let mut rng = Rng::new(77, 0);
    for _ in 0..30 {
        let alpha = [rng.uniform_in(0.2, 1.0), rng.uniform_in(0.2, 1.0)];
        let xs = random_map_family(2, 3, 3, &alpha, &mut rng).unwrap();
        let a: Vec<HermitianMatrix> = (0..2)
            .map(|_| random_hermitian(3, Interval::new(-3.0, 3.0), &mut rng).unwrap())
            .collect();
        let r = check_cor_congruence(&f, &a, &xs, &alpha, &opts()).unwrap();
        assert!(r.holds, "{r:?}");
    }
}

#[test]
fn cornew_needs_submultiplicative() {
    let f = ConvexFunctionSpec::from_id("exp_m1", None, None).unwrap();
    let a = diag(&[1.0, -1.0]);
    let r = check_cor_congruence(&f, &[a], &[CMatrix::identity(2)], &[1.0], &opts()).unwrap();
    assert!(r.is_not_applicable());
}

#[test]
fn cor45_examples() {
    let a = diag(&[1.5, -0.7]);
    let r = check_eigen_bohr(&[a], &[CMatrix::identity(2)], &[1.0], 2.7, &opts()).unwrap();
    assert!(r.holds && r.min_slack.abs() <= 1e-10, "{r:?}");

    let i2 = CMatrix::identity(2);
    let r = check_eigen_bohr(
        &[diag(&[1.0, 0.0]), diag(&[0.0, 1.0])],
        &[i2.clone(), i2],
        &[0.5, 0.5],
        2.0,
        &opts(),
    )
    .unwrap();
    assert_close(&r.partial_sums_lhs, &[1.0, 2.0], 1e-12);
    assert_close(&r.partial_sums_rhs, &[2.0, 4.0], 1e-12);
    assert!(r.holds);
    assert_eq!(r.first_violation, None);
    assert!((r.min_slack - 1.0).abs() < 1e-12);
}

#[test]
fn cor45_gates_bad_exponent_and_constraint() {
    let a = diag(&[1.0, 2.0]);
    let i2 = CMatrix::identity(2);
    let r = check_eigen_bohr(
        std::slice::from_ref(&a),
        std::slice::from_ref(&i2),
        &[1.0],
        0.5,
        &opts(),
    )
    .unwrap();
    assert!(r.is_not_applicable() && !r.is_violation());
    let r = check_eigen_bohr(&[a], &[i2.scale(2.0)], &[1.0], 2.0, &opts()).unwrap();
    assert!(r.is_not_applicable());
}

#[test]
fn cor45_random_and_mutated() {
    let mut rng = Rng::new(45, 0);
    for _ in 0..30 {
        let ell = 3;
        let r = rng.uniform_in(1.1, 4.0);
        let p: Vec<f64> = (0..ell).map(|_| rng.uniform_in(0.1, 1.0)).collect();
        let w: Vec<f64> = p.iter().map(|x| x.powf(1.0 / (1.0 - r))).collect();
        let total: f64 = w.iter().sum();
        let wn: Vec<f64> = w.iter().map(|x| x / total).collect();
        let xs = random_map_family(ell, 4, 4, &wn, &mut rng).unwrap();
        let a: Vec<HermitianMatrix> = (0..ell)
            .map(|_| random_hermitian(4, Interval::new(-3.0, 3.0), &mut rng).unwrap())
            .collect();
        let rep = check_eigen_bohr(&a, &xs, &p, r, &opts()).unwrap();
        assert!(rep.holds, "{rep:?}");
    }
    let i2 = CMatrix::identity(2);
    let half = CheckOptions {
        rhs_factor: 0.5,
        ..opts()
    };
    let a = diag(&[1.5, -0.7]);
    let r = check_eigen_bohr(&[a], &[i2], &[1.0], 2.7, &half).unwrap();
    assert!(r.is_violation());
}

#[test]
fn zh_examples() {
    let r = check_norm_bohr(&[diag(&[0.4, -1.0])], &[1.0], 1.5, &opts()).unwrap();
    assert!(r.holds && r.min_slack.abs() < 1e-10);

    let r = check_norm_bohr(&[diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], &[0.5, 0.5], 2.0, &opts()).unwrap();
    assert_close(&r.partial_sums_lhs, &[1.0, 2.0], 1e-12);
    assert_close(&r.partial_sums_rhs, &[2.0, 4.0], 1e-12);
    assert!(r.holds);
    assert_eq!(r.cross_checks.len(), 1 + SCHATTEN_CROSS_CHECK.len());
    assert!(r.cross_checks.iter().all(|c| c.passed));

    // All A_i equal to A with p_i = 1/ℓ: ℓ^r vs ℓ² times the sums for |A|^r.
    let a = diag(&[2.0, -1.0, 0.5]);
    let (ell, r) = (3usize, 1.6);
    let reps = vec![a.clone(); ell];
    let p = vec![1.0 / ell as f64; ell];
    let rep = check_norm_bohr(&reps, &p, r, &opts()).unwrap();
    let mut base: Vec<f64> = [2.0f64, 1.0, 0.5].iter().map(|v| v.powf(r)).collect();
    base.sort_by(|a, b| b.total_cmp(a));
    let sums: Vec<f64> = base
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let lhs: Vec<f64> = sums.iter().map(|s| s * (ell as f64).powf(r)).collect();
    let rhs: Vec<f64> = sums.iter().map(|s| s * (ell * ell) as f64).collect();
    assert_close(&rep.partial_sums_lhs, &lhs, 1e-10);
    assert_close(&rep.partial_sums_rhs, &rhs, 1e-10);
    assert!(rep.holds);

    let bad = check_norm_bohr(std::slice::from_ref(&a), &[1.0], 2.5, &opts()).unwrap();
    assert!(bad.is_not_applicable());
    let bad = check_norm_bohr(&[a.clone(), a], &[0.6, 0.6], 1.5, &opts()).unwrap();
    assert!(bad.is_not_applicable());
}

#[test]
fn prop_r2_examples() {
    let a = CMatrix::from_rows(&[&[C64::new(0.0, 1.0), c(2.0)], &[c(0.5), c(-1.0)]]).unwrap();
    let r = check_pointwise_bohr_r2(std::slice::from_ref(&a), &[1.0], 2.5, &opts()).unwrap();
    assert!(r.holds && r.min_slack.abs() <= 1e-10);

    let a1 = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let a2 = CMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
    let r = check_pointwise_bohr_r2(&[a1, a2], &[0.5, 0.5], 2.0, &opts()).unwrap();
    assert_close(&r.partial_sums_lhs, &[1.0, 1.0], 1e-12);
    assert_close(&r.partial_sums_rhs, &[2.0, 2.0], 1e-12);
    assert!(r.holds);

    let p = [0.2, 0.5, 0.3];
    let parts: Vec<CMatrix> = p.iter().map(|&w| a.scale(w)).collect();
    let r = check_pointwise_bohr_r2(&parts, &p, 3.0, &opts()).unwrap();
    assert!(r.holds);
    for s in r.slacks() {
        assert!(s.abs() <= 1e-10, "{s}");
    }
    let bad = check_pointwise_bohr_r2(&parts, &p, 1.5, &opts()).unwrap();
    assert!(bad.is_not_applicable());
}

#[test]
fn sumsq_examples() {
    let a = CMatrix::from_rows(&[&[C64::new(0.0, 1.0), c(2.0)], &[c(0.5), c(-1.0)]]).unwrap();
    let r = check_sum_square(&[a.clone(), a.clone(), a], &[0.2, 0.3, 0.5], &opts()).unwrap();
    assert!(r.holds && r.min_slack.abs() < 1e-12);

    // Difference = ¼ (A₁ − A₂)² = ¼ I; pairwise sum = 2·¼·I = ½ I.
    let a1 = CMatrix::from_real_diag(&[1.0, 0.0]);
    let a2 = CMatrix::from_real_diag(&[0.0, 1.0]);
    let parts = SumSquareParts::new(&[a1.clone(), a2.clone()], &[0.5, 0.5]).unwrap();
    let quarter = CMatrix::identity(2).scale(0.25);
    assert!((&parts.difference() - &quarter).frobenius_norm() < 1e-15);
    assert!((&parts.pairwise - &quarter.scale(2.0)).frobenius_norm() < 1e-15);
    let r = check_sum_square(&[a1, a2], &[0.5, 0.5], &opts()).unwrap();
    assert!(r.holds && (r.min_slack - 0.25).abs() < 1e-15);

    let mut rng = Rng::new(8, 8);
    for _ in 0..50 {
        let a: Vec<CMatrix> = (0..3).map(|_| rng.gaussian_matrix(4, 4)).collect();
        let w: Vec<f64> = (0..3).map(|_| rng.uniform_in(0.1, 1.0)).collect();
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let r = check_sum_square(&a, &p, &opts()).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.cross_checks.iter().all(|c| c.passed));
    }
}

#[test]
fn inc_convex_examples() {
    let mut rng = Rng::new(1, 1);
    let j = Interval::new(-3.0, 3.0);
    let a: Vec<HermitianMatrix> = (0..3).map(|_| random_hermitian(4, j, &mut rng).unwrap()).collect();
    let p = [0.25, 0.25, 0.5];
    let lin = ConvexFunctionSpec::new(FunctionKind::Linear, j).unwrap();
    let r = check_increasing_convex_eigen(&lin, &a, &p, &opts()).unwrap();
    assert!(r.holds && r.min_slack.abs() < 1e-10);

    // Commuting diagonals reduce to scalar Jensen on each entry.
    let e = ConvexFunctionSpec::from_id("exp_m1", None, Some(j)).unwrap();
    let d1 = [1.0, -2.0];
    let d2 = [-1.0, 2.5];
    let r = check_increasing_convex_eigen(&e, &[diag(&d1), diag(&d2)], &[0.5, 0.5], &opts()).unwrap();
    let mut lhs: Vec<f64> = (0..2).map(|i| (0.5 * d1[i] + 0.5 * d2[i]).exp_m1()).collect();
    let mut rhs: Vec<f64> = (0..2).map(|i| 0.5 * d1[i].exp_m1() + 0.5 * d2[i].exp_m1()).collect();
    lhs.sort_by(|a, b| b.total_cmp(a));
    rhs.sort_by(|a, b| b.total_cmp(a));
    assert_close(&r.partial_sums_lhs, &lhs, 1e-12);
    assert_close(&r.partial_sums_rhs, &rhs, 1e-12);
    assert!(r.holds);

    let pp = ConvexFunctionSpec::from_id("pos_part", None, Some(j)).unwrap();
    for _ in 0..50 {
        let a: Vec<HermitianMatrix> = (0..3).map(|_| random_hermitian(4, j, &mut rng).unwrap()).collect();
        let r = check_increasing_convex_eigen(&pp, &a, &p, &opts()).unwrap();
        assert!(r.holds, "{r:?}");
    }

    let sq = ConvexFunctionSpec::from_id("square", None, Some(j)).unwrap();
    assert!(check_increasing_convex_eigen(&sq, &a, &p, &opts())
        .unwrap()
        .is_not_applicable());
}

#[test]
fn dimension_mismatch_is_an_error() {
    let r = check_sum_square(&[CMatrix::identity(2), CMatrix::identity(3)], &[0.5, 0.5], &opts());
    assert!(r.is_err());
    let r = check_norm_bohr(&[diag(&[1.0])], &[0.5, 0.5], 1.5, &opts());
    assert!(r.is_err());
}

#[test]
fn instance_json_round_trip_and_alias() {
    let json = r#"{
        "theorem": "cor4.5",
        "r": 2.0,
        "p": [0.5, 0.5],
        "A": [{"n": 2, "re": [[1, 0], [0, 0]]}, {"n": 2, "re": [[0, 0], [0, 1]]}],
        "X": [{"n": 2, "re": [[1, 0], [0, 1]]}, {"n": 2, "re": [[1, 0], [0, 1]]}]
    }"#;
    let inst: Instance = serde_json::from_str(json).unwrap();
    assert_eq!(inst.theorem_id(), "cor45");
    let rep = inst.check(&opts()).unwrap();
    assert_close(&rep.partial_sums_rhs, &[2.0, 4.0], 1e-12);
    assert_eq!(rep.input_digest, inst.digest());

    let text = serde_json::to_string(&InstanceFile {
        instance: inst.clone(),
        report: Some(rep.clone()),
        rhs_factor: None,
    })
    .unwrap();
    let back: InstanceFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back.instance, inst);
    let again = back.instance.check(&opts()).unwrap();
    assert_eq!(again.partial_sums_lhs, rep.partial_sums_lhs);
    assert_eq!(again.min_slack.to_bits(), rep.min_slack.to_bits());
}

#[test]
fn every_theorem_id_parses() {
    for id in THEOREM_IDS {
        let json = format!(r#"{{"theorem": "{id}"}}"#);
        let err = serde_json::from_str::<Instance>(&json).unwrap_err().to_string();
        assert!(err.contains("missing field"), "{id}: {err}");
    }
}
