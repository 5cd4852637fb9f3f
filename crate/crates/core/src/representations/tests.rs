use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::*;
use crate::algebra::SemicrossedPoly;
use crate::dynamics::{
    enumerate_cycles, parse_word, Coordinates, Cycle, CylinderFunction, ItineraryStream,
    LassoPoint, SftGraph, StreamKind, Word,
};
use crate::extension::{embed_function, lift_point, project_p, BiLassoPoint};
use crate::linalg::dense_operator_norm;
use crate::{Error, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

fn full2() -> Arc<SftGraph> {
    Arc::new(SftGraph::full_shift(2).unwrap())
}

fn golden() -> Arc<SftGraph> {
    Arc::new(SftGraph::from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap())
}

fn two_five(g: &Arc<SftGraph>) -> CylinderFunction {
    CylinderFunction::from_fn(g.clone(), 1, |s| c(if s[0] == 0 { 2.0 } else { 5.0 }))
}

fn one_plus_u(g: &Arc<SftGraph>) -> SemicrossedPoly {
    SemicrossedPoly::one(g.clone()).add(&SemicrossedPoly::u(g.clone()))
}

fn quick_policy() -> TruncationPolicy {
    TruncationPolicy {
        k_max: 128,
        ..TruncationPolicy::default()
    }
}

fn dense(rows: usize, cols: usize, entries: &[(usize, usize, f64)]) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(rows, cols);
    for &(r, col, v) in entries {
        m[(r, col)] = c(v);
    }
    m
}

#[test]
fn pi_x_examples() {
    let g = full2();
    let x = LassoPoint::new(&g, &w("1"), &w("0")).unwrap();
    let u = SemicrossedPoly::u(g.clone());
    assert_eq!(
        build_pi_x(&u, &x, 3).unwrap(),
        dense(3, 3, &[(1, 0, 1.0), (2, 1, 1.0)])
    );
    let f = SemicrossedPoly::monomial(0, two_five(&g));
    assert_eq!(
        build_pi_x(&f, &x, 3).unwrap(),
        dense(3, 3, &[(0, 0, 5.0), (1, 1, 2.0), (2, 2, 2.0)])
    );
    assert_eq!(
        build_pi_x(&one_plus_u(&g), &x, 2).unwrap(),
        dense(2, 2, &[(0, 0, 1.0), (1, 0, 1.0), (1, 1, 1.0)])
    );
}

#[test]
fn pi_x_reads_shifted_itineraries() {
    // entry (j, i) = f_{j-i}(sigma^i x) with a window-2 coefficient
    let g = full2();
    let f = CylinderFunction::from_fn(g.clone(), 2, |s| c((1 + s[0] + 2 * s[1]) as f64));
    let poly = SemicrossedPoly::monomial(1, f.clone());
    let x = LassoPoint::new(&g, &w("0110"), &w("1")).unwrap();
    let m = build_pi_x(&poly, &x, 6).unwrap();
    for j in 0..6 {
        for i in 0..6 {
            let expected = if j == i + 1 {
                f.eval_word(&x.prefix(i + 2)[i..]).unwrap()
            } else {
                c(0.0)
            };
            assert_eq!(m[(j, i)], expected, "entry ({j}, {i})");
        }
    }
}

#[test]
fn stream_points_run_out() {
    let g = full2();
    let tm = ItineraryStream::new(StreamKind::ThueMorse, &g, 10).unwrap();
    let u = SemicrossedPoly::u(g);
    assert!(build_pi_x(&u, &tm, 10).is_ok());
    assert!(matches!(
        build_pi_x(&u, &tm, 11),
        Err(Error::GeneratorExhausted { .. })
    ));
}

#[test]
fn big_pi_x_examples() {
    let g = full2();
    let spike = BiLassoPoint::new(&g, &w("0"), &w("1"), 0, &w("0")).unwrap();
    let u = SemicrossedPoly::u(g.clone()).embed();
    assert_eq!(
        build_big_pi_x(&u, &spike, 2).unwrap(),
        dense(5, 5, &[(1, 0, 1.0), (2, 1, 1.0), (3, 2, 1.0), (4, 3, 1.0)])
    );
    let f = SemicrossedPoly::monomial(0, two_five(&g)).embed();
    assert_eq!(
        build_big_pi_x(&f, &spike, 1).unwrap(),
        dense(3, 3, &[(0, 0, 5.0), (1, 1, 2.0), (2, 2, 2.0)])
    );
    // the same diagonal read off the embedded function directly
    let ef = embed_function(&two_five(&g));
    for n in -1..=1i64 {
        let moved = spike.shift(n);
        assert_eq!(
            ef.eval(&moved).unwrap(),
            two_five(&g).eval(&spike.ray(n + 1)).unwrap()
        );
    }
}

#[test]
fn big_pi_x_quadrant_is_pi_of_projection() {
    let g = golden();
    let f = CylinderFunction::from_fn(g.clone(), 2, |s| C64::new(s[0] as f64, 1.0 + s[1] as f64));
    let poly = SemicrossedPoly::one(g.clone())
        .add(&SemicrossedPoly::monomial(1, f))
        .add(&SemicrossedPoly::monomial(3, two_five(&g)));
    let x = BiLassoPoint::new(&g, &w("0"), &w("1001"), -2, &w("01")).unwrap();
    let k = 8;
    let big = build_big_pi_x(&poly.embed(), &x, k).unwrap();
    let small = build_pi_x(&poly, &project_p(&x), k).unwrap();
    // index 0 sits at row/column k
    assert_eq!(
        big.view((k, k), (k, k)).into_owned(),
        small.view((0, 0), (k, k)).into_owned()
    );
}

#[test]
fn pi_y_lambda_examples() {
    let g = full2();
    let u = SemicrossedPoly::u(g.clone());
    let y = Cycle::new(&g, &w("011")).unwrap();
    let lambda = C64::from_polar(1.0, 0.7);
    let m = build_pi_y_lambda(&u, &y, lambda).unwrap();
    let expected = DMatrix::from_fn(
        3,
        3,
        |r, col| if r == (col + 1) % 3 { lambda } else { c(0.0) },
    );
    assert_eq!(m, expected);
    assert!((crate::linalg::operator_norm(&m).unwrap() - 1.0).abs() < 1e-12);

    let fixed = Cycle::new(&g, &w("0")).unwrap();
    let p = one_plus_u(&g);
    assert_eq!(
        build_pi_y_lambda(&p, &fixed, c(1.0)).unwrap(),
        dense(1, 1, &[(0, 0, 2.0)])
    );
    let m = build_pi_y_lambda(&p, &fixed, c(-1.0)).unwrap();
    assert_eq!(m, dense(1, 1, &[(0, 0, 0.0)]));
    assert_eq!(crate::linalg::operator_norm(&m).unwrap(), 0.0);

    assert!(matches!(
        build_pi_y_lambda(&p, &fixed, c(1.1)),
        Err(Error::NotUnitModulus(_))
    ));
}

#[test]
fn gauge_period() {
    let g = golden();
    let f = CylinderFunction::from_fn(g.clone(), 2, |s| {
        C64::new(1.0 + s[0] as f64, -(s[1] as f64))
    });
    let poly = SemicrossedPoly::one(g.clone())
        .add(&SemicrossedPoly::monomial(1, f))
        .add(&SemicrossedPoly::monomial(2, two_five(&g)));
    for y in enumerate_cycles(&g, 5, 1000).unwrap() {
        let p = y.period() as f64;
        for theta in [0.0, 0.3, 1.9] {
            let l = C64::from_polar(1.0, theta);
            let a =
                crate::linalg::operator_norm(&build_pi_y_lambda(&poly, &y, l).unwrap()).unwrap();
            let rotated = l * C64::from_polar(1.0, 2.0 * PI / p);
            let b = crate::linalg::operator_norm(&build_pi_y_lambda(&poly, &y, rotated).unwrap())
                .unwrap();
            assert!((a - b).abs() < 1e-9, "cycle {y}: {a} vs {b}");
        }
    }
}

#[test]
fn covariance_at_matrix_level() {
    let g = golden();
    let f = CylinderFunction::from_fn(g.clone(), 2, |s| {
        C64::new(s[0] as f64 - 0.5, 2.0 * s[1] as f64)
    });
    let x = LassoPoint::new(&g, &w("00101"), &w("001")).unwrap();
    let u = SemicrossedPoly::u(g.clone());
    let fu = SemicrossedPoly::monomial(0, f.clone()).multiply(&u);
    let shifted = SemicrossedPoly::monomial(1, f.compose_shift(1));
    for k in [2, 7, 33] {
        let lhs = build_pi_x(&SemicrossedPoly::monomial(0, f.clone()), &x, k).unwrap()
            * build_pi_x(&u, &x, k).unwrap();
        assert_eq!(lhs, build_pi_x(&shifted, &x, k).unwrap());
        assert_eq!(build_pi_x(&fu, &x, k).unwrap(), lhs);
    }
}

#[test]
fn norm_pi_x_examples() {
    let g = full2();
    let x = LassoPoint::new(&g, &w("10"), &w("011")).unwrap();
    let policy = quick_policy();

    let u = norm_pi_x(&SemicrossedPoly::u(g.clone()), &x, &policy).unwrap();
    assert_eq!(u.value, 1.0);
    assert_eq!(u.history[0], (16, 1.0));
    assert!(u.converged);

    let p = norm_pi_x(
        &one_plus_u(&g),
        &x,
        &TruncationPolicy {
            k_initial: 512,
            k_max: 512,
            ..policy.clone()
        },
    )
    .unwrap();
    assert!((p.value - 2.0).abs() < 1e-2 && p.value <= 2.0, "{p:?}");

    let f = norm_pi_x(&SemicrossedPoly::monomial(0, two_five(&g)), &x, &policy).unwrap();
    assert_eq!(f.value, 5.0);
    let zeros = LassoPoint::periodic(&g, &w("0")).unwrap();
    let f = norm_pi_x(&SemicrossedPoly::monomial(0, two_five(&g)), &zeros, &policy).unwrap();
    assert_eq!(f.value, 2.0);
}

#[test]
fn truncations_are_monotone_and_below_l1() {
    let g = golden();
    let f = CylinderFunction::from_fn(g.clone(), 2, |s| C64::new(1.0 - s[0] as f64, s[1] as f64));
    let poly = one_plus_u(&g).add(&SemicrossedPoly::monomial(2, f));
    let x = lift_point(&g, &LassoPoint::new(&g, &w("0010"), &w("01")).unwrap()).ray(-3);
    let mut prev = 0.0;
    for k in 3..40 {
        let v = pi_x_truncation_norm(&poly, &x, k).unwrap();
        assert!(v >= prev - 1e-12, "K = {k}");
        assert!(v <= poly.l1_norm() + 1e-12);
        prev = v;
    }
}

#[test]
fn sup_lambda_examples() {
    let g = full2();
    let policy = TruncationPolicy::default();
    let fixed = Cycle::new(&g, &w("0")).unwrap();
    let s = sup_lambda_norm(&one_plus_u(&g), &fixed, &policy).unwrap();
    assert!((s.value - 2.0).abs() < 1e-12);
    assert!(s.theta.abs() < 1e-9 || (s.theta - 2.0 * PI).abs() < 1e-9);

    let y = Cycle::new(&g, &w("01")).unwrap();
    let s = sup_lambda_norm(&SemicrossedPoly::u(g.clone()), &y, &policy).unwrap();
    assert!((s.value - 1.0).abs() < 1e-12);

    let y = Cycle::new(&g, &w("001")).unwrap();
    let s = sup_lambda_norm(&SemicrossedPoly::monomial(0, two_five(&g)), &y, &policy).unwrap();
    assert!((s.value - 5.0).abs() < 1e-12);
}

#[test]
fn constant_a_examples() {
    let g = full2();
    let a = constant_a(&one_plus_u(&g), 8, SearchMode::Exhaustive, 1 << 16)
        .unwrap()
        .unwrap();
    // I + N_8 restricted to its first 7 columns, by dense SVD
    let m = DMatrix::from_fn(8, 7, |r, col| {
        c(if r == col || r == col + 1 { 1.0 } else { 0.0 })
    });
    let oracle = dense_operator_norm(&m).unwrap();
    assert!((a.value - oracle).abs() < 1e-12);
    assert!((oracle - 2.0 * (PI / 16.0).cos()).abs() < 1e-12);
    let a16 = constant_a(&one_plus_u(&g), 16, SearchMode::Exhaustive, 1 << 16)
        .unwrap()
        .unwrap();
    assert!(a16.value > a.value && a16.value < 2.0);

    let f = SemicrossedPoly::monomial(0, two_five(&g));
    let a = constant_a(&f, 1, SearchMode::Exhaustive, 16)
        .unwrap()
        .unwrap();
    assert_eq!(a.value, 5.0);

    let cyc = Arc::new(SftGraph::cycle(2).unwrap());
    assert!(constant_a(&one_plus_u(&cyc), 8, SearchMode::Auto, 16)
        .unwrap()
        .is_none());
}

#[test]
fn exhaustive_overflow_suggests_beam() {
    let g = full2();
    let err = constant_a(&one_plus_u(&g), 40, SearchMode::Exhaustive, 1 << 16).unwrap_err();
    assert!(matches!(err, Error::Overflow { .. }));
    assert!(err.to_string().contains("beam"));
}

#[test]
fn beam_agrees_with_exhaustive_on_small_problems() {
    let g = golden();
    let f = CylinderFunction::from_fn(g.clone(), 2, |s| {
        C64::new(2.0 * s[0] as f64 - 1.0, s[1] as f64)
    });
    let poly = SemicrossedPoly::one(g.clone()).add(&SemicrossedPoly::monomial(1, f));
    let ex = constant_a(&poly, 12, SearchMode::Exhaustive, 1 << 16)
        .unwrap()
        .unwrap();
    let bm = constant_a(&poly, 12, SearchMode::Beam { width: 64 }, 0)
        .unwrap()
        .unwrap();
    assert!(bm.value <= ex.value + 1e-12);
    assert!(bm.value >= ex.value - 1e-9);
}

#[test]
fn constant_b_examples() {
    let g = full2();
    let b = constant_b(&one_plus_u(&g), 1, &TruncationPolicy::default())
        .unwrap()
        .unwrap();
    assert!((b.value - 2.0).abs() < 1e-6);
    let cyc = Arc::new(SftGraph::cycle(3).unwrap());
    assert!(
        constant_b(&one_plus_u(&cyc), 2, &TruncationPolicy::default())
            .unwrap()
            .is_none()
    );
}

#[test]
fn semicrossed_norm_examples() {
    let g = full2();
    let policy = quick_policy();
    let u = semicrossed_norm(&SemicrossedPoly::u(g.clone()), &policy).unwrap();
    assert_eq!(u.estimate.value, 1.0);
    let p = semicrossed_norm(&one_plus_u(&g), &policy).unwrap();
    assert!((p.estimate.value - 2.0).abs() < 1e-2 && p.estimate.value <= 2.0 + 1e-9);
    let h = &p.estimate.history;
    assert!(h.windows(2).all(|w| w[0].1 <= w[1].1));
    let q = crossed_norm(&one_plus_u(&g).embed(), &policy).unwrap();
    assert!((q.estimate.value - p.estimate.value).abs() < 2e-2);
}

#[test]
fn single_cycle_norm_uses_b_only() {
    let g = Arc::new(SftGraph::cycle(3).unwrap());
    let policy = quick_policy();
    let p = semicrossed_norm(&one_plus_u(&g), &policy).unwrap();
    assert!(p.a_history.iter().all(|a| a.value.is_none()));
    assert!((p.estimate.value - 2.0).abs() < 1e-9);
}

#[test]
fn norm_lemma_examples() {
    let g = full2();
    let suite = LemmaSuite {
        cycles: vec![Cycle::new(&g, &w("0")).unwrap()],
        points: vec![BiLassoPoint::new(&g, &w("0"), &w("1"), 0, &w("0")).unwrap()],
        k: 64,
        tolerance: 5e-2,
        policy: TruncationPolicy::default(),
    };
    for poly in [one_plus_u(&g), SemicrossedPoly::u(g.clone())] {
        let r = verify_norm_lemmas(&poly, &suite).unwrap();
        assert_eq!(r.violations, 0, "{r:?}");
    }
    let r = verify_norm_lemmas(&one_plus_u(&g), &suite).unwrap();
    assert!((r.checks[0].lhs - 2.0).abs() < 1e-12);
}

#[test]
fn nest_examples() {
    let g = full2();
    let tm = ItineraryStream::new(StreamKind::ThueMorse, &g, 4096).unwrap();
    let r = verify_nest_truncation(&g, &tm, 16, DEFAULT_SEPARATION_CAP).unwrap();
    assert!(r.chain_verified, "{r:?}");
    // Thue-Morse has only 12 factors of length 5, so w = 5 cannot separate 16 positions
    assert!(r.window > 5);

    let per = LassoPoint::periodic(&g, &w("01")).unwrap();
    assert!(matches!(
        verify_nest_truncation(&g, &per, 16, DEFAULT_SEPARATION_CAP),
        Err(Error::SeparationFailure { .. })
    ));

    let spike = BiLassoPoint::new(&g, &w("0"), &w("1"), 0, &w("0")).unwrap();
    let r = verify_nest_truncation_two_sided(&g, &spike, 8, DEFAULT_SEPARATION_CAP).unwrap();
    assert!(r.chain_verified);
    assert_eq!(r.positions, 17);
    let per = BiLassoPoint::periodic(&g, &w("01")).unwrap();
    assert!(verify_nest_truncation_two_sided(&g, &per, 8, DEFAULT_SEPARATION_CAP).is_err());
}

#[test]
fn thue_morse_factor_count() {
    let g = full2();
    let tm = ItineraryStream::new(StreamKind::ThueMorse, &g, 4096).unwrap();
    let word = tm.symbols(1, 4096).unwrap();
    let factors: std::collections::HashSet<&[u8]> = word.windows(5).collect();
    assert_eq!(factors.len(), 12);
}

#[test]
fn policy_validation_and_modes() {
    let p = TruncationPolicy::default();
    assert!(p.validate(3).is_ok());
    assert!(p.validate(16).is_err());
    assert!(TruncationPolicy {
        lambda_grid: 4,
        ..p.clone()
    }
    .validate(1)
    .is_err());
    assert_eq!(p.stages(), vec![16, 32, 64, 128, 256, 512]);
    assert_eq!(
        TruncationPolicy { k_max: 100, ..p }.stages(),
        vec![16, 32, 64, 100]
    );
    assert_eq!(
        "beam:8".parse::<SearchMode>().unwrap(),
        SearchMode::Beam { width: 8 }
    );
    assert_eq!(
        "exhaustive".parse::<SearchMode>().unwrap().to_string(),
        "exhaustive"
    );
    assert!("beam:0".parse::<SearchMode>().is_err());
}
