mod common;

use cubic_image::classify::{case_analysis, classify, regime_for, verify_traceless_claim, Regime, Rotation, Verdict};
use cubic_image::cubic::{MultilinearCubic, Permutation};
use cubic_image::field::FieldDescriptor;
use cubic_image::matrix::Matrix;
use cubic_image::solver::{solve_general, SolverConfig};
use cubic_image::structured::check_condition_31;
use proptest::prelude::*;

fn field_for(which: usize) -> FieldDescriptor {
    match which {
        0 => FieldDescriptor::rationals(),
        1 => FieldDescriptor::cyclotomic(4).unwrap(),
        2 => FieldDescriptor::prime_field(5).unwrap(),
        3 => FieldDescriptor::prime_field(13).unwrap(),
        _ => FieldDescriptor::finite_field(5, 2, None).unwrap(),
    }
}

fn sparse_cubic(field: &FieldDescriptor, c: [i64; 6]) -> MultilinearCubic {
    MultilinearCubic::from_i64(field, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn verdict_is_invariant(which in 0usize..5, n in 1usize..9, c in prop::array::uniform6(-2i64..3), s in 0usize..6, k in 1i64..4) {
        let field = field_for(which);
        let f = sparse_cubic(&field, c);
        let base = classify(&f, n, &field, None);
        let g = f.permute_variables(&Permutation::all()[s]).scale(&field.from_i64(k));
        prop_assert_eq!(classify(&g, n, &field, None).verdict, base.verdict);
    }

    #[test]
    fn verdict_follows_coefficient_sums(which in 0usize..5, n in 2usize..9, c in prop::array::uniform6(-2i64..3)) {
        let field = field_for(which);
        let f = sparse_cubic(&field, c);
        let out = classify(&f, n, &field, None);
        let (ls, ms) = f.coefficient_sums();
        let expected = if out.regime == Regime::OutOfHypotheses {
            Verdict::Undetermined
        } else if f.is_zero() {
            Verdict::Zero
        } else if ls.is_zero() && ms.is_zero() {
            Verdict::Traceless
        } else {
            Verdict::Full
        };
        prop_assert_eq!(out.verdict, expected);
        prop_assert_eq!(out.regime, regime_for(&field, n).0);
    }

    #[test]
    fn rotations_match_relabelled_cubics(n in 2usize..9, c in prop::array::uniform6(-2i64..3)) {
        let field = FieldDescriptor::cyclotomic(12).unwrap();
        let f = sparse_cubic(&field, c);
        let report = case_analysis(&f, n);
        for (idx, rho) in Rotation::ALL.into_iter().enumerate() {
            let g = f.permute_variables(&rho.variable_permutation());
            let mine = &report.rotations[idx];
            let theirs = &case_analysis(&g, n).rotations[0];
            prop_assert_eq!(mine.rotation, rho);
            prop_assert_eq!(&mine.case_i, &theirs.case_i);
            prop_assert_eq!(mine.case_ii, theirs.case_ii);
            prop_assert_eq!(mine.case_iii, theirs.case_iii);
            prop_assert_eq!(mine.case_iv, theirs.case_iv);
        }
    }
}

#[test]
fn regimes() {
    let q = FieldDescriptor::rationals();
    for n in 1..=12 {
        assert_eq!(regime_for(&q, n).0, Regime::Char0AlgClosed);
    }
    for p in [2u64, 3] {
        assert_eq!(regime_for(&FieldDescriptor::prime_field(p).unwrap(), 6).0, Regime::OutOfHypotheses);
    }
    for p in [5u64, 7, 11, 13] {
        let field = FieldDescriptor::prime_field(p).unwrap();
        for n in 1..=3 {
            assert_eq!(regime_for(&field, n).0, Regime::OutOfHypotheses);
        }
        for n in 4..=16 {
            let holds = check_condition_31(&field, n).holds;
            let expected = if holds { Regime::Condition31Field } else { Regime::OutOfHypotheses };
            assert_eq!(regime_for(&field, n).0, expected, "p={p} n={n}");
        }
    }
    let gf5 = FieldDescriptor::prime_field(5).unwrap();
    assert_eq!(regime_for(&gf5, 4).0, Regime::OutOfHypotheses);
    let gf7 = FieldDescriptor::prime_field(7).unwrap();
    assert_eq!(regime_for(&gf7, 6).0, Regime::OutOfHypotheses);
    assert_eq!(regime_for(&gf7, 5).0, Regime::Condition31Field);
}

#[test]
fn requested_regime_must_match() {
    let q = FieldDescriptor::rationals();
    let f = sparse_cubic(&q, [1, 0, 0, 0, 0, 0]);
    assert_eq!(classify(&f, 4, &q, Some(Regime::Char0AlgClosed)).verdict, Verdict::Full);
    let out = classify(&f, 4, &q, Some(Regime::Condition31Field));
    assert_eq!(out.verdict, Verdict::Undetermined);
    assert!(!out.notes.is_empty());
}

#[test]
fn one_by_one() {
    let q = FieldDescriptor::rationals();
    assert_eq!(classify(&sparse_cubic(&q, [1, 0, 0, -1, 0, 0]), 1, &q, None).verdict, Verdict::Traceless);
    assert_eq!(classify(&sparse_cubic(&q, [1, 0, 0, 1, 0, 0]), 1, &q, None).verdict, Verdict::Full);
    assert_eq!(classify(&MultilinearCubic::zero(&q), 1, &q, None).verdict, Verdict::Zero);
}

#[test]
fn traceless_claims_hold() {
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(31);
    let f = sparse_cubic(&q, [1, -1, 0, 2, 0, -2]);
    assert!(verify_traceless_claim(&f, 4, &q, 50, &mut rng).unwrap());
    let g = sparse_cubic(&q, [1, 0, 0, 0, 0, 0]);
    assert!(verify_traceless_claim(&g, 4, &q, 1, &mut rng).is_err());
}

#[test]
fn full_verdicts_are_solvable() {
    // Every Full verdict over ℚ is backed by witnesses on random split targets.
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(32);
    let mut solved = 0;
    while solved < 30 {
        let f = common::random_cubic(&q, &mut rng, 3);
        let n = 3 + solved % 3;
        if classify(&f, n, &q, None).verdict != Verdict::Full {
            continue;
        }
        let d = common::int_vector(&q, n, &mut rng, 6);
        let p = Matrix::random_invertible(&q, n, &mut rng, 2);
        let t = &(&p * &Matrix::diagonal(&q, &d)) * &p.inverse().unwrap();
        let w = solve_general(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
        assert_eq!(common::naive_eval(&f, &w.x, &w.y, &w.z), t);
        solved += 1;
    }
}
