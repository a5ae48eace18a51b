mod common;

use cubic_image::cubic::{MultilinearCubic, Permutation};
use cubic_image::field::{FieldDescriptor, FieldElement};
use cubic_image::matrix::{block_diag, Matrix};
use cubic_image::solver::{
    match_commutator_form, solve_commutator_form, solve_core_jn, solve_general, solve_linear_fallback, SolveError,
    SolverConfig, SolverPath, WitnessTriple,
};
use proptest::prelude::*;
use rand::Rng;

fn check(f: &MultilinearCubic, w: &WitnessTriple, target: &Matrix) {
    assert!(w.verified);
    assert_eq!(&common::naive_eval(f, &w.x, &w.y, &w.z), target, "path {:?}", w.path);
}

fn commutator_cubic(field: &FieldDescriptor, lambda: &FieldElement, scale: i64, sigma: &Permutation) -> MultilinearCubic {
    let c = field.from_i64(scale);
    let one = field.one();
    let coeffs = [one.clone(), -lambda, field.zero(), lambda.clone(), -&one, field.zero()].map(|e| &e * &c);
    MultilinearCubic::new(coeffs).unwrap().permute_variables(sigma)
}

fn traceless<R: Rng>(field: &FieldDescriptor, n: usize, rng: &mut R) -> Matrix {
    let mut t = Matrix::random(field, n, n, rng, 10);
    let tr = t.trace();
    t.set(n - 1, n - 1, t.get(n - 1, n - 1) - &tr);
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn core_round_trip(n in 3usize..7, seed in any::<u64>()) {
        let q = FieldDescriptor::rationals();
        let mut rng = common::rng(seed);
        let f = common::admissible_cubic(&q, n, &mut rng);
        let (d, nu) = common::random_jn_target(&q, n, &mut rng, 10);
        let w = solve_core_jn(&f, &d, &nu, &mut rng, &SolverConfig::default()).unwrap();
        check(&f, &w, &common::jn_matrix(&d, &nu));
        prop_assert_eq!(w.path, SolverPath::CoreJn);
    }

    #[test]
    fn core_round_trip_finite(n in 3usize..6, seed in any::<u64>()) {
        let field = FieldDescriptor::prime_field(10007).unwrap();
        let mut rng = common::rng(seed);
        let f = common::admissible_cubic(&field, n, &mut rng);
        let (d, nu) = common::random_jn_target(&field, n, &mut rng, 10);
        let w = solve_core_jn(&f, &d, &nu, &mut rng, &SolverConfig::default()).unwrap();
        check(&f, &w, &common::jn_matrix(&d, &nu));
    }

    #[test]
    fn general_on_conjugated_targets(n in 2usize..6, seed in any::<u64>()) {
        let q = FieldDescriptor::rationals();
        let mut rng = common::rng(seed);
        let f = common::admissible_cubic(&q, n.max(3), &mut rng);
        let d: Vec<_> = common::int_vector(&q, n, &mut rng, 5);
        let p = Matrix::random_invertible(&q, n, &mut rng, 3);
        let t = &(&p * &Matrix::diagonal(&q, &d)) * &p.inverse().unwrap();
        let w = solve_general(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
        check(&f, &w, &t);
    }

    #[test]
    fn permutation_coherence(s in 0usize..6, n in 3usize..6, seed in any::<u64>()) {
        let q = FieldDescriptor::rationals();
        let mut rng = common::rng(seed);
        let f = common::admissible_cubic(&q, n, &mut rng);
        let sigma = Permutation::all()[s];
        let g = f.permute_variables(&sigma);
        let (d, nu) = common::random_jn_target(&q, n, &mut rng, 10);
        let t = common::jn_matrix(&d, &nu);
        let w = solve_core_jn(&g, &d, &nu, &mut rng, &SolverConfig::default()).unwrap();
        check(&g, &w, &t);
        let back = sigma.select(&w.args());
        prop_assert_eq!(f.eval(&back[0], &back[1], &back[2]).unwrap(), t);
    }

    #[test]
    fn scalar_and_conjugation_coherence(n in 3usize..6, seed in any::<u64>()) {
        let q = FieldDescriptor::rationals();
        let mut rng = common::rng(seed);
        let f = common::admissible_cubic(&q, n, &mut rng);
        // Upper triangular, so the Jordan reduction succeeds over ℚ.
        let (d, mut nu) = common::random_jn_target(&q, n, &mut rng, 10);
        nu[n - 1] = q.zero();
        let t = common::jn_matrix(&d, &nu);
        let w = solve_general(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
        check(&f, &w, &t);
        let c = q.sample_nonzero(&mut rng, 10);
        prop_assert_eq!(f.eval(&w.x.scale(&c), &w.y, &w.z).unwrap(), t.scale(&c));
        let p = Matrix::random_invertible(&q, n, &mut rng, 3);
        let p_inv = p.inverse().unwrap();
        let conj = w.args().map(|m| m.conjugate_by(&p, &p_inv).unwrap());
        let tc = t.conjugate_by(&p, &p_inv).unwrap();
        prop_assert_eq!(f.eval(&conj[0], &conj[1], &conj[2]).unwrap(), tc.clone());
        let direct = solve_general(&f, &tc, &mut rng, &SolverConfig::default()).unwrap();
        check(&f, &direct, &tc);
    }
}

#[test]
fn block_targets() {
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(21);
    let xyz = MultilinearCubic::from_i64(&q, [1, 0, 0, 0, 0, 0]);
    for n in 4..=7 {
        for _ in 0..6 {
            let f = if rng.gen_bool(0.5) { xyz.clone() } else { common::admissible_cubic(&q, n, &mut rng) };
            let a = q.from_i64(rng.gen_range(-5..=5));
            let block = Matrix::from_fn(&q, 2, 2, |i, j| if i == j { a.clone() } else if j == i + 1 { q.one() } else { q.zero() });
            let rest = Matrix::diagonal(&q, &common::int_vector(&q, n - 2, &mut rng, 5));
            let t = block_diag(&[block, rest]).unwrap();
            let w = solve_general(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
            check(&f, &w, &t);
        }
    }
}

#[test]
fn commutator_forms() {
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(22);
    let lambdas = [q.zero(), q.from_i64(2), q.from_i64(-1), &q.one() / &q.from_i64(2)];
    for lambda in &lambdas {
        for n in 3..=5 {
            for k in 0..6 {
                let sigma = Permutation::all()[k];
                let f = commutator_cubic(&q, lambda, rng.gen_range(1..=4), &sigma);
                let m = match_commutator_form(&f).unwrap();
                assert_eq!(&m.lambda, lambda);
                let t = traceless(&q, n, &mut rng);
                let w = solve_commutator_form(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
                assert_eq!(w.path, SolverPath::CommutatorForm);
                check(&f, &w, &t);
            }
        }
    }
    let f = commutator_cubic(&q, &q.one(), 1, &Permutation::identity());
    let t = traceless(&q, 4, &mut rng);
    assert_eq!(solve_commutator_form(&f, &t, &mut rng, &SolverConfig::default()).unwrap_err(), SolveError::NotCommutatorForm);
}

#[test]
fn traceless_polynomials() {
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(23);
    let f = commutator_cubic(&q, &q.one(), 1, &Permutation::identity());
    assert!(matches!(solve_general(&f, &Matrix::identity(&q, 3), &mut rng, &SolverConfig::default()), Err(SolveError::OutsideImage(_))));
    for n in 2..=4 {
        let t = traceless(&q, n, &mut rng);
        let w = solve_general(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
        check(&f, &w, &t);
    }
}

#[test]
fn fallback_small_sizes() {
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(24);
    for _ in 0..20 {
        let f = common::random_cubic(&q, &mut rng, 5);
        let (ls, ms) = f.coefficient_sums();
        if ls.is_zero() && ms.is_zero() {
            continue;
        }
        let t = Matrix::random(&q, 2, 2, &mut rng, 10);
        let w = solve_linear_fallback(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
        check(&f, &w, &t);
    }
}

#[test]
fn degenerate_inputs() {
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(25);
    let zero = Matrix::zeros(&q, 3, 3);
    let f = MultilinearCubic::from_i64(&q, [0, 1, 0, 0, 0, 0]);
    check(&f, &solve_general(&f, &zero, &mut rng, &SolverConfig::default()).unwrap(), &zero);
    let fz = MultilinearCubic::zero(&q);
    assert!(matches!(solve_general(&fz, &Matrix::identity(&q, 3), &mut rng, &SolverConfig::default()), Err(SolveError::OutsideImage(_))));
    let d = vec![q.one(); 4];
    let mut nu = vec![q.zero(); 4];
    nu[0] = q.one();
    assert_eq!(solve_core_jn(&f, &d, &nu, &mut rng, &SolverConfig::default()).unwrap_err(), SolveError::TargetNotInJn);
    let rot = Matrix::from_i64(&q, &[&[0, -1], &[1, 0]]);
    assert_eq!(solve_general(&f, &rot, &mut rng, &SolverConfig::default()).unwrap_err(), SolveError::TargetUnsplittable);
}

#[test]
fn traceless_plane() {
    // a·[[x, y], z] + b·[[z, x], y], including the three nested lines.
    let q = FieldDescriptor::rationals();
    let mut rng = common::rng(26);
    for (a, b) in [(1i64, 0i64), (0, 1), (1, 1), (-2, 0), (0, 3), (4, 4), (1, 2), (3, -1)] {
        let f = MultilinearCubic::from_i64(&q, [a, -b, b - a, a, -b, b - a]);
        for n in 2..=4 {
            let t = traceless(&q, n, &mut rng);
            let w = solve_general(&f, &t, &mut rng, &SolverConfig::default()).unwrap();
            check(&f, &w, &t);
        }
    }
    // [xy, z] and friends go through an identity substitution.
    for c in [[1i64, 0, -1, 0, 0, 0], [0, 0, 0, -2, 0, 2], [1, -1, 0, 1, -1, 0]] {
        let f = MultilinearCubic::from_i64(&q, c);
        for n in 2..=4 {
            let t = traceless(&q, n, &mut rng);
            check(&f, &solve_general(&f, &t, &mut rng, &SolverConfig::default()).unwrap(), &t);
        }
    }
}
