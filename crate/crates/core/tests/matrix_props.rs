mod common;

use cubic_image::field::FieldDescriptor;
use cubic_image::matrix::{block_diag, jordan_form, shift_apply, JordanData, Matrix, Solution};
use proptest::prelude::*;
use rand::Rng;

fn fields() -> Vec<FieldDescriptor> {
    vec![
        FieldDescriptor::rationals(),
        FieldDescriptor::prime_field(5).unwrap(),
        FieldDescriptor::prime_field(7).unwrap(),
    ]
}

/// A random matrix of rank at most r, as a product of n×r and r×n factors.
fn low_rank<R: Rng>(field: &FieldDescriptor, n: usize, r: usize, rng: &mut R) -> Matrix {
    if r == 0 {
        return Matrix::zeros(field, n, n);
    }
    let a = Matrix::random(field, n, r, rng, 5);
    let b = Matrix::random(field, r, n, rng, 5);
    &a * &b
}

#[test]
fn solve_and_kernel_agree() {
    let mut rng = common::rng(1);
    for t in 0..500 {
        let field = &fields()[t % 3];
        let n = rng.gen_range(1..=8);
        let r = rng.gen_range(0..=n);
        let a = low_rank(field, n, r, &mut rng);
        let kernel = a.kernel_basis();
        assert_eq!(kernel.len() + a.rank(), n);
        for b in &kernel {
            assert!(a.mul_vec(b).unwrap().iter().all(|e| e.is_zero()));
        }
        // A solution of A x = A y differs from y by a kernel element.
        let y: Vec<_> = (0..n).map(|_| field.sample(&mut rng, 5)).collect();
        let rhs = a.mul_vec(&y).unwrap();
        let Solution::Solved(x) = a.solve(&rhs).unwrap() else { panic!("consistent system reported inconsistent") };
        let diff: Vec<_> = x.iter().zip(&y).map(|(p, q)| p - q).collect();
        let mut cols = kernel.clone();
        cols.push(diff);
        assert_eq!(Matrix::from_columns(field, n, &cols).rank(), kernel.len());
    }
}

#[test]
fn determinant_matches_leibniz() {
    let mut rng = common::rng(2);
    let mut all = fields();
    all.push(FieldDescriptor::cyclotomic(5).unwrap());
    for t in 0..200 {
        let field = &all[t % 4];
        let n = rng.gen_range(1..=5);
        let m = Matrix::random(field, n, n, &mut rng, 10);
        assert_eq!(m.det().unwrap(), common::leibniz_det(&m));
    }
}

#[test]
fn circulant_identity() {
    let mut rng = common::rng(3);
    for field in fields() {
        for n in 2..=12 {
            for _ in 0..20 {
                let (u1, u2) = (field.sample(&mut rng, 10), field.sample(&mut rng, 10));
                let mut u = vec![field.zero(); n];
                u[0] = u1.clone();
                u[1] = u2.clone();
                let sign = if n % 2 == 1 { field.one() } else { -field.one() };
                let expected = &u1.pow(n as u64) + &(&sign * &u2.pow(n as u64));
                assert_eq!(common::circulant(&u).det().unwrap(), expected, "{field} n={n}");
            }
        }
    }
}

#[test]
fn frobenius_twist() {
    let mut rng = common::rng(4);
    for p in [2u64, 3, 5] {
        let field = FieldDescriptor::prime_field(p).unwrap();
        for n in 2..=12usize {
            let (mut m, mut pk) = (n, 1u64);
            while m % p as usize == 0 {
                m /= p as usize;
                pk *= p;
            }
            for _ in 0..20 {
                let (u1, u2) = (field.sample(&mut rng, 10), field.sample(&mut rng, 10));
                let mut u = vec![field.zero(); n];
                u[0] = u1.clone();
                u[1] = u2.clone();
                let sign = if m % 2 == 1 { field.one() } else { -field.one() };
                let inner = &u1.pow(m as u64) + &(&sign * &u2.pow(m as u64));
                assert_eq!(common::circulant(&u).det().unwrap(), inner.pow(pk), "p={p} n={n}");
            }
        }
    }
}

#[test]
fn jordan_examples_over_extensions() {
    let q = FieldDescriptor::rationals();
    let rot = Matrix::from_i64(&q, &[&[0, 1], &[-1, 0]]);
    assert!(jordan_form(&rot).is_err());
    let k = FieldDescriptor::cyclotomic(4).unwrap();
    let jd = jordan_form(&rot.embed_into(&k).unwrap()).unwrap();
    let i = k.generator();
    let mut d = jd.d.clone();
    d.sort_by_key(|e| e.to_string());
    let mut expected = vec![i.clone(), -&i];
    expected.sort_by_key(|e| e.to_string());
    assert_eq!(d, expected);
}

fn random_jordan_matrix<R: Rng>(field: &FieldDescriptor, rng: &mut R) -> Matrix {
    // Random eigenvalues from a small set so blocks of size > 1 occur.
    let n = rng.gen_range(1..=6);
    let d: Vec<_> = (0..n).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect();
    let nu: Vec<_> = (0..n)
        .map(|i| if i + 1 < n && d[i] == d[i + 1] && rng.gen_bool(0.6) { field.one() } else { field.zero() })
        .collect();
    let j = JordanData::new(d, nu, None).unwrap().reconstruct();
    let p = Matrix::random_invertible(field, n, rng, 3);
    &(&p * &j) * &p.inverse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn jordan_round_trip(seed in any::<u64>(), which in 0usize..3) {
        let field = &fields()[which];
        let mut rng = common::rng(seed);
        let m = random_jordan_matrix(field, &mut rng);
        let jd = jordan_form(&m).unwrap();
        let p = jd.p.clone().unwrap();
        prop_assert_eq!(&(&p * &jd.reconstruct()) * &p.inverse().unwrap(), m.clone());
        prop_assert_eq!(jd.target(), m);
    }

    #[test]
    fn det_is_multiplicative(seed in any::<u64>(), n in 1usize..6) {
        let field = FieldDescriptor::cyclotomic(3).unwrap();
        let mut rng = common::rng(seed);
        let a = Matrix::random(&field, n, n, &mut rng, 4);
        let b = Matrix::random(&field, n, n, &mut rng, 4);
        prop_assert_eq!((&a * &b).det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
    }

    #[test]
    fn shift_powers(v in prop::collection::vec(-9i64..9, 1..10), j in -20i64..20) {
        let q = FieldDescriptor::rationals();
        let v: Vec<_> = v.iter().map(|&c| q.from_i64(c)).collect();
        let n = v.len() as i64;
        prop_assert_eq!(shift_apply(&v, n), v.clone());
        prop_assert_eq!(shift_apply(&shift_apply(&v, j), -j), v.clone());
        prop_assert_eq!(shift_apply(&shift_apply(&v, j), 1), shift_apply(&v, j + 1));
    }

    #[test]
    fn block_diag_is_direct_sum(seed in any::<u64>(), a in 1usize..4, b in 1usize..4) {
        let q = FieldDescriptor::rationals();
        let mut rng = common::rng(seed);
        let (x1, x2) = (Matrix::random(&q, a, a, &mut rng, 5), Matrix::random(&q, b, b, &mut rng, 5));
        let (y1, y2) = (Matrix::random(&q, a, a, &mut rng, 5), Matrix::random(&q, b, b, &mut rng, 5));
        let x = block_diag(&[x1.clone(), x2.clone()]).unwrap();
        let y = block_diag(&[y1.clone(), y2.clone()]).unwrap();
        prop_assert_eq!(&x * &y, block_diag(&[&x1 * &y1, &x2 * &y2]).unwrap());
        prop_assert_eq!(x.det().unwrap(), &x1.det().unwrap() * &x2.det().unwrap());
    }
}
