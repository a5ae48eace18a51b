#![allow(dead_code)]

use cubic_image::classify::case_analysis;
use cubic_image::cubic::MultilinearCubic;
use cubic_image::field::{FieldDescriptor, FieldElement};
use cubic_image::matrix::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entrywise evaluation by explicit index sums, independent of matrix products.
pub fn naive_eval(f: &MultilinearCubic, x: &Matrix, y: &Matrix, z: &Matrix) -> Matrix {
    const ORDER: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0], [0, 2, 1], [1, 0, 2]];
    let n = x.rows();
    let field = x.field().clone();
    let args = [x, y, z];
    let coeffs: Vec<FieldElement> = f.coeffs().iter().map(|c| c.embed_into(&field).unwrap()).collect();
    Matrix::from_fn(&field, n, n, |i, j| {
        let mut acc = field.zero();
        for (c, w) in coeffs.iter().zip(ORDER) {
            if c.is_zero() {
                continue;
            }
            let (a, b, d) = (args[w[0]], args[w[1]], args[w[2]]);
            for k in 0..n {
                for l in 0..n {
                    let t = &(a.get(i, k) * b.get(k, l)) * d.get(l, j);
                    acc = &acc + &(c * &t);
                }
            }
        }
        acc
    })
}

/// Leibniz expansion, for small n.
pub fn leibniz_det(m: &Matrix) -> FieldElement {
    let n = m.rows();
    let field = m.field().clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = field.zero();
    permutations(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let term = (0..n).fold(field.one(), |acc, i| &acc * m.get(i, p[i]));
        total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
    });
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

pub fn random_cubic<R: Rng>(field: &FieldDescriptor, rng: &mut R, bound: i64) -> MultilinearCubic {
    let c: [i64; 6] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
    MultilinearCubic::from_i64(field, c)
}

/// A cubic with nonzero λ-sum for which some rotation meets none of the
/// obstruction cases at size n.
pub fn admissible_cubic<R: Rng>(field: &FieldDescriptor, n: usize, rng: &mut R) -> MultilinearCubic {
    loop {
        let f = random_cubic(field, rng, 10);
        let (ls, _) = f.coefficient_sums();
        if !ls.is_zero() && case_analysis(&f, n).working_rotation().is_some() {
            return f;
        }
    }
}

pub fn int_vector<R: Rng>(field: &FieldDescriptor, n: usize, rng: &mut R, bound: i64) -> Vector {
    (0..n).map(|_| field.from_i64(rng.gen_range(-bound..=bound))).collect()
}

/// (d, ν) with entries in [−bound, bound] and ν-support of size 0 or ≥ 2.
pub fn random_jn_target<R: Rng>(field: &FieldDescriptor, n: usize, rng: &mut R, bound: i64) -> (Vector, Vector) {
    let d = int_vector(field, n, rng, bound);
    loop {
        let nu = int_vector(field, n, rng, bound);
        if nu.iter().filter(|e| !e.is_zero()).count() != 1 {
            return (d, nu);
        }
    }
}

pub fn jn_matrix(d: &[FieldElement], nu: &[FieldElement]) -> Matrix {
    let n = d.len();
    let field = d[0].field().clone();
    Matrix::from_fn(&field, n, n, |i, j| {
        if i == j {
            d[i].clone()
        } else if j == (i + 1) % n {
            nu[i].clone()
        } else {
            field.zero()
        }
    })
}

/// The matrix whose columns are u, s·u, …, s^{n−1}·u.
pub fn circulant(u: &[FieldElement]) -> Matrix {
    let n = u.len();
    let field = u[0].field().clone();
    Matrix::from_fn(&field, n, n, |i, j| u[(i + n - j) % n].clone())
}

/// Matrix with row r and column c deleted.
pub fn minor(m: &Matrix, r: usize, c: usize) -> Matrix {
    let n = m.rows();
    Matrix::from_fn(m.field(), n - 1, n - 1, |i, j| {
        m.get(if i < r { i } else { i + 1 }, if j < c { j } else { j + 1 }).clone()
    })
}

/// A row i for which the shift matrix of u minus row i and column 0 is
/// invertible; exists exactly when s·u, …, s^{n−1}·u are independent.
pub fn pivot_row(u: &[FieldElement]) -> Option<usize> {
    let c = circulant(u);
    (0..u.len()).find(|&i| !minor(&c, i, 0).det().unwrap().is_zero())
}

/// Membership in the open set cut out by the minors a^{i+j, j}, j = 0..n.
pub fn in_minor_locus(a: &Matrix, i: usize) -> bool {
    let n = a.rows();
    (0..n).all(|j| !minor(a, (i + j) % n, j).det().unwrap().is_zero())
}

/// Independent description of the kernel: trivial, or one-dimensional and
/// spanned by a vector without zero entries.
pub fn kernel_is_good(a: &Matrix) -> bool {
    let basis = a.kernel_basis();
    match basis.len() {
        0 => true,
        1 => basis[0].iter().all(|e| !e.is_zero()) && a.mul_vec(&basis[0]).unwrap().iter().all(FieldElement::is_zero),
        _ => false,
    }
}

pub fn nonzero_vector<R: Rng>(field: &FieldDescriptor, n: usize, rng: &mut R, bound: i64) -> Vector {
    (0..n).map(|_| field.sample_nonzero(rng, bound)).collect()
}

/// A prime p with n | p − 1, so GF(p) holds all n-th roots of unity.
pub fn prime_with_roots(n: usize) -> u64 {
    (2u64..)
        .filter(|p| (2..*p).take_while(|d| d * d <= *p).all(|d| p % d != 0))
        .find(|p| (p - 1) % n as u64 == 0 && *p > 3)
        .unwrap()
}
