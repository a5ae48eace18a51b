//! Structured matrices built from two template vectors and cyclic shifts,
//! rejection samplers for their good loci, and the root-of-unity condition
//! ωηθ − ω − η − θ + 2 ≠ 0.

use rand::Rng;
use thiserror::Error;

use crate::cubic::MultilinearCubic;
use crate::field::{nth_roots_of_unity, FieldDescriptor, FieldElement, DEFAULT_SAMPLE_BOUND};
use crate::matrix::{shift_apply, Matrix, Vector};

pub const DEFAULT_MAX_TRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuredError {
    #[error("sample entry x_{0} is zero")]
    ZeroSampleEntry(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("sampler exhausted after {tries} tries ({detail})")]
    Exhausted { tries: usize, detail: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSpec {
    pub u: Vector,
    pub v: Vector,
    pub xs: Vector,
}

impl StructuredSpec {
    pub fn n(&self) -> usize {
        self.xs.len()
    }
}

/// Column j is s^j(x_j·u + x_{j+1}·v), indices mod n.
pub fn build_structured(spec: &StructuredSpec) -> Result<Matrix, StructuredError> {
    let n = spec.n();
    if n == 0 || spec.u.len() != n || spec.v.len() != n {
        return Err(StructuredError::DimensionMismatch(format!(
            "u, v, xs must have equal positive length (got {}, {}, {})",
            spec.u.len(),
            spec.v.len(),
            n
        )));
    }
    if let Some(i) = spec.xs.iter().position(FieldElement::is_zero) {
        return Err(StructuredError::ZeroSampleEntry(i));
    }
    Ok(build_unchecked(&spec.u, &spec.v, &spec.xs))
}

fn build_unchecked(u: &[FieldElement], v: &[FieldElement], xs: &[FieldElement]) -> Matrix {
    let n = xs.len();
    let field = xs[0].field().clone();
    let columns: Vec<Vector> = (0..n)
        .map(|j| {
            let (a, b) = (&xs[j], &xs[(j + 1) % n]);
            let col: Vector = u.iter().zip(v).map(|(ui, vi)| &(a * ui) + &(b * vi)).collect();
            shift_apply(&col, j as i64)
        })
        .collect();
    Matrix::from_columns(&field, n, &columns)
}

/// A length-n vector with `first` at index 0 and `second` at index 1 (mod n).
pub fn two_entry_vector(first: FieldElement, second: FieldElement, n: usize) -> Vector {
    let field = first.field().clone();
    let mut v = vec![field.zero(); n];
    v[0] = &v[0] + &first;
    v[1 % n] = &v[1 % n] + &second;
    v
}

/// Template vectors (u′, v′) of the diagonal system:
/// u′ = (λ₁+λ₂, λ₃, 0, …), v′ = (μ₃, μ₁+μ₂, 0, …).
pub fn diagonal_system_vectors(f: &MultilinearCubic, n: usize) -> (Vector, Vector) {
    let [l1, l2, l3] = f.lambda();
    let [m1, m2, m3] = f.mu();
    (two_entry_vector(l1 + l2, l3.clone(), n), two_entry_vector(m3.clone(), m1 + m2, n))
}

/// Template vectors (u, v) of the superdiagonal system:
/// u = (μ₂+λ₃, λ₁, 0, …), v = (μ₁, λ₂+μ₃, 0, …).
pub fn superdiagonal_system_vectors(f: &MultilinearCubic, n: usize) -> (Vector, Vector) {
    let [l1, l2, l3] = f.lambda();
    let [m1, m2, m3] = f.mu();
    (two_entry_vector(m2 + l3, l1.clone(), n), two_entry_vector(m1.clone(), l2 + m3, n))
}

fn check_templates(u: &[FieldElement], v: &[FieldElement], n: usize) -> Result<FieldDescriptor, StructuredError> {
    if n == 0 || u.len() != n || v.len() != n {
        return Err(StructuredError::DimensionMismatch(format!("templates must have length {n}")));
    }
    Ok(u[0].field().clone())
}

fn sample_xs<R: Rng + ?Sized>(field: &FieldDescriptor, n: usize, rng: &mut R) -> Vector {
    (0..n).map(|_| field.sample_nonzero(rng, DEFAULT_SAMPLE_BOUND)).collect()
}

/// Rejection-samples xs ∈ (K^×)^n with det a(xs) ≠ 0.
pub fn sample_invertible_point<R: Rng + ?Sized>(
    u: &[FieldElement],
    v: &[FieldElement],
    n: usize,
    rng: &mut R,
    max_tries: usize,
) -> Result<Vector, StructuredError> {
    let field = check_templates(u, v, n)?;
    let mut last = field.zero();
    for _ in 0..max_tries {
        let xs = sample_xs(&field, n, rng);
        last = build_unchecked(u, v, &xs).det().expect("square");
        if !last.is_zero() {
            return Ok(xs);
        }
    }
    Err(StructuredError::Exhausted { tries: max_tries, detail: format!("last determinant {last}") })
}

/// Kernel of a structured matrix at a good point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelShape {
    Empty,
    /// Kernel spanned by one vector, every entry nonzero.
    AllNonzero(Vector),
}

/// The kernel description of `a` when it is trivial or spanned by a vector
/// without zero entries; `None` otherwise.
pub fn kernel_shape(a: &Matrix) -> Option<KernelShape> {
    let mut basis = a.kernel_basis();
    match basis.len() {
        0 => Some(KernelShape::Empty),
        1 => {
            let b = basis.pop().unwrap();
            b.iter().all(|e| !e.is_zero()).then_some(KernelShape::AllNonzero(b))
        }
        _ => None,
    }
}

/// Whether s·w, …, s^{n-1}·w are linearly independent.
pub fn shifts_independent(w: &[FieldElement]) -> bool {
    let n = w.len();
    if n <= 1 {
        return true;
    }
    let field = w[0].field().clone();
    let cols: Vec<Vector> = (1..n).map(|j| shift_apply(w, j as i64)).collect();
    Matrix::from_columns(&field, n, &cols).rank() == n - 1
}

/// Rejection-samples xs whose structured matrix has a trivial kernel or a
/// kernel spanned by a vector with all entries nonzero.
pub fn sample_good_kernel_point<R: Rng + ?Sized>(
    u: &[FieldElement],
    v: &[FieldElement],
    n: usize,
    rng: &mut R,
    max_tries: usize,
) -> Result<(Vector, KernelShape), StructuredError> {
    let field = check_templates(u, v, n)?;
    if !shifts_independent(u) && !shifts_independent(v) {
        return Err(StructuredError::PreconditionViolated(
            "neither the shifts of u nor the shifts of v are linearly independent".into(),
        ));
    }
    let mut last_dim = 0;
    for _ in 0..max_tries {
        let xs = sample_xs(&field, n, rng);
        let a = build_unchecked(u, v, &xs);
        if let Some(shape) = kernel_shape(&a) {
            return Ok((xs, shape));
        }
        last_dim = a.kernel_basis().len();
    }
    Err(StructuredError::Exhausted { tries: max_tries, detail: format!("last kernel dimension {last_dim}") })
}

/// Outcome of [`check_condition_31`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub witness: Option<[FieldElement; 3]>,
}

/// ωηθ − ω − η − θ + 2.
pub fn condition_31_value(w: &FieldElement, e: &FieldElement, t: &FieldElement) -> FieldElement {
    let two = w.field().from_i64(2);
    &(&(&(&(w * e) * t) - w) - &(e + t)) + &two
}

/// Checks ωηθ − ω − η − θ + 2 ≠ 0 over all ordered triples of nontrivial n-th
/// roots of unity in `field`; the first violation found is returned.
pub fn check_condition_31(field: &FieldDescriptor, n: usize) -> ConditionVerdict {
    let one = field.one();
    let two = field.from_i64(2);
    let roots: Vec<FieldElement> = nth_roots_of_unity(field, n).into_iter().filter(|r| *r != one).collect();
    for w in &roots {
        for e in &roots {
            // value = θ(ωη − 1) + (2 − ω − η)
            let a = &(w * e) - &one;
            let b = &(&two - w) - e;
            for t in &roots {
                if (&(t * &a) + &b).is_zero() {
                    debug_assert!(condition_31_value(w, e, t).is_zero());
                    return ConditionVerdict { holds: false, witness: Some([w.clone(), e.clone(), t.clone()]) };
                }
            }
        }
    }
    ConditionVerdict { holds: true, witness: None }
}

/// An explicit violating triple over GF(p) for n divisible by p − 1:
/// ω = 2, η the least admissible element, θ = (ω + η − 2)/(ωη − 1).
pub fn counterexample_31(p: u64, n: usize) -> Result<[FieldElement; 3], StructuredError> {
    if p < 5 {
        return Err(StructuredError::PreconditionViolated(format!("p = {p} must be at least 5")));
    }
    let field = FieldDescriptor::prime_field(p)
        .map_err(|e| StructuredError::PreconditionViolated(e.to_string()))?;
    if n == 0 || n as u64 % (p - 1) != 0 {
        return Err(StructuredError::PreconditionViolated(format!("{} does not divide {n}", p - 1)));
    }
    let one = field.one();
    let two = field.from_i64(2);
    let omega = two.clone();
    let excluded = [field.zero(), one.clone(), omega.inv().unwrap(), &two - &omega];
    let eta = (2..p as i64)
        .map(|i| field.from_i64(i))
        .find(|e| !excluded.contains(e))
        .expect("a field with at least five elements has an admissible η");
    let theta = &(&(&omega + &eta) - &two) / &(&(&omega * &eta) - &one);
    assert!(theta != one && !theta.is_zero(), "θ must be a nontrivial unit");
    for r in [&omega, &eta, &theta] {
        assert!(r.pow(n as u64).is_one());
    }
    assert!(condition_31_value(&omega, &eta, &theta).is_zero());
    Ok([omega, eta, theta])
}
