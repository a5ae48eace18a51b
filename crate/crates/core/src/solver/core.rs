//! The structured construction for targets J = Σ dᵢeᵢᵢ + Σ νᵢeᵢ,ᵢ₊₁ whose
//! superdiagonal support is not a single index.
//!
//! With X = diag(x), Y = Σ yᵢeᵢ,ᵢ₊₁ and Z = Σ ζᵢeᵢ,ᵢ₋₁ + diag(w), the
//! diagonal of f(X, Y, Z) is a′(x)·z with zᵢ = yᵢζᵢ₊₁, and the superdiagonal
//! is diag(y)·a(x)ᵀ·w.

use rand::Rng;

use super::{unpermute_witness, SolveError, SolverConfig, SolverPath, WitnessTriple};
use crate::classify::case_analysis;
use crate::cubic::{MultilinearCubic, Permutation};
use crate::field::{FieldDescriptor, FieldElement};
use crate::matrix::{Matrix, Vector};
use crate::structured::{build_structured, diagonal_system_vectors, kernel_shape, superdiagonal_system_vectors, KernelShape, StructuredSpec};

pub fn solve_core_jn<R: Rng + ?Sized>(
    f: &MultilinearCubic,
    d: &[FieldElement],
    nu: &[FieldElement],
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<WitnessTriple, SolveError> {
    let n = d.len();
    if n < 3 {
        return Err(SolveError::UnsupportedSize(format!("structured construction needs n >= 3, got {n}")));
    }
    if nu.len() != n {
        return Err(SolveError::PreconditionViolated(format!("d has length {n} but nu has length {}", nu.len())));
    }
    let support: Vec<usize> = (0..n).filter(|&i| !nu[i].is_zero()).collect();
    if support.len() == 1 {
        return Err(SolveError::TargetNotInJn);
    }
    let field = d[0].field().clone();
    let f_k = f.embed_into(&field)?;
    let target = Matrix::from_fn(&field, n, n, |i, j| {
        if i == j {
            d[i].clone()
        } else if j == (i + 1) % n {
            nu[i].clone()
        } else {
            field.zero()
        }
    });

    // Arrange for λ₁+λ₂+λ₃ ≠ 0 by swapping x and z when only μ sums to nonzero.
    let (ls, ms) = f_k.coefficient_sums();
    let swap = if ls.is_zero() && !ms.is_zero() { Permutation::transposition(0, 2) } else { Permutation::identity() };
    let f1 = f_k.permute_variables(&swap);
    let rotation = case_analysis(&f1, n).working_rotation().ok_or(SolveError::CaseObstruction)?;
    let sigma = rotation.variable_permutation();
    let g = f1.permute_variables(&sigma);

    let [x, y, z] = solve_rotated(&g, &field, d, nu, &support, rng, cfg)?;
    let args = unpermute_witness(&swap, unpermute_witness(&sigma, [x, y, z]));
    WitnessTriple::checked(f, args, &target, SolverPath::CoreJn)
}

fn solve_rotated<R: Rng + ?Sized>(
    g: &MultilinearCubic,
    field: &FieldDescriptor,
    d: &[FieldElement],
    nu: &[FieldElement],
    support: &[usize],
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<[Matrix; 3], SolveError> {
    let n = d.len();
    let (u_diag, v_diag) = diagonal_system_vectors(g, n);
    let (u_sup, v_sup) = superdiagonal_system_vectors(g, n);
    let nu_zero = support.is_empty();
    let mut last = String::from("no draws");
    for _ in 0..cfg.max_tries {
        let xs: Vector = (0..n).map(|_| field.sample_nonzero(rng, cfg.bound)).collect();
        let a_diag = build_structured(&StructuredSpec { u: u_diag.clone(), v: v_diag.clone(), xs: xs.clone() })
            .expect("nonzero sample");
        if a_diag.det()?.is_zero() {
            last = "diagonal system singular".into();
            continue;
        }
        let (w, ys) = if nu_zero {
            (vec![field.zero(); n], vec![field.one(); n])
        } else {
            let a = build_structured(&StructuredSpec { u: u_sup.clone(), v: v_sup.clone(), xs: xs.clone() })
                .expect("nonzero sample");
            let Some(shape) = kernel_shape(&a) else {
                last = "superdiagonal kernel has a zero entry or dimension > 1".into();
                continue;
            };
            let Some(eta) = choose_eta(field, nu, support, &shape) else {
                last = "no admissible right-hand side for the superdiagonal system".into();
                continue;
            };
            let w = solve_exact(&a.transpose(), &eta)?;
            let ys: Vector = (0..n)
                .map(|i| if nu[i].is_zero() { field.one() } else { &nu[i] / &eta[i] })
                .collect();
            let lhs = a.transpose().mul_vec(&w)?;
            if (0..n).any(|i| &ys[i] * &lhs[i] != nu[i]) {
                return Err(SolveError::VerificationFailed(SolverPath::CoreJn));
            }
            (w, ys)
        };
        let zs = solve_exact(&a_diag, d)?;
        if a_diag.mul_vec(&zs)? != d {
            return Err(SolveError::VerificationFailed(SolverPath::CoreJn));
        }
        let xm = Matrix::diagonal(field, &xs);
        let ym = Matrix::from_fn(field, n, n, |i, j| if j == (i + 1) % n { ys[i].clone() } else { field.zero() });
        // ζᵢ = zᵢ₋₁ / yᵢ₋₁ on the subdiagonal, w on the diagonal.
        let zm = Matrix::from_fn(field, n, n, |i, j| {
            if i == j {
                w[i].clone()
            } else if j == (i + n - 1) % n {
                &zs[j] / &ys[j]
            } else {
                field.zero()
            }
        });
        return Ok([xm, ym, zm]);
    }
    Err(SolveError::SamplerExhausted(format!("{} draws, last: {last}", cfg.max_tries)))
}

fn solve_exact(a: &Matrix, b: &[FieldElement]) -> Result<Vector, SolveError> {
    match a.solve(b)? {
        crate::matrix::Solution::Solved(x) => Ok(x),
        crate::matrix::Solution::Inconsistent => Err(SolveError::SamplerExhausted("inconsistent structured system".into())),
    }
}

/// A vector η in the image of aᵀ, nonzero exactly on the support of ν.
fn choose_eta(field: &FieldDescriptor, nu: &[FieldElement], support: &[usize], shape: &KernelShape) -> Option<Vector> {
    let n = nu.len();
    let b = match shape {
        KernelShape::Empty => return Some(nu.to_vec()),
        KernelShape::AllNonzero(b) => b,
    };
    let (&last, rest) = support.split_last()?;
    let try_first = |c: FieldElement| -> Option<Vector> {
        let mut eta = vec![field.zero(); n];
        for &i in rest {
            eta[i] = field.one();
        }
        eta[rest[0]] = c;
        let partial = rest.iter().fold(field.zero(), |acc, &i| &acc + &(&eta[i] * &b[i]));
        eta[last] = -(&partial / &b[last]);
        (!eta[last].is_zero()).then_some(eta)
    };
    if rest.is_empty() {
        return None;
    }
    try_first(field.one()).or_else(|| {
        let c = if field.characteristic() != 2 {
            -field.one()
        } else {
            field.distinct_elements(3)?.into_iter().find(|e| !e.is_zero() && !e.is_one())?
        };
        try_first(c)
    })
}
