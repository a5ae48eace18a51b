//! Polynomials of the form c·(a[b,c] − λ[b,c]a) with λ ≠ 1, solved by
//! forcing [Y, Z] to be a diagonal matrix.

use rand::Rng;

use super::{SolveError, SolverConfig, SolverPath, WitnessTriple};
use crate::cubic::{MultilinearCubic, Permutation};
use crate::field::{FieldDescriptor, FieldElement};
use crate::matrix::{Matrix, Vector};

/// g = permute_variables(f, π) equals c·(xyz − λ·yzx + λ·zyx − xzy).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorMatch {
    pub permutation: Permutation,
    pub lambda: FieldElement,
    pub scale: FieldElement,
}

pub fn match_commutator_form(f: &MultilinearCubic) -> Option<CommutatorMatch> {
    if f.is_zero() {
        return None;
    }
    Permutation::all().into_iter().find_map(|pi| {
        let g = f.permute_variables(&pi);
        let c = g.coeffs();
        if c[0].is_zero() {
            return None;
        }
        let scale = c[0].clone();
        let lambda = -(&c[1] / &scale);
        let ok = (&c[3] - &(&scale * &lambda)).is_zero()
            && (&c[4] + &scale).is_zero()
            && c[2].is_zero()
            && c[5].is_zero();
        ok.then_some(CommutatorMatch { permutation: pi, lambda, scale })
    })
}

pub fn solve_commutator_form<R: Rng + ?Sized>(
    f: &MultilinearCubic,
    t: &Matrix,
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<WitnessTriple, SolveError> {
    let m = match_commutator_form(f).ok_or(SolveError::NotCommutatorForm)?;
    if m.lambda.is_one() {
        return Err(SolveError::NotCommutatorForm);
    }
    if !t.is_square() {
        return Err(crate::matrix::MatrixError::NotSquare { rows: t.rows(), cols: t.cols() }.into());
    }
    let n = t.rows();
    if n < 3 {
        return Err(SolveError::UnsupportedSize(format!("commutator construction needs n >= 3, got {n}")));
    }
    let field = t.field().clone();
    let lambda = m.lambda.embed_into(&field)?;
    let scale = m.scale.embed_into(&field)?;
    let d = sample_admissible_diagonal(&field, n, &lambda, rng, cfg)?;
    let (y, z) = commutator_realize(&Matrix::diagonal(&field, &d))?;
    let x = Matrix::from_fn(&field, n, n, |i, j| {
        let denom = &d[j] - &(&lambda * &d[i]);
        &(t.get(i, j) / &scale) / &denom
    });
    let args = m.permutation.select(&[x, y, z]);
    WitnessTriple::checked(f, args, t, SolverPath::CommutatorForm)
}

/// Traceless targets for f with both coefficient sums zero. Putting the
/// identity in one slot leaves α·[u, v] in the other two. When all three α
/// vanish, f = a·[[x, y], z] + b·[[z, x], y]; the three lines of that plane
/// that are a single nested commutator are split twice, the rest is left to
/// the linear fallback.
pub fn solve_traceless_commutator(f: &MultilinearCubic, t: &Matrix) -> Result<WitnessTriple, SolveError> {
    let (ls, ms) = f.coefficient_sums();
    if !(ls.is_zero() && ms.is_zero()) {
        return Err(SolveError::PreconditionViolated("coefficient sums are not both zero".into()));
    }
    if !t.is_square() {
        return Err(crate::matrix::MatrixError::NotSquare { rows: t.rows(), cols: t.cols() }.into());
    }
    if !t.trace().is_zero() {
        return Err(SolveError::NonzeroTrace);
    }
    let n = t.rows();
    let field = t.field().clone();
    let c: Vec<FieldElement> = f.coeffs().iter().map(|e| e.embed_into(&field)).collect::<Result<_, _>>()?;
    let id = Matrix::identity(&field, n);
    let alphas = [&(&c[0] + &c[1]) + &c[5], &(&c[0] + &c[4]) + &c[5], &(&c[0] + &c[2]) + &c[4]];
    if let Some(slot) = alphas.iter().position(|a| !a.is_zero()) {
        let (u, v) = commutator_realize(&t.scale(&alphas[slot].inv()?))?;
        let args = match slot {
            0 => [id, u, v],
            1 => [u, id, v],
            _ => [u, v, id],
        };
        return WitnessTriple::checked(f, args, t, SolverPath::CommutatorForm);
    }
    let (a, b) = (c[0].clone(), -&c[1]);
    // k·[[p, q], r] as (k, [p, q, r]) in variable indices.
    let (k, [p, q, r]) = if b.is_zero() {
        (a, [0, 1, 2])
    } else if a.is_zero() {
        (b, [2, 0, 1])
    } else if a == b {
        (-&a, [1, 2, 0])
    } else {
        return Err(SolveError::PreconditionViolated("not a single nested commutator".into()));
    };
    let (outer, last) = commutator_realize(&t.scale(&k.inv()?))?;
    let n_inv = field.from_i64(n as i64).inv().map_err(|_| SolveError::InsufficientFieldSize)?;
    let inner = outer.try_sub(&id.scale(&(&outer.trace() * &n_inv)))?;
    let (first, second) = commutator_realize(&inner)?;
    let mut args = [id.clone(), id.clone(), id];
    args[p] = first;
    args[q] = second;
    args[r] = last;
    WitnessTriple::checked(f, args, t, SolverPath::CommutatorForm)
}

/// d with Σd = 0, not scalar, and d_j ≠ λ·d_i for all i, j.
fn sample_admissible_diagonal<R: Rng + ?Sized>(
    field: &FieldDescriptor,
    n: usize,
    lambda: &FieldElement,
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<Vector, SolveError> {
    for _ in 0..cfg.max_tries {
        let mut d: Vector = (0..n - 1).map(|_| field.sample(rng, cfg.bound)).collect();
        let sum = d.iter().fold(field.zero(), |acc, e| &acc + e);
        d.push(-sum);
        let scalar = d.iter().all(|e| *e == d[0]);
        let ok = !scalar && d.iter().all(|di| d.iter().all(|dj| !(dj - &(lambda * di)).is_zero()));
        if ok {
            return Ok(d);
        }
    }
    Err(SolveError::DegenerateD(cfg.max_tries))
}

/// Y, Z with YZ − ZY = a for a traceless, non-scalar a.
pub fn commutator_realize(a: &Matrix) -> Result<(Matrix, Matrix), SolveError> {
    if !a.is_square() {
        return Err(crate::matrix::MatrixError::NotSquare { rows: a.rows(), cols: a.cols() }.into());
    }
    if !a.trace().is_zero() {
        return Err(SolveError::NonzeroTrace);
    }
    let n = a.rows();
    let field = a.field().clone();
    if a.is_zero() {
        return Ok((Matrix::zeros(&field, n, n), Matrix::zeros(&field, n, n)));
    }
    if is_scalar(a) {
        return Err(SolveError::PreconditionViolated("nonzero scalar matrices are not handled".into()));
    }
    let (p, zero_diag) = zero_diagonal_form(a)?;
    let beta = field.distinct_elements(n).ok_or(SolveError::InsufficientFieldSize)?;
    let y0 = Matrix::diagonal(&field, &beta);
    let z0 = Matrix::from_fn(&field, n, n, |i, j| {
        if i == j {
            field.zero()
        } else {
            zero_diag.get(i, j) / &(&beta[i] - &beta[j])
        }
    });
    let p_inv = p.inverse()?;
    // zero_diag = P⁻¹·a·P
    let y = &(&p * &y0) * &p_inv;
    let z = &(&p * &z0) * &p_inv;
    let check = &(&y * &z) - &(&z * &y);
    if check != *a {
        return Err(SolveError::VerificationFailed(SolverPath::CommutatorForm));
    }
    Ok((y, z))
}

fn is_scalar(m: &Matrix) -> bool {
    m.is_diagonal() && (0..m.rows()).all(|i| m.get(i, i) == m.get(0, 0))
}

/// P and P⁻¹·a·P with zero diagonal.
fn zero_diagonal_form(a: &Matrix) -> Result<(Matrix, Matrix), SolveError> {
    let n = a.rows();
    let field = a.field().clone();
    let mut p = Matrix::identity(&field, n);
    let mut cur = a.clone();
    for k in 0..n.saturating_sub(1) {
        let m = n - k;
        let block = cur.submatrix(k..n, k..n);
        if block.is_zero() {
            break;
        }
        if is_scalar(&block) {
            return Err(SolveError::InsufficientFieldSize);
        }
        let c = choose_block_basis(&block)?;
        let mut s = Matrix::identity(&field, n);
        for i in 0..m {
            for j in 0..m {
                s.set(k + i, k + j, c.get(i, j).clone());
            }
        }
        let s_inv = s.inverse()?;
        cur = &(&s_inv * &cur) * &s;
        p = &p * &s;
        debug_assert!(cur.get(k, k).is_zero());
    }
    Ok((p, cur))
}

/// Columns (v, Bv, e's) for a non-scalar traceless block B, with v chosen so
/// the trailing block after the change of basis is not a nonzero scalar.
fn choose_block_basis(b: &Matrix) -> Result<Matrix, SolveError> {
    let m = b.rows();
    let field = b.field().clone();
    let unit = |i: usize| -> Vector { (0..m).map(|r| if r == i { field.one() } else { field.zero() }).collect() };
    let mut candidates: Vec<Vector> = (0..m).map(unit).collect();
    for i in 0..m {
        for j in i + 1..m {
            candidates.push(unit(i).iter().zip(unit(j)).map(|(x, y)| x + &y).collect());
        }
    }
    for i in 0..m {
        for j in 0..m {
            if i != j {
                candidates.push(unit(i).iter().zip(unit(j)).map(|(x, y)| x - &y).collect());
            }
        }
    }
    for v in candidates {
        let bv = b.mul_vec(&v)?;
        let mut cols = vec![v, bv];
        if Matrix::from_columns(&field, m, &cols).rank() < 2 {
            continue;
        }
        for i in 0..m {
            if cols.len() == m {
                break;
            }
            cols.push(unit(i));
            if Matrix::from_columns(&field, m, &cols).rank() < cols.len() {
                cols.pop();
            }
        }
        let c = Matrix::from_columns(&field, m, &cols);
        let next = &(&c.inverse()? * b) * &c;
        let trailing = next.submatrix(1..m, 1..m);
        if m == 2 || trailing.is_zero() || !is_scalar(&trailing) {
            return Ok(c);
        }
    }
    Err(SolveError::InsufficientFieldSize)
}
