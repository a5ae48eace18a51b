//! Witness construction: triples (X, Y, Z) with f(X, Y, Z) = T, checked by
//! exact re-evaluation before they are returned.

mod commutator;
mod core;
mod fallback;

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::cubic::{MultilinearCubic, Permutation};
use crate::field::DEFAULT_SAMPLE_BOUND;
use crate::matrix::{block_diag, jordan_form, JordanData, Matrix, MatrixError, TargetClass};
use crate::structured::DEFAULT_MAX_TRIES;

pub use self::commutator::{
    commutator_realize, match_commutator_form, solve_commutator_form, solve_traceless_commutator, CommutatorMatch,
};
pub use self::core::solve_core_jn;
pub use self::fallback::{solve_linear_fallback, SampleShape};

pub const DEFAULT_FALLBACK_TRIES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverPath {
    CoreJn,
    BlockSplit,
    CommutatorForm,
    LinearFallback,
}

impl fmt::Display for SolverPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTriple {
    pub x: Matrix,
    pub y: Matrix,
    pub z: Matrix,
    pub verified: bool,
    pub path: SolverPath,
}

impl WitnessTriple {
    /// Re-evaluates f and returns a verified triple, or `VerificationFailed`.
    pub fn checked(f: &MultilinearCubic, args: [Matrix; 3], target: &Matrix, path: SolverPath) -> Result<Self, SolveError> {
        let [x, y, z] = args;
        if f.eval(&x, &y, &z)? != *target {
            return Err(SolveError::VerificationFailed(path));
        }
        Ok(WitnessTriple { x, y, z, verified: true, path })
    }

    pub fn args(&self) -> [Matrix; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("target has exactly one nonzero superdiagonal entry")]
    TargetNotInJn,
    #[error("structured sampler exhausted: {0}")]
    SamplerExhausted(String),
    #[error("every rotation meets an obstruction case")]
    CaseObstruction,
    #[error("characteristic polynomial of the target does not split over its field")]
    TargetUnsplittable,
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("polynomial is not of the form a[b,c] - λ[b,c]a with λ ≠ 1")]
    NotCommutatorForm,
    #[error("no admissible diagonal found after {0} draws")]
    DegenerateD(usize),
    #[error("diagonal target has nonzero trace")]
    NonzeroTrace,
    #[error("field too small for the construction")]
    InsufficientFieldSize,
    #[error("no witness found in {tries} randomized rounds (inconclusive)")]
    Exhausted { tries: usize },
    #[error("target is outside the image: {0}")]
    OutsideImage(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("constructed witness failed verification on the {0} path")]
    VerificationFailed(SolverPath),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl From<crate::field::FieldError> for SolveError {
    fn from(e: crate::field::FieldError) -> Self {
        SolveError::Matrix(e.into())
    }
}

impl SolveError {
    /// Errors after which a different construction may still succeed.
    pub fn is_recoverable(&self) -> bool {
        matches!(
            self,
            SolveError::SamplerExhausted(_)
                | SolveError::CaseObstruction
                | SolveError::UnsupportedSize(_)
                | SolveError::PreconditionViolated(_)
                | SolveError::Exhausted { .. }
                | SolveError::DegenerateD(_)
                | SolveError::InsufficientFieldSize
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Draws per structured sampler.
    pub max_tries: usize,
    /// Rounds of the randomized linear fallback.
    pub fallback_tries: usize,
    /// Half-width of the integer sampling box.
    pub bound: i64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_tries: DEFAULT_MAX_TRIES, fallback_tries: DEFAULT_FALLBACK_TRIES, bound: DEFAULT_SAMPLE_BOUND }
    }
}

/// Applies `sigma` to a witness of `permute_variables(f, sigma)` to get a
/// witness of f.
pub fn unpermute_witness(sigma: &Permutation, args: [Matrix; 3]) -> [Matrix; 3] {
    sigma.select(&args)
}

/// Solves for a target given in Jordan coordinates (optionally with a change
/// of basis).
pub fn solve_jordan<R: Rng + ?Sized>(
    f: &MultilinearCubic,
    jd: &JordanData,
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<WitnessTriple, SolveError> {
    let j = jd.reconstruct();
    let (args, path) = match jd.classify_target() {
        TargetClass::InJn => (solve_core_jn(f, &jd.d, &jd.nu, rng, cfg)?.args(), SolverPath::CoreJn),
        TargetClass::SingleTwoBlock => (block_split(f, jd, rng, cfg)?, SolverPath::BlockSplit),
    };
    debug_assert_eq!(f.eval(&args[0], &args[1], &args[2]).ok(), Some(j.clone()));
    let target = jd.target();
    match &jd.p {
        None => WitnessTriple::checked(f, args, &j, path),
        Some(p) => {
            let p_inv = p.inverse()?;
            let conj = args.map(|m| m.conjugate_by(p, &p_inv)).into_iter().collect::<Result<Vec<_>, _>>()?;
            let [x, y, z]: [Matrix; 3] = conj.try_into().expect("three matrices");
            WitnessTriple::checked(f, [x, y, z], &target, path)
        }
    }
}

/// A single 2x2 Jordan block plus a diagonal: both parts are solved
/// separately and glued block-diagonally.
fn block_split<R: Rng + ?Sized>(
    f: &MultilinearCubic,
    jd: &JordanData,
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<[Matrix; 3], SolveError> {
    let n = jd.n();
    if n < 4 {
        return Err(SolveError::UnsupportedSize(format!("block split needs n >= 4, got {n}")));
    }
    let field = jd.field().clone();
    let k = jd.nu_support()[0];
    let k1 = (k + 1) % n;
    let mut order = vec![k, k1];
    order.extend((0..n).filter(|&i| i != k && i != k1));
    let j = jd.reconstruct();
    // J' = Q J Qᵀ with J'[a][b] = J[order[a]][order[b]]
    let q = Matrix::from_fn(&field, n, n, |a, b| if order[a] == b { field.one() } else { field.zero() });
    let jp = Matrix::from_fn(&field, n, n, |a, b| j.get(order[a], order[b]).clone());
    let block = jp.submatrix(0..2, 0..2);
    let diag: Vec<_> = (2..n).map(|i| jp.get(i, i).clone()).collect();
    let top = solve_linear_fallback(f, &block, rng, cfg)?.args();
    let rest = if n - 2 >= 3 {
        let zeros = vec![field.zero(); n - 2];
        match solve_core_jn(f, &diag, &zeros, rng, cfg) {
            Ok(w) => w.args(),
            Err(e) if e.is_recoverable() => {
                solve_linear_fallback(f, &Matrix::diagonal(&field, &diag), rng, cfg)?.args()
            }
            Err(e) => return Err(e),
        }
    } else {
        solve_linear_fallback(f, &Matrix::diagonal(&field, &diag), rng, cfg)?.args()
    };
    let qt = q.transpose();
    let glue = |i: usize| -> Result<Matrix, SolveError> {
        let bd = block_diag(&[top[i].clone(), rest[i].clone()])?;
        Ok(&(&qt * &bd) * &q)
    };
    Ok([glue(0)?, glue(1)?, glue(2)?])
}

/// Solves f(X, Y, Z) = T for an arbitrary square target: Jordan reduction
/// first, then the commutator-form and randomized fallbacks when the
/// structured construction does not apply.
pub fn solve_general<R: Rng + ?Sized>(
    f: &MultilinearCubic,
    t: &Matrix,
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<WitnessTriple, SolveError> {
    if !t.is_square() {
        return Err(MatrixError::NotSquare { rows: t.rows(), cols: t.cols() }.into());
    }
    let n = t.rows();
    let field = t.field().clone();
    if t.is_zero() {
        let z = Matrix::zeros(&field, n, n);
        return WitnessTriple::checked(f, [z.clone(), z.clone(), z], t, SolverPath::CoreJn);
    }
    if f.is_zero() {
        return Err(SolveError::OutsideImage("f is zero and the target is not".into()));
    }
    let (ls, ms) = f.coefficient_sums();
    if ls.is_zero() && ms.is_zero() {
        if !t.trace().is_zero() {
            return Err(SolveError::OutsideImage("f takes traceless values only".into()));
        }
        return match solve_traceless_commutator(f, t) {
            Err(e) if e.is_recoverable() => solve_linear_fallback(f, t, rng, cfg),
            other => other,
        };
    }
    let jd = match jordan_form(t) {
        Ok(jd) => jd,
        Err(MatrixError::Unsplittable(_)) => return Err(SolveError::TargetUnsplittable),
        Err(e) => return Err(e.into()),
    };
    match solve_jordan(f, &jd, rng, cfg) {
        Ok(w) => Ok(w),
        Err(e) if e.is_recoverable() => {
            if n >= 3 {
                if let Some(m) = match_commutator_form(f) {
                    if !m.lambda.is_one() {
                        return solve_commutator_form(f, t, rng, cfg);
                    }
                }
            }
            solve_linear_fallback(f, t, rng, cfg)
        }
        Err(e) => Err(e),
    }
}
