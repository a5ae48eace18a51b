//! Randomized fallback: fix two arguments at random and solve the linear
//! system in the third.

use rand::Rng;

use super::{SolveError, SolverConfig, SolverPath, WitnessTriple};
use crate::cubic::{MultilinearCubic, Permutation};
use crate::field::FieldDescriptor;
use crate::matrix::{Matrix, Solution};

/// How the two fixed arguments are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleShape {
    General,
    Traceless,
    Diagonal,
}

impl SampleShape {
    const CYCLE: [SampleShape; 3] = [SampleShape::General, SampleShape::Traceless, SampleShape::Diagonal];

    fn draw<R: Rng + ?Sized>(self, field: &FieldDescriptor, n: usize, rng: &mut R, bound: i64) -> Matrix {
        match self {
            SampleShape::General => Matrix::random(field, n, n, rng, bound),
            SampleShape::Traceless => {
                let mut m = Matrix::random(field, n, n, rng, bound);
                let rest = (0..n - 1).fold(field.zero(), |acc, i| &acc + m.get(i, i));
                m.set(n - 1, n - 1, -rest);
                m
            }
            SampleShape::Diagonal => {
                let d: Vec<_> = (0..n).map(|_| field.sample(rng, bound)).collect();
                Matrix::diagonal(field, &d)
            }
        }
    }
}

/// Round t uses shape t mod 3 and leaves argument (t / 3) mod 3 free.
pub fn solve_linear_fallback<R: Rng + ?Sized>(
    f: &MultilinearCubic,
    t: &Matrix,
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<WitnessTriple, SolveError> {
    if !t.is_square() {
        return Err(crate::matrix::MatrixError::NotSquare { rows: t.rows(), cols: t.cols() }.into());
    }
    let n = t.rows();
    let field = t.field().clone();
    let rhs = t.vec();
    for round in 0..cfg.fallback_tries {
        let shape = SampleShape::CYCLE[round % 3];
        let free = (round / 3) % 3;
        let tau = Permutation::transposition(free, 2);
        let g = f.permute_variables(&tau);
        let x = shape.draw(&field, n, rng, cfg.bound);
        let y = shape.draw(&field, n, rng, cfg.bound);
        let map = g.linear_map_in_z(&x, &y)?;
        if let Solution::Solved(v) = map.solve(&rhs)? {
            let z = Matrix::from_vec(&field, n, n, v);
            let args = tau.select(&[x, y, z]);
            return WitnessTriple::checked(f, args, t, SolverPath::LinearFallback);
        }
    }
    Err(SolveError::Exhausted { tries: cfg.fallback_tries })
}
