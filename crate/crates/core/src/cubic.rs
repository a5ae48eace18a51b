//! Degree-3 multilinear polynomials in the noncommuting variables x, y, z.

use std::fmt;

use crate::field::{FieldDescriptor, FieldElement, FieldError};
use crate::matrix::{Matrix, MatrixError};

/// Monomial names in coefficient order λ₁, λ₂, λ₃, μ₁, μ₂, μ₃.
pub const MONOMIALS: [&str; 6] = ["xyz", "yzx", "zxy", "zyx", "xzy", "yxz"];

/// The same monomials as variable index words (0 = x, 1 = y, 2 = z).
/// Variable indices of each monomial, in coefficient order.
pub const WORDS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0], [0, 2, 1], [1, 0, 2]];

fn slot_of(word: [usize; 3]) -> usize {
    WORDS.iter().position(|w| *w == word).expect("word is a permutation")
}

/// A permutation σ of the three variables, stored as `[σ(0), σ(1), σ(2)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation([usize; 3]);

impl Permutation {
    pub fn new(images: [usize; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(images))
    }

    pub fn identity() -> Self {
        Permutation([0, 1, 2])
    }

    /// x ↦ y ↦ z ↦ x.
    pub fn cycle() -> Self {
        Permutation([1, 2, 0])
    }

    pub fn transposition(a: usize, b: usize) -> Self {
        let mut p = [0, 1, 2];
        p.swap(a, b);
        Permutation(p)
    }

    pub fn all() -> [Permutation; 6] {
        WORDS.map(Permutation)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> [usize; 3] {
        self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation([self.0[other.0[0]], self.0[other.0[1]], self.0[other.0[2]]])
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = [0; 3];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// `(B_σ(0), B_σ(1), B_σ(2))`.
    pub fn select<T: Clone>(&self, args: &[T; 3]) -> [T; 3] {
        [args[self.0[0]].clone(), args[self.0[1]].clone(), args[self.0[2]].clone()]
    }
}

/// f = λ₁xyz + λ₂yzx + λ₃zxy + μ₁zyx + μ₂xzy + μ₃yxz.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultilinearCubic {
    coeffs: [FieldElement; 6],
}

impl MultilinearCubic {
    pub fn new(coeffs: [FieldElement; 6]) -> Result<Self, FieldError> {
        let field = coeffs[0].field().clone();
        for c in &coeffs[1..] {
            if !c.field().same_as(&field) {
                return Err(FieldError::DescriptorMismatch(field.to_string(), c.field().to_string()));
            }
        }
        Ok(MultilinearCubic { coeffs })
    }

    pub fn from_i64(field: &FieldDescriptor, coeffs: [i64; 6]) -> Self {
        MultilinearCubic { coeffs: coeffs.map(|c| field.from_i64(c)) }
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        Self::from_i64(field, [0; 6])
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.coeffs[0].field()
    }

    pub fn coeffs(&self) -> &[FieldElement; 6] {
        &self.coeffs
    }

    pub fn lambda(&self) -> [&FieldElement; 3] {
        [&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]]
    }

    pub fn mu(&self) -> [&FieldElement; 3] {
        [&self.coeffs[3], &self.coeffs[4], &self.coeffs[5]]
    }

    /// Coefficient of a monomial given by name, e.g. `"zxy"`.
    pub fn coeff(&self, monomial: &str) -> Option<&FieldElement> {
        MONOMIALS.iter().position(|m| *m == monomial).map(|i| &self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        MultilinearCubic { coeffs: self.coeffs.clone().map(|a| &a * c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        MultilinearCubic { coeffs: std::array::from_fn(|i| &self.coeffs[i] + &other.coeffs[i]) }
    }

    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<Self, FieldError> {
        let mut out = Vec::with_capacity(6);
        for c in &self.coeffs {
            out.push(c.embed_into(target)?);
        }
        Ok(MultilinearCubic { coeffs: out.try_into().unwrap() })
    }

    /// (λ₁+λ₂+λ₃, μ₁+μ₂+μ₃).
    pub fn coefficient_sums(&self) -> (FieldElement, FieldElement) {
        let l = &(&self.coeffs[0] + &self.coeffs[1]) + &self.coeffs[2];
        let m = &(&self.coeffs[3] + &self.coeffs[4]) + &self.coeffs[5];
        (l, m)
    }

    /// The polynomial g with g(B₀, B₁, B₂) = f(B_σ(0), B_σ(1), B_σ(2)).
    pub fn permute_variables(&self, sigma: &Permutation) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (slot, w) in WORDS.iter().enumerate() {
            let image = [sigma.apply(w[0]), sigma.apply(w[1]), sigma.apply(w[2])];
            coeffs[slot_of(image)] = self.coeffs[slot].clone();
        }
        MultilinearCubic { coeffs }
    }

    /// Coefficients with the field of the matrices (equal, or an extension).
    fn coeffs_in(&self, field: &FieldDescriptor) -> Result<[FieldElement; 6], MatrixError> {
        if self.field().same_as(field) {
            return Ok(self.coeffs.clone());
        }
        if !field.extends(self.field()) {
            return Err(FieldError::DescriptorMismatch(self.field().to_string(), field.to_string()).into());
        }
        Ok(self.embed_into(field)?.coeffs)
    }

    pub fn eval(&self, x: &Matrix, y: &Matrix, z: &Matrix) -> Result<Matrix, MatrixError> {
        let n = x.rows();
        for m in [x, y, z] {
            if m.rows() != n || m.cols() != n {
                return Err(MatrixError::DimensionMismatch(format!(
                    "arguments must all be {n}x{n}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let field = x.field().clone();
        let c = self.coeffs_in(&field)?;
        let args = [x, y, z];
        let mut out = Matrix::zeros(&field, n, n);
        for (slot, w) in WORDS.iter().enumerate() {
            if c[slot].is_zero() {
                continue;
            }
            let prod = args[w[0]].try_mul(args[w[1]])?.try_mul(args[w[2]])?;
            out = out.try_add(&prod.scale(&c[slot]))?;
        }
        Ok(out)
    }

    /// Matrix of Z ↦ f(X, Y, Z) on row-major vec(Z) (index i·n + j).
    pub fn linear_map_in_z(&self, x: &Matrix, y: &Matrix) -> Result<Matrix, MatrixError> {
        let n = x.rows();
        if !x.is_square() || y.rows() != n || y.cols() != n {
            return Err(MatrixError::DimensionMismatch("X and Y must be square of equal size".into()));
        }
        let field = x.field().clone();
        let c = self.coeffs_in(&field)?;
        let id = Matrix::identity(&field, n);
        let args = [x, y];
        // Each monomial is L·Z·R.
        let mut factors: Vec<(FieldElement, Matrix, Matrix)> = Vec::new();
        for (slot, w) in WORDS.iter().enumerate() {
            if c[slot].is_zero() {
                continue;
            }
            let pos = w.iter().position(|&v| v == 2).unwrap();
            let product = |vars: &[usize]| {
                vars.iter().fold(id.clone(), |acc, &v| acc.try_mul(args[v]).expect("square"))
            };
            factors.push((c[slot].clone(), product(&w[..pos]), product(&w[pos + 1..])));
        }
        let nn = n * n;
        Ok(Matrix::from_fn(&field, nn, nn, |row, col| {
            let (i, j) = (row / n, row % n);
            let (k, l) = (col / n, col % n);
            factors.iter().fold(field.zero(), |acc, (coef, left, right)| {
                let a = left.get(i, k);
                let b = right.get(l, j);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(&(coef * a) * b)
                }
            })
        }))
    }
}

impl fmt::Display for MultilinearCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(MONOMIALS)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| format!("({c}){m}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for MultilinearCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearCubic({self})")
    }
}
