//! Jordan normal form over the coefficient field, when the characteristic
//! polynomial splits there.

use crate::field::roots::split_roots;
use crate::field::FieldDescriptor;

use super::{Matrix, MatrixError, Vector};

/// Membership of a Jordan-coordinate target in the solver's classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetClass {
    /// Superdiagonal support of size 0 or at least 2.
    InJn,
    /// Exactly one superdiagonal entry is nonzero.
    SingleTwoBlock,
}

/// A target in Jordan coordinates: diagonal `d`, cyclic superdiagonal `nu`
/// (slot `n-1` is the wraparound entry at position (n-1, 0)) and an optional
/// change of basis `p` with target = p · J · p⁻¹.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanData {
    pub d: Vector,
    pub nu: Vector,
    pub p: Option<Matrix>,
}

impl JordanData {
    pub fn new(d: Vector, nu: Vector, p: Option<Matrix>) -> Result<Self, MatrixError> {
        let n = d.len();
        if n == 0 || nu.len() != n {
            return Err(MatrixError::DimensionMismatch(format!(
                "diagonal of length {n} with superdiagonal of length {}",
                nu.len()
            )));
        }
        let field = d[0].field().clone();
        if d.iter().chain(&nu).any(|e| !e.field().same_as(&field)) {
            return Err(MatrixError::DimensionMismatch("mixed fields in Jordan data".into()));
        }
        if let Some(p) = &p {
            if p.rows() != n || p.cols() != n {
                return Err(MatrixError::DimensionMismatch(format!("change of basis must be {n}x{n}")));
            }
            if p.det()?.is_zero() {
                return Err(MatrixError::Singular);
            }
        }
        Ok(JordanData { d, nu, p })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.d[0].field()
    }

    /// Σ d_i e_ii + Σ ν_i e_{i,i+1 mod n}.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n();
        let mut m = Matrix::diagonal(self.field(), &self.d);
        for i in 0..n {
            let j = (i + 1) % n;
            let v = m.get(i, j) + &self.nu[i];
            m.set(i, j, v);
        }
        m
    }

    /// The target in original coordinates.
    pub fn target(&self) -> Matrix {
        let j = self.reconstruct();
        match &self.p {
            None => j,
            Some(p) => &(p * &j) * &p.inverse().expect("invertible change of basis"),
        }
    }

    pub fn nu_support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.nu[i].is_zero()).collect()
    }

    pub fn classify_target(&self) -> TargetClass {
        if self.nu_support().len() == 1 {
            TargetClass::SingleTwoBlock
        } else {
            TargetClass::InJn
        }
    }
}

/// Jordan form of `m` with blocks grouped by eigenvalue in discovery order and
/// sizes descending within each eigenvalue. The returned `p` satisfies
/// `p⁻¹ · m · p = reconstruct()`.
pub fn jordan_form(m: &Matrix) -> Result<JordanData, MatrixError> {
    let n = m.require_square()?;
    let field = m.field().clone();
    let cp = m.charpoly()?;
    let eigen = split_roots(&cp).ok_or_else(|| MatrixError::Unsplittable(field.to_string()))?;
    let mut columns: Vec<Vector> = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    for (lambda, mult) in eigen {
        let nmat = m - &Matrix::identity(&field, n).scale(&lambda);
        // N^j and ker N^j until the generalized eigenspace is reached.
        let mut powers = vec![Matrix::identity(&field, n)];
        let mut kernels: Vec<Vec<Vector>> = vec![Vec::new()];
        while kernels.last().unwrap().len() < mult {
            let next = powers.last().unwrap() * &nmat;
            kernels.push(next.kernel_basis());
            powers.push(next);
        }
        let top = kernels.len() - 1;
        let mut heads: Vec<(Vector, usize)> = Vec::new();
        for level in (1..=top).rev() {
            let mut span: Vec<Vector> = kernels[level - 1].clone();
            for (w, l) in &heads {
                span.push(powers[l - level].mul_vec(w)?);
            }
            let mut rank = rank_of(&field, n, &span);
            for b in &kernels[level] {
                span.push(b.clone());
                let r = rank_of(&field, n, &span);
                if r > rank {
                    rank = r;
                    heads.push((b.clone(), level));
                } else {
                    span.pop();
                }
            }
        }
        for (w, l) in &heads {
            for k in (0..*l).rev() {
                columns.push(powers[k].mul_vec(w)?);
                d.push(lambda.clone());
                nu.push(if k > 0 { field.one() } else { field.zero() });
            }
        }
    }
    debug_assert_eq!(columns.len(), n);
    let p = Matrix::from_columns(&field, n, &columns);
    let jd = JordanData { d, nu, p: Some(p) };
    let p = jd.p.as_ref().unwrap();
    assert_eq!(m * p, p * &jd.reconstruct(), "Jordan basis failed verification");
    Ok(jd)
}

fn rank_of(field: &FieldDescriptor, n: usize, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(field, n, vectors).rank()
}
