//! Exact scalar arithmetic over ℚ, the cyclotomic fields ℚ(ζ_n) and the
//! finite fields GF(p^k).
//!
//! A [`FieldDescriptor`] is a cheap-to-clone handle; every [`FieldElement`]
//! carries the handle of the field it lives in. Elements are kept in canonical
//! form (reduced fractions, residues reduced modulo the field modulus), so
//! equality is structural.

mod cyclotomic;
mod gf;
pub mod poly;
pub mod roots;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi};

/// Default half-width of the integer box used by [`FieldDescriptor::sample_nonzero`].
pub const DEFAULT_SAMPLE_BOUND: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("operands belong to different fields ({0} vs {1})")]
    DescriptorMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("value not representable in {field}: {reason}")]
    NotRepresentable { field: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Cyclotomic { order: usize },
    /// GF(p^k) as GF(p)[x]/(modulus); `modulus` is monic with the constant term first.
    FiniteField { p: u64, k: usize, modulus: Vec<u64> },
}

struct Inner {
    kind: FieldKind,
    /// Φ_n with rational coefficients, only for cyclotomic fields.
    cyclotomic_modulus: Vec<BigRational>,
}

/// Shared handle to one concrete field.
#[derive(Clone)]
pub struct FieldDescriptor(Arc<Inner>);

impl FieldDescriptor {
    pub fn rationals() -> Self {
        Self::from_kind_unchecked(FieldKind::Rationals)
    }

    pub fn cyclotomic(order: usize) -> Result<Self, FieldError> {
        if order == 0 {
            return Err(FieldError::InvalidDescriptor(
                "cyclotomic order must be at least 1".into(),
            ));
        }
        Ok(Self::from_kind_unchecked(FieldKind::Cyclotomic { order }))
    }

    /// GF(p) with the trivial modulus `x`.
    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        Self::finite_field(p, 1, None)
    }

    /// GF(p^k). When `modulus` is `None` the first irreducible monic polynomial
    /// in scan order is used, so the choice is reproducible.
    pub fn finite_field(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Self, FieldError> {
        if !gf::is_prime(p) {
            return Err(FieldError::InvalidDescriptor(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(FieldError::InvalidDescriptor("extension degree must be at least 1".into()));
        }
        if (p as f64).powi(k as i32) > 2f64.powi(62) {
            return Err(FieldError::InvalidDescriptor(format!("GF({p}^{k}) is too large")));
        }
        let modulus = match modulus {
            None => gf::default_modulus(p, k),
            Some(m) => {
                if m.len() != k + 1 || m[k] != 1 {
                    return Err(FieldError::InvalidDescriptor(format!(
                        "modulus must be monic of degree {k} (constant term first)"
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(FieldError::InvalidDescriptor(format!(
                        "modulus coefficients must lie in [0, {p})"
                    )));
                }
                if !gf::is_irreducible(&m, p) {
                    return Err(FieldError::InvalidDescriptor(format!(
                        "modulus {m:?} is reducible over GF({p})"
                    )));
                }
                m
            }
        };
        Ok(Self::from_kind_unchecked(FieldKind::FiniteField { p, k, modulus }))
    }

    fn from_kind_unchecked(kind: FieldKind) -> Self {
        let cyclotomic_modulus = match &kind {
            FieldKind::Cyclotomic { order } => cyclotomic_polynomial(*order)
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
            _ => Vec::new(),
        };
        FieldDescriptor(Arc::new(Inner { kind, cyclotomic_modulus }))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    /// 0 for ℚ and ℚ(ζ_n), p for GF(p^k).
    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::FiniteField { p, .. } => *p,
            _ => 0,
        }
    }

    /// Dimension over the prime field (ℚ or GF(p)).
    pub fn degree(&self) -> usize {
        match self.kind() {
            FieldKind::Rationals => 1,
            FieldKind::Cyclotomic { .. } => self.0.cyclotomic_modulus.len() - 1,
            FieldKind::FiniteField { k, .. } => *k,
        }
    }

    /// Number of elements, `None` for infinite fields.
    pub fn size(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::FiniteField { p, k, .. } => Some(p.pow(*k as u32)),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    pub fn zero(&self) -> FieldElement {
        let value = match self.kind() {
            FieldKind::Rationals => Value::Rational(BigRational::zero()),
            FieldKind::Cyclotomic { .. } => Value::Cyclotomic(vec![BigRational::zero(); self.degree()]),
            FieldKind::FiniteField { k, .. } => Value::Finite(vec![0; *k]),
        };
        FieldElement { field: self.clone(), value }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_rational(&BigRational::from_integer(BigInt::from(v)))
            .expect("integers embed in every field")
    }

    /// Image of a rational number; fails in characteristic p when the
    /// denominator is divisible by p.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElement, FieldError> {
        let value = match self.kind() {
            FieldKind::Rationals => Value::Rational(r.clone()),
            FieldKind::Cyclotomic { .. } => {
                let mut c = vec![BigRational::zero(); self.degree()];
                c[0] = r.clone();
                // Φ_1 = x - 1 and Φ_2 = x + 1 have degree 1, so c has length 1 there too.
                Value::Cyclotomic(c)
            }
            FieldKind::FiniteField { p, k, .. } => {
                let num = reduce_bigint(r.numer(), *p);
                let den = reduce_bigint(r.denom(), *p);
                if den == 0 {
                    return Err(FieldError::NotRepresentable {
                        field: self.to_string(),
                        reason: format!("denominator of {r} vanishes mod {p}"),
                    });
                }
                let mut c = vec![0u64; *k];
                c[0] = gf::mul_mod(num, gf::inv_mod(den, *p), *p);
                Value::Finite(c)
            }
        };
        Ok(FieldElement { field: self.clone(), value })
    }

    /// Element from its coordinate vector in the power basis
    /// (`1, ζ, …` or `1, x, …`). Cyclotomic coordinates of any length are reduced
    /// modulo Φ_n; finite-field coordinates are reduced modulo p and the modulus.
    pub fn from_coefficients_rational(&self, coeffs: &[BigRational]) -> Result<FieldElement, FieldError> {
        match self.kind() {
            FieldKind::Rationals => {
                let mut acc = BigRational::zero();
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 && !c.is_zero() {
                        return Err(FieldError::NotRepresentable {
                            field: self.to_string(),
                            reason: "rational elements have a single coordinate".into(),
                        });
                    }
                    acc += c;
                }
                Ok(FieldElement { field: self.clone(), value: Value::Rational(acc) })
            }
            FieldKind::Cyclotomic { .. } => {
                let reduced = cyclotomic::rem_monic(coeffs, &self.0.cyclotomic_modulus);
                Ok(FieldElement { field: self.clone(), value: Value::Cyclotomic(reduced) })
            }
            FieldKind::FiniteField { .. } => {
                let mut acc = self.zero();
                let x = self.generator();
                let mut power = self.one();
                for c in coeffs {
                    acc = &acc + &(&self.from_rational(c)? * &power);
                    power = &power * &x;
                }
                Ok(acc)
            }
        }
    }

    /// Finite-field element from integer coordinates (constant term first).
    pub fn from_coefficients_u64(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        let as_rat: Vec<BigRational> =
            coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        self.from_coefficients_rational(&as_rat)
    }

    /// ζ_n for cyclotomic fields, the class of x for GF(p^k), 1 for ℚ.
    pub fn generator(&self) -> FieldElement {
        match self.kind() {
            FieldKind::Rationals => self.one(),
            FieldKind::Cyclotomic { .. } => {
                let x = vec![BigRational::zero(), BigRational::one()];
                let reduced = cyclotomic::rem_monic(&x, &self.0.cyclotomic_modulus);
                FieldElement { field: self.clone(), value: Value::Cyclotomic(reduced) }
            }
            FieldKind::FiniteField { p, k, modulus } => {
                if *k == 1 {
                    // x mod (x - c) = c
                    let c = (p - modulus[0]) % p;
                    return FieldElement { field: self.clone(), value: Value::Finite(vec![c]) };
                }
                let mut c = vec![0u64; *k];
                c[1] = 1;
                FieldElement { field: self.clone(), value: Value::Finite(c) }
            }
        }
    }

    /// The element whose base-p digits (constant coordinate least significant)
    /// spell `index`. Only meaningful for finite fields.
    pub fn element_from_index(&self, index: u64) -> FieldElement {
        match self.kind() {
            FieldKind::FiniteField { p, k, .. } => {
                let mut c = vec![0u64; *k];
                let mut rest = index;
                for slot in c.iter_mut() {
                    *slot = rest % p;
                    rest /= p;
                }
                FieldElement { field: self.clone(), value: Value::Finite(c) }
            }
            _ => panic!("element_from_index on an infinite field"),
        }
    }

    /// All elements of a finite field in index order.
    pub fn elements(&self) -> Vec<FieldElement> {
        let q = self.size().expect("elements() requires a finite field");
        (0..q).map(|i| self.element_from_index(i)).collect()
    }

    /// A random element: integer coordinates uniform in `[-bound, bound]` for
    /// ℚ and ℚ(ζ_n), uniform over the whole field for GF(p^k). May be zero.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> FieldElement {
        match self.kind() {
            FieldKind::Rationals => self.from_i64(rng.gen_range(-bound..=bound)),
            FieldKind::Cyclotomic { .. } => {
                let coeffs = (0..self.degree())
                    .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
                    .collect();
                FieldElement { field: self.clone(), value: Value::Cyclotomic(coeffs) }
            }
            FieldKind::FiniteField { p, k, .. } => {
                let c = (0..*k).map(|_| rng.gen_range(0..*p)).collect();
                FieldElement { field: self.clone(), value: Value::Finite(c) }
            }
        }
    }

    /// A random nonzero element drawn as in [`sample`](Self::sample) with zero
    /// rejected.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> FieldElement {
        assert!(bound >= 1 || self.is_finite(), "sampling box must contain a nonzero value");
        if let FieldKind::FiniteField { .. } = self.kind() {
            let q = self.size().unwrap();
            return self.element_from_index(rng.gen_range(1..q));
        }
        loop {
            let e = self.sample(rng, bound);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// `n` pairwise distinct elements, or `None` when the field is too small.
    /// Uses `0, 1, …, n-1` whenever those are distinct.
    pub fn distinct_elements(&self, n: usize) -> Option<Vec<FieldElement>> {
        let p = self.characteristic();
        if p == 0 || (n as u64) <= p {
            return Some((0..n).map(|i| self.from_i64(i as i64)).collect());
        }
        let q = self.size().unwrap();
        if (n as u64) > q {
            return None;
        }
        Some((0..n as u64).map(|i| self.element_from_index(i)).collect())
    }

    /// Whether `self` is the same field as `other` (same kind and parameters).
    pub fn same_as(&self, other: &FieldDescriptor) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }

    /// Whether elements of `other` embed canonically into `self`.
    pub fn extends(&self, other: &FieldDescriptor) -> bool {
        if self.same_as(other) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (FieldKind::Cyclotomic { .. }, FieldKind::Rationals) => true,
            (FieldKind::Cyclotomic { order: big }, FieldKind::Cyclotomic { order: small }) => {
                big % small == 0 || (small % 2 == 1 && big % (2 * small) == 0) || other.degree() == 1
            }
            (FieldKind::Rationals, FieldKind::Cyclotomic { .. }) => other.degree() == 1,
            (FieldKind::FiniteField { p, .. }, FieldKind::FiniteField { p: q, k: 1, .. }) => p == q,
            _ => false,
        }
    }

    pub(crate) fn cyclotomic_modulus(&self) -> &[BigRational] {
        &self.0.cyclotomic_modulus
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FieldDescriptor {}

impl Hash for FieldDescriptor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Cyclotomic { order } => write!(f, "Q(zeta_{order})"),
            FieldKind::FiniteField { p, k: 1, .. } => write!(f, "GF({p})"),
            FieldKind::FiniteField { p, k, .. } => write!(f, "GF({p}^{k})"),
        }
    }
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Value {
    Rational(BigRational),
    /// Residue modulo Φ_n, exactly `deg Φ_n` coordinates.
    Cyclotomic(Vec<BigRational>),
    /// Residue modulo the field modulus, exactly `k` coordinates in `[0, p)`.
    Finite(Vec<u64>),
}

/// An element of a [`FieldDescriptor`] in canonical form.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldDescriptor,
    value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic on two elements of the same field.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Cyclotomic(c) => c.iter().all(Zero::is_zero),
            Value::Finite(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    fn check_same(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(FieldError::DescriptorMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    fn with_value(&self, value: Value) -> FieldElement {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::Cyclotomic(a), Value::Cyclotomic(b)) => {
                Value::Cyclotomic(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Value::Finite(a), Value::Finite(b)) => {
                let p = self.field.characteristic();
                Value::Finite(a.iter().zip(b).map(|(&x, &y)| gf::add_mod(x, y, p)).collect())
            }
            _ => unreachable!("payload kind follows the descriptor"),
        };
        Ok(self.with_value(value))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a - b),
            (Value::Cyclotomic(a), Value::Cyclotomic(b)) => {
                Value::Cyclotomic(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            (Value::Finite(a), Value::Finite(b)) => {
                let p = self.field.characteristic();
                Value::Finite(a.iter().zip(b).map(|(&x, &y)| gf::sub_mod(x, y, p)).collect())
            }
            _ => unreachable!("payload kind follows the descriptor"),
        };
        Ok(self.with_value(value))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::Cyclotomic(a), Value::Cyclotomic(b)) => {
                let modulus = self.field.cyclotomic_modulus();
                Value::Cyclotomic(cyclotomic::mul_mod(a, b, modulus))
            }
            (Value::Finite(a), Value::Finite(b)) => {
                let FieldKind::FiniteField { p, modulus, .. } = self.field.kind() else {
                    unreachable!()
                };
                Value::Finite(gf::mul_residue(a, b, modulus, *p))
            }
            _ => unreachable!("payload kind follows the descriptor"),
        };
        Ok(self.with_value(value))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(a.recip()),
            Value::Cyclotomic(a) => {
                let inv = cyclotomic::inverse_mod(a, self.field.cyclotomic_modulus())
                    .expect("nonzero residues are invertible modulo an irreducible polynomial");
                Value::Cyclotomic(inv)
            }
            Value::Finite(a) => {
                let p = self.field.characteristic();
                if a.len() == 1 {
                    Value::Finite(vec![gf::inv_mod(a[0], p)])
                } else {
                    let q = self.field.size().unwrap();
                    return Ok(self.pow(q - 2));
                }
            }
        };
        Ok(self.with_value(value))
    }

    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Power with a possibly negative exponent; panics on `0^negative`.
    pub fn pow_i64(&self, exp: i64) -> FieldElement {
        if exp >= 0 {
            self.pow(exp as u64)
        } else {
            self.inv().expect("negative power of zero").pow(exp.unsigned_abs())
        }
    }

    /// Rational value, when the element lies in the prime field ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r.clone()),
            Value::Cyclotomic(c) => {
                if c.iter().skip(1).all(Zero::is_zero) {
                    Some(c[0].clone())
                } else {
                    None
                }
            }
            Value::Finite(_) => None,
        }
    }

    /// Power-basis coordinates for ℚ(ζ_n) (a single coordinate for ℚ).
    pub fn rational_coordinates(&self) -> Option<Vec<BigRational>> {
        match &self.value {
            Value::Rational(r) => Some(vec![r.clone()]),
            Value::Cyclotomic(c) => Some(c.clone()),
            Value::Finite(_) => None,
        }
    }

    /// Power-basis coordinates for GF(p^k).
    pub fn finite_coordinates(&self) -> Option<&[u64]> {
        match &self.value {
            Value::Finite(c) => Some(c),
            _ => None,
        }
    }

    /// Base-p index of a finite-field element (inverse of
    /// [`FieldDescriptor::element_from_index`]).
    pub fn index(&self) -> Option<u64> {
        let p = self.field.characteristic();
        self.finite_coordinates()
            .map(|c| c.iter().rev().fold(0u64, |acc, &d| acc * p + d))
    }

    /// Canonical image in `target`, which must extend this element's field.
    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<FieldElement, FieldError> {
        if self.field.same_as(target) {
            return Ok(FieldElement { field: target.clone(), value: self.value.clone() });
        }
        let fail = |reason: &str| FieldError::NotRepresentable {
            field: target.to_string(),
            reason: format!("cannot embed {} from {}: {reason}", self, self.field),
        };
        match (&self.value, target.kind()) {
            (Value::Rational(r), _) => target.from_rational(r),
            (Value::Cyclotomic(_), FieldKind::Rationals) => match self.as_rational() {
                Some(r) => target.from_rational(&r),
                None => Err(fail("element is not rational")),
            },
            (Value::Cyclotomic(c), FieldKind::Cyclotomic { order: big }) => {
                let FieldKind::Cyclotomic { order: small } = self.field.kind() else { unreachable!() };
                // ζ_small = ζ_big^(big/small), or -ζ_big^(big/(2 small)) for odd small.
                let image_of_zeta = if big % small == 0 {
                    target.generator().pow((big / small) as u64)
                } else if small % 2 == 1 && big % (2 * small) == 0 {
                    -target.generator().pow((big / (2 * small)) as u64)
                } else if self.field.degree() == 1 {
                    let FieldKind::Cyclotomic { order } = self.field.kind() else { unreachable!() };
                    target.from_i64(if *order == 1 { 1 } else { -1 })
                } else {
                    return Err(fail("orders are incompatible"));
                };
                let mut acc = target.zero();
                let mut power = target.one();
                for coeff in c {
                    acc = &acc + &(&target.from_rational(coeff)? * &power);
                    power = &power * &image_of_zeta;
                }
                Ok(acc)
            }
            (Value::Finite(c), FieldKind::FiniteField { p, .. }) => {
                if self.field.characteristic() != *p || c.len() != 1 {
                    return Err(fail("only the prime field embeds"));
                }
                Ok(target.from_i64(c[0] as i64))
            }
            _ => Err(fail("no canonical embedding")),
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.value == other.value
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) => write!(f, "{r}"),
            Value::Cyclotomic(c) => write_poly(f, c.iter().map(|x| (x.is_zero(), x.is_one(), x.is_negative(), x.to_string())), "z"),
            Value::Finite(c) if c.len() == 1 => write!(f, "{}", c[0]),
            Value::Finite(c) => write_poly(f, c.iter().map(|&x| (x == 0, x == 1, false, x.to_string())), "a"),
        }
    }
}

fn write_poly(
    f: &mut fmt::Formatter<'_>,
    coeffs: impl Iterator<Item = (bool, bool, bool, String)>,
    var: &str,
) -> fmt::Result {
    let mut terms = Vec::new();
    for (i, (zero, one, negative, text)) in coeffs.enumerate() {
        if zero {
            continue;
        }
        let monomial = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = if i == 0 {
            text
        } else if one {
            monomial
        } else if negative && text == "-1" {
            format!("-{monomial}")
        } else {
            format!("{text}*{monomial}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        return write!(f, "0");
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
                continue;
            }
            out.push_str(" + ");
        }
        out.push_str(t);
    }
    write!(f, "{out}")
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, try_add);
impl_binop!(Sub, sub, try_sub);
impl_binop!(Mul, mul, try_mul);
impl_binop!(Div, div, try_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        &self.field.zero() - self
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// All solutions of `x^n = 1` in `field`, each listed once, starting with 1.
///
/// ℚ yields `{1}` or `{1, -1}`; ℚ(ζ_m) yields the `±ζ_m^j` whose n-th power is
/// one (listed by j, positive sign first); GF(q) yields the gcd(n, q-1)
/// powers of a primitive element sorted by index.
pub fn nth_roots_of_unity(field: &FieldDescriptor, n: usize) -> Vec<FieldElement> {
    assert!(n >= 1, "root order must be positive");
    let one = field.one();
    match field.kind() {
        FieldKind::Rationals => {
            if n % 2 == 0 {
                vec![one.clone(), -one]
            } else {
                vec![one]
            }
        }
        FieldKind::Cyclotomic { order } => {
            let zeta = field.generator();
            let mut out: Vec<FieldElement> = Vec::new();
            let mut power = field.one();
            let mut candidates = Vec::with_capacity(2 * order);
            for _ in 0..*order {
                candidates.push(power.clone());
                power = &power * &zeta;
            }
            let negatives: Vec<FieldElement> = candidates.iter().map(|c| -c).collect();
            candidates.extend(negatives);
            for c in candidates {
                if c.pow(n as u64) == one && !out.contains(&c) {
                    out.push(c);
                }
            }
            out
        }
        FieldKind::FiniteField { .. } => {
            let q = field.size().unwrap();
            let g = (n as u64).gcd(&(q - 1));
            let gamma = primitive_element(field);
            let step = gamma.pow((q - 1) / g);
            let mut out = Vec::with_capacity(g as usize);
            let mut r = field.one();
            for _ in 0..g {
                out.push(r.clone());
                r = &r * &step;
            }
            out.sort_by_key(|e| e.index().unwrap());
            out
        }
    }
}

/// Generator of the multiplicative group of a finite field (smallest index).
pub fn primitive_element(field: &FieldDescriptor) -> FieldElement {
    let q = field.size().expect("primitive_element requires a finite field");
    if q == 2 {
        return field.one();
    }
    let factors = gf::prime_factors((q - 1) as u128);
    (1..q)
        .map(|i| field.element_from_index(i))
        .find(|g| factors.iter().all(|&r| !g.pow(((q - 1) as u128 / r) as u64).is_one()))
        .expect("multiplicative group of a finite field is cyclic")
}
