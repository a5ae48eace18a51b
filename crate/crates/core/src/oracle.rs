//! Brute-force images of f on M_n(F_q) for tiny n and q.
//!
//! Matrices are packed as base-q integers: entry (i, j) is the digit of
//! weight q^(i·n + j), each digit being the field element's index.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{ImageClassification, Regime, Verdict};
use crate::cubic::{MultilinearCubic, WORDS};
use crate::field::{FieldDescriptor, FieldError};

/// Largest number of triples an exhaustive sweep may cover.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 30;
/// Largest q^(n²) for which a membership bitset is allocated.
pub const MATRIX_LIMIT: u64 = 1 << 26;
/// Random conjugators used when GL_n(F_q) is too large to sweep.
pub const CONJUGATION_SAMPLES: usize = 100;
const FULL_GROUP_LIMIT: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("operation requires an exhaustive image")]
    ModeMismatch,
    #[error("oracle needs a finite field, got {0}")]
    InfiniteField(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl fmt::Display for EnumerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerationMode::Exhaustive => write!(f, "Exhaustive"),
            EnumerationMode::Sampled { count, .. } => write!(f, "Sampled({count})"),
        }
    }
}

/// Addition and multiplication tables of F_q on element indices.
#[derive(Debug, Clone)]
pub struct FqTables {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl FqTables {
    pub fn new(field: &FieldDescriptor) -> Result<Self, OracleError> {
        let q = field.size().ok_or_else(|| OracleError::InfiniteField(field.to_string()))? as usize;
        if q > u16::MAX as usize {
            return Err(OracleError::TooLarge(format!("q = {q}")));
        }
        let els = field.elements();
        let idx = |e: &crate::field::FieldElement| e.index().expect("finite") as u16;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = idx(&(&els[a] + &els[b]));
                mul[a * q + b] = idx(&(&els[a] * &els[b]));
            }
        }
        let neg = els.iter().map(|e| idx(&-e)).collect();
        let inv = els.iter().map(|e| e.inv().map(|i| idx(&i)).unwrap_or(0)).collect();
        Ok(FqTables { q, add, mul, neg, inv })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    fn matmul(&self, n: usize, a: &[u16], b: &[u16]) -> Vec<u16> {
        let mut out = vec![0u16; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = self.add(out[i * n + j], self.mul(aik, b[k * n + j]));
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    fn inverse(&self, n: usize, a: &[u16]) -> Option<Vec<u16>> {
        let w = 2 * n;
        let mut m = vec![0u16; n * w];
        for i in 0..n {
            m[i * w..i * w + n].copy_from_slice(&a[i * n..i * n + n]);
            m[i * w + n + i] = 1;
        }
        for c in 0..n {
            let piv = (c..n).find(|&r| m[r * w + c] != 0)?;
            for k in 0..w {
                m.swap(c * w + k, piv * w + k);
            }
            let s = self.inv[m[c * w + c] as usize];
            for k in 0..w {
                m[c * w + k] = self.mul(m[c * w + k], s);
            }
            for r in 0..n {
                let factor = m[r * w + c];
                if r != c && factor != 0 {
                    let nf = self.neg[factor as usize];
                    for k in 0..w {
                        m[r * w + k] = self.add(m[r * w + k], self.mul(nf, m[c * w + k]));
                    }
                }
            }
        }
        Some((0..n).flat_map(|i| m[i * w + n..i * w + w].to_vec()).collect())
    }

    /// Reduced row echelon basis of the span of `rows`.
    fn rref(&self, mut rows: Vec<Vec<u16>>) -> Vec<Vec<u16>> {
        let Some(width) = rows.first().map(Vec::len) else { return rows };
        let mut rank = 0;
        for c in 0..width {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
            rows.swap(rank, piv);
            let s = self.inv[rows[rank][c] as usize];
            rows[rank] = rows[rank].iter().map(|&e| self.mul(e, s)).collect();
            for r in 0..rows.len() {
                let factor = rows[r][c];
                if r != rank && factor != 0 {
                    let nf = self.neg[factor as usize];
                    let pivot_row = rows[rank].clone();
                    for (e, p) in rows[r].iter_mut().zip(&pivot_row) {
                        *e = self.add(*e, self.mul(nf, *p));
                    }
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        rows
    }
}

/// Membership set of packed n×n matrices over F_q.
#[derive(Clone)]
pub struct ImageSet {
    n: usize,
    field: FieldDescriptor,
    tables: FqTables,
    bits: Vec<u64>,
    mode: EnumerationMode,
}

impl fmt::Debug for ImageSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImageSet")
            .field("n", &self.n)
            .field("q", &self.q())
            .field("size", &self.size())
            .field("mode", &self.mode)
            .finish()
    }
}

fn matrix_count(q: usize, n: usize) -> Result<u64, OracleError> {
    let count = (q as u128).checked_pow((n * n) as u32).filter(|&c| c <= MATRIX_LIMIT as u128);
    count.map(|c| c as u64).ok_or_else(|| OracleError::TooLarge(format!("q^(n^2) = {q}^{} exceeds {MATRIX_LIMIT}", n * n)))
}

impl ImageSet {
    pub fn empty(field: &FieldDescriptor, n: usize, mode: EnumerationMode) -> Result<Self, OracleError> {
        let tables = FqTables::new(field)?;
        let count = matrix_count(tables.q(), n)?;
        Ok(ImageSet { n, field: field.clone(), tables, bits: vec![0; count.div_ceil(64) as usize], mode })
    }

    /// A set built from explicit matrices (entries as element indices, row-major).
    pub fn from_members(
        field: &FieldDescriptor,
        n: usize,
        members: &[Vec<u16>],
        mode: EnumerationMode,
    ) -> Result<Self, OracleError> {
        let mut s = Self::empty(field, n, mode)?;
        for m in members {
            let code = s.pack(m);
            s.insert(code);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.tables.q()
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn mode(&self) -> EnumerationMode {
        self.mode
    }

    pub fn capacity(&self) -> u64 {
        (self.q() as u64).pow((self.n * self.n) as u32)
    }

    pub fn size(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn pack(&self, entries: &[u16]) -> u64 {
        entries.iter().rev().fold(0u64, |acc, &d| acc * self.q() as u64 + d as u64)
    }

    pub fn unpack(&self, mut code: u64) -> Vec<u16> {
        let q = self.q() as u64;
        (0..self.n * self.n)
            .map(|_| {
                let d = code % q;
                code /= q;
                d as u16
            })
            .collect()
    }

    pub fn contains_code(&self, code: u64) -> bool {
        code < self.capacity() && self.bits[(code / 64) as usize] >> (code % 64) & 1 == 1
    }

    pub fn contains(&self, entries: &[u16]) -> bool {
        self.contains_code(self.pack(entries))
    }

    fn insert(&mut self, code: u64) {
        self.bits[(code / 64) as usize] |= 1 << (code % 64);
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w as u64 * 64 + b)
        })
    }

    /// Whether every member of `self` is in `other`.
    pub fn is_subset_of(&self, other: &ImageSet) -> bool {
        self.bits.len() == other.bits.len() && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_trace_zero_contained(&self) -> bool {
        let n = self.n;
        self.members().all(|c| {
            let m = self.unpack(c);
            (0..n).fold(0u16, |acc, i| self.tables.add(acc, m[i * n + i])) == 0
        })
    }

    /// c·S ⊆ S for every nonzero c.
    pub fn is_scalar_closed(&self) -> bool {
        (1..self.q() as u16).all(|c| {
            self.members().all(|code| {
                let m: Vec<u16> = self.unpack(code).iter().map(|&e| self.tables.mul(c, e)).collect();
                self.contains(&m)
            })
        })
    }

    /// P·S·P⁻¹ ⊆ S for all of GL_n(F_q) when it is small, otherwise for
    /// `CONJUGATION_SAMPLES` random P drawn from `seed`.
    pub fn is_conjugation_closed(&self, seed: u64) -> bool {
        let n = self.n;
        let t = &self.tables;
        let members: Vec<Vec<u16>> = self.members().map(|c| self.unpack(c)).collect();
        let closed_under = |p: &[u16]| -> bool {
            let Some(p_inv) = t.inverse(n, p) else { return true };
            members.iter().all(|m| self.contains(&t.matmul(n, &t.matmul(n, p, m), &p_inv)))
        };
        let total = self.capacity();
        if total <= FULL_GROUP_LIMIT {
            (0..total).into_par_iter().all(|c| closed_under(&self.unpack(c)))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found = 0;
            while found < CONJUGATION_SAMPLES {
                let p: Vec<u16> = (0..n * n).map(|_| rng.gen_range(0..self.q() as u16)).collect();
                if t.inverse(n, &p).is_none() {
                    continue;
                }
                found += 1;
                if !closed_under(&p) {
                    return false;
                }
            }
            true
        }
    }

    /// Dimension of the F_q-span of the members.
    pub fn span_rank(&self) -> usize {
        let mut basis: Vec<Vec<u16>> = Vec::new();
        for code in self.members() {
            let mut rows = basis.clone();
            rows.push(self.unpack(code));
            let reduced = self.tables.rref(rows);
            if reduced.len() > basis.len() {
                basis = reduced;
            }
        }
        basis.len()
    }
}

fn coefficient_indices(f: &MultilinearCubic, field: &FieldDescriptor) -> Result<[u16; 6], OracleError> {
    let g = f.embed_into(field)?;
    Ok(g.coeffs().clone().map(|c| c.index().expect("finite field") as u16))
}

/// f(X, Y, Z) on packed entries.
fn eval_packed(t: &FqTables, n: usize, c: &[u16; 6], args: [&[u16]; 3]) -> Vec<u16> {
    let mut out = vec![0u16; n * n];
    for (slot, w) in WORDS.iter().enumerate() {
        if c[slot] == 0 {
            continue;
        }
        let prod = t.matmul(n, &t.matmul(n, args[w[0]], args[w[1]]), args[w[2]]);
        for (o, p) in out.iter_mut().zip(prod) {
            *o = t.add(*o, t.mul(c[slot], p));
        }
    }
    out
}

/// Columns of Z ↦ f(X, Y, Z): column k is f(X, Y, E_k).
fn columns_in_z(t: &FqTables, n: usize, c: &[u16; 6], x: &[u16], y: &[u16]) -> Vec<Vec<u16>> {
    (0..n * n)
        .map(|k| {
            let mut e = vec![0u16; n * n];
            e[k] = 1;
            eval_packed(t, n, c, [x, y, &e])
        })
        .collect()
}

/// Inserts every F_q-combination of `basis`.
fn insert_span(set: &mut ImageSet, basis: &[Vec<u16>]) {
    let q = set.q() as u16;
    let len = set.n * set.n;
    let mut digits = vec![0u16; basis.len()];
    loop {
        let mut v = vec![0u16; len];
        for (d, b) in digits.iter().zip(basis) {
            if *d != 0 {
                for (e, be) in v.iter_mut().zip(b) {
                    *e = set.tables.add(*e, set.tables.mul(*d, *be));
                }
            }
        }
        let code = set.pack(&v);
        set.insert(code);
        let Some(pos) = digits.iter().position(|&d| d + 1 < q) else { break };
        digits[pos] += 1;
        for d in &mut digits[..pos] {
            *d = 0;
        }
    }
}

/// The image f(M_n(F_q)) (exhaustive) or a sampled lower bound of it.
///
/// The exhaustive sweep runs over all (X, Y) and covers every Z at once: the
/// values f(X, Y, ·) form the span of the columns of the linear map in Z, and
/// each distinct span is inserted once per worker.
pub fn enumerate_image(
    f: &MultilinearCubic,
    n: usize,
    field: &FieldDescriptor,
    mode: EnumerationMode,
) -> Result<ImageSet, OracleError> {
    let empty = ImageSet::empty(field, n, mode)?;
    let c = coefficient_indices(f, field)?;
    let count = empty.capacity();
    match mode {
        EnumerationMode::Exhaustive => {
            let triples = (count as u128).pow(3);
            if triples > EXHAUSTIVE_LIMIT {
                return Err(OracleError::TooLarge(format!("{triples} triples exceed {EXHAUSTIVE_LIMIT}")));
            }
            let bits = (0..count)
                .into_par_iter()
                .fold(
                    || (empty.clone(), HashSet::<Vec<Vec<u16>>>::new()),
                    |(mut acc, mut seen), xc| {
                        let x = acc.unpack(xc);
                        for yc in 0..count {
                            let y = acc.unpack(yc);
                            let basis = acc.tables.rref(columns_in_z(&acc.tables, n, &c, &x, &y));
                            if seen.insert(basis.clone()) {
                                insert_span(&mut acc, &basis);
                            }
                        }
                        (acc, seen)
                    },
                )
                .map(|(acc, _)| acc.bits)
                .reduce(
                    || vec![0u64; empty.bits.len()],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                        a
                    },
                );
            Ok(ImageSet { bits, ..empty })
        }
        EnumerationMode::Sampled { count: samples, seed } => {
            let mut set = empty;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = set.q() as u16;
            for _ in 0..samples {
                let mut draw = || -> Vec<u16> { (0..n * n).map(|_| rng.gen_range(0..q)).collect() };
                let (x, y, z) = (draw(), draw(), draw());
                let v = eval_packed(&set.tables, n, &c, [&x, &y, &z]);
                let code = set.pack(&v);
                set.insert(code);
            }
            Ok(set)
        }
    }
}

/// True iff S is closed under addition and scaling, i.e. |S| = q^rank.
pub fn is_linear_subspace(s: &ImageSet) -> Result<bool, OracleError> {
    if s.mode != EnumerationMode::Exhaustive {
        return Err(OracleError::ModeMismatch);
    }
    let size = s.size();
    if size == 0 {
        return Ok(false);
    }
    Ok((s.q() as u64).checked_pow(s.span_rank() as u32) == Some(size))
}

/// The set a verdict predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictedSet {
    Zero,
    TraceZero,
    Full,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetRelation {
    Equal,
    StrictSubset,
    NotContained,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub predicted: PredictedSet,
    pub image_size: u64,
    pub predicted_size: Option<u64>,
    pub relation: Option<SetRelation>,
    /// Whether the verdict's regime covers this finite field.
    pub binding: bool,
    pub notes: Vec<String>,
}

impl CrossCheckReport {
    pub fn agrees(&self) -> Option<bool> {
        self.relation.map(|r| r == SetRelation::Equal)
    }
}

/// Compares an exhaustive image with the set predicted by a classification.
pub fn cross_check(s: &ImageSet, c: &ImageClassification) -> Result<CrossCheckReport, OracleError> {
    if s.mode != EnumerationMode::Exhaustive {
        return Err(OracleError::ModeMismatch);
    }
    let n = s.n;
    let total = s.capacity();
    let q = s.q() as u64;
    let predicted = match c.verdict {
        Verdict::Zero => PredictedSet::Zero,
        Verdict::Traceless => PredictedSet::TraceZero,
        Verdict::Full => PredictedSet::Full,
        Verdict::Undetermined => PredictedSet::Unknown,
    };
    let zero_only = s.size() == 1 && s.contains_code(0);
    let (predicted_size, relation) = match predicted {
        PredictedSet::Zero => {
            let rel = if zero_only { SetRelation::Equal } else { SetRelation::NotContained };
            (Some(1), Some(rel))
        }
        PredictedSet::TraceZero => {
            let size = total / q;
            let rel = if !s.is_trace_zero_contained() {
                SetRelation::NotContained
            } else if s.size() == size {
                SetRelation::Equal
            } else {
                SetRelation::StrictSubset
            };
            (Some(size), Some(rel))
        }
        PredictedSet::Full => {
            let rel = if s.size() == total { SetRelation::Equal } else { SetRelation::StrictSubset };
            (Some(total), Some(rel))
        }
        PredictedSet::Unknown => (None, None),
    };
    let binding = c.regime == Regime::Condition31Field && n >= 4;
    let mut notes = vec![format!(
        "finite field GF({q}) at n = {n}: the char-0 results do not apply; comparison only"
    )];
    if s.is_trace_zero_contained() && !zero_only {
        notes.push("image is contained in the trace-zero subspace".into());
    }
    Ok(CrossCheckReport { predicted, image_size: s.size(), predicted_size, relation, binding, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    fn gf(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime_field(p).unwrap()
    }

    #[test]
    fn xyz_fills_m2_f2() {
        let f2 = gf(2);
        let f = MultilinearCubic::from_i64(&f2, [1, 0, 0, 0, 0, 0]);
        let s = enumerate_image(&f, 2, &f2, EnumerationMode::Exhaustive).unwrap();
        assert_eq!(s.size(), 16);
        assert!(is_linear_subspace(&s).unwrap());
    }

    #[test]
    fn zero_polynomial() {
        let f3 = gf(3);
        let s = enumerate_image(&MultilinearCubic::zero(&f3), 2, &f3, EnumerationMode::Exhaustive).unwrap();
        assert_eq!(s.size(), 1);
        assert!(s.contains_code(0));
        assert!(is_linear_subspace(&s).unwrap());
        let c = classify(&MultilinearCubic::zero(&f3), 2, &f3, None);
        assert_eq!(cross_check(&s, &c).unwrap().agrees(), Some(true));
    }

    #[test]
    fn commutator_like_polynomial_over_f3() {
        let f3 = gf(3);
        let f = MultilinearCubic::from_i64(&f3, [1, -1, 0, 0, 0, 0]);
        let s = enumerate_image(&f, 2, &f3, EnumerationMode::Exhaustive).unwrap();
        assert!(s.is_trace_zero_contained());
        assert!(s.is_scalar_closed());
        assert!(s.is_conjugation_closed(0));
        let c = classify(&f, 2, &f3, None);
        let report = cross_check(&s, &c).unwrap();
        assert_ne!(report.relation, Some(SetRelation::NotContained));
    }

    #[test]
    fn synthetic_non_subspace() {
        let f3 = gf(3);
        let s = ImageSet::from_members(&f3, 2, &[vec![0; 4], vec![1, 0, 0, 0]], EnumerationMode::Exhaustive).unwrap();
        assert!(!is_linear_subspace(&s).unwrap());
        let sampled = ImageSet::from_members(&f3, 2, &[vec![0; 4]], EnumerationMode::Sampled { count: 1, seed: 0 }).unwrap();
        assert_eq!(is_linear_subspace(&sampled), Err(OracleError::ModeMismatch));
    }

    #[test]
    fn sampled_inside_exhaustive_and_monotone() {
        let f3 = gf(3);
        let f = MultilinearCubic::from_i64(&f3, [1, 0, 1, 0, 0, 1]);
        let full = enumerate_image(&f, 2, &f3, EnumerationMode::Exhaustive).unwrap();
        let small = enumerate_image(&f, 2, &f3, EnumerationMode::Sampled { count: 50, seed: 4 }).unwrap();
        let big = enumerate_image(&f, 2, &f3, EnumerationMode::Sampled { count: 500, seed: 4 }).unwrap();
        assert!(small.is_subset_of(&big));
        assert!(big.is_subset_of(&full));
    }

    #[test]
    fn too_large() {
        let f5 = gf(5);
        let f = MultilinearCubic::from_i64(&f5, [1, 0, 0, 0, 0, 0]);
        assert!(matches!(enumerate_image(&f, 3, &f5, EnumerationMode::Exhaustive), Err(OracleError::TooLarge(_))));
    }

    #[test]
    fn pack_round_trip() {
        let s = ImageSet::empty(&gf(5), 2, EnumerationMode::Exhaustive).unwrap();
        let m = vec![4, 0, 3, 1];
        assert_eq!(s.unpack(s.pack(&m)), m);
    }
}
