//! Image classification of a cubic in M_n(K), K an algebraic closure of the
//! coefficient field, and the per-rotation obstruction cases of the diagonal /
//! superdiagonal construction.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::cubic::{MultilinearCubic, Permutation};
use crate::field::{nth_roots_of_unity, FieldDescriptor, FieldElement, DEFAULT_SAMPLE_BOUND};
use crate::matrix::Matrix;
use crate::structured::check_condition_31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Zero,
    Traceless,
    Full,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Char0AlgClosed,
    Condition31Field,
    OutOfHypotheses,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageClassification {
    pub verdict: Verdict,
    pub regime: Regime,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Determines the hypothesis regime for (F, n) without looking at f.
pub fn regime_for(field: &FieldDescriptor, n: usize) -> (Regime, Vec<String>) {
    let p = field.characteristic();
    let mut notes = Vec::new();
    if p == 0 {
        return (Regime::Char0AlgClosed, notes);
    }
    if p == 2 || p == 3 {
        notes.push(format!("characteristic {p} is excluded"));
        return (Regime::OutOfHypotheses, notes);
    }
    if n < 4 {
        notes.push(format!("n = {n} < 4 in positive characteristic"));
        return (Regime::OutOfHypotheses, notes);
    }
    let verdict = check_condition_31(field, n);
    if verdict.holds {
        let q = field.size().unwrap();
        if gcd(n as u64, q - 1) == 1 {
            notes.push(format!("n = {n} is coprime to {}: 1 is the only n-th root of unity in {field}", q - 1));
        }
        (Regime::Condition31Field, notes)
    } else {
        let w = verdict.witness.unwrap();
        notes.push(format!("root-of-unity condition fails at ({}, {}, {})", w[0], w[1], w[2]));
        (Regime::OutOfHypotheses, notes)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Classifies the image of f in M_n(K). A `requested` regime is honoured
/// only when its hypotheses are established for (F, n).
pub fn classify(f: &MultilinearCubic, n: usize, field: &FieldDescriptor, requested: Option<Regime>) -> ImageClassification {
    assert!(n >= 1, "matrix size must be positive");
    let (mut regime, mut notes) = regime_for(field, n);
    if let Some(r) = requested {
        if r != regime {
            notes.push(format!("requested regime {r} is not established for {field}, n = {n}"));
            regime = Regime::OutOfHypotheses;
        }
    }
    if f.is_zero() {
        notes.push("f is the zero polynomial".into());
        return ImageClassification { verdict: Verdict::Zero, regime, notes };
    }
    let (ls, ms) = f.coefficient_sums();
    let traceless = ls.is_zero() && ms.is_zero();
    // On 1x1 matrices f(x,y,z) = (λ-sum + μ-sum)·xyz.
    let scalar_zero = n == 1 && (&ls + &ms).is_zero();
    let verdict = match regime {
        Regime::OutOfHypotheses => Verdict::Undetermined,
        _ if traceless || scalar_zero => {
            if n == 1 {
                notes.push("sl_1 = {0}".into());
            } else {
                notes.push("coefficient sums vanish: the image is exactly sl_n".into());
            }
            Verdict::Traceless
        }
        Regime::Char0AlgClosed => {
            match n {
                1 => notes.push("1x1 case: f(a,b,c) = (sum of coefficients)·abc".into()),
                2 => notes.push("n = 2: known classification of multilinear images on 2x2 matrices".into()),
                3 => notes.push("n = 3: known result for trilinear images on 3x3 matrices".into()),
                _ => notes.push("n >= 4: Jordan forms covered by the diagonal/superdiagonal construction".into()),
            }
            Verdict::Full
        }
        Regime::Condition31Field => {
            notes.push("n >= 4, characteristic not 2 or 3, root-of-unity condition holds".into());
            Verdict::Full
        }
    };
    ImageClassification { verdict, regime, notes }
}

/// The three rotations ρ ∈ {id, (123), (132)} acting on coefficient indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rotation {
    Id,
    R123,
    R132,
}

impl Rotation {
    pub const ALL: [Rotation; 3] = [Rotation::Id, Rotation::R123, Rotation::R132];

    /// (ρ(1), ρ(2), ρ(3)) as 0-based indices.
    pub fn indices(self) -> [usize; 3] {
        match self {
            Rotation::Id => [0, 1, 2],
            Rotation::R123 => [1, 2, 0],
            Rotation::R132 => [2, 0, 1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rotation::Id => "id",
            Rotation::R123 => "(123)",
            Rotation::R132 => "(132)",
        }
    }

    /// The variable permutation σ with λ(permute_variables(f, σ))_i = λ_{ρ(i)}.
    pub fn variable_permutation(self) -> Permutation {
        match self {
            Rotation::Id => Permutation::identity(),
            Rotation::R132 => Permutation::cycle(),
            Rotation::R123 => Permutation::cycle().compose(&Permutation::cycle()),
        }
    }
}

/// Which of the four obstruction cases hold for one rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationCases {
    pub rotation: Rotation,
    /// Case (i) with the first witnessing root of unity.
    pub case_i: Option<FieldElement>,
    pub case_ii: bool,
    pub case_iii: bool,
    pub case_iv: bool,
}

impl RotationCases {
    pub fn any(&self) -> bool {
        self.case_i.is_some() || self.case_ii || self.case_iii || self.case_iv
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub rotations: [RotationCases; 3],
}

impl CaseReport {
    /// First rotation for which no case holds.
    pub fn working_rotation(&self) -> Option<Rotation> {
        self.rotations.iter().find(|r| !r.any()).map(|r| r.rotation)
    }
}

/// Evaluates the four cases for each rotation. Roots of unity are taken from
/// the coefficient field of f.
pub fn case_analysis(f: &MultilinearCubic, n: usize) -> CaseReport {
    let roots = nth_roots_of_unity(f.field(), n);
    let rotations = Rotation::ALL.map(|rho| {
        let [a, b, c] = rho.indices();
        let l = f.lambda();
        let m = f.mu();
        let (l1, l2, l3) = (l[a], l[b], l[c]);
        let (m1, m2, m3) = (m[a], m[b], m[c]);
        let case_i = roots
            .iter()
            .find(|w| {
                (&(l1 + l2) + &(*w * l3)).is_zero() && (&(m1 + m2) + &(&w.inv().unwrap() * m3)).is_zero()
            })
            .cloned();
        let case_ii = (&(l1 + l2) + &(m1 + m2)).is_zero() && l3.is_zero() && m3.is_zero();
        let case_iii = (l1 + l2).is_zero() && (m1 + m2).is_zero() && (l3 + m3).is_zero();
        let case_iv = l1.is_zero() && m1.is_zero() && (m2 + l3).is_zero() && (l2 + m3).is_zero();
        RotationCases { rotation: rho, case_i, case_ii, case_iii, case_iv }
    });
    CaseReport { rotations }
}

/// Spot check that f takes traceless values on `trials` random triples.
pub fn verify_traceless_claim<R: Rng + ?Sized>(
    f: &MultilinearCubic,
    n: usize,
    field: &FieldDescriptor,
    trials: usize,
    rng: &mut R,
) -> Result<bool, ClassifyError> {
    let (ls, ms) = f.coefficient_sums();
    if !(ls.is_zero() && ms.is_zero()) {
        return Err(ClassifyError::PreconditionViolated("coefficient sums are not both zero".into()));
    }
    for _ in 0..trials {
        let [x, y, z] = [0, 1, 2].map(|_| Matrix::random(field, n, n, rng, DEFAULT_SAMPLE_BOUND));
        let value = f.eval(&x, &y, &z).map_err(|e| ClassifyError::PreconditionViolated(e.to_string()))?;
        if !value.trace().is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    #[test]
    fn classify_examples() {
        let f = q();
        let c = classify(&MultilinearCubic::zero(&f), 3, &f, None);
        assert_eq!(c.verdict, Verdict::Zero);
        let comm = MultilinearCubic::from_i64(&f, [1, -1, 0, 0, 0, 0]);
        let c = classify(&comm, 5, &f, None);
        assert_eq!((c.verdict, c.regime), (Verdict::Traceless, Regime::Char0AlgClosed));
        let kh = MultilinearCubic::from_i64(&f, [1, 0, 0, -1, 0, 0]);
        assert_eq!(classify(&kh, 6, &f, None).verdict, Verdict::Full);
        let xyz = MultilinearCubic::from_i64(&f, [1, 0, 0, 0, 0, 0]);
        assert_eq!(classify(&xyz, 5, &f, None).verdict, Verdict::Full);
    }

    #[test]
    fn positive_characteristic_regimes() {
        let xyz = |f: &FieldDescriptor| MultilinearCubic::from_i64(f, [1, 0, 0, 0, 0, 0]);
        let g5 = FieldDescriptor::prime_field(5).unwrap();
        // 4 | n: every nonzero residue is a root of unity and the condition fails
        let c = classify(&xyz(&g5), 4, &g5, None);
        assert_eq!((c.verdict, c.regime), (Verdict::Undetermined, Regime::OutOfHypotheses));
        // gcd(5, 4) = 1
        let c = classify(&xyz(&g5), 5, &g5, None);
        assert_eq!((c.verdict, c.regime), (Verdict::Full, Regime::Condition31Field));
        let g3 = FieldDescriptor::prime_field(3).unwrap();
        assert_eq!(classify(&xyz(&g3), 5, &g3, None).verdict, Verdict::Undetermined);
        let g7 = FieldDescriptor::prime_field(7).unwrap();
        assert_eq!(classify(&xyz(&g7), 3, &g7, None).verdict, Verdict::Undetermined);
        // requested regime that is not established
        let c = classify(&xyz(&g7), 5, &g7, Some(Regime::Char0AlgClosed));
        assert_eq!((c.verdict, c.regime), (Verdict::Undetermined, Regime::OutOfHypotheses));
    }

    #[test]
    fn one_by_one_matrices() {
        let f = q();
        let kh = MultilinearCubic::from_i64(&f, [1, 0, 0, -1, 0, 0]);
        assert_eq!(classify(&kh, 1, &f, None).verdict, Verdict::Traceless);
        let xyz = MultilinearCubic::from_i64(&f, [1, 0, 0, 0, 0, 0]);
        assert_eq!(classify(&xyz, 1, &f, None).verdict, Verdict::Full);
    }

    #[test]
    fn case_examples() {
        let c3 = FieldDescriptor::cyclotomic(3).unwrap();
        let w = c3.generator();
        // y[z,x] - ω[z,x]y
        let coeffs = [c3.zero(), c3.one(), -&w, c3.zero(), w.clone(), -c3.one()];
        let f = MultilinearCubic::new(coeffs).unwrap();
        let report = case_analysis(&f, 3);
        let id = &report.rotations[0];
        assert!(id.case_iv);
        assert!(!id.case_iii);

        let q = q();
        let xyz = MultilinearCubic::from_i64(&q, [1, 0, 0, 0, 0, 0]);
        for n in 1..8 {
            assert!(case_analysis(&xyz, n).rotations.iter().all(|r| !r.any()));
        }

        let g = MultilinearCubic::from_i64(&q, [1, -1, 0, -1, 1, 0]);
        let id = &case_analysis(&g, 4).rotations[0];
        assert!(id.case_iii && id.case_ii);
        assert_eq!(id.case_i, Some(q.one()));
    }

    #[test]
    fn commutator_cubic_is_obstructed_for_every_rotation() {
        let q = q();
        let kh = MultilinearCubic::from_i64(&q, [1, 0, 0, -1, 0, 0]);
        let report = case_analysis(&kh, 5);
        assert!(report.working_rotation().is_none());
    }

    #[test]
    fn rotation_matches_variable_permutation() {
        let q = q();
        let f = MultilinearCubic::from_i64(&q, [1, 2, 3, 4, 5, 6]);
        for rho in Rotation::ALL {
            let g = f.permute_variables(&rho.variable_permutation());
            let idx = rho.indices();
            for i in 0..3 {
                assert_eq!(g.lambda()[i], f.lambda()[idx[i]]);
                assert_eq!(g.mu()[i], f.mu()[idx[i]]);
            }
        }
    }

    #[test]
    fn traceless_spot_checks() {
        let q = q();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = MultilinearCubic::from_i64(&q, [1, -1, 0, 0, 0, 0]);
        assert!(verify_traceless_claim(&a, 4, &q, 100, &mut rng).unwrap());
        let b = MultilinearCubic::from_i64(&q, [1, 0, -1, 0, 0, 0]);
        assert!(verify_traceless_claim(&b, 4, &q, 100, &mut rng).unwrap());
        let xyz = MultilinearCubic::from_i64(&q, [1, 0, 0, 0, 0, 0]);
        assert!(verify_traceless_claim(&xyz, 4, &q, 10, &mut rng).is_err());
    }
}
