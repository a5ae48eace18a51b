//! Root finding for polynomials over the supported fields.
//!
//! Complete over ℚ (rational root theorem) and GF(q) (exhaustive search for
//! small q, equal-degree splitting otherwise). Over ℚ(ζ_m) only roots of the
//! form `c·ζ^j` with rational `c` are found; anything else is reported as not
//! splitting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::{FieldDescriptor, FieldElement, FieldKind};

const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

/// Distinct roots of `p` in its coefficient field, in discovery order.
pub fn distinct_roots(p: &Poly) -> Vec<FieldElement> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let field = p.field().clone();
    match field.kind() {
        FieldKind::Rationals => rational_poly_roots(&to_rational_coeffs(p))
            .into_iter()
            .map(|r| field.from_rational(&r).unwrap())
            .collect(),
        FieldKind::Cyclotomic { order } => cyclotomic_roots(p, *order),
        FieldKind::FiniteField { .. } => finite_field_roots(p),
    }
}

/// Roots with multiplicities when `p` splits into linear factors over its
/// field (as far as [`distinct_roots`] can see), `None` otherwise.
pub fn split_roots(p: &Poly) -> Option<Vec<(FieldElement, usize)>> {
    let roots = distinct_roots(p);
    let mut rest = p.clone();
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let lin = Poly::linear(&r);
        let mut mult = 0;
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    if rest.degree() == Some(0) {
        Some(out)
    } else {
        None
    }
}

fn to_rational_coeffs(p: &Poly) -> Vec<BigRational> {
    p.coeffs().iter().map(|c| c.as_rational().expect("rational coefficient")).collect()
}

/// Distinct rational roots of a polynomial with rational coefficients.
pub(crate) fn rational_poly_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let field = FieldDescriptor::rationals();
    let poly = Poly::new(
        &field,
        coeffs.iter().map(|c| field.from_rational(c).unwrap()).collect(),
    );
    if poly.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    // Square-free part keeps the integer coefficients (and hence the candidate
    // sets) small.
    let g = poly.gcd(&poly.derivative());
    let squarefree = poly.div_rem(&g).0;
    let mut ints = primitive_integer_coeffs(&to_rational_coeffs(&squarefree));
    let mut roots = Vec::new();
    if ints[0].is_zero() {
        roots.push(BigRational::zero());
        ints.remove(0);
    }
    if ints.len() <= 1 {
        return roots;
    }
    let lead = ints.last().unwrap().abs();
    let constant = ints[0].abs();
    let numerators = divisors(&constant);
    let denominators = divisors(&lead);
    let mut remaining_degree = ints.len() - 1;
    for q in &denominators {
        for pnum in &numerators {
            if remaining_degree == 0 {
                return roots;
            }
            if pnum.gcd(q) != BigInt::one() {
                continue;
            }
            for sign in [1i32, -1] {
                let num = if sign == 1 { pnum.clone() } else { -pnum.clone() };
                if is_integer_poly_root(&ints, &num, q) {
                    roots.push(BigRational::new(num, q.clone()));
                    remaining_degree -= 1;
                }
            }
        }
    }
    roots
}

fn primitive_integer_coeffs(coeffs: &[BigRational]) -> Vec<BigInt> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

/// Σ a_k num^k den^(n-k) == 0
fn is_integer_poly_root(ints: &[BigInt], num: &BigInt, den: &BigInt) -> bool {
    let n = ints.len() - 1;
    let mut acc = BigInt::zero();
    let mut num_pow = BigInt::one();
    let den_pows: Vec<BigInt> = (0..=n).scan(BigInt::one(), |s, _| {
        let cur = s.clone();
        *s *= den;
        Some(cur)
    }).collect();
    for (k, a) in ints.iter().enumerate() {
        acc += a * &num_pow * &den_pows[n - k];
        num_pow *= num;
    }
    acc.is_zero()
}

/// Positive divisors in increasing order. Prime factors beyond the trial
/// division limit are treated as prime.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d: u64 = 2;
    while d <= TRIAL_DIVISION_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            factors.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (prime, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut power = BigInt::one();
            for _ in 0..=e {
                next.push(d * &power);
                power *= &prime;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

fn cyclotomic_roots(p: &Poly, order: usize) -> Vec<FieldElement> {
    let field = p.field().clone();
    let zeta = field.generator();
    let mut found: Vec<FieldElement> = Vec::new();
    let mut c = field.one();
    for _ in 0..order {
        // p(c·t) with coordinates split over the power basis; a rational t is a
        // root iff it is a common root of every coordinate polynomial.
        let shifted = p.scale_variable(&c);
        let dim = field.degree();
        let mut common: Option<Poly> = None;
        let q = FieldDescriptor::rationals();
        for b in 0..dim {
            let coords: Vec<FieldElement> = shifted
                .coeffs()
                .iter()
                .map(|a| q.from_rational(&a.rational_coordinates().unwrap()[b]).unwrap())
                .collect();
            let h = Poly::new(&q, coords);
            if h.is_zero() {
                continue;
            }
            common = Some(match common {
                None => h.monic(),
                Some(g) => g.gcd(&h),
            });
        }
        if let Some(g) = common {
            for t in rational_poly_roots(&to_rational_coeffs(&g)) {
                let r = &c * &field.from_rational(&t).unwrap();
                if !found.contains(&r) {
                    found.push(r);
                }
            }
        }
        c = &c * &zeta;
    }
    found
}

fn finite_field_roots(p: &Poly) -> Vec<FieldElement> {
    let field = p.field().clone();
    let q = field.size().unwrap();
    if q <= EXHAUSTIVE_LIMIT {
        return (0..q)
            .map(|i| field.element_from_index(i))
            .filter(|x| p.eval(x).is_zero())
            .collect();
    }
    let monic = p.monic();
    let x = Poly::new(&field, vec![field.zero(), field.one()]);
    let xq = x.pow_mod(q, &monic);
    let linear_part = monic.gcd(&xq.sub(&x));
    let mut roots = Vec::new();
    split_linear_product(&linear_part, &mut roots, 0);
    roots.sort_by_key(|e| e.index().unwrap());
    roots
}

/// Splits a product of distinct monic linear factors (Cantor–Zassenhaus with
/// a deterministic sequence of shifts).
fn split_linear_product(g: &Poly, out: &mut Vec<FieldElement>, mut seed: u64) {
    let field = g.field().clone();
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            let m = g.monic();
            out.push(-&m.coeff(0));
            return;
        }
        _ => {}
    }
    let q = field.size().unwrap();
    let p = field.characteristic();
    loop {
        seed += 1;
        let a = field.element_from_index(seed % q);
        let h = if p == 2 {
            // Trace map Tr(a·x) splits over GF(2^k).
            let k = field.degree() as u32;
            let ax = Poly::new(&field, vec![field.zero(), a.clone()]).rem(g);
            let mut term = ax.clone();
            let mut acc = ax;
            for _ in 1..k {
                term = term.mul(&term).rem(g);
                acc = acc.add(&term);
            }
            acc
        } else {
            let shifted = Poly::new(&field, vec![a.clone(), field.one()]);
            shifted.pow_mod((q - 1) / 2, g).sub(&Poly::constant(field.one()))
        };
        let d = g.gcd(&h);
        let deg = d.degree().unwrap_or(0);
        if deg > 0 && deg < g.degree().unwrap() {
            let (rest, _) = g.div_rem(&d);
            split_linear_product(&d, out, seed);
            split_linear_product(&rest.monic(), out, seed);
            return;
        }
        if seed > 10 * q.min(1 << 20) {
            panic!("root splitting did not converge");
        }
    }
}
