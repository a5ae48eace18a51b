//! Cyclotomic polynomials and the dense rational-polynomial kernels behind
//! arithmetic in ℚ(ζ_n) = ℚ[x]/(Φ_n).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
///
/// Built from the divisor-product identity `x^n - 1 = Π_{d | n} Φ_d`.
/// Returns the constant polynomial `1` for `n == 0`, which callers never
/// request.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut table: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    for &d in &divisors {
        let mut poly = x_pow_minus_one(d);
        for (&e, phi) in &table {
            if e < d && d % e == 0 {
                poly = exact_div_monic(&poly, phi);
            }
        }
        table.insert(d, poly);
    }
    table.remove(&n).expect("n divides itself")
}

/// Euler's totient, i.e. the degree of Φ_n.
pub fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn x_pow_minus_one(d: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::zero(); d + 1];
    poly[0] = BigInt::from(-1);
    poly[d] = BigInt::one();
    poly
}

/// Exact quotient of integer polynomials where the divisor is monic.
pub(crate) fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    debug_assert!(den[dn].is_one());
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

pub(crate) type RatPoly = Vec<BigRational>;

pub(crate) fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Product of two residues reduced modulo the monic integral `modulus`.
/// Works on integer numerators over a common denominator.
pub(crate) fn mul_mod(a: &[BigRational], b: &[BigRational], modulus: &[BigRational]) -> RatPoly {
    let dm = modulus.len() - 1;
    let (na, da) = clear_denominators(a);
    let (nb, db) = clear_denominators(b);
    if na.is_empty() || nb.is_empty() {
        return vec![BigRational::zero(); dm];
    }
    let mut prod = vec![BigInt::zero(); na.len() + nb.len() - 1];
    for (i, x) in na.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in nb.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    if prod.len() > dm {
        let m: Vec<BigInt> = modulus.iter().map(|c| c.to_integer()).collect();
        for i in (dm..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for (j, mc) in m.iter().enumerate().take(dm) {
                if !mc.is_zero() {
                    prod[i - dm + j] -= &c * mc;
                }
            }
        }
        prod.truncate(dm);
    }
    prod.resize(dm, BigInt::zero());
    let den = da * db;
    prod.into_iter().map(|c| BigRational::new(c, den.clone())).collect()
}

fn clear_denominators(a: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = a.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (nums, den)
}

/// Remainder modulo a monic polynomial, padded to `deg(modulus)` coefficients.
pub(crate) fn rem_monic(p: &[BigRational], modulus: &[BigRational]) -> RatPoly {
    let dm = modulus.len() - 1;
    let mut r = p.to_vec();
    if r.len() > dm {
        for i in (dm..r.len()).rev() {
            let c = std::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            for (j, mc) in modulus.iter().enumerate().take(dm) {
                if !mc.is_zero() {
                    r[i - dm + j] -= &c * mc;
                }
            }
        }
        r.truncate(dm);
    }
    r.resize(dm, BigRational::zero());
    r
}

/// Quotient and remainder of rational polynomials. `b` must be nonzero after trimming.
pub(crate) fn div_rem(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let mut b = b.to_vec();
    trim(&mut b);
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    trim(&mut r);
    (q, r)
}

/// Inverse of `a` modulo the irreducible `modulus`, via the extended Euclidean
/// algorithm. Returns `None` when `a` is zero modulo `modulus`.
pub(crate) fn inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Option<RatPoly> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut t0: RatPoly = Vec::new();
    let mut t1: RatPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let qt = mul(&q, &t1);
        let mut next = t0.clone();
        if next.len() < qt.len() {
            next.resize(qt.len(), BigRational::zero());
        }
        for (i, c) in qt.into_iter().enumerate() {
            next[i] -= c;
        }
        trim(&mut next);
        t0 = std::mem::replace(&mut t1, next);
        r0 = std::mem::replace(&mut r1, r);
    }
    // r0 is the gcd; for an irreducible modulus it is a nonzero constant.
    if r0.len() != 1 {
        return None;
    }
    let scale = r0[0].recip();
    let inv: RatPoly = t0.iter().map(|c| c * &scale).collect();
    Some(rem_monic(&inv, modulus))
}
