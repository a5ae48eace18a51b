//! Arithmetic kernels for GF(p) polynomials: element multiplication in
//! GF(p^k) = GF(p)[x]/(m), irreducibility testing and modulus selection.

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(ai, bj, p), p);
        }
    }
    out
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let idx = top - dm + j;
                r[idx] = sub_mod(r[idx], mul_mod(c, mj, p), p);
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// Multiplication of two residues modulo the monic `modulus`, result padded to
/// `deg(modulus)` coefficients.
pub(crate) fn mul_residue(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    if k == 1 {
        return vec![mul_mod(a[0], b[0], p)];
    }
    let mut r = poly_rem(&poly_mul(a, b, p), modulus, p);
    r.resize(k, 0);
    r
}

/// Ben-Or irreducibility test: a degree-k polynomial over GF(p) is irreducible
/// iff gcd(x^(p^i) - x, f) = 1 for every i ≤ k/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = poly_rem(&x, &f, p);
    for _ in 1..=k / 2 {
        h = pow_poly_mod(&h, p, &f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = sub_mod(diff[1], 1, p);
        trim(&mut diff);
        let g = poly_gcd(&f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn pow_poly_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

/// First irreducible monic polynomial of degree `k` in the scan order where the
/// lower coefficients, read as base-p digits with the x^(k-1) coefficient most
/// significant, count upwards from zero.
pub(crate) fn default_modulus(p: u64, k: usize) -> Vec<u64> {
    let total = (p as u128).pow(k as u32);
    let mut t: u128 = 0;
    loop {
        assert!(t < total, "no irreducible polynomial found");
        let mut f = vec![0u64; k + 1];
        f[k] = 1;
        let mut rest = t;
        for c in f.iter_mut().take(k) {
            *c = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        if is_irreducible(&f, p) {
            return f;
        }
        t += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn irreducibility_against_root_search() {
        // For degree <= 3 irreducible <=> no root in GF(p).
        for p in [2u64, 3, 5] {
            for k in 2..=3usize {
                let total = p.pow(k as u32);
                for t in 0..total {
                    let mut f = vec![0u64; k + 1];
                    f[k] = 1;
                    let mut rest = t;
                    for c in f.iter_mut().take(k) {
                        *c = rest % p;
                        rest /= p;
                    }
                    let has_root = (0..p).any(|x| {
                        f.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p)) == 0
                    });
                    assert_eq!(is_irreducible(&f, p), !has_root, "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn quartic_with_quadratic_factors_is_rejected() {
        // (x^2+x+1)^2 = x^4 + 2x^3 + 3x^2 + 2x + 1 over GF(2) -> x^4 + x^2 + 1
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        // x^4 + x + 1 is irreducible over GF(2)
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
    }

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(7, 1), vec![0, 1]);
        let m = default_modulus(2, 4);
        assert!(is_irreducible(&m, 2));
    }
}
