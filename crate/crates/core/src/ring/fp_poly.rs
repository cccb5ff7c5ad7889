//! Dense univariate polynomials over the prime field F_p.
//!
//! Coefficients are stored little-endian (`f[i]` is the coefficient of x^i)
//! and kept trimmed: the zero polynomial is the empty vector.

use crate::error::{Error, Result};

/// Largest degree accepted by the brute-force factorization routines.
pub const FACTOR_DEGREE_BOUND: usize = 32;

pub fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn reduce(f: &[u64], p: u64) -> Vec<u64> {
    let mut g: Vec<u64> = f.iter().map(|c| c % p).collect();
    trim(&mut g);
    g
}

pub fn degree(f: &[u64]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    trim(&mut out);
    out
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + p - b) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    Some(pow_mod(a, p - 2, p))
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Division with remainder by a nonzero divisor.
pub fn divrem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(g[dg], p).expect("leading coefficient invertible over F_p");
    let mut rem = reduce(f, p);
    if rem.len() <= dg {
        return (Vec::new(), rem);
    }
    let mut quo = vec![0u64; rem.len() - dg];
    while rem.len() > dg {
        let shift = rem.len() - 1 - dg;
        let c = rem[rem.len() - 1] * lead_inv % p;
        quo[shift] = c;
        for (j, &gj) in g.iter().enumerate() {
            let t = c * gj % p;
            rem[shift + j] = (rem[shift + j] + p - t) % p;
        }
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = reduce(f, p);
    let mut b = reduce(g, p);
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&a, p)
}

pub fn make_monic(f: &[u64], p: u64) -> Vec<u64> {
    match f.last() {
        None => Vec::new(),
        Some(&lead) => {
            let inv = inv_mod(lead, p).expect("nonzero lead");
            f.iter().map(|c| c * inv % p).collect()
        }
    }
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `index` (constant term first).
fn monic_from_index(mut index: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push(index % p);
        index /= p;
    }
    f.push(1);
    f
}

/// Smallest-degree monic factor of `f` of degree >= 1, found by trial
/// division over all monic candidates. Such a factor is irreducible.
pub fn smallest_monic_factor(f: &[u64], p: u64) -> Result<Vec<u64>> {
    let df = degree(f).ok_or(Error::NotMonic)?;
    if df > FACTOR_DEGREE_BOUND {
        return Err(Error::DegreeTooLarge(df));
    }
    for k in 1..=df / 2 {
        let count = p.checked_pow(k as u32).ok_or(Error::DegreeTooLarge(df))?;
        for idx in 0..count {
            let cand = monic_from_index(idx, k, p);
            let (_, r) = divrem(f, &cand, p);
            if r.is_empty() {
                return Ok(cand);
            }
        }
    }
    Ok(make_monic(f, p))
}

pub fn is_irreducible(f: &[u64], p: u64) -> Result<bool> {
    let df = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return Ok(false),
    };
    let fac = smallest_monic_factor(f, p)?;
    Ok(degree(&fac) == Some(df))
}

/// Writes a monic `f` as `irr^k` with `irr` irreducible, or fails with
/// `NotLocal` when `f` has two distinct irreducible factors.
pub fn prime_power_decomposition(f: &[u64], p: u64) -> Result<(Vec<u64>, usize)> {
    let f = reduce(f, p);
    if degree(&f).unwrap_or(0) == 0 {
        return Err(Error::NotLocal);
    }
    let irr = smallest_monic_factor(&f, p)?;
    let mut rest = f;
    let mut k = 0;
    loop {
        let (q, r) = divrem(&rest, &irr, p);
        if !r.is_empty() {
            break;
        }
        rest = q;
        k += 1;
    }
    if rest.len() != 1 {
        return Err(Error::NotLocal);
    }
    Ok((irr, k))
}

/// The lexicographically smallest monic irreducible polynomial of degree
/// `deg` over F_p, ordering candidates by their coefficient tuple read from
/// the constant term upward.
pub fn smallest_irreducible(deg: usize, p: u64) -> Result<Vec<u64>> {
    if deg == 0 || deg > FACTOR_DEGREE_BOUND {
        return Err(Error::DegreeTooLarge(deg));
    }
    let count = p.checked_pow(deg as u32).ok_or(Error::DegreeTooLarge(deg))?;
    for idx in 0..count {
        let cand = monic_from_index(idx, deg, p);
        if is_irreducible(&cand, p)? {
            return Ok(cand);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(1, 2).unwrap(), vec![0, 1]);
        assert_eq!(smallest_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(3, 2).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 3).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn prime_power_detection() {
        // x^2 over F_2
        assert_eq!(prime_power_decomposition(&[0, 0, 1], 2).unwrap(), (vec![0, 1], 2));
        // x^2 + 1 = (x + 1)^2 over F_2
        assert_eq!(prime_power_decomposition(&[1, 0, 1], 2).unwrap(), (vec![1, 1], 2));
        // x^2 + x = x (x + 1)
        assert_eq!(prime_power_decomposition(&[0, 1, 1], 2), Err(Error::NotLocal));
    }

    #[test]
    fn divrem_reconstructs() {
        let f = vec![1, 2, 0, 4, 3];
        let g = vec![2, 1, 1];
        let (q, r) = divrem(&f, &g, 5);
        let back = {
            let qg = mul(&q, &g, 5);
            let n = qg.len().max(r.len());
            let mut s: Vec<u64> = (0..n)
                .map(|i| (qg.get(i).unwrap_or(&0) + r.get(i).unwrap_or(&0)) % 5)
                .collect();
            trim(&mut s);
            s
        };
        assert_eq!(back, f);
    }
}
