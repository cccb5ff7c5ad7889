//! Table-driven arithmetic in F_{p^k} = F_p[y]/(f).
//!
//! Elements are encoded as integers in `[0, p^k)` whose base-p digits are the
//! coefficients on 1, y, ..., y^{k-1}. Multiplication goes through discrete
//! log tables built from a primitive element.

use super::fp_poly;
use crate::error::{Error, Result};

/// Largest field size for which log tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    /// Builds F_p[y]/(modulus); `modulus` must be monic irreducible over F_p.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self> {
        let modulus = fp_poly::reduce(modulus, p);
        let degree = fp_poly::degree(&modulus).ok_or(Error::NotMonic)?;
        if modulus[degree] != 1 {
            return Err(Error::NotMonic);
        }
        if !fp_poly::is_irreducible(&modulus, p)? {
            return Err(Error::NotLocal);
        }
        let size = p.checked_pow(degree as u32).filter(|&q| q <= MAX_FIELD_SIZE);
        let size = size.ok_or(Error::DegreeTooLarge(degree))?;
        let mut field = FiniteField {
            p,
            degree,
            modulus,
            size: size as u32,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// The field F_{p^k} presented by the lexicographically smallest
    /// irreducible of degree k.
    pub fn standard(p: u64, degree: usize) -> Result<Self> {
        let f = fp_poly::smallest_irreducible(degree, p)?;
        Self::new(p, &f)
    }

    fn build_tables(&mut self) {
        let q = self.size as u64;
        let order = q - 1;
        let primes = fp_poly::prime_factors(order);
        let generator = (1..q as u32)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&r| self.slow_pow(g, order / r) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for k in 0..order as u32 {
            exp.push(cur);
            log[cur as usize] = k;
            cur = self.slow_mul(cur, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = fp_poly::mul(&self.coeffs(a), &self.coeffs(b), self.p);
        let (_, r) = fp_poly::divrem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Order of the multiplicative group, p^k - 1.
    pub fn unit_order(&self) -> u32 {
        self.size - 1
    }

    pub fn coeffs(&self, mut a: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            out.push(a as u64 % self.p);
            a /= self.p as u32;
        }
        out
    }

    /// Encodes a polynomial in y, reducing it modulo the field modulus.
    pub fn from_coeffs(&self, c: &[u64]) -> u32 {
        let c = if c.len() > self.degree {
            fp_poly::divrem(c, &self.modulus, self.p).1
        } else {
            c.to_vec()
        };
        c.iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p + d % self.p) as u32
    }

    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u32;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p as u32;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % self.unit_order() as u64;
        self.exp[k as usize]
    }

    /// `a^e` for a signed exponent; zero to a negative power is `None`.
    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if a == 0 {
            return match e {
                0 => Some(1),
                e if e > 0 => Some(0),
                _ => None,
            };
        }
        let n = self.unit_order() as i64;
        let k = (self.log[a as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Some(self.exp[k as usize])
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        self.pow(a, -1)
    }

    /// Discrete logarithm to the table generator; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % self.unit_order() as u64) as usize]
    }

    /// The absolute Frobenius a -> a^p.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as i64).expect("non-negative power")
    }
}
