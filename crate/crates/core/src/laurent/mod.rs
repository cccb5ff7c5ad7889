//! Sparse multivariate Laurent polynomials over ring-tower rings.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElement};

pub use parse::parse_laurent;

/// Exponents must satisfy |e| < 2^31.
pub const EXPONENT_LIMIT: i64 = 1 << 31;

pub type Exponent = Vec<i64>;

fn check_exponent(e: &[i64]) -> Result<()> {
    if e.iter().any(|&v| v.abs() >= EXPONENT_LIMIT) {
        return Err(Error::ExponentOverflow);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    ring: Arc<RingDescriptor>,
    dim: usize,
    terms: BTreeMap<Exponent, RingElement>,
}

/// One term of the JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<i64>,
    pub coords: Vec<u64>,
}

impl LaurentPolynomial {
    pub fn zero(ring: &Arc<RingDescriptor>, dim: usize) -> Self {
        LaurentPolynomial {
            ring: ring.clone(),
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<RingDescriptor>, dim: usize, c: RingElement) -> Self {
        Self::monomial(ring, c, vec![0; dim]).expect("zero exponent is in range")
    }

    pub fn one(ring: &Arc<RingDescriptor>, dim: usize) -> Self {
        Self::constant(ring, dim, ring.one())
    }

    pub fn monomial(ring: &Arc<RingDescriptor>, c: RingElement, e: Exponent) -> Result<Self> {
        check_exponent(&e)?;
        let mut f = Self::zero(ring, e.len());
        if !ring.is_zero(&c) {
            f.terms.insert(e, c);
        }
        Ok(f)
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, adding
    /// repeated exponents.
    pub fn from_terms<I>(ring: &Arc<RingDescriptor>, dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, RingElement)>,
    {
        let mut f = Self::zero(ring, dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "exponent {e:?} in a {dim}-variable polynomial"
                )));
            }
            check_exponent(&e)?;
            ring.validate(&c)?;
            f.add_term(e, &c);
        }
        Ok(f)
    }

    /// The variable z_i (1-based).
    pub fn variable(ring: &Arc<RingDescriptor>, dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i - 1] = 1;
        Self::monomial(ring, ring.one(), e).expect("unit exponent")
    }

    fn add_term(&mut self, e: Exponent, c: &RingElement) {
        match self.terms.get_mut(&e) {
            Some(old) => {
                self.ring.add_assign(old, c);
                if self.ring.is_zero(old) {
                    self.terms.remove(&e);
                }
            }
            None => {
                if !self.ring.is_zero(c) {
                    self.terms.insert(e, c.clone());
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &RingElement)> {
        self.terms.iter()
    }

    pub fn coeff_extract(&self, e: &[i64]) -> RingElement {
        self.terms.get(e).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.dim, other.dim
            )));
        }
        if *self.ring != *other.ring {
            return Err(Error::DimensionMismatch("different coefficient rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            ring: self.ring.clone(),
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.ring, self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                check_exponent(&e)?;
                out.add_term(e, &self.ring.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring, self.dim);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &RingElement) -> Self {
        let mut out = Self::zero(&self.ring, self.dim);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &self.ring.mul(v, c));
        }
        out
    }

    /// Multiplies by the monomial z^shift.
    pub fn shift(&self, shift: &[i64]) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let e: Exponent = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            check_exponent(&e)?;
            terms.insert(e, c.clone());
        }
        Ok(LaurentPolynomial {
            ring: self.ring.clone(),
            dim: self.dim,
            terms,
        })
    }

    /// F^k: z_i -> z_i^{p^k}, coefficients fixed.
    pub fn frobenius_pullback(&self, k: u32) -> Result<Self> {
        let factor = (self.ring.p() as i64)
            .checked_pow(k)
            .filter(|&f| f < EXPONENT_LIMIT)
            .ok_or(Error::ExponentOverflow)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let e: Exponent = e.iter().map(|&v| v * factor).collect();
            check_exponent(&e)?;
            terms.insert(e, c.clone());
        }
        Ok(LaurentPolynomial {
            ring: self.ring.clone(),
            dim: self.dim,
            terms,
        })
    }

    /// Substitutes `point` (elements of `target`) for z_1..z_d. The
    /// coefficient ring must map into `target`.
    pub fn eval_at_point(&self, target: &RingDescriptor, point: &[RingElement]) -> Result<RingElement> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} variables",
                point.len(),
                self.dim
            )));
        }
        let mut inverses: Vec<Option<RingElement>> = vec![None; self.dim];
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut term = target.map_from(&self.ring, c)?;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let base = if k > 0 {
                    point[i].clone()
                } else {
                    if inverses[i].is_none() {
                        let inv = target
                            .inverse(&point[i])
                            .map_err(|_| Error::NonInvertibleCoordinate(i + 1))?;
                        inverses[i] = Some(inv);
                    }
                    inverses[i].clone().expect("just computed")
                };
                term = target.mul(&term, &target.pow(&base, k.unsigned_abs()));
            }
            target.add_assign(&mut acc, &term);
        }
        Ok(acc)
    }

    /// Coefficientwise image in another ring (reduction, or the canonical
    /// lift when `target` has larger precision).
    pub fn change_ring(&self, target: &Arc<RingDescriptor>) -> Result<Self> {
        let mut out = Self::zero(target, self.dim);
        for (e, c) in &self.terms {
            let image = if target.exponent() <= self.ring.exponent() {
                target.map_from(&self.ring, c)?
            } else {
                // canonical representatives lift coordinatewise
                if c.coords.len() != target.rank() {
                    return Err(Error::DimensionMismatch("incompatible ranks".into()));
                }
                c.clone()
            };
            out.add_term(e.clone(), &image);
        }
        Ok(out)
    }

    /// Per-variable minimum and maximum exponents; `None` for zero.
    pub fn exponent_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for e in it {
            for i in 0..self.dim {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        Some((lo, hi))
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Smallest total degree of a term; `None` for zero.
    pub fn min_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Exponent, &RingElement)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| grlex_cmp(a, b))
    }

    /// Exact quotient `self / g` in the Laurent ring, or `None` when `g`
    /// does not divide `self`. The leading coefficient of `g` must be a
    /// unit. Division steps stop once the remainder's leading term falls
    /// below a total-degree floor derived from the supports and the
    /// nilpotency of the maximal ideal.
    pub fn div_exact(&self, g: &Self) -> Result<Option<Self>> {
        self.check_compatible(g)?;
        let (lead_e, lead_c) = g.leading_term().ok_or(Error::DivisionUndecidable)?;
        if !self.ring.is_unit(lead_c) {
            return Err(Error::DivisionUndecidable);
        }
        let lead_inv = self.ring.inverse(lead_c)?;
        let lead_e = lead_e.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ring, self.dim);
        if rem.is_zero() {
            return Ok(Some(quot));
        }
        let nil = self.ring.nilpotency_bound().unwrap_or(self.ring.exponent() as usize) as i64;
        let width = g.total_degree().expect("nonzero") - g.min_total_degree().expect("nonzero");
        let floor = rem.min_total_degree().expect("nonzero")
            - g.total_degree().expect("nonzero")
            - nil.max(1) * width;
        while let Some((e, c)) = rem.leading_term() {
            if e.iter().sum::<i64>() < floor {
                return Ok(None);
            }
            let qe: Exponent = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = self.ring.mul(c, &lead_inv);
            let step = Self::monomial(&self.ring, qc.clone(), qe.clone())?;
            rem = rem.sub(&step.mul(g)?)?;
            quot.add_term(qe, &qc);
        }
        Ok(Some(quot))
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson {
                exponents: e.clone(),
                coords: c.coords.clone(),
            })
            .collect()
    }

    pub fn from_json(ring: &Arc<RingDescriptor>, dim: usize, terms: &[TermJson]) -> Result<Self> {
        Self::from_terms(
            ring,
            dim,
            terms
                .iter()
                .map(|t| (t.exponents.clone(), RingElement::new(t.coords.clone()))),
        )
    }
}

/// Graded lexicographic order on exponent vectors.
pub fn grlex_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn format_coeff(ring: &RingDescriptor, c: &RingElement) -> String {
    if ring.rank() == 1 {
        return c.coords[0].to_string();
    }
    let dy = ring.delta();
    let mut parts = Vec::new();
    for (idx, &v) in c.coords.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let i = idx / dy;
        let mon = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        parts.push(match (v, mon.is_empty()) {
            (_, true) => v.to_string(),
            (1, false) => mon,
            (_, false) => format!("{v}{mon}"),
        });
    }
    format!("[{}]", parts.join("+"))
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("z{}", i + 1)
                    } else {
                        format!("z{}^{}", i + 1, k)
                    }
                })
                .collect();
            let is_one = *c == self.ring.one();
            if vars.is_empty() {
                write!(f, "{}", format_coeff(&self.ring, c))?;
            } else if is_one {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_coeff(&self.ring, c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}
