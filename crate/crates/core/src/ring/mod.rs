//! Exact arithmetic in the coefficient tower Z/p^N, Λ, Λ̃, W_δ and Λ̃ ⊗ W_δ.
//!
//! Every ring here is a finite quotient
//!
//! ```text
//!     (Z/p^k)[x, y] / (g(x), w(y))
//! ```
//!
//! with `g` and `w` monic. The base ring uses `g = x, w = y` (both trivial),
//! a local algebra or flat lift uses a nontrivial `g`, a Witt ring a
//! nontrivial `w`, and a tensor ring both. Elements are coordinate vectors on
//! the monomial basis `x^i y^j` (index `i * deg w + j`) with canonical
//! representatives in `[0, p^k)`.

pub mod finite_field;
pub mod fp_poly;
mod lift;
mod witt;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use finite_field::FiniteField;
pub use lift::FlatLift;

/// p^k must stay below this bound so that products of residues fit in a u64.
pub const MODULUS_LIMIT: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingKind {
    Base,
    LocalAlgebra,
    FlatLift,
    Witt,
    Tensor,
}

impl RingKind {
    fn name(self) -> &'static str {
        match self {
            RingKind::Base => "base",
            RingKind::LocalAlgebra => "local-algebra",
            RingKind::FlatLift => "flat-lift",
            RingKind::Witt => "witt",
            RingKind::Tensor => "tensor",
        }
    }
}

/// An element of a ring-tower ring: coordinates on the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElement {
    pub coords: Vec<u64>,
}

impl RingElement {
    pub fn new(coords: Vec<u64>) -> Self {
        RingElement { coords }
    }
}

/// The residue field Λ/𝔪 of a local ring, recorded at construction.
#[derive(Debug, Clone)]
struct Residue {
    irreducible: Vec<u64>,
    multiplicity: usize,
    field: Arc<FiniteField>,
}

#[derive(Debug, Clone)]
pub struct RingDescriptor {
    kind: RingKind,
    p: u64,
    precision: u32,
    lambda_pexp: Option<u32>,
    exponent: u32,
    q: u64,
    x_mod: Vec<u64>,
    y_mod: Vec<u64>,
    residue: Option<Residue>,
    frobenius: Option<Vec<RingElement>>,
    components: Option<Box<(Arc<RingDescriptor>, Arc<RingDescriptor>)>>,
}

impl PartialEq for RingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.p == other.p
            && self.exponent == other.exponent
            && self.precision == other.precision
            && self.lambda_pexp == other.lambda_pexp
            && self.x_mod == other.x_mod
            && self.y_mod == other.y_mod
    }
}

impl Eq for RingDescriptor {}

/// Serialized form of a ring descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub kind: RingKind,
    pub p: u64,
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_pexp: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<RingJson>>,
}

pub(crate) fn checked_modulus(p: u64, k: u32) -> Result<u64> {
    if !fp_poly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = (p as u128).pow(k);
    if q >= MODULUS_LIMIT as u128 {
        return Err(Error::ModulusTooLarge(q));
    }
    Ok(q as u64)
}

fn reduce_coeffs(c: &[i64], q: u64) -> Vec<u64> {
    c.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect()
}

impl RingDescriptor {
    /// Z/p^N.
    pub fn base(p: u64, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::PrecisionMismatch("precision must be at least 1".into()));
        }
        let q = checked_modulus(p, precision)?;
        let field = Arc::new(FiniteField::new(p, &[0, 1])?);
        Ok(RingDescriptor {
            kind: RingKind::Base,
            p,
            precision,
            lambda_pexp: None,
            exponent: precision,
            q,
            x_mod: vec![0, 1],
            y_mod: vec![0, 1],
            residue: Some(Residue {
                irreducible: vec![0, 1],
                multiplicity: 1,
                field,
            }),
            frobenius: None,
            components: None,
        })
    }

    /// Λ = (Z/p^n)[x]/(g) for a monic `g` whose reduction mod p is a power of
    /// a single irreducible polynomial.
    pub fn local_algebra(p: u64, precision: u32, lambda_pexp: u32, g: &[i64]) -> Result<Self> {
        if lambda_pexp == 0 || precision < lambda_pexp {
            return Err(Error::PrecisionMismatch(format!(
                "precision {precision} must be at least lambda_pexp {lambda_pexp} >= 1"
            )));
        }
        let q = checked_modulus(p, lambda_pexp)?;
        checked_modulus(p, precision)?;
        let modulus = reduce_coeffs(g, q);
        Self::local_kind(RingKind::LocalAlgebra, p, precision, Some(lambda_pexp), lambda_pexp, modulus)
    }

    fn local_kind(
        kind: RingKind,
        p: u64,
        precision: u32,
        lambda_pexp: Option<u32>,
        exponent: u32,
        modulus: Vec<u64>,
    ) -> Result<Self> {
        let q = checked_modulus(p, exponent)?;
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::NotMonic);
        }
        let (irreducible, multiplicity) = fp_poly::prime_power_decomposition(&modulus, p)?;
        let field = Arc::new(FiniteField::new(p, &irreducible)?);
        Ok(RingDescriptor {
            kind,
            p,
            precision,
            lambda_pexp,
            exponent,
            q,
            x_mod: modulus,
            y_mod: vec![0, 1],
            residue: Some(Residue {
                irreducible,
                multiplicity,
                field,
            }),
            frobenius: None,
            components: None,
        })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The configured precision N.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// n with p^n Λ = 0, for local algebras.
    pub fn lambda_pexp(&self) -> Option<u32> {
        self.lambda_pexp
    }

    /// k such that arithmetic is carried out modulo p^k.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// p^k.
    pub fn characteristic_modulus(&self) -> u64 {
        self.q
    }

    /// Rank over Z/p^k.
    pub fn rank(&self) -> usize {
        self.dx() * self.dy()
    }

    /// Degree of the Witt factor (1 when there is none).
    pub fn delta(&self) -> usize {
        self.dy()
    }

    fn dx(&self) -> usize {
        self.x_mod.len() - 1
    }

    fn dy(&self) -> usize {
        self.y_mod.len() - 1
    }

    /// Monic modulus in x (coefficients little-endian, canonical residues).
    pub fn x_modulus(&self) -> &[u64] {
        &self.x_mod
    }

    /// Monic modulus in y.
    pub fn y_modulus(&self) -> &[u64] {
        &self.y_mod
    }

    pub fn components(&self) -> Option<(&Arc<RingDescriptor>, &Arc<RingDescriptor>)> {
        self.components.as_ref().map(|b| (&b.0, &b.1))
    }

    pub fn to_json(&self) -> RingJson {
        let modulus = match self.kind {
            RingKind::Base | RingKind::Tensor => None,
            RingKind::LocalAlgebra | RingKind::FlatLift => Some(self.x_mod.clone()),
            RingKind::Witt => Some(self.y_mod.clone()),
        };
        RingJson {
            kind: self.kind,
            p: self.p,
            precision: self.precision,
            modulus,
            lambda_pexp: self.lambda_pexp,
            components: self
                .components()
                .map(|(a, b)| vec![a.to_json(), b.to_json()]),
        }
    }

    // ---- elements ---------------------------------------------------------

    pub fn zero(&self) -> RingElement {
        RingElement::new(vec![0; self.rank()])
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> RingElement {
        let mut c = vec![0; self.rank()];
        c[0] = v.rem_euclid(self.q as i64) as u64;
        RingElement::new(c)
    }

    /// Builds an element from (possibly negative or unreduced) coordinates.
    pub fn element(&self, coords: &[i64]) -> Result<RingElement> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        Ok(RingElement::new(reduce_coeffs(coords, self.q)))
    }

    /// Checks that an element is a canonical member of this ring.
    pub fn validate(&self, e: &RingElement) -> Result<()> {
        if e.coords.len() != self.rank() || e.coords.iter().any(|&c| c >= self.q) {
            return Err(Error::DimensionMismatch(format!(
                "element {:?} is not canonical for a rank-{} ring mod {}",
                e.coords,
                self.rank(),
                self.q
            )));
        }
        Ok(())
    }

    /// The generator x of a local algebra or flat lift (or of the Λ̃ factor
    /// of a tensor ring).
    pub fn gen_x(&self) -> RingElement {
        let mut c = vec![0; self.rank()];
        if self.dx() > 1 {
            c[self.dy()] = 1;
        } else {
            c[0] = (self.q - self.x_mod[0]) % self.q;
        }
        RingElement::new(c)
    }

    /// The generator y of a Witt ring (or of the W factor of a tensor ring).
    pub fn gen_y(&self) -> RingElement {
        let mut c = vec![0; self.rank()];
        if self.dy() > 1 {
            c[1] = 1;
        } else {
            c[0] = (self.q - self.y_mod[0]) % self.q;
        }
        RingElement::new(c)
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let q = self.q;
        RingElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= q {
                        s - q
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    pub fn add_assign(&self, a: &mut RingElement, b: &RingElement) {
        let q = self.q;
        for (x, &y) in a.coords.iter_mut().zip(&b.coords) {
            let s = *x + y;
            *x = if s >= q { s - q } else { s };
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        let q = self.q;
        RingElement::new(a.coords.iter().map(|&x| (q - x) % q).collect())
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let q = self.q;
        RingElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| if x >= y { x - y } else { x + q - y })
                .collect(),
        )
    }

    pub fn scale_int(&self, a: &RingElement, k: i64) -> RingElement {
        let q = self.q;
        let k = k.rem_euclid(q as i64) as u64;
        RingElement::new(a.coords.iter().map(|&x| x * k % q).collect())
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let q = self.q;
        let (dx, dy) = (self.dx(), self.dy());
        if dx == 1 && dy == 1 {
            return RingElement::new(vec![a.coords[0] * b.coords[0] % q]);
        }
        let wy = 2 * dy - 1;
        let mut prod = vec![0u64; (2 * dx - 1) * wy];
        for i1 in 0..dx {
            for j1 in 0..dy {
                let c1 = a.coords[i1 * dy + j1];
                if c1 == 0 {
                    continue;
                }
                for i2 in 0..dx {
                    let row = (i1 + i2) * wy + j1;
                    let base = i2 * dy;
                    for j2 in 0..dy {
                        let c2 = b.coords[base + j2];
                        if c2 != 0 {
                            let slot = &mut prod[row + j2];
                            *slot = (*slot + c1 * c2) % q;
                        }
                    }
                }
            }
        }
        // y^dy = -(w_0 + ... + w_{dy-1} y^{dy-1})
        if dy > 1 {
            for i in 0..2 * dx - 1 {
                for j in (dy..wy).rev() {
                    let c = prod[i * wy + j];
                    if c == 0 {
                        continue;
                    }
                    prod[i * wy + j] = 0;
                    for t in 0..dy {
                        let m = self.y_mod[t];
                        if m != 0 {
                            let slot = &mut prod[i * wy + j - dy + t];
                            *slot = (*slot + q - c * m % q) % q;
                        }
                    }
                }
            }
        }
        if dx > 1 {
            for i in (dx..2 * dx - 1).rev() {
                for j in 0..dy {
                    let c = prod[i * wy + j];
                    if c == 0 {
                        continue;
                    }
                    prod[i * wy + j] = 0;
                    for t in 0..dx {
                        let m = self.x_mod[t];
                        if m != 0 {
                            let slot = &mut prod[(i - dx + t) * wy + j];
                            *slot = (*slot + q - c * m % q) % q;
                        }
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(dx * dy);
        for i in 0..dx {
            out.extend_from_slice(&prod[i * wy..i * wy + dy]);
        }
        RingElement::new(out)
    }

    pub fn pow(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Matrix of multiplication by `a` on the coordinate basis (column j is
    /// `a * basis_j`).
    fn multiplication_matrix(&self, a: &RingElement) -> Vec<Vec<u64>> {
        let r = self.rank();
        let mut m = vec![vec![0u64; r]; r];
        for j in 0..r {
            let mut e = vec![0u64; r];
            e[j] = 1;
            let col = self.mul(a, &RingElement::new(e));
            for i in 0..r {
                m[i][j] = col.coords[i];
            }
        }
        m
    }

    /// An element of a finite Z/p^k-algebra is a unit iff the determinant of
    /// its multiplication matrix is nonzero mod p.
    pub fn is_unit(&self, a: &RingElement) -> bool {
        if self.rank() == 1 {
            return !a.coords[0].is_multiple_of(self.p);
        }
        let p = self.p;
        let mut m: Vec<Vec<u64>> = self
            .multiplication_matrix(a)
            .into_iter()
            .map(|row| row.into_iter().map(|c| c % p).collect())
            .collect();
        let r = m.len();
        for col in 0..r {
            let Some(piv) = (col..r).find(|&i| m[i][col] != 0) else {
                return false;
            };
            m.swap(col, piv);
            let inv = fp_poly::inv_mod(m[col][col], p).expect("nonzero pivot");
            for i in col + 1..r {
                let f = m[i][col] * inv % p;
                if f == 0 {
                    continue;
                }
                for k in col..r {
                    m[i][k] = (m[i][k] + p * p - f * m[col][k] % p) % p;
                }
            }
        }
        true
    }

    /// Inverse by solving `a * v = 1` with unit pivots over Z/p^k.
    pub fn inverse(&self, a: &RingElement) -> Result<RingElement> {
        let q = self.q;
        let p = self.p;
        if self.rank() == 1 {
            let c = a.coords[0];
            if c.is_multiple_of(p) {
                return Err(Error::NotInvertible);
            }
            return Ok(RingElement::new(vec![inv_mod_prime_power(c, q, p)]));
        }
        let r = self.rank();
        let mut m = self.multiplication_matrix(a);
        let mut rhs = vec![0u64; r];
        rhs[0] = 1;
        for col in 0..r {
            let piv = (col..r)
                .find(|&i| !m[i][col].is_multiple_of(p))
                .ok_or(Error::NotInvertible)?;
            m.swap(col, piv);
            rhs.swap(col, piv);
            let inv = inv_mod_prime_power(m[col][col], q, p);
            for k in col..r {
                m[col][k] = m[col][k] * inv % q;
            }
            rhs[col] = rhs[col] * inv % q;
            for i in 0..r {
                if i == col {
                    continue;
                }
                let f = m[i][col];
                if f == 0 {
                    continue;
                }
                for k in col..r {
                    m[i][k] = (m[i][k] + q - f * m[col][k] % q) % q;
                }
                rhs[i] = (rhs[i] + q - f * rhs[col] % q) % q;
            }
        }
        Ok(RingElement::new(rhs))
    }

    // ---- maps between rings ----------------------------------------------

    /// Maps an element of `src` into this ring along the evident
    /// coordinate map: the prime subring, the x-factor and the y-factor are
    /// matched up, then coefficients are reduced modulo this ring's p^k.
    /// Covers the inclusions Λ̃ -> Λ̃⊗W and W -> Λ̃⊗W as well as the
    /// projections Z/p^N -> Z/p^n and Λ̃ -> Λ.
    pub fn map_from(&self, src: &RingDescriptor, e: &RingElement) -> Result<RingElement> {
        if src.p != self.p || src.exponent < self.exponent {
            return Err(Error::PrecisionMismatch(format!(
                "no coefficient map from Z/{}^{} to Z/{}^{}",
                src.p, src.exponent, self.p, self.exponent
            )));
        }
        let x_ok = src.dx() == 1 || self.same_modulus(&src.x_mod, &self.x_mod);
        let y_ok = src.dy() == 1 || self.same_modulus(&src.y_mod, &self.y_mod);
        if !x_ok || !y_ok {
            return Err(Error::WrongKind(src.kind.name()));
        }
        let mut out = vec![0u64; self.rank()];
        let (sdx, sdy) = (src.dx(), src.dy());
        for i in 0..sdx {
            for j in 0..sdy {
                out[i * self.dy() + j] = e.coords[i * sdy + j] % self.q;
            }
        }
        Ok(RingElement::new(out))
    }

    fn same_modulus(&self, a: &[u64], b: &[u64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(&u, &v)| u % self.q == v % self.q)
    }

    // ---- local structure --------------------------------------------------

    fn residue(&self) -> Result<&Residue> {
        self.residue.as_ref().ok_or(Error::WrongKind(self.kind.name()))
    }

    /// The residue field Λ/𝔪 ≅ F_p[x]/(irr).
    pub fn residue_field(&self) -> Result<&Arc<FiniteField>> {
        Ok(&self.residue()?.field)
    }

    /// The irreducible factor of the modulus mod p and its multiplicity.
    pub fn residue_factor(&self) -> Result<(&[u64], usize)> {
        let r = self.residue()?;
        Ok((&r.irreducible, r.multiplicity))
    }

    /// Image of `e` in the residue field.
    pub fn to_residue(&self, e: &RingElement) -> Result<u32> {
        let r = self.residue()?;
        let c: Vec<u64> = e.coords.iter().map(|&c| c % self.p).collect();
        let (_, rem) = fp_poly::divrem(&c, &r.irreducible, self.p);
        Ok(r.field.from_coeffs(&rem))
    }

    /// Canonical lift of a residue-field element.
    pub fn lift_residue(&self, a: u32) -> Result<RingElement> {
        let r = self.residue()?;
        let mut c = r.field.coeffs(a);
        c.resize(self.rank(), 0);
        Ok(RingElement::new(c))
    }

    /// True iff `e` maps to zero in the residue field.
    pub fn is_in_maximal_ideal(&self, e: &RingElement) -> Result<bool> {
        Ok(self.to_residue(e)? == 0)
    }

    /// Nilpotency bound for the maximal ideal: 𝔪^e = 0 with e = k * deg g.
    pub fn nilpotency_bound(&self) -> Result<usize> {
        self.residue()?;
        Ok(self.exponent as usize * self.dx())
    }

    pub fn display(&self, e: &RingElement) -> String {
        format!("{e}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// Inverse of a unit modulo q = p^k via Euler's theorem.
pub(crate) fn inv_mod_prime_power(a: u64, q: u64, p: u64) -> u64 {
    let phi = q / p * (p - 1);
    fp_poly::pow_mod(a % q, phi - 1, q)
}

/// Minimal commutative-ring interface shared by the generic matrix and
/// polynomial routines.
pub trait CommRing {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl CommRing for RingDescriptor {
    type Elem = RingElement;
    fn zero(&self) -> RingElement {
        RingDescriptor::zero(self)
    }
    fn one(&self) -> RingElement {
        RingDescriptor::one(self)
    }
    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingDescriptor::add(self, a, b)
    }
    fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingDescriptor::sub(self, a, b)
    }
    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingDescriptor::mul(self, a, b)
    }
    fn neg(&self, a: &RingElement) -> RingElement {
        RingDescriptor::neg(self, a)
    }
    fn is_zero(&self, a: &RingElement) -> bool {
        RingDescriptor::is_zero(self, a)
    }
}

impl CommRing for FiniteField {
    type Elem = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        FiniteField::add(self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        FiniteField::sub(self, *a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        FiniteField::mul(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        FiniteField::neg(self, *a)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deligne_ring() {
        let lam = RingDescriptor::local_algebra(2, 2, 1, &[0, 0, 1]).unwrap();
        assert_eq!(lam.kind(), RingKind::LocalAlgebra);
        assert_eq!(lam.rank(), 2);
        assert_eq!(lam.characteristic_modulus(), 2);
        let x = lam.gen_x();
        assert!(lam.is_zero(&lam.mul(&x, &x)));
        assert!(lam.is_in_maximal_ideal(&x).unwrap());
    }

    #[test]
    fn rank_one_quotient_is_z_mod_9() {
        let lam = RingDescriptor::local_algebra(3, 2, 2, &[0, 1]).unwrap();
        assert_eq!(lam.rank(), 1);
        assert_eq!(lam.characteristic_modulus(), 9);
        assert!(lam.is_in_maximal_ideal(&lam.from_int(3)).unwrap());
        assert!(!lam.is_in_maximal_ideal(&lam.from_int(8)).unwrap());
    }

    #[test]
    fn not_local_and_not_monic() {
        assert_eq!(
            RingDescriptor::local_algebra(2, 2, 1, &[0, 1, 1]),
            Err(Error::NotLocal)
        );
        assert_eq!(
            RingDescriptor::local_algebra(2, 2, 1, &[0, 1, 2]),
            Err(Error::NotMonic)
        );
    }

    #[test]
    fn x_is_a_unit_in_unramified_quadratic() {
        let lt = RingDescriptor::local_algebra(2, 3, 3, &[1, 1, 1]).unwrap();
        let x = lt.gen_x();
        assert!(!lt.is_in_maximal_ideal(&x).unwrap());
        // brute-force inverse search over all 64 elements
        let mut found = None;
        for a in 0..8 {
            for b in 0..8 {
                let cand = lt.element(&[a, b]).unwrap();
                if lt.mul(&x, &cand) == lt.one() {
                    found = Some(cand);
                }
            }
        }
        let found = found.expect("x has an inverse");
        assert_eq!(lt.inverse(&x).unwrap(), found);
        assert!(lt.is_unit(&x));
    }

    #[test]
    fn inverse_fails_on_maximal_ideal() {
        let lam = RingDescriptor::local_algebra(3, 2, 2, &[0, 1]).unwrap();
        assert_eq!(lam.inverse(&lam.from_int(6)), Err(Error::NotInvertible));
        assert_eq!(lam.inverse(&lam.from_int(2)).unwrap(), lam.from_int(5));
    }

    #[test]
    fn modulus_bound_is_enforced() {
        assert!(matches!(
            RingDescriptor::base(2, 40),
            Err(Error::ModulusTooLarge(_))
        ));
        assert_eq!(RingDescriptor::base(4, 2), Err(Error::NotPrime(4)));
    }
}
