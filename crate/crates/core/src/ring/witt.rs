//! Truncated Witt rings W_δ = W(F_{p^δ})/p^N in the quotient model
//! (Z/p^N)[y]/(w), their Frobenius, Teichmüller lifts, and tensor products
//! Λ̃ ⊗ W_δ.

use std::sync::Arc;

use super::{checked_modulus, fp_poly, FiniteField, RingDescriptor, RingElement, RingKind};
use crate::error::{Error, Result};

impl RingDescriptor {
    /// W_δ modulo p^N, presented by the canonical lift of the
    /// lexicographically smallest irreducible of degree δ over F_p.
    pub fn witt(p: u64, precision: u32, delta: usize) -> Result<Self> {
        if delta == 0 {
            return Err(Error::DegreeTooLarge(0));
        }
        let q = checked_modulus(p, precision)?;
        let w = fp_poly::smallest_irreducible(delta, p)?;
        let mut ring = RingDescriptor {
            kind: RingKind::Witt,
            p,
            precision,
            lambda_pexp: None,
            exponent: precision,
            q,
            x_mod: vec![0, 1],
            y_mod: w,
            residue: None,
            frobenius: None,
            components: None,
        };
        let sigma_y = ring.hensel_frobenius_root()?;
        let mut powers = Vec::with_capacity(delta);
        let mut cur = ring.one();
        for _ in 0..delta {
            powers.push(cur.clone());
            cur = ring.mul(&cur, &sigma_y);
        }
        ring.frobenius = Some(powers);
        Ok(ring)
    }

    /// The residue field F_p[y]/(w mod p) of a Witt ring.
    pub fn witt_residue_field(&self) -> Result<FiniteField> {
        if self.kind != RingKind::Witt {
            return Err(Error::WrongKind(self.kind.name()));
        }
        FiniteField::new(self.p, &self.y_mod)
    }

    fn eval_y_modulus(&self, s: &RingElement) -> RingElement {
        self.y_mod.iter().rev().fold(self.zero(), |acc, &c| {
            let c = self.from_int(c as i64);
            self.add(&self.mul(&acc, s), &c)
        })
    }

    fn eval_y_modulus_derivative(&self, s: &RingElement) -> RingElement {
        let deriv: Vec<u64> = self
            .y_mod
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as u64 % self.q)
            .collect();
        deriv.iter().rev().fold(self.zero(), |acc, &c| {
            let c = self.from_int(c as i64);
            self.add(&self.mul(&acc, s), &c)
        })
    }

    /// Newton iteration for the root of w congruent to y^p mod p.
    fn hensel_frobenius_root(&self) -> Result<RingElement> {
        let mut s = self.pow(&self.gen_y(), self.p);
        for _ in 0..=2 * self.exponent {
            let f = self.eval_y_modulus(&s);
            if self.is_zero(&f) {
                return Ok(s);
            }
            let df = self.eval_y_modulus_derivative(&s);
            let step = self.mul(&f, &self.inverse(&df)?);
            s = self.sub(&s, &step);
        }
        debug_assert!(self.is_zero(&self.eval_y_modulus(&s)));
        Ok(s)
    }

    /// σ(y) as an element of this ring.
    pub fn frobenius_of_y(&self) -> Result<RingElement> {
        let powers = self.frobenius.as_ref().ok_or(Error::WrongKind(self.kind.name()))?;
        if self.dy() == 1 {
            return Ok(self.gen_y());
        }
        Ok(powers[1].clone())
    }

    /// σ^k(e) on W, or id ⊗ σ^k on Λ̃ ⊗ W.
    pub fn witt_frobenius(&self, e: &RingElement, k: usize) -> Result<RingElement> {
        let powers = self.frobenius.as_ref().ok_or(Error::WrongKind(self.kind.name()))?;
        let (dx, dy) = (self.dx(), self.dy());
        let steps = k % dy;
        let mut cur = e.clone();
        for _ in 0..steps {
            let mut next = self.zero();
            for i in 0..dx {
                for j in 0..dy {
                    let c = cur.coords[i * dy + j];
                    if c == 0 {
                        continue;
                    }
                    // powers[j] lives in the first x-row; shift it to row i.
                    for t in 0..dy {
                        let v = powers[j].coords[t];
                        if v != 0 {
                            let slot = &mut next.coords[i * dy + t];
                            *slot = (*slot + c * v) % self.q;
                        }
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// The Teichmüller lift of a nonzero residue (coefficients on 1, y, ...)
    /// obtained by iterating t -> t^{p^δ} from the canonical lift.
    pub fn teichmuller(&self, residue: &[u64]) -> Result<RingElement> {
        if self.kind != RingKind::Witt {
            return Err(Error::WrongKind(self.kind.name()));
        }
        let reduced = fp_poly::reduce(residue, self.p);
        if reduced.is_empty() {
            return Err(Error::ZeroResidue);
        }
        let (_, reduced) = fp_poly::divrem(&reduced, &self.y_mod, self.p);
        if reduced.is_empty() {
            return Err(Error::ZeroResidue);
        }
        let mut coords = reduced;
        coords.resize(self.rank(), 0);
        let mut t = RingElement::new(coords);
        let qres = self.p.pow(self.dy() as u32);
        for _ in 0..self.exponent {
            t = self.pow(&t, qres);
        }
        Ok(t)
    }

    /// Λ̃ ⊗ W_δ as Λ̃[y]/(w).
    pub fn tensor(lambda_tilde: &Arc<RingDescriptor>, witt: &Arc<RingDescriptor>) -> Result<Self> {
        if witt.kind != RingKind::Witt {
            return Err(Error::WrongKind(witt.kind.name()));
        }
        if !matches!(lambda_tilde.kind, RingKind::FlatLift | RingKind::Base | RingKind::LocalAlgebra) {
            return Err(Error::WrongKind(lambda_tilde.kind.name()));
        }
        if lambda_tilde.p != witt.p || lambda_tilde.exponent != witt.exponent {
            return Err(Error::PrecisionMismatch(format!(
                "Z/{}^{} vs Z/{}^{}",
                lambda_tilde.p, lambda_tilde.exponent, witt.p, witt.exponent
            )));
        }
        let mut ring = RingDescriptor {
            kind: RingKind::Tensor,
            p: witt.p,
            precision: witt.precision,
            lambda_pexp: None,
            exponent: witt.exponent,
            q: witt.q,
            x_mod: lambda_tilde.x_mod.clone(),
            y_mod: witt.y_mod.clone(),
            residue: None,
            frobenius: None,
            components: Some(Box::new((lambda_tilde.clone(), witt.clone()))),
        };
        let wpowers = witt.frobenius.as_ref().expect("Witt rings carry Frobenius data");
        let powers = wpowers
            .iter()
            .map(|e| ring.map_from(witt, e))
            .collect::<Result<Vec<_>>>()?;
        ring.frobenius = Some(powers);
        Ok(ring)
    }

    /// (a ⊗ 1)(1 ⊗ b) for a in Λ̃ and b in W, as an outer product of
    /// coordinates.
    pub fn tensor_product(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let dy = self.dy();
        let mut out = vec![0u64; self.rank()];
        for (i, &ai) in a.coords.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coords.iter().enumerate() {
                out[i * dy + j] = ai * bj % self.q;
            }
        }
        RingElement::new(out)
    }

    /// Accumulates a ⊗ b into `acc`.
    pub fn add_tensor_product(&self, acc: &mut RingElement, a: &RingElement, b: &RingElement) {
        let dy = self.dy();
        let q = self.q;
        for (i, &ai) in a.coords.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coords.iter().enumerate() {
                let slot = &mut acc.coords[i * dy + j];
                *slot = (*slot + ai * bj) % q;
            }
        }
    }

    /// Descends an element of Λ̃ ⊗ W to Λ̃ when all of its y^1..y^{δ-1}
    /// components vanish.
    pub fn coerce_to_scalar(&self, e: &RingElement) -> Result<RingElement> {
        if self.kind != RingKind::Tensor {
            return Err(Error::WrongKind(self.kind.name()));
        }
        let dy = self.dy();
        let mut out = Vec::with_capacity(self.dx());
        for (idx, &c) in e.coords.iter().enumerate() {
            if idx % dy == 0 {
                out.push(c);
            } else if c != 0 {
                return Err(Error::NotScalar);
            }
        }
        Ok(RingElement::new(out))
    }
}
