//! Truncated power series c_0 + c_1 T + ... + c_B T^B over ring-tower rings.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: Arc<RingDescriptor>,
    coeffs: Vec<RingElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub bound: usize,
    pub coeffs: Vec<Vec<u64>>,
}

impl TruncatedSeries {
    /// A series modulo T^{bound+1} from the given coefficients, padding with
    /// zeros or truncating as needed.
    pub fn from_coeffs(ring: &Arc<RingDescriptor>, mut coeffs: Vec<RingElement>, bound: usize) -> Self {
        coeffs.resize(bound + 1, ring.zero());
        TruncatedSeries {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn from_ints(ring: &Arc<RingDescriptor>, coeffs: &[i64], bound: usize) -> Self {
        let c = coeffs.iter().map(|&v| ring.from_int(v)).collect();
        Self::from_coeffs(ring, c, bound)
    }

    pub fn one(ring: &Arc<RingDescriptor>, bound: usize) -> Self {
        Self::from_coeffs(ring, vec![ring.one()], bound)
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &RingElement {
        &self.coeffs[k]
    }

    pub fn truncate(&self, bound: usize) -> Self {
        Self::from_coeffs(&self.ring, self.coeffs.clone(), bound)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if *self.ring != *other.ring {
            return Err(Error::DimensionMismatch("series over different rings".into()));
        }
        Ok(())
    }

    /// Product modulo T^{B+1} with B the smaller of the two bounds.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let b = self.bound().min(other.bound());
        let r = &self.ring;
        let mut out = vec![r.zero(); b + 1];
        for (i, x) in self.coeffs.iter().enumerate().take(b + 1) {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate().take(b + 1 - i) {
                let prod = r.mul(x, y);
                r.add_assign(&mut out[i + j], &prod);
            }
        }
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let r = &self.ring;
        if !r.is_unit(&self.coeffs[0]) {
            return Err(Error::NonUnitConstantTerm);
        }
        let g0 = r.inverse(&self.coeffs[0])?;
        let mut g = vec![g0.clone()];
        for k in 1..=self.bound() {
            let mut acc = r.zero();
            for j in 1..=k {
                let prod = r.mul(&self.coeffs[j], &g[k - j]);
                r.add_assign(&mut acc, &prod);
            }
            g.push(r.neg(&r.mul(&g0, &acc)));
        }
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            coeffs: g,
        })
    }

    /// T -> cT.
    pub fn scale_variable(&self, c: &RingElement) -> Self {
        let r = &self.ring;
        let mut power = r.one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(r.mul(x, &power));
            power = r.mul(&power, c);
        }
        TruncatedSeries {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn pow_signed(&self, exponent: i64) -> Result<Self> {
        let base = if exponent < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.ring, self.bound());
        let mut sq = base;
        let mut e = exponent.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Coefficientwise image under a ring map.
    pub fn change_ring<F>(&self, target: &Arc<RingDescriptor>, map: F) -> Self
    where
        F: Fn(&RingElement) -> RingElement,
    {
        TruncatedSeries {
            ring: target.clone(),
            coeffs: self.coeffs.iter().map(map).collect(),
        }
    }

    /// Image along the coordinate map of [`RingDescriptor::map_from`].
    pub fn map_to(&self, target: &Arc<RingDescriptor>) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| target.map_from(&self.ring, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries {
            ring: target.clone(),
            coeffs,
        })
    }

    /// Index of the first differing coefficient, comparing up to the smaller
    /// bound.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            bound: self.bound(),
            coeffs: self.coeffs.iter().map(|c| c.coords.clone()).collect(),
        }
    }

    pub fn from_json(ring: &Arc<RingDescriptor>, json: &SeriesJson) -> Result<Self> {
        if json.coeffs.len() != json.bound + 1 {
            return Err(Error::DimensionMismatch(format!(
                "bound {} with {} coefficients",
                json.bound,
                json.coeffs.len()
            )));
        }
        let coeffs = json
            .coeffs
            .iter()
            .map(|c| {
                let e = RingElement::new(c.clone());
                ring.validate(&e).map(|_| e)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries {
            ring: ring.clone(),
            coeffs,
        })
    }
}
