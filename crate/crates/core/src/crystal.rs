//! Unit F-crystals on open subsets of G_m^d, given by a square matrix of
//! Laurent polynomials, and the transforms that bring them to the shape
//! used by the cohomological pipeline.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{self, ClosedPoint, PointEvaluator, PointRegion};
use crate::laurent::{LaurentPolynomial, TermJson};
use crate::linalg;
use crate::ring::{FlatLift, RingDescriptor, RingJson};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub denominators_cleared: bool,
    pub monomial_twisted: bool,
}

/// A rank-m crystal: entries r_ij = s_ij / a^M with the matrix acting as
/// r ∘ F*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCrystal {
    ring: Arc<RingDescriptor>,
    dim: usize,
    a: LaurentPolynomial,
    matrix: Vec<Vec<LaurentPolynomial>>,
    m_denom: u32,
    normal_form: NormalForm,
    u: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalJson {
    pub ring: RingJson,
    pub dim: usize,
    pub a: Vec<TermJson>,
    pub matrix: Vec<Vec<Vec<TermJson>>>,
    pub m_denom: u32,
    pub normal_form: NormalForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<u32>,
}

impl UnitCrystal {
    /// `matrix` holds the numerators s_ij; `m_denom` is the exponent M of
    /// the common denominator a^M. `a` must have coefficients in the prime
    /// subring.
    pub fn new(a: LaurentPolynomial, matrix: Vec<Vec<LaurentPolynomial>>, m_denom: u32) -> Result<Self> {
        let ring = a.ring().clone();
        let dim = a.dim();
        let m = matrix.len();
        if m == 0 {
            return Err(Error::DimensionMismatch("empty crystal matrix".into()));
        }
        for row in &matrix {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "crystal matrix is not square: row of length {} in rank {m}",
                    row.len()
                )));
            }
            for f in row {
                if f.dim() != dim || **f.ring() != *ring {
                    return Err(Error::DimensionMismatch(
                        "matrix entry has a different ring or variable count than a".into(),
                    ));
                }
            }
        }
        euler::ResiduePolynomial::from_laurent(&a)?;
        if a.is_zero() {
            return Err(Error::DimensionMismatch("locus polynomial a must be nonzero".into()));
        }
        Ok(UnitCrystal {
            ring,
            dim,
            a,
            matrix,
            m_denom,
            normal_form: NormalForm::default(),
            u: None,
        })
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn a(&self) -> &LaurentPolynomial {
        &self.a
    }

    pub fn matrix(&self) -> &[Vec<LaurentPolynomial>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPolynomial {
        &self.matrix[i][j]
    }

    pub fn m_denom(&self) -> u32 {
        self.m_denom
    }

    pub fn normal_form(&self) -> NormalForm {
        self.normal_form
    }

    pub fn u(&self) -> Option<u32> {
        self.u
    }

    fn entries(&self) -> impl Iterator<Item = &LaurentPolynomial> {
        self.matrix.iter().flatten()
    }

    /// Largest total degree of any entry (0 for the zero matrix).
    pub fn max_total_degree(&self) -> i64 {
        self.entries().filter_map(|f| f.total_degree()).max().unwrap_or(0).max(0)
    }

    /// True when every entry is exactly divisible by a.
    pub fn entries_divisible_by_a(&self) -> Result<bool> {
        for f in self.entries() {
            if f.div_exact(&self.a)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when every exponent of every entry is at least 1.
    pub fn entries_strictly_positive(&self) -> bool {
        self.entries()
            .all(|f| f.terms().all(|(e, _)| e.iter().all(|&k| k >= 1)))
    }

    /// Accepts a user-normalized matrix: checks both normal-form conditions
    /// and sets the flags.
    pub fn assume_normal_form(&self) -> Result<Self> {
        if self.m_denom != 0 {
            return Err(Error::NormalFormMissing(format!(
                "entries carry a denominator a^{}",
                self.m_denom
            )));
        }
        if !self.entries_strictly_positive() {
            return Err(Error::NormalFormMissing(
                "some entry has an exponent below 1".into(),
            ));
        }
        if !self.entries_divisible_by_a()? {
            return Err(Error::NormalFormMissing("some entry is not divisible by a".into()));
        }
        let mut out = self.clone();
        out.normal_form = NormalForm {
            denominators_cleared: true,
            monomial_twisted: true,
        };
        Ok(out)
    }

    /// Finds the least N_e ≤ `n_max` with a^{N_e+1} | (F*a)^{N_e}, writes
    /// (F*a)^{N_e} = a^{N_e+1} h, and replaces s_ij / a^M by a h^{M+1} s_ij,
    /// i.e. multiplies the matrix by (F*a / a)^{(M+1) N_e}.
    pub fn normalize_denominators(&self, n_max: u32) -> Result<(Self, u32)> {
        let fa = self.a.frobenius_pullback(1)?;
        let mut fa_pow = LaurentPolynomial::one(&self.ring, self.dim);
        let mut a_pow = self.a.clone();
        for ne in 0..=n_max {
            if let Some(h) = fa_pow.div_exact(&a_pow)? {
                let factor = self.a.mul(&h.pow(self.m_denom + 1)?)?;
                let matrix = self
                    .matrix
                    .iter()
                    .map(|row| row.iter().map(|s| factor.mul(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let mut out = self.clone();
                out.matrix = matrix;
                out.m_denom = 0;
                out.normal_form.denominators_cleared = true;
                return Ok((out, ne));
            }
            fa_pow = fa_pow.mul(&fa)?;
            a_pow = a_pow.mul(&self.a)?;
        }
        Err(Error::SearchExhausted(n_max))
    }

    /// Multiplies every entry by (z_1 ⋯ z_d)^{(p-1)t} with t ≥ 1 minimal such
    /// that (p-1)t exceeds every negative exponent.
    pub fn monomial_twist(&self) -> Result<Self> {
        if !self.normal_form.denominators_cleared {
            return Err(Error::NormalFormMissing("denominators not cleared".into()));
        }
        let s = self
            .entries()
            .filter_map(|f| f.exponent_box())
            .flat_map(|(lo, _)| lo)
            .map(|v| -v)
            .max()
            .unwrap_or(0)
            .max(0);
        let pm1 = self.p() as i64 - 1;
        let t = s / pm1 + 1;
        let shift = vec![pm1 * t; self.dim];
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|f| f.shift(&shift)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut out = self.clone();
        out.matrix = matrix;
        out.normal_form.monomial_twisted = true;
        out.u = None;
        Ok(out)
    }

    /// Least u with (p-1)u greater than the total degree of every entry.
    pub fn choose_sheaf_twist(&self) -> Result<u32> {
        if !self.normal_form.monomial_twisted {
            return Err(Error::NormalFormMissing("monomial twist not applied".into()));
        }
        let pm1 = self.p() as i64 - 1;
        Ok((self.max_total_degree() / pm1 + 1) as u32)
    }

    pub fn with_sheaf_twist(&self) -> Result<Self> {
        let mut out = self.clone();
        out.u = Some(self.choose_sheaf_twist()?);
        Ok(out)
    }

    /// Sets u explicitly. Values below [`Self::choose_sheaf_twist`] give a
    /// Dwork matrix that no longer computes the L-function.
    pub fn with_given_sheaf_twist(&self, u: u32) -> Result<Self> {
        if !self.normal_form.monomial_twisted {
            return Err(Error::NormalFormMissing("monomial twist not applied".into()));
        }
        let mut out = self.clone();
        out.u = Some(u);
        Ok(out)
    }

    /// Coefficientwise image of the whole crystal in `target`.
    pub fn change_ring(&self, target: &Arc<RingDescriptor>) -> Result<Self> {
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|f| f.change_ring(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(UnitCrystal {
            ring: target.clone(),
            dim: self.dim,
            a: self.a.change_ring(target)?,
            matrix,
            m_denom: self.m_denom,
            normal_form: self.normal_form,
            u: self.u,
        })
    }

    /// Canonical-representative lift to Λ̃.
    pub fn lift(&self, lift: &FlatLift) -> Result<CrystalPair> {
        if *self.ring != **lift.lambda() {
            return Err(Error::PrecisionMismatch("crystal is not defined over Λ".into()));
        }
        let lifted = self.change_ring(lift.lambda_tilde())?;
        let back = lifted.change_ring(lift.lambda())?;
        assert_eq!(&back, self, "projection of the lift must return the input");
        Ok(CrystalPair {
            lambda_crystal: self.clone(),
            lifted,
            lift: lift.clone(),
        })
    }

    /// Checks that det r(x̃) is a unit at every closed point of degree
    /// ≤ `degree_bound`. Points of Z(a) are reported separately.
    pub fn validate_unit_on_points(&self, degree_bound: usize) -> Result<UnitReport> {
        let mut report = UnitReport::default();
        for delta in 1..=degree_bound {
            let ev = PointEvaluator::new(&self.ring, delta)?;
            for x in euler::enumerate_closed_points(self.p(), self.dim, delta, &self.a)? {
                let logs = ev.logs(&x.coords)?;
                let m = ev.eval_matrix(&self.matrix, &logs);
                let cp = linalg::char_poly_reciprocal(ev.tensor(), &m);
                let det_up_to_sign = cp.last().expect("nonempty");
                report.checked += 1;
                if !ev.tensor().is_unit(det_up_to_sign) {
                    match x.region {
                        PointRegion::ZOfA => report.expected_nonunits.push(x),
                        PointRegion::DOfA => report.failures.push(x),
                    }
                }
            }
        }
        Ok(report)
    }

    pub fn to_json(&self) -> CrystalJson {
        CrystalJson {
            ring: self.ring.to_json(),
            dim: self.dim,
            a: self.a.to_json(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|f| f.to_json()).collect())
                .collect(),
            m_denom: self.m_denom,
            normal_form: self.normal_form,
            u: self.u,
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn content_hash(&self) -> String {
        let text = serde_json::to_string(&self.to_json()).expect("crystal serializes");
        crate::cache::content_key(&[&text])
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitReport {
    pub checked: usize,
    /// Points of D(a) where the determinant is not a unit.
    pub failures: Vec<ClosedPoint>,
    /// Points of Z(a) where the determinant is not a unit.
    pub expected_nonunits: Vec<ClosedPoint>,
}

/// A crystal over Λ together with its lift to Λ̃.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalPair {
    pub lambda_crystal: UnitCrystal,
    pub lifted: UnitCrystal,
    pub lift: FlatLift,
}

impl CrystalPair {
    /// Brings a crystal over Λ into normal form (running the transforms when
    /// `normalize` carries a search bound, otherwise checking the matrix is
    /// already normalized), lifts it, and fixes the sheaf twist u.
    pub fn prepare(c: &UnitCrystal, lift: &FlatLift, normalize: Option<u32>) -> Result<Self> {
        let normalized = match normalize {
            Some(n_max) => c.normalize_denominators(n_max)?.0.monomial_twist()?,
            None => c.assume_normal_form()?,
        };
        let normalized = normalized.with_sheaf_twist()?;
        normalized.lift(lift)
    }

    pub fn p(&self) -> u64 {
        self.lifted.p()
    }

    pub fn dim(&self) -> usize {
        self.lifted.dim()
    }
}
