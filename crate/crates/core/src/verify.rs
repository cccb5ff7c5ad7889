//! Consistency checks between the Euler product and the cohomological
//! side, each producing a JSON-serializable report.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::crystal::{CrystalPair, UnitCrystal};
use crate::dwork::{self, DworkMatrix, UnitNilSplit};
use crate::error::Result;
use crate::euler::{self, EulerOptions, PointFilter, Region, MAX_DEGREE};
use crate::laurent::LaurentPolynomial;
use crate::linalg;
use crate::ring::{RingDescriptor, RingElement};
use crate::series::{SeriesJson, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Every coefficient up to the requested bound checks out, but no
    /// finite certificate covers the whole series.
    CertifiedToBound,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Mismatch,
    CoefficientNotInMaximalIdeal,
    NotPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub index: usize,
    pub left: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub series: BTreeMap<String, SeriesJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(check: &str, status: Status) -> Self {
        VerificationReport {
            check: check.to_string(),
            status,
            witness: None,
            series: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn with_series(mut self, name: &str, s: &TruncatedSeries) -> Self {
        self.series.insert(name.to_string(), s.to_json());
        self
    }

    pub fn passed(&self) -> bool {
        !self.status.is_failure()
    }
}

/// Pass when the two series agree up to the smaller bound, otherwise fail
/// with the first differing coefficient.
pub fn compare_series(check: &str, lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> VerificationReport {
    let witness = lhs.first_mismatch(rhs).map(|i| Witness {
        kind: WitnessKind::Mismatch,
        index: i,
        left: lhs.coeff(i).coords.clone(),
        right: Some(rhs.coeff(i).coords.clone()),
    });
    let status = if witness.is_some() { Status::Fail } else { Status::Pass };
    let mut r = VerificationReport::new(check, status)
        .with_series("lhs", lhs)
        .with_series("rhs", rhs);
    r.witness = witness;
    r
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// ∏_{i=0}^{d} P(p^i T)^{(-1)^{d+1-i} C(d,i)} modulo T^{bound+1}.
pub fn torus_l_from_char_poly(
    ring: &Arc<RingDescriptor>,
    p_poly: &[RingElement],
    d: usize,
    bound: usize,
) -> Result<TruncatedSeries> {
    let base = TruncatedSeries::from_coeffs(ring, p_poly.to_vec(), bound);
    let mut acc = TruncatedSeries::one(ring, bound);
    let mut pi = ring.one();
    for i in 0..=d {
        let sign = if (d + 1 - i).is_multiple_of(2) { 1 } else { -1 };
        let factor = base.scale_variable(&pi).pow_signed(sign * binomial(d, i))?;
        acc = acc.mul(&factor)?;
        pi = ring.scale_int(&pi, ring.p() as i64);
    }
    Ok(acc)
}

/// Euler product over G_m^d against the cohomological expression built
/// from det(1 - ΨT).
pub fn check_torus_identity(c: &UnitCrystal, bound: usize, opts: &EulerOptions) -> Result<VerificationReport> {
    let dm = dwork::dwork_matrix(c)?;
    let lhs = euler::euler_product_with(c, Region::Gm, bound, opts)?;
    let rhs = torus_l_from_char_poly(c.ring(), dm.char_poly(), c.dim(), bound)?;
    let mut r = compare_series("prop416", &lhs, &rhs);
    r = r.with_series("P", &TruncatedSeries::from_coeffs(c.ring(), dm.char_poly().to_vec(), dm.size()));
    Ok(r)
}

/// trace(Ψ^n) against the point sum for n = 1..=n_max. The `lhs`/`rhs`
/// series hold the traces at index n - 1.
pub fn check_traces(c: &UnitCrystal, n_max: u32) -> Result<VerificationReport> {
    let dm = dwork::dwork_matrix(c)?;
    let ring = c.ring();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for n in 1..=n_max {
        lhs.push(dm.trace_power(n as u64));
        rhs.push(dwork::trace_formula_rhs(c, n)?);
    }
    let b = (n_max as usize).saturating_sub(1);
    let l = TruncatedSeries::from_coeffs(ring, lhs, b);
    let r = TruncatedSeries::from_coeffs(ring, rhs, b);
    let mut report = compare_series("trace", &l, &r);
    if let Some(w) = report.witness.as_mut() {
        w.index += 1;
    }
    Ok(report)
}

/// L(D(a)) = L(D(ab)) · L(Z(b) ∩ D(a)).
pub fn check_stratification(
    c: &UnitCrystal,
    b: &LaurentPolynomial,
    bound: usize,
    opts: &EulerOptions,
) -> Result<VerificationReport> {
    let a = c.a();
    let whole = euler::euler_product_filtered(c, &PointFilter::stratum(&[a], &[])?, bound, opts)?;
    let open = euler::euler_product_filtered(c, &PointFilter::stratum(&[a, b], &[])?, bound, opts)?;
    let closed = euler::euler_product_filtered(c, &PointFilter::stratum(&[a], &[b])?, bound, opts)?;
    Ok(compare_series("strat", &whole, &open.mul(&closed)?))
}

/// The Euler product of the trivial rank-one crystal over G_m^d against
/// ∏_i (1 - p^i T)^{(-1)^{d-i+1} C(d,i)}.
pub fn zeta_sanity(p: u64, d: usize, bound: usize, precision: u32) -> Result<VerificationReport> {
    let ring = Arc::new(RingDescriptor::base(p, precision)?);
    let one = LaurentPolynomial::one(&ring, d);
    let c = UnitCrystal::new(one.clone(), vec![vec![one]], 0)?;
    let lhs = euler::euler_product(&c, Region::Gm, bound)?;
    let rhs = torus_l_from_char_poly(&ring, &[ring.one(), ring.from_int(-1)], d, bound)?;
    Ok(compare_series("zeta", &lhs, &rhs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatzRatio {
    pub dwork: DworkMatrix,
    pub split: UnitNilSplit,
    /// Euler product over D(a) in Λ̃.
    pub euler: TruncatedSeries,
    /// Euler(D(a)) · P_unit^{-(-1)^{d+1}} in Λ̃.
    pub q_tilde: TruncatedSeries,
    /// Image of `q_tilde` in Λ.
    pub q: TruncatedSeries,
}

pub fn katz_ratio(pair: &CrystalPair, bound: usize, opts: &EulerOptions) -> Result<KatzRatio> {
    let c = &pair.lifted;
    let dm = dwork::dwork_matrix(c)?;
    let split = dwork::unit_nil_split(&dm)?;
    let euler = euler::euler_product_with(c, Region::DOfA, bound, opts)?;
    let l = dwork::structure_map_l(&split, c.ring(), c.dim(), bound)?;
    let q_tilde = euler.mul(&l.inverse()?)?;
    let q = q_tilde.map_to(pair.lift.lambda())?;
    Ok(KatzRatio {
        dwork: dm,
        split,
        euler,
        q_tilde,
        q,
    })
}

/// First k ≥ 1 whose coefficient is not in the maximal ideal (or index 0
/// if the constant term is not 1).
pub fn check_maximal_ideal_coefficients(q: &TruncatedSeries) -> Result<Option<Witness>> {
    let ring = q.ring();
    let w = |i: usize| Witness {
        kind: WitnessKind::CoefficientNotInMaximalIdeal,
        index: i,
        left: q.coeff(i).coords.clone(),
        right: None,
    };
    if *q.coeff(0) != ring.one() {
        return Ok(Some(w(0)));
    }
    for i in 1..=q.bound() {
        if !ring.is_in_maximal_ideal(q.coeff(i))? {
            return Ok(Some(w(i)));
        }
    }
    Ok(None)
}

/// Decides whether N/D is a polynomial over a local ring with nilpotent
/// maximal ideal, for D(0) = 1 and D ≡ 1 mod 𝔪. The quotient then has
/// degree at most deg N + (e - 1) deg D with e the nilpotency bound, so it
/// is enough to expand N/D to deg N + e deg D and check the remainder.
pub fn certify_polynomial_ratio(
    ring: &Arc<RingDescriptor>,
    n: &[RingElement],
    d: &[RingElement],
) -> Result<std::result::Result<Vec<RingElement>, Witness>> {
    let e = ring.nilpotency_bound()?;
    let deg_n = linalg::poly_degree(&**ring, n).unwrap_or(0);
    let deg_d = linalg::poly_degree(&**ring, d).unwrap_or(0);
    let limit = deg_n + e * deg_d;
    let d_series = TruncatedSeries::from_coeffs(ring, d.to_vec(), limit);
    let n_series = TruncatedSeries::from_coeffs(ring, n.to_vec(), limit);
    let q = n_series.mul(&d_series.inverse()?)?;
    let mut quotient = q.coeffs().to_vec();
    linalg::poly_trim(&**ring, &mut quotient);
    let rem = linalg::poly_sub(&**ring, n, &linalg::poly_mul(&**ring, d, &quotient));
    match rem.iter().position(|c| !ring.is_zero(c)) {
        None => Ok(Ok(quotient)),
        Some(i) => Ok(Err(Witness {
            kind: WitnessKind::NotPolynomial,
            index: i,
            left: rem[i].coords.clone(),
            right: None,
        })),
    }
}

/// Degree in z of a one-variable Laurent polynomial reduced mod p, after
/// clearing the power of z. `None` when the reduction vanishes.
fn residue_span(a: &LaurentPolynomial) -> Option<usize> {
    let p = a.ring().p();
    let exps: Vec<i64> = a
        .terms()
        .filter(|(_, c)| c.coords[0] % p != 0)
        .map(|(e, _)| e[0])
        .collect();
    let lo = *exps.iter().min()?;
    let hi = *exps.iter().max()?;
    Some((hi - lo) as usize)
}

fn unit_root_ratio_check(pair: &CrystalPair, bound: usize, opts: &EulerOptions) -> Result<(VerificationReport, KatzRatio)> {
    let k = katz_ratio(pair, bound, opts)?;
    let lambda = pair.lift.lambda();
    let mut report = VerificationReport::new("katz", Status::Pass)
        .with_series("Q", &k.q)
        .with_series("euler", &k.euler);
    if let Some(w) = check_maximal_ideal_coefficients(&k.q)? {
        report.status = Status::Fail;
        report.witness = Some(w);
        return Ok((report, k));
    }
    let c = &pair.lifted;
    let span = if c.dim() == 1 { residue_span(c.a()) } else { None };
    let Some(span) = span.filter(|&s| s <= MAX_DEGREE) else {
        report.status = Status::CertifiedToBound;
        report.notes.push(format!("coefficients checked through T^{bound}"));
        return Ok((report, k));
    };

    // d = 1: Q = P_nil ∏_{x ∈ Z(a)} det(1 - A_x T^{δ}) / P(pT) exactly.
    let ring = c.ring();
    let rank = c.rank();
    let z_filter = PointFilter::region(c.a(), Region::ZOfA)?;
    let full = rank * span;
    let mut num = k.split.p_nil.clone();
    for delta in 1..=span {
        let part = euler::degree_partial_product(c, &z_filter, delta, full, opts)?;
        num = linalg::poly_mul(&**ring, &num, part.coeffs());
    }
    let den = TruncatedSeries::from_coeffs(ring, k.dwork.char_poly().to_vec(), k.dwork.size())
        .scale_variable(&ring.from_int(ring.p() as i64));
    let project = |v: &[RingElement]| -> Vec<RingElement> { v.iter().map(|e| pair.lift.project(e)).collect() };
    let num = project(&num);
    let den = project(den.coeffs());
    match certify_polynomial_ratio(lambda, &num, &den)? {
        Err(w) => {
            report.status = Status::Fail;
            report.witness = Some(w);
        }
        Ok(poly) => {
            let exact = TruncatedSeries::from_coeffs(lambda, poly.clone(), bound);
            if let Some(i) = exact.first_mismatch(&k.q) {
                report.status = Status::Fail;
                report.witness = Some(Witness {
                    kind: WitnessKind::Mismatch,
                    index: i,
                    left: exact.coeff(i).coords.clone(),
                    right: Some(k.q.coeff(i).coords.clone()),
                });
            } else {
                let deg = linalg::poly_degree(&**lambda, &poly).unwrap_or(0);
                report = report.with_series("Q_polynomial", &TruncatedSeries::from_coeffs(lambda, poly, deg));
            }
        }
    }
    Ok((report, k))
}

/// The Katz ratio lies in 1 + 𝔪 T Λ[[T]]; in dimension one it is moreover
/// certified to be a polynomial.
pub fn check_unit_root_ratio(pair: &CrystalPair, bound: usize, opts: &EulerOptions) -> Result<VerificationReport> {
    unit_root_ratio_check(pair, bound, opts).map(|(r, _)| r)
}

/// Euler products computed over Λ̃ and projected to Λ agree with those
/// computed over Λ directly, and the Katz ratio is 1 modulo 𝔪.
pub fn check_specialization(pair: &CrystalPair, bound: usize, opts: &EulerOptions) -> Result<VerificationReport> {
    let lambda = pair.lift.lambda();
    let over_tilde = euler::euler_product_with(&pair.lifted, Region::DOfA, bound, opts)?.map_to(lambda)?;
    let over_lambda = euler::euler_product_with(&pair.lambda_crystal, Region::DOfA, bound, opts)?;
    let mut report = compare_series("specialization", &over_tilde, &over_lambda);
    if report.status.is_failure() {
        return Ok(report);
    }
    let k = katz_ratio(pair, bound, opts)?;
    let residue: Vec<u32> = k
        .q
        .coeffs()
        .iter()
        .map(|c| lambda.to_residue(c))
        .collect::<Result<_>>()?;
    if let Some(i) = residue.iter().enumerate().position(|(i, &v)| v != u32::from(i == 0)) {
        report.status = Status::Fail;
        report.witness = Some(Witness {
            kind: WitnessKind::CoefficientNotInMaximalIdeal,
            index: i,
            left: k.q.coeff(i).coords.clone(),
            right: None,
        });
    }
    Ok(report.with_series("Q", &k.q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;
    use crate::ring::FlatLift;

    fn pair(p: u64, lambda_pexp: u32, precision: u32, r: &str, a: &str, dim: usize) -> CrystalPair {
        let lam = Arc::new(RingDescriptor::local_algebra(p, lambda_pexp, lambda_pexp, &[0, 1]).unwrap());
        let lift = FlatLift::new(&lam, precision).unwrap();
        let a = parse_laurent(a, &lam, dim).unwrap();
        let m = vec![vec![parse_laurent(r, &lam, dim).unwrap()]];
        let c = UnitCrystal::new(a, m, 0).unwrap();
        CrystalPair::prepare(&c, &lift, None).unwrap()
    }

    #[test]
    fn torus_identity_rank_one_p2() {
        let pr = pair(2, 3, 3, "z1", "1", 1);
        let r = check_torus_identity(&pr.lifted, 3, &EulerOptions::default()).unwrap();
        assert_eq!(r.status, Status::Pass);
        let ring = pr.lifted.ring();
        assert_eq!(
            TruncatedSeries::from_json(ring, &r.series["lhs"]).unwrap(),
            TruncatedSeries::from_ints(ring, &[1, 1, 2, 4], 3)
        );
    }

    #[test]
    fn torus_expression_for_trivial_polynomial() {
        let r = Arc::new(RingDescriptor::base(3, 2).unwrap());
        let s = torus_l_from_char_poly(&r, &[r.one()], 2, 4).unwrap();
        assert_eq!(s, TruncatedSeries::one(&r, 4));
        // d = 1, P = 1 - T: (1 - T)/(1 - 3T)
        let s = torus_l_from_char_poly(&r, &[r.one(), r.from_int(-1)], 1, 2).unwrap();
        assert_eq!(s, TruncatedSeries::from_ints(&r, &[1, 2, 6], 2));
    }

    #[test]
    fn katz_example() {
        let pr = pair(2, 2, 4, "z1", "1", 1);
        let r = check_unit_root_ratio(&pr, 2, &EulerOptions::default()).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        let lam = pr.lift.lambda();
        assert_eq!(
            TruncatedSeries::from_json(lam, &r.series["Q"]).unwrap(),
            TruncatedSeries::from_ints(lam, &[1, 2, 0], 2)
        );
        assert!(r.series.contains_key("Q_polynomial"));
    }

    #[test]
    fn certification_examples() {
        let r = Arc::new(RingDescriptor::local_algebra(2, 2, 2, &[0, 1]).unwrap());
        let ints = |v: &[i64]| v.iter().map(|&c| r.from_int(c)).collect::<Vec<_>>();
        let q = certify_polynomial_ratio(&r, &ints(&[1]), &ints(&[1, -2])).unwrap().unwrap();
        assert_eq!(q, ints(&[1, 2]));
        let w = certify_polynomial_ratio(&r, &ints(&[1]), &ints(&[1, -1])).unwrap().unwrap_err();
        assert_eq!(w.kind, WitnessKind::NotPolynomial);
    }

    #[test]
    fn maximal_ideal_witness() {
        let r = Arc::new(RingDescriptor::base(2, 2).unwrap());
        let q = TruncatedSeries::from_ints(&r, &[1, 1], 2);
        let w = check_maximal_ideal_coefficients(&q).unwrap().unwrap();
        assert_eq!((w.kind, w.index), (WitnessKind::CoefficientNotInMaximalIdeal, 1));
        let q = TruncatedSeries::from_ints(&r, &[1, 2, 2], 2);
        assert_eq!(check_maximal_ideal_coefficients(&q).unwrap(), None);
    }

    #[test]
    fn zeta_small() {
        for d in 1..=2 {
            for b in [0, 1, 4] {
                assert_eq!(zeta_sanity(2, d, b, 3).unwrap().status, Status::Pass);
            }
        }
    }

    #[test]
    fn stratification_examples() {
        let pr = pair(2, 3, 3, "z1", "1", 1);
        let c = &pr.lifted;
        let ring = c.ring();
        let opts = EulerOptions::default();
        for b in ["1", "1", "z1 + 1"] {
            let b = parse_laurent(b, ring, 1).unwrap();
            assert_eq!(check_stratification(c, &b, 4, &opts).unwrap().status, Status::Pass);
        }
        let a = c.a().clone();
        assert_eq!(check_stratification(c, &a, 4, &opts).unwrap().status, Status::Pass);
    }

    #[test]
    fn report_json_shape() {
        let r = Arc::new(RingDescriptor::base(2, 2).unwrap());
        let a = TruncatedSeries::from_ints(&r, &[1, 1], 1);
        let b = TruncatedSeries::from_ints(&r, &[1, 3], 1);
        let rep = compare_series("x", &a, &b);
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["status"], "fail");
        assert_eq!(json["witness"]["index"], 1);
        assert_eq!(json["witness"]["kind"], "mismatch");
        let ok = compare_series("x", &a, &a);
        assert!(serde_json::to_value(&ok).unwrap().get("witness").is_none());
        assert_eq!(
            serde_json::to_value(Status::CertifiedToBound).unwrap(),
            "certified-to-bound"
        );
    }
}
