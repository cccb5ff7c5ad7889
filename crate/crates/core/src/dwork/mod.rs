//! The cohomological side: the Cartier-twisted Frobenius on
//! H^0(P^d, Ω^d(u))^m, its reciprocal characteristic polynomial, the trace
//! formula, and the unit-root factorization.

mod hensel;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::crystal::UnitCrystal;
use crate::error::{Error, Result};
use crate::euler::PointEvaluator;
use crate::laurent::LaurentPolynomial;
use crate::linalg::{self, Matrix};
use crate::ring::{inv_mod_prime_power, RingDescriptor, RingElement};
use crate::series::TruncatedSeries;

pub use hensel::{hensel_lift, unit_nil_split, UnitNilSplit};

/// Exponents β of the basis z^β dz/(z_1⋯z_d) of H^0(P^d, Ω^d(u)):
/// β_i ≥ 1 and Σβ_i < u, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaBasis {
    pub d: usize,
    pub u: u32,
    pub betas: Vec<Vec<i64>>,
}

impl OmegaBasis {
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }
}

pub fn omega_basis(d: usize, u: u32) -> OmegaBasis {
    fn rec(d: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        let remaining = (d - prefix.len() - 1) as i64;
        for b in 1..=budget - remaining {
            prefix.push(b);
            rec(d, budget - b, prefix, out);
            prefix.pop();
        }
    }
    let mut betas = Vec::new();
    if d > 0 && u as i64 > d as i64 {
        rec(d, u as i64 - 1, &mut Vec::new(), &mut betas);
    }
    OmegaBasis { d, u, betas }
}

/// The n-th power of the Cartier operator on g · dz/(z_1⋯z_d): keeps the
/// monomials whose exponents are all divisible by p^n and divides them.
pub fn cartier(g: &LaurentPolynomial, n: u32) -> Result<LaurentPolynomial> {
    let q = (g.ring().p() as i64)
        .checked_pow(n)
        .ok_or(Error::ExponentOverflow)?;
    LaurentPolynomial::from_terms(
        g.ring(),
        g.dim(),
        g.terms()
            .filter(|(e, _)| e.iter().all(|&k| k % q == 0))
            .map(|(e, c)| (e.iter().map(|&k| k / q).collect(), c.clone())),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DworkMatrix {
    ring: Arc<RingDescriptor>,
    rank: usize,
    basis: OmegaBasis,
    psi: Matrix<RingElement>,
    p_poly: Vec<RingElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DworkJson {
    pub psi_size: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<u64>>,
    #[serde(rename = "P_unit")]
    pub p_unit: Vec<Vec<u64>>,
    #[serde(rename = "P_nil")]
    pub p_nil: Vec<Vec<u64>>,
    pub traces: Vec<Vec<u64>>,
}

/// The matrix of f -> C(r f) on H^0(Ω^d(u))^m. Rows are indexed by
/// (i, β') and columns by (j, β), with entry the coefficient of z^{pβ'-β}
/// in r_ji. Taking the transpose block pattern makes trace(Ψ^n) pair with
/// the product r(x̃) r(σx̃) ⋯ r(σ^{n-1}x̃) used by the local factors.
pub fn dwork_matrix(c: &UnitCrystal) -> Result<DworkMatrix> {
    if !c.normal_form().monomial_twisted {
        return Err(Error::NormalFormMissing("monomial twist not applied".into()));
    }
    let u = c
        .u()
        .ok_or_else(|| Error::NormalFormMissing("sheaf twist u not chosen".into()))?;
    let basis = omega_basis(c.dim(), u);
    let nb = basis.len();
    let m = c.rank();
    let p = c.p() as i64;
    let ring = c.ring();
    let mut psi = vec![vec![ring.zero(); m * nb]; m * nb];
    for i in 0..m {
        for (b1, beta1) in basis.betas.iter().enumerate() {
            for j in 0..m {
                let r = c.entry(j, i);
                for (b0, beta0) in basis.betas.iter().enumerate() {
                    let e: Vec<i64> = beta1.iter().zip(beta0).map(|(&b1, &b0)| p * b1 - b0).collect();
                    psi[i * nb + b1][j * nb + b0] = r.coeff_extract(&e);
                }
            }
        }
    }
    let p_poly = linalg::char_poly_reciprocal(&**ring, &psi);
    Ok(DworkMatrix {
        ring: ring.clone(),
        rank: m,
        basis,
        psi,
        p_poly,
    })
}

impl DworkMatrix {
    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn basis(&self) -> &OmegaBasis {
        &self.basis
    }

    pub fn size(&self) -> usize {
        self.psi.len()
    }

    pub fn psi(&self) -> &Matrix<RingElement> {
        &self.psi
    }

    /// det(1 - Ψ T), coefficients c_0 = 1, ..., c_size.
    pub fn char_poly(&self) -> &[RingElement] {
        &self.p_poly
    }

    pub fn trace_power(&self, n: u64) -> RingElement {
        trace_power(&self.ring, &self.psi, n)
    }

    pub fn to_json(&self, split: &UnitNilSplit, traces: &[RingElement]) -> DworkJson {
        let coords = |v: &[RingElement]| v.iter().map(|c| c.coords.clone()).collect();
        DworkJson {
            psi_size: self.size(),
            p: coords(&self.p_poly),
            p_unit: coords(&split.p_unit),
            p_nil: coords(&split.p_nil),
            traces: coords(traces),
        }
    }
}

/// det(1 - M T) for an arbitrary square matrix.
pub fn char_poly_reciprocal(ring: &RingDescriptor, m: &Matrix<RingElement>) -> Vec<RingElement> {
    linalg::char_poly_reciprocal(ring, m)
}

pub fn trace_power(ring: &RingDescriptor, m: &Matrix<RingElement>, n: u64) -> RingElement {
    linalg::trace(ring, &linalg::mat_pow(ring, m, n))
}

/// f = r · F*r ⋯ (F*)^{n-1} r as a matrix of Laurent polynomials.
pub fn frobenius_power_product(c: &UnitCrystal, n: u32) -> Result<Vec<Vec<LaurentPolynomial>>> {
    let m = c.rank();
    let mul = |a: &[Vec<LaurentPolynomial>], b: &[Vec<LaurentPolynomial>]| -> Result<Vec<Vec<LaurentPolynomial>>> {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..m).try_fold(LaurentPolynomial::zero(c.ring(), c.dim()), |acc, k| {
                            acc.add(&a[i][k].mul(&b[k][j])?)
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let mut acc: Vec<Vec<LaurentPolynomial>> = c.matrix().to_vec();
    for k in 1..n {
        let next = c
            .matrix()
            .iter()
            .map(|row| row.iter().map(|f| f.frobenius_pullback(k)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        acc = mul(&acc, &next)?;
    }
    Ok(acc)
}

fn scalar_from_witt(w: &RingDescriptor, e: &RingElement) -> Result<u64> {
    if e.coords.iter().skip(1).any(|&v| v != 0) {
        return Err(Error::NotScalar);
    }
    Ok(e.coords[0] % w.characteristic_modulus())
}

/// (p^n - 1)^{-d} Σ_{x ∈ G_m^d(F_{p^n})} trace(r(x̃) r(σx̃) ⋯ r(σ^{n-1}x̃)).
///
/// The sum is evaluated monomial by monomial: for f = trace of the
/// Frobenius product, Σ_x f(x̃) = Σ_E c_E ∏_i S(E_i) with
/// S(e) = Σ_{t ∈ F_{p^n}^×} Teich(t)^e computed in W_n.
pub fn trace_formula_rhs(c: &UnitCrystal, n: u32) -> Result<RingElement> {
    let ring = c.ring();
    let f = frobenius_power_product(c, n)?;
    let mut tr = LaurentPolynomial::zero(ring, c.dim());
    for (i, row) in f.iter().enumerate() {
        tr = tr.add(&row[i])?;
    }
    let ev = PointEvaluator::new(ring, n as usize)?;
    let witt = RingDescriptor::witt(ring.p(), ring.exponent(), n as usize)?;
    let order = ev.field().unit_order() as i64;
    let mut sums: HashMap<i64, u64> = HashMap::new();
    let mut power_sum = |e: i64| -> Result<u64> {
        let e = e.rem_euclid(order);
        if let Some(&v) = sums.get(&e) {
            return Ok(v);
        }
        let mut acc = witt.zero();
        for k in 0..order {
            witt.add_assign(&mut acc, ev.teichmuller_by_log((k * e % order) as u64));
        }
        let v = scalar_from_witt(&witt, &acc)?;
        sums.insert(e, v);
        Ok(v)
    };
    let q = ring.characteristic_modulus();
    let mut total = ring.zero();
    for (e, coeff) in tr.terms() {
        let mut weight = 1u64;
        for &k in e {
            weight = weight * power_sum(k)? % q;
            if weight == 0 {
                break;
            }
        }
        if weight != 0 {
            ring.add_assign(&mut total, &ring.scale_int(coeff, weight as i64));
        }
    }
    Ok(ring.scale_int(&total, point_count_inverse(ring, n, c.dim()) as i64))
}

/// (p^n - 1)^{-d} mod p^k.
fn point_count_inverse(ring: &RingDescriptor, n: u32, d: usize) -> u64 {
    let q = ring.characteristic_modulus();
    let p = ring.p();
    let pn1 = ((p as u128).pow(n) - 1) % q as u128;
    let inv = inv_mod_prime_power(pn1 as u64, q, p);
    crate::ring::fp_poly::pow_mod(inv, d as u64, q)
}

/// The same sum evaluated point by point in Λ̃ ⊗ W_n; used as an
/// independent check on [`trace_formula_rhs`].
pub fn trace_formula_rhs_pointwise(c: &UnitCrystal, n: u32) -> Result<RingElement> {
    let ring = c.ring();
    let ev = PointEvaluator::new(ring, n as usize)?;
    let order = ev.field().unit_order() as usize;
    let total_points = order.pow(c.dim() as u32);
    let t = ev.tensor();
    let mut acc = t.zero();
    let mut logs = vec![0u32; c.dim()];
    for idx in 0..total_points {
        let mut rest = idx;
        for l in logs.iter_mut() {
            *l = (rest % order) as u32;
            rest /= order;
        }
        let a = ev.frobenius_product(c.matrix(), &logs);
        t.add_assign(&mut acc, &linalg::trace(t, &a));
    }
    let sum = t.coerce_to_scalar(&acc)?;
    Ok(ring.scale_int(&sum, point_count_inverse(ring, n, c.dim()) as i64))
}

/// P_unit(T)^{(-1)^{d+1}} modulo T^{bound+1}.
pub fn structure_map_l(split: &UnitNilSplit, ring: &Arc<RingDescriptor>, d: usize, bound: usize) -> Result<TruncatedSeries> {
    let s = TruncatedSeries::from_coeffs(ring, split.p_unit.clone(), bound);
    s.pow_signed(if d % 2 == 1 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;

    fn zq(p: u64, n: u32) -> Arc<RingDescriptor> {
        Arc::new(RingDescriptor::base(p, n).unwrap())
    }

    fn normalized(ring: &Arc<RingDescriptor>, dim: usize, m: &[&[&str]]) -> UnitCrystal {
        let a = parse_laurent("1", ring, dim).unwrap();
        let matrix = m
            .iter()
            .map(|row| row.iter().map(|s| parse_laurent(s, ring, dim).unwrap()).collect())
            .collect();
        UnitCrystal::new(a, matrix, 0)
            .unwrap()
            .assume_normal_form()
            .unwrap()
            .with_sheaf_twist()
            .unwrap()
    }

    #[test]
    fn basis_examples() {
        assert_eq!(omega_basis(1, 2).betas, vec![vec![1]]);
        assert!(omega_basis(1, 1).is_empty());
        assert_eq!(omega_basis(2, 4).betas, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn basis_sizes_are_binomial() {
        fn binom(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for d in 1..=3 {
            for u in 1..=8u32 {
                let b = omega_basis(d, u);
                assert_eq!(b.len() as u64, binom(u as u64 - 1, d as u64));
                assert!(b.betas.iter().all(|beta| beta.iter().all(|&x| x >= 1)));
                let mut sorted = b.betas.clone();
                sorted.sort();
                assert_eq!(sorted, b.betas);
            }
        }
    }

    #[test]
    fn cartier_examples() {
        let r = zq(3, 2);
        let zp = parse_laurent("z1^3", &r, 1).unwrap();
        assert_eq!(cartier(&zp, 1).unwrap(), parse_laurent("z1", &r, 1).unwrap());
        let z = parse_laurent("z1", &r, 1).unwrap();
        assert!(cartier(&z, 1).unwrap().is_zero());
        let mixed = parse_laurent("z1^9 + 2*z1^3 + z1^2", &r, 1).unwrap();
        assert_eq!(cartier(&mixed, 2).unwrap(), parse_laurent("z1", &r, 1).unwrap());
    }

    #[test]
    fn cartier_is_semilinear() {
        let r = zq(2, 3);
        let a = parse_laurent("z1 + 3*z2^2 + z1^-1*z2", &r, 2).unwrap();
        let w = parse_laurent("z1^2 + z1*z2 + 5*z2^4 + z1^3*z2", &r, 2).unwrap();
        let lhs = a.mul(&cartier(&w, 1).unwrap()).unwrap();
        let rhs = cartier(&a.frobenius_pullback(1).unwrap().mul(&w).unwrap(), 1).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dwork_matrix_examples() {
        let r = zq(2, 3);
        let c = normalized(&r, 1, &[&["z1"]]);
        let dm = dwork_matrix(&c).unwrap();
        assert_eq!(dm.psi(), &vec![vec![r.one()]]);
        assert_eq!(dm.char_poly(), &[r.one(), r.from_int(-1)]);

        let r3 = zq(3, 2);
        let c = normalized(&r3, 1, &[&["z1"]]);
        let dm = dwork_matrix(&c).unwrap();
        assert_eq!(dm.size(), 0);
        assert_eq!(dm.char_poly(), &[r3.one()]);

        let c = normalized(&r, 1, &[&["z1 + z1^2"]]);
        assert_eq!(c.u(), Some(3));
        let dm = dwork_matrix(&c).unwrap();
        assert_eq!(dm.psi(), &linalg::identity(&*r, 2));
        assert_eq!(dm.char_poly(), &[r.one(), r.from_int(-2), r.one()]);
    }

    #[test]
    fn dwork_requires_normal_form() {
        let r = zq(2, 3);
        let a = parse_laurent("1", &r, 1).unwrap();
        let c = UnitCrystal::new(a, vec![vec![parse_laurent("z1", &r, 1).unwrap()]], 0).unwrap();
        assert!(matches!(dwork_matrix(&c), Err(Error::NormalFormMissing(_))));
    }

    #[test]
    fn trace_examples() {
        let r = zq(2, 3);
        let c = normalized(&r, 1, &[&["z1"]]);
        let dm = dwork_matrix(&c).unwrap();
        for n in 1..=2 {
            assert_eq!(dm.trace_power(n), r.one());
            assert_eq!(trace_formula_rhs(&c, n as u32).unwrap(), r.one());
        }
        let r3 = zq(3, 2);
        let c = normalized(&r3, 1, &[&["z1"]]);
        let dm = dwork_matrix(&c).unwrap();
        assert_eq!(dm.trace_power(1), r3.zero());
        assert_eq!(trace_formula_rhs(&c, 1).unwrap(), r3.zero());
    }

    #[test]
    fn factorized_and_pointwise_sums_agree() {
        let r = zq(3, 3);
        let c = normalized(&r, 2, &[&["z1*z2 + 2*z1^2*z2", "z1*z2"], &["5*z1*z2^2", "z1^2*z2"]]);
        for n in 1..=2 {
            assert_eq!(
                trace_formula_rhs(&c, n).unwrap(),
                trace_formula_rhs_pointwise(&c, n).unwrap()
            );
        }
    }

    #[test]
    fn trace_formula_for_non_commuting_rank_two() {
        let r = zq(2, 4);
        let c = normalized(&r, 1, &[&["z1 + z1^2", "3*z1^3"], &["z1^2", "5*z1"]]);
        let dm = dwork_matrix(&c).unwrap();
        for n in 1..=4u32 {
            assert_eq!(dm.trace_power(n as u64), trace_formula_rhs(&c, n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn structure_map_exponent_depends_on_parity() {
        let r = zq(2, 2);
        let split = UnitNilSplit {
            p_unit: vec![r.one(), r.from_int(-1)],
            p_nil: vec![r.one()],
            unit_dim: 1,
        };
        assert_eq!(
            structure_map_l(&split, &r, 1, 3).unwrap(),
            TruncatedSeries::from_ints(&r, &[1, -1], 3)
        );
        assert_eq!(
            structure_map_l(&split, &r, 2, 3).unwrap(),
            TruncatedSeries::from_ints(&r, &[1, 1, 1, 1], 3)
        );
        let trivial = UnitNilSplit {
            p_unit: vec![r.one()],
            p_nil: vec![r.one()],
            unit_dim: 0,
        };
        assert_eq!(structure_map_l(&trivial, &r, 1, 3).unwrap(), TruncatedSeries::one(&r, 3));
    }
}
