//! Closed points of the torus G_m^d over F_p and the Euler product of local
//! factors det(1 - A T^δ) at their Teichmüller lifts.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::crystal::UnitCrystal;
use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::linalg::{self, Matrix};
use crate::ring::{FiniteField, RingDescriptor, RingElement};
use crate::series::TruncatedSeries;

/// Largest point degree (and series bound) accepted by the Euler pipeline.
pub const MAX_DEGREE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Gm,
    DOfA,
    ZOfA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRegion {
    DOfA,
    ZOfA,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosedPoint {
    pub delta: usize,
    /// Field elements of F_{p^δ}, encoded by their base-p digit vectors on
    /// 1, y, ..., y^{δ-1} for the standard modulus.
    pub coords: Vec<u32>,
    pub region: PointRegion,
}

/// The reduction mod p of a Laurent polynomial with coefficients in the
/// prime subring, used to decide vanishing at points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResiduePolynomial {
    terms: Vec<(Vec<i64>, u64)>,
}

impl ResiduePolynomial {
    pub fn from_laurent(f: &LaurentPolynomial) -> Result<Self> {
        let p = f.ring().p();
        let mut terms = Vec::new();
        for (e, c) in f.terms() {
            if c.coords.iter().skip(1).any(|&v| v != 0) {
                return Err(Error::NonIntegerCoefficient);
            }
            let v = c.coords[0] % p;
            if v != 0 {
                terms.push((e.clone(), v));
            }
        }
        Ok(ResiduePolynomial { terms })
    }

    fn eval(&self, field: &FiniteField, logs: &[u32]) -> u32 {
        let order = field.unit_order() as i64;
        let mut acc = 0u32;
        for (e, c) in &self.terms {
            let l: i64 = e
                .iter()
                .zip(logs)
                .map(|(&k, &l)| (k % order) * l as i64)
                .sum::<i64>()
                .rem_euclid(order);
            let term = field.mul(field.from_int(*c as i64), field.exp(l as u64));
            acc = field.add(acc, term);
        }
        acc
    }

    fn key(&self) -> String {
        format!("{:?}", self.terms)
    }
}

/// Selects closed points: every `nonvanishing` polynomial is nonzero and
/// every `vanishing` polynomial is zero at the point.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PointFilter {
    pub nonvanishing: Vec<ResiduePolynomial>,
    pub vanishing: Vec<ResiduePolynomial>,
}

impl PointFilter {
    pub fn all() -> Self {
        PointFilter::default()
    }

    pub fn region(a: &LaurentPolynomial, region: Region) -> Result<Self> {
        let a = ResiduePolynomial::from_laurent(a)?;
        Ok(match region {
            Region::Gm => PointFilter::all(),
            Region::DOfA => PointFilter {
                nonvanishing: vec![a],
                vanishing: vec![],
            },
            Region::ZOfA => PointFilter {
                nonvanishing: vec![],
                vanishing: vec![a],
            },
        })
    }

    /// Points where every `open` polynomial is nonzero and every `closed`
    /// polynomial vanishes.
    pub fn stratum(open: &[&LaurentPolynomial], closed: &[&LaurentPolynomial]) -> Result<Self> {
        Ok(PointFilter {
            nonvanishing: open
                .iter()
                .map(|f| ResiduePolynomial::from_laurent(f))
                .collect::<Result<_>>()?,
            vanishing: closed
                .iter()
                .map(|f| ResiduePolynomial::from_laurent(f))
                .collect::<Result<_>>()?,
        })
    }

    fn accepts(&self, field: &FiniteField, logs: &[u32]) -> bool {
        self.nonvanishing.iter().all(|f| f.eval(field, logs) != 0)
            && self.vanishing.iter().all(|f| f.eval(field, logs) == 0)
    }

    pub fn key(&self) -> String {
        let open: Vec<String> = self.nonvanishing.iter().map(|f| f.key()).collect();
        let closed: Vec<String> = self.vanishing.iter().map(|f| f.key()).collect();
        format!("open={open:?};closed={closed:?}")
    }
}

fn check_degree(delta: usize) -> Result<()> {
    if delta > MAX_DEGREE {
        return Err(Error::DegreeBoundExceeded {
            requested: delta,
            bound: MAX_DEGREE,
        });
    }
    Ok(())
}

/// Log-coordinates (to the field's table generator) of the canonical
/// representatives of Frobenius orbits of exact size δ in (F_{p^δ}^×)^d.
fn orbit_representatives(field: &FiniteField, dim: usize, delta: usize) -> Vec<Vec<u32>> {
    let order = field.unit_order() as u64;
    let p = field.p();
    let proper: Vec<usize> = (1..delta).filter(|k| delta.is_multiple_of(*k)).collect();
    let total = (order as usize).pow(dim as u32);
    let mut reps = Vec::new();
    let mut logs = vec![0u32; dim];
    let mut conj = vec![0u32; dim];
    for idx in 0..total {
        let mut rest = idx;
        for l in logs.iter_mut() {
            *l = (rest % order as usize) as u32;
            rest /= order as usize;
        }
        // exact degree: no proper divisor k of δ fixes the tuple
        let fixed_early = proper.iter().any(|&k| {
            let pk = crate::ring::fp_poly::pow_mod(p, k as u64, order);
            logs.iter().all(|&l| (l as u64 * pk % order) as u32 == l)
        });
        if fixed_early {
            continue;
        }
        let enc: Vec<u32> = logs.iter().map(|&l| field.exp(l as u64)).collect();
        let mut minimal = true;
        let mut pk = 1u64;
        for _ in 1..delta {
            pk = pk * p % order;
            for (c, &l) in conj.iter_mut().zip(&logs) {
                *c = field.exp(l as u64 * pk % order);
            }
            if conj < enc {
                minimal = false;
                break;
            }
        }
        if minimal {
            reps.push(logs.clone());
        }
    }
    reps
}

/// All closed points of G_m^d of exact degree δ, one per Frobenius orbit,
/// classified by whether `a` vanishes there.
pub fn enumerate_closed_points(p: u64, dim: usize, delta: usize, a: &LaurentPolynomial) -> Result<Vec<ClosedPoint>> {
    check_degree(delta)?;
    if delta == 0 {
        return Ok(Vec::new());
    }
    let field = FiniteField::standard(p, delta)?;
    let a = ResiduePolynomial::from_laurent(a)?;
    Ok(orbit_representatives(&field, dim, delta)
        .into_iter()
        .map(|logs| {
            let region = if a.eval(&field, &logs) == 0 {
                PointRegion::ZOfA
            } else {
                PointRegion::DOfA
            };
            ClosedPoint {
                delta,
                coords: logs.iter().map(|&l| field.exp(l as u64)).collect(),
                region,
            }
        })
        .collect())
}

/// Evaluates crystal matrices at Teichmüller lifts of points of degree δ,
/// in Λ̃ ⊗ W_δ.
pub struct PointEvaluator {
    delta: usize,
    coeff_ring: Arc<RingDescriptor>,
    field: FiniteField,
    tensor: RingDescriptor,
    /// teich[k] = Teichmüller lift of γ^k for the table generator γ.
    teich: Vec<RingElement>,
}

impl PointEvaluator {
    pub fn new(coeff_ring: &Arc<RingDescriptor>, delta: usize) -> Result<Self> {
        check_degree(delta)?;
        let witt = Arc::new(RingDescriptor::witt(coeff_ring.p(), coeff_ring.exponent(), delta)?);
        let field = witt.witt_residue_field()?;
        let tensor = RingDescriptor::tensor(coeff_ring, &witt)?;
        let gamma = witt.teichmuller(&field.coeffs(field.exp(1)))?;
        let mut teich = Vec::with_capacity(field.unit_order() as usize);
        let mut cur = witt.one();
        for _ in 0..field.unit_order() {
            teich.push(cur.clone());
            cur = witt.mul(&cur, &gamma);
        }
        Ok(PointEvaluator {
            delta,
            coeff_ring: coeff_ring.clone(),
            field,
            tensor,
            teich,
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn tensor(&self) -> &RingDescriptor {
        &self.tensor
    }

    /// Discrete logs of a point's coordinates.
    pub fn logs(&self, coords: &[u32]) -> Result<Vec<u32>> {
        coords
            .iter()
            .map(|&c| self.field.log(c).ok_or(Error::ZeroResidue))
            .collect()
    }

    /// Teichmüller lift of the field element with the given log, in W_δ.
    pub fn teichmuller_by_log(&self, log: u64) -> &RingElement {
        &self.teich[(log % self.field.unit_order() as u64) as usize]
    }

    /// f(x̃) in Λ̃ ⊗ W_δ for the point with log-coordinates `logs`.
    pub fn eval(&self, f: &LaurentPolynomial, logs: &[u32]) -> RingElement {
        let order = self.field.unit_order() as i64;
        let mut acc = self.tensor.zero();
        for (e, c) in f.terms() {
            let l: i64 = e
                .iter()
                .zip(logs)
                .map(|(&k, &l)| (k % order) * l as i64)
                .sum::<i64>()
                .rem_euclid(order);
            self.tensor
                .add_tensor_product(&mut acc, c, &self.teich[l as usize]);
        }
        acc
    }

    pub fn eval_matrix(&self, m: &[Vec<LaurentPolynomial>], logs: &[u32]) -> Matrix<RingElement> {
        m.iter()
            .map(|row| row.iter().map(|f| self.eval(f, logs)).collect())
            .collect()
    }

    /// Log-coordinates of the k-th Frobenius conjugate x^{p^k}.
    pub fn conjugate_logs(&self, logs: &[u32], k: usize) -> Vec<u32> {
        let order = self.field.unit_order() as u64;
        let pk = crate::ring::fp_poly::pow_mod(self.field.p(), k as u64, order);
        logs.iter().map(|&l| (l as u64 * pk % order) as u32).collect()
    }

    /// A = r(x̃) r(σx̃) ... r(σ^{δ-1}x̃).
    pub fn frobenius_product(&self, m: &[Vec<LaurentPolynomial>], logs: &[u32]) -> Matrix<RingElement> {
        let mut acc = self.eval_matrix(m, logs);
        for k in 1..self.delta {
            let next = self.eval_matrix(m, &self.conjugate_logs(logs, k));
            acc = linalg::mat_mul(&self.tensor, &acc, &next);
        }
        acc
    }

    /// det(1 - A T^δ) as a polynomial in T over the coefficient ring.
    pub fn local_factor(&self, m: &[Vec<LaurentPolynomial>], logs: &[u32]) -> Result<Vec<RingElement>> {
        let a = self.frobenius_product(m, logs);
        let cp = linalg::char_poly_reciprocal(&self.tensor, &a);
        let mut out = vec![self.coeff_ring.zero(); (cp.len() - 1) * self.delta + 1];
        for (k, c) in cp.iter().enumerate() {
            out[k * self.delta] = self.tensor.coerce_to_scalar(c)?;
        }
        Ok(out)
    }
}

/// Local factor det(1 - A T^δ) at a closed point.
pub fn local_factor(c: &UnitCrystal, x: &ClosedPoint) -> Result<Vec<RingElement>> {
    let ev = PointEvaluator::new(c.ring(), x.delta)?;
    let logs = ev.logs(&x.coords)?;
    ev.local_factor(c.matrix(), &logs)
}

#[derive(Debug, Clone, Default)]
pub struct EulerOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub cache: Option<Cache>,
}

fn run_with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// ∏ det(1 - A_x T^δ) over the selected points of exact degree δ, modulo
/// T^{bound+1}.
pub fn degree_partial_product(
    c: &UnitCrystal,
    filter: &PointFilter,
    delta: usize,
    bound: usize,
    opts: &EulerOptions,
) -> Result<TruncatedSeries> {
    check_degree(delta)?;
    let ring = c.ring();
    if delta > bound {
        return Ok(TruncatedSeries::one(ring, bound));
    }
    let key = opts
        .cache
        .as_ref()
        .map(|_| crate::cache::content_key(&[&c.content_hash(), &filter.key()]));
    if let (Some(cache), Some(key)) = (&opts.cache, &key) {
        if let Some(s) = cache.load(key, delta, ring, bound) {
            return Ok(s);
        }
    }
    let ev = PointEvaluator::new(ring, delta)?;
    let reps: Vec<Vec<u32>> = orbit_representatives(ev.field(), c.dim(), delta)
        .into_iter()
        .filter(|logs| filter.accepts(ev.field(), logs))
        .collect();
    let factors = run_with_workers(opts.workers, || {
        reps.par_iter()
            .map(|logs| {
                ev.local_factor(c.matrix(), logs)
                    .map(|f| TruncatedSeries::from_coeffs(ring, f, bound))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut acc = TruncatedSeries::one(ring, bound);
    for f in &factors {
        acc = f.mul(&acc)?;
    }
    if let (Some(cache), Some(key)) = (&opts.cache, &key) {
        cache.store(key, delta, &acc)?;
    }
    Ok(acc)
}

/// ∏_x det(1 - A_x T^{d(x)})^{-1} over selected points of degree ≤ bound,
/// modulo T^{bound+1}.
pub fn euler_product_filtered(
    c: &UnitCrystal,
    filter: &PointFilter,
    bound: usize,
    opts: &EulerOptions,
) -> Result<TruncatedSeries> {
    check_degree(bound)?;
    let mut acc = TruncatedSeries::one(c.ring(), bound);
    for delta in 1..=bound {
        acc = acc.mul(&degree_partial_product(c, filter, delta, bound, opts)?)?;
    }
    acc.inverse()
}

pub fn euler_product(c: &UnitCrystal, region: Region, bound: usize) -> Result<TruncatedSeries> {
    euler_product_with(c, region, bound, &EulerOptions::default())
}

pub fn euler_product_with(
    c: &UnitCrystal,
    region: Region,
    bound: usize,
    opts: &EulerOptions,
) -> Result<TruncatedSeries> {
    let filter = PointFilter::region(c.a(), region)?;
    euler_product_filtered(c, &filter, bound, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_laurent;

    fn zq(p: u64, n: u32) -> Arc<RingDescriptor> {
        Arc::new(RingDescriptor::base(p, n).unwrap())
    }

    fn rank_one(ring: &Arc<RingDescriptor>, r: &str, a: &str) -> UnitCrystal {
        let a = parse_laurent(a, ring, 1).unwrap();
        let r = parse_laurent(r, ring, 1).unwrap();
        UnitCrystal::new(a, vec![vec![r]], 0).unwrap()
    }

    #[test]
    fn small_enumerations() {
        let r = zq(3, 1);
        let one = LaurentPolynomial::one(&r, 1);
        let pts = enumerate_closed_points(3, 1, 1, &one).unwrap();
        let coords: Vec<_> = pts.iter().map(|x| x.coords.clone()).collect();
        assert_eq!(coords, vec![vec![1], vec![2]]);

        let r2 = zq(2, 1);
        let one2 = LaurentPolynomial::one(&r2, 1);
        let pts = enumerate_closed_points(2, 1, 2, &one2).unwrap();
        assert_eq!(pts.len(), 1);
        // ω and ω² = ω + 1 are encoded 2 and 3; the representative is ω
        assert_eq!(pts[0].coords, vec![2]);

        let one_d2 = LaurentPolynomial::one(&r2, 2);
        let pts = enumerate_closed_points(2, 2, 1, &one_d2).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].coords, vec![1, 1]);
    }

    #[test]
    fn orbit_counts_sum_to_torus_size() {
        for p in [2u64, 3] {
            for d in 1..=2usize {
                let r = zq(p, 1);
                let one = LaurentPolynomial::one(&r, d);
                for delta in 1..=4usize {
                    if (p as usize).pow(delta as u32 * d as u32) > 10_000 {
                        continue;
                    }
                    let total: usize = (1..=delta)
                        .filter(|k| delta % k == 0)
                        .map(|k| k * enumerate_closed_points(p, d, k, &one).unwrap().len())
                        .sum();
                    assert_eq!(total, ((p as usize).pow(delta as u32) - 1).pow(d as u32));
                }
            }
        }
    }

    #[test]
    fn degree_bound_is_enforced() {
        let r = zq(2, 1);
        let one = LaurentPolynomial::one(&r, 1);
        assert_eq!(
            enumerate_closed_points(2, 1, 13, &one),
            Err(Error::DegreeBoundExceeded {
                requested: 13,
                bound: MAX_DEGREE
            })
        );
    }

    #[test]
    fn classification_by_a() {
        let r = zq(2, 1);
        let a = parse_laurent("z1 + 1", &r, 1).unwrap();
        let pts = enumerate_closed_points(2, 1, 1, &a).unwrap();
        assert_eq!(pts[0].region, PointRegion::ZOfA);
        let pts = enumerate_closed_points(2, 1, 2, &a).unwrap();
        assert_eq!(pts[0].region, PointRegion::DOfA);
    }

    #[test]
    fn local_factor_examples() {
        let r = zq(2, 3);
        let c = rank_one(&r, "z1", "1");
        let x1 = ClosedPoint {
            delta: 1,
            coords: vec![1],
            region: PointRegion::DOfA,
        };
        assert_eq!(local_factor(&c, &x1).unwrap(), vec![r.one(), r.from_int(-1)]);
        let omega = enumerate_closed_points(2, 1, 2, c.a()).unwrap().remove(0);
        assert_eq!(
            local_factor(&c, &omega).unwrap(),
            vec![r.one(), r.zero(), r.from_int(-1)]
        );
    }

    #[test]
    fn order_eight_point_over_f9() {
        let r = zq(3, 2);
        let c = rank_one(&r, "z1", "1");
        let ev = PointEvaluator::new(&r, 2).unwrap();
        // the table generator has order 8
        let t = ev.teichmuller_by_log(1).clone();
        let w = RingDescriptor::witt(3, 2, 2).unwrap();
        assert_eq!(w.pow(&t, 4), w.from_int(-1));
        assert_eq!(
            ev.local_factor(c.matrix(), &[1]).unwrap(),
            vec![r.one(), r.zero(), r.one()]
        );
    }

    #[test]
    fn worked_euler_products() {
        let r = zq(2, 3);
        let c = rank_one(&r, "z1", "1");
        assert_eq!(
            euler_product(&c, Region::Gm, 3).unwrap(),
            TruncatedSeries::from_ints(&r, &[1, 1, 2, 4], 3)
        );
        let r3 = zq(3, 2);
        let c3 = rank_one(&r3, "z1", "1");
        assert_eq!(euler_product(&c3, Region::Gm, 3).unwrap(), TruncatedSeries::one(&r3, 3));
    }

    #[test]
    fn trivial_crystal_counts_points() {
        for p in [2u64, 3, 5] {
            let r = zq(p, 3);
            let c = rank_one(&r, "1", "1");
            let num = TruncatedSeries::from_ints(&r, &[1, -1], 4);
            let den = TruncatedSeries::from_ints(&r, &[1, -(p as i64)], 4);
            assert_eq!(
                euler_product(&c, Region::Gm, 4).unwrap(),
                num.mul(&den.inverse().unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn local_factor_coefficients_descend() {
        let r = zq(2, 3);
        let c = rank_one(&r, "z1", "1");
        for delta in 1..=4 {
            for x in enumerate_closed_points(2, 1, delta, c.a()).unwrap() {
                local_factor(&c, &x).unwrap();
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let r = zq(3, 2);
        let c = rank_one(&r, "z1 + 2*z1^2", "1");
        let base = euler_product(&c, Region::Gm, 5).unwrap();
        for workers in [1, 2, 3] {
            let opts = EulerOptions {
                workers: Some(workers),
                cache: None,
            };
            assert_eq!(euler_product_with(&c, Region::Gm, 5, &opts).unwrap(), base);
        }
    }
}
