//! Splitting det(1 - ΨT) into unit-root and nilpotent parts by Hensel
//! lifting the factorization X^{s-r} · U(X) of the reversed polynomial
//! modulo the maximal ideal.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::ring::{FiniteField, RingDescriptor, RingElement};

use super::DworkMatrix;

const MAX_HENSEL_STEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitNilSplit {
    /// Factor whose reduction has the same degree as the reduction of P.
    pub p_unit: Vec<RingElement>,
    /// Factor congruent to 1 modulo the maximal ideal.
    pub p_nil: Vec<RingElement>,
    /// Degree of P_unit; equals the rank of the unit-root part of Ψ.
    pub unit_dim: usize,
}

type KPoly = Vec<u32>;

fn k_trim(f: &mut KPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn k_sub_mul(k: &FiniteField, a: &[u32], q: &[u32], b: &[u32]) -> KPoly {
    let mut out: KPoly = a.to_vec();
    let n = q.len() + b.len();
    if out.len() < n {
        out.resize(n, 0);
    }
    for (i, &x) in q.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.sub(out[i + j], k.mul(x, y));
        }
    }
    k_trim(&mut out);
    out
}

fn k_divrem(k: &FiniteField, a: &[u32], b: &[u32]) -> (KPoly, KPoly) {
    let mut r: KPoly = a.to_vec();
    k_trim(&mut r);
    let db = b.len() - 1;
    let inv = k.inv(b[db]).expect("nonzero leading coefficient");
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = k.mul(*r.last().unwrap(), inv);
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = k.sub(r[shift + j], k.mul(c, y));
        }
        k_trim(&mut r);
    }
    k_trim(&mut q);
    (q, r)
}

/// (s, t) with s·f + t·g = 1 for coprime f, g over the field.
fn k_bezout(k: &FiniteField, f: &[u32], g: &[u32]) -> Result<(KPoly, KPoly)> {
    let (mut r0, mut r1) = (f.to_vec(), g.to_vec());
    let (mut s0, mut s1): (KPoly, KPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (KPoly, KPoly) = (Vec::new(), vec![1]);
    k_trim(&mut r0);
    k_trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = k_divrem(k, &r0, &r1);
        let s = k_sub_mul(k, &s0, &q, &s1);
        let t = k_sub_mul(k, &t0, &q, &t1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    if r0.len() != 1 {
        return Err(Error::NotInvertible);
    }
    let inv = k.inv(r0[0]).ok_or(Error::NotInvertible)?;
    let scale = |v: KPoly| v.into_iter().map(|c| k.mul(c, inv)).collect();
    Ok((scale(s0), scale(t0)))
}

fn lift_poly(ring: &RingDescriptor, f: &[u32]) -> Result<Vec<RingElement>> {
    f.iter().map(|&c| ring.lift_residue(c)).collect()
}

fn trimmed(ring: &RingDescriptor, mut f: Vec<RingElement>) -> Vec<RingElement> {
    linalg::poly_trim(ring, &mut f);
    f
}

/// Quadratic Hensel lifting of f ≡ g·h with s·g + t·h ≡ 1 modulo the
/// maximal ideal, where f and h are monic. Stops once f = g·h exactly.
pub fn hensel_lift(
    ring: &RingDescriptor,
    f: &[RingElement],
    mut g: Vec<RingElement>,
    mut h: Vec<RingElement>,
    mut s: Vec<RingElement>,
    mut t: Vec<RingElement>,
) -> Result<(Vec<RingElement>, Vec<RingElement>)> {
    let one = vec![ring.one()];
    for _ in 0..MAX_HENSEL_STEPS {
        let e = trimmed(ring, linalg::poly_sub(ring, f, &linalg::poly_mul(ring, &g, &h)));
        if linalg::poly_degree(ring, &e).is_none() {
            return Ok((g, h));
        }
        let (q, r) = linalg::poly_divrem_monic(ring, &linalg::poly_mul(ring, &s, &e), &h);
        let g_next = linalg::poly_add(
            ring,
            &g,
            &linalg::poly_add(ring, &linalg::poly_mul(ring, &t, &e), &linalg::poly_mul(ring, &q, &g)),
        );
        let h_next = trimmed(ring, linalg::poly_add(ring, &h, &r));
        let g_next = trimmed(ring, g_next);
        let b = linalg::poly_sub(
            ring,
            &linalg::poly_add(
                ring,
                &linalg::poly_mul(ring, &s, &g_next),
                &linalg::poly_mul(ring, &t, &h_next),
            ),
            &one,
        );
        let (c, d) = linalg::poly_divrem_monic(ring, &linalg::poly_mul(ring, &s, &b), &h_next);
        s = trimmed(ring, linalg::poly_sub(ring, &s, &d));
        t = trimmed(
            ring,
            linalg::poly_sub(
                ring,
                &linalg::poly_sub(ring, &t, &linalg::poly_mul(ring, &t, &b)),
                &linalg::poly_mul(ring, &c, &g_next),
            ),
        );
        g = g_next;
        h = h_next;
    }
    Err(Error::SearchExhausted(MAX_HENSEL_STEPS as u32))
}

/// Rank over the field by Gaussian elimination.
pub(crate) fn field_rank(k: &FiniteField, m: &Matrix<u32>) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = k.inv(a[rank][col]).expect("nonzero pivot");
        for i in 0..rows {
            if i != rank && a[i][col] != 0 {
                let f = k.mul(a[i][col], inv);
                for j in col..cols {
                    a[i][j] = k.sub(a[i][j], k.mul(f, a[rank][j]));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Factors P = det(1 - ΨT) as P_unit · P_nil with P_nil ≡ 1 modulo the
/// maximal ideal and deg P_unit equal to the stable rank of Ψ mod 𝔪.
pub fn unit_nil_split(dm: &DworkMatrix) -> Result<UnitNilSplit> {
    let ring = dm.ring();
    let k = ring.residue_field()?.clone();
    let size = dm.size();
    let p = dm.char_poly();
    let residues: Vec<u32> = p.iter().map(|c| ring.to_residue(c)).collect::<Result<_>>()?;
    let r = residues.iter().rposition(|&c| c != 0).unwrap_or(0);

    let reduced: Matrix<u32> = dm
        .psi()
        .iter()
        .map(|row| row.iter().map(|c| ring.to_residue(c)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let stable = field_rank(&k, &linalg::mat_pow(&*k, &reduced, size as u64));
    debug_assert_eq!(stable, r);

    let one = vec![ring.one()];
    if r == 0 {
        return Ok(UnitNilSplit {
            p_unit: one,
            p_nil: p.to_vec(),
            unit_dim: 0,
        });
    }
    if r == size {
        return Ok(UnitNilSplit {
            p_unit: p.to_vec(),
            p_nil: one,
            unit_dim: size,
        });
    }

    // Reversed polynomials: P*(X) = X^size P(1/X) = det(X - Ψ).
    let f: Vec<RingElement> = p.iter().rev().cloned().collect();
    let mut g0 = vec![ring.zero(); size - r + 1];
    g0[size - r] = ring.one();
    let u: KPoly = residues[..=r].iter().rev().copied().collect();
    let mut xg: KPoly = vec![0; size - r + 1];
    xg[size - r] = 1;
    let (s, t) = k_bezout(&k, &xg, &u)?;
    let (g, h) = hensel_lift(
        ring,
        &f,
        g0,
        lift_poly(ring, &u)?,
        lift_poly(ring, &s)?,
        lift_poly(ring, &t)?,
    )?;
    let reverse = |v: &[RingElement], deg: usize| -> Vec<RingElement> {
        let mut padded = v.to_vec();
        padded.resize(deg + 1, ring.zero());
        padded.reverse();
        padded
    };
    Ok(UnitNilSplit {
        p_unit: reverse(&h, r),
        p_nil: reverse(&g, size - r),
        unit_dim: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dwork::char_poly_reciprocal;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn split_of(ring: &Arc<RingDescriptor>, psi: Matrix<RingElement>) -> UnitNilSplit {
        let dm = DworkMatrix {
            ring: ring.clone(),
            rank: 1,
            basis: super::super::omega_basis(1, psi.len() as u32 + 1),
            p_poly: char_poly_reciprocal(ring, &psi),
            psi,
        };
        unit_nil_split(&dm).unwrap()
    }

    fn ints(ring: &RingDescriptor, v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&c| ring.from_int(c)).collect()
    }

    #[test]
    fn scalar_examples() {
        let r = Arc::new(RingDescriptor::base(2, 2).unwrap());
        let s = split_of(&r, vec![vec![r.one()]]);
        assert_eq!(s.p_unit, ints(&r, &[1, -1]));
        assert_eq!(s.p_nil, ints(&r, &[1]));
        let s = split_of(&r, vec![vec![r.from_int(2)]]);
        assert_eq!(s.p_unit, ints(&r, &[1]));
        assert_eq!(s.p_nil, ints(&r, &[1, -2]));
    }

    #[test]
    fn diagonal_example() {
        let r = Arc::new(RingDescriptor::base(2, 3).unwrap());
        let s = split_of(&r, vec![vec![r.one(), r.zero()], vec![r.zero(), r.from_int(2)]]);
        assert_eq!(s.p_unit, ints(&r, &[1, -1]));
        assert_eq!(s.p_nil, ints(&r, &[1, -2]));
        assert_eq!(s.unit_dim, 1);
    }

    #[test]
    fn random_splits_multiply_back() {
        let lam = Arc::new(RingDescriptor::local_algebra(3, 4, 2, &[0, 0, 1]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..6);
            let psi: Matrix<RingElement> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let mut e = lam.element(&[rng.gen_range(0..81), rng.gen_range(0..81)]).unwrap();
                            if rng.gen_bool(0.5) {
                                e = lam.scale_int(&e, 3);
                            }
                            e
                        })
                        .collect()
                })
                .collect();
            let p = char_poly_reciprocal(&lam, &psi);
            let s = split_of(&lam, psi.clone());
            let prod = linalg::poly_mul(&*lam, &s.p_unit, &s.p_nil);
            let mut expect = p.clone();
            expect.resize(prod.len().max(p.len()), lam.zero());
            let mut got = prod;
            got.resize(expect.len(), lam.zero());
            assert_eq!(got, expect);
            assert!(s.p_nil[1..].iter().all(|c| lam.is_in_maximal_ideal(c).unwrap()));
            assert!(lam.is_unit(s.p_unit.last().unwrap()));
            assert_eq!(s.p_unit.len() - 1, s.unit_dim);
            let k = lam.residue_field().unwrap();
            let red: Matrix<u32> = psi
                .iter()
                .map(|row| row.iter().map(|c| lam.to_residue(c).unwrap()).collect())
                .collect();
            assert_eq!(field_rank(k, &linalg::mat_pow(&**k, &red, n as u64)), s.unit_dim);
        }
    }

    #[test]
    fn perturbed_start_converges_to_same_factors() {
        let r = RingDescriptor::base(5, 4).unwrap();
        // (X - 1)(X - 2) · X^2 + 5(X + 1) ≡ X^2 · (X - 1)(X - 2) mod 5.
        let f = ints(&r, &[5, 5, 2, -3, 1]);
        let u = ints(&r, &[2, -3, 1]);
        let g = ints(&r, &[0, 0, 1]);
        let k = FiniteField::standard(5, 1).unwrap();
        let (s, t) = k_bezout(&k, &[0, 0, 1], &[2, 2, 1]).unwrap();
        let (s, t) = (lift_poly(&r, &s).unwrap(), lift_poly(&r, &t).unwrap());
        let base = hensel_lift(&r, &f, g.clone(), u.clone(), s.clone(), t.clone()).unwrap();
        let g2 = ints(&r, &[10, 25, 1]);
        let u2 = ints(&r, &[7, 2, 1]);
        let perturbed = hensel_lift(&r, &f, g2, u2, s, t).unwrap();
        assert_eq!(base, perturbed);
        assert_eq!(trimmed(&r, linalg::poly_mul(&r, &base.0, &base.1)), f);
    }

    #[test]
    fn bezout_identity() {
        let k = FiniteField::standard(3, 2).unwrap();
        let f = vec![0, 0, 0, 1];
        let g = vec![1, 2, 1];
        let (s, t) = k_bezout(&k, &f, &g).unwrap();
        let mut sum = k_sub_mul(&k, &[], &s, &f);
        sum = k_sub_mul(&k, &sum, &t, &g);
        let neg_one = vec![k.neg(1)];
        assert_eq!(sum, neg_one);
    }
}
