#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitl::crystal::{CrystalPair, UnitCrystal};
use unitl::laurent::LaurentPolynomial;
use unitl::{FlatLift, RingDescriptor, RingElement};

/// One member of the random test corpus.
pub struct Sample {
    pub label: String,
    pub pair: CrystalPair,
    pub bound: usize,
}

/// Exponent vectors with entries ≥ 1 and total degree ≤ 3.
fn positive_exponents(d: usize) -> Vec<Vec<i64>> {
    match d {
        1 => vec![vec![1], vec![2], vec![3]],
        2 => vec![vec![1, 1], vec![1, 2], vec![2, 1]],
        _ => unreachable!("corpus uses d ≤ 2"),
    }
}

/// An element of the maximal ideal (p, x).
fn small(rng: &mut ChaCha8Rng, ring: &RingDescriptor) -> RingElement {
    let q = ring.characteristic_modulus() as i64;
    let coords: Vec<i64> = (0..ring.rank())
        .map(|i| {
            let v = rng.gen_range(0..q);
            if i == 0 {
                v * ring.p() as i64
            } else {
                v
            }
        })
        .collect();
    ring.element(&coords).unwrap()
}

fn unit(rng: &mut ChaCha8Rng, ring: &RingDescriptor) -> RingElement {
    let v = rng.gen_range(1..ring.p() as i64);
    ring.add(&ring.from_int(v), &small(rng, ring))
}

fn any(rng: &mut ChaCha8Rng, ring: &RingDescriptor) -> RingElement {
    let v = rng.gen_range(0..ring.p() as i64);
    ring.add(&ring.from_int(v), &small(rng, ring))
}

fn poly<F>(rng: &mut ChaCha8Rng, ring: &Arc<RingDescriptor>, d: usize, mut coeff: F) -> LaurentPolynomial
where
    F: FnMut(&mut ChaCha8Rng, &RingDescriptor) -> RingElement,
{
    let exps = positive_exponents(d);
    let terms: Vec<(Vec<i64>, RingElement)> = (0..rng.gen_range(1..=3))
        .map(|_| (exps[rng.gen_range(0..exps.len())].clone(), coeff(rng, ring)))
        .collect();
    LaurentPolynomial::from_terms(ring, d, terms).unwrap()
}

/// A random normalized unit crystal: a triangular matrix whose diagonal
/// entries are unit monomials mod 𝔪, plus noise in the maximal ideal
/// below the diagonal, with its rows swapped half of the time. The
/// determinant is then a unit monomial modulo 𝔪.
pub fn random_crystal(
    rng: &mut ChaCha8Rng,
    lambda: &Arc<RingDescriptor>,
    d: usize,
    rank: usize,
) -> UnitCrystal {
    let exps = positive_exponents(d);
    let mut matrix: Vec<Vec<LaurentPolynomial>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    let noise = poly(rng, lambda, d, small);
                    if i == j {
                        let e = exps[rng.gen_range(0..exps.len())].clone();
                        let lead = LaurentPolynomial::monomial(lambda, unit(rng, lambda), e).unwrap();
                        lead.add(&noise).unwrap()
                    } else if i < j {
                        poly(rng, lambda, d, any)
                    } else {
                        noise
                    }
                })
                .collect()
        })
        .collect();
    if rank > 1 && rng.gen_bool(0.5) {
        matrix.swap(0, 1);
    }
    UnitCrystal::new(LaurentPolynomial::one(lambda, d), matrix, 0).unwrap()
}

/// Λ for the corpus: Z/p^n, or a ramified quadratic extension for p = 2.
pub fn corpus_lambda(p: u64, n: u32, ramified: bool) -> Arc<RingDescriptor> {
    let g: &[i64] = if ramified { &[-(p as i64), 0, 1] } else { &[0, 1] };
    Arc::new(RingDescriptor::local_algebra(p, n, n, g).unwrap())
}

/// Series bound per (p, d), chosen to keep a corpus run within seconds.
pub fn corpus_bound(p: u64, d: usize) -> usize {
    match (p, d) {
        (_, 1) => 6,
        (2, 2) => 6,
        (3, 2) => 5,
        _ => 4,
    }
}

/// The fixed, seeded corpus used by the acceptance and property suites:
/// every combination of p ∈ {2, 3, 5}, d ∈ {1, 2}, rank ∈ {1, 2}, twice.
pub fn corpus(seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for copy in 0..2 {
        for p in [2u64, 3, 5] {
            for d in 1..=2usize {
                for rank in 1..=2usize {
                    let n = rng.gen_range(1..=3u32);
                    let precision = n + rng.gen_range(0..=1u32);
                    let ramified = p == 2 && copy == 1;
                    let lambda = corpus_lambda(p, n, ramified);
                    let lift = FlatLift::new(&lambda, precision.max(1)).unwrap();
                    let c = random_crystal(&mut rng, &lambda, d, rank);
                    let pair = CrystalPair::prepare(&c, &lift, None).unwrap();
                    out.push(Sample {
                        label: format!("p={p} d={d} rank={rank} n={n} N={precision}{}", if ramified { " ramified" } else { "" }),
                        pair,
                        bound: corpus_bound(p, d),
                    });
                }
            }
        }
    }
    out
}
