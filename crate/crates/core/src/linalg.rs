//! Dense matrices and polynomials over any [`CommRing`], with a
//! division-free characteristic polynomial.

use crate::ring::CommRing;

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<R: CommRing>(ring: &R, n: usize) -> Matrix<R::Elem> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    let n = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn mat_mul<R: CommRing>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![ring.zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if ring.is_zero(&a[i][t]) {
                continue;
            }
            for j in 0..m {
                let prod = ring.mul(&a[i][t], &b[t][j]);
                out[i][j] = ring.add(&out[i][j], &prod);
            }
        }
    }
    out
}

pub fn mat_vec<R: CommRing>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))
        })
        .collect()
}

pub fn trace<R: CommRing>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    (0..a.len()).fold(ring.zero(), |acc, i| ring.add(&acc, &a[i][i]))
}

pub fn mat_pow<R: CommRing>(ring: &R, a: &Matrix<R::Elem>, mut e: u64) -> Matrix<R::Elem> {
    let mut acc = identity(ring, a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(ring, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(ring, &base, &base);
        }
    }
    acc
}

/// Coefficients c_0 = 1, c_1, ..., c_n of det(1 - M T), by Berkowitz's
/// algorithm. Uses only ring operations, so it is valid over rings with
/// zero divisors.
pub fn char_poly_reciprocal<R: CommRing>(ring: &R, m: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let n = m.len();
    if n == 0 {
        return vec![ring.one()];
    }
    let mut v = vec![ring.one(), ring.neg(&m[0][0])];
    for r in 1..n {
        // Toeplitz column: 1, -a_rr, -R S, -R A S, ..., -R A^{r-1} S
        let mut t = Vec::with_capacity(r + 2);
        t.push(ring.one());
        t.push(ring.neg(&m[r][r]));
        let mut s: Vec<R::Elem> = (0..r).map(|i| m[i][r].clone()).collect();
        for k in 0..r {
            let dot = (0..r).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&m[r][j], &s[j])));
            t.push(ring.neg(&dot));
            if k + 1 < r {
                s = (0..r)
                    .map(|i| {
                        (0..r).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(&m[i][j], &s[j])))
                    })
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = ring.zero();
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                acc = ring.add(&acc, &ring.mul(&t[i - j], vj));
            }
            next.push(acc);
        }
        v = next;
    }
    v
}

/// det(1 - M T) by cofactor expansion along the first row. Exponential in
/// the size; kept as an independent check on [`char_poly_reciprocal`].
pub fn char_poly_reciprocal_cofactor<R: CommRing>(ring: &R, m: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let n = m.len();
    let entries: Matrix<Vec<R::Elem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = if i == j { ring.one() } else { ring.zero() };
                    vec![c, ring.neg(&m[i][j])]
                })
                .collect()
        })
        .collect();
    let rows: Vec<usize> = (0..n).collect();
    let mut det = cofactor_det(ring, &entries, &rows, &rows);
    det.resize(n + 1, ring.zero());
    det
}

fn cofactor_det<R: CommRing>(
    ring: &R,
    m: &Matrix<Vec<R::Elem>>,
    rows: &[usize],
    cols: &[usize],
) -> Vec<R::Elem> {
    if rows.is_empty() {
        return vec![ring.one()];
    }
    let r = rows[0];
    let mut acc = vec![ring.zero()];
    for (k, &c) in cols.iter().enumerate() {
        let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = cofactor_det(ring, m, &rows[1..], &rest_cols);
        let term = poly_mul(ring, &m[r][c], &minor);
        acc = if k % 2 == 0 {
            poly_add(ring, &acc, &term)
        } else {
            poly_sub(ring, &acc, &term)
        };
    }
    acc
}

// ---- dense polynomials, little-endian -------------------------------------

pub fn poly_trim<R: CommRing>(ring: &R, a: &mut Vec<R::Elem>) {
    while a.len() > 1 && ring.is_zero(a.last().expect("nonempty")) {
        a.pop();
    }
}

/// Degree of a polynomial, `None` for zero.
pub fn poly_degree<R: CommRing>(ring: &R, a: &[R::Elem]) -> Option<usize> {
    a.iter().rposition(|c| !ring.is_zero(c))
}

pub fn poly_add<R: CommRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => ring.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

pub fn poly_sub<R: CommRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => ring.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => ring.neg(y),
            (None, None) => unreachable!(),
        })
        .collect()
}

pub fn poly_mul<R: CommRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    poly_mul_trunc(ring, a, b, usize::MAX)
}

/// Product truncated to degree < `limit`.
pub fn poly_mul_trunc<R: CommRing>(ring: &R, a: &[R::Elem], b: &[R::Elem], limit: usize) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![ring.zero()];
    }
    let len = (a.len() + b.len() - 1).min(limit);
    let mut out = vec![ring.zero(); len.max(1)];
    for (i, x) in a.iter().enumerate() {
        if i >= len || ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            let prod = ring.mul(x, y);
            out[i + j] = ring.add(&out[i + j], &prod);
        }
    }
    out
}

/// Quotient and remainder on division by a monic polynomial.
pub fn poly_divrem_monic<R: CommRing>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let db = poly_degree(ring, b).expect("divisor is nonzero");
    debug_assert!(b[db] == ring.one(), "divisor must be monic");
    let mut rem: Vec<R::Elem> = a.to_vec();
    let Some(da) = poly_degree(ring, &rem) else {
        return (vec![ring.zero()], vec![ring.zero()]);
    };
    if da < db {
        poly_trim(ring, &mut rem);
        return (vec![ring.zero()], rem);
    }
    let mut quot = vec![ring.zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[k + db].clone();
        if ring.is_zero(&c) {
            continue;
        }
        for (i, bi) in b.iter().enumerate().take(db + 1) {
            let prod = ring.mul(&c, bi);
            rem[k + i] = ring.sub(&rem[k + i], &prod);
        }
        quot[k] = c;
    }
    rem.truncate(db.max(1));
    poly_trim(ring, &mut rem);
    (quot, rem)
}
