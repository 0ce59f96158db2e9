//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's own algorithms for the quantity being checked.
#![allow(dead_code, clippy::needless_range_loop, clippy::type_complexity)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use torsion_atlas::{IntPoly, WeilPolynomial};

pub fn weil(leading_first: &[i64], q: u64) -> WeilPolynomial {
    torsion_atlas::validate_weil(&IntPoly::from_leading_first(leading_first), q, false)
        .unwrap_or_else(|e| panic!("{leading_first:?} over q={q}: {e}"))
}

fn reduce(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % p;
                for k in 0..ncols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j] % p).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

/// Jordan type of a nilpotent integer matrix reduced mod `p`, from the
/// ranks of its powers. `None` if it is not nilpotent.
pub fn jordan_type_mod_p(rows: &[Vec<BigInt>], p: u64) -> Option<Vec<u32>> {
    let n = rows.len();
    let m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| reduce(x, p)).collect())
        .collect();
    let mut ranks = vec![n];
    let mut pw = m.clone();
    for _ in 0..n {
        ranks.push(rank_mod_p(&pw, p));
        pw = mat_mul_mod(&pw, &m, p);
    }
    if ranks[n] != 0 {
        return None;
    }
    // blocks of size ≥ k number ranks[k-1] - ranks[k]
    let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut parts = Vec::new();
    for k in (1..=n).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat(k as u32).take(exact));
    }
    Some(parts)
}

/// Characteristic polynomial (constant term first) by Faddeev–LeVerrier
/// over the rationals.
pub fn charpoly_rational(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = rows.len();
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &x[i][k] * &y[k][j]))
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        for i in 0..n {
            m[i][i] += &coeffs[n - k + 1];
        }
        let am = mul(&a, &m);
        let tr = (0..n).fold(BigRational::zero(), |s, i| s + &am[i][i]);
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        m = am;
    }
    coeffs.into_iter().map(|c| c.to_integer()).collect()
}

pub fn congruent(a: &[BigInt], b: &[BigInt], modulus: &BigInt) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|i| {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        (x - y).mod_floor(modulus).is_zero()
    })
}

/// Value at `x` of the lower convex hull of the finite points `(i, v_i)`,
/// computed as the minimum over chords; `None` means no chord covers `x`.
pub fn lower_hull_value(points: &[(i64, i64)], x: Rational64) -> Option<Rational64> {
    let mut best: Option<Rational64> = None;
    for &(x0, y0) in points {
        for &(x1, y1) in points {
            let (x0r, x1r) = (Rational64::from(x0), Rational64::from(x1));
            let v = if x0 == x1 {
                if x0r != x {
                    continue;
                }
                Rational64::from(y0.min(y1))
            } else if x0 < x1 && x0r <= x && x <= x1r {
                Rational64::from(y0) + Rational64::from(y1 - y0) * (x - x0r) / (x1r - x0r)
            } else {
                continue;
            };
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best
}

/// Young polygon of a partition at `x`: through `(m_1 + … + m_i, i)`.
pub fn young_value(parts: &[u32], x: Rational64) -> Rational64 {
    let mut left = Rational64::zero();
    for (i, &m) in parts.iter().enumerate() {
        let right = left + Rational64::from(m as i64);
        if x <= right {
            return Rational64::from(i as i64) + (x - left) / Rational64::from(m as i64);
        }
        left = right;
    }
    Rational64::from(parts.len() as i64)
}

/// `∏_{i<j} (1 - r_i r_j t)`.
pub fn pair_product(roots: &[i64]) -> IntPoly {
    let mut acc = IntPoly::one();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            acc = acc.mul(&IntPoly::from_i64s(&[1, -roots[i] * roots[j]]));
        }
    }
    acc
}

pub fn from_roots(roots: &[i64]) -> IntPoly {
    roots.iter().fold(IntPoly::one(), |acc, r| {
        acc.mul(&IntPoly::linear(&BigInt::from(*r)))
    })
}

/// Integer square root floor.
pub fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
