//! Dense univariate polynomial arithmetic over an arbitrary [`Ring`].
//!
//! Polynomials are coefficient vectors, constant term first, with no trailing
//! zeros; the zero polynomial is the empty vector.

use super::ring::{Field, Ring};

pub type Coeffs<E> = Vec<E>;

pub fn trim<R: Ring>(ring: &R, mut p: Coeffs<R::Elem>) -> Coeffs<R::Elem> {
    while p.last().is_some_and(|c| ring.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, or `None` for the zero polynomial.
pub fn degree<E>(p: &[E]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn monomial<R: Ring>(ring: &R, c: R::Elem, k: usize) -> Coeffs<R::Elem> {
    let mut v = vec![ring.zero(); k];
    v.push(c);
    trim(ring, v)
}

pub fn constant<R: Ring>(ring: &R, c: R::Elem) -> Coeffs<R::Elem> {
    trim(ring, vec![c])
}

pub fn is_monic<R: Ring>(ring: &R, p: &[R::Elem]) -> bool {
    p.last().is_some_and(|c| ring.is_one(c))
}

pub fn add<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Coeffs<R::Elem> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let out = (0..n)
        .map(|i| ring.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(ring, out)
}

pub fn sub<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Coeffs<R::Elem> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let out = (0..n)
        .map(|i| ring.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(ring, out)
}

pub fn neg<R: Ring>(ring: &R, a: &[R::Elem]) -> Coeffs<R::Elem> {
    a.iter().map(|c| ring.neg(c)).collect()
}

pub fn scale<R: Ring>(ring: &R, a: &[R::Elem], c: &R::Elem) -> Coeffs<R::Elem> {
    trim(ring, a.iter().map(|x| ring.mul(x, c)).collect())
}

pub fn mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Coeffs<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(ring, out)
}

pub fn pow<R: Ring>(ring: &R, a: &[R::Elem], mut e: u64) -> Coeffs<R::Elem> {
    let mut base = a.to_vec();
    let mut acc = constant(ring, ring.one());
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(ring, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(ring, &base, &base);
        }
    }
    acc
}

pub fn product<'a, R: Ring + 'a>(
    ring: &R,
    polys: impl IntoIterator<Item = &'a Coeffs<R::Elem>>,
) -> Coeffs<R::Elem>
where
    R::Elem: 'a,
{
    polys
        .into_iter()
        .fold(constant(ring, ring.one()), |acc, p| mul(ring, &acc, p))
}

pub fn eval<R: Ring>(ring: &R, p: &[R::Elem], x: &R::Elem) -> R::Elem {
    p.iter()
        .rev()
        .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

pub fn derivative<R: Ring>(ring: &R, p: &[R::Elem]) -> Coeffs<R::Elem> {
    let out = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ring.mul(c, &ring.from_i64(i as i64)))
        .collect();
    trim(ring, out)
}

/// `p(t + a)` by repeated synthetic division (Horner's Taylor shift).
pub fn taylor_shift<R: Ring>(ring: &R, p: &[R::Elem], a: &R::Elem) -> Coeffs<R::Elem> {
    let mut c = p.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = ring.mul(&c[j + 1], a);
            c[j] = ring.add(&c[j], &t);
        }
    }
    trim(ring, c)
}

/// `t^deg · p(1/t)`; `deg` defaults to the degree of `p`.
pub fn reverse<R: Ring>(ring: &R, p: &[R::Elem], deg: usize) -> Coeffs<R::Elem> {
    let mut out = vec![ring.zero(); deg + 1];
    for (i, c) in p.iter().enumerate() {
        out[deg - i] = c.clone();
    }
    trim(ring, out)
}

/// Division by a monic polynomial; valid over any commutative ring.
pub fn divrem_monic<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
) -> (Coeffs<R::Elem>, Coeffs<R::Elem>) {
    assert!(is_monic(ring, b), "divisor must be monic");
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![ring.zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if ring.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = ring.sub(&r[k + j], &ring.mul(&c, bj));
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(ring, q), trim(ring, r))
}

pub fn rem_monic<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Coeffs<R::Elem> {
    divrem_monic(ring, a, b).1
}

/// `a^e mod m` for monic `m`, with a big exponent given as little-endian bits.
pub fn powmod_bits<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    bits: &[bool],
    m: &[R::Elem],
) -> Coeffs<R::Elem> {
    let mut acc = rem_monic(ring, &constant(ring, ring.one()), m);
    for &bit in bits.iter().rev() {
        acc = rem_monic(ring, &mul(ring, &acc, &acc), m);
        if bit {
            acc = rem_monic(ring, &mul(ring, &acc, a), m);
        }
    }
    acc
}

pub fn make_monic<F: Field>(field: &F, p: &[F::Elem]) -> Coeffs<F::Elem> {
    match p.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = field.inv(lc).expect("nonzero leading coefficient");
            scale(field, p, &inv)
        }
    }
}

/// Division with remainder over a field.
pub fn divrem<F: Field>(
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Coeffs<F::Elem>, Coeffs<F::Elem>) {
    let lc = b.last().expect("division by zero polynomial");
    let inv = field.inv(lc).expect("nonzero leading coefficient");
    let bm = scale(field, b, &inv);
    let (q, r) = divrem_monic(field, a, &bm);
    (scale(field, &q, &inv), r)
}

/// Monic gcd over a field (zero if both inputs are zero).
pub fn gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Coeffs<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = divrem(field, &x, &y).1;
        x = y;
        y = r;
    }
    make_monic(field, &x)
}

type Bezout<E> = (Coeffs<E>, Coeffs<E>, Coeffs<E>);

/// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn xgcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Bezout<F::Elem> {
    let one = constant(field, field.one());
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (one.clone(), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = divrem(field, &r0, &r1);
        let s = sub(field, &s0, &mul(field, &q, &s1));
        let t = sub(field, &t0, &mul(field, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = field.inv(lc).expect("nonzero");
            (
                scale(field, &r0, &inv),
                scale(field, &s0, &inv),
                scale(field, &t0, &inv),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::Integers;
    use num_bigint::BigInt;

    fn zz(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn taylor_shift_matches_expansion() {
        // (t+1)^2 + 8(t+1) + 16 = t^2 + 10t + 25
        let p = zz(&[16, 8, 1]);
        assert_eq!(
            taylor_shift(&Integers, &p, &BigInt::from(1)),
            zz(&[25, 10, 1])
        );
    }

    #[test]
    fn monic_division() {
        let a = zz(&[49, -7, 8, -1, 1]);
        let b = zz(&[7, 2, 1]);
        let (q, r) = divrem_monic(&Integers, &a, &b);
        assert!(r.is_empty());
        assert_eq!(q, zz(&[7, -3, 1]));
    }

    #[test]
    fn derivative_and_eval() {
        let p = zz(&[1, 2, 3]);
        assert_eq!(derivative(&Integers, &p), zz(&[2, 6]));
        assert_eq!(eval(&Integers, &p, &BigInt::from(2)), BigInt::from(17));
    }
}
