//! Finite fields `F_ℓ` and `F_ℓ[y]/h̄(y)`, polynomials over them, and
//! factorization (square-free, distinct-degree, then seeded equal-degree
//! splitting).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::intpoly::IntPoly;
use super::ring::{Field, Ring};
use super::upoly;
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, k)` with `n = p^k` when `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn bits_of(n: &BigUint) -> Vec<bool> {
    (0..n.bits()).map(|i| n.bit(i)).collect()
}

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        self.reduce_int(n)
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(a, self.p - 2))
    }
}

/// Rabin's irreducibility test for a polynomial over the prime field.
fn is_irreducible_prime(fp: &PrimeField, h: &[u64]) -> bool {
    let Some(m) = upoly::degree(h) else {
        return false;
    };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let h = upoly::make_monic(fp, h);
    let t = vec![0, 1];
    let pbits = bits_of(&BigUint::from(fp.p()));
    // t^{p^k} mod h for k = 0..=m
    let mut powers = vec![upoly::rem_monic(fp, &t, &h)];
    for _ in 0..m {
        let last = powers.last().unwrap();
        powers.push(upoly::powmod_bits(fp, last, &pbits, &h));
    }
    if !upoly::sub(fp, &powers[m], &upoly::rem_monic(fp, &t, &h)).is_empty() {
        return false;
    }
    prime_divisors(m as u64).into_iter().all(|r| {
        let k = m / r as usize;
        let diff = upoly::sub(fp, &powers[k], &t);
        upoly::gcd(fp, &diff, &h).len() == 1
    })
}

/// Element of `F_q`: a polynomial in `y` over `F_p` of degree `< m`,
/// without trailing zeros.
pub type FqElem = Vec<u64>;

/// The finite field `F_p[y]/h̄(y)`, or `F_p` itself when no modulus is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fq {
    fp: PrimeField,
    modulus: Option<Vec<u64>>,
}

impl Fq {
    pub fn prime(p: u64) -> Result<Self> {
        Ok(Fq {
            fp: PrimeField::new(p)?,
            modulus: None,
        })
    }

    /// Extension defined by `hbar` (constant term first). A linear `hbar`
    /// yields the prime field.
    pub fn extension(p: u64, hbar: &[u64]) -> Result<Self> {
        let fp = PrimeField::new(p)?;
        let h = upoly::trim(&fp, hbar.iter().map(|c| c % p).collect());
        if !is_irreducible_prime(&fp, &h) {
            return Err(Error::NotIrreducible);
        }
        let h = upoly::make_monic(&fp, &h);
        if h.len() == 2 {
            return Ok(Fq { fp, modulus: None });
        }
        Ok(Fq {
            fp,
            modulus: Some(h),
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.fp.p
    }

    pub fn prime_field(&self) -> PrimeField {
        self.fp
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    /// Extension degree `m`.
    pub fn degree(&self) -> usize {
        self.modulus.as_ref().map_or(1, |h| h.len() - 1)
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.fp.p).pow(self.degree() as u32)
    }

    /// The class of `y`, a root of the defining polynomial.
    pub fn generator(&self) -> FqElem {
        assert!(
            self.modulus.is_some(),
            "prime field has no adjoined generator"
        );
        vec![0, 1]
    }

    pub fn from_u64(&self, c: u64) -> FqElem {
        upoly::trim(&self.fp, vec![c % self.fp.p])
    }

    /// Reads a coefficient vector in `y` and reduces it.
    pub fn from_coeffs(&self, c: &[u64]) -> FqElem {
        let v: Vec<u64> = c.iter().map(|x| x % self.fp.p).collect();
        self.reduce(upoly::trim(&self.fp, v))
    }

    fn reduce(&self, a: Vec<u64>) -> FqElem {
        match &self.modulus {
            None => a,
            Some(h) => upoly::rem_monic(&self.fp, &a, h),
        }
    }

    /// Unique `p`-th root (the inverse Frobenius).
    pub fn pth_root(&self, a: &FqElem) -> FqElem {
        let m = self.degree() as u32;
        let e = BigUint::from(self.fp.p).pow(m - 1);
        self.pow_big(a, &e)
    }

    pub fn pow_big(&self, a: &FqElem, e: &BigUint) -> FqElem {
        let mut acc = self.one();
        for bit in bits_of(e).into_iter().rev() {
            acc = self.mul(&acc, &acc);
            if bit {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn random(&self, rng: &mut impl Rng) -> FqElem {
        let v: Vec<u64> = (0..self.degree())
            .map(|_| rng.gen_range(0..self.fp.p))
            .collect();
        upoly::trim(&self.fp, v)
    }

    pub fn elements(&self) -> Vec<FqElem> {
        let m = self.degree();
        let p = self.fp.p;
        let total = (p as usize).pow(m as u32);
        (0..total)
            .map(|mut n| {
                let v: Vec<u64> = (0..m)
                    .map(|_| {
                        let d = (n % p as usize) as u64;
                        n /= p as usize;
                        d
                    })
                    .collect();
                upoly::trim(&self.fp, v)
            })
            .collect()
    }

    pub fn format_elem(&self, a: &FqElem) -> String {
        if self.modulus.is_none() {
            return a.first().copied().unwrap_or(0).to_string();
        }
        if a.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "y".into(),
                (1, c) => format!("{c}y"),
                (i, 1) => format!("y^{i}"),
                (i, c) => format!("{c}y^{i}"),
            })
            .collect();
        terms.join("+")
    }
}

impl Ring for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        Vec::new()
    }
    fn one(&self) -> FqElem {
        vec![1]
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        upoly::add(&self.fp, a, b)
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        upoly::sub(&self.fp, a, b)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.reduce(upoly::mul(&self.fp, a, b))
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        upoly::neg(&self.fp, a)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.is_empty()
    }
    fn from_int(&self, n: &BigInt) -> FqElem {
        self.from_u64(self.fp.reduce_int(n))
    }
}

impl Field for Fq {
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if a.is_empty() {
            return None;
        }
        match &self.modulus {
            None => self.fp.inv(&a[0]).map(|x| vec![x]),
            Some(h) => {
                let (g, s, _) = upoly::xgcd(&self.fp, a, h);
                (g.len() == 1).then(|| self.reduce(s))
            }
        }
    }
}

/// A polynomial over a finite field, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFPoly {
    field: Fq,
    coeffs: Vec<FqElem>,
}

impl FFPoly {
    pub fn new(field: &Fq, coeffs: Vec<FqElem>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| field.from_coeffs(&c)).collect();
        FFPoly {
            field: field.clone(),
            coeffs: upoly::trim(field, coeffs),
        }
    }

    fn raw(field: &Fq, coeffs: Vec<FqElem>) -> Self {
        FFPoly {
            field: field.clone(),
            coeffs: upoly::trim(field, coeffs),
        }
    }

    /// Polynomial over `F_p` (or its image in an extension) from residues.
    pub fn from_u64s(field: &Fq, coeffs: &[u64]) -> Self {
        Self::raw(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    pub fn from_int_poly(field: &Fq, f: &IntPoly) -> Self {
        Self::raw(
            field,
            f.coeffs().iter().map(|c| field.from_int(c)).collect(),
        )
    }

    pub fn monomial(field: &Fq, c: FqElem, k: usize) -> Self {
        Self::raw(field, upoly::monomial(field, c, k))
    }

    pub fn one(field: &Fq) -> Self {
        Self::raw(field, vec![field.one()])
    }

    pub fn x(field: &Fq) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    /// `t - c`.
    pub fn linear(field: &Fq, c: &FqElem) -> Self {
        Self::raw(field, vec![field.neg(c), field.one()])
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        upoly::degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn is_monic(&self) -> bool {
        upoly::is_monic(&self.field, &self.coeffs)
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    /// Residues in `F_p`, constant first; only meaningful for coefficients
    /// lying in the prime field.
    pub fn prime_coeffs(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .map(|c| c.first().copied().unwrap_or(0))
            .collect()
    }

    /// True iff every coefficient lies in the prime field.
    pub fn is_over_prime_field(&self) -> bool {
        self.coeffs.iter().all(|c| c.len() <= 1)
    }

    /// Re-embeds a polynomial with prime-field coefficients into `field`.
    pub fn embed(&self, field: &Fq) -> FFPoly {
        assert!(self.is_over_prime_field());
        FFPoly::from_u64s(field, &self.prime_coeffs())
    }

    pub fn monic(&self) -> FFPoly {
        Self::raw(&self.field, upoly::make_monic(&self.field, &self.coeffs))
    }

    pub fn add(&self, o: &FFPoly) -> FFPoly {
        Self::raw(
            &self.field,
            upoly::add(&self.field, &self.coeffs, &o.coeffs),
        )
    }

    pub fn sub(&self, o: &FFPoly) -> FFPoly {
        Self::raw(
            &self.field,
            upoly::sub(&self.field, &self.coeffs, &o.coeffs),
        )
    }

    pub fn mul(&self, o: &FFPoly) -> FFPoly {
        Self::raw(
            &self.field,
            upoly::mul(&self.field, &self.coeffs, &o.coeffs),
        )
    }

    pub fn scale(&self, c: &FqElem) -> FFPoly {
        Self::raw(&self.field, upoly::scale(&self.field, &self.coeffs, c))
    }

    pub fn pow(&self, e: u64) -> FFPoly {
        Self::raw(&self.field, upoly::pow(&self.field, &self.coeffs, e))
    }

    pub fn divrem(&self, o: &FFPoly) -> (FFPoly, FFPoly) {
        let (q, r) = upoly::divrem(&self.field, &self.coeffs, &o.coeffs);
        (Self::raw(&self.field, q), Self::raw(&self.field, r))
    }

    pub fn div_exact(&self, o: &FFPoly) -> Option<FFPoly> {
        let (q, r) = self.divrem(o);
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, o: &FFPoly) -> FFPoly {
        self.divrem(o).1
    }

    pub fn gcd(&self, o: &FFPoly) -> FFPoly {
        Self::raw(
            &self.field,
            upoly::gcd(&self.field, &self.coeffs, &o.coeffs),
        )
    }

    /// `(g, s, t)` with `s·self + t·o = g`.
    pub fn xgcd(&self, o: &FFPoly) -> (FFPoly, FFPoly, FFPoly) {
        let (g, s, t) = upoly::xgcd(&self.field, &self.coeffs, &o.coeffs);
        (
            Self::raw(&self.field, g),
            Self::raw(&self.field, s),
            Self::raw(&self.field, t),
        )
    }

    pub fn derivative(&self) -> FFPoly {
        Self::raw(&self.field, upoly::derivative(&self.field, &self.coeffs))
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        upoly::eval(&self.field, &self.coeffs, x)
    }

    pub fn taylor_shift(&self, a: &FqElem) -> FFPoly {
        Self::raw(
            &self.field,
            upoly::taylor_shift(&self.field, &self.coeffs, a),
        )
    }

    /// `self^e mod m` for monic `m`.
    pub fn powmod(&self, e: &BigUint, m: &FFPoly) -> FFPoly {
        let mm = m.monic();
        let base = upoly::rem_monic(&self.field, &self.coeffs, &mm.coeffs);
        Self::raw(
            &self.field,
            upoly::powmod_bits(&self.field, &base, &bits_of(e), &mm.coeffs),
        )
    }

    /// Rabin's test over `F_q`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let q = self.field.order();
        let x = FFPoly::x(&self.field);
        let mut powers = vec![x.rem(&f)];
        for _ in 0..n {
            let next = powers.last().unwrap().powmod(&q, &f);
            powers.push(next);
        }
        if !powers[n].sub(&x).rem(&f).is_zero() {
            return false;
        }
        prime_divisors(n as u64).into_iter().all(|r| {
            let k = n / r as usize;
            powers[k].sub(&x).gcd(&f).is_one()
        })
    }

    /// The distinct roots lying in the coefficient field.
    pub fn roots(&self) -> Vec<FqElem> {
        self.field
            .elements()
            .into_iter()
            .filter(|a| self.field.is_zero(&self.eval(a)))
            .collect()
    }

    fn canonical_key(&self) -> (usize, Vec<Vec<u64>>) {
        (
            self.coeffs.len(),
            self.coeffs.iter().rev().cloned().collect(),
        )
    }
}

impl PartialOrd for FFPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the leading term down.
impl Ord for FFPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl fmt::Debug for FFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FFPoly[F_{}^{}]({self})",
            self.field.characteristic(),
            self.field.degree()
        )
    }
}

impl fmt::Display for FFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_empty())
            .map(|(i, c)| {
                let cs = self.field.format_elem(c);
                let cs = if c.len() > 1 && c.iter().filter(|x| **x != 0).count() > 1 {
                    format!("({cs})")
                } else {
                    cs
                };
                let unit = self.field.is_one(c);
                match i {
                    0 => cs,
                    1 if unit => "t".into(),
                    1 => format!("{cs}t"),
                    _ if unit => format!("t^{i}"),
                    _ => format!("{cs}t^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn squarefree_decomposition(f: &FFPoly) -> Vec<(FFPoly, u32)> {
    let field = f.field();
    let p = field.characteristic();
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power: take the p-th root coefficientwise
        let deg = c.degree().unwrap();
        let root_coeffs: Vec<FqElem> = (0..=deg / p as usize)
            .map(|k| field.pth_root(&c.coeff(k * p as usize)))
            .collect();
        let root = FFPoly::raw(field, root_coeffs);
        for (g, j) in squarefree_decomposition(&root) {
            out.push((g, j * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &FFPoly) -> Vec<(FFPoly, usize)> {
    let field = f.field();
    let q = field.order();
    let x = FFPoly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.powmod(&q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

fn equal_degree(f: &FFPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FFPoly>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.monic());
        return;
    }
    let field = f.field();
    let p = field.characteristic();
    let m = field.degree();
    loop {
        let a = FFPoly::raw(field, (0..n).map(|_| field.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace map a + a^2 + ... + a^{2^{md-1}}
            let mut acc = a.rem(f);
            let mut term = acc.clone();
            for _ in 1..m * d {
                term = term.mul(&term).rem(f);
                acc = acc.add(&term);
            }
            acc
        } else {
            let e = (field.order().pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            a.powmod(&e, f).sub(&FFPoly::one(field))
        };
        let g = f.gcd(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = f.div_exact(&g).expect("gcd divides");
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Factors `f` into monic irreducibles with multiplicities, sorted by
/// degree then coefficients. The result is determined by `seed`.
pub fn ff_factor(f: &FFPoly, seed: u64) -> Result<Vec<(FFPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monic = f.monic();
    let mut out: Vec<(FFPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic) {
        for (block, d) in distinct_degree(&part) {
            let mut pieces = Vec::new();
            equal_degree(&block, d, &mut rng, &mut pieces);
            for g in pieces {
                match out.iter_mut().find(|(h, _)| *h == g) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((g, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
