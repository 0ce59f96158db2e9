//! Zeta functions of abelian surfaces and of their Kummer surfaces, and the
//! degree distribution of points on `A[2]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::intpoly::IntPoly;
use crate::error::{Error, Result};
use crate::surface::classify_surface;
use crate::torsion::{scheme_point_counts, TorsionClass, WeilPolynomial};

/// Power sums `p_1..=p_m` of the roots of a monic polynomial.
pub fn power_sums(f: &IntPoly, m: usize) -> Vec<BigInt> {
    let n = f.degree().unwrap_or(0);
    // a[i] is the coefficient of t^{n-i}
    let a = |i: usize| {
        if i <= n {
            f.coeff(n - i)
        } else {
            BigInt::zero()
        }
    };
    let mut p: Vec<BigInt> = Vec::with_capacity(m + 1);
    p.push(BigInt::from(n));
    for k in 1..=m {
        let mut s = -a(k) * BigInt::from(k);
        for i in 1..k {
            s -= a(i) * &p[k - i];
        }
        p.push(s);
    }
    p.remove(0);
    p
}

/// Elementary symmetric functions `e_0..=e_k` from power sums `s_1..=s_k`.
fn elementary_from_power_sums(s: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::one()];
    for i in 1..=k {
        let mut acc = BigInt::zero();
        for j in 1..=i {
            let term = &e[i - j] * &s[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(i));
        debug_assert!(r.is_zero());
        e.push(q);
    }
    e
}

/// `∏ (1 - β t)` over the multiset with power sums `s_1..=s_deg`.
fn reciprocal_from_power_sums(s: &[BigInt], deg: usize) -> IntPoly {
    let e = elementary_from_power_sums(s, deg);
    IntPoly::new(
        e.into_iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c } else { -c })
            .collect(),
    )
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `det(1 - t·F | ⋀^i)` for `F` with characteristic polynomial `f`.
pub fn exterior_power_poly(f: &IntPoly, i: usize) -> IntPoly {
    let n = f.degree().unwrap_or(0);
    let deg = binomial(n, i);
    let p = power_sums(f, deg * i.max(1));
    let traces: Vec<BigInt> = (1..=deg)
        .map(|k| {
            let s: Vec<BigInt> = (1..=i).map(|j| p[j * k - 1].clone()).collect();
            elementary_from_power_sums(&s, i)[i].clone()
        })
        .collect();
    reciprocal_from_power_sums(&traces, deg)
}

/// `∏_{j<k} (1 - ω_j ω_k t)`.
pub fn exterior_square_poly(f: &IntPoly) -> IntPoly {
    exterior_power_poly(f, 2)
}

/// `det(t - F^r)`.
pub fn base_change(f: &IntPoly, r: usize) -> IntPoly {
    let n = f.degree().unwrap_or(0);
    let p = power_sums(f, n * r);
    let s: Vec<BigInt> = (1..=n).map(|k| p[k * r - 1].clone()).collect();
    reciprocal_from_power_sums(&s, n).reversed()
}

/// `∏ P(t)^e` with every `P(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFactored {
    pub factors: Vec<(IntPoly, i32)>,
}

fn series_mul(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_inverse(a: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut inv = vec![BigInt::zero(); order + 1];
    inv[0] = BigInt::one();
    for n in 1..=order {
        let mut acc = BigInt::zero();
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            acc -= &a[k] * &inv[n - k];
        }
        inv[n] = acc;
    }
    inv
}

impl ZetaFactored {
    pub fn new(factors: Vec<(IntPoly, i32)>) -> Result<Self> {
        if factors.iter().any(|(p, _)| p.coeff(0) != BigInt::one()) {
            return Err(Error::InvalidInput(
                "zeta factors must have constant term 1".into(),
            ));
        }
        Ok(ZetaFactored { factors })
    }

    /// Power-series coefficients `z_0..=z_order`.
    pub fn series(&self, order: usize) -> Vec<BigInt> {
        let mut acc = vec![BigInt::one()];
        for (p, e) in &self.factors {
            let mut base: Vec<BigInt> = p.coeffs().to_vec();
            base.resize(order + 1, BigInt::zero());
            if *e < 0 {
                base = series_inverse(&base, order);
            }
            for _ in 0..e.unsigned_abs() {
                acc = series_mul(&acc, &base, order);
            }
        }
        acc.resize(order + 1, BigInt::zero());
        acc
    }

    /// `N_1..=N_order` with `Z = exp(Σ N_d t^d / d)`, read off the series.
    pub fn point_counts(&self, order: usize) -> Vec<BigInt> {
        let z = self.series(order);
        let mut n: Vec<BigInt> = Vec::with_capacity(order);
        for m in 1..=order {
            let mut v = &z[m] * BigInt::from(m);
            for d in 1..m {
                v -= &n[d - 1] * &z[m - d];
            }
            n.push(v);
        }
        n
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .factors
            .iter()
            .map(|(p, e)| json!({
                "poly": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "exponent": e,
            }))
            .collect::<Vec<_>>())
    }
}

impl fmt::Display for ZetaFactored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| format!("({p})^{e}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Number of closed points of each degree on a finite group scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BVector(BTreeMap<u32, u64>);

impl BVector {
    pub fn new(counts: BTreeMap<u32, u64>) -> Self {
        BVector(counts.into_iter().filter(|(_, b)| *b > 0).collect())
    }

    pub fn get(&self, r: u32) -> u64 {
        self.0.get(&r).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.0
    }

    /// `Σ r·b_r`, the order of the group.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|(r, b)| *r as u64 * b).sum()
    }

    /// Rational points over the degree-`r` extension: `Σ_{e | r} e·b_e`.
    pub fn rational_points(&self, r: u32) -> u64 {
        self.0
            .iter()
            .filter(|(e, _)| r % **e == 0)
            .map(|(e, b)| *e as u64 * b)
            .sum()
    }

    fn dense(&self) -> Vec<u64> {
        let max = self.0.keys().last().copied().unwrap_or(0);
        (1..=max).map(|r| self.get(r)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .0
            .iter()
            .map(|(r, b)| (r.to_string(), json!(b)))
            .collect::<serde_json::Map<_, _>>())
    }
}

impl Ord for BVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.dense(), other.dense());
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                a.get(i)
                    .copied()
                    .unwrap_or(0)
                    .cmp(&b.get(i).copied().unwrap_or(0))
            })
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for BVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(r, b)| format!("b{r}={b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl TryFrom<&TorsionClass> for BVector {
    type Error = Error;

    fn try_from(class: &TorsionClass) -> Result<Self> {
        Ok(BVector::new(scheme_point_counts(class, None)?))
    }
}

/// `P_0, …, P_{2g}` assembled as `∏ P_i^{(-1)^{i+1}}`.
pub fn zeta_abelian(f: &WeilPolynomial) -> ZetaFactored {
    let n = f.degree();
    let factors = (0..=n)
        .map(|i| {
            (
                exterior_power_poly(&f.coeffs, i),
                if i % 2 == 0 { -1 } else { 1 },
            )
        })
        .collect();
    ZetaFactored { factors }
}

/// `P_2 · ∏ (1 - (qt)^r)^{b_r}`, of degree 22 for a surface.
pub fn kummer_middle_poly(f: &WeilPolynomial, b: &BVector) -> Result<IntPoly> {
    if f.degree() != 4 {
        return Err(Error::WrongDegree {
            expected: 4,
            found: f.degree(),
        });
    }
    if b.total() != 16 {
        return Err(Error::BadBVector(b.total()));
    }
    let q = BigInt::from(f.q);
    let mut p = exterior_square_poly(&f.coeffs);
    for (&r, &count) in b.counts() {
        let mut c = vec![BigInt::zero(); r as usize + 1];
        c[0] = BigInt::one();
        c[r as usize] = -q.pow(r);
        p = p.mul(&IntPoly::new(c).pow(count));
    }
    Ok(p)
}

/// `[(1 - t) P(t) (1 - q²t)]^{-1}`.
pub fn kummer_zeta(f: &WeilPolynomial, b: &BVector) -> Result<ZetaFactored> {
    let p = kummer_middle_poly(f, b)?;
    let q = BigInt::from(f.q);
    ZetaFactored::new(vec![
        (IntPoly::from_i64s(&[1, -1]), -1),
        (p, -1),
        (IntPoly::new(vec![BigInt::one(), -(&q * &q)]), -1),
    ])
}

/// `|S(F_{q^r})| = (f_r(1) + f_r(-1))/2 + q^r·|A[2](F_{q^r})|`.
pub fn kummer_point_count(f: &WeilPolynomial, b: &BVector, r: u32) -> BigInt {
    let fr = base_change(&f.coeffs, r as usize);
    let one = BigInt::one();
    let quotient = (fr.eval(&one) + fr.eval(&-one)) / 2;
    quotient + BigInt::from(f.q).pow(r) * BigInt::from(b.rational_points(r))
}

/// Every b-vector of `A[2]` in the isogeny class, with its Kummer zeta.
pub fn enumerate_kummer_zetas(f: &WeilPolynomial) -> Result<Vec<(BVector, ZetaFactored)>> {
    if f.p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if f.degree() != 4 {
        return Err(Error::WrongDegree {
            expected: 4,
            found: f.degree(),
        });
    }
    let classes = classify_surface(f, 2)?.classes;
    let mut bs = classes
        .iter()
        .map(BVector::try_from)
        .collect::<Result<Vec<_>>>()?;
    bs.sort();
    bs.dedup();
    bs.into_iter()
        .map(|b| {
            let z = kummer_zeta(f, &b)?;
            Ok((b, z))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::validate_weil;

    fn from_roots(roots: &[i64]) -> IntPoly {
        roots.iter().fold(IntPoly::one(), |acc, r| {
            acc.mul(&IntPoly::linear(&BigInt::from(*r)))
        })
    }

    fn reciprocal_from_roots(roots: &[i64]) -> IntPoly {
        roots.iter().fold(IntPoly::one(), |acc, r| {
            acc.mul(&IntPoly::from_i64s(&[1, -r]))
        })
    }

    #[test]
    fn exterior_square_of_known_roots() {
        let p2 = exterior_square_poly(&from_roots(&[1, 2, 3, 6]));
        assert_eq!(p2, reciprocal_from_roots(&[2, 3, 6, 6, 12, 18]));
        assert_eq!(
            exterior_square_poly(&from_roots(&[2, 2, 2, 2])),
            reciprocal_from_roots(&[4; 6])
        );
        let elliptic = IntPoly::from_leading_first(&[1, 2, 7]);
        assert_eq!(
            exterior_square_poly(&elliptic),
            IntPoly::from_i64s(&[1, -7])
        );
        assert_eq!(
            exterior_power_poly(&elliptic, 0),
            IntPoly::from_i64s(&[1, -1])
        );
        assert_eq!(exterior_power_poly(&elliptic, 1), elliptic.reversed());
    }

    #[test]
    fn base_change_of_roots() {
        assert_eq!(
            base_change(&from_roots(&[1, -2, 3]), 2),
            from_roots(&[1, 4, 9])
        );
    }

    #[test]
    fn kummer_counts() {
        let f = validate_weil(
            &IntPoly::from_leading_first(&[1, -8, 24, -32, 16]),
            4,
            false,
        )
        .unwrap();
        let b = BVector::new(BTreeMap::from([(1, 16)]));
        assert_eq!(kummer_point_count(&f, &b, 1), BigInt::from(105));
        let z = kummer_zeta(&f, &b).unwrap();
        assert_eq!(z.factors[1].0.degree(), Some(22));
        let counts = z.point_counts(6);
        for r in 1..=6u32 {
            assert_eq!(counts[r as usize - 1], kummer_point_count(&f, &b, r));
        }
        let g = validate_weil(&IntPoly::from_leading_first(&[1, 2, 7, 6, 9]), 3, false).unwrap();
        let all = enumerate_kummer_zetas(&g).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].0.to_string(), "b1=1,b3=5");
        assert_eq!(kummer_point_count(&g, &all[0].0, 1), BigInt::from(20));
        assert!(kummer_zeta(&g, &BVector::new(BTreeMap::from([(1, 3)]))).is_err());
    }

    #[test]
    fn bvector_order() {
        let a = BVector::new(BTreeMap::from([(1, 2), (2, 1), (4, 3)]));
        let b = BVector::new(BTreeMap::from([(1, 4), (2, 6)]));
        let c = BVector::new(BTreeMap::from([(1, 4), (2, 2), (4, 2)]));
        assert!(a < c && c < b);
        assert_eq!(a.total(), 16);
        assert_eq!(a.rational_points(2), 4);
    }
}
