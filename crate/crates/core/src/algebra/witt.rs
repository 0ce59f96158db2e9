//! Truncated unramified extensions of `Z_ℓ`: the ring `(Z/ℓ^N)[y]/H(y)`
//! where `H` lifts a monic irreducible `h̄ ∈ F_ℓ[y]`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::ff::{FFPoly, Fq, FqElem};
use super::intpoly::IntPoly;
use super::matrix::Matrix;
use super::ring::{Integers, Ring};
use super::upoly;
use crate::error::{Error, Result};

/// A valuation that may be `Top`, meaning "zero at working precision".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtVal {
    Fin(u32),
    Top,
}

impl ExtVal {
    pub fn is_top(self) -> bool {
        matches!(self, ExtVal::Top)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            ExtVal::Fin(v) => Some(v),
            ExtVal::Top => None,
        }
    }

    /// Sum with `Top` absorbing.
    pub fn plus(self, other: ExtVal) -> ExtVal {
        match (self, other) {
            (ExtVal::Fin(a), ExtVal::Fin(b)) => ExtVal::Fin(a + b),
            _ => ExtVal::Top,
        }
    }

    /// Caps the value at `n`, turning `Top` into `n` as well.
    pub fn cap(self, n: u32) -> u32 {
        match self {
            ExtVal::Fin(v) => v.min(n),
            ExtVal::Top => n,
        }
    }
}

impl PartialEq<u32> for ExtVal {
    fn eq(&self, other: &u32) -> bool {
        *self == ExtVal::Fin(*other)
    }
}

impl PartialOrd<u32> for ExtVal {
    fn partial_cmp(&self, other: &u32) -> Option<Ordering> {
        Some(self.cmp(&ExtVal::Fin(*other)))
    }
}

impl fmt::Display for ExtVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtVal::Fin(v) => write!(f, "{v}"),
            ExtVal::Top => write!(f, "TOP"),
        }
    }
}

impl Serialize for ExtVal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtVal::Fin(v) => s.serialize_u32(*v),
            ExtVal::Top => s.serialize_str("TOP"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtVal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) if s == "TOP" => Ok(ExtVal::Top),
            Value::Number(n) => n
                .as_u64()
                .and_then(|v| u32::try_from(v).ok())
                .map(ExtVal::Fin)
                .ok_or_else(|| serde::de::Error::custom("valuation out of range")),
            other => Err(serde::de::Error::custom(format!("bad valuation {other}"))),
        }
    }
}

/// JSON number when it fits in an `i64`, string otherwise.
pub fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Representation of a ring element: coefficients in `y`, constant first,
/// each in `[0, ℓ^N)`, no trailing zeros.
pub type Elem = Vec<BigInt>;

#[derive(Debug)]
struct Inner {
    ell: u64,
    residue_poly: Vec<u64>,
    lift_poly: Vec<BigInt>,
    precision: u32,
    modulus: BigInt,
    field: Fq,
}

/// `S/ℓ^N S` for `S` the unramified extension of `Z_ℓ` with residue field
/// `F_ℓ[y]/h̄`. Cheap to clone.
#[derive(Clone)]
pub struct WittRing {
    inner: Arc<Inner>,
}

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.ell == other.inner.ell
                && self.inner.residue_poly == other.inner.residue_poly
                && self.inner.precision == other.inner.precision)
    }
}

impl Eq for WittRing {}

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WittRing(ell={}, h={:?}, N={})",
            self.inner.ell, self.inner.residue_poly, self.inner.precision
        )
    }
}

impl WittRing {
    /// Ring with residue field `F_ℓ[y]/residue_poly`. A linear residue
    /// polynomial gives `Z/ℓ^N`.
    pub fn new(ell: u64, residue_poly: &[u64], precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        let field = Fq::extension(ell, residue_poly)?;
        let residue_poly = match field.modulus() {
            Some(h) => h.to_vec(),
            None => vec![0, 1],
        };
        let lift_poly = residue_poly.iter().map(|&c| BigInt::from(c)).collect();
        let modulus = BigInt::from(ell).pow(precision);
        Ok(WittRing {
            inner: Arc::new(Inner {
                ell,
                residue_poly,
                lift_poly,
                precision,
                modulus,
                field,
            }),
        })
    }

    /// `Z/ℓ^N`.
    pub fn prime(ell: u64, precision: u32) -> Result<Self> {
        Self::new(ell, &[0, 1], precision)
    }

    /// Ring whose residue field is the field of `hbar`'s coefficients
    /// extended by `hbar`; `hbar` must have prime-field coefficients.
    pub fn for_residue_factor(hbar: &FFPoly, precision: u32) -> Result<Self> {
        Self::new(
            hbar.field().characteristic(),
            &hbar.prime_coeffs(),
            precision,
        )
    }

    pub fn ell(&self) -> u64 {
        self.inner.ell
    }

    pub fn degree(&self) -> usize {
        self.inner.residue_poly.len() - 1
    }

    pub fn is_prime_ring(&self) -> bool {
        self.degree() == 1
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision
    }

    pub fn residue_poly(&self) -> &[u64] {
        &self.inner.residue_poly
    }

    pub fn lift_poly(&self) -> &[BigInt] {
        &self.inner.lift_poly
    }

    /// `ℓ^N`.
    pub fn modulus(&self) -> &BigInt {
        &self.inner.modulus
    }

    pub fn residue_field(&self) -> &Fq {
        &self.inner.field
    }

    pub fn with_precision(&self, precision: u32) -> WittRing {
        WittRing::new(self.inner.ell, &self.inner.residue_poly, precision)
            .expect("parameters already validated")
    }

    fn normalize(&self, v: Vec<BigInt>) -> Elem {
        let v = if v.len() > self.degree() {
            upoly::rem_monic(&Integers, &v, &self.inner.lift_poly)
        } else {
            v
        };
        let v = v
            .into_iter()
            .map(|c| c.mod_floor(&self.inner.modulus))
            .collect();
        upoly::trim(&Integers, v)
    }

    /// Element with the given integer coefficients in `y`.
    pub fn from_coeffs(&self, c: &[BigInt]) -> Elem {
        self.normalize(c.to_vec())
    }

    pub fn from_i64s(&self, c: &[i64]) -> Elem {
        self.normalize(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Re-reads an element of another ring with the same residue field
    /// (or a prime-ring constant) at this ring's precision.
    pub fn coerce(&self, other: &WittRing, e: &Elem) -> Elem {
        assert_eq!(self.ell(), other.ell());
        assert!(
            other.residue_poly() == self.residue_poly() || e.len() <= 1,
            "cannot coerce between different residue fields"
        );
        self.normalize(e.clone())
    }

    /// The class of `y`; zero in the prime ring.
    pub fn generator(&self) -> Elem {
        self.normalize(vec![BigInt::zero(), BigInt::one()])
    }

    /// The integer value of an element of `Z/ℓ^N`, in `[0, ℓ^N)`.
    pub fn to_integer(&self, e: &Elem) -> BigInt {
        assert!(e.len() <= 1, "element is not a constant");
        e.first().cloned().unwrap_or_default()
    }

    /// Balanced representative in `(-ℓ^N/2, ℓ^N/2]`.
    pub fn to_balanced_integer(&self, e: &Elem) -> BigInt {
        let v = self.to_integer(e);
        if &v * 2 > self.inner.modulus {
            v - &self.inner.modulus
        } else {
            v
        }
    }

    pub fn residue(&self, e: &Elem) -> FqElem {
        let ell = BigInt::from(self.inner.ell);
        let c: Vec<u64> = e
            .iter()
            .map(|x| x.mod_floor(&ell).to_u64().unwrap())
            .collect();
        self.inner.field.from_coeffs(&c)
    }

    /// Lift of a residue-field element with coefficients in `[0, ℓ)`.
    pub fn lift_residue(&self, r: &FqElem) -> Elem {
        self.normalize(r.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn valuation(&self, e: &Elem) -> ExtVal {
        let ell = BigInt::from(self.inner.ell);
        let mut best: Option<u32> = None;
        for c in e.iter().filter(|c| !c.is_zero()) {
            let mut v = 0;
            let mut x = c.clone();
            while x.is_multiple_of(&ell) {
                x /= &ell;
                v += 1;
            }
            best = Some(best.map_or(v, |b: u32| b.min(v)));
        }
        best.map_or(ExtVal::Top, ExtVal::Fin)
    }

    pub fn is_unit(&self, e: &Elem) -> bool {
        self.valuation(e) == ExtVal::Fin(0)
    }

    /// Inverse of a unit, by inverting the residue and Newton iteration.
    pub fn inv(&self, e: &Elem) -> Option<Elem> {
        let r = self.residue(e);
        let f = &self.inner.field;
        let ri = super::ring::Field::inv(f, &r)?;
        let mut x = self.lift_residue(&ri);
        let two = self.from_i64(2);
        let mut correct = 1u32;
        while correct < self.inner.precision {
            x = self.mul(&x, &self.sub(&two, &self.mul(e, &x)));
            correct *= 2;
        }
        Some(x)
    }

    /// `e / ℓ^k` when every coefficient representative is divisible by
    /// `ℓ^k`; the result is only meaningful modulo `ℓ^{N-k}`.
    pub fn div_ell_pow(&self, e: &Elem, k: u32) -> Option<Elem> {
        let d = BigInt::from(self.inner.ell).pow(k);
        let mut out = Vec::with_capacity(e.len());
        for c in e {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(upoly::trim(&Integers, out))
    }

    pub fn ell_pow(&self, k: u32) -> Elem {
        self.normalize(vec![BigInt::from(self.inner.ell).pow(k)])
    }

    pub fn pow_big(&self, e: &Elem, exp: &BigUint) -> Elem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, e);
            }
        }
        acc
    }

    /// The multiplicative (Teichmüller) lift of a residue-field element.
    pub fn teichmueller(&self, r: &FqElem) -> Elem {
        let q = self.inner.field.order();
        let mut x = self.lift_residue(r);
        for _ in 0..self.inner.precision {
            x = self.pow_big(&x, &q);
        }
        x
    }

    pub fn format_elem(&self, e: &Elem) -> String {
        if self.is_prime_ring() {
            return self.to_integer(e).to_string();
        }
        if e.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = e
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 if c.is_one() => "y".into(),
                1 => format!("{c}y"),
                _ if c.is_one() => format!("y^{i}"),
                _ => format!("{c}y^{i}"),
            })
            .collect();
        terms.join("+")
    }

    /// Coefficient array of length `m`, constant first.
    pub fn elem_json(&self, e: &Elem) -> Value {
        let m = self.degree();
        Value::Array(
            (0..m)
                .map(|i| bigint_json(&e.get(i).cloned().unwrap_or_default()))
                .collect(),
        )
    }

    fn header_json(&self) -> serde_json::Map<String, Value> {
        let mut map = serde_json::Map::new();
        map.insert("ell".into(), json!(self.inner.ell));
        map.insert("residue_poly".into(), json!(self.inner.residue_poly));
        map.insert("precision".into(), json!(self.inner.precision));
        map
    }

    pub fn wrap(&self, value: Elem) -> WittElem {
        WittElem {
            ring: self.clone(),
            value,
        }
    }
}

impl Ring for WittRing {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        Vec::new()
    }
    fn one(&self) -> Elem {
        self.normalize(vec![BigInt::one()])
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.normalize(upoly::add(&Integers, a, b))
    }
    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.normalize(upoly::sub(&Integers, a, b))
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.normalize(upoly::mul(&Integers, a, b))
    }
    fn neg(&self, a: &Elem) -> Elem {
        self.normalize(upoly::neg(&Integers, a))
    }
    fn is_zero(&self, a: &Elem) -> bool {
        a.is_empty()
    }
    fn from_int(&self, n: &BigInt) -> Elem {
        self.normalize(vec![n.clone()])
    }
}

/// An element together with its ring.
#[derive(Clone, PartialEq, Eq)]
pub struct WittElem {
    ring: WittRing,
    value: Elem,
}

impl WittElem {
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    pub fn valuation(&self) -> ExtVal {
        self.ring.valuation(&self.value)
    }

    pub fn residue(&self) -> FqElem {
        self.ring.residue(&self.value)
    }
}

impl fmt::Debug for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (mod {}^{})",
            self,
            self.ring.ell(),
            self.ring.precision()
        )
    }
}

impl fmt::Display for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.format_elem(&self.value))
    }
}

pub fn teichmueller_lift(residue: &FqElem, ring: &WittRing) -> WittElem {
    ring.wrap(ring.teichmueller(residue))
}

pub fn valuation(x: &WittElem) -> ExtVal {
    x.valuation()
}

/// Polynomial in `t` over a [`WittRing`], constant term first.
#[derive(Clone, PartialEq, Eq)]
pub struct WittPoly {
    ring: WittRing,
    coeffs: Vec<Elem>,
}

impl WittPoly {
    pub fn new(ring: &WittRing, coeffs: Vec<Elem>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| ring.normalize(c)).collect();
        WittPoly {
            ring: ring.clone(),
            coeffs: upoly::trim(ring, coeffs),
        }
    }

    fn raw(ring: &WittRing, coeffs: Vec<Elem>) -> Self {
        WittPoly {
            ring: ring.clone(),
            coeffs: upoly::trim(ring, coeffs),
        }
    }

    pub fn from_int_poly(ring: &WittRing, f: &IntPoly) -> Self {
        Self::raw(ring, f.coeffs().iter().map(|c| ring.from_int(c)).collect())
    }

    pub fn from_i64s(ring: &WittRing, c: &[i64]) -> Self {
        Self::raw(ring, c.iter().map(|&x| ring.from_i64(x)).collect())
    }

    /// Coefficientwise lift of a residue polynomial (representatives in `[0, ℓ)`).
    pub fn lift_residue(ring: &WittRing, f: &FFPoly) -> Self {
        Self::raw(
            ring,
            f.coeffs().iter().map(|c| ring.lift_residue(c)).collect(),
        )
    }

    pub fn monomial(ring: &WittRing, k: usize) -> Self {
        Self::raw(ring, upoly::monomial(ring, ring.one(), k))
    }

    pub fn constant(ring: &WittRing, c: Elem) -> Self {
        Self::raw(ring, vec![c])
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        upoly::degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff the leading coefficient is exactly 1.
    pub fn monic_exact(&self) -> bool {
        upoly::is_monic(&self.ring, &self.coeffs)
    }

    pub fn add(&self, o: &WittPoly) -> WittPoly {
        Self::raw(&self.ring, upoly::add(&self.ring, &self.coeffs, &o.coeffs))
    }

    pub fn sub(&self, o: &WittPoly) -> WittPoly {
        Self::raw(&self.ring, upoly::sub(&self.ring, &self.coeffs, &o.coeffs))
    }

    pub fn mul(&self, o: &WittPoly) -> WittPoly {
        Self::raw(&self.ring, upoly::mul(&self.ring, &self.coeffs, &o.coeffs))
    }

    pub fn scale(&self, c: &Elem) -> WittPoly {
        Self::raw(&self.ring, upoly::scale(&self.ring, &self.coeffs, c))
    }

    pub fn pow(&self, e: u64) -> WittPoly {
        Self::raw(&self.ring, upoly::pow(&self.ring, &self.coeffs, e))
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        upoly::eval(&self.ring, &self.coeffs, x)
    }

    pub fn taylor_shift(&self, a: &Elem) -> WittPoly {
        Self::raw(&self.ring, upoly::taylor_shift(&self.ring, &self.coeffs, a))
    }

    pub fn derivative(&self) -> WittPoly {
        Self::raw(&self.ring, upoly::derivative(&self.ring, &self.coeffs))
    }

    pub fn divrem_monic(&self, divisor: &WittPoly) -> (WittPoly, WittPoly) {
        let (q, r) = upoly::divrem_monic(&self.ring, &self.coeffs, &divisor.coeffs);
        (Self::raw(&self.ring, q), Self::raw(&self.ring, r))
    }

    pub fn rem_monic(&self, divisor: &WittPoly) -> WittPoly {
        self.divrem_monic(divisor).1
    }

    pub fn residue(&self) -> FFPoly {
        let field = self.ring.residue_field();
        FFPoly::new(
            field,
            self.coeffs.iter().map(|c| self.ring.residue(c)).collect(),
        )
    }

    /// Valuations of the coefficients of `t^0, …, t^deg`.
    pub fn coeff_valuations(&self) -> Vec<ExtVal> {
        let d = self.degree().map_or(0, |d| d + 1);
        (0..d)
            .map(|i| self.ring.valuation(&self.coeff(i)))
            .collect()
    }

    /// Same polynomial read in another ring of equal or lower precision.
    pub fn coerce(&self, ring: &WittRing) -> WittPoly {
        Self::raw(
            ring,
            self.coeffs
                .iter()
                .map(|c| ring.coerce(&self.ring, c))
                .collect(),
        )
    }

    /// Balanced integer representatives; only for `Z/ℓ^N`.
    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| self.ring.to_balanced_integer(c))
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        let mut map = self.ring.header_json();
        map.insert(
            "coeffs".into(),
            Value::Array(self.coeffs.iter().map(|c| self.ring.elem_json(c)).collect()),
        );
        Value::Object(map)
    }
}

impl fmt::Debug for WittPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittPoly[{:?}]({self})", self.ring)
    }
}

impl fmt::Display for WittPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_empty())
            .map(|(i, c)| {
                let mut cs = self.ring.format_elem(c);
                if cs.contains('+') {
                    cs = format!("({cs})");
                }
                let unit = self.ring.is_one(c);
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

/// Matrix over a [`WittRing`].
#[derive(Clone, PartialEq, Eq)]
pub struct WittMatrix {
    ring: WittRing,
    mat: Matrix<Elem>,
}

impl WittMatrix {
    pub fn new(ring: &WittRing, mat: Matrix<Elem>) -> Self {
        WittMatrix {
            ring: ring.clone(),
            mat: mat.map(|e| ring.normalize(e.clone())),
        }
    }

    pub fn from_int_rows(ring: &WittRing, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
            .collect();
        WittMatrix {
            ring: ring.clone(),
            mat: Matrix::from_rows(rows),
        }
    }

    pub fn identity(ring: &WittRing, n: usize) -> Self {
        WittMatrix {
            ring: ring.clone(),
            mat: Matrix::identity(ring, n),
        }
    }

    pub fn zero(ring: &WittRing, rows: usize, cols: usize) -> Self {
        WittMatrix {
            ring: ring.clone(),
            mat: Matrix::zero(ring, rows, cols),
        }
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn matrix(&self) -> &Matrix<Elem> {
        &self.mat
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn cols(&self) -> usize {
        self.mat.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        self.mat.get(i, j)
    }

    pub fn add(&self, o: &WittMatrix) -> WittMatrix {
        WittMatrix {
            ring: self.ring.clone(),
            mat: self.mat.add(&self.ring, &o.mat),
        }
    }

    pub fn sub(&self, o: &WittMatrix) -> WittMatrix {
        WittMatrix {
            ring: self.ring.clone(),
            mat: self.mat.sub(&self.ring, &o.mat),
        }
    }

    pub fn mul(&self, o: &WittMatrix) -> WittMatrix {
        WittMatrix {
            ring: self.ring.clone(),
            mat: self.mat.mul(&self.ring, &o.mat),
        }
    }

    pub fn scale(&self, c: &Elem) -> WittMatrix {
        WittMatrix {
            ring: self.ring.clone(),
            mat: self.mat.scale(&self.ring, c),
        }
    }

    pub fn pow(&self, e: u64) -> WittMatrix {
        WittMatrix {
            ring: self.ring.clone(),
            mat: self.mat.pow(&self.ring, e),
        }
    }

    /// `det(t·I - M)`.
    pub fn charpoly(&self) -> WittPoly {
        WittPoly::raw(&self.ring, self.mat.charpoly(&self.ring))
    }

    pub fn det(&self) -> Elem {
        self.mat.det(&self.ring)
    }

    pub fn residue(&self) -> Matrix<FqElem> {
        self.mat.map(|e| self.ring.residue(e))
    }

    pub fn coerce(&self, ring: &WittRing) -> WittMatrix {
        WittMatrix {
            ring: ring.clone(),
            mat: self.mat.map(|e| ring.coerce(&self.ring, e)),
        }
    }

    /// Balanced integer entries; only for `Z/ℓ^N`.
    pub fn to_int_rows(&self) -> Vec<Vec<BigInt>> {
        self.mat
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|e| self.ring.to_balanced_integer(e)).collect())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut map = self.ring.header_json();
        let rows = self
            .mat
            .to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|e| self.ring.elem_json(e)).collect()))
            .collect();
        map.insert("coeffs".into(), Value::Array(rows));
        Value::Object(map)
    }
}

impl fmt::Debug for WittMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittMatrix[{:?}]{self}", self.ring)
    }
}

impl fmt::Display for WittMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .mat
            .to_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|e| self.ring.format_elem(e)).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
