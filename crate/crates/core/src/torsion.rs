//! Weil polynomials, their local decomposition at ℓ, and the classification
//! of the ℓ-torsion group schemes in an isogeny class.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::ff::{ff_factor, is_prime, prime_power, FFPoly, Fq, PrimeField};
use crate::algebra::hensel::{hensel_lift, hensel_lift_grouped};
use crate::algebra::intpoly::IntPoly;
use crate::algebra::matrix::Matrix;
use crate::algebra::ring::{sign, Integers, Rationals, Ring};
use crate::algebra::upoly;
use crate::algebra::witt::{Elem, WittElem, WittPoly, WittRing};
use crate::error::{Error, Result};
use crate::lattice::{cokernel_group, construct_lift, frobenius_matrix};
use crate::polygon::{admissible_partitions, clamp, newton_polygon, NewtonPolygon, YoungPolygon};

pub const PRECISION_CAP_ENV: &str = "TORSION_ATLAS_PRECISION_CAP";

/// Largest working precision the adaptive routines may reach for a
/// polynomial of degree `deg`.
pub fn precision_cap(deg: usize) -> u32 {
    std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(64 * deg.max(1) as u32)
}

/// A validated Weil polynomial of degree `2g` for `q = p^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilPolynomial {
    pub coeffs: IntPoly,
    pub q: u64,
    pub p: u64,
}

impl WeilPolynomial {
    pub fn genus(&self) -> usize {
        self.coeffs.degree().unwrap_or(0) / 2
    }

    pub fn degree(&self) -> usize {
        self.coeffs.degree().unwrap_or(0)
    }
}

fn rat_poly(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn squarefree_part(p: &[BigRational]) -> Vec<BigRational> {
    let g = upoly::gcd(&Rationals, p, &upoly::derivative(&Rationals, p));
    upoly::divrem(&Rationals, p, &g).0
}

fn sturm_chain(p: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut chain = vec![p.to_vec(), upoly::derivative(&Rationals, p)];
    while chain.last().is_some_and(|c| !c.is_empty()) {
        let n = chain.len();
        let r = upoly::divrem(&Rationals, &chain[n - 2], &chain[n - 1]).1;
        chain.push(upoly::neg(&Rationals, &r));
    }
    chain.pop();
    chain
}

/// Sign changes of the chain at `x`, or at `±∞` for `None` with `positive`.
fn sign_changes(chain: &[Vec<BigRational>], x: Option<&BigRational>, positive: bool) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| match x {
            Some(x) => sign(&upoly::eval(&Rationals, p, x)),
            None => {
                let lead = sign(p.last().expect("nonzero"));
                if !positive && (p.len() - 1) % 2 == 1 {
                    -lead
                } else {
                    lead
                }
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// True iff every complex root of `f` has absolute value `√q`, for `f`
/// satisfying the functional equation: the real polynomial `h` with
/// `f(t) = t^g h(t + q/t)` must have all roots real in `[-2√q, 2√q]`.
fn roots_on_circle(c: &[BigInt], g: usize, q: u64) -> bool {
    let qi = BigInt::from(q);
    let y = vec![BigInt::zero(), BigInt::one()];
    let mut d_prev = vec![BigInt::from(2)];
    let mut d_cur = y.clone();
    let mut h = vec![c[g].clone()];
    for k in 1..=g {
        h = upoly::add(&Integers, &h, &upoly::scale(&Integers, &d_cur, &c[g + k]));
        let shifted = upoly::mul(&Integers, &y, &d_cur);
        let next = upoly::sub(&Integers, &shifted, &upoly::scale(&Integers, &d_prev, &qi));
        d_prev = std::mem::replace(&mut d_cur, next);
    }
    let s = squarefree_part(&rat_poly(&IntPoly::new(h)));
    let deg = s.len() - 1;
    if deg == 0 {
        return true;
    }
    let chain = sturm_chain(&s);
    if sign_changes(&chain, None, false) - sign_changes(&chain, None, true) != deg {
        return false;
    }
    // roots y_i^2 of E(u)^2 - u O(u)^2 where s(y) = E(y^2) + y O(y^2)
    let even: Vec<BigRational> = s.iter().step_by(2).cloned().collect();
    let odd: Vec<BigRational> = s.iter().skip(1).step_by(2).cloned().collect();
    let u = vec![BigRational::zero(), BigRational::one()];
    let sq = upoly::sub(
        &Rationals,
        &upoly::mul(&Rationals, &even, &even),
        &upoly::mul(&Rationals, &u, &upoly::mul(&Rationals, &odd, &odd)),
    );
    let sq = squarefree_part(&sq);
    if sq.len() <= 1 {
        return true;
    }
    let chain = sturm_chain(&sq);
    let bound = BigRational::from_integer(BigInt::from(4) * qi);
    sign_changes(&chain, Some(&bound), true) == sign_changes(&chain, None, true)
}

/// Checks the functional equation exactly and the root moduli by Sturm
/// sequences; `force` skips the root-modulus gate.
pub fn validate_weil(f: &IntPoly, q: u64, force: bool) -> Result<WeilPolynomial> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let deg = f.degree().unwrap_or(0);
    if !f.is_monic() || deg == 0 || deg % 2 != 0 {
        return Err(Error::InvalidInput(
            "Weil polynomial must be monic of positive even degree".into(),
        ));
    }
    let g = deg / 2;
    let c = f.coeffs();
    let qi = BigInt::from(q);
    for i in 0..g {
        if c[i] != qi.pow((g - i) as u32) * &c[2 * g - i] {
            return Err(Error::FunctionalEquationViolated { index: i });
        }
    }
    if !force && !roots_on_circle(c, g, q) {
        return Err(Error::RootModulusSuspect);
    }
    Ok(WeilPolynomial {
        coeffs: f.clone(),
        q,
        p,
    })
}

/// One local factor `f_i ≡ h̄^d (mod ℓ)` with its distinguished triple.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactor {
    pub hbar: FFPoly,
    pub d: u32,
    pub f_lift: WittPoly,
    pub alpha: WittElem,
    pub q: WittPoly,
    pub np: NewtonPolygon,
}

impl LocalFactor {
    pub fn ring(&self) -> &WittRing {
        self.q.ring()
    }

    pub fn clamped_polygon(&self) -> NewtonPolygon {
        clamp(&self.np)
    }

    pub fn admissible(&self) -> Result<Vec<YoungPolygon>> {
        admissible_partitions(&self.clamped_polygon(), self.d)
    }
}

#[derive(Debug, Clone, Default)]
pub struct DecompositionOptions {
    /// Working precision; `deg f + 2` when unset.
    pub precision: Option<u32>,
    /// Seed for equal-degree splitting.
    pub seed: u64,
    /// Replace each Teichmüller lift `α` by `α + ℓ·r` with `r` drawn from
    /// this seed.
    pub perturb_lifts: Option<u64>,
}

fn random_unit_multiple(ring: &WittRing, rng: &mut ChaCha8Rng) -> Elem {
    let field = ring.residue_field();
    let mut acc = ring.zero();
    for k in 1..ring.precision() {
        let digit = ring.lift_residue(&field.random(rng));
        acc = ring.add(&acc, &ring.mul(&ring.ell_pow(k), &digit));
    }
    acc
}

/// Splits `f` over `Z_ℓ` into factors `f_i ≡ h̄_i^{d_i}` and forms
/// `Q_i = g_i(t + α_i)`, where `g_i` is the factor of `f_i` over
/// `W(F_ℓ(h̄_i))` belonging to the root `α_i`.
pub fn local_decomposition(
    f: &IntPoly,
    ell: u64,
    opts: &DecompositionOptions,
) -> Result<Vec<LocalFactor>> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if !f.is_monic() {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    let deg = f.degree().unwrap_or(0);
    let precision = opts.precision.unwrap_or(deg as u32 + 2);
    let fp = Fq::prime(ell)?;
    let fbar = FFPoly::from_int_poly(&fp, f);
    let groups = ff_factor(&fbar, opts.seed)?;
    let lifts = hensel_lift_grouped(f, &groups, ell, precision)?;
    let mut rng = opts.perturb_lifts.map(ChaCha8Rng::seed_from_u64);
    let mut out = Vec::new();
    for ((hbar, d), f_lift) in groups.into_iter().zip(lifts) {
        let ring = WittRing::for_residue_factor(&hbar, precision)?;
        let field = ring.residue_field().clone();
        let root = if hbar.degree() == Some(1) {
            field.neg(&field.from_u64(hbar.prime_coeffs()[0]))
        } else {
            field.generator()
        };
        let f_ext = f_lift.coerce(&ring);
        let g = if hbar.degree() == Some(1) {
            f_ext
        } else {
            let near = FFPoly::linear(&field, &root).pow(d as u64);
            let rest = f_ext.residue().div_exact(&near).ok_or_else(|| {
                Error::Internal("local factor is not a power of its residue".into())
            })?;
            hensel_lift(&f_ext, &near, &rest)?.0
        };
        let mut alpha = ring.teichmueller(&root);
        if let Some(rng) = rng.as_mut() {
            alpha = ring.add(&alpha, &random_unit_multiple(&ring, rng));
        }
        let q = g.taylor_shift(&alpha);
        let np = newton_polygon(&q)?;
        out.push(LocalFactor {
            hbar,
            d,
            f_lift,
            alpha: ring.wrap(alpha),
            q,
            np,
        });
    }
    Ok(out)
}

/// `A(h̄, N)`: Frobenius acts by `M(h̄) ⊗ I_d + I ⊗ N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistinguishedScheme {
    pub hbar: FFPoly,
    pub partition: YoungPolygon,
}

impl DistinguishedScheme {
    pub fn dimension(&self) -> usize {
        self.hbar.degree().unwrap_or(0) * self.partition.total() as usize
    }

    pub fn frobenius(&self) -> Result<Matrix<u64>> {
        frobenius_matrix(&self.hbar, &self.partition)
    }

    pub fn to_json(&self) -> Value {
        json!({ "hbar": self.hbar.prime_coeffs(), "partition": self.partition.parts() })
    }
}

impl fmt::Display for DistinguishedScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({}, {})", self.hbar, self.partition)
    }
}

/// A direct sum of distinguished schemes in canonical form: one summand per
/// residue factor, sorted by factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionClass {
    summands: Vec<DistinguishedScheme>,
}

impl TorsionClass {
    pub fn new(summands: Vec<DistinguishedScheme>) -> Self {
        let mut merged: BTreeMap<FFPoly, YoungPolygon> = BTreeMap::new();
        for s in summands {
            merged
                .entry(s.hbar.monic())
                .and_modify(|p| *p = p.union(&s.partition))
                .or_insert(s.partition);
        }
        TorsionClass {
            summands: merged
                .into_iter()
                .map(|(hbar, partition)| DistinguishedScheme { hbar, partition })
                .collect(),
        }
    }

    pub fn summands(&self) -> &[DistinguishedScheme] {
        &self.summands
    }

    pub fn dimension(&self) -> usize {
        self.summands
            .iter()
            .map(DistinguishedScheme::dimension)
            .sum()
    }

    pub fn partition_of(&self, hbar: &FFPoly) -> Option<&YoungPolygon> {
        self.summands
            .iter()
            .find(|s| s.hbar == hbar.monic())
            .map(|s| &s.partition)
    }

    /// Frobenius on the direct sum, over `F_ℓ`.
    pub fn frobenius(&self) -> Result<Matrix<u64>> {
        let ell = self
            .summands
            .first()
            .map(|s| s.hbar.field().characteristic())
            .ok_or_else(|| Error::InvalidInput("empty torsion class".into()))?;
        let fp = PrimeField::new(ell)?;
        let blocks = self
            .summands
            .iter()
            .map(|s| s.frobenius())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::block_diagonal(&fp, &blocks))
    }

    pub fn to_json(&self) -> Value {
        json!({ "summands": self.summands.iter().map(|s| s.to_json()).collect::<Vec<_>>() })
    }
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_ell(f: &WeilPolynomial, ell: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == f.p {
        return Err(Error::EllEqualsP(ell));
    }
    Ok(())
}

/// Every torsion class `A[ℓ]` occurring in the isogeny class of a
/// squarefree Weil polynomial.
pub fn classify_torsion(f: &WeilPolynomial, ell: u64) -> Result<Vec<TorsionClass>> {
    classify_torsion_with(f, ell, &DecompositionOptions::default())
}

pub fn classify_torsion_with(
    f: &WeilPolynomial,
    ell: u64,
    opts: &DecompositionOptions,
) -> Result<Vec<TorsionClass>> {
    check_ell(f, ell)?;
    if !f.coeffs.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let factors = local_decomposition(&f.coeffs, ell, opts)?;
    let mut classes: Vec<Vec<DistinguishedScheme>> = vec![Vec::new()];
    for lf in &factors {
        let options = lf.admissible()?;
        classes = classes
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(DistinguishedScheme {
                        hbar: lf.hbar.clone(),
                        partition: p.clone(),
                    });
                    next
                })
            })
            .collect();
    }
    let mut out: Vec<TorsionClass> = classes.into_iter().map(TorsionClass::new).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn mobius(mut n: u32) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Multiplicative order of an invertible matrix over `F_ℓ`.
pub fn matrix_order(m: &Matrix<u64>, fp: &PrimeField) -> Result<u32> {
    let id = Matrix::identity(fp, m.rows());
    let mut power = m.clone();
    let bound = (fp.p() as u128).pow(m.rows() as u32);
    let mut r = 1u32;
    while power != id {
        if r as u128 >= bound {
            return Err(Error::InvalidInput("Frobenius is not invertible".into()));
        }
        power = power.mul(fp, m);
        r += 1;
    }
    Ok(r)
}

/// Number `b_r` of closed points of degree `r` on the group scheme, for
/// `r ≤ max_degree` (default: the order of Frobenius). Zero counts are
/// omitted.
pub fn scheme_point_counts(
    class: &TorsionClass,
    max_degree: Option<u32>,
) -> Result<BTreeMap<u32, u64>> {
    let frob = class.frobenius()?;
    let ell = class.summands[0].hbar.field().characteristic();
    let fp = PrimeField::new(ell)?;
    let n = frob.rows();
    let max = match max_degree {
        Some(m) => m,
        None => matrix_order(&frob, &fp)?,
    };
    let id = Matrix::identity(&fp, n);
    let mut fixed = Vec::with_capacity(max as usize + 1);
    fixed.push(0i128);
    let mut power = id.clone();
    for _ in 1..=max {
        power = power.mul(&fp, &frob);
        let kernel_dim = n - power.sub(&fp, &id).rank(&fp);
        let count = (ell as i128)
            .checked_pow(kernel_dim as u32)
            .ok_or_else(|| Error::InvalidInput("point count overflows".into()))?;
        fixed.push(count);
    }
    let mut out = BTreeMap::new();
    for r in 1..=max {
        let total: i128 = (1..=r)
            .filter(|e| r % e == 0)
            .map(|e| mobius(r / e) as i128 * fixed[e as usize])
            .sum();
        let b = total / r as i128;
        if b != 0 {
            out.insert(r, b as u64);
        }
    }
    Ok(out)
}

/// Monic polynomial whose roots are `q/ω` for the roots `ω` of `f`.
pub fn dual_weil(f: &IntPoly, q: u64) -> Result<IntPoly> {
    let d = f.degree().unwrap_or(0);
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let qi = BigInt::from(q);
    let mut coeffs = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let num = f.coeff(d - i) * qi.pow((d - i) as u32);
        if !(&num % &c0).is_zero() {
            return Err(Error::NotPolynomial(
                "dual has non-integral coefficients".into(),
            ));
        }
        coeffs.push(num / &c0);
    }
    let g = IntPoly::new(coeffs);
    if g.coeff(d).is_negative() || !g.is_monic() {
        return Err(Error::NotPolynomial("dual is not monic".into()));
    }
    Ok(g)
}

/// Residue factor whose roots are `q/β` for the roots `β` of `hbar`.
pub fn dual_residue_factor(hbar: &FFPoly, q: u64) -> FFPoly {
    let field = hbar.field();
    let m = hbar.degree().unwrap_or(0);
    let qe = field.from_int(&BigInt::from(q));
    let coeffs = (0..=m)
        .map(|i| field.mul(&hbar.coeff(m - i), &field.pow(&qe, (m - i) as u64)))
        .collect();
    FFPoly::new(field, coeffs).monic()
}

/// For each factor, the index of the factor carrying the dual roots.
pub fn dual_polygon_map(factors: &[LocalFactor], q: u64) -> Result<Vec<usize>> {
    factors
        .iter()
        .map(|lf| {
            let target = dual_residue_factor(&lf.hbar, q);
            let j = factors
                .iter()
                .position(|other| other.hbar == target)
                .ok_or_else(|| Error::UnpairedFactor(lf.hbar.to_string()))?;
            if factors[j].d != lf.d {
                return Err(Error::UnpairedFactor(format!(
                    "{} has multiplicity {} but its dual has {}",
                    lf.hbar, lf.d, factors[j].d
                )));
            }
            Ok(j)
        })
        .collect()
}

/// Torsion class of the dual variety: the partition at each factor moves
/// to the factor carrying the dual roots.
pub fn dual_class(class: &TorsionClass, q: u64) -> TorsionClass {
    TorsionClass::new(
        class
            .summands()
            .iter()
            .map(|s| DistinguishedScheme {
                hbar: dual_residue_factor(&s.hbar, q),
                partition: s.partition.clone(),
            })
            .collect(),
    )
}

/// `coker(shift - F)` on the lattice realizing `class`, as exponents of
/// cyclic `ℓ`-groups. For `shift = 1` this is the `ℓ`-part of the group of
/// rational points. Precision doubles on exhaustion up to the cap.
pub fn torsion_point_group(
    f: &WeilPolynomial,
    ell: u64,
    class: &TorsionClass,
    shift: i64,
    opts: &DecompositionOptions,
) -> Result<Vec<u32>> {
    check_ell(f, ell)?;
    let deg = f.degree();
    let cap = precision_cap(deg);
    let mut precision = opts.precision.unwrap_or(deg as u32 + 2);
    loop {
        let attempt = DecompositionOptions {
            precision: Some(precision),
            ..opts.clone()
        };
        match point_group_at(f, ell, class, shift, &attempt) {
            Err(Error::PrecisionExhausted(msg)) => {
                if precision >= cap {
                    return Err(Error::PrecisionExhausted(format!("{msg} (cap {cap})")));
                }
                precision = (precision * 2).min(cap);
            }
            other => return other,
        }
    }
}

fn point_group_at(
    f: &WeilPolynomial,
    ell: u64,
    class: &TorsionClass,
    shift: i64,
    opts: &DecompositionOptions,
) -> Result<Vec<u32>> {
    let factors = local_decomposition(&f.coeffs, ell, opts)?;
    if class.dimension() != f.degree() {
        return Err(Error::DimensionMismatch(
            "class does not match the polynomial".into(),
        ));
    }
    let mut out = Vec::new();
    for lf in &factors {
        let partition = class
            .partition_of(&lf.hbar)
            .ok_or_else(|| Error::InvalidInput(format!("class has no summand at {}", lf.hbar)))?;
        let model = construct_lift(&lf.q, partition)?.with_alpha(lf.alpha.value().clone());
        let ring = model.ring().clone();
        out.extend(cokernel_group(&model, &ring.from_i64(shift))?);
    }
    out.sort_unstable();
    Ok(out)
}
