//! Linear Hensel lifting of coprime factorizations over a [`WittRing`].

use super::ff::FFPoly;
use super::intpoly::IntPoly;
use super::witt::{WittPoly, WittRing};
use crate::error::{Error, Result};

/// Lifts `f ≡ g0·h0 (mod ℓ)` with `g0`, `h0` monic and coprime to a
/// factorization `f ≡ g·h (mod ℓ^N)` with monic `g ≡ g0`, `h ≡ h0`.
pub fn hensel_lift(f: &WittPoly, g0: &FFPoly, h0: &FFPoly) -> Result<(WittPoly, WittPoly)> {
    let ring = f.ring();
    if !f.monic_exact() {
        return Err(Error::InvalidInput(
            "Hensel lifting needs a monic polynomial".into(),
        ));
    }
    let (gcd, s0, t0) = g0.xgcd(h0);
    if !gcd.is_one() {
        return Err(Error::NotCoprime);
    }
    if g0.mul(h0) != f.residue() {
        return Err(Error::InvalidInput(
            "residue factors do not multiply to f mod ell".into(),
        ));
    }
    let s = WittPoly::lift_residue(ring, &s0);
    let t = WittPoly::lift_residue(ring, &t0);
    let mut g = WittPoly::lift_residue(ring, &g0.monic());
    let mut h = WittPoly::lift_residue(ring, &h0.monic());
    for _ in 1..ring.precision() {
        let e = f.sub(&g.mul(&h));
        if e.is_zero() {
            break;
        }
        let dg = t.mul(&e).rem_monic(&g);
        let dh = s.mul(&e).rem_monic(&h);
        g = g.add(&dg);
        h = h.add(&dh);
    }
    debug_assert!(f.sub(&g.mul(&h)).is_zero());
    Ok((g, h))
}

/// Lifts a factorization into pairwise coprime residue factors, one factor
/// at a time.
pub fn hensel_lift_factors(f: &WittPoly, residues: &[FFPoly]) -> Result<Vec<WittPoly>> {
    let ring = f.ring();
    let field = ring.residue_field();
    match residues {
        [] => Err(Error::InvalidInput("no residue factors given".into())),
        [only] => {
            if only.monic() != f.residue() {
                return Err(Error::InvalidInput(
                    "residue factor does not match f mod ell".into(),
                ));
            }
            Ok(vec![f.clone()])
        }
        [first, rest @ ..] => {
            let rest_product = rest.iter().fold(FFPoly::one(field), |acc, r| acc.mul(r));
            let (g, h) = hensel_lift(f, first, &rest_product)?;
            let mut out = vec![g];
            out.extend(hensel_lift_factors(&h, rest)?);
            Ok(out)
        }
    }
}

/// Lifts `f ≡ ∏ h̄_i^{d_i} (mod ℓ)` to monic factors `f_i ≡ h̄_i^{d_i}` with
/// `∏ f_i ≡ f (mod ℓ^N)` over `Z/ℓ^N`.
pub fn hensel_lift_grouped(
    f: &IntPoly,
    groups: &[(FFPoly, u32)],
    ell: u64,
    precision: u32,
) -> Result<Vec<WittPoly>> {
    if !f.is_monic() {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    let ring = WittRing::prime(ell, precision)?;
    let field = ring.residue_field();
    let powers: Vec<FFPoly> = groups
        .iter()
        .map(|(h, d)| {
            FFPoly::from_u64s(field, &h.prime_coeffs())
                .monic()
                .pow(*d as u64)
        })
        .collect();
    for (i, a) in powers.iter().enumerate() {
        for b in &powers[i + 1..] {
            if !a.gcd(b).is_one() {
                return Err(Error::NotCoprime);
            }
        }
    }
    hensel_lift_factors(&WittPoly::from_int_poly(&ring, f), &powers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ff::Fq;

    #[test]
    fn lifts_weil_product_mod_25() {
        let f = IntPoly::from_leading_first(&[1, -1, 8, -7, 49]);
        let f5 = Fq::prime(5).unwrap();
        let groups = vec![
            (FFPoly::from_u64s(&f5, &[4, 1]), 2),
            (FFPoly::from_u64s(&f5, &[3, 1]), 2),
        ];
        let lifted = hensel_lift_grouped(&f, &groups, 5, 2).unwrap();
        let ring = lifted[0].ring().clone();
        assert_eq!(lifted[0], WittPoly::from_i64s(&ring, &[16, 8, 1]));
        assert_eq!(lifted[1], WittPoly::from_i64s(&ring, &[14, 16, 1]));
    }

    #[test]
    fn shared_factor_is_rejected() {
        let f = IntPoly::from_leading_first(&[1, 0, 0]);
        let f3 = Fq::prime(3).unwrap();
        let t = FFPoly::x(&f3);
        assert_eq!(
            hensel_lift_grouped(&f, &[(t.clone(), 1), (t, 1)], 3, 3),
            Err(Error::NotCoprime)
        );
    }
}
