//! Complete classification of `A[ℓ]` for abelian surfaces, including Weil
//! polynomials with repeated roots.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::algebra::ff::{ff_factor, FFPoly, Fq};
use crate::algebra::intpoly::IntPoly;
use crate::algebra::ring::Ring;
use crate::algebra::witt::{WittPoly, WittRing};
use crate::error::{Error, Result};
use crate::lattice::construct_lift;
use crate::mf::{cokernel_module_type, factorization_from_generators, swap_partner};
use crate::polygon::{admissible_partitions, clamp, newton_polygon_int, YoungPolygon};
use crate::torsion::{
    classify_torsion_with, local_decomposition, precision_cap, DecompositionOptions,
    DistinguishedScheme, TorsionClass, WeilPolynomial,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceCaseId {
    SquarefreeMod,
    OneDoubleRoot,
    TwoDoubleRoots,
    DoubleIrreducible,
    QuadrupleRoot,
    SquareSquarefreeMod,
    SquareDoubleRoot,
    RationalRootCoprime,
    RationalRootDouble,
    RationalRootMatching,
    RationalRootMatchingDeep,
    FourthPower,
}

impl SurfaceCaseId {
    pub const ALL: [SurfaceCaseId; 12] = [
        SurfaceCaseId::SquarefreeMod,
        SurfaceCaseId::OneDoubleRoot,
        SurfaceCaseId::TwoDoubleRoots,
        SurfaceCaseId::DoubleIrreducible,
        SurfaceCaseId::QuadrupleRoot,
        SurfaceCaseId::SquareSquarefreeMod,
        SurfaceCaseId::SquareDoubleRoot,
        SurfaceCaseId::RationalRootCoprime,
        SurfaceCaseId::RationalRootDouble,
        SurfaceCaseId::RationalRootMatching,
        SurfaceCaseId::RationalRootMatchingDeep,
        SurfaceCaseId::FourthPower,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SurfaceCaseId::SquarefreeMod => "1",
            SurfaceCaseId::OneDoubleRoot => "2",
            SurfaceCaseId::TwoDoubleRoots => "3",
            SurfaceCaseId::DoubleIrreducible => "4",
            SurfaceCaseId::QuadrupleRoot => "5",
            SurfaceCaseId::SquareSquarefreeMod => "6a",
            SurfaceCaseId::SquareDoubleRoot => "6b",
            SurfaceCaseId::RationalRootCoprime => "7a",
            SurfaceCaseId::RationalRootDouble => "7b",
            SurfaceCaseId::RationalRootMatching => "7c_i",
            SurfaceCaseId::RationalRootMatchingDeep => "7c_ii",
            SurfaceCaseId::FourthPower => "8",
        }
    }
}

impl fmt::Display for SurfaceCaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceCase {
    pub case_id: SurfaceCaseId,
    pub conditions: Map<String, Value>,
    pub classes: Vec<TorsionClass>,
}

impl SurfaceCase {
    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case_id.label(),
            "conditions": self.conditions,
            "classes": self.classes.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Whether `Z_ℓ[t]/f` is regular when `f ≡ h̄²` with `h̄` an irreducible
/// quadratic; regularity forces a nonzero nilpotent.
pub fn regularity_test(a1: &BigInt, a2: &BigInt, q: &BigInt, ell: u64) -> bool {
    dedekind_quantity(a1, a2, q, ell).1
}

fn dedekind_quantity(a1: &BigInt, a2: &BigInt, q: &BigInt, ell: u64) -> (BigInt, bool) {
    if ell == 2 {
        let v: BigInt = a1 + a2 + 1 - 2 * q;
        let divisible = v.mod_floor(&BigInt::from(4)).is_zero();
        (v, !divisible)
    } else {
        let v: BigInt = a1 * a1 - 4 * a2 + 8 * q;
        let divisible = v.mod_floor(&BigInt::from(ell * ell)).is_zero();
        (v, !divisible)
    }
}

fn shape_string(groups: &[(FFPoly, u32)]) -> String {
    groups
        .iter()
        .map(|(h, e)| {
            if *e == 1 {
                format!("({h})")
            } else {
                format!("({h})^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn scheme(hbar: FFPoly, partition: YoungPolygon) -> DistinguishedScheme {
    DistinguishedScheme { hbar, partition }
}

fn sorted(mut classes: Vec<TorsionClass>) -> Vec<TorsionClass> {
    classes.sort();
    classes.dedup();
    classes
}

/// The case of the surface classification and every torsion class that
/// occurs in the isogeny class.
pub fn classify_surface(f: &WeilPolynomial, ell: u64) -> Result<SurfaceCase> {
    classify_surface_with(f, ell, &DecompositionOptions::default())
}

pub fn classify_surface_with(
    f: &WeilPolynomial,
    ell: u64,
    opts: &DecompositionOptions,
) -> Result<SurfaceCase> {
    if f.degree() != 4 {
        return Err(Error::WrongDegree {
            expected: 4,
            found: f.degree(),
        });
    }
    if ell == f.p {
        return Err(Error::EllEqualsP(ell));
    }
    let fp = Fq::prime(ell)?;
    let fbar = FFPoly::from_int_poly(&fp, &f.coeffs);
    let groups = ff_factor(&fbar, opts.seed)?;
    let mut conditions = Map::new();
    conditions.insert("residue_factorization".into(), json!(shape_string(&groups)));
    let squarefree = f.coeffs.is_squarefree();
    conditions.insert("squarefree".into(), json!(squarefree));
    if squarefree {
        squarefree_case(f, ell, opts, &groups, conditions)
    } else {
        repeated_root_case(f, ell, opts, &fp, conditions)
    }
}

fn squarefree_case(
    f: &WeilPolynomial,
    ell: u64,
    opts: &DecompositionOptions,
    groups: &[(FFPoly, u32)],
    mut conditions: Map<String, Value>,
) -> Result<SurfaceCase> {
    let doubled: Vec<&(FFPoly, u32)> = groups.iter().filter(|(_, e)| *e > 1).collect();
    let case_id = match doubled.as_slice() {
        [] => SurfaceCaseId::SquarefreeMod,
        [(h, 2)] if h.degree() == Some(1) => SurfaceCaseId::OneDoubleRoot,
        [(h, 2)] if h.degree() == Some(2) => SurfaceCaseId::DoubleIrreducible,
        [(a, 2), (b, 2)] if a.degree() == Some(1) && b.degree() == Some(1) => {
            SurfaceCaseId::TwoDoubleRoots
        }
        [(h, 4)] if h.degree() == Some(1) => SurfaceCaseId::QuadrupleRoot,
        _ => {
            return Err(Error::Internal(format!(
                "no surface case for residue factorization {}",
                shape_string(groups)
            )))
        }
    };
    let classes = classify_torsion_with(f, ell, opts)?;
    if case_id == SurfaceCaseId::DoubleIrreducible {
        let a1 = f.coeffs.coeff(3);
        let a2 = f.coeffs.coeff(2);
        let (value, regular) = dedekind_quantity(&a1, &a2, &BigInt::from(f.q), ell);
        conditions.insert("dedekind_quantity".into(), json!(value.to_string()));
        conditions.insert("regular".into(), json!(regular));
        let zero_allowed = classes
            .iter()
            .any(|c| c.summands()[0].partition == YoungPolygon::trivial(2));
        if zero_allowed == regular {
            return Err(Error::Internal(
                "regularity test disagrees with the Newton polygon criterion".into(),
            ));
        }
    }
    Ok(SurfaceCase {
        case_id,
        conditions,
        classes,
    })
}

/// Integer `r` with `r² = q` and `f(r) = f'(r) = 0`, if any.
fn repeated_rational_root(f: &IntPoly, q: u64) -> Option<BigInt> {
    let s = q.sqrt();
    if s * s != q {
        return None;
    }
    let d = f.derivative();
    [BigInt::from(s), -BigInt::from(s)]
        .into_iter()
        .find(|r| f.eval(r).is_zero() && d.eval(r).is_zero())
}

fn linear_residue(fp: &Fq, r: &BigInt) -> FFPoly {
    FFPoly::linear(fp, &fp.from_int(r))
}

fn repeated_root_case(
    f: &WeilPolynomial,
    ell: u64,
    opts: &DecompositionOptions,
    fp: &Fq,
    mut conditions: Map<String, Value>,
) -> Result<SurfaceCase> {
    if let Some(r) = repeated_rational_root(&f.coeffs, f.q) {
        let linear = IntPoly::linear(&r);
        conditions.insert("root".into(), json!(r.to_string()));
        if linear.pow(4) == f.coeffs {
            let class = TorsionClass::new(vec![scheme(
                linear_residue(fp, &r),
                YoungPolygon::trivial(4),
            )]);
            return Ok(SurfaceCase {
                case_id: SurfaceCaseId::FourthPower,
                conditions,
                classes: vec![class],
            });
        }
        let square = linear.pow(2);
        let p1 = f
            .coeffs
            .div_exact_monic(&square)
            .ok_or_else(|| Error::Internal("repeated root does not divide".into()))?;
        if p1.is_squarefree() && !p1.eval(&r).is_zero() {
            return rational_root_case(f, ell, opts, fp, &r, &p1, conditions);
        }
    }
    let p = f
        .coeffs
        .sqrt_monic()
        .filter(IntPoly::is_squarefree)
        .ok_or_else(|| {
            Error::InvalidInput("repeated roots do not match any surface case".into())
        })?;
    conditions.insert("square_root".into(), json!(p.to_leading_first_string()));
    let pbar = FFPoly::from_int_poly(fp, &p);
    let pgroups = ff_factor(&pbar, opts.seed)?;
    if pgroups.iter().all(|(_, e)| *e == 1) {
        let summands = pgroups
            .into_iter()
            .map(|(h, _)| scheme(h, YoungPolygon::trivial(2)))
            .collect();
        return Ok(SurfaceCase {
            case_id: SurfaceCaseId::SquareSquarefreeMod,
            conditions,
            classes: vec![TorsionClass::new(summands)],
        });
    }
    let factors = local_decomposition(&p, ell, opts)?;
    let [lf] = factors.as_slice() else {
        return Err(Error::Internal("square root splits unexpectedly".into()));
    };
    let options = lf.admissible()?;
    let mut classes = Vec::new();
    for (i, a) in options.iter().enumerate() {
        for b in &options[i..] {
            classes.push(TorsionClass::new(vec![
                scheme(lf.hbar.clone(), a.clone()),
                scheme(lf.hbar.clone(), b.clone()),
            ]));
        }
    }
    Ok(SurfaceCase {
        case_id: SurfaceCaseId::SquareDoubleRoot,
        conditions,
        classes: sorted(classes),
    })
}

fn rational_root_case(
    f: &WeilPolynomial,
    ell: u64,
    opts: &DecompositionOptions,
    fp: &Fq,
    r: &BigInt,
    p1: &IntPoly,
    mut conditions: Map<String, Value>,
) -> Result<SurfaceCase> {
    let rbar = linear_residue(fp, r);
    let p1bar = FFPoly::from_int_poly(fp, p1);
    let fixed = scheme(rbar.clone(), YoungPolygon::trivial(2));
    conditions.insert("p1".into(), json!(p1.to_leading_first_string()));
    if p1bar != rbar.pow(2) {
        let p1groups = ff_factor(&p1bar, opts.seed)?;
        if p1groups.iter().all(|(_, e)| *e == 1) {
            let mut summands: Vec<_> = p1groups
                .into_iter()
                .map(|(h, _)| scheme(h, YoungPolygon::single(1)))
                .collect();
            summands.push(fixed);
            return Ok(SurfaceCase {
                case_id: SurfaceCaseId::RationalRootCoprime,
                conditions,
                classes: vec![TorsionClass::new(summands)],
            });
        }
        let factors = local_decomposition(p1, ell, opts)?;
        let [lf] = factors.as_slice() else {
            return Err(Error::Internal(
                "quadratic factor splits unexpectedly".into(),
            ));
        };
        let classes = lf
            .admissible()?
            .into_iter()
            .map(|n| TorsionClass::new(vec![scheme(lf.hbar.clone(), n), fixed.clone()]))
            .collect();
        return Ok(SurfaceCase {
            case_id: SurfaceCaseId::RationalRootDouble,
            conditions,
            classes: sorted(classes),
        });
    }
    let shifted = p1.taylor_shift(r);
    let cubic = shifted.mul(&IntPoly::from_i64s(&[0, 1]));
    let np = newton_polygon_int(&cubic, ell)?;
    conditions.insert("cubic_polygon".into(), json!(clamp(&np).to_string()));
    let mut classes: Vec<TorsionClass> = admissible_partitions(&clamp(&np), 3)?
        .into_iter()
        .map(|n| {
            TorsionClass::new(vec![scheme(
                rbar.clone(),
                n.union(&YoungPolygon::single(1)),
            )])
        })
        .collect();
    let p1_at_r = p1.eval(r);
    let ell2 = BigInt::from(ell * ell);
    let deep = p1_at_r.mod_floor(&ell2).is_zero();
    conditions.insert("p1_at_root".into(), json!(p1_at_r.to_string()));
    conditions.insert("ell_squared_divides".into(), json!(deep));
    let case_id = if deep {
        let (rank, jordan) = partner_module_type(&shifted, ell, f.degree(), opts)?;
        if rank != 4 {
            return Err(Error::Internal("partner module has the wrong rank".into()));
        }
        classes.push(TorsionClass::new(vec![scheme(rbar, jordan)]));
        SurfaceCaseId::RationalRootMatchingDeep
    } else {
        SurfaceCaseId::RationalRootMatching
    };
    Ok(SurfaceCase {
        case_id,
        conditions,
        classes: sorted(classes),
    })
}

/// Module type of the swap partner of the factorization presenting a lattice
/// of type `(1,1)` for `shifted = P₁(t + r)`, with annihilator `t·shifted`.
fn partner_module_type(
    shifted: &IntPoly,
    ell: u64,
    deg: usize,
    opts: &DecompositionOptions,
) -> Result<(usize, YoungPolygon)> {
    let cap = precision_cap(deg);
    let mut precision = opts.precision.unwrap_or(deg as u32 + 2);
    loop {
        let ring = WittRing::prime(ell, precision)?;
        let attempt = (|| {
            let q = WittPoly::from_int_poly(&ring, shifted);
            let model = construct_lift(&q, &YoungPolygon::trivial(2))?;
            let low = model.ring().clone();
            let f1 = WittPoly::from_int_poly(&low, &shifted.mul(&IntPoly::from_i64s(&[0, 1])));
            let mf = factorization_from_generators(&model, &YoungPolygon::trivial(2), Some(&f1))?;
            let partner = swap_partner(&mf)?;
            cokernel_module_type(&partner.x, &partner.f1)
        })();
        match attempt {
            Err(Error::PrecisionExhausted(_)) if precision < cap => {
                precision = (precision * 2).min(cap);
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::validate_weil;

    fn surface(c: &[i64], q: u64, ell: u64) -> SurfaceCase {
        let f = validate_weil(&IntPoly::from_leading_first(c), q, false).unwrap();
        classify_surface(&f, ell).unwrap()
    }

    #[test]
    fn regularity_examples() {
        let b = |x: i64| BigInt::from(x);
        assert!(regularity_test(&b(1), &b(1), &b(2), 3));
        assert!(regularity_test(&b(1), &b(1), &b(2), 2));
        assert!(!regularity_test(&b(3), &b(5), &b(7), 3));
    }

    #[test]
    fn named_cases() {
        let s = surface(&[1, -1, 8, -7, 49], 7, 5);
        assert_eq!((s.case_id.label(), s.classes.len()), ("3", 4));
        let s = surface(&[1, -8, 24, -32, 16], 4, 3);
        assert_eq!(s.case_id, SurfaceCaseId::FourthPower);
        assert_eq!(s.classes.len(), 1);
        assert_eq!(s.classes[0].to_string(), "A(t + 1, (1,1,1,1))");
        let s = surface(&[1, 2, 7, 6, 9], 3, 2);
        assert_eq!(s.case_id, SurfaceCaseId::SquareSquarefreeMod);
        assert_eq!(s.classes[0].to_string(), "A(t^2 + t + 1, (1,1))");
    }

    #[test]
    fn every_label() {
        let cases: [(&[i64], u64, u64, &str, usize); 12] = [
            (&[1, 1, 1, 3, 9], 3, 2, "1", 1),
            (&[1, 1, 0, 3, 9], 3, 2, "2", 1),
            (&[1, -1, 8, -7, 49], 7, 5, "3", 4),
            (&[1, 0, 1, 0, 9], 3, 2, "4", 0),
            (&[1, 0, 2, 0, 9], 3, 2, "5", 0),
            (&[1, 2, 7, 6, 9], 3, 2, "6a", 1),
            (&[1, 0, 6, 0, 9], 3, 2, "6b", 0),
            (&[1, -4, 8, -16, 16], 4, 5, "7a", 1),
            (&[1, -6, 16, -24, 16], 4, 3, "7b", 0),
            (&[1, -6, 18, -54, 81], 9, 2, "7c_i", 2),
            (&[1, -8, 30, -72, 81], 9, 2, "7c_ii", 4),
            (&[1, -8, 24, -32, 16], 4, 3, "8", 1),
        ];
        for (c, q, ell, label, count) in cases {
            let s = surface(c, q, ell);
            assert_eq!(s.case_id.label(), label, "{c:?}");
            if count > 0 {
                assert_eq!(s.classes.len(), count, "{c:?}: {:?}", s.classes);
            }
            for class in &s.classes {
                assert_eq!(class.dimension(), 4);
            }
        }
    }

    #[test]
    fn deep_case_contains_square_type() {
        let s = surface(&[1, -8, 30, -72, 81], 9, 2);
        let labels: Vec<String> = s.classes.iter().map(|c| c.to_string()).collect();
        assert!(
            labels.contains(&"A(t + 1, (2,2))".to_string()),
            "{labels:?}"
        );
        let shallow = surface(&[1, -6, 18, -54, 81], 9, 2);
        assert!(shallow
            .classes
            .iter()
            .all(|c| c.summands()[0].partition.parts() != [2, 2]));
    }
}
