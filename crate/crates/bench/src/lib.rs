//! Inputs shared by the benchmarks.

use torsion_atlas::{validate_weil, IntPoly, WeilPolynomial, WittPoly, WittRing};

/// `(coefficients leading first, q, ℓ)` for one surface of each shape.
pub const SURFACES: [(&[i64], u64, u64); 4] = [
    (&[1, -1, 8, -7, 49], 7, 5),
    (&[1, 0, 1, 0, 9], 3, 2),
    (&[1, -8, 30, -72, 81], 9, 2),
    (&[1, -8, 24, -32, 16], 4, 3),
];

pub fn weil(coeffs: &[i64], q: u64) -> WeilPolynomial {
    validate_weil(&IntPoly::from_leading_first(coeffs), q, false)
        .expect("fixture is a Weil polynomial")
}

/// `t^d` perturbed by multiples of ℓ, so every partition of `d` is admissible.
pub fn deep_nilpotent(ell: u64, d: usize, precision: u32) -> WittPoly {
    let ring = WittRing::prime(ell, precision).expect("prime");
    let e = (ell as i64).pow(d as u32);
    let mut c = vec![e; d];
    c.push(1);
    WittPoly::from_i64s(&ring, &c)
}
