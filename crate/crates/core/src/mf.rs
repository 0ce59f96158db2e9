//! Matrix factorizations `(X, Y)` over `W[t]` with `Y·X = f₁·I` and
//! `det X = f`, and the module structure of `coker X`.

use num_bigint::BigInt;

use crate::algebra::ff::{FFPoly, Fq};
use crate::algebra::matrix::Matrix;
use crate::algebra::ring::{Field, Ring};
use crate::algebra::witt::{WittPoly, WittRing};
use crate::error::{Error, Result};
use crate::lattice::LatticeModel;
use crate::polygon::YoungPolygon;

/// `W[t]` as a [`Ring`], so generic matrix routines apply to polynomial
/// matrices.
#[derive(Debug, Clone)]
pub struct WittPolyRing {
    base: WittRing,
}

impl WittPolyRing {
    pub fn new(base: &WittRing) -> Self {
        WittPolyRing { base: base.clone() }
    }

    pub fn base(&self) -> &WittRing {
        &self.base
    }
}

impl Ring for WittPolyRing {
    type Elem = WittPoly;

    fn zero(&self) -> WittPoly {
        WittPoly::new(&self.base, Vec::new())
    }
    fn one(&self) -> WittPoly {
        WittPoly::monomial(&self.base, 0)
    }
    fn add(&self, a: &WittPoly, b: &WittPoly) -> WittPoly {
        a.add(b)
    }
    fn sub(&self, a: &WittPoly, b: &WittPoly) -> WittPoly {
        a.sub(b)
    }
    fn mul(&self, a: &WittPoly, b: &WittPoly) -> WittPoly {
        a.mul(b)
    }
    fn neg(&self, a: &WittPoly) -> WittPoly {
        self.zero().sub(a)
    }
    fn is_zero(&self, a: &WittPoly) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> WittPoly {
        WittPoly::constant(&self.base, self.base.from_int(n))
    }
}

/// `F_q[t]` as a [`Ring`].
#[derive(Debug, Clone)]
pub struct FqPolyRing {
    field: Fq,
}

impl FqPolyRing {
    pub fn new(field: &Fq) -> Self {
        FqPolyRing {
            field: field.clone(),
        }
    }
}

impl Ring for FqPolyRing {
    type Elem = FFPoly;

    fn zero(&self) -> FFPoly {
        FFPoly::new(&self.field, Vec::new())
    }
    fn one(&self) -> FFPoly {
        FFPoly::one(&self.field)
    }
    fn add(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        a.add(b)
    }
    fn sub(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        a.sub(b)
    }
    fn mul(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        a.mul(b)
    }
    fn neg(&self, a: &FFPoly) -> FFPoly {
        self.zero().sub(a)
    }
    fn is_zero(&self, a: &FFPoly) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> FFPoly {
        FFPoly::new(&self.field, vec![self.field.from_int(n)])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFactorization {
    pub x: Matrix<WittPoly>,
    pub y: Matrix<WittPoly>,
    pub f: WittPoly,
    pub f1: WittPoly,
}

impl MatrixFactorization {
    pub fn ring(&self) -> &WittRing {
        self.f.ring()
    }

    pub fn rank(&self) -> usize {
        self.x.rows()
    }
}

pub fn verify_factorization(mf: &MatrixFactorization) -> bool {
    let pr = WittPolyRing::new(mf.ring());
    let r = mf.rank();
    if !mf.x.is_square() || mf.y.rows() != r || mf.y.cols() != r {
        return false;
    }
    mf.y.mul(&pr, &mf.x) == Matrix::scalar(&pr, r, &mf.f1) && mf.x.det(&pr) == mf.f
}

/// Presentation of the lattice of an adapted model: column `s` of `X` is
/// the relation `x^{m_s} v_s = Σ c_{k,s'} x^k v_{s'}`. `f1` defaults to the
/// characteristic polynomial.
pub fn factorization_from_generators(
    model: &LatticeModel,
    partition: &YoungPolygon,
    f1: Option<&WittPoly>,
) -> Result<MatrixFactorization> {
    let ring = model.ring();
    let pr = WittPolyRing::new(ring);
    if partition.total() as usize != model.rank() {
        return Err(Error::DimensionMismatch(format!(
            "partition {partition} for a rank-{} lattice",
            model.rank()
        )));
    }
    let m = model.matrix.matrix();
    let offsets: Vec<usize> = partition
        .parts()
        .iter()
        .scan(0usize, |acc, &p| {
            let o = *acc;
            *acc += p as usize;
            Some(o)
        })
        .collect();
    for (s, &ms) in partition.parts().iter().enumerate() {
        for k in 0..ms as usize - 1 {
            let col = offsets[s] + k;
            for row in 0..model.rank() {
                let expected = if row == col + 1 {
                    ring.one()
                } else {
                    ring.zero()
                };
                if *m.get(row, col) != expected {
                    return Err(Error::InvalidInput(
                        "basis is not adapted to the partition".into(),
                    ));
                }
            }
        }
    }
    let r = partition.len();
    let mut x = Matrix::zero(&pr, r, r);
    for (s, &ms) in partition.parts().iter().enumerate() {
        let col = offsets[s] + ms as usize - 1;
        for (s2, &ms2) in partition.parts().iter().enumerate() {
            let coeffs: Vec<_> = (0..ms2 as usize)
                .map(|k| ring.neg(m.get(offsets[s2] + k, col)))
                .collect();
            let mut entry = WittPoly::new(ring, coeffs);
            if s2 == s {
                entry = entry.add(&WittPoly::monomial(ring, ms as usize));
            }
            x.set(s2, s, entry);
        }
    }
    let f = x.det(&pr);
    let f1 = f1.cloned().unwrap_or_else(|| model.q.clone());
    let adj = x.adjugate(&pr);
    let mut y = Matrix::zero(&pr, r, r);
    for i in 0..r {
        for j in 0..r {
            let (quot, rem) = f1.mul(adj.get(i, j)).divrem_monic(&f);
            if !rem.is_zero() {
                return Err(Error::NotPolynomial(format!("entry ({i},{j}) of f1·X^-1")));
            }
            y.set(i, j, quot);
        }
    }
    let mf = MatrixFactorization { x, y, f, f1 };
    if !verify_factorization(&mf) {
        return Err(Error::NotPolynomial("Y·X differs from f1·I".into()));
    }
    Ok(mf)
}

/// The factorization `(Y, X)`, with determinant `f₁^r / f`.
pub fn swap_partner(mf: &MatrixFactorization) -> Result<MatrixFactorization> {
    if !verify_factorization(mf) {
        return Err(Error::InvalidInput("factorization does not verify".into()));
    }
    let (quot, rem) = mf.f1.pow(mf.rank() as u64).divrem_monic(&mf.f);
    if !rem.is_zero() {
        return Err(Error::NotPolynomial("f1^r / f".into()));
    }
    let swapped = MatrixFactorization {
        x: mf.y.clone(),
        y: mf.x.clone(),
        f: quot,
        f1: mf.f1.clone(),
    };
    if !verify_factorization(&swapped) {
        return Err(Error::NotPolynomial("det Y differs from f1^r / f".into()));
    }
    Ok(swapped)
}

/// Smith form over `F_q[t]`: `(diagonal, U, V)` with `U·A·V` diagonal,
/// monic nonzero entries dividing successively.
pub fn poly_smith_form(
    a: &Matrix<FFPoly>,
    field: &Fq,
) -> (Vec<FFPoly>, Matrix<FFPoly>, Matrix<FFPoly>) {
    let pr = FqPolyRing::new(field);
    let (n, m) = (a.rows(), a.cols());
    let mut a = a.clone();
    let mut u = Matrix::identity(&pr, n);
    let mut v = Matrix::identity(&pr, m);
    let row_op = |mat: &mut Matrix<FFPoly>, dst: usize, src: usize, c: &FFPoly| {
        for j in 0..mat.cols() {
            let val = mat.get(dst, j).sub(&c.mul(mat.get(src, j)));
            mat.set(dst, j, val);
        }
    };
    let col_op = |mat: &mut Matrix<FFPoly>, dst: usize, src: usize, c: &FFPoly| {
        for i in 0..mat.rows() {
            let val = mat.get(i, dst).sub(&c.mul(mat.get(i, src)));
            mat.set(i, dst, val);
        }
    };
    let mut diag = Vec::new();
    for k in 0..n.min(m) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..m {
                    if let Some(d) = a.get(i, j).degree() {
                        if best.map_or(true, |(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return (diag, u, v);
            };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);
            let pivot = a.get(k, k).clone();
            let mut clean = true;
            for i in k + 1..n {
                let (q, r) = a.get(i, k).divrem(&pivot);
                row_op(&mut a, i, k, &q);
                row_op(&mut u, i, k, &q);
                clean &= r.is_zero();
            }
            for j in k + 1..m {
                let (q, r) = a.get(k, j).divrem(&pivot);
                col_op(&mut a, j, k, &q);
                col_op(&mut v, j, k, &q);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (k + 1..n).find(|&i| (k + 1..m).any(|j| !a.get(i, j).rem(&pivot).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = pr.neg(&pr.one());
                    row_op(&mut a, k, i, &minus_one);
                    row_op(&mut u, k, i, &minus_one);
                }
                None => break,
            }
        }
        let lead = a.get(k, k).leading().cloned().expect("nonzero pivot");
        let scale = FFPoly::new(field, vec![field.inv(&lead).expect("unit")]);
        for j in 0..m {
            let val = a.get(k, j).mul(&scale);
            a.set(k, j, val);
        }
        for j in 0..n {
            let val = u.get(k, j).mul(&scale);
            u.set(k, j, val);
        }
        diag.push(a.get(k, k).clone());
    }
    (diag, u, v)
}

/// Rank of `coker X` over `W` and the Jordan type of `t` on its reduction.
pub fn cokernel_module_type(x: &Matrix<WittPoly>, f1: &WittPoly) -> Result<(usize, YoungPolygon)> {
    let ring = f1.ring();
    let field = ring.residue_field();
    let deg = f1.degree().unwrap_or(0);
    if f1.residue() != FFPoly::monomial(field, field.one(), deg) {
        return Err(Error::InvalidInput(
            "annihilator must reduce to a power of t".into(),
        ));
    }
    if !x.is_square() {
        return Err(Error::DimensionMismatch(
            "presentation must be square".into(),
        ));
    }
    let xbar = x.map(|e| e.residue());
    let (diag, _, _) = poly_smith_form(&xbar, field);
    if diag.len() < x.rows() {
        return Err(Error::SingularPresentation);
    }
    let mut parts = Vec::new();
    for d in &diag {
        let k = d.degree().expect("nonzero");
        if *d != FFPoly::monomial(field, field.one(), k) {
            return Err(Error::NotNilpotent);
        }
        if k > 0 {
            parts.push(k as u32);
        }
    }
    let jordan = YoungPolygon::new(parts)?;
    Ok((jordan.total() as usize, jordan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::construct_lift;

    fn wp(ring: &WittRing, c: &[i64]) -> WittPoly {
        WittPoly::from_i64s(ring, c)
    }

    #[test]
    fn cyclic_module() {
        let w = WittRing::prime(5, 4).unwrap();
        let q = wp(&w, &[-5, -5, 1]);
        let model = construct_lift(&q, &YoungPolygon::single(2)).unwrap();
        let mf = factorization_from_generators(&model, &YoungPolygon::single(2), None).unwrap();
        assert_eq!(mf.x.to_rows(), vec![vec![q.clone()]]);
        assert_eq!(mf.y.to_rows(), vec![vec![wp(&w, &[1])]]);
        let (rank, jt) = cokernel_module_type(&mf.x, &q).unwrap();
        assert_eq!((rank, jt), (2, YoungPolygon::single(2)));
        let swapped = swap_partner(&mf).unwrap();
        assert_eq!(swapped.x.to_rows(), vec![vec![wp(&w, &[1])]]);
        assert_eq!(swap_partner(&swapped).unwrap(), mf);
    }

    #[test]
    fn split_module_and_tripled_square() {
        let w = WittRing::prime(5, 5).unwrap();
        let q = wp(&w, &[-25, -25, 1]);
        let model = construct_lift(&q, &YoungPolygon::trivial(2)).unwrap();
        let mf = factorization_from_generators(&model, &YoungPolygon::trivial(2), None).unwrap();
        let wr = model.ring();
        assert_eq!(mf.f, q.coerce(wr));
        let (rank, jt) = cokernel_module_type(&mf.x, &mf.f1).unwrap();
        assert_eq!((rank, jt), (2, YoungPolygon::trivial(2)));

        // cubic with Newton polygon above (1,1,1): partner has type (2,2,2)
        let f1 = wp(&w, &[125, -25, 25, 1]);
        let m3 = construct_lift(&f1, &YoungPolygon::trivial(3)).unwrap();
        let mf3 = factorization_from_generators(&m3, &YoungPolygon::trivial(3), None).unwrap();
        let partner = swap_partner(&mf3).unwrap();
        assert_eq!(partner.f, mf3.f1.pow(2));
        let (rank, jt) = cokernel_module_type(&partner.x, &partner.f1).unwrap();
        assert_eq!((rank, jt.to_string().as_str()), (6, "(2,2,2)"));
    }

    #[test]
    fn trivial_and_perturbed_factorizations() {
        let w = WittRing::prime(3, 3).unwrap();
        let pr = WittPolyRing::new(&w);
        let f1 = wp(&w, &[9, 0, 1]);
        let mf = MatrixFactorization {
            x: Matrix::identity(&pr, 2),
            y: Matrix::scalar(&pr, 2, &f1),
            f: pr.one(),
            f1: f1.clone(),
        };
        assert!(verify_factorization(&mf));
        let mut bad = mf.clone();
        bad.y.set(0, 1, wp(&w, &[1]));
        assert!(!verify_factorization(&bad));
    }

    #[test]
    fn smith_form_of_conjugated_diagonal() {
        let w = WittRing::prime(3, 2).unwrap();
        let pr = WittPolyRing::new(&w);
        let t = |k| WittPoly::monomial(&w, k);
        let d = Matrix::from_rows(vec![vec![t(1), pr.zero()], vec![pr.zero(), t(3)]]);
        let u = Matrix::from_rows(vec![
            vec![pr.one(), wp(&w, &[1, 2])],
            vec![pr.zero(), pr.one()],
        ]);
        let v = Matrix::from_rows(vec![
            vec![pr.one(), pr.zero()],
            vec![wp(&w, &[0, 0, 1]), pr.one()],
        ]);
        let x = u.mul(&pr, &d).mul(&pr, &v);
        let f1 = t(3);
        let (rank, jt) = cokernel_module_type(&x, &f1).unwrap();
        assert_eq!((rank, jt), (4, YoungPolygon::new(vec![3, 1]).unwrap()));
        let singular = Matrix::from_rows(vec![vec![t(1), t(1)], vec![t(1), t(1)]]);
        assert_eq!(
            cokernel_module_type(&singular, &f1),
            Err(Error::SingularPresentation)
        );
    }
}
