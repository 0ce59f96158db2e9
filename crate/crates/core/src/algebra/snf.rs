//! Smith normal form over a truncated unramified ring, pivoting on the
//! entry of least valuation.

use super::matrix::Matrix;
use super::ring::Ring;
use super::witt::{Elem, ExtVal, WittMatrix, WittRing};
use crate::error::{Error, Result};

/// `left · M · right = diag(ℓ^{e_i}·unit)`, with `left`, `right` invertible.
#[derive(Debug, Clone)]
pub struct LocalSnf {
    pub diagonal: Vec<ExtVal>,
    pub reduced: WittMatrix,
    pub left: WittMatrix,
    pub right: WittMatrix,
}

fn add_row_multiple(ring: &WittRing, m: &mut Matrix<Elem>, target: usize, src: usize, c: &Elem) {
    for j in 0..m.cols() {
        let v = ring.sub(m.get(target, j), &ring.mul(c, m.get(src, j)));
        m.set(target, j, v);
    }
}

fn add_col_multiple(ring: &WittRing, m: &mut Matrix<Elem>, target: usize, src: usize, c: &Elem) {
    for i in 0..m.rows() {
        let v = ring.sub(m.get(i, target), &ring.mul(c, m.get(i, src)));
        m.set(i, target, v);
    }
}

/// Elimination without the precision check; trailing entries may be `Top`.
pub fn local_snf_unchecked(m: &WittMatrix) -> LocalSnf {
    let ring = m.ring().clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.matrix().clone();
    let mut left = Matrix::identity(&ring, rows);
    let mut right = Matrix::identity(&ring, cols);
    let mut diagonal = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(ExtVal, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = ring.valuation(a.get(i, j));
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, pi, pj) = best.expect("nonempty block");
        if v.is_top() {
            diagonal.extend(std::iter::repeat(ExtVal::Top).take(rows.min(cols) - k));
            break;
        }
        let v = v.finite().unwrap();
        a.swap_rows(k, pi);
        left.swap_rows(k, pi);
        a.swap_cols(k, pj);
        right.swap_cols(k, pj);
        let pivot = a.get(k, k).clone();
        let unit = ring
            .div_ell_pow(&pivot, v)
            .expect("pivot divisible by its valuation");
        let unit_inv = ring.inv(&unit).expect("pivot quotient is a unit");
        for i in k + 1..rows {
            let entry = a.get(i, k).clone();
            if entry.is_empty() {
                continue;
            }
            let q = ring
                .div_ell_pow(&entry, v)
                .expect("pivot has minimal valuation");
            let c = ring.mul(&q, &unit_inv);
            add_row_multiple(&ring, &mut a, i, k, &c);
            add_row_multiple(&ring, &mut left, i, k, &c);
        }
        for j in k + 1..cols {
            let entry = a.get(k, j).clone();
            if entry.is_empty() {
                continue;
            }
            let q = ring
                .div_ell_pow(&entry, v)
                .expect("pivot has minimal valuation");
            let c = ring.mul(&q, &unit_inv);
            add_col_multiple(&ring, &mut a, j, k, &c);
            add_col_multiple(&ring, &mut right, j, k, &c);
        }
        diagonal.push(ExtVal::Fin(v));
    }
    LocalSnf {
        diagonal,
        reduced: WittMatrix::new(&ring, a),
        left: WittMatrix::new(&ring, left),
        right: WittMatrix::new(&ring, right),
    }
}

/// Elementary divisor valuations `e_1 ≤ e_2 ≤ …` with transforms. Fails when
/// an elementary divisor vanishes at the working precision.
pub fn smith_normal_form_local(m: &WittMatrix) -> Result<LocalSnf> {
    let snf = local_snf_unchecked(m);
    if snf.diagonal.iter().any(|e| e.is_top()) {
        return Err(Error::PrecisionExhausted(format!(
            "elementary divisor beyond precision {}",
            m.ring().precision()
        )));
    }
    Ok(snf)
}
