//! Lattices with an `x`-action over a truncated unramified ring: the
//! explicit lift of a nilpotent Jordan type, Jordan-type extraction, the
//! Frobenius matrix of a distinguished group scheme, invariant sublattices
//! and cokernels of `shift - F`.

use serde_json::{json, Value};

use crate::algebra::ff::{FFPoly, Fq, FqElem, PrimeField};
use crate::algebra::matrix::Matrix;
use crate::algebra::ring::Ring;
use crate::algebra::snf::{local_snf_unchecked, smith_normal_form_local};
use crate::algebra::witt::{Elem, ExtVal, WittMatrix, WittPoly, WittRing};
use crate::error::{Error, Result};
use crate::polygon::{dominates, newton_polygon, YoungPolygon};

/// A free module `T` over `W` with the action of `x` given by `matrix`,
/// where Frobenius is `F = x + alpha` and `det(t - x) ≡ q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeModel {
    pub matrix: WittMatrix,
    pub q: WittPoly,
    pub alpha: Elem,
}

impl LatticeModel {
    pub fn new(matrix: WittMatrix, q: WittPoly, alpha: Elem) -> Result<Self> {
        if !matrix.matrix().is_square() || Some(matrix.rows()) != q.degree() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a degree-{:?} polynomial",
                matrix.rows(),
                matrix.cols(),
                q.degree()
            )));
        }
        Ok(LatticeModel { matrix, q, alpha })
    }

    pub fn ring(&self) -> &WittRing {
        self.matrix.ring()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn with_alpha(mut self, alpha: Elem) -> Self {
        self.alpha = self.ring().coerce(self.ring(), &alpha);
        self
    }

    /// Jordan type of `x` acting on `T/ℓT`.
    pub fn reduction_type(&self) -> Result<YoungPolygon> {
        nilpotent_jordan_type(&self.matrix.residue(), self.ring().residue_field())
    }

    /// Matrix of `F = x + α`.
    pub fn frobenius(&self) -> WittMatrix {
        let ring = self.ring();
        self.matrix
            .add(&WittMatrix::identity(ring, self.rank()).scale(&self.alpha))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": {
                "ell": self.ring().ell(),
                "residue_poly": self.ring().residue_poly(),
                "precision": self.ring().precision(),
            },
            "alpha": self.ring().elem_json(&self.alpha),
            "q": self.q.to_json(),
            "matrix": self.matrix.to_json(),
        })
    }
}

/// Matrix of `x` on the lattice spanned by `x^k v_s`, where `v_1 = 1` and
/// `v_{s+1} = (x^{M_s} + a_1 x^{M_s - 1} + … + a_{M_s}) / ℓ^s` in `W[x]/Q`,
/// `M_s = m_1 + … + m_s`. Its reduction has Jordan type `partition`. The
/// result lives at precision `N - (r - 1)`.
pub fn construct_lift(q: &WittPoly, partition: &YoungPolygon) -> Result<LatticeModel> {
    let ring = q.ring();
    let d = q.degree().unwrap_or(0);
    if !q.monic_exact() || d == 0 {
        return Err(Error::InvalidInput(
            "lift target must be monic of positive degree".into(),
        ));
    }
    if partition.total() as usize != d {
        return Err(Error::DimensionMismatch(format!(
            "partition {partition} does not have total {d}"
        )));
    }
    let field = ring.residue_field();
    if q.residue() != FFPoly::monomial(field, field.one(), d) {
        return Err(Error::InvalidInput("lift target must reduce to t^d".into()));
    }
    let np = newton_polygon(q)?;
    if !dominates(&np, partition)? {
        return Err(Error::NotDominated(partition.parts().to_vec()));
    }
    let r = partition.len() as u32;
    if ring.precision() < r {
        return Err(Error::PrecisionExhausted(format!(
            "lifting a partition with {r} parts needs precision at least {r}"
        )));
    }
    let out_ring = ring.with_precision(ring.precision() + 1 - r);
    // a_j is the coefficient of t^{d-j}
    let a = |j: usize| q.coeff(d - j);
    let mut m = Matrix::zero(&out_ring, d, d);
    let mut offset = 0usize;
    for (s_idx, &ms) in partition.parts().iter().enumerate() {
        let s = s_idx as u32 + 1;
        let ms = ms as usize;
        for k in 0..ms - 1 {
            m.set(offset + k + 1, offset + k, out_ring.one());
        }
        let col = offset + ms - 1;
        if s < r {
            m.set(offset + ms, col, out_ring.ell_pow(1));
        }
        let big_m = offset + ms;
        for k in 0..ms {
            let coeff = a(big_m - k);
            if ring.valuation(&coeff) < ExtVal::Fin(s) {
                return Err(Error::NotDominated(partition.parts().to_vec()));
            }
            let scaled = ring.div_ell_pow(&coeff, s - 1).expect("valuation checked");
            let entry = out_ring.sub(m.get(k, col), &out_ring.coerce(ring, &scaled));
            m.set(k, col, entry);
        }
        offset += ms;
    }
    let matrix = WittMatrix::new(&out_ring, m);
    let q_out = q.coerce(&out_ring);
    if matrix.charpoly() != q_out {
        return Err(Error::Internal(
            "lifted matrix has the wrong characteristic polynomial".into(),
        ));
    }
    let model = LatticeModel::new(matrix, q_out, out_ring.zero())?;
    if model.reduction_type()? != *partition {
        return Err(Error::Internal(
            "lifted matrix has the wrong reduction type".into(),
        ));
    }
    Ok(model)
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn nilpotent_jordan_type(nbar: &Matrix<FqElem>, field: &Fq) -> Result<YoungPolygon> {
    let n = nbar.rows();
    if !nbar.is_square() {
        return Err(Error::DimensionMismatch(
            "Jordan type needs a square matrix".into(),
        ));
    }
    let mut ranks = vec![n];
    let mut power = Matrix::identity(field, n);
    for _ in 0..n {
        power = power.mul(field, nbar);
        ranks.push(power.rank(field));
    }
    if ranks[n] != 0 {
        return Err(Error::NotNilpotent);
    }
    // at_least[k] = number of blocks of size > k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in 0..n {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..at_least[k] - next {
            parts.push(k as u32 + 1);
        }
    }
    YoungPolygon::new(parts)
}

/// Block-diagonal lower-shift Jordan cells, blocks in decreasing size.
pub fn canonical_nilpotent<R: Ring>(ring: &R, partition: &YoungPolygon) -> Matrix<R::Elem> {
    let d = partition.total() as usize;
    let mut m = Matrix::zero(ring, d, d);
    let mut offset = 0;
    for &size in partition.parts() {
        for k in 0..size as usize - 1 {
            m.set(offset + k + 1, offset + k, ring.one());
        }
        offset += size as usize;
    }
    m
}

/// Companion matrix of a monic polynomial (constant-first coefficients).
pub fn companion<R: Ring>(ring: &R, coeffs: &[R::Elem]) -> Matrix<R::Elem> {
    let m = coeffs.len() - 1;
    let mut c = Matrix::zero(ring, m, m);
    for i in 1..m {
        c.set(i, i - 1, ring.one());
    }
    for (i, a) in coeffs[..m].iter().enumerate() {
        c.set(i, m - 1, ring.neg(a));
    }
    c
}

/// `M(h̄) ⊗ I_d + I_m ⊗ N` over `F_ℓ`, the Frobenius action on the
/// distinguished group scheme named by `(h̄, partition)`.
pub fn frobenius_matrix(hbar: &FFPoly, partition: &YoungPolygon) -> Result<Matrix<u64>> {
    if !hbar.is_over_prime_field() || !hbar.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let fp = PrimeField::new(hbar.field().characteristic())?;
    let h = hbar.monic().prime_coeffs();
    let m = h.len() - 1;
    let d = partition.total() as usize;
    let comp = companion(&fp, &h);
    let nil = canonical_nilpotent(&fp, partition);
    Ok(comp
        .kron(&fp, &Matrix::identity(&fp, d))
        .add(&fp, &Matrix::identity(&fp, m).kron(&fp, &nil)))
}

fn normalized_functionals(field: &Fq, n: usize) -> Vec<Vec<FqElem>> {
    let elems = field.elements();
    let mut out = Vec::new();
    for p in 0..n {
        let free = n - p - 1;
        let total = elems.len().pow(free as u32);
        for mut idx in 0..total {
            let mut v = vec![field.zero(); n];
            v[p] = field.one();
            for slot in v.iter_mut().skip(p + 1) {
                *slot = elems[idx % elems.len()].clone();
                idx /= elems.len();
            }
            out.push(v);
        }
    }
    out
}

/// Index-ℓ sublattices `T' ⊃ ℓT` stable under `x`, with the induced
/// matrices. Each step costs one digit of precision.
pub fn invariant_sublattices(model: &LatticeModel) -> Result<Vec<LatticeModel>> {
    let ring = model.ring();
    if ring.precision() < 2 {
        return Err(Error::PrecisionExhausted(
            "no precision left for a sublattice step".into(),
        ));
    }
    let field = ring.residue_field();
    let n = model.rank();
    let mbar = model.matrix.residue();
    let next_ring = ring.with_precision(ring.precision() - 1);
    let mut out = Vec::new();
    for phi in normalized_functionals(field, n) {
        let p = phi
            .iter()
            .position(|c| !c.is_empty())
            .expect("nonzero functional");
        let psi: Vec<FqElem> = (0..n)
            .map(|j| {
                (0..n).fold(field.zero(), |acc, i| {
                    field.add(&acc, &field.mul(&phi[i], mbar.get(i, j)))
                })
            })
            .collect();
        let lambda = psi[p].clone();
        if (0..n).any(|j| psi[j] != field.mul(&lambda, &phi[j])) {
            continue;
        }
        let phi_lift: Vec<Elem> = phi.iter().map(|c| ring.lift_residue(c)).collect();
        // new basis: e_j - φ_j e_p (j ≠ p) and ℓ e_p
        let basis: Vec<Vec<Elem>> = (0..n)
            .map(|k| {
                let mut v = vec![ring.zero(); n];
                if k == p {
                    v[p] = ring.ell_pow(1);
                } else {
                    v[k] = ring.one();
                    v[p] = ring.neg(&phi_lift[k]);
                }
                v
            })
            .collect();
        let mut induced = Matrix::zero(&next_ring, n, n);
        for (k, b) in basis.iter().enumerate() {
            let w = model.matrix.matrix().mul_vec(ring, b);
            let pairing = (0..n).fold(ring.zero(), |acc, j| {
                ring.add(&acc, &ring.mul(&phi_lift[j], &w[j]))
            });
            let coord_p = ring
                .div_ell_pow(&pairing, 1)
                .ok_or_else(|| Error::Internal("sublattice is not x-stable".into()))?;
            for (j, wj) in w.iter().enumerate() {
                let c = if j == p { &coord_p } else { wj };
                induced.set(j, k, next_ring.coerce(ring, c));
            }
        }
        out.push(LatticeModel {
            matrix: WittMatrix::new(&next_ring, induced),
            q: model.q.coerce(&next_ring),
            alpha: next_ring.coerce(ring, &model.alpha),
        });
    }
    Ok(out)
}

/// `model` together with every lattice reached by a chain of at most
/// `depth` invariant index-ℓ steps.
pub fn enumerate_invariant_sublattices(
    model: &LatticeModel,
    depth: u32,
) -> Result<Vec<LatticeModel>> {
    if model.ring().precision() <= depth {
        return Err(Error::PrecisionExhausted(format!(
            "depth {depth} needs precision above {depth}"
        )));
    }
    let mut all = vec![model.clone()];
    let mut frontier = vec![model.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for m in &frontier {
            next.extend(invariant_sublattices(m)?);
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

/// Elementary divisor valuations of `shift·I - F` over `W`, zeros included.
pub fn cokernel_elementary_divisors(model: &LatticeModel, shift: &Elem) -> Result<Vec<u32>> {
    let ring = model.ring();
    let a = WittMatrix::identity(ring, model.rank())
        .scale(shift)
        .sub(&model.frobenius());
    let snf = smith_normal_form_local(&a)?;
    Ok(snf
        .diagonal
        .iter()
        .map(|e| e.finite().expect("checked finite"))
        .collect())
}

/// The group `coker(shift - F)` as exponents `e_i` of `⊕ Z/ℓ^{e_i}`, with
/// each `W`-summand expanded to `deg h̄` cyclic `Z_ℓ`-summands.
pub fn cokernel_group(model: &LatticeModel, shift: &Elem) -> Result<Vec<u32>> {
    let m = model.ring().degree();
    let mut out: Vec<u32> = cokernel_elementary_divisors(model, shift)?
        .into_iter()
        .filter(|&e| e > 0)
        .flat_map(|e| std::iter::repeat(e).take(m))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Valuation of `det(shift·I - F)` at the model's precision.
pub fn cokernel_det_valuation(model: &LatticeModel, shift: &Elem) -> ExtVal {
    let ring = model.ring();
    let a = WittMatrix::identity(ring, model.rank())
        .scale(shift)
        .sub(&model.frobenius());
    let snf = local_snf_unchecked(&a);
    snf.diagonal
        .iter()
        .fold(ExtVal::Fin(0), |acc, e| acc.plus(*e))
}
