//! Dense matrices over a [`Ring`]. Division-free routines (products,
//! Berkowitz characteristic polynomial) work over any ring; elimination
//! routines require a [`Field`].

use std::fmt;

use super::ring::{Field, Ring};
use super::upoly;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Leading principal-free submatrix on the given row/column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn block_diagonal<R: Ring<Elem = E>>(ring: &R, blocks: &[Matrix<E>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::filled(n, m, ring.zero());
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl<E: Clone + PartialEq + fmt::Debug> Matrix<E> {
    pub fn zero<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn scalar<R: Ring<Elem = E>>(ring: &R, n: usize, c: &E) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { c.clone() } else { ring.zero() })
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            ring.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            ring.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|x| ring.mul(x, c))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(ring.zero(), |acc, k| {
                ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)))
            })
        })
    }

    pub fn mul_vec<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(ring.zero(), |acc, k| {
                    ring.add(&acc, &ring.mul(self.get(i, k), &v[k]))
                })
            })
            .collect()
    }

    pub fn pow<R: Ring<Elem = E>>(&self, ring: &R, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(ring, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            ring.mul(
                self.get(i / other.rows, j / other.cols),
                other.get(i % other.rows, j % other.cols),
            )
        })
    }

    /// Coefficients of `det(t·I − self)`, constant term first, computed with
    /// the division-free Berkowitz algorithm.
    pub fn charpoly<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<E> {
        assert!(
            self.is_square(),
            "characteristic polynomial of a non-square matrix"
        );
        let n = self.rows;
        // highest degree first while building
        let mut poly = vec![ring.one()];
        for k in 0..n {
            let a = self.get(k, k);
            let mut col = vec![ring.one(), ring.neg(a)];
            // vector C_i = M^i C for the leading k×k block
            let mut c: Vec<E> = (0..k).map(|i| self.get(i, k).clone()).collect();
            for _ in 0..k {
                let rc = (0..k).fold(ring.zero(), |acc, j| {
                    ring.add(&acc, &ring.mul(self.get(k, j), &c[j]))
                });
                col.push(ring.neg(&rc));
                c = (0..k)
                    .map(|i| {
                        (0..k).fold(ring.zero(), |acc, j| {
                            ring.add(&acc, &ring.mul(self.get(i, j), &c[j]))
                        })
                    })
                    .collect();
            }
            let next: Vec<E> = (0..k + 2)
                .map(|i| {
                    (0..=i.min(k)).fold(ring.zero(), |acc, j| {
                        if j < poly.len() && i - j < col.len() {
                            ring.add(&acc, &ring.mul(&col[i - j], &poly[j]))
                        } else {
                            acc
                        }
                    })
                })
                .collect();
            poly = next;
        }
        poly.reverse();
        upoly::trim(ring, poly)
    }

    pub fn det<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        let n = self.rows;
        let cp = self.charpoly(ring);
        let c0 = cp.first().cloned().unwrap_or_else(|| ring.zero());
        if n % 2 == 0 {
            c0
        } else {
            ring.neg(&c0)
        }
    }

    /// Adjugate via cofactors (division-free; intended for small matrices).
    pub fn adjugate<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return Matrix::identity(ring, 1);
        }
        Matrix::from_fn(n, n, |i, j| {
            // adj[i][j] = (-1)^{i+j} det(minor deleting row j, col i)
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = self.submatrix(&rows, &cols).det(ring);
            if (i + j) % 2 == 0 {
                m
            } else {
                ring.neg(&m)
            }
        })
    }
}

impl<E: Clone + PartialEq + fmt::Debug> Matrix<E> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, field: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = field.inv(m.get(r, c)).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = field.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !field.is_zero(m.get(i, c)) {
                    let factor = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = field.sub(m.get(i, j), &field.mul(&factor, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of the right kernel `{v : self·v = 0}`.
    pub fn kernel<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let (r, pivots) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![field.zero(); self.cols];
                v[fc] = field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                field.one()
            } else {
                field.zero()
            }
        });
        let (r, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }
}
