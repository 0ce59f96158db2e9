//! Integer polynomials.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{Integers, Rationals};
use super::upoly;
use crate::error::{Error, Result};

/// A polynomial with arbitrary-size integer coefficients, constant term first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        IntPoly {
            coeffs: upoly::trim(&Integers, coeffs),
        }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Coefficients given leading term first, e.g. `[1, 2, 7]` for t²+2t+7.
    pub fn from_leading_first(coeffs: &[i64]) -> Self {
        Self::from_i64s(&coeffs.iter().rev().copied().collect::<Vec<_>>())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    /// The linear polynomial `t - r`.
    pub fn linear(r: &BigInt) -> Self {
        IntPoly::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        upoly::degree(&self.coeffs)
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        upoly::eval(&Integers, &self.coeffs, x)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        IntPoly {
            coeffs: upoly::mul(&Integers, &self.coeffs, &other.coeffs),
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        IntPoly {
            coeffs: upoly::add(&Integers, &self.coeffs, &other.coeffs),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        IntPoly {
            coeffs: upoly::sub(&Integers, &self.coeffs, &other.coeffs),
        }
    }

    pub fn pow(&self, e: u64) -> IntPoly {
        IntPoly {
            coeffs: upoly::pow(&Integers, &self.coeffs, e),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly {
            coeffs: upoly::scale(&Integers, &self.coeffs, c),
        }
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly {
            coeffs: upoly::derivative(&Integers, &self.coeffs),
        }
    }

    pub fn taylor_shift(&self, a: &BigInt) -> IntPoly {
        IntPoly {
            coeffs: upoly::taylor_shift(&Integers, &self.coeffs, a),
        }
    }

    /// `t^deg · p(1/t)`.
    pub fn reversed(&self) -> IntPoly {
        match self.degree() {
            None => IntPoly::zero(),
            Some(d) => IntPoly {
                coeffs: upoly::reverse(&Integers, &self.coeffs, d),
            },
        }
    }

    /// `p(c·t)`.
    pub fn scale_variable(&self, c: &BigInt) -> IntPoly {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        IntPoly::new(out)
    }

    /// Exact division by a monic polynomial, `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = upoly::divrem_monic(&Integers, &self.coeffs, &divisor.coeffs);
        r.is_empty().then_some(IntPoly { coeffs: q })
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Primitive integer multiple of a rational polynomial, positive leading coefficient.
    fn from_rational(p: &[BigRational]) -> IntPoly {
        let den = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * &den).to_integer()).collect();
        let poly = IntPoly::new(ints);
        let g = poly.content();
        if g.is_zero() {
            return poly;
        }
        let g = if poly.coeffs.last().is_some_and(|c| c.is_negative()) {
            -g
        } else {
            g
        };
        IntPoly::new(poly.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Primitive gcd over Q, normalized to positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let g = upoly::gcd(&Rationals, &self.to_rational(), &other.to_rational());
        IntPoly::from_rational(&g)
    }

    /// True iff the polynomial has no repeated complex roots.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Exact square root in Z[t] for monic polynomials, if one exists.
    pub fn sqrt_monic(&self) -> Option<IntPoly> {
        let d = self.degree()?;
        if d % 2 != 0 || !self.is_monic() {
            return None;
        }
        let h = d / 2;
        // coefficients of the root, leading first, determined top-down
        let mut root = vec![BigInt::zero(); h + 1];
        root[h] = BigInt::one();
        for k in (0..h).rev() {
            // coefficient of t^{h+k} in root^2 must match
            let mut acc = BigInt::zero();
            for i in (k + 1)..=h {
                let j = h + k - i;
                if j > k && j <= h {
                    acc += &root[i] * &root[j];
                }
            }
            let target = self.coeff(h + k) - acc;
            if !target.is_even() {
                return None;
            }
            root[k] = target / 2;
        }
        let r = IntPoly::new(root);
        (r.mul(&r) == *self).then_some(r)
    }

    /// Parses a comma-separated, leading-first coefficient list such as `1,2,7`.
    pub fn parse_leading_first(s: &str) -> Result<IntPoly> {
        let mut coeffs = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let c = BigInt::from_str(tok)
                .map_err(|_| Error::InvalidInput(format!("bad coefficient {tok:?}")))?;
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty polynomial".into()));
        }
        coeffs.reverse();
        let p = IntPoly::new(coeffs);
        if p.is_zero() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        Ok(p)
    }

    /// Leading-first comma-separated rendering, inverse of [`Self::parse_leading_first`].
    pub fn to_leading_first_string(&self) -> String {
        self.coeffs
            .iter()
            .rev()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let show_coeff = !abs.is_one() || *i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = IntPoly::parse_leading_first("1,-1,8,-7,49").unwrap();
        assert_eq!(p.to_string(), "t^4 - t^3 + 8t^2 - 7t + 49");
        assert_eq!(p.to_leading_first_string(), "1,-1,8,-7,49");
        let fa = IntPoly::from_leading_first(&[1, 2, 7]);
        let fb = IntPoly::from_leading_first(&[1, -3, 7]);
        assert_eq!(fa.mul(&fb), p);
    }

    #[test]
    fn squarefree_detection() {
        let p = IntPoly::from_leading_first(&[1, 1, 3]);
        assert!(p.is_squarefree());
        assert!(!p.mul(&p).is_squarefree());
        assert_eq!(p.mul(&p).sqrt_monic(), Some(p.clone()));
        assert_eq!(
            p.mul(&IntPoly::from_leading_first(&[1, 0, 3])).sqrt_monic(),
            None
        );
    }

    #[test]
    fn gcd_is_primitive() {
        let a = IntPoly::from_leading_first(&[1, -3, 2]); // (t-1)(t-2)
        let b = IntPoly::from_leading_first(&[2, -2]); // 2(t-1)
        assert_eq!(a.gcd(&b), IntPoly::from_leading_first(&[1, -1]));
    }
}
