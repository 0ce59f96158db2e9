//! Newton polygons over unramified local rings, Young polygons of nilpotent
//! Jordan types, and the dominance test between them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::intpoly::IntPoly;
use crate::algebra::witt::{ExtVal, WittPoly};
use crate::error::{Error, Result};

/// Lower convex hull of `(i, ν(coefficient of t^{d-i}))`, stored by its
/// corner vertices. Only the right endpoint may be `Top`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewtonPolygon {
    vertices: Vec<(u32, ExtVal)>,
}

/// A segment's slope; `Infinite` for the vertical rise to a `Top` endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slope {
    Finite(Rational64),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Slope::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

impl NewtonPolygon {
    /// Hull of the points `(i, vals[i])`, `i = 0..=d`. `vals[0]` must be finite.
    pub fn from_valuations(vals: &[ExtVal]) -> Result<Self> {
        let d = vals
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("Newton polygon needs at least one point".into()))?;
        if vals[0].is_top() {
            return Err(Error::InvalidInput("leading coefficient vanishes".into()));
        }
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            let Some(y) = v.finite() else { continue };
            let p = (i as i64, y as i64);
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        let mut vertices: Vec<(u32, ExtVal)> = hull
            .iter()
            .map(|&(x, y)| (x as u32, ExtVal::Fin(y as u32)))
            .collect();
        if vals[d].is_top() && d > 0 {
            vertices.push((d as u32, ExtVal::Top));
        }
        Ok(NewtonPolygon { vertices })
    }

    /// Builds a polygon from explicit corners, checking convexity.
    pub fn from_vertices(vertices: Vec<(u32, ExtVal)>) -> Result<Self> {
        if vertices.first() != Some(&(0, ExtVal::Fin(0))) {
            return Err(Error::InvalidInput("polygon must start at (0,0)".into()));
        }
        let np = NewtonPolygon { vertices };
        let slopes = np.segment_slopes();
        let xs_increasing = np.vertices.windows(2).all(|w| w[0].0 < w[1].0);
        let top_only_last = np.vertices[..np.vertices.len() - 1]
            .iter()
            .all(|(_, y)| !y.is_top());
        if !xs_increasing || !top_only_last || slopes.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidInput(
                "vertices do not form a lower convex polygon".into(),
            ));
        }
        Ok(np)
    }

    pub fn vertices(&self) -> &[(u32, ExtVal)] {
        &self.vertices
    }

    /// Right endpoint abscissa.
    pub fn degree(&self) -> u32 {
        self.vertices.last().map_or(0, |v| v.0)
    }

    /// Value at a rational abscissa in `[0, d]`; `None` stands for `Top`.
    pub fn value_at(&self, x: Rational64) -> Option<Rational64> {
        assert!(x >= Rational64::zero() && x <= Rational64::from(self.degree() as i64));
        if self.vertices.len() == 1 {
            return self.vertices[0]
                .1
                .finite()
                .map(|v| Rational64::from(v as i64));
        }
        for w in self.vertices.windows(2) {
            let (x0, y0) = (Rational64::from(w[0].0 as i64), w[0].1);
            let (x1, y1) = (Rational64::from(w[1].0 as i64), w[1].1);
            if x < x0 || x > x1 {
                continue;
            }
            let y0 = Rational64::from(y0.finite().expect("only the endpoint may be TOP") as i64);
            if x == x0 {
                return Some(y0);
            }
            let y1 = Rational64::from(y1.finite()? as i64);
            return Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0));
        }
        unreachable!("abscissa inside the polygon")
    }

    pub fn value_at_int(&self, x: u32) -> Option<Rational64> {
        self.value_at(Rational64::from(x as i64))
    }

    /// `(slope, horizontal length)` for each segment.
    pub fn segment_slopes(&self) -> Vec<(Slope, u32)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let dx = w[1].0 - w[0].0;
                let slope = match (w[0].1, w[1].1) {
                    (ExtVal::Fin(a), ExtVal::Fin(b)) => {
                        Slope::Finite(Rational64::new(b as i64 - a as i64, dx as i64))
                    }
                    _ => Slope::Infinite,
                };
                (slope, dx)
            })
            .collect()
    }

    /// One slope per unit of abscissa, e.g. `[1/2, 1/2]` for `t² - ℓt - ℓ`.
    pub fn slopes_per_unit(&self) -> Vec<Slope> {
        self.segment_slopes()
            .into_iter()
            .flat_map(|(s, dx)| std::iter::repeat(s).take(dx as usize))
            .collect()
    }

    /// Slopes of the primitive lattice pieces of each segment, the notation
    /// used for the `tables::table1` row labels: `(1/4)`, `(1/2,1/2)`, `(1,1,1,1)`.
    pub fn primitive_slopes(&self) -> Vec<Slope> {
        let mut out = Vec::new();
        for w in self.vertices.windows(2) {
            let dx = (w[1].0 - w[0].0) as i64;
            match (w[0].1, w[1].1) {
                (ExtVal::Fin(a), ExtVal::Fin(b)) => {
                    let dy = b as i64 - a as i64;
                    let g = dx.gcd(&dy);
                    for _ in 0..g {
                        out.push(Slope::Finite(Rational64::new(dy, dx)));
                    }
                }
                _ => out.push(Slope::Infinite),
            }
        }
        out
    }

    pub fn slope_label(&self) -> String {
        let parts: Vec<String> = self
            .primitive_slopes()
            .iter()
            .map(|s| s.to_string())
            .collect();
        format!("({})", parts.join(","))
    }

    /// Points of the polygon with both coordinates integral (TOP at the end).
    pub fn lattice_points(&self) -> Vec<(u32, ExtVal)> {
        (0..=self.degree())
            .filter_map(|x| match self.value_at_int(x) {
                None => Some((x, ExtVal::Top)),
                Some(v) if v.is_integer() => Some((x, ExtVal::Fin(*v.numer() as u32))),
                Some(_) => None,
            })
            .collect()
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .vertices
            .iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect();
        write!(f, "{}", pts.join(","))
    }
}

/// Jordan type `m_1 ≥ m_2 ≥ … ≥ m_r` of a nilpotent matrix, drawn as the
/// polygon through `(m_1 + … + m_i, i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct YoungPolygon {
    parts: Vec<u32>,
}

impl YoungPolygon {
    /// Sorts the parts into decreasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput(
                "partition parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(YoungPolygon { parts })
    }

    /// Parses `"2,1,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The zero matrix of size `d`.
    pub fn trivial(d: u32) -> Self {
        YoungPolygon {
            parts: vec![1; d as usize],
        }
    }

    /// A single Jordan block of size `d`.
    pub fn single(d: u32) -> Self {
        YoungPolygon { parts: vec![d] }
    }

    /// Union of the parts of both partitions.
    pub fn union(&self, other: &YoungPolygon) -> YoungPolygon {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        YoungPolygon::new(parts).expect("parts positive")
    }

    pub fn vertices(&self) -> Vec<(u32, u32)> {
        let mut out = vec![(0, 0)];
        let mut x = 0;
        for (i, m) in self.parts.iter().enumerate() {
            x += m;
            out.push((x, i as u32 + 1));
        }
        out
    }

    pub fn value_at(&self, x: Rational64) -> Rational64 {
        let mut x0 = 0i64;
        for (i, &m) in self.parts.iter().enumerate() {
            let x1 = x0 + m as i64;
            if x <= Rational64::from(x1) {
                return Rational64::from(i as i64) + (x - x0) / m as i64;
            }
            x0 = x1;
        }
        Rational64::from(self.parts.len() as i64)
    }

    pub fn value_at_int(&self, x: u32) -> Rational64 {
        self.value_at(Rational64::from(x as i64))
    }
}

impl fmt::Display for YoungPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Newton polygon of a monic `Q`, using coefficient valuations at the
/// working precision (zero coefficients count as `Top`).
pub fn newton_polygon(q: &WittPoly) -> Result<NewtonPolygon> {
    if !q.monic_exact() {
        return Err(Error::InvalidInput(
            "Newton polygon needs a monic polynomial".into(),
        ));
    }
    let d = q.degree().unwrap_or(0);
    if d == 0 {
        return Err(Error::InvalidInput(
            "Newton polygon needs positive degree".into(),
        ));
    }
    let vals = q.coeff_valuations();
    let ordered: Vec<ExtVal> = (0..=d).map(|i| vals[d - i]).collect();
    NewtonPolygon::from_valuations(&ordered)
}

/// ℓ-adic valuation of an integer, `Top` for zero.
pub fn int_valuation(n: &BigInt, ell: u64) -> ExtVal {
    if n.is_zero() {
        return ExtVal::Top;
    }
    let ell = BigInt::from(ell);
    let mut x = n.abs();
    let mut v = 0;
    while x.is_multiple_of(&ell) {
        x /= &ell;
        v += 1;
    }
    ExtVal::Fin(v)
}

/// Newton polygon of a monic integer polynomial with exact valuations.
pub fn newton_polygon_int(q: &IntPoly, ell: u64) -> Result<NewtonPolygon> {
    if !q.is_monic() {
        return Err(Error::InvalidInput(
            "Newton polygon needs a monic polynomial".into(),
        ));
    }
    let d = q.degree().unwrap_or(0);
    let ordered: Vec<ExtVal> = (0..=d)
        .map(|i| int_valuation(&q.coeff(d - i), ell))
        .collect();
    NewtonPolygon::from_valuations(&ordered)
}

/// True iff the Newton polygon lies on or above the Young polygon. Both are
/// piecewise linear with integral break points, so integers suffice.
pub fn dominates(np: &NewtonPolygon, yp: &YoungPolygon) -> Result<bool> {
    if np.degree() != yp.total() {
        return Err(Error::DimensionMismatch(format!(
            "Newton polygon has length {}, partition {} has total {}",
            np.degree(),
            yp,
            yp.total()
        )));
    }
    Ok((0..=np.degree()).all(|x| match np.value_at_int(x) {
        None => true,
        Some(v) => v >= yp.value_at_int(x),
    }))
}

/// Replaces every slope above 1 (including the rise to `Top`) by slope 1.
pub fn clamp(np: &NewtonPolygon) -> NewtonPolygon {
    let d = np.degree();
    let mut out: Vec<(u32, ExtVal)> = vec![np.vertices[0]];
    for w in np.vertices.windows(2) {
        let steep = match (w[0].1, w[1].1) {
            (ExtVal::Fin(a), ExtVal::Fin(b)) => b - a > w[1].0 - w[0].0,
            _ => true,
        };
        if steep {
            let (x0, y0) = w[0];
            let y0 = y0.finite().expect("only the endpoint may be TOP");
            out.push((d, ExtVal::Fin(y0 + d - x0)));
            break;
        }
        out.push(w[1]);
    }
    // merge a slope-1 segment with the slope-1 tail
    if out.len() >= 3 {
        let n = out.len();
        let (a, b, c) = (out[n - 3], out[n - 2], out[n - 1]);
        let s1 = b.1.finite().unwrap() - a.1.finite().unwrap() == b.0 - a.0;
        let s2 = c.1.finite().unwrap() - b.1.finite().unwrap() == c.0 - b.0;
        if s1 && s2 {
            out.remove(n - 2);
        }
    }
    NewtonPolygon { vertices: out }
}

/// All partitions of `d`, in decreasing lexicographic order.
pub fn partitions(d: u32) -> Vec<YoungPolygon> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<YoungPolygon>) {
        if rest == 0 {
            out.push(YoungPolygon {
                parts: prefix.clone(),
            });
            return;
        }
        for m in (1..=rest.min(max)).rev() {
            prefix.push(m);
            go(rest - m, m, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `d` whose Young polygon lies on or below `np`.
pub fn admissible_partitions(np: &NewtonPolygon, d: u32) -> Result<Vec<YoungPolygon>> {
    let mut out = Vec::new();
    for p in partitions(d) {
        if dominates(np, &p)? {
            out.push(p);
        }
    }
    Ok(out)
}
