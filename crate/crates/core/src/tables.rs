//! Point-count tables for 2-torsion of abelian surfaces in characteristic
//! not 2. Each row is described by residue data (a factor of `f mod 2`
//! together with the partitions allowed for it) and expanded into the set of
//! b-vectors of the resulting group schemes.

use crate::algebra::ff::{FFPoly, Fq};
use crate::algebra::witt::ExtVal;
use crate::error::Result;
use crate::kummer::BVector;
use crate::polygon::{admissible_partitions, clamp, NewtonPolygon, YoungPolygon};
use crate::torsion::{DistinguishedScheme, TorsionClass};
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// One residue factor and the Jordan types it may carry.
#[derive(Debug, Clone)]
struct Block {
    hbar: FFPoly,
    choices: Vec<YoungPolygon>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub label: String,
    pub bvectors: Vec<BVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub number: u32,
    pub rows: Vec<TableRow>,
}

impl Table {
    /// One `label<TAB>b-vector` line per b-vector.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for b in &row.bvectors {
                out.push_str(&format!("{}\t{}\n", row.label, b));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "table": self.number,
            "rows": self.rows.iter().map(|r| json!({
                "label": r.label,
                "bvectors": r.bvectors.iter().map(BVector::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn f2() -> Fq {
    Fq::prime(2).expect("2 is prime")
}

/// Residue polynomial from coefficients, constant term first.
fn residue(coeffs: &[u64]) -> FFPoly {
    FFPoly::from_u64s(&f2(), coeffs)
}

fn polygon(vertices: &[(u32, Option<u32>)]) -> NewtonPolygon {
    let v = vertices
        .iter()
        .map(|&(x, y)| (x, y.map_or(ExtVal::Top, ExtVal::Fin)))
        .collect();
    NewtonPolygon::from_vertices(v).expect("table polygons are convex")
}

fn local(hbar: FFPoly, vertices: &[(u32, Option<u32>)]) -> Result<Block> {
    let np = polygon(vertices);
    let d = np.degree();
    Ok(Block {
        hbar,
        choices: admissible_partitions(&clamp(&np), d)?,
    })
}

/// Summand for a squared factor: unions of two admissible partitions.
fn doubled(block: Block) -> Block {
    let mut choices = BTreeSet::new();
    for a in &block.choices {
        for b in &block.choices {
            choices.insert(a.union(b));
        }
    }
    Block {
        hbar: block.hbar,
        choices: choices.into_iter().collect(),
    }
}

fn fixed(hbar: FFPoly, parts: &[&[u32]]) -> Block {
    let choices = parts
        .iter()
        .map(|p| YoungPolygon::new(p.to_vec()).expect("positive parts"))
        .collect();
    Block { hbar, choices }
}

fn expand(blocks: &[Block]) -> Result<Vec<BVector>> {
    let mut classes: Vec<Vec<DistinguishedScheme>> = vec![vec![]];
    for block in blocks {
        let mut next = Vec::new();
        for prefix in &classes {
            for p in &block.choices {
                let mut c = prefix.clone();
                c.push(DistinguishedScheme {
                    hbar: block.hbar.clone(),
                    partition: p.clone(),
                });
                next.push(c);
            }
        }
        classes = next;
    }
    let mut out = BTreeSet::new();
    for c in classes {
        out.insert(BVector::try_from(&TorsionClass::new(c))?);
    }
    Ok(out.into_iter().collect())
}

fn row(label: &str, blocks: &[Block]) -> Result<TableRow> {
    Ok(TableRow {
        label: label.to_string(),
        bvectors: expand(blocks)?,
    })
}

/// `f ≡ (t+1)^4`: one row per clamped Newton polygon of the shifted Weil
/// polynomial; polygons giving the same set are listed together.
pub fn table1() -> Result<Table> {
    let polys: [&[(u32, Option<u32>)]; 7] = [
        &[(0, Some(0)), (4, Some(1))],
        &[(0, Some(0)), (3, Some(1)), (4, Some(2))],
        &[(0, Some(0)), (4, Some(2))],
        &[(0, Some(0)), (3, Some(2)), (4, Some(3))],
        &[(0, Some(0)), (2, Some(1)), (4, Some(3))],
        &[(0, Some(0)), (4, Some(3))],
        &[(0, Some(0)), (4, Some(4))],
    ];
    let mut rows: Vec<TableRow> = Vec::new();
    for v in polys {
        let label = polygon(v).slope_label();
        let r = row(&label, &[local(residue(&[1, 1]), v)?])?;
        match rows.iter_mut().find(|x| x.bvectors == r.bvectors) {
            Some(existing) => existing.label = format!("{} or {}", existing.label, r.label),
            None => rows.push(r),
        }
    }
    Ok(Table { number: 1, rows })
}

/// Squarefree `f mod 2` with no linear factor of multiplicity one.
pub fn table2() -> Result<Table> {
    let quartic = residue(&[1, 1, 1, 1, 1]);
    let quad = residue(&[1, 1, 1]);
    let lin = residue(&[1, 1]);
    let simple = [(0, Some(0)), (1, Some(1))];
    let rows = vec![
        row("t^4 + t^3 + t^2 + t + 1", &[local(quartic, &simple)?])?,
        row(
            "t^4 + t^3 + t + 1, 4 ∤ f(1)",
            &[
                local(lin.clone(), &[(0, Some(0)), (2, Some(1))])?,
                local(quad.clone(), &simple)?,
            ],
        )?,
        row(
            "t^4 + t^3 + t + 1, 4 | f(1)",
            &[
                local(lin, &[(0, Some(0)), (2, Some(2))])?,
                local(quad.clone(), &simple)?,
            ],
        )?,
        row(
            "t^4 + t^2 + 1, 4 ∤ a1 + a2 + 1 - 2q",
            &[local(quad.clone(), &[(0, Some(0)), (2, Some(1))])?],
        )?,
        row(
            "t^4 + t^2 + 1, 4 | a1 + a2 + 1 - 2q",
            &[local(quad, &[(0, Some(0)), (2, Some(2))])?],
        )?,
    ];
    Ok(Table { number: 2, rows })
}

/// `f = P^2` with `P` squarefree over the integers.
pub fn table3() -> Result<Table> {
    let quad = residue(&[1, 1, 1]);
    let lin = residue(&[1, 1]);
    let rows = vec![
        row(
            "P ≡ t^2 + t + 1",
            &[doubled(local(quad, &[(0, Some(0)), (1, Some(1))])?)],
        )?,
        row(
            "P ≡ t^2 + 1, 4 ∤ P(1)",
            &[doubled(local(lin.clone(), &[(0, Some(0)), (2, Some(1))])?)],
        )?,
        row(
            "P ≡ t^2 + 1, 4 | P(1)",
            &[doubled(local(lin, &[(0, Some(0)), (2, Some(2))])?)],
        )?,
    ];
    Ok(Table { number: 3, rows })
}

/// `f = (t ± √q)^2 · P` with `P(±√q) ≠ 0`.
pub fn table4() -> Result<Table> {
    let quad = residue(&[1, 1, 1]);
    let lin = residue(&[1, 1]);
    // the residue t + 1 of the double root is folded into a cubic polygon
    // whose classes gain an extra part 1
    let with_root = |vertices: &[(u32, Option<u32>)], deep: bool| -> Result<Block> {
        let one = YoungPolygon::new(vec![1]).expect("positive");
        let mut choices: BTreeSet<YoungPolygon> =
            admissible_partitions(&clamp(&polygon(vertices)), 3)?
                .iter()
                .map(|p| p.union(&one))
                .collect();
        if deep {
            choices.insert(YoungPolygon::new(vec![2, 2]).expect("positive"));
        }
        Ok(Block {
            hbar: lin.clone(),
            choices: choices.into_iter().collect(),
        })
    };
    let rows = vec![
        row(
            "P ≡ t^2 + t + 1",
            &[
                local(quad, &[(0, Some(0)), (1, Some(1))])?,
                fixed(lin.clone(), &[&[1, 1]]),
            ],
        )?,
        row(
            "P ≡ t^2 + 1, 4 ∤ P(±√q)",
            &[with_root(&[(0, Some(0)), (2, Some(1)), (3, None)], false)?],
        )?,
        row(
            "P ≡ t^2 + 1, 4 | P(±√q)",
            &[with_root(&[(0, Some(0)), (2, Some(2)), (3, None)], true)?],
        )?,
    ];
    Ok(Table { number: 4, rows })
}

pub fn generate_tables() -> Result<Vec<Table>> {
    Ok(vec![table1()?, table2()?, table3()?, table4()?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(t: &Table) -> Vec<(String, Vec<String>)> {
        t.rows
            .iter()
            .map(|r| {
                (
                    r.label.clone(),
                    r.bvectors.iter().map(|b| b.to_string()).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn unipotent_rows() {
        let t = table1().unwrap();
        let rows = strings(&t);
        assert_eq!(rows[0].1, vec!["b1=2,b2=1,b4=3"]);
        assert_eq!(rows.last().unwrap().1.len(), 5);
        assert!(rows.last().unwrap().1.contains(&"b1=16".to_string()));
    }

    #[test]
    fn double_root_rows() {
        let t = table4().unwrap();
        let rows = strings(&t);
        assert_eq!(rows[0].1, vec!["b1=4,b3=4"]);
        assert_eq!(rows[1].1, vec!["b1=4,b2=2,b4=2", "b1=8,b2=4"]);
        assert_eq!(rows[2].1.len(), 4);
    }
}
