//! `torsion-atlas`: classify ℓ-torsion group schemes from a Weil polynomial.
//!
//! Polynomials are given with the LEADING coefficient first, e.g. `1,2,7`
//! for `t^2 + 2t + 7`.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use torsion_atlas::torsion::{
    classify_torsion_with, dual_class, torsion_point_group, DecompositionOptions,
};
use torsion_atlas::{
    construct_lift, dual_polygon_map, dual_weil, enumerate_kummer_zetas, generate_tables,
    kummer_zeta, local_decomposition, scheme_point_counts, validate_weil, BVector, Error, IntPoly,
    NewtonPolygon, WeilPolynomial, WittPoly, WittRing, YoungPolygon,
};

#[derive(Parser)]
#[command(name = "torsion-atlas", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygons of the shifted local factors of f at ℓ
    Polygon(PolygonArgs),
    /// Witness matrix over Z_ℓ for a monic Q ≡ t^d and a partition of d
    Lift(LiftArgs),
    /// Every ℓ-torsion class in the isogeny class of a squarefree f
    Torsion(TorsionArgs),
    /// Surface case analysis for a degree-4 Weil polynomial
    Surface(ClassArgs),
    /// Dual polynomial, factor pairing and rational ℓ-power torsion of each class and its dual
    Dual(ClassArgs),
    /// Kummer surface zeta functions for each 2-torsion type, or for one b-vector
    Kummer(KummerArgs),
    /// Regenerate the four Kummer b-vector tables
    Tables(TablesArgs),
}

#[derive(Args)]
struct WeilArgs {
    /// Coefficients, leading first, comma separated
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long)]
    q: u64,
    /// Skip the root-modulus check
    #[arg(long)]
    force_weil: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LocalArgs {
    #[arg(long)]
    ell: u64,
    /// Starting ℓ-adic precision
    #[arg(long)]
    precision: Option<u32>,
    /// Seed for randomized factoring
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl LocalArgs {
    fn options(&self) -> DecompositionOptions {
        DecompositionOptions {
            precision: self.precision,
            seed: self.seed,
            perturb_lifts: None,
        }
    }
}

#[derive(Args)]
struct PolygonArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Validate f as a Weil polynomial over F_q first
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    force_weil: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    local: LocalArgs,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long)]
    ell: u64,
    /// Parts separated by commas, e.g. `2,1`
    #[arg(long)]
    partition: String,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassArgs {
    #[command(flatten)]
    weil: WeilArgs,
    #[command(flatten)]
    local: LocalArgs,
}

#[derive(Args)]
struct TorsionArgs {
    #[command(flatten)]
    weil: WeilArgs,
    #[command(flatten)]
    local: LocalArgs,
    /// Also list closed points of each degree up to this bound
    #[arg(long)]
    max_degree: Option<u32>,
}

#[derive(Args)]
struct KummerArgs {
    #[command(flatten)]
    weil: WeilArgs,
    /// A single b-vector such as `b1=2,b2=1,b4=3`
    #[arg(long)]
    bvector: Option<String>,
    /// Number of point counts to list
    #[arg(long, default_value_t = 6)]
    max_degree: u32,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FunctionalEquationViolated { .. } | Error::RootModulusSuspect => 3,
        Error::PrecisionExhausted(_) => 4,
        Error::Internal(_) => 5,
        _ => 2,
    }
}

fn parse_poly(s: &str) -> std::result::Result<IntPoly, Failure> {
    Ok(IntPoly::parse_leading_first(s)?)
}

fn weil(args: &WeilArgs) -> std::result::Result<WeilPolynomial, Failure> {
    Ok(validate_weil(
        &parse_poly(&args.poly)?,
        args.q,
        args.force_weil,
    )?)
}

fn render(json: bool, value: Value, text: String) -> Outcome {
    if json {
        serde_json::to_string_pretty(&value).map_err(|e| Failure::Usage(e.to_string()))
    } else {
        Ok(text)
    }
}

fn polygon_json(np: &NewtonPolygon) -> Value {
    Value::Array(
        np.vertices()
            .iter()
            .map(|(x, y)| json!([x, y.finite().map_or(json!("TOP"), |v| json!(v))]))
            .collect(),
    )
}

fn cmd_polygon(a: &PolygonArgs) -> Outcome {
    let f = parse_poly(&a.poly)?;
    if let Some(q) = a.q {
        validate_weil(&f, q, a.force_weil)?;
    }
    let factors = local_decomposition(&f, a.local.ell, &a.local.options())?;
    let mut text = String::new();
    let mut items = Vec::new();
    for lf in &factors {
        let clamped = lf.clamped_polygon();
        let adm = lf.admissible()?;
        let adm_s: Vec<String> = adm.iter().map(|p| p.to_string()).collect();
        text.push_str(&format!(
            "{} (d = {}): polygon {}, slopes {}, clamped {}, admissible {}\n",
            lf.hbar,
            lf.d,
            lf.np,
            lf.np.slope_label(),
            clamped,
            adm_s.join(" ")
        ));
        items.push(json!({
            "hbar": lf.hbar.prime_coeffs(),
            "d": lf.d,
            "polygon": polygon_json(&lf.np),
            "clamped": polygon_json(&clamped),
            "slopes": lf.np.slope_label(),
            "admissible": adm.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>(),
        }));
    }
    render(a.json, json!({ "factors": items }), text)
}

fn cmd_lift(a: &LiftArgs) -> Outcome {
    let q = parse_poly(&a.poly)?;
    let partition = YoungPolygon::parse(&a.partition)?;
    let d = q.degree().unwrap_or(0) as u32;
    let precision = a.precision.unwrap_or(d + 2);
    let ring = WittRing::prime(a.ell, precision)?;
    let model = construct_lift(&WittPoly::from_int_poly(&ring, &q), &partition)?;
    let ring = model.ring();
    let rows: Vec<Vec<String>> = model
        .matrix
        .matrix()
        .to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| ring.to_balanced_integer(e).to_string())
                .collect()
        })
        .collect();
    let text = format!(
        "[{}]\n",
        rows.iter()
            .map(|r| format!("[{}]", r.join(",")))
            .collect::<Vec<_>>()
            .join(",")
    );
    render(a.json, model.to_json(), text)
}

fn cmd_torsion(a: &TorsionArgs) -> Outcome {
    let f = weil(&a.weil)?;
    let classes = classify_torsion_with(&f, a.local.ell, &a.local.options())?;
    let mut text = format!("classes: {}\n", classes.len());
    let mut items = Vec::new();
    for c in &classes {
        let mut item = c.to_json();
        text.push_str(&c.to_string());
        if a.max_degree.is_some() {
            let b = BVector::new(scheme_point_counts(c, a.max_degree)?);
            text.push_str(&format!("  [{b}]"));
            item["points"] = b.to_json();
        }
        text.push('\n');
        items.push(item);
    }
    render(a.weil.json, json!({ "classes": items }), text)
}

fn cmd_surface(a: &ClassArgs) -> Outcome {
    let f = weil(&a.weil)?;
    let s = torsion_atlas::surface::classify_surface_with(&f, a.local.ell, &a.local.options())?;
    let mut text = format!("case {}\n", s.case_id.label());
    for (k, v) in &s.conditions {
        text.push_str(&format!("  {k}: {v}\n"));
    }
    for c in &s.classes {
        text.push_str(&format!("{c}\n"));
    }
    render(a.weil.json, s.to_json(), text)
}

fn cmd_dual(a: &ClassArgs) -> Outcome {
    let f = weil(&a.weil)?;
    let (ell, opts) = (a.local.ell, a.local.options());
    let dual = dual_weil(&f.coeffs, f.q)?;
    let factors = local_decomposition(&f.coeffs, ell, &opts)?;
    let pairing = dual_polygon_map(&factors, f.q)?;
    let mut text = format!("dual polynomial {}\n", dual.to_leading_first_string());
    let pairs: Vec<Value> = pairing
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            text.push_str(&format!("{} <-> {}\n", factors[i].hbar, factors[j].hbar));
            json!([
                factors[i].hbar.prime_coeffs(),
                factors[j].hbar.prime_coeffs()
            ])
        })
        .collect();
    let mut items = Vec::new();
    for c in classify_torsion_with(&f, ell, &opts)? {
        let d = dual_class(&c, f.q);
        let g = torsion_point_group(&f, ell, &c, 1, &opts)?;
        let gd = torsion_point_group(&f, ell, &d, 1, &opts)?;
        text.push_str(&format!(
            "{c}: {}; dual {d}: {}\n",
            group_text(ell, &g),
            group_text(ell, &gd)
        ));
        items.push(json!({
            "class": c.to_json(),
            "points": g,
            "dual_class": d.to_json(),
            "dual_points": gd,
        }));
    }
    let value = json!({
        "dual": dual.to_leading_first_string(),
        "pairing": pairs,
        "classes": items,
    });
    render(a.weil.json, value, text)
}

fn group_text(ell: u64, exps: &[u32]) -> String {
    if exps.is_empty() {
        return "0".into();
    }
    exps.iter()
        .map(|e| format!("Z/{}", ell.pow(*e)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn parse_bvector(s: &str) -> std::result::Result<BVector, Failure> {
    let mut counts = BTreeMap::new();
    for part in s.split(',') {
        let bad = || Failure::Usage(format!("bad b-vector entry {part:?}; expected e.g. b1=2"));
        let (k, v) = part.trim().split_once('=').ok_or_else(bad)?;
        let r: u32 = k
            .trim()
            .trim_start_matches('b')
            .parse()
            .map_err(|_| bad())?;
        let n: u64 = v.trim().parse().map_err(|_| bad())?;
        if r == 0 {
            return Err(bad());
        }
        counts.insert(r, n);
    }
    Ok(BVector::new(counts))
}

fn cmd_kummer(a: &KummerArgs) -> Outcome {
    let f = weil(&a.weil)?;
    let zetas = match &a.bvector {
        Some(s) => {
            let b = parse_bvector(s)?;
            let z = kummer_zeta(&f, &b)?;
            vec![(b, z)]
        }
        None => enumerate_kummer_zetas(&f)?,
    };
    let mut text = String::new();
    let mut items = Vec::new();
    for (b, z) in &zetas {
        let counts: Vec<String> = z
            .point_counts(a.max_degree as usize)
            .iter()
            .map(|n| n.to_string())
            .collect();
        text.push_str(&format!(
            "{b}\n  Z = {z}\n  points: {}\n",
            counts.join(", ")
        ));
        items.push(json!({ "bvector": b.to_json(), "zeta": z.to_json(), "points": counts }));
    }
    render(a.weil.json, json!({ "zetas": items }), text)
}

fn cmd_tables(a: &TablesArgs) -> Outcome {
    let tables = generate_tables()?;
    let text = tables
        .iter()
        .map(|t| format!("# Table {}\n{}", t.number, t.to_tsv()))
        .collect::<Vec<_>>()
        .join("\n");
    let value = Value::Array(tables.iter().map(|t| t.to_json()).collect());
    render(a.json, value, text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Polygon(a) => cmd_polygon(a),
        Command::Lift(a) => cmd_lift(a),
        Command::Torsion(a) => cmd_torsion(a),
        Command::Surface(a) => cmd_surface(a),
        Command::Dual(a) => cmd_dual(a),
        Command::Kummer(a) => cmd_kummer(a),
        Command::Tables(a) => cmd_tables(a),
    };
    match result {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
