use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsion-atlas"))
        .args(args)
        .env_remove("TORSION_ATLAS_PRECISION_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

const QUARTIC: [&str; 6] = ["--poly", "1,-1,8,-7,49", "--q", "7", "--ell", "5"];

#[test]
fn lift_prints_witness_matrix() {
    assert_eq!(
        stdout(&[
            "lift",
            "--poly",
            "1,-5,-5",
            "--ell",
            "5",
            "--partition",
            "2"
        ]),
        "[[0,5],[1,5]]\n"
    );
    let v = json(&[
        "lift",
        "--poly",
        "1,-5,-5",
        "--ell",
        "5",
        "--partition",
        "2",
        "--json",
    ]);
    assert_eq!(v["ring"]["ell"], 5);
}

#[test]
fn lift_rejects_undominated_partition() {
    let out = run(&[
        "lift",
        "--poly",
        "1,-5,-5",
        "--ell",
        "5",
        "--partition",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn torsion_lists_four_classes() {
    let v = json(&[&["torsion"], &QUARTIC[..], &["--json"]].concat());
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 4);
    for c in classes {
        assert_eq!(c["summands"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn torsion_point_counts_sum_to_group_order() {
    let v = json(
        &[
            &["torsion"],
            &QUARTIC[..],
            &["--json", "--max-degree", "24"],
        ]
        .concat(),
    );
    for c in v["classes"].as_array().unwrap() {
        let total: u64 = c["points"]
            .as_object()
            .unwrap()
            .iter()
            .map(|(r, b)| r.parse::<u64>().unwrap() * b.as_u64().unwrap())
            .sum();
        assert_eq!(total, 625);
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = [&["dual"], &QUARTIC[..], &["--json", "--seed", "3"]].concat();
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn dual_swaps_point_groups() {
    let v = json(&[&["dual"], &QUARTIC[..], &["--json"]].concat());
    let pairs: Vec<(Value, Value)> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["points"].clone(), c["dual_points"].clone()))
        .collect();
    assert!(pairs.contains(&(serde_json::json!([1, 1]), serde_json::json!([2]))));
    assert!(pairs.contains(&(serde_json::json!([2]), serde_json::json!([1, 1]))));
}

#[test]
fn surface_json_shape() {
    let v = json(&[
        "surface",
        "--poly",
        "1,-8,30,-72,81",
        "--q",
        "9",
        "--ell",
        "2",
        "--json",
    ]);
    assert_eq!(v["case"], "7c_ii");
    assert!(v["conditions"].is_object());
    assert_eq!(v["classes"].as_array().unwrap().len(), 4);
    assert!(v["classes"][0]["summands"][0]["hbar"].is_array());
    assert!(v["classes"][0]["summands"][0]["partition"].is_array());
}

#[test]
fn kummer_single_bvector() {
    let out = stdout(&[
        "kummer",
        "--poly",
        "1,-8,24,-32,16",
        "--q",
        "4",
        "--bvector",
        "b1=16",
        "--max-degree",
        "1",
    ]);
    assert!(out.contains("points: 105"), "{out}");
    let bad = run(&[
        "kummer",
        "--poly",
        "1,2,7,6,9",
        "--q",
        "3",
        "--bvector",
        "b1=3",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn kummer_enumerates_types() {
    let out = stdout(&["kummer", "--poly", "1,2,7,6,9", "--q", "3"]);
    assert!(out.starts_with("b1=1,b3=5\n"), "{out}");
    assert!(out.contains("points: 20,"), "{out}");
}

#[test]
fn tables_match_golden_files() {
    let out = stdout(&["tables"]);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/golden");
    let expected: Vec<String> = (1..=4)
        .map(|n| {
            let body = std::fs::read_to_string(format!("{dir}/table{n}.tsv")).unwrap();
            format!("# Table {n}\n{body}")
        })
        .collect();
    assert_eq!(out, expected.join("\n"));
    let v = json(&["tables", "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn polygon_reports_admissible_partitions() {
    let v = json(&[&["polygon"], &QUARTIC[..], &["--json"]].concat());
    let factors = v["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 2);
    assert_eq!(factors[0]["admissible"], serde_json::json!([[2], [1, 1]]));
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["torsion", "--poly", "1,x", "--q", "7", "--ell", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["tables", "--poly", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["torsion", "--poly", "1,2,3,4,5", "--q", "7", "--ell", "5"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "torsion",
            "--poly",
            "1,-1,8,-7,49",
            "--q",
            "7",
            "--ell",
            "7"
        ])
        .status
        .code(),
        Some(2)
    );
    let capped = Command::new(env!("CARGO_BIN_EXE_torsion-atlas"))
        .args([&["dual"], &QUARTIC[..], &["--precision", "1"]].concat())
        .env("TORSION_ATLAS_PRECISION_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(4));
}

#[test]
fn root_check_can_be_forced() {
    // functional equation holds but the roots are real and too large
    let args = ["torsion", "--poly", "1,-10,7", "--q", "7", "--ell", "5"];
    assert_eq!(run(&args).status.code(), Some(3));
    assert!(run(&[&args[..], &["--force-weil"]].concat())
        .status
        .success());
}
