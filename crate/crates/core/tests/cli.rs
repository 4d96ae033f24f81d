use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use zxlab::FieldElement;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
}

fn zxlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zxlab"))
        .args(args)
        .env_remove(zxlab::cli::SIZE_CAP_ENV)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: stdout {:?} stderr {:?}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_with_brute_check() {
    let out = zxlab(&["count", path(&data("and2.bool")), "--brute-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n1"], 1);
    assert_eq!(v["n0"], 3);
    assert_eq!(v["check"], "ok");
}

#[test]
fn formula_map_is_not_unitary() {
    let out = zxlab(&["check-unitary", path(&data("lf.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["unitary"], false);
}

#[test]
fn cnot_diagram_is_cnot_over_root_two() {
    let out = zxlab(&["eval", path(&data("cnot.json")), "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cnot = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
    for (r, row) in cnot.iter().enumerate() {
        for (c, &bit) in row.iter().enumerate() {
            let e: FieldElement = v["entries"][r][c].as_str().unwrap().parse().unwrap();
            let want = if bit == 1 {
                FieldElement::inv_sqrt2()
            } else {
                FieldElement::zero()
            };
            assert_eq!(e, want, "entry ({r}, {c})");
        }
    }
}

#[test]
fn gadget_then_check_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("h.json");
    let out = zxlab(&[
        "gadget",
        "hardness",
        "--formula",
        path(&data("and2.bool")),
        "-o",
        path(&g),
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let out = zxlab(&["check-unitary", path(&g)]);
    assert_eq!(json(&out)["unitary"], true);
    let out = zxlab(&["check-unitary", path(&g), "--float"]);
    assert_eq!(json(&out)["unitary"], true);
}

#[test]
fn check_prop_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("cnot.jsonl");
    let bad = dir.path().join("hh.jsonl");
    std::fs::write(&good, "{\"g\":\"CNOT\",\"c\":0,\"t\":1}\n").unwrap();
    std::fs::write(&bad, "{\"g\":\"H\",\"q\":0}\n{\"g\":\"H\",\"q\":1}\n").unwrap();
    let cnot = data("cnot.json");
    let out = zxlab(&["check-prop", path(&cnot), path(&good)]);
    assert_eq!(out.status.code(), Some(0));
    let w: FieldElement = json(&out)["witness"].as_str().unwrap().parse().unwrap();
    assert_eq!(w, FieldElement::inv_sqrt2());
    let out = zxlab(&["check-prop", path(&cnot), path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["proportional"], false);
}

#[test]
fn decode_exact_and_approx() {
    let dir = tempfile::tempdir().unwrap();
    let exact = dir.path().join("e.json");
    let approx = dir.path().join("a.json");
    std::fs::write(
        &exact,
        r#"{"rows":2,"cols":2,"entries":["cyclo(2; 0; 3)","cyclo(4; 0; 0,-1)","cyclo(4; 0; 0,-1)","cyclo(2; 0; 3)"]}"#,
    )
    .unwrap();
    std::fs::write(
        &approx,
        r#"{"rows":2,"cols":2,"entries":[[3.01,0],[0,-0.99],[0,-1],[3,0.02]]}"#,
    )
    .unwrap();
    let out = zxlab(&["decode", "--matrix", path(&exact), "--n", "2"]);
    assert_eq!(json(&out)["n1"], 1);
    let out = zxlab(&["decode", "--matrix", path(&approx), "--n", "2", "--approx"]);
    assert_eq!(json(&out)["n1"], 1);
    assert_eq!(json(&out)["provenance"], "approx-rounded");
    let out = zxlab(&["decode", "--matrix", path(&approx), "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn size_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_zxlab"))
        .args(["count", path(&data("and2.bool"))])
        .env(zxlab::cli::SIZE_CAP_ENV, "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("size cap"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        zxlab(&["eval", "/no/such/file.json"]).status.code(),
        Some(1)
    );
    assert_eq!(zxlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(zxlab(&["gadget", "hardness"]).status.code(), Some(1));
}

#[test]
fn sampling_is_deterministic() {
    let args = ["sample", "--seed", "7", "--count", "50"];
    let lf = data("lf.json");
    let cnot = data("cnot.json");
    let a = zxlab(&[&args[..], &[path(&cnot)]].concat());
    let b = zxlab(&[&args[..], &[path(&cnot)]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["samples"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s == "00"));
    // lf is 2 → 1, so there is no unitary promise to rely on
    assert_eq!(
        zxlab(&[&args[..], &[path(&lf)]].concat()).status.code(),
        Some(2)
    );
    let p = zxlab(&[&args[..], &[path(&lf), "--promise-arbitrary"]].concat());
    assert_eq!(p.status.code(), Some(0));
}

#[test]
fn aux_examples() {
    let out = zxlab(&["aux-check", "--example", "corrected"]);
    assert_eq!(json(&out)["deterministic"], true);
    let out = zxlab(&["aux-check", "--example", "uncorrected"]);
    assert_eq!(json(&out)["deterministic"], false);
}

#[test]
fn vv_demo_finds_the_solution() {
    let out = zxlab(&["vv-demo", path(&data("and2.bool")), "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sat"], true);
    assert_eq!(v["check"], "ok");
}
