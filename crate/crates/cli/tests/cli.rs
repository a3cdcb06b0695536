use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn design(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_design"))
        .args(args)
        .output()
        .expect("spawn design")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn build(dir: &TempDir, name: &str, extra: &[&str]) -> PathBuf {
    let out = p(dir, name);
    let mut args = vec!["build"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", s(&out)]);
    let o = design(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

/// Rows of the criteria CSV as (criterion, param, efficiency).
fn csv_rows(text: &str) -> Vec<(String, String, f64)> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("criterion,param,value,reference_value,efficiency,feasible")
    );
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].to_string(), f[4].parse().unwrap())
        })
        .collect()
}

#[test]
fn mimura_is_a_two_design_but_not_three() {
    let dir = TempDir::new().unwrap();
    let m = build(&dir, "m.txt", &["--manifold", "s3", "--construct", "mimura"]);
    assert_eq!(std::fs::read_to_string(&m).unwrap().lines().count(), 5);

    let ok = design(&["verify", "--manifold", "s3", "--input", s(&m), "--max-level", "2"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("PASS"));

    let bad = design(&["verify", "--manifold", "s3", "--input", s(&m), "--max-level", "3"]);
    assert_eq!(code(&bad), 2);
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn circle_design_verifies() {
    let dir = TempDir::new().unwrap();
    let c = build(&dir, "c.txt", &["--manifold", "s1", "--construct", "circle", "--points", "7"]);
    let o = design(&["verify", "--manifold", "s1", "--input", s(&c), "--max-level", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn projection_and_product_sizes() {
    let dir = TempDir::new().unwrap();
    let t = build(&dir, "t.txt", &["--manifold", "s3", "--construct", "tetrahedral"]);
    let r = build(&dir, "r.txt", &["--manifold", "so3", "--construct", "project", "--input", s(&t)]);
    assert_eq!(std::fs::read_to_string(&r).unwrap().lines().count(), 12);

    let i = build(&dir, "i.txt", &["--manifold", "s2", "--construct", "icosahedron"]);
    let prod = build(
        &dir,
        "prod.json",
        &["--manifold", "s2xso3", "--construct", "product", "--a", s(&i), "--b", s(&r)],
    );
    let o = design(&[
        "criteria", "--manifold", "s2xso3", "--degree", "2,1", "--input", s(&prod), "--p", "-inf,-1,0",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for (_, _, eff) in csv_rows(&stdout(&o)) {
        assert!((eff - 1.0).abs() < 1e-9, "efficiency {eff}");
    }
}

#[test]
fn unequal_weights_are_not_lambda_designs() {
    let dir = TempDir::new().unwrap();
    let f = p(&dir, "w.json");
    std::fs::write(
        &f,
        r#"{"manifold":"s1","points":[[0.3333333333333333],[0.6666666666666666],[1.0]],"weights":[0.5,0.25,0.25]}"#,
    )
    .unwrap();
    let o = design(&["verify", "--manifold", "s1", "--input", s(&f), "--max-level", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn self_reference_has_unit_efficiency() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "g.txt", &["--manifold", "so3", "--construct", "grid", "--counts", "6,4,6"]);
    let o = design(&[
        "criteria", "--manifold", "so3", "--degree", "1", "--input", s(&g), "--reference", s(&g),
        "--p", "-inf", "--p", "-2..1:0.5", "--es", "1..10",
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1 + 6 + 10);
    for (_, _, eff) in rows {
        assert!((eff - 1.0).abs() < 1e-12);
    }
}

#[test]
fn es_sweep_on_identity_information() {
    let dir = TempDir::new().unwrap();
    let t = build(&dir, "t.txt", &["--manifold", "s3", "--construct", "tetrahedral"]);
    let r = build(&dir, "r.txt", &["--manifold", "so3", "--construct", "project", "--input", s(&t)]);
    let out = p(&dir, "es.csv");
    let o = design(&[
        "criteria", "--manifold", "so3", "--degree", "1", "--input", s(&r), "--es", "1..10", "--out", s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    for (k, line) in text.lines().skip(1).enumerate() {
        let value: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((value - (k + 1) as f64).abs() < 1e-9, "{line}");
    }
}

#[test]
fn six_four_six_grid_is_least_efficient() {
    let dir = TempDir::new().unwrap();
    let eff = |counts: &str| -> Vec<f64> {
        let g = build(&dir, &format!("g{counts}.txt"), &["--manifold", "so3", "--construct", "grid", "--counts", counts]);
        let o = design(&["criteria", "--manifold", "so3", "--degree", "1", "--input", s(&g), "--p", "-3..1:0.25"]);
        assert_eq!(code(&o), 0);
        csv_rows(&stdout(&o)).into_iter().map(|r| r.2).collect()
    };
    let low = eff("6,4,6");
    assert_eq!(low.len(), 16);
    for other in ["8,4,8", "6,6,6", "8,6,8"] {
        for (a, b) in low.iter().zip(eff(other)) {
            assert!(*a <= b + 1e-12, "{other}: {a} > {b}");
        }
    }
}

#[test]
fn rounding() {
    let dir = TempDir::new().unwrap();
    let t = build(&dir, "t.txt", &["--manifold", "s3", "--construct", "tetrahedral"]);
    let r = build(&dir, "r.txt", &["--manifold", "so3", "--construct", "project", "--input", s(&t)]);
    let o = design(&["round", "--manifold", "so3", "--input", s(&r), "--n", "144"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 12);
    assert!(text.lines().all(|l| l.starts_with("12\t")), "{text}");

    let w = p(&dir, "w.json");
    std::fs::write(
        &w,
        r#"{"manifold":"s1","points":[[0.25],[0.5],[1.0]],"weights":[0.7,0.2,0.1]}"#,
    )
    .unwrap();
    let out = p(&dir, "exact.json");
    let o = design(&["round", "--input", s(&w), "--n", "10", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["counts"], serde_json::json!([7, 2, 1]));

    let o = design(&["round", "--input", s(&w), "--n", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn strength_report() {
    let o = design(&["strength", "--manifold", "so3", "--degree", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("required degree: 2"), "{text}");
    assert!(text.contains("degree on the double cover: 4"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&design(&["bogus"])), 1);
    assert_eq!(code(&design(&[])), 1);
    assert_eq!(code(&design(&["--help"])), 0);
    assert_eq!(code(&design(&["build", "--manifold", "s9", "--construct", "mimura"])), 1);
    let dir = TempDir::new().unwrap();
    let missing = p(&dir, "none.txt");
    assert_eq!(
        code(&design(&["verify", "--manifold", "s3", "--input", s(&missing), "--max-level", "1"])),
        3
    );
    let junk = p(&dir, "junk.txt");
    std::fs::write(&junk, "1 2 x\n").unwrap();
    assert_eq!(
        code(&design(&["verify", "--manifold", "s3", "--input", s(&junk), "--max-level", "1"])),
        3
    );
}

#[test]
fn config_file_runs_a_subcommand() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "m.txt");
    let cfg = p(&dir, "run.json");
    std::fs::write(
        &cfg,
        serde_json::json!({
            "command": "build",
            "options": {"manifold": "s3", "construct": "mimura", "out": s(&out)}
        })
        .to_string(),
    )
    .unwrap();
    let o = design(&["--config", s(&cfg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 5);
}
