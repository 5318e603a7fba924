use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn percolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percolab")).args(args).output().expect("binary runs")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn canopy_phi_example() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "phi.json",
        r#"{"experiment":"phi","source":{"kind":"canopy"},"radius":2,"p":0.5,"replicas":100000,"seed":7}"#,
    );
    let out = dir.path().join("phi.csv");
    let o = percolab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 2);
    let col = |name: &str| rows[0].iter().position(|h| h == name).unwrap();
    let est: f64 = rows[1][col("estimate")].parse().unwrap();
    let lo: f64 = rows[1][col("ci_lo")].parse().unwrap();
    let hi: f64 = rows[1][col("ci_hi")].parse().unwrap();
    let se = (hi - lo) / (2.0 * 1.96);
    assert!((est - 0.5).abs() < 4.0 * se, "{est} +- {se}");
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("phi.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_hash"].as_str().unwrap(), rows[1][0]);
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn invalid_kind_exits_2_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sub/phi.csv");
    let o = percolab(&[
        "phi",
        "--source",
        r#"{"kind":"canoppy"}"#,
        "--set",
        "radius=2",
        "--set",
        "p=0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn unknown_field_exits_2() {
    let o = percolab(&["phi", "--source", r#"{"kind":"canopy"}"#, "--set", "radius=1", "--set", "p=0.5", "--set", "radiuss=3"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let o = percolab(&["crossing", "--set", "n=4", "--set", "ps=[0.5]", "--set", "experiment=phi"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_bracket_exits_3() {
    let o = percolab(&[
        "estimate-pc",
        "--source",
        r#"{"kind":"path"}"#,
        "--set",
        "bracket=[0.3, 0.8]",
        "--set",
        "replicas=200",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn rerun_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "mtp.json",
        r#"{"experiment":"mtp-test","source":{"kind":"gkl","params":{"k":3,"l":5}},"replicas":500,"seed":4}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let o = percolab(&["run", "--config", &cfg, "--threads", threads, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

/// Every subcommand runs end to end on a small config.
#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["generate", "--source", r#"{"kind":"ugw","params":{"law":{"constant":2}}}"#, "--set", "replicas=3"],
        &["phi", "--source", r#"{"kind":"path"}"#, "--set", "radii=[0,1,2]", "--set", "ps=[0.5,0.9]", "--set", "replicas=10"],
        &["witness", "--source", r#"{"kind":"path"}"#, "--set", "p=0.9", "--set", "r_max=8"],
        &[
            "estimate-pc",
            "--source",
            r#"{"kind":"canopy"}"#,
            "--set",
            "method=ptilde_a",
            "--set",
            "stratified=true",
            "--set",
            "r_max=400",
            "--set",
            "bracket=[0.5,0.9]",
            "--set",
            "tol=0.05",
            "--set",
            "replicas=1",
        ],
        &["pt-diag", "--source", r#"{"kind":"canopy"}"#, "--set", "exact=true", "--set", "ps=[0.65,0.8]"],
        &["pt-diag", "--source", r#"{"kind":"path"}"#, "--set", "ps=[0.5]", "--set", "radii=[2,4,8]", "--set", "replicas=200"],
        &["pta-diag", "--source", r#"{"kind":"path"}"#, "--set", "ps=[0.5]", "--set", "radii=[2,4,8]", "--set", "replicas=200"],
        &[
            "mtp-test",
            "--source",
            r#"{"kind":"canopy"}"#,
            "--set",
            "functions=[\"edge\",\"parent\"]",
            "--set",
            "replicas=300",
            "--set",
            r#"root_law={"statistic":"level","law":[0.5,0.25,0.125]}"#,
        ],
        &["converge", "--source", r#"{"kind":"canopy"}"#, "--set", "radii=[1]", "--set", "replicas=500"],
        &[
            "converge",
            "--set",
            "mode=locality",
            "--set",
            r#"sources=[{"label":"a","source":{"kind":"box","params":{"n":3}}}]"#,
            "--set",
            r#"target={"kind":"z2"}"#,
            "--set",
            "radii=[1,2]",
            "--set",
            "replicas=300",
        ],
        &["crossing", "--set", "n=4", "--set", "ps=[0,0.5,1]", "--set", "replicas=100"],
        &["suite", "--set", "criteria=[5]", "--set", "scale=0.1"],
    ];
    for args in cases {
        let o = percolab(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(text.starts_with("config_hash,"), "{args:?}: {text}");
        assert!(text.lines().count() >= 2, "{args:?}: {text}");
    }
}

#[test]
fn json_format_parses() {
    let o = percolab(&["crossing", "--set", "n=4", "--set", "ps=[0.5]", "--set", "replicas=50", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["experiment"], "crossing");
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 1);
}
