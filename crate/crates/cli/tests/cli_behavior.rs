//! CLI surface behavior: subcommands, formats, inline configs, sweeps.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_chenricci")
}

fn tmpdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join("chenricci-cli-tests").join(name);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn catalog_list_prints_all_ids() {
    let out = Command::new(bin()).args(["catalog", "list"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in [
        "euclid_proj",
        "hopf",
        "warped_radial",
        "fubini_study",
        "sasakian_sphere",
        "hopf_contact",
        "flat_cylinder_map",
        "cylinder_graph_map",
        "flat_slant_sub",
        "poincare",
        "round_sphere",
    ] {
        assert!(text.contains(id), "missing {id} in:\n{text}");
    }
}

#[test]
fn verify_markdown_format() {
    let dir = tmpdir("md");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
  "problem": {"catalog": {"id": "hopf"}},
  "checks": ["GFCRH"],
  "points": {"sampler": {"count": 1, "seed": 4}},
  "output": {"format": "md"}
}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["verify"])
        .arg(&cfg)
        .args(["--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# Verification report"));
    assert!(text.contains("GFCRH"));
    assert!(text.contains("## Sign audit"));
}

#[test]
fn inline_submersion_config_runs() {
    let dir = tmpdir("inline");
    let cfg = dir.join("cfg.json");
    // flat projection R^3 -> R^1 written inline
    std::fs::write(
        &cfg,
        r#"{
  "problem": {"inline": {
    "source": {"dim": 3, "lo": [-1, -1, -1], "hi": [1, 1, 1],
               "metric": [["1","0","0"],["0","1","0"],["0","0","1"]]},
    "target": {"dim": 1, "lo": [-2], "hi": [2], "metric": [["1"]]},
    "map": ["x3"]
  }},
  "checks": ["GFCRV", "GFCRH", "GFCRVH"],
  "points": {"explicit": [[0.1, -0.2, 0.3], [0.5, 0.5, -0.5]]}
}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["verify"])
        .arg(&cfg)
        .args(["--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["checked"], 6);
    assert_eq!(report["summary"]["violations"], 0);
    assert_eq!(report["summary"]["equalities"], 6);
}

#[test]
fn inline_map_with_sweep() {
    let dir = tmpdir("sweep");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
  "problem": {"inline": {
    "source": {"dim": 3, "lo": [-2, -2, -2], "hi": [2, 2, 2],
               "metric": [["1","0","0"],["0","1","0"],["0","0","1"]]},
    "target": {"dim": 3, "lo": [-2, -2, -2], "hi": [2, 2, 2],
               "metric": [["1","0","0"],["0","1","0"],["0","0","1"]]},
    "map": ["cos(x1)", "sin(x1)", "x2"],
    "declared_rank": 2
  }},
  "checks": ["RM-CRI", "RM-ICRI"],
  "points": {"explicit": [[0.4, 0.8, -0.1]]},
  "designations": {"sweep_unit_vectors": 8}
}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["verify"])
        .arg(&cfg)
        .args(["--no-timestamp", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // 2 designated verdicts + 2 * 8 sweep verdicts
    assert_eq!(report["summary"]["checked"], 18);
    assert_eq!(report["summary"]["violations"], 0);
    let sweeps = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["case"].as_str().map(|c| c.starts_with("sweep#")).unwrap_or(false))
        .count();
    assert_eq!(sweeps, 16);
}

#[test]
fn audit_reports_profile_and_conformance() {
    let dir = tmpdir("audit");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
  "problem": {"catalog": {"id": "hopf"}},
  "checks": [],
  "points": {"sampler": {"count": 2, "seed": 8}}
}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["audit"])
        .arg(&cfg)
        .args(["--no-timestamp"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["sign_profile"]["s24"], -1);
    assert_eq!(report["verdicts"].as_array().unwrap().len(), 0);
    // hopf source is S^3(1): the audit also reports its real-form conformance
    let conf = report["conformance"].as_array().unwrap();
    assert_eq!(conf.len(), 1);
    assert!(conf[0]["passed"].as_bool().unwrap());
}

#[test]
fn unknown_check_is_a_config_error() {
    let dir = tmpdir("badcheck");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"problem": {"catalog": {"id": "hopf"}}, "checks": ["NOPE"]}"#,
    )
    .unwrap();
    let out = Command::new(bin()).args(["verify"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown theorem id"));
}

#[test]
fn map_check_on_submersion_is_a_config_error() {
    let dir = tmpdir("wrongkind");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"problem": {"catalog": {"id": "hopf"}}, "checks": ["RM-CRI"],
            "points": {"sampler": {"count": 1, "seed": 1}}}"#,
    )
    .unwrap();
    let out = Command::new(bin()).args(["verify"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not apply"));
}

#[test]
fn atomic_write_leaves_no_tmp_file() {
    let dir = tmpdir("atomic");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
  "problem": {"catalog": {"id": "euclid_proj", "params": {"m": 3, "n": 2}}},
  "checks": ["GFCRV"],
  "points": {"sampler": {"count": 1, "seed": 1}}
}"#,
    )
    .unwrap();
    let report_path = dir.join("report.json");
    let status = Command::new(bin())
        .args(["verify"])
        .arg(&cfg)
        .args(["--no-timestamp", "--out"])
        .arg(&report_path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(report_path.exists());
    assert!(!report_path.with_extension("tmp").exists());
}

#[test]
fn tolerance_override_changes_equality_detection() {
    // hopf GFCRH has slack 3; a huge tol_eq_scale turns it into an equality
    let dir = tmpdir("tol");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
  "problem": {"catalog": {"id": "hopf"}},
  "checks": ["GFCRH"],
  "points": {"sampler": {"count": 1, "seed": 4}},
  "tolerances": {"tol_eq_scale": 1.0}
}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["verify"])
        .arg(&cfg)
        .args(["--no-timestamp"])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"][0]["equality"], true);
    assert!((report["verdicts"][0]["slack"].as_f64().unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn timestamp_present_unless_suppressed() {
    let dir = tmpdir("ts");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
  "problem": {"catalog": {"id": "euclid_proj", "params": {"m": 3, "n": 2}}},
  "checks": [],
  "points": {"sampler": {"count": 1, "seed": 1}}
}"#,
    )
    .unwrap();
    let with_ts = Command::new(bin()).args(["verify"]).arg(&cfg).output().unwrap();
    let report: serde_json::Value = serde_json::from_slice(&with_ts.stdout).unwrap();
    assert!(report.get("timestamp").is_some());
    let without = Command::new(bin())
        .args(["verify"])
        .arg(&cfg)
        .args(["--no-timestamp"])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&without.stdout).unwrap();
    assert!(report.get("timestamp").is_none());
}
