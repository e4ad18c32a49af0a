use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_twistrep"));
    c.env_remove("TWISTREP_TOL");
    c
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out: Output = bin().args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn fixture(dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(name);
    let (code, report, _) = run(&["fixtures", "--name", name, "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    path
}

fn s(p: &Path, file: &str) -> String {
    p.join(file).to_str().unwrap().to_string()
}

fn triple_args(p: &Path) -> Vec<String> {
    vec![
        "--group".into(),
        s(p, "group.json"),
        "--character".into(),
        s(p, "character.json"),
        "--action".into(),
        s(p, "action.json"),
    ]
}

fn run_owned(args: Vec<String>) -> (i32, Value, String) {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

#[test]
fn fixture_b_files_pass_star() {
    let dir = TempDir::new().unwrap();
    let b = fixture(&dir, "B");
    for f in ["group.json", "character.json", "action.json"] {
        assert!(b.join(f).exists());
    }
    let (code, report, _) = run(&["fixtures", "--name", "B", "--out", b.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["checks"][0]["name"], "star");
    assert_eq!(report["checks"][0]["pass"], true);
}

#[test]
fn fixture_b_twist_identifies_v4() {
    let dir = TempDir::new().unwrap();
    let b = fixture(&dir, "B");
    let out = dir.path().join("gchi.json");
    let (code, report, _) = run(&[
        "twist",
        &s(&b, "group.json"),
        "--character",
        &s(&b, "character.json"),
        "--action",
        &s(&b, "action.json"),
        "--identify",
        "--untwist",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["data"]["isomorphic_to"], "V4");
    assert_eq!(report["data"]["base_isomorphic_to"], "C4");
    for key in ["star", "associative", "alpha_character", "k_normal", "action_descends"] {
        assert_eq!(report["data"]["verification"][key], true);
    }
    assert!(report["data"]["untwist"]["isomorphic"].is_boolean());
    let (code, checked, _) = run(&["check-group", out.to_str().unwrap(), "--identify"]);
    assert_eq!(code, 0);
    assert_eq!(checked["data"]["isomorphic_to"], "V4");
}

#[test]
fn fixture_a_twist_keeps_the_table() {
    let dir = TempDir::new().unwrap();
    let a = fixture(&dir, "A");
    let (code, report, _) = run(&[
        "twist",
        &s(&a, "group.json"),
        "--character",
        &s(&a, "character.json"),
        "--action",
        &s(&a, "action.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["table_unchanged"], true);
}

#[test]
fn fixture_b_correspondence() {
    let dir = TempDir::new().unwrap();
    let b = fixture(&dir, "B");
    let mut args = vec!["correspond".to_string()];
    args.extend(triple_args(&b));
    let (code, report, _) = run_owned(args);
    assert_eq!(code, 0, "{report}");
    let d = &report["data"];
    assert_eq!(d["orbit_classes"], 2);
    assert_eq!(d["equivariant_irreducible_classes"], 2);
    assert_eq!(d["gchi_irreps"], 4);
    assert_eq!(d["bijection"], true);
    for o in d["orbits"].as_array().unwrap() {
        assert_eq!(o["extensions"], 2);
    }
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["residual"].as_f64().unwrap() >= 0.0));
}

#[test]
fn fixture_d_irreps() {
    let dir = TempDir::new().unwrap();
    let d = fixture(&dir, "D");
    assert!(!d.join("character.json").exists());
    let out = dir.path().join("irreps");
    let (code, report, _) = run(&["irreps", &s(&d, "group.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["data"]["dims"], serde_json::json!([1, 1, 1, 1, 2]));
    // written files load back and are irreducible
    let (code, ch, _) = run(&["character", &s(&out, "irrep_4.json"), "--group", &s(&d, "group.json")]);
    assert_eq!(code, 0, "{ch}");
    assert_eq!(ch["data"]["irreducible"], true);
    assert_eq!(ch["data"]["multiplicities"], serde_json::json!([0, 0, 0, 0, 1]));
}

#[test]
fn fixture_c_extension_and_induction() {
    let dir = TempDir::new().unwrap();
    let c = fixture(&dir, "C");
    let mut args = vec!["extend".to_string(), s(&c, "rho_omega.json"), s(&c, "rho_omega_bar.json")];
    args.extend(triple_args(&c));
    args.push("--all".into());
    let ext = dir.path().join("ext.json");
    args.extend(["--out".to_string(), ext.to_str().unwrap().to_string()]);
    let (code, report, _) = run_owned(args);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["data"]["branch"], "orbit_block");
    assert_eq!(report["data"]["extensions"], 2);
    assert_eq!(report["data"]["equivalence_classes"], 1);

    let ind = dir.path().join("ind.json");
    let (code, report, _) = run(&[
        "induce",
        &s(&c, "rho_omega.json"),
        "--group",
        &s(&c, "group.json"),
        "--character",
        &s(&c, "character.json"),
        "--out",
        ind.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["data"]["dim"], 2);
    assert_eq!(report["data"]["multiplicities"], serde_json::json!([0, 0, 1]));

    // the extension lives on S3_chi, which equals S3 here
    let (code, report, _) = run(&["equiv", ext.to_str().unwrap(), ind.to_str().unwrap(), "--group", &s(&c, "group.json")]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["data"]["equivalent"], true);
}

#[test]
fn non_invariant_rep_is_a_verified_failure() {
    let dir = TempDir::new().unwrap();
    let c = fixture(&dir, "C");
    let mut args = vec!["check-equivariance".to_string(), s(&c, "rho_omega.json")];
    args.extend(triple_args(&c));
    let (code, report, _) = run_owned(args.clone());
    assert_eq!(code, 1);
    assert_eq!(report["pass"], false);
    args[0] = "extend".into();
    let (code, report, _) = run_owned(args);
    assert_eq!(code, 1);
    assert_eq!(report["checks"][0]["name"], "equivariant");
    let mut args = vec!["check-equivariance".to_string(), s(&c, "rho_triv.json")];
    args.extend(triple_args(&c));
    assert_eq!(run_owned(args).0, 0);
}

#[test]
fn inequivalent_reps_exit_one() {
    let dir = TempDir::new().unwrap();
    let c = fixture(&dir, "C");
    let (code, report, _) = run(&[
        "equiv",
        &s(&c, "rho_omega.json"),
        &s(&c, "rho_omega_bar.json"),
        "--group",
        &s(&c, "group.json"),
        "--character",
        &s(&c, "character.json"),
        "--kernel",
    ]);
    assert_eq!(code, 1);
    assert_eq!(report["data"]["equivalent"], false);
    assert_eq!(report["checks"][0]["residual"], Value::Null);
}

#[test]
fn malformed_input_reports_location() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"name\": \"X\",\n  \"table\": [[0, 1], [1 0]]\n}\n").unwrap();
    let (code, report, stderr) = run(&["check-group", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    let needle = format!("{}:3:", bad.display());
    assert!(stderr.contains(&needle), "{stderr}");
    assert!(report["error"].as_str().unwrap().contains(&needle));
}

#[test]
fn non_associative_table_fails_verification() {
    let dir = TempDir::new().unwrap();
    let loop5 = dir.path().join("loop.json");
    std::fs::write(
        &loop5,
        r#"{"name": "L5", "table": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}"#,
    )
    .unwrap();
    let (code, report, _) = run(&["check-group", loop5.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["checks"][2]["name"], "associative");
    assert_eq!(report["checks"][2]["pass"], false);
}

#[test]
fn invalid_action_and_order_cap_are_input_errors() {
    let dir = TempDir::new().unwrap();
    let b = fixture(&dir, "B");
    std::fs::write(b.join("action.json"), r#"{"order": 2, "auts": [[0,1,2,3],[0,2,1,3]]}"#).unwrap();
    let mut args = vec!["correspond".to_string()];
    args.extend(triple_args(&b));
    let (code, _, stderr) = run_owned(args);
    assert_eq!(code, 2);
    assert!(stderr.contains("action.json"), "{stderr}");
    let (code, _, _) = run(&["check-group", &s(&b, "group.json"), "--cap", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_subcommand_and_fixture_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["fixtures", "--name", "Z", "--out", dir.path().to_str().unwrap()]).0, 2);
}

#[test]
fn tolerance_from_env_and_flag() {
    let dir = TempDir::new().unwrap();
    let d = fixture(&dir, "D");
    let g = s(&d, "group.json");
    let tol = |c: &mut Command| {
        let out = c.output().unwrap();
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        (out.status.code().unwrap(), v["config"]["tol"].as_f64())
    };
    assert_eq!(tol(bin().args(["irreps", &g])), (0, Some(1e-8)));
    assert_eq!(tol(bin().args(["irreps", &g]).env("TWISTREP_TOL", "1e-6")), (0, Some(1e-6)));
    assert_eq!(tol(bin().args(["irreps", &g, "--tol", "1e-9"]).env("TWISTREP_TOL", "1e-6")), (0, Some(1e-9)));
    assert_eq!(tol(bin().args(["irreps", &g, "--tol", "0.5"])).0, 2);
    assert_eq!(tol(bin().args(["irreps", &g, "--cap", "0"])).0, 2);
}

#[test]
fn reports_are_deterministic_apart_from_wall_time() {
    let dir = TempDir::new().unwrap();
    let c = fixture(&dir, "C");
    let mut args = vec!["correspond".to_string()];
    args.extend(triple_args(&c));
    args.extend(["--seed".to_string(), "7".to_string()]);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    let (_, a, _) = run_owned(args.clone());
    let (_, b, _) = run_owned(args);
    assert_eq!(strip(a), strip(b));
}
