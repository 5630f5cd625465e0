use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dualorder::{io, DualMatrix};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dualorder"));
    c.env_remove("DUALORDER_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

#[test]
fn shipped_fixtures_match_the_library() {
    for (name, x) in dualorder::fixtures::all() {
        assert_eq!(io::read_matrix(fixture(name)).unwrap(), x, "{name}");
    }
}

#[test]
fn compute_mpdgi_of_f1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let o = run(&["compute", "mpdgi", &fixture("F1"), "-o", &s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let want = DualMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]], &[&[-1.0, 0.0], &[0.0, 0.0]]).unwrap();
    assert_eq!(io::read_matrix(&out).unwrap(), want);
}

#[test]
fn compute_dmpgi_of_f2_names_the_residual() {
    let o = run(&["compute", "dmpgi", &fixture("F2")]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("projector residual"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn compute_pinv_of_a_diagonal() {
    let o = run(&["compute", "pinv", &fixture("F7")]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let real = dir.path().join("d.json");
    io::write_matrix(&real, &DualMatrix::from_real(dualorder::fixtures::f7().real().clone()).unwrap()).unwrap();
    let o = run(&["compute", "pinv", &s(&real)]);
    assert_eq!(o.status.code(), Some(0));
    let x = io::parse_matrix(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let want = DualMatrix::from_rows(
        &[&[1.0, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.0]],
        &[&[0.0; 3], &[0.0; 3], &[0.0; 3]],
    )
    .unwrap();
    assert_eq!(x, want);
}

#[test]
fn check_report_is_json() {
    let o = run(&["check", "p-star", &fixture("F6"), &fixture("F7"), "--report"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["relation"], "p_star");
    assert!(v["condition_residuals"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn check_routes_agree_on_fixtures() {
    let pairs = [("F3", "F4"), ("F3", "F5"), ("F6", "F7"), ("F6", "F8")];
    for order in ["d-star", "p-order", "p-star"] {
        for (x, y) in pairs {
            let codes: Vec<_> = ["definition", "characterization", "canonical"]
                .iter()
                .map(|r| run(&["check", order, &fixture(x), &fixture(y), "--route", r]).status.code())
                .collect();
            assert!(codes.windows(2).all(|w| w[0] == w[1]), "{order} {x} {y}: {codes:?}");
        }
    }
}

#[test]
fn prerequisite_failure_exits_3() {
    assert_eq!(run(&["check", "d-star", &fixture("F1"), &fixture("F2")]).status.code(), Some(3));
    assert_eq!(run(&["check", "t-star", &fixture("F1"), &fixture("F2")]).status.code(), Some(0));
}

#[test]
fn malformed_and_mismatched_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"rows": 2, "cols": 2, "real": [[1, 2]]}"#).unwrap();
    assert_eq!(run(&["compute", "mpdgi", &s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["check", "star", &fixture("F1"), &fixture("F3")]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

fn gen(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["gen"];
    args.extend_from_slice(extra);
    args.push("--out");
    let d = s(dir);
    args.push(&d);
    run(&args)
}

#[test]
fn gen_reproduces_files_and_records_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["d-star-pair", "--m", "3", "--n", "3", "--rank-a", "1", "--rank-b", "2", "--seed", "7"];
    let (one, two): (PathBuf, PathBuf) = (dir.path().join("1"), dir.path().join("2"));
    assert_eq!(gen(&one, &flags).status.code(), Some(0));
    assert_eq!(gen(&two, &flags).status.code(), Some(0));
    for f in ["a.json", "b.json", "manifest.json"] {
        assert_eq!(fs::read(one.join(f)).unwrap(), fs::read(two.join(f)).unwrap(), "{f}");
    }
    let m: serde_json::Value = serde_json::from_slice(&fs::read(one.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["tool"], "dualorder");
    assert_eq!(m["kind"], "d-star-pair");
    assert_eq!(m["spec"]["seed"], 7);
    assert_eq!(m["files"], serde_json::json!(["a.json", "b.json"]));
    let code = run(&["check", "d-star", &s(&one.join("a.json")), &s(&one.join("b.json"))]).status.code();
    assert_eq!(code, Some(0));
}

#[test]
fn gen_seed_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["dmpgi-matrix", "--m", "3", "--n", "2", "--rank-a", "1"];
    let (env, flag) = (dir.path().join("env"), dir.path().join("flag"));
    let d = s(&env);
    let mut args = vec!["gen"];
    args.extend_from_slice(&flags);
    args.extend_from_slice(&["--out", &d]);
    assert_eq!(bin().args(&args).env("DUALORDER_SEED", "42").output().unwrap().status.code(), Some(0));
    let mut with_flag = flags.to_vec();
    with_flag.extend_from_slice(&["--seed", "42"]);
    assert_eq!(gen(&flag, &with_flag).status.code(), Some(0));
    assert_eq!(fs::read(env.join("x.json")).unwrap(), fs::read(flag.join("x.json")).unwrap());
}

#[test]
fn gen_rank_zero_without_noise_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = gen(
        dir.path(),
        &["dmpgi-matrix", "--m", "2", "--n", "3", "--rank-a", "0", "--seed", "1", "--noise-scale", "0", "0"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(io::read_matrix(dir.path().join("x.json")).unwrap(), DualMatrix::zeros(2, 3));
}

#[test]
fn gen_rejects_invalid_specs() {
    let dir = tempfile::tempdir().unwrap();
    let o = gen(dir.path(), &["d-star-pair", "--m", "3", "--n", "3", "--rank-a", "2", "--rank-b", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gen(dir.path(), &["dmpgi-matrix", "--m", "0", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_prints_outcomes_and_rejects_unknown_ids() {
    let o = run(&["verify", "thm-3.6", "--trials", "30", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("thm-3.6"), "{text}");
    assert!(text.contains(" 0 failures"), "{text}");
    let o = run(&["verify", "fixtures-5.x", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failures"], 0);
    assert_eq!(run(&["verify", "thm-9.9"]).status.code(), Some(2));
}
