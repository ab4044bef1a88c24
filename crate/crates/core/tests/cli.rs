use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("models")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn bisim(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bisim"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out, _) = bisim(&all);
    (code, serde_json::from_str(&out).expect("valid JSON"))
}

#[test]
fn check_exit_codes() {
    let fig = model("figure1.lts");
    let (code, out, _) = bisim(&["check", &fig, "-p", &model("figure1-discrete.part")]);
    assert_eq!(code, 0, "{out}");

    let (code, v) = json(&["check", &fig, "-p", &model("figure1-merge-12.part")]);
    assert_eq!(code, 1);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["check"]["violated"]["equality"], "VUAV = AV");
    assert_eq!(v["check"]["violated"]["witness"]["row"], 2);
    assert_eq!(v["check"]["violated"]["witness"]["lhs"], "{b,c}");

    let (code, _, err) = bisim(&["check", &fig, "-p", &model("missing.part")]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.part"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bisim(&["check"]).0, 2);
    assert_eq!(bisim(&["frobnicate"]).0, 2);
    let fig = model("figure1.lts");
    let part = model("figure1-discrete.part");
    assert_eq!(bisim(&["--tol", "-1", "check", &fig, "-p", &part]).0, 2);
    assert_eq!(bisim(&["reward", &model("figure2.mrc"), "-t", "-1"]).0, 2);
    // A partition over the wrong number of states.
    assert_eq!(bisim(&["check", &fig, "-p", &model("pair-single.part")]).0, 2);
}

#[test]
fn weak_reading_flag() {
    let pair = model("tau-pair.lts");
    let one = model("pair-single.part");
    assert_eq!(bisim(&["check", &pair, "-p", &one, "-k", "weak"]).0, 0);
    assert_eq!(bisim(&["check", &pair, "-p", &one, "-k", "strong"]).0, 1);
    let (code, v) = json(&["--strict-def3", "check", &model("branching-triple.lts"), "-p", &model("merge-01.part"), "-k", "weak"]);
    assert_eq!(code, 1);
    assert_eq!(v["check"]["violated"]["equality"], "VUΠAΠV = ΠV");
}

#[test]
fn refine_matches_oracle() {
    let (code, out, _) = bisim(&["refine", &model("figure1.lts"), "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(out, "partition 4\n0\n1\n2\n3\n");
    let (code, v) = json(&["refine", &model("symmetric.mrc"), "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["partition"], serde_json::json!([[0, 1]]));
    assert_eq!(v["oracle"]["agrees"], true);
    assert_eq!(v["checksums"]["partition"].as_str().unwrap().len(), 64);
}

#[test]
fn lump_writes_models_that_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("tau-pair.lts", "pair-single.part", "weak", "lts 1\nalphabet a\ninit 0\nterm 0\n0 tau 0\n"),
        ("symmetric.mrc", "pair-single.part", "strong", "mrc 1\ninit 0:1\nreward 3\n"),
        ("fast-absorbing.mrc", "pair-single.part", "weak", "mrc 1\ninit 0:1\nreward 5\n"),
    ];
    for (i, (m, p, kind, expected)) in cases.iter().enumerate() {
        let out = dir.path().join(format!("lumped-{i}"));
        let out = out.to_str().unwrap();
        let (code, _, err) = bisim(&["lump", &model(m), "-p", &model(p), "-k", kind, "-o", out]);
        assert_eq!(code, 0, "{m}: {err}");
        assert_eq!(&fs::read_to_string(out).unwrap(), expected);
        let id = dir.path().join("id.part");
        fs::write(&id, "partition 1\n0\n").unwrap();
        assert_eq!(bisim(&["check", out, "-p", id.to_str().unwrap()]).0, 0);
    }
    // Failing check: nothing written, exit 1.
    let out = dir.path().join("never");
    let (code, _, _) = bisim(&["lump", &model("figure1.lts"), "-p", &model("figure1-merge-12.part"), "-o", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!out.exists());
}

#[test]
fn identity_lump_is_canonical_text() {
    let (code, out, _) = bisim(&["lump", &model("figure1.lts"), "-p", &model("figure1-discrete.part")]);
    assert_eq!(code, 0);
    let original = bisim_matrix::lts::parse_lts(&fs::read_to_string(model("figure1.lts")).unwrap()).unwrap();
    assert_eq!(out, bisim_matrix::lts::write_lts(&original));
}

#[test]
fn reward_project_closure() {
    let (code, v) = json(&["reward", &model("figure2.mrc"), "-t", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["rewards"][0]["reward"], 1.0);

    let (code, v) = json(&["project", &model("figure2.mrc")]);
    assert_eq!(code, 0);
    assert_eq!(v["pi"], serde_json::json!([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]));

    let (code, out, _) = bisim(&["closure", &model("figure1.lts")]);
    assert_eq!(code, 0);
    let closed = bisim_matrix::lts::parse_lts(&out).unwrap();
    let original = bisim_matrix::lts::figure_one();
    assert_eq!(closed.visible(), original.visible());

    // Fast transitions need an explicit interpretation.
    assert_eq!(bisim(&["reward", &model("fast-absorbing.mrc"), "-t", "1"]).0, 2);
    let (code, v) = json(&["reward", &model("fast-absorbing.mrc"), "-t", "0", "--limit"]);
    assert_eq!(code, 0);
    assert_eq!(v["rewards"][0]["reward"], 5.0);
}

#[test]
fn diagrams() {
    assert_eq!(bisim(&["diagram", &model("tau-pair.lts"), "-p", &model("pair-single.part")]).0, 0);
    assert_eq!(
        bisim(&["diagram", &model("branching-triple.lts"), "-p", &model("merge-01.part"), "-k", "branching"]).0,
        0
    );
    let (code, v) = json(&["diagram", &model("fast-absorbing.mrc"), "-p", &model("pair-single.part")]);
    assert_eq!(code, 0);
    assert_eq!(v["residuals"].as_array().unwrap().len(), 4);
    // Precondition fails: not a weak bisimulation.
    assert_eq!(bisim(&["diagram", &model("figure1.lts"), "-p", &model("figure1-merge-12.part")]).0, 1);
}

#[test]
fn branching_check_on_chains_shows_weak_verdict() {
    let (code, v) = json(&["check", &model("fast-escape.mrc"), "-p", &model("merge-01.part"), "-k", "branching"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["weak"]["violated"]["equality"], "VUΠV = ΠV");
}

#[test]
fn probe_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, a, _) = bisim(&["probe", "--seed", "0", "--instances", "100", "-o", out]);
    assert_eq!(code, 0);
    let (_, b, _) = bisim(&["probe", "--seed", "0", "--instances", "100"]);
    assert_eq!(a, b);
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        let c = bisim_matrix::probe::Counterexample::from_file(&text, 1e-9).unwrap();
        assert!(c.branching && !c.weak, "{}", f.display());
    }
}

#[test]
fn timing_only_on_request() {
    let args = ["check", &model("figure1.lts"), "-p", &model("figure1-discrete.part")];
    let (_, v) = json(&args);
    assert!(v.get("elapsed_ms").is_none());
    let mut timed = vec!["--timing"];
    timed.extend_from_slice(&args);
    let (_, v) = json(&timed);
    assert!(v["elapsed_ms"].as_f64().is_some());
}
