//! Binary-level checks: exit codes, JSON schema stability, and corpus
//! round-trips.

use std::process::Command;

fn tauu(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tauu")).args(args).output().expect("binary runs")
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exit_codes_are_stable() {
    // Success.
    let ok = tauu(&["check-ring", "--ring", "Z6", "--tau", "full", "--prop", "U-BFR"]);
    assert_eq!(ok.status.code(), Some(0));
    // Property failure exits 1.
    let fail = tauu(&["check-ring", "--ring", "Z6", "--tau", "full", "--prop", "BFR"]);
    assert_eq!(fail.status.code(), Some(1));
    // Usage errors exit 2.
    let usage = tauu(&["check-ring", "--ring", "Z6"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad_ring = tauu(&["ring-info", "--ring", "Z1"]);
    assert_eq!(bad_ring.status.code(), Some(2));
    let bad_elem = tauu(&["classify", "--ring", "Z6", "--tau", "full", "--elem", "9"]);
    assert_eq!(bad_elem.status.code(), Some(2));

    // Exit codes are independent of the output format.
    let fail_json =
        tauu(&["check-ring", "--ring", "Z6", "--tau", "full", "--prop", "BFR", "--format", "json"]);
    assert_eq!(fail_json.status.code(), Some(1));
}

#[test]
fn json_documents_carry_schema_version() {
    for args in [
        vec!["ring-info", "--ring", "Z20", "--format", "json"],
        vec!["ufactorize", "--ring", "Z20", "--tau", "full", "--elem", "0", "--format", "json"],
        vec!["factorize", "--ring", "Z6", "--tau", "full", "--elem", "3", "--format", "json"],
        vec!["classify", "--ring", "Z6", "--tau", "full", "--elem", "2", "--format", "json"],
        vec!["check-relation", "--ring", "Z6", "--tau", "comaximal", "--format", "json"],
        vec!["verify", "--ring", "Z6", "--tau", "full", "--ids", "HIER-IRR", "--format", "json"],
    ] {
        let out = tauu(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
        assert_eq!(doc["schema"], 1, "{args:?}");
    }
}

#[test]
fn rendered_factorizations_re_parse() {
    let out = tauu(&["ufactorize", "--ring", "Z20", "--tau", "full", "--elem", "0", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ring = tauu_core::Ring::modular(20).unwrap();
    let tau = tauu_core::TauRelation::full(&ring);
    for entry in doc["entries"].as_array().unwrap() {
        let text = entry["witness"]["text"].as_str().unwrap();
        let uf = tauu_core::render::parse_u_factorization(&ring, text).unwrap();
        assert_eq!(uf.render(&ring), text);
        assert_eq!(
            tauu_core::check_u_factorization(&ring, &tau, ring.zero(), &uf),
            None,
            "witness `{text}` must re-validate"
        );
    }
}

#[test]
fn corpus_command_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("default.corpus");
    let corpus = tauu(&["corpus"]);
    assert_eq!(corpus.status.code(), Some(0));
    std::fs::write(&path, stdout(&corpus)).unwrap();

    let out = tauu(&[
        "verify",
        "--corpus",
        path.to_str().unwrap(),
        "--ids",
        "HIER-IRR,IRR-ONE-ESS,PRES-CHAIN",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0 fail"), "{text}");
}

#[test]
fn verify_single_pair_and_bad_ids() {
    let ok = tauu(&["verify", "--ring", "Z20", "--tau", "full", "--ids", "IRR-ONE-ESS"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = tauu(&["verify", "--ring", "Z20", "--tau", "full", "--ids", "NOT-AN-ID"]);
    assert_eq!(bad.status.code(), Some(2));
    let missing = tauu(&["verify", "--ids", "all"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn oversized_ring_warns_but_computes() {
    let out = tauu(&["ring-info", "--ring", "Z80"]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("warning"), "expected a size warning, got: {err}");
}

#[test]
fn table_ring_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z3.tbl");
    // Z/3Z as explicit tables: size, addition, multiplication.
    let mut body = String::from("3\n");
    for a in 0..3u32 {
        for b in 0..3u32 {
            body.push_str(&format!("{} ", (a + b) % 3));
        }
        body.push('\n');
    }
    for a in 0..3u32 {
        for b in 0..3u32 {
            body.push_str(&format!("{} ", a * b % 3));
        }
        body.push('\n');
    }
    std::fs::write(&path, body).unwrap();
    let out = tauu(&["ring-info", "--ring", &format!("table:{}", path.display())]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("3 elements"));
}

#[test]
fn factorize_lists_canonical_multisets_with_pump() {
    let out = tauu(&["factorize", "--ring", "Z20", "--tau", "full", "--elem", "10"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("[ 10 ]"), "{text}");
    assert!(text.contains("[ 2 * 5 ]"), "{text}");
    assert!(text.contains("[ 2 * 5 * 5 ]"), "{text}");
    assert!(text.contains("unbounded"), "{text}");
    assert!(text.contains("cycle [5]"), "{text}");
}

#[test]
fn tauu_cap_env_overrides_default_cap() {
    let small = Command::new(env!("CARGO_BIN_EXE_tauu"))
        .args(["factorize", "--ring", "Z6", "--tau", "full", "--elem", "3", "--format", "json"])
        .env("TAUU_CAP", "3")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&small)).unwrap();
    assert_eq!(doc["cap"], 3);
    assert_eq!(doc["canonical_factorizations"].as_array().unwrap().len(), 3);
    // An explicit --cap wins over the environment.
    let explicit = Command::new(env!("CARGO_BIN_EXE_tauu"))
        .args([
            "factorize", "--ring", "Z6", "--tau", "full", "--elem", "3", "--cap", "2",
            "--format", "json",
        ])
        .env("TAUU_CAP", "5")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&explicit)).unwrap();
    assert_eq!(doc["cap"], 2);
}

#[test]
fn inventory_with_grade_filter() {
    let out = tauu(&[
        "inventory", "--ring", "Z20", "--tau", "full", "--elem", "10", "--beta", "assoc",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("2, 5, 10"), "{text}");

    let filtered = tauu(&[
        "inventory", "--ring", "Z20", "--tau", "full", "--elem", "10", "--alpha", "irreducible",
    ]);
    let text = stdout(&filtered);
    // 10 itself is not irreducible (10 = 2 * 5 avoids its class), so the
    // grade-filtered inventory keeps only the classes of 2 and 5.
    let divisor_line = text.lines().nth(1).unwrap_or("");
    assert_eq!(divisor_line.trim(), "2, 5", "{text}");
}
