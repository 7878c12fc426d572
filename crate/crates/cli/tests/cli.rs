//! End-to-end runs of the `tmcorr` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tmcorr(args: &[&str], memo: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tmcorr"));
    cmd.args(args)
        .env_remove("TMCORR_MEMO")
        .env_remove("TMCORR_PREFIX_CAP");
    if let Some(path) = memo {
        cmd.env("TMCORR_MEMO", path);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// `(query, args, exact)` per CSV data row.
fn csv_rows(text: &str) -> Vec<(String, String, String)> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["query", "args", "exact", "decimal"]
    );
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].to_string(), r[2].to_string())
        })
        .collect()
}

fn json_rows(text: &str) -> Vec<(String, String, String)> {
    let value: Value = serde_json::from_str(text).unwrap();
    value
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let field = |k: &str| r[k].as_str().unwrap().to_string();
            (field("query"), field("args"), field("exact"))
        })
        .collect()
}

#[test]
fn named_examples() {
    let rows = csv_rows(&stdout(&tmcorr(&["pair", "1"], None)));
    assert_eq!(rows[0].2, "-1/3");

    let rows = csv_rows(&stdout(&tmcorr(&["npoint", "--lags", "4,9"], None)));
    assert_eq!(rows[0].2, "0/1");

    let text = stdout(&tmcorr(&["exponent", "--j", "3"], None));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ("exponent.c".into(), "j=3".into(), "5/1".into()));
    assert_eq!(rows[1].0, "exponent.alpha");
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let alpha: f64 = reader.records().nth(1).unwrap().unwrap()[3]
        .parse()
        .unwrap();
    assert!((alpha - 0.7739760313).abs() <= 1e-9, "alpha = {alpha}");
}

#[test]
fn csv_and_json_carry_identical_exact_strings() {
    let queries: [&[&str]; 7] = [
        &["pair", "11"],
        &["npoint", "--lags", "1,2,3"],
        &[
            "weighted",
            "--f-minus",
            "-1/2",
            "--f-plus",
            "3",
            "--lags",
            "2,5",
        ],
        &["pd", "7"],
        &[
            "means",
            "--kind",
            "eta-power",
            "--params",
            "k=2",
            "--sweep",
            "16,64,256",
        ],
        &["matrices", "--n", "3"],
        &[
            "regseq",
            "--n",
            "4",
            "--m",
            "123456789012345678901234567890",
        ],
    ];
    for q in queries {
        let csv = csv_rows(&stdout(&tmcorr(q, None)));
        let mut json_args = vec!["--format", "json"];
        json_args.extend_from_slice(q);
        let json = json_rows(&stdout(&tmcorr(&json_args, None)));
        assert!(!csv.is_empty());
        assert_eq!(csv, json, "query {q:?}");
    }
}

#[test]
fn cache_round_trip_reproduces_values() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.cache");
    let second = dir.path().join("second.cache");

    // Populate a memo through ordinary queries.
    let computed = csv_rows(&stdout(&tmcorr(
        &["npoint", "--lags", "5,13,40"],
        Some(&first),
    )));
    stdout(&tmcorr(&["pair", "1000"], Some(&first)));
    let text = std::fs::read_to_string(&first).unwrap();
    assert!(text.starts_with("tmcorr-cache v1"), "{text}");

    // Save the loaded memo elsewhere, then list both files.
    stdout(&tmcorr(
        &["cache", "save", second.to_str().unwrap()],
        Some(&first),
    ));
    let a = csv_rows(&stdout(&tmcorr(
        &["cache", "load", first.to_str().unwrap()],
        None,
    )));
    let b = csv_rows(&stdout(&tmcorr(
        &["cache", "load", second.to_str().unwrap()],
        None,
    )));
    assert!(a.len() > 10, "only {} cached entries", a.len());
    assert_eq!(a, b);

    // A warm cache answers with the same exact value.
    let warm = csv_rows(&stdout(&tmcorr(
        &["npoint", "--lags", "5,13,40"],
        Some(&second),
    )));
    assert_eq!(computed, warm);

    stdout(&tmcorr(&["cache", "clear", second.to_str().unwrap()], None));
    let cleared = csv_rows(&stdout(&tmcorr(
        &["cache", "load", second.to_str().unwrap()],
        None,
    )));
    assert!(cleared.is_empty());
}

#[test]
fn corrupt_cache_is_an_argument_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cache");
    std::fs::write(&path, "tmcorr-cache v1\n4;1,2;not-a-number\n").unwrap();
    let out = tmcorr(&["cache", "load", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(tmcorr(&["pair", "x"], None).status.code(), Some(2));
    assert_eq!(
        tmcorr(&["npoint", "--lags", "1,,y"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        tmcorr(&["means", "--kind", "eta-power", "--params", "k=1"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tmcorr(&["exponent", "--j", "25"], None).status.code(),
        Some(3)
    );
    assert_eq!(
        tmcorr(&["--max-j", "10", "exponent", "--j", "11"], None)
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        tmcorr(&["npoint", "--lags", "1,2,3,4,5,6,7,8"], None)
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        tmcorr(
            &[
                "--cube-budget",
                "100",
                "means",
                "--kind",
                "hypercube",
                "--params",
                "n=4,N=16"
            ],
            None
        )
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn prefix_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tmcorr"))
        .args(["oracle", "--lags", "1", "--N", "4096"])
        .env("TMCORR_PREFIX_CAP", "1000")
        .env_remove("TMCORR_MEMO")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let rows = csv_rows(&stdout(&tmcorr(
        &["oracle", "--lags", "1", "--N", "4096"],
        None,
    )));
    assert_eq!(rows[0].2, "-683/2048");
}

#[test]
fn means_cover_every_kind() {
    let cases: [(&str, &str, bool); 6] = [
        ("eta-power", "k=1,N=16", true),
        ("mu-power", "sign=+,k=1,N=64", true),
        ("wiener", "N=256", true),
        ("abs", "N=256,alpha=4/5", false),
        ("hypercube", "n=3,N=8", true),
        ("hypercube", "n=4,N=8,alpha=1", false),
    ];
    for (kind, params, exact) in cases {
        let rows = csv_rows(&stdout(&tmcorr(
            &["means", "--kind", kind, "--params", params],
            None,
        )));
        assert_eq!(rows.len(), 1);
        assert_eq!(!rows[0].2.is_empty(), exact, "{kind} {params}");
    }
    let rows = csv_rows(&stdout(&tmcorr(
        &["means", "--kind", "hypercube", "--params", "n=3,N=8"],
        None,
    )));
    assert_eq!(rows[0].2, "0/1");
}

#[test]
fn sum_matrix_rows() {
    let rows = csv_rows(&stdout(&tmcorr(&["matrices", "--n", "4", "--sum"], None)));
    assert_eq!(rows.len(), 64);
    let first: Vec<&str> = rows[..8].iter().map(|r| r.2.as_str()).collect();
    assert_eq!(
        first,
        ["1/2", "-1/2", "-1/2", "1/2", "-1/2", "1/2", "1/2", "-1/2"]
    );
}
