//! End-to-end tests against the built binary and the JSONL store.

use std::fs;
use std::process::{Command, Output};

use doubling_cli::store::{self, RecordFilter};
use doubling_core::census::{CensusRecord, BOUND_FORMULA_VERSION};

fn doubling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doubling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn census_prints_exact_count_and_oracle() {
    let out = doubling(&[
        "census", "--group", "z:5", "--s", "3", "-K", "2", "--oracle",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("10 sets"), "{text}");
    assert!(text.contains("match"), "{text}");
}

#[test]
fn census_record_roundtrips_through_store() {
    let dir = std::env::temp_dir().join(format!("doubling-store-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.jsonl");
    let path_str = path.to_str().unwrap();

    let out = doubling(&[
        "census", "--group", "z:5", "--s", "3", "-K", "5/3", "--bounds", "--out", path_str,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // append a second record and one corrupt line
    let out = doubling(&[
        "census", "--group", "z:6", "--s", "2", "-K", "2", "--out", path_str,
    ]);
    assert!(out.status.success());
    fs::write(
        &path,
        format!("{}not json at all\n", fs::read_to_string(&path).unwrap()),
    )
    .unwrap();

    let all = store::load(&path, &RecordFilter::default()).unwrap();
    assert_eq!(all.len(), 2);
    assert!(all.iter().all(|r| r.bound_version == BOUND_FORMULA_VERSION));

    let filtered = store::load(
        &path,
        &RecordFilter {
            n: Some(5),
            s: Some(3),
            k: Some("5/3".into()),
        },
    )
    .unwrap();
    assert_eq!(filtered.len(), 1);
    assert_eq!(filtered[0].count, "4");
    assert_eq!(filtered[0].threshold, 5);
    assert!(filtered[0].bound_conjecture.is_some());

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn census_formats_csv_and_jsonl() {
    let out = doubling(&[
        "census", "--group", "z:5", "--s", "3", "-K", "2", "--oracle", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2, "{text}");
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("z:5,5,3,2,6,10,true"));

    let out = doubling(&[
        "census", "--group", "z:5", "--s", "3", "-K", "2", "--format", "jsonl",
    ]);
    assert!(out.status.success());
    let rec: CensusRecord = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(rec.count, "10");

    let out = doubling(&[
        "census", "--group", "z:5", "--s", "3", "-K", "2", "--format", "yaml",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn census_is_deterministic_modulo_timestamps() {
    let a = doubling(&["census", "--group", "z:8", "--s", "3", "-K", "5/2"]);
    let b = doubling(&["census", "--group", "z:8", "--s", "3", "-K", "5/2"]);
    let strip = |s: String| {
        s.lines()
            .map(|l| l.split('(').next().unwrap_or(l).to_string())
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(stdout(&a)), strip(stdout(&b)));
}

#[test]
fn malformed_group_exits_with_usage_code() {
    let out = doubling(&["census", "--group", "q:9", "--s", "2", "-K", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = doubling(&["census", "--group", "zmod:1", "--s", "2", "-K", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_cap_exits_with_code_three() {
    let out = doubling(&["census", "--group", "z:64", "--s", "12", "-K", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn apcover_reports_minimal_cover() {
    let out = doubling(&["apcover", "--set", "1,2,3,10", "--outliers", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("length=3"), "{text}");
    assert!(text.contains("outliers=[10]"), "{text}");
}

#[test]
fn supersat_exhaustive_over_small_group() {
    let out = doubling(&[
        "supersat",
        "--group",
        "zmod:4x2",
        "--max-set",
        "3",
        "--exhaustive",
    ]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("inequalities hold"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn lowerbound_full_expansion_verifies() {
    let out = doubling(&[
        "lowerbound",
        "--n",
        "20",
        "--s",
        "5",
        "-K",
        "4",
        "--verify-all",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("16 distinct sets"), "{text}");
    assert!(text.contains("adjusted"), "{text}");
}

#[test]
fn typicality_reports_fraction() {
    let out = doubling(&[
        "typicality",
        "--n",
        "12",
        "--s",
        "3",
        "-K",
        "5/3",
        "--tmax",
        "0",
        "--pmax",
        "5",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("fraction 1"), "{}", stdout(&out));
}

#[test]
fn containers_builds_verifies_and_dumps() {
    let dir = std::env::temp_dir().join(format!("doubling-tree-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tree.json");
    let store_path = dir.join("records.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_doubling"))
        .env("DOUBLING_STORE", store_path.to_str().unwrap())
        .args([
            "containers",
            "--group",
            "z:8",
            "--s",
            "2",
            "-K",
            "2",
            "--epsilon",
            "0.24",
            "--verify",
            "--dump-tree",
            path.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("verified"), "{}", stdout(&out));
    let dump: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(dump.get("a_size").is_some());
    assert!(dump.get("children").is_some());
    // the verification verdict lands in the store
    let records = store::load(&store_path, &RecordFilter::default()).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].coverage, Some(true));
    fs::remove_dir_all(&dir).ok();
}
