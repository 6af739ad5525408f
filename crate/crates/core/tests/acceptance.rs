//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::sync::OnceLock;
use std::time::Instant;

use doubling_core::suite::{self, SuiteReport};

const SEED: u64 = 42;

fn check(criterion: &str, report: &SuiteReport, elapsed_s: f64) {
    println!(
        "{} {criterion} [{}] — {} ({elapsed_s:.1}s)",
        if report.passed { "PASS" } else { "FAIL" },
        report.name,
        report.detail
    );
    assert!(report.passed, "{criterion} failed: {}", report.detail);
}

fn container_reports() -> &'static [SuiteReport; 3] {
    static REPORTS: OnceLock<[SuiteReport; 3]> = OnceLock::new();
    REPORTS.get_or_init(|| suite::container_suites(SEED, 1000).expect("suite runs"))
}

#[test]
fn criterion_01_pollard_exhaustive() {
    let start = Instant::now();
    let report = suite::pollard_exhaustive_suite().expect("suite runs");
    let elapsed = start.elapsed().as_secs_f64();
    check("criterion 1", &report, elapsed);
    assert!(
        elapsed < 300.0,
        "expected under five minutes, took {elapsed:.1}s"
    );
}

#[test]
fn criterion_02_alpha_oracle_equivalence() {
    let start = Instant::now();
    let report = suite::alpha_oracle_suite().expect("suite runs");
    check("criterion 2", &report, start.elapsed().as_secs_f64());
}

#[test]
fn criterion_03_container_contract() {
    let start = Instant::now();
    let reports = container_reports();
    check("criterion 3", &reports[0], start.elapsed().as_secs_f64());
    assert!(reports[0].detail.contains("pairs traced"));
}

#[test]
fn criterion_04_replay_determinism() {
    let start = Instant::now();
    let reports = container_reports();
    check("criterion 4", &reports[1], start.elapsed().as_secs_f64());
}

#[test]
fn criterion_05_round_invariants() {
    let start = Instant::now();
    let reports = container_reports();
    check("criterion 5", &reports[2], start.elapsed().as_secs_f64());
}

#[test]
fn criterion_06_delta_table_cross_check() {
    let start = Instant::now();
    let report = suite::delta_cross_check_suite(SEED ^ 0x5eed, 200).expect("suite runs");
    check("criterion 6", &report, start.elapsed().as_secs_f64());
}

#[test]
fn criterion_07_sumset_container_coverage() {
    let start = Instant::now();
    let report = suite::sumset_tree_suite().expect("suite runs");
    let elapsed = start.elapsed().as_secs_f64();
    check("criterion 7", &report, elapsed);
    assert!(
        elapsed < 600.0,
        "expected under ten minutes, took {elapsed:.1}s"
    );
}

#[test]
fn criterion_08_census_exactness() {
    let start = Instant::now();
    let report = suite::census_exactness_suite().expect("suite runs");
    check("criterion 8", &report, start.elapsed().as_secs_f64());
}

#[test]
fn criterion_09_lower_bound_families() {
    let start = Instant::now();
    let report = suite::lower_bound_suite(SEED ^ 0xfa111e).expect("suite runs");
    check("criterion 9", &report, start.elapsed().as_secs_f64());
}

#[test]
fn criterion_10_ap_cover_optimality() {
    let start = Instant::now();
    let report = suite::ap_cover_optimality_suite().expect("suite runs");
    check("criterion 10", &report, start.elapsed().as_secs_f64());
}

#[test]
fn criterion_11_dichotomy_totality() {
    let start = Instant::now();
    let report = suite::dichotomy_totality_suite().expect("suite runs");
    check("criterion 11", &report, start.elapsed().as_secs_f64());
    assert!(report.detail.contains("instances"));
}
