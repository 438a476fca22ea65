//! Acceptance suite: every gate at its stated tolerance, one pass/fail
//! line per criterion.
//!
//! Criterion 5 is expected to stay red on one sub-check: the
//! two-polarization oracle's conditional-map residual is cubic in ε
//! (its interaction generator moves the optical photon number by ±1 per
//! order and the wave plate conserves it, so even orders cannot reach the
//! single-photon detection port), while the gate demands a quadratic
//! log-log slope. The measured slope and the passing first-order
//! convergence bound are printed alongside.

use std::sync::OnceLock;

use phononforge::report::{self, ReproReport};

static REPORT: OnceLock<ReproReport> = OnceLock::new();

fn shared_report() -> &'static ReproReport {
    REPORT.get_or_init(|| report::run_all_checks(1.0).expect("report battery must run"))
}

/// Print one line for the criterion plus its rows; true when every gated
/// row passes.
fn criterion_passes(id: &str) -> bool {
    let rows: Vec<_> = shared_report()
        .rows
        .iter()
        .filter(|r| r.criterion == id)
        .collect();
    assert!(!rows.is_empty(), "no rows for criterion {id}");
    let pass = rows.iter().all(|r| r.pass || r.informational);
    println!("criterion {id}: {}", if pass { "PASS" } else { "FAIL" });
    for row in &rows {
        let status = if row.informational {
            "INFO"
        } else if row.pass {
            "pass"
        } else {
            "FAIL"
        };
        println!(
            "  [{status}] {} — measured {} (target {})",
            row.label, row.measured, row.target
        );
    }
    pass
}

#[test]
fn criterion_1_orthogonality_suite() {
    assert!(criterion_passes("1"));
}

#[test]
fn criterion_2_heralding_formulas() {
    assert!(criterion_passes("2"));
}

#[test]
fn criterion_3_worked_example() {
    assert!(criterion_passes("3"));
}

#[test]
fn criterion_4_transformation_round_trip() {
    assert!(criterion_passes("4"));
}

#[test]
fn criterion_5_realization_oracles() {
    assert!(
        criterion_passes("5"),
        "the optomech residual slope is structurally 3 (odd-order-only detection port); \
         the gate as stated demands 2.0 +/- 0.1 and cannot pass"
    );
}

#[test]
fn criterion_6_wigner_checks() {
    assert!(criterion_passes("6"));
}

#[test]
fn criterion_7_feasibility_anchors() {
    assert!(criterion_passes("7"));
}

#[test]
fn criterion_8_determinism() {
    let first = report::report_to_json(shared_report());
    let second_report = report::run_all_checks(1.0).expect("second run must succeed");
    let second = report::report_to_json(&second_report);
    let identical = first == second;
    println!("criterion 8: {}", if identical { "PASS" } else { "FAIL" });
    println!(
        "  [{}] consecutive report artifacts byte-identical — {} vs {} bytes",
        if identical { "pass" } else { "FAIL" },
        first.len(),
        second.len()
    );
    assert!(identical);
    assert!(criterion_passes("8"));
}
