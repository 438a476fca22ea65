//! End-to-end checks of the command-line interface: file schemas,
//! round-trips, exit codes, and byte-determinism of artifacts.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phononforge"))
}

struct Workspace {
    dir: PathBuf,
}

impl Workspace {
    fn new(tag: &str) -> Self {
        let dir =
            std::env::temp_dir().join(format!("phononforge-cli-{}-{tag}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Self { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

impl Drop for Workspace {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn run_ok(cmd: &mut Command) {
    let output = cmd.output().unwrap();
    assert!(
        output.status.success(),
        "command failed: stderr = {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

fn exit_code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

fn write_state_json(path: &Path, amps: &[(f64, f64)]) {
    let rendered: Vec<String> = amps
        .iter()
        .map(|(re, im)| format!("[{re}, {im}]"))
        .collect();
    std::fs::write(
        path,
        format!(
            "{{\"dim\": {}, \"amps\": [{}]}}",
            amps.len(),
            rendered.join(", ")
        ),
    )
    .unwrap();
}

#[test]
fn state_command_writes_valid_vacuum() {
    let ws = Workspace::new("state");
    let out = ws.path("vac.json");
    run_ok(
        bin()
            .args(["state", "--fock", "0", "--dim", "8"])
            .arg("--out")
            .arg(&out),
    );
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["dim"], 8);
    assert_eq!(parsed["amps"][0][0].as_f64().unwrap(), 1.0);
    assert_eq!(parsed["amps"][0][1].as_f64().unwrap(), 0.0);
    assert_eq!(parsed["amps"].as_array().unwrap().len(), 8);
}

#[test]
fn wigner_csv_normalization_oracle() {
    // Plain lattice sum of w·step², independent of the library integrator.
    let ws = Workspace::new("wigner");
    let vac = ws.path("vac.json");
    let csv = ws.path("w.csv");
    run_ok(
        bin()
            .args(["state", "--fock", "0", "--dim", "48"])
            .arg("--out")
            .arg(&vac),
    );
    run_ok(
        bin()
            .args(["wigner", "--bounds", "6", "--step", "0.05"])
            .arg("--input")
            .arg(&vac)
            .arg("--out")
            .arg(&csv),
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,p,w");
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), 3);
        sum += fields[2] * 0.05 * 0.05;
        count += 1;
    }
    assert_eq!(count, 241 * 241);
    assert!(
        (sum - 1.0).abs() < 1e-6,
        "sum deviates by {:+.3e}",
        sum - 1.0
    );
}

#[test]
fn transform_reproduces_worked_example_through_files() {
    let ws = Workspace::new("transform");
    let psi = ws.path("psi.json");
    let phi = ws.path("phi.json");
    let plan = ws.path("plan.json");
    let trace = ws.path("trace.json");
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    write_state_json(
        &psi,
        &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
    );
    write_state_json(
        &phi,
        &[(0.0, 0.0), (inv, 0.0), (0.0, 0.0), (0.0, 0.0), (inv, 0.0)],
    );
    run_ok(
        bin()
            .args(["transform", "--seed", "7"])
            .arg("--input")
            .arg(&psi)
            .arg("--target")
            .arg(&phi)
            .arg("--out")
            .arg(&plan)
            .arg("--trace")
            .arg(&trace),
    );
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&plan).unwrap()).unwrap();
    let coeffs = parsed["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 4);
    let c0 = coeffs[0][0].as_f64().unwrap();
    let c3 = coeffs[3][0].as_f64().unwrap();
    assert!((c0 / c3 - 24f64.sqrt()).abs() < 1e-10);
    assert!(coeffs[1][0].as_f64().unwrap().abs() < 1e-12);
    assert!(coeffs[2][0].as_f64().unwrap().abs() < 1e-12);

    let trace_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(trace_json["final_fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
}

#[test]
fn identical_requests_produce_identical_bytes() {
    let ws = Workspace::new("determinism");
    let psi = ws.path("psi.json");
    let phi = ws.path("phi.json");
    write_state_json(&psi, &[(0.5, 0.1), (-0.3, 0.2), (0.4, -0.4), (0.2, 0.45)]);
    let raw: Vec<(f64, f64)> = vec![(0.1, 0.0), (0.7, -0.1), (-0.2, 0.3), (0.5, 0.2)];
    let norm: f64 = raw
        .iter()
        .map(|(re, im)| re * re + im * im)
        .sum::<f64>()
        .sqrt();
    let normalized: Vec<(f64, f64)> = raw.iter().map(|(re, im)| (re / norm, im / norm)).collect();
    write_state_json(&phi, &normalized);
    // Normalize psi too.
    let raw: Vec<(f64, f64)> = vec![(0.5, 0.1), (-0.3, 0.2), (0.4, -0.4), (0.2, 0.45)];
    let norm: f64 = raw
        .iter()
        .map(|(re, im)| re * re + im * im)
        .sum::<f64>()
        .sqrt();
    let normalized: Vec<(f64, f64)> = raw.iter().map(|(re, im)| (re / norm, im / norm)).collect();
    write_state_json(&psi, &normalized);

    let plan_a = ws.path("plan_a.json");
    let plan_b = ws.path("plan_b.json");
    for plan in [&plan_a, &plan_b] {
        run_ok(
            bin()
                .args(["transform", "--seed", "11"])
                .arg("--input")
                .arg(&psi)
                .arg("--target")
                .arg(&phi)
                .arg("--out")
                .arg(plan),
        );
    }
    assert_eq!(
        std::fs::read(&plan_a).unwrap(),
        std::fs::read(&plan_b).unwrap(),
        "plan artifacts differ between identical runs"
    );

    let grid_a = ws.path("w_a.csv");
    let grid_b = ws.path("w_b.csv");
    let state = ws.path("coh.json");
    run_ok(
        bin()
            .args(["state", "--displacement", "0.8,-0.3", "--dim", "32"])
            .arg("--out")
            .arg(&state),
    );
    for grid in [&grid_a, &grid_b] {
        run_ok(
            bin()
                .args(["wigner", "--bounds", "2", "--step", "0.25"])
                .arg("--input")
                .arg(&state)
                .arg("--out")
                .arg(grid),
        );
    }
    assert_eq!(
        std::fs::read(&grid_a).unwrap(),
        std::fs::read(&grid_b).unwrap()
    );
}

#[test]
fn herald_command_applies_spec_file() {
    let ws = Workspace::new("herald");
    let state = ws.path("one.json");
    let spec = ws.path("spec.json");
    let out = ws.path("outcome.json");
    write_state_json(
        &state,
        &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
    );
    std::fs::write(
        &spec,
        "{\"theta_half\": 0.1, \"r\": 0.0, \"mu\": [0.0, 0.0], \"phi\": 0.0, \
         \"varphi\": 0.0, \"detection\": \"h\"}",
    )
    .unwrap();
    run_ok(
        bin()
            .arg("herald")
            .arg("--input")
            .arg(&state)
            .arg("--spec")
            .arg(&spec)
            .arg("--out")
            .arg(&out),
    );
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((parsed["probability"].as_f64().unwrap() - 0.005).abs() < 1e-15);
    assert_eq!(parsed["state"]["amps"][0][0].as_f64().unwrap(), 1.0);
}

#[test]
fn exit_codes_follow_error_classes() {
    let ws = Workspace::new("exitcodes");

    // Missing input file: I/O error.
    let code = exit_code(
        bin()
            .args(["orthogonalize", "--r", "0.1"])
            .arg("--input")
            .arg(ws.path("missing.json"))
            .arg("--out")
            .arg(ws.path("out.json")),
    );
    assert_eq!(code, 4);

    // Malformed JSON: validation error.
    let bad = ws.path("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let code = exit_code(
        bin()
            .args(["orthogonalize", "--r", "0.1"])
            .arg("--input")
            .arg(&bad)
            .arg("--out")
            .arg(ws.path("out.json")),
    );
    assert_eq!(code, 2);

    // Herald spec outside the weak-drive bound: validation error.
    let state = ws.path("one.json");
    write_state_json(&state, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
    let spec = ws.path("spec.json");
    std::fs::write(
        &spec,
        "{\"theta_half\": 1.5, \"r\": 0.0, \"mu\": [0.0, 0.0], \"phi\": 0.0, \
         \"varphi\": 0.0, \"detection\": \"h\"}",
    )
    .unwrap();
    let code = exit_code(
        bin()
            .arg("herald")
            .arg("--input")
            .arg(&state)
            .arg("--spec")
            .arg(&spec)
            .arg("--out")
            .arg(ws.path("out.json")),
    );
    assert_eq!(code, 2);

    // Subtraction-only herald on vacuum: numerical (heralding impossible).
    let vac = ws.path("vac.json");
    write_state_json(&vac, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
    let sub_spec = ws.path("sub.json");
    std::fs::write(
        &sub_spec,
        "{\"theta_half\": 0.1, \"r\": 0.0, \"mu\": [0.0, 0.0], \"phi\": 0.0, \
         \"varphi\": 0.0, \"detection\": \"h\"}",
    )
    .unwrap();
    let code = exit_code(
        bin()
            .arg("herald")
            .arg("--input")
            .arg(&vac)
            .arg("--spec")
            .arg(&sub_spec)
            .arg("--out")
            .arg(ws.path("out.json")),
    );
    assert_eq!(code, 3);

    // Unnormalized state: validation error.
    let unnorm = ws.path("unnorm.json");
    write_state_json(&unnorm, &[(0.5, 0.0), (0.0, 0.0)]);
    let code = exit_code(
        bin()
            .args(["orthogonalize", "--r", "0.1"])
            .arg("--input")
            .arg(&unnorm)
            .arg("--out")
            .arg(ws.path("out.json")),
    );
    assert_eq!(code, 2);
}

#[test]
fn feasibility_reference_table_and_report() {
    let ws = Workspace::new("feasibility");
    let out = ws.path("report.json");
    let output = bin()
        .arg("feasibility")
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("sideband resolution"));
    assert!(stdout.contains("informational"));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((parsed["sideband_resolution"].as_f64().unwrap() - 10.0).abs() < 1e-9);
    assert!(parsed["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn realization_check_emits_sweep_report() {
    let ws = Workspace::new("realization");
    let out = ws.path("sweep.json");
    run_ok(bin().arg("realization-check").arg("--out").arg(&out));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["epsilons"].as_array().unwrap().len(), 3);
    assert!((parsed["jc_slope"].as_f64().unwrap() - 2.0).abs() < 0.1);
    assert!((parsed["optomech_slope"].as_f64().unwrap() - 3.0).abs() < 0.1);
    assert!(parsed["v_port_residual"].as_f64().unwrap() < 5e-3);
}
