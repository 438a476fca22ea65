//! Arbitrary state transformation: steer |4⟩ into (|1⟩ + |4⟩)/√2 with
//! three heralded identity+subtraction pulses.
//!
//! Run with: cargo run --release -p phononforge --example transform_fock_state

use num_complex::Complex64;
use phononforge::fock::PureState;
use phononforge::transform::{self, StepNormalization};

fn main() -> phononforge::Result<()> {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let psi = PureState::fock(5, 4)?;
    let phi = PureState::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(inv, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(inv, 0.0),
    ])?;

    let coeffs = transform::solve_coefficients(&psi, &phi)?;
    println!("solved operator-polynomial coefficients:");
    for (i, c) in coeffs.iter().enumerate() {
        println!("  C_{i} = {:+.9} {:+.9}i", c.re, c.im);
    }
    println!(
        "  C_0/C_3 = {:.9} (sqrt(24) = {:.9})",
        (coeffs[0] / coeffs[3]).re,
        24f64.sqrt()
    );

    let mut plan = transform::factor_plan(&coeffs, StepNormalization::UnitIdentity, 0)?;
    plan.predicted_probability = transform::predicted_success(&psi, &plan)?;
    println!(
        "factored into {} identity+subtraction steps (mu = 1):",
        plan.degree()
    );
    for (j, step) in plan.steps.iter().enumerate() {
        println!(
            "  step {}: nu = {:+.9} {:+.9}i",
            j + 1,
            step.nu.re,
            step.nu.im
        );
    }

    let trace = transform::execute_plan(&psi, &plan, Some(&phi))?;
    println!("execution:");
    for (j, step) in trace.per_step.iter().enumerate() {
        println!("  step {} probability {:.6e}", j + 1, step.probability);
    }
    println!(
        "  total probability (norm route)      {:.6e}",
        trace.total_probability
    );
    println!(
        "  total probability (closed formula)  {:.6e}",
        plan.predicted_probability
    );
    println!(
        "  final fidelity with target          {:.15}",
        trace.final_fidelity.unwrap()
    );

    let mut reversed = plan.clone();
    reversed.steps.reverse();
    let trace_rev = transform::execute_plan(&psi, &reversed, Some(&phi))?;
    println!(
        "  reversed-order total probability    {:.6e} (factors commute)",
        trace_rev.total_probability
    );
    Ok(())
}
