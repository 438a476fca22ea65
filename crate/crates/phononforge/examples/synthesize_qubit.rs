//! Build a qubit from an arbitrary pure state: apply μ/√2 + Υ⊥ so the
//! outcome is a controlled superposition of the input and an orthogonal
//! partner, sweeping the identity weight.
//!
//! Run with: cargo run --release -p phononforge --example synthesize_qubit

use num_complex::Complex64;
use phononforge::channels;
use phononforge::fock::{self, GaussianSpec};

fn main() -> phononforge::Result<()> {
    let spec = GaussianSpec {
        displacement: Complex64::from_polar(1.5, std::f64::consts::FRAC_PI_4),
        squeeze_magnitude: 0.5,
        squeeze_angle: 0.0,
    };
    let state = fock::gaussian_state(&spec, 64)?;
    let r = 0.01;

    println!("qubit synthesis on a displaced squeezed state, r = {r}");
    println!(
        "{:>10} {:>14} {:>12} {:>12}",
        "|mu|/r", "probability", "|c0|^2", "|c1|^2"
    );
    for ratio in [0.0, 0.5, 1.0, 2.0, 5.0, 100.0] {
        let mu = Complex64::from_polar(ratio * r, -std::f64::consts::FRAC_PI_2);
        let outcome = channels::qubit_synthesis(&state, mu, r)?;
        // c0 = <input|output>; the orthogonal weight is the remainder.
        let c0_sq = fock::overlap(&state, &outcome.state)?.norm_sqr();
        println!(
            "{ratio:>10.1} {:>14.6e} {:>12.6} {:>12.6}",
            outcome.probability,
            c0_sq,
            1.0 - c0_sq
        );
    }
    println!("|mu| = r gives the balanced qubit; large |mu| recovers the input state.");
    Ok(())
}
