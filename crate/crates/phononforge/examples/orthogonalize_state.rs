//! Orthogonalize a displaced squeezed state with the heralded quadrature
//! operator, and compare against the displaced-ladder alternatives.
//!
//! Run with: cargo run --release -p phononforge --example orthogonalize_state

use num_complex::Complex64;
use phononforge::channels::{self, LadderKind};
use phononforge::fock::{self, GaussianSpec};

fn main() -> phononforge::Result<()> {
    let spec = GaussianSpec {
        displacement: Complex64::from_polar(1.5, std::f64::consts::FRAC_PI_4),
        squeeze_magnitude: 0.5,
        squeeze_angle: 0.0,
    };
    let dim = 64;
    let state = fock::gaussian_state(&spec, dim)?;
    let mean = fock::mean_amplitude(&state)?;
    let angle = fock::mean_angle(&state)?;
    println!("input: displaced squeezed state, dim {dim}");
    println!(
        "  <b> = {:.6} + {:.6}i  (angle {:.6} rad)",
        mean.re, mean.im, angle.angle
    );

    let r = 0.1;
    let outcome = channels::orthogonalize(&state, r)?;
    let overlap = fock::overlap(&state, &outcome.state)?;
    println!("quadrature orthogonalizer at r = {r}:");
    println!("  heralding probability  {:.6e}", outcome.probability);
    println!("  |<input|output>|       {:.3e}", overlap.norm());

    // The same probability from the closed form r²⟨X²⟩.
    let x = fock::quadrature_op(dim, angle.angle + std::f64::consts::FRAC_PI_2)?;
    let x_sq = fock::expectation(&x.compose(&x)?, &state)?.re;
    println!("  closed form r^2<X^2>    {:.6e}", r * r * x_sq);

    println!("displaced-ladder variants:");
    for (name, kind) in [
        ("b - beta", LadderKind::Sub),
        ("b+ - beta*", LadderKind::Add),
    ] {
        let ladder = channels::displaced_ladder_orthogonalize(&state, kind)?;
        let residual = fock::overlap(&state, &ladder.state)?.norm();
        println!(
            "  {name:<11} weight {:.6e}, |overlap| {residual:.3e}",
            ladder.probability
        );
    }

    // Subtraction annihilates an exact coherent state.
    let coherent = fock::gaussian_state(&GaussianSpec::coherent(Complex64::new(0.8, 0.0)), 32)?;
    match channels::displaced_ladder_orthogonalize(&coherent, LadderKind::Sub) {
        Err(e) => println!("coherent-state subtraction: {e}"),
        Ok(_) => println!("coherent-state subtraction unexpectedly succeeded"),
    }
    Ok(())
}
