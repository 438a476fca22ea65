//! Phase-space maps: write Wigner-function CSV grids for a displaced
//! squeezed state and its orthogonalized partner, and verify the
//! normalization integral of the vacuum.
//!
//! Run with: cargo run --release -p phononforge --example wigner_map [out_dir]

use num_complex::Complex64;
use phononforge::channels;
use phononforge::fock::{self, GaussianSpec, PureState};
use phononforge::io;
use phononforge::wigner::{self, GridSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&out_dir)?;

    let spec = GaussianSpec {
        displacement: Complex64::from_polar(1.5, std::f64::consts::FRAC_PI_4),
        squeeze_magnitude: 0.5,
        squeeze_angle: 0.0,
    };
    // Corner grid points displace the state by |α|² ≈ 46 quanta, so the
    // basis must reach well past that for artifact-free edges.
    let dim = 128;
    let state = fock::gaussian_state(&spec, dim)?;
    let grid_spec = GridSpec::square(5.0, 0.1);

    let before = wigner::wigner_grid(&state, &grid_spec)?;
    let before_path = out_dir.join("displaced_squeezed.csv");
    std::fs::write(&before_path, io::grid_to_csv(&before))?;

    let outcome = channels::orthogonalize(&state, 0.1)?;
    let after = wigner::wigner_grid(&outcome.state, &grid_spec)?;
    let after_path = out_dir.join("orthogonalized.csv");
    std::fs::write(&after_path, io::grid_to_csv(&after))?;

    let min_before = before
        .values
        .iter()
        .flatten()
        .fold(f64::INFINITY, |m, &v| m.min(v));
    let min_after = after
        .values
        .iter()
        .flatten()
        .fold(f64::INFINITY, |m, &v| m.min(v));
    println!("wrote {}", before_path.display());
    println!(
        "  integral {:.9}, min value {:+.6e} (Gaussian: none negative)",
        wigner::grid_integral(&before),
        min_before
    );
    println!("wrote {}", after_path.display());
    println!(
        "  integral {:.9}, min value {:+.6e} (negativity after heralding)",
        wigner::grid_integral(&after),
        min_after
    );

    let vacuum = PureState::fock(70, 0)?;
    let vac_grid = wigner::wigner_grid(&vacuum, &GridSpec::square(7.0, 0.05))?;
    println!(
        "vacuum check: W(0,0) = {:.10} (1/pi = {:.10}), integral = {:.10}",
        wigner::wigner_point(&vacuum, 0.0, 0.0)?,
        1.0 / std::f64::consts::PI,
        wigner::grid_integral(&vac_grid)
    );
    Ok(())
}
