//! phononforge: heralded phonon-level quantum operations in a truncated
//! Fock space.
//!
//! The toolkit builds and applies measurement operators of the form
//! (θ/2 · b e^{−iφ} + r · b† e^{iϕ} + μ)/√2 — coherent superpositions of
//! quanta subtraction, addition, and identity conditioned on a single
//! photon click. Special cases orthogonalize any pure state (a quadrature
//! perpendicular to the state's mean-amplitude angle), synthesize qubits,
//! and, applied in sequence, transform a known state into an arbitrary
//! target. Exact composite-space oracles validate the operators against
//! their physical realizations, a Wigner module maps the results in phase
//! space, and a feasibility module reproduces the cavity-optomechanics
//! parameter chain of a concrete design point.
//!
//! ## Modules
//!
//! * [`fock`] — states, ladder/quadrature operators, Gaussian state
//!   generation, truncation hygiene.
//! * [`channels`] — herald operators: orthogonalizer, displaced-ladder
//!   variants, qubit synthesis.
//! * [`realizations`] — exact qubit⊗oscillator and two-polarization
//!   optomechanical oracles with first-order residual sweeps.
//! * [`transform`] — solve/factor/execute arbitrary state transformations.
//! * [`wigner`] — displaced-parity Wigner functions on grids.
//! * [`feasibility`] — derived experimental parameters and the filtering
//!   photon budget.
//! * [`report`] — the reproduction check battery behind `phononforge repro`.
//! * [`io`], [`cli`] — file schemas and the command-line front end.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p phononforge --example orthogonalize_state
//! cargo run --release -p phononforge --example synthesize_qubit
//! cargo run --release -p phononforge --example transform_fock_state
//! cargo run --release -p phononforge --example wigner_map
//! cargo run --release -p phononforge --example realization_residuals
//! cargo run --release -p phononforge --example feasibility_report
//! ```
//!
//! ## Conventions
//!
//! Quadratures are X_φ = (b e^{−iφ} + b† e^{iφ})/√2 (vacuum variance 1/2),
//! phase space maps through α = (x + ip)/√2, and Wigner functions are
//! normalized to ∫∫ W dx dp = 1 with the vacuum peaking at 1/π.

pub mod channels;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod fock;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod realizations;
pub mod report;
pub mod transform;
pub mod wigner;

pub use channels::{Detection, HeraldOutcome, HeraldSpec};
pub use error::{Error, Result};
pub use fock::{GaussianSpec, MatrixOperator, PureState};
pub use transform::{ExecutionTrace, TransformPlan};
pub use wigner::PhaseSpaceGrid;
