//! Heralded measurement operators.
//!
//! The general herald, conditioned on a single photon click, is
//!
//! Υ = (θ/2 · b e^{−iφ} + r · b† e^{iϕ} + μ) / √2,
//!
//! with the identity weight μ picking up a π phase for a v-port detection.
//! Setting μ = 0, θ/2 = r and φ = ϕ = ϑ+π/2 (ϑ the angle of the state's
//! mean amplitude) yields the quadrature orthogonalizer r·X_{ϑ+π/2}, which
//! annihilates the overlap with the input: ⟨ψ|Υ⊥ψ⟩ = 0 for any pure ψ.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::fock::{
    self, annihilation_op, creation_op, mean_amplitude, mean_angle, quadrature_op, MatrixOperator,
    PureState,
};

/// Conditional outcomes below this squared norm are treated as impossible.
pub const HERALDING_FLOOR: f64 = 1e-14;
/// θ/2 or r above this draws a weak-drive warning.
pub const WEAK_DRIVE_WARN: f64 = 0.5;
/// θ/2 or r above this is rejected.
pub const WEAK_DRIVE_MAX: f64 = 1.0;

/// Which detector port fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    H,
    V,
}

impl Detection {
    pub fn as_str(&self) -> &'static str {
        match self {
            Detection::H => "h",
            Detection::V => "v",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(Detection::H),
            "v" => Ok(Detection::V),
            other => Err(Error::InvalidParameter(format!(
                "detection must be \"h\" or \"v\", got {other:?}"
            ))),
        }
    }
}

/// Parameter bundle for the general herald operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldSpec {
    /// Effective beam-splitter parameter θ/2 ≥ 0.
    pub theta_half: f64,
    /// Effective squeezing parameter r ≥ 0.
    pub r: f64,
    /// Identity weight μ.
    pub mu: Complex64,
    /// Beam-splitter phase φ.
    pub phi: f64,
    /// Two-mode-squeezer phase ϕ.
    pub varphi: f64,
    pub detection: Detection,
}

impl HeraldSpec {
    /// Pure identity herald (μ = √2 gives the identity operator exactly).
    pub fn identity() -> Self {
        Self {
            theta_half: 0.0,
            r: 0.0,
            mu: Complex64::new(std::f64::consts::SQRT_2, 0.0),
            phi: 0.0,
            varphi: 0.0,
            detection: Detection::H,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("theta_half", self.theta_half), ("r", self.r)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0"
                )));
            }
            if v > WEAK_DRIVE_MAX {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} exceeds the weak-drive bound {WEAK_DRIVE_MAX}"
                )));
            }
        }
        if !self.mu.re.is_finite()
            || !self.mu.im.is_finite()
            || !self.phi.is_finite()
            || !self.varphi.is_finite()
        {
            return Err(Error::InvalidParameter(
                "herald spec fields must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Non-fatal warnings for parameters outside the weak-drive regime.
    pub fn weak_drive_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for (name, v) in [("theta_half", self.theta_half), ("r", self.r)] {
            if v > WEAK_DRIVE_WARN && v <= WEAK_DRIVE_MAX {
                warnings.push(format!(
                    "{name}={v} is above the weak-drive regime bound {WEAK_DRIVE_WARN}"
                ));
            }
        }
        warnings
    }

    /// Whether the operator contains a creation component (raises excitation).
    fn raises_excitation(&self) -> bool {
        self.r > 0.0
    }
}

/// Normalized conditional state together with its heralding probability.
///
/// The probability is the squared norm of the unnormalized conditional
/// state; for weak-drive herald specs it lies in [0, 1]. The idealized
/// displaced-ladder maps carry no physical scale, so there the value is a
/// relative weight that may exceed 1 on energetic states.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub state: PureState,
    pub probability: f64,
}

/// The herald operator (θ/2 · b e^{−iφ} + r · b† e^{iϕ} ± μ)/√2,
/// with the minus sign on μ for a v-port detection.
pub fn herald_op(dim: usize, spec: &HeraldSpec) -> Result<MatrixOperator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(
            "herald operator needs dimension >= 2".into(),
        ));
    }
    spec.validate()?;
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mu_signed = match spec.detection {
        Detection::H => spec.mu,
        Detection::V => -spec.mu,
    };
    let b = annihilation_op(dim)?.scaled(Complex64::from_polar(spec.theta_half, -spec.phi));
    let bdag = creation_op(dim)?.scaled(Complex64::from_polar(spec.r, spec.varphi));
    let id = MatrixOperator::identity(dim).scaled(mu_signed);
    Ok(b.add(&bdag)?.add(&id)?.scaled(inv_sqrt2))
}

/// The quadrature orthogonalizer r·X_{ϑ+π/2} for the given state.
///
/// ϑ is the angle of the state's mean amplitude; a degenerate mean uses the
/// conventional ϑ = 0, for which every quadrature angle orthogonalizes.
pub fn orthogonalizer(state: &PureState, r_scale: f64) -> Result<MatrixOperator> {
    if !r_scale.is_finite() || r_scale < 0.0 {
        return Err(Error::InvalidParameter(
            "r_scale must be finite and >= 0".into(),
        ));
    }
    let angle = mean_angle(state)?;
    let x = quadrature_op(state.dim(), angle.angle + FRAC_PI_2)?;
    Ok(x.scaled(Complex64::new(r_scale, 0.0)))
}

/// Apply a herald spec to a state and condition on the click.
pub fn apply_herald(state: &PureState, spec: &HeraldSpec) -> Result<HeraldOutcome> {
    state.check_normalized()?;
    spec.validate()?;
    if spec.raises_excitation() {
        fock::require_headroom(state)?;
    }
    let op = herald_op(state.dim(), spec)?;
    condition_on(&op, state)
}

/// Orthogonalize a state: build Υ⊥ from its own mean angle and condition.
pub fn orthogonalize(state: &PureState, r_scale: f64) -> Result<HeraldOutcome> {
    state.check_normalized()?;
    if r_scale > 0.0 {
        fock::require_headroom(state)?;
    }
    let op = orthogonalizer(state, r_scale)?;
    condition_on(&op, state)
}

/// Ladder variant of orthogonalization for a state with mean amplitude β.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    /// b − β
    Sub,
    /// b† − β*
    Add,
}

/// Apply the displaced ladder map (b − β) or (b† − β*) with β = ⟨b⟩.
///
/// Both annihilate the input's overlap with itself for any pure state.
/// Subtraction on an (effectively) coherent state yields a zero vector and
/// reports heralding as impossible.
pub fn displaced_ladder_orthogonalize(
    state: &PureState,
    which: LadderKind,
) -> Result<HeraldOutcome> {
    state.check_normalized()?;
    let beta = mean_amplitude(state)?;
    let dim = state.dim();
    let op = match which {
        LadderKind::Sub => {
            annihilation_op(dim)?.add(&MatrixOperator::identity(dim).scaled(-beta))?
        }
        LadderKind::Add => {
            fock::require_headroom(state)?;
            creation_op(dim)?.add(&MatrixOperator::identity(dim).scaled(-beta.conj()))?
        }
    };
    condition_on(&op, state)
}

/// Superpose identity and orthogonalization: μ/√2 + Υ⊥ built from the
/// state's own mean angle. The outcome is a qubit c₀|ψ⟩ + c₁|ψ⊥⟩.
pub fn qubit_synthesis(
    state: &PureState,
    weight_mu: Complex64,
    r_scale: f64,
) -> Result<HeraldOutcome> {
    state.check_normalized()?;
    let angle = mean_angle(state)?;
    let spec = HeraldSpec {
        theta_half: r_scale,
        r: r_scale,
        mu: weight_mu,
        phi: angle.angle + FRAC_PI_2,
        varphi: angle.angle + FRAC_PI_2,
        detection: Detection::H,
    };
    apply_herald(state, &spec)
}

fn condition_on(op: &MatrixOperator, state: &PureState) -> Result<HeraldOutcome> {
    let (raw, probability) = fock::apply(op, state)?;
    if probability < HERALDING_FLOOR {
        return Err(Error::HeraldingImpossible {
            probability,
            threshold: HERALDING_FLOOR,
        });
    }
    Ok(HeraldOutcome {
        state: raw.normalize()?,
        probability,
    })
}
