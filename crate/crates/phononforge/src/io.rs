//! File formats: JSON for states, herald specs, plans, grids, experiment
//! parameters and reports, plus CSV for grids.
//!
//! Emission is hand-rolled with a fixed field order and reals printed with
//! 17 significant digits, which round-trips every f64 exactly and makes
//! output files byte-stable across runs. Complex numbers are [re, im]
//! pairs throughout. Parsing goes through serde_json.

use num_complex::Complex64;
use serde_json::Value;

use crate::channels::{Detection, HeraldOutcome, HeraldSpec};
use crate::error::{Error, Result};
use crate::feasibility::{Derivation, DetuningSign, ExperimentParams};
use crate::fock::PureState;
use crate::transform::{ExecutionTrace, FactorStep, TransformPlan};
use crate::wigner::PhaseSpaceGrid;

/// 17-significant-digit decimal form of a double.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_complex(z: Complex64) -> String {
    format!("[{}, {}]", fmt_real(z.re), fmt_real(z.im))
}

// ---------------------------------------------------------------------------
// Emitters
// ---------------------------------------------------------------------------

pub fn state_to_json(state: &PureState) -> String {
    let amps: Vec<String> = state.amps().iter().map(|z| fmt_complex(*z)).collect();
    format!(
        "{{\"dim\": {}, \"amps\": [{}]}}\n",
        state.dim(),
        amps.join(", ")
    )
}

pub fn herald_spec_to_json(spec: &HeraldSpec) -> String {
    format!(
        "{{\"theta_half\": {}, \"r\": {}, \"mu\": {}, \"phi\": {}, \"varphi\": {}, \"detection\": \"{}\"}}\n",
        fmt_real(spec.theta_half),
        fmt_real(spec.r),
        fmt_complex(spec.mu),
        fmt_real(spec.phi),
        fmt_real(spec.varphi),
        spec.detection.as_str()
    )
}

pub fn outcome_to_json(outcome: &HeraldOutcome) -> String {
    format!(
        "{{\"state\": {}, \"probability\": {}}}\n",
        state_to_json(&outcome.state).trim_end(),
        fmt_real(outcome.probability)
    )
}

pub fn plan_to_json(plan: &TransformPlan) -> String {
    let coeffs: Vec<String> = plan.coeffs.iter().map(|c| fmt_complex(*c)).collect();
    let steps: Vec<String> = plan
        .steps
        .iter()
        .map(|s| {
            format!(
                "{{\"mu\": {}, \"nu\": {}}}",
                fmt_complex(s.mu),
                fmt_complex(s.nu)
            )
        })
        .collect();
    format!(
        "{{\"coeffs\": [{}], \"steps\": [{}], \"scale\": {}, \"predicted_probability\": {}}}\n",
        coeffs.join(", "),
        steps.join(", "),
        fmt_complex(plan.scale),
        fmt_real(plan.predicted_probability)
    )
}

pub fn trace_to_json(trace: &ExecutionTrace) -> String {
    let steps: Vec<String> = trace
        .per_step
        .iter()
        .map(|s| {
            format!(
                "{{\"probability\": {}, \"state\": {}}}",
                fmt_real(s.probability),
                state_to_json(&s.state).trim_end()
            )
        })
        .collect();
    let fidelity = match trace.final_fidelity {
        Some(f) => format!(", \"final_fidelity\": {}", fmt_real(f)),
        None => String::new(),
    };
    format!(
        "{{\"per_step\": [{}], \"total_probability\": {}{}}}\n",
        steps.join(", "),
        fmt_real(trace.total_probability),
        fidelity
    )
}

/// Row-major CSV: header `x,p,w`, one line per grid point.
pub fn grid_to_csv(grid: &PhaseSpaceGrid) -> String {
    let xs = grid.xs();
    let ps = grid.ps();
    let mut out =
        String::with_capacity(grid.values.len() * grid.values.first().map_or(1, Vec::len) * 64);
    out.push_str("x,p,w\n");
    for (i, row) in grid.values.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            out.push_str(&fmt_real(xs[j]));
            out.push(',');
            out.push_str(&fmt_real(ps[i]));
            out.push(',');
            out.push_str(&fmt_real(*w));
            out.push('\n');
        }
    }
    out
}

pub fn grid_to_json(grid: &PhaseSpaceGrid) -> String {
    let rows: Vec<String> = grid
        .values
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|w| fmt_real(*w)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!(
        "{{\"x_min\": {}, \"x_max\": {}, \"p_min\": {}, \"p_max\": {}, \"step\": {}, \"values\": [{}]}}\n",
        fmt_real(grid.x_min),
        fmt_real(grid.x_max),
        fmt_real(grid.p_min),
        fmt_real(grid.p_max),
        fmt_real(grid.step),
        rows.join(", ")
    )
}

pub fn params_to_json(params: &ExperimentParams) -> String {
    format!(
        "{{\"wavelength\": {}, \"cavity_length\": {}, \"finesse\": {}, \"mech_freq\": {}, \
         \"eff_mass\": {}, \"quality\": {}, \"bath_temp\": {}, \"pulse_power\": {}, \
         \"pulse_periods\": {}, \"detuning_sign\": \"{}\", \"visibility\": {}, \"filter_kappa\": {}}}\n",
        fmt_real(params.wavelength),
        fmt_real(params.cavity_length),
        fmt_real(params.finesse),
        fmt_real(params.mech_freq),
        fmt_real(params.eff_mass),
        fmt_real(params.quality),
        fmt_real(params.bath_temp),
        fmt_real(params.pulse_power),
        fmt_real(params.pulse_periods),
        params.detuning_sign.as_str(),
        fmt_real(params.visibility),
        fmt_real(params.filter_kappa)
    )
}

pub fn derivation_to_json(derivation: &Derivation) -> String {
    let d = &derivation.derived;
    let warnings: Vec<String> = derivation
        .warnings
        .iter()
        .map(|w| format!("\"{}\"", w.replace('\\', "\\\\").replace('"', "\\\"")))
        .collect();
    format!(
        "{{\"kappa\": {}, \"fsr\": {}, \"x_zpf\": {}, \"g0\": {}, \"tau\": {}, \
         \"photon_number\": {}, \"alpha_sq\": {}, \"gain\": {}, \"theta_half\": {}, \"r\": {}, \
         \"beta\": {}, \"n_bar\": {}, \"xi\": {}, \"sideband_resolution\": {}, \"warnings\": [{}]}}\n",
        fmt_real(d.kappa),
        fmt_real(d.fsr),
        fmt_real(d.x_zpf),
        fmt_real(d.g0),
        fmt_real(d.tau),
        fmt_real(d.photon_number),
        fmt_real(d.alpha_sq),
        fmt_real(d.gain),
        fmt_real(d.theta_half),
        fmt_real(d.r),
        fmt_real(d.beta),
        fmt_real(d.n_bar),
        fmt_real(d.xi),
        fmt_real(d.sideband_resolution),
        warnings.join(", ")
    )
}

// ---------------------------------------------------------------------------
// Parsers
// ---------------------------------------------------------------------------

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("malformed JSON: {e}")))
}

fn field<'v>(obj: &'v Value, name: &str) -> Result<&'v Value> {
    obj.get(name)
        .ok_or_else(|| Error::InvalidParameter(format!("missing field {name:?}")))
}

fn as_real(value: &Value, name: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::InvalidParameter(format!("field {name:?} must be a number")))
}

fn real_field(obj: &Value, name: &str) -> Result<f64> {
    as_real(field(obj, name)?, name)
}

fn as_complex(value: &Value, name: &str) -> Result<Complex64> {
    let pair = value
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::InvalidParameter(format!("field {name:?} must be [re, im]")))?;
    Ok(Complex64::new(
        as_real(&pair[0], name)?,
        as_real(&pair[1], name)?,
    ))
}

pub fn state_from_json(text: &str) -> Result<PureState> {
    let value = parse_json(text)?;
    let dim = real_field(&value, "dim")? as usize;
    let amps_value = field(&value, "amps")?
        .as_array()
        .ok_or_else(|| Error::InvalidParameter("field \"amps\" must be an array".into()))?;
    if amps_value.len() != dim {
        return Err(Error::InvalidParameter(format!(
            "amps length {} does not match dim {dim}",
            amps_value.len()
        )));
    }
    let amps = amps_value
        .iter()
        .map(|v| as_complex(v, "amps"))
        .collect::<Result<Vec<_>>>()?;
    PureState::new(amps)
}

pub fn herald_spec_from_json(text: &str) -> Result<HeraldSpec> {
    let value = parse_json(text)?;
    let detection =
        Detection::parse(field(&value, "detection")?.as_str().ok_or_else(|| {
            Error::InvalidParameter("field \"detection\" must be a string".into())
        })?)?;
    let spec = HeraldSpec {
        theta_half: real_field(&value, "theta_half")?,
        r: real_field(&value, "r")?,
        mu: as_complex(field(&value, "mu")?, "mu")?,
        phi: real_field(&value, "phi")?,
        varphi: real_field(&value, "varphi")?,
        detection,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn plan_from_json(text: &str) -> Result<TransformPlan> {
    let value = parse_json(text)?;
    let coeffs = field(&value, "coeffs")?
        .as_array()
        .ok_or_else(|| Error::InvalidParameter("field \"coeffs\" must be an array".into()))?
        .iter()
        .map(|v| as_complex(v, "coeffs"))
        .collect::<Result<Vec<_>>>()?;
    let steps = field(&value, "steps")?
        .as_array()
        .ok_or_else(|| Error::InvalidParameter("field \"steps\" must be an array".into()))?
        .iter()
        .map(|v| {
            Ok(FactorStep {
                mu: as_complex(field(v, "mu")?, "mu")?,
                nu: as_complex(field(v, "nu")?, "nu")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let plan = TransformPlan {
        coeffs,
        steps,
        scale: as_complex(field(&value, "scale")?, "scale")?,
        predicted_probability: real_field(&value, "predicted_probability")?,
    };
    plan.verify()?;
    Ok(plan)
}

pub fn params_from_json(text: &str) -> Result<ExperimentParams> {
    let value = parse_json(text)?;
    let detuning_sign =
        DetuningSign::parse(field(&value, "detuning_sign")?.as_str().ok_or_else(|| {
            Error::InvalidParameter("field \"detuning_sign\" must be a string".into())
        })?)?;
    let params = ExperimentParams {
        wavelength: real_field(&value, "wavelength")?,
        cavity_length: real_field(&value, "cavity_length")?,
        finesse: real_field(&value, "finesse")?,
        mech_freq: real_field(&value, "mech_freq")?,
        eff_mass: real_field(&value, "eff_mass")?,
        quality: real_field(&value, "quality")?,
        bath_temp: real_field(&value, "bath_temp")?,
        pulse_power: real_field(&value, "pulse_power")?,
        pulse_periods: real_field(&value, "pulse_periods")?,
        detuning_sign,
        visibility: real_field(&value, "visibility")?,
        filter_kappa: real_field(&value, "filter_kappa")?,
    };
    params.validate()?;
    Ok(params)
}

pub fn grid_from_json(text: &str) -> Result<PhaseSpaceGrid> {
    let value = parse_json(text)?;
    let values = field(&value, "values")?
        .as_array()
        .ok_or_else(|| Error::InvalidParameter("field \"values\" must be an array".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| {
                    Error::InvalidParameter("grid rows must be arrays of numbers".into())
                })?
                .iter()
                .map(|v| as_real(v, "values"))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let grid = PhaseSpaceGrid {
        x_min: real_field(&value, "x_min")?,
        x_max: real_field(&value, "x_max")?,
        p_min: real_field(&value, "p_min")?,
        p_max: real_field(&value, "p_max")?,
        step: real_field(&value, "step")?,
        values,
    };
    if grid.values.len() != grid.ps().len()
        || grid.values.iter().any(|row| row.len() != grid.xs().len())
    {
        return Err(Error::InvalidParameter(
            "grid values do not match the axis sample counts".into(),
        ));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::StepNormalization;
    use num_complex::Complex64;

    #[test]
    fn real_formatting_round_trips_exactly() {
        for &x in &[
            0.0,
            1.0,
            -1.0,
            std::f64::consts::PI,
            1.0 / 3.0,
            1e-300,
            -2.2250738585072014e-308,
            9.007199254740993e15,
        ] {
            let text = fmt_real(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
    }

    #[test]
    fn state_round_trip_is_bitwise() {
        let state = PureState::new(vec![
            Complex64::new(1.0 / 3.0, -0.25),
            Complex64::new(0.6236, 1e-17),
            Complex64::new(-0.1, 0.0),
        ])
        .unwrap();
        let text = state_to_json(&state);
        let back = state_from_json(&text).unwrap();
        for n in 0..3 {
            assert_eq!(back.amp(n).re.to_bits(), state.amp(n).re.to_bits());
            assert_eq!(back.amp(n).im.to_bits(), state.amp(n).im.to_bits());
        }
    }

    #[test]
    fn state_schema_violations_rejected() {
        assert!(state_from_json("{\"dim\": 2, \"amps\": [[1, 0]]}").is_err());
        assert!(state_from_json("{\"amps\": [[1, 0]]}").is_err());
        assert!(state_from_json("not json").is_err());
        assert!(state_from_json("{\"dim\": 1, \"amps\": [[1]]}").is_err());
    }

    #[test]
    fn herald_spec_round_trip() {
        let spec = HeraldSpec {
            theta_half: 0.1,
            r: 0.07,
            mu: Complex64::new(0.02, -0.03),
            phi: 0.6,
            varphi: -1.2,
            detection: Detection::V,
        };
        let text = herald_spec_to_json(&spec);
        let back = herald_spec_from_json(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn plan_round_trip_preserves_verification() {
        let coeffs = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.25, -0.3),
        ];
        let plan =
            crate::transform::factor_plan(&coeffs, StepNormalization::UnitIdentity, 0).unwrap();
        let text = plan_to_json(&plan);
        let back = plan_from_json(&text).unwrap();
        assert_eq!(back.steps.len(), plan.steps.len());
        assert_eq!(back.scale.re.to_bits(), plan.scale.re.to_bits());
        assert!(back.verify().is_ok());
    }

    #[test]
    fn params_round_trip() {
        let params = ExperimentParams::reference();
        let text = params_to_json(&params);
        let back = params_from_json(&text).unwrap();
        assert_eq!(back, params);
    }

    #[test]
    fn grid_csv_layout() {
        let grid = PhaseSpaceGrid {
            x_min: -0.5,
            x_max: 0.5,
            p_min: 0.0,
            p_max: 0.5,
            step: 0.5,
            values: vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]],
        };
        let csv = grid_to_csv(&grid);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,p,w");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("-5.0000000000000000e-1,0.0000000000000000e0,"));
        assert!(lines[6].ends_with("6.0000000000000000e0"));
    }

    #[test]
    fn grid_json_round_trip_is_bitwise() {
        let state = PureState::fock(24, 1).unwrap();
        let grid =
            crate::wigner::wigner_grid(&state, &crate::wigner::GridSpec::square(1.5, 0.5))
                .unwrap();
        let text = grid_to_json(&grid);
        let back = grid_from_json(&text).unwrap();
        assert_eq!(back.step.to_bits(), grid.step.to_bits());
        for (row_a, row_b) in grid.values.iter().zip(&back.values) {
            for (a, b) in row_a.iter().zip(row_b) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn emission_is_deterministic() {
        let state = PureState::fock(4, 2).unwrap();
        assert_eq!(state_to_json(&state), state_to_json(&state));
        let derivation = crate::feasibility::derive(&ExperimentParams::reference()).unwrap();
        assert_eq!(
            derivation_to_json(&derivation),
            derivation_to_json(&derivation)
        );
    }
}
