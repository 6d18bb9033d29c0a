//! Python bindings: gains, frequency-domain checks and config-driven runs.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use platoon_lateral::analysis::{attenuation_report, verdict as rust_verdict};
use platoon_lateral::config::load;
use platoon_lateral::control::{GainSet, OutputSelector};
use platoon_lateral::design;
use platoon_lateral::model::VehicleParams;
use platoon_lateral::polyfreq::{build_h_lfp_scalar, coefficient_condition};
use platoon_lateral::sim::{simulate, Strategy};

fn py_err(e: platoon_lateral::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lfp_gains(k_lp: f64, k_ld: f64) -> GainSet {
    GainSet::table3().with_learning(k_lp, k_ld)
}

fn parse_strategy(name: &str) -> PyResult<Strategy> {
    match name {
        "lfp-dt" => Ok(Strategy::LearnFromPredecessor),
        "ff-pt" => Ok(Strategy::FeedforwardPredecessor),
        other => Err(PyValueError::new_err(format!("unknown strategy {other:?}"))),
    }
}

/// Zero steady-state lateral error feedforward gain for the reference car.
#[pyfunction]
#[pyo3(signature = (speed = 10.0, k_theta = 0.96))]
fn kff_formula(speed: f64, k_theta: f64) -> f64 {
    design::kff_formula(&VehicleParams::lincoln_mkz(speed), k_theta)
}

/// `(a6, a4, a2, a0)` for scalar learning gains on the reference feedback.
#[pyfunction]
#[pyo3(signature = (k_lp = -0.04, k_ld = -0.3, speed = 10.0))]
fn coefficients(k_lp: f64, k_ld: f64, speed: f64) -> PyResult<(f64, f64, f64, f64)> {
    let c = coefficient_condition(&VehicleParams::lincoln_mkz(speed), &lfp_gains(k_lp, k_ld))
        .map_err(py_err)?;
    Ok((c.a6, c.a4, c.a2, c.a0))
}

/// `|H(j omega)|` of the lateral-output LFP transfer function.
#[pyfunction]
#[pyo3(signature = (omega, k_lp = -0.04, k_ld = -0.3, speed = 10.0))]
fn lfp_gain(omega: f64, k_lp: f64, k_ld: f64, speed: f64) -> PyResult<f64> {
    let h = build_h_lfp_scalar(&VehicleParams::lincoln_mkz(speed), &lfp_gains(k_lp, k_ld))
        .map_err(py_err)?;
    Ok(h.magnitude(omega))
}

/// Verdict label for the reference feedback with the given learning gains.
#[pyfunction]
#[pyo3(signature = (strategy = "lfp-dt", k_lp = -0.04, k_ld = -0.3, speed = 10.0))]
fn verdict(strategy: &str, k_lp: f64, k_ld: f64, speed: f64) -> PyResult<String> {
    let c = rust_verdict(
        &VehicleParams::lincoln_mkz(speed),
        &lfp_gains(k_lp, k_ld),
        parse_strategy(strategy)?,
        OutputSelector::Lateral,
    )
    .map_err(py_err)?;
    Ok(c.verdict.label().to_string())
}

/// Per-vehicle lateral error norms for a scenario file.
#[pyfunction]
fn simulate_norms(config: &str) -> PyResult<Vec<f64>> {
    let cfg = load(config.as_ref()).map_err(py_err)?;
    let traj = simulate(&cfg.scenario).map_err(py_err)?;
    Ok(attenuation_report(&traj, cfg.output)
        .map_err(py_err)?
        .norm_elat)
}

/// Certificate text for a scenario file.
#[pyfunction]
fn certificate(config: &str) -> PyResult<String> {
    let cfg = load(config.as_ref()).map_err(py_err)?;
    let sc = &cfg.scenario;
    let c = rust_verdict(&sc.params, &sc.gains, sc.strategy, cfg.output).map_err(py_err)?;
    Ok(c.render())
}

#[pymodule]
fn platoon_lateral_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(kff_formula, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(lfp_gain, m)?)?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_norms, m)?)?;
    m.add_function(wrap_pyfunction!(certificate, m)?)?;
    Ok(())
}
