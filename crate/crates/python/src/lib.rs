use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rnlsim::harness::{compare_report, estimate_correlation, run_experiment, CoincidenceCounts, RunConfig};
use rnlsim::rnl::{predict_with, Indistinguishability};
use rnlsim::{
    amplitude_oracle, classify, qm_correlation, qm_joint, schedule_from_geometry, series_preset,
    two_nonbefore_correlation, ExperimentGeometry, FrameVelocity, InterferometerTopology, ModelVariant, Pairing,
    TimingAssignment,
};

fn py_err(err: rnlsim::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Interferometer phases, given in degrees.
#[pyclass(name = "PhaseSettings", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPhaseSettings {
    inner: rnlsim::PhaseSettings,
}

#[pymethods]
impl PyPhaseSettings {
    #[new]
    fn new(phi11_deg: f64, phi21_deg: f64, phi22_deg: f64) -> PyResult<Self> {
        let inner = rnlsim::PhaseSettings::from_degrees(phi11_deg, phi21_deg, phi22_deg).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// 45, -45, 90 degrees.
    #[staticmethod]
    fn decisive() -> Self {
        Self {
            inner: rnlsim::PhaseSettings::decisive(),
        }
    }

    #[getter]
    fn degrees(&self) -> (f64, f64, f64) {
        let [a, b, c] = self.inner.degrees();
        (a, b, c)
    }

    fn __repr__(&self) -> String {
        let [a, b, c] = self.inner.degrees();
        format!("PhaseSettings({a}, {b}, {c})")
    }
}

fn timing_dict(t: &TimingAssignment) -> BTreeMap<&'static str, String> {
    BTreeMap::from([
        ("pairing", t.pairing.to_string()),
        ("series", t.series.map(|s| s.to_string()).unwrap_or_default()),
        ("bs21_before", t.bs21_before.to_string()),
    ])
}

/// Quantum table over (+,+), (+,-), (-,+), (-,-).
#[pyfunction(name = "qm_joint")]
fn py_qm_joint(settings: PyPhaseSettings) -> [f64; 4] {
    qm_joint(&settings.inner).entries()
}

#[pyfunction(name = "qm_correlation")]
fn py_qm_correlation(settings: PyPhaseSettings) -> f64 {
    qm_correlation(&settings.inner)
}

#[pyfunction(name = "amplitude_oracle")]
fn py_amplitude_oracle(settings: PyPhaseSettings) -> PyResult<[f64; 4]> {
    let d = amplitude_oracle(&settings.inner, &InterferometerTopology::calibrated()).map_err(py_err)?;
    Ok(d.entries())
}

#[pyfunction]
fn classify_series(n: u8) -> PyResult<BTreeMap<&'static str, String>> {
    let sched = schedule_from_geometry(&series_preset(n).map_err(py_err)?).map_err(py_err)?;
    Ok(timing_dict(&classify(&sched).map_err(py_err)?))
}

/// Classifies an explicit geometry (lengths in meters, velocities in c).
#[pyfunction]
#[pyo3(signature = (l11, l21, l22, m11_shift=0.0, beta11=0.0, beta21=0.0, beta22=0.0))]
fn classify_geometry(
    l11: f64,
    l21: f64,
    l22: f64,
    m11_shift: f64,
    beta11: f64,
    beta21: f64,
    beta22: f64,
) -> PyResult<BTreeMap<&'static str, String>> {
    let mut g = ExperimentGeometry::at_rest(l11, l21, l22, m11_shift);
    for (slot, beta) in g.frames.iter_mut().zip([beta11, beta21, beta22]) {
        *slot = FrameVelocity::new(beta).map_err(py_err)?;
    }
    let sched = schedule_from_geometry(&g).map_err(py_err)?;
    Ok(timing_dict(&classify(&sched).map_err(py_err)?))
}

/// Returns `(table, correlation)` for a pairing such as `"a11[21], a22"`.
#[pyfunction]
#[pyo3(signature = (settings, pairing, variant, condition1=true, condition2=true))]
fn predict(
    settings: PyPhaseSettings,
    pairing: &str,
    variant: &str,
    condition1: bool,
    condition2: bool,
) -> PyResult<([f64; 4], f64)> {
    let pairing: Pairing = pairing.parse().map_err(py_err)?;
    let variant: ModelVariant = variant.parse().map_err(py_err)?;
    let p = predict_with(
        &settings.inner,
        &TimingAssignment::from_pairing(pairing),
        variant,
        Indistinguishability { condition1, condition2 },
    );
    Ok((p.joint.entries(), p.correlation))
}

#[pyfunction(name = "two_nonbefore_correlation")]
fn py_two_nonbefore_correlation(settings: PyPhaseSettings, pairing: &str) -> PyResult<f64> {
    let pairing: Pairing = pairing.parse().map_err(py_err)?;
    two_nonbefore_correlation(&settings.inner, pairing).map_err(py_err)
}

/// `(e_hat, stderr, n)` from counts R++, R+-, R-+, R--.
#[pyfunction(name = "estimate_correlation")]
fn py_estimate_correlation(counts: [u64; 4]) -> PyResult<(f64, f64, u64)> {
    let e = estimate_correlation(&CoincidenceCounts::new(counts)).map_err(py_err)?;
    Ok((e.e_hat, e.stderr, e.n))
}

/// Runs a configuration (same `key = value` text as the CLI) and returns
/// the counts per variant.
#[pyfunction(name = "run_experiment")]
fn py_run_experiment(py: Python<'_>, config: &str) -> PyResult<BTreeMap<String, [u64; 4]>> {
    let cfg = RunConfig::from_file_str(config).map_err(py_err)?;
    let run = py.detach(|| run_experiment(&cfg)).map_err(py_err)?;
    Ok(run.runs.iter().map(|r| (r.variant.to_string(), r.counts.r)).collect())
}

/// Comparison report as `table`, `csv` or `json-lines` text.
#[pyfunction]
#[pyo3(signature = (config, format="table"))]
fn report(py: Python<'_>, config: &str, format: &str) -> PyResult<String> {
    let cfg = RunConfig::from_file_str(config).map_err(py_err)?;
    let report = py.detach(|| compare_report(&cfg)).map_err(py_err)?;
    match format {
        "table" => Ok(report.to_table()),
        "csv" => Ok(report.to_csv()),
        "json-lines" => Ok(report.to_json_lines()),
        other => Err(PyValueError::new_err(format!("unknown format `{other}`"))),
    }
}

#[pymodule]
fn pyrnlsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhaseSettings>()?;
    m.add_function(wrap_pyfunction!(py_qm_joint, m)?)?;
    m.add_function(wrap_pyfunction!(py_qm_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(py_amplitude_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(classify_series, m)?)?;
    m.add_function(wrap_pyfunction!(classify_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(py_two_nonbefore_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(py_estimate_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(py_run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
