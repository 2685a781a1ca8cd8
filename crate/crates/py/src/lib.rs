//! Python bindings for `levelcost`.
//!
//! Money is in USD and energy in kWh, as in the Rust crate; the dispatch
//! helpers take MW samples and report MWh.

use chrono::{NaiveTime, TimeDelta};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use levelcost::components::{self, StorageSpec};
use levelcost::config::{self, ScenarioFile};
use levelcost::dispatch::{self, PowerTimeSeries, SeriesKind};
use levelcost::finance::{self, StartConvention, UnitTag, YearSeries};
use levelcost::metrics::{self, SystemCostEnergy};
use levelcost::scenarios::{self, CaseScenario};
use levelcost::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for levelcost::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn parse_convention(s: &str) -> PyResult<StartConvention> {
    match s {
        "include-year-zero" => Ok(StartConvention::IncludeYearZero),
        "exclude-year-zero" => Ok(StartConvention::ExcludeYearZero),
        _ => Err(PyValueError::new_err(format!(
            "start_convention must be \"include-year-zero\" or \"exclude-year-zero\", got {s:?}"
        ))),
    }
}

fn convention_name(c: StartConvention) -> &'static str {
    match c {
        StartConvention::IncludeYearZero => "include-year-zero",
        StartConvention::ExcludeYearZero => "exclude-year-zero",
    }
}

/// Discount rate, horizon and which years the sums cover.
#[pyclass(name = "FinancialAssumptions", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFin(finance::FinancialAssumptions);

#[pymethods]
impl PyFin {
    #[new]
    #[pyo3(signature = (discount_rate, horizon_years, start_convention="exclude-year-zero"))]
    fn new(discount_rate: f64, horizon_years: u32, start_convention: &str) -> PyResult<Self> {
        let fin = finance::FinancialAssumptions::new(discount_rate, horizon_years)
            .py()?
            .with_convention(parse_convention(start_convention)?);
        Ok(PyFin(fin))
    }

    #[getter]
    fn discount_rate(&self) -> f64 {
        self.0.discount_rate
    }

    #[getter]
    fn horizon_years(&self) -> u32 {
        self.0.horizon_years
    }

    #[getter]
    fn start_convention(&self) -> &'static str {
        convention_name(self.0.start_convention)
    }

    /// Length every yearly series must have (years 0..=n).
    fn series_len(&self) -> usize {
        self.0.series_len()
    }

    fn with_rate(&self, discount_rate: f64) -> PyResult<Self> {
        let fin = self.0.with_rate(discount_rate);
        fin.validate().py()?;
        Ok(PyFin(fin))
    }

    fn __repr__(&self) -> String {
        format!(
            "FinancialAssumptions(discount_rate={}, horizon_years={}, start_convention={:?})",
            self.0.discount_rate,
            self.0.horizon_years,
            self.start_convention()
        )
    }
}

/// A levelized ratio with the discounted numerator and denominator kept.
#[pyclass(name = "LevelizedMetric", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyMetric {
    name: String,
    pv_cost: f64,
    pv_energy: f64,
    value: f64,
}

impl From<finance::LevelizedMetric> for PyMetric {
    fn from(m: finance::LevelizedMetric) -> Self {
        PyMetric {
            name: m.name,
            pv_cost: m.pv_cost,
            pv_energy: m.pv_energy,
            value: m.value,
        }
    }
}

#[pymethods]
impl PyMetric {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!("LevelizedMetric({}={})", self.name, self.value)
    }
}

fn money(v: Vec<f64>) -> PyResult<YearSeries> {
    YearSeries::money(v).py()
}

fn energy(v: Vec<f64>) -> PyResult<YearSeries> {
    YearSeries::energy(v).py()
}

/// Present value of a yearly series (index = year).
#[pyfunction]
fn present_value(values: Vec<f64>, fin: &PyFin) -> PyResult<f64> {
    finance::present_value(&money(values)?, &fin.0).py()
}

/// Capital recovery factor r / (1 - (1 + r)^-n).
#[pyfunction]
fn annuity_factor(fin: &PyFin) -> PyResult<f64> {
    finance::annuity_factor(&fin.0).py()
}

#[pyfunction]
fn lcoe_discounting(costs: Vec<f64>, energies: Vec<f64>, fin: &PyFin) -> PyResult<PyMetric> {
    Ok(finance::lcoe_discounting(&money(costs)?, &energy(energies)?, &fin.0).py()?.into())
}

#[pyfunction]
fn lcoe_annuitizing(costs: Vec<f64>, energies: Vec<f64>, fin: &PyFin) -> PyResult<PyMetric> {
    Ok(finance::lcoe_annuitizing(&money(costs)?, &energy(energies)?, &fin.0).py()?.into())
}

#[pyfunction]
fn pv_module_lcoe(
    capital: f64,
    yearly_costs: Vec<f64>,
    rated_annual_energy: f64,
    degradation: f64,
    fin: &PyFin,
) -> PyResult<PyMetric> {
    let m = finance::pv_module_lcoe(
        capital,
        &money(yearly_costs)?,
        rated_annual_energy,
        degradation,
        &fin.0,
    )
    .py()?;
    Ok(m.into())
}

/// Discounted costs and energies of a PV + storage system.
#[pyclass(name = "SystemCostEnergy", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySce(SystemCostEnergy);

#[pymethods]
impl PySce {
    #[new]
    #[pyo3(signature = (cost_pv_surplus=0.0, cost_pv_direct=0.0, cost_ess=0.0, energy_ess=0.0, energy_pv_direct=0.0, energy_surplus_in=0.0))]
    fn new(
        cost_pv_surplus: f64,
        cost_pv_direct: f64,
        cost_ess: f64,
        energy_ess: f64,
        energy_pv_direct: f64,
        energy_surplus_in: f64,
    ) -> PyResult<Self> {
        let s = SystemCostEnergy {
            cost_pv_surplus,
            cost_pv_direct,
            cost_ess,
            energy_ess,
            energy_pv_direct,
            energy_surplus_in,
        };
        s.validate().py()?;
        Ok(PySce(s))
    }

    fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        let s = &self.0;
        d.set_item("cost_pv_surplus", s.cost_pv_surplus)?;
        d.set_item("cost_pv_direct", s.cost_pv_direct)?;
        d.set_item("cost_ess", s.cost_ess)?;
        d.set_item("energy_ess", s.energy_ess)?;
        d.set_item("energy_pv_direct", s.energy_pv_direct)?;
        d.set_item("energy_surplus_in", s.energy_surplus_in)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyfunction]
fn lcoe_energy_in(sce: &PySce) -> PyResult<PyMetric> {
    Ok(metrics::lcoe_energy_in(&sce.0).py()?.into())
}

#[pyfunction]
fn lcod(sce: &PySce, eta: f64) -> PyResult<PyMetric> {
    Ok(metrics::lcod(&sce.0, eta).py()?.into())
}

#[pyfunction]
fn lcoe_system(sce: &PySce) -> PyResult<PyMetric> {
    Ok(metrics::lcoe_system(&sce.0).py()?.into())
}

/// Storage LCOS without charging cost: (capital + PV(costs)) / PV(energy).
#[pyfunction]
fn lcos_wec(
    capital: f64,
    ess_yearly_costs: Vec<f64>,
    ess_energy: Vec<f64>,
    fin: &PyFin,
) -> PyResult<PyMetric> {
    let m = metrics::lcos_wec(capital, &money(ess_yearly_costs)?, &energy(ess_energy)?, &fin.0)
        .py()?;
    Ok(m.into())
}

/// `(value, negative)` of `lcoe - charging_price / efficiency`.
#[pyfunction]
fn lcos_net(lcoe: f64, charging_price: f64, overall_efficiency: f64) -> PyResult<(f64, bool)> {
    let n = metrics::lcos_net(lcoe, charging_price, overall_efficiency).py()?;
    Ok((n.value, n.negative))
}

/// Storage technology parameters; build one with `storage_preset`.
#[pyclass(name = "StorageSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStorage(StorageSpec);

#[pymethods]
impl PyStorage {
    #[getter]
    fn capital_per_kwh(&self) -> f64 {
        self.0.capital_per_kwh
    }

    #[getter]
    fn om_per_kwh_year(&self) -> f64 {
        self.0.om_per_kwh_year
    }

    #[getter]
    fn energy_capacity_mwh(&self) -> f64 {
        self.0.energy_capacity_mwh
    }

    #[getter]
    fn round_trip_efficiency(&self) -> f64 {
        self.0.round_trip_efficiency
    }

    #[getter]
    fn degradation(&self) -> f64 {
        self.0.degradation
    }

    #[getter]
    fn lifetime_years(&self) -> u32 {
        self.0.lifetime_years
    }

    fn with_capacity_mwh(&self, capacity: f64) -> PyResult<Self> {
        let s = self.0.clone().with_capacity_mwh(capacity);
        s.validate().py()?;
        Ok(PyStorage(s))
    }

    /// LCOS of this storage charged with `daily_stored_mwh` every day.
    fn lcos_wec(&self, daily_stored_mwh: f64, fin: &PyFin) -> PyResult<PyMetric> {
        Ok(metrics::lcos_wec_for_spec(&self.0, daily_stored_mwh, &fin.0).py()?.into())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyfunction]
fn storage_preset(name: &str) -> PyResult<PyStorage> {
    components::storage_preset(name).map(PyStorage).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown storage preset {name:?}; known: {}",
            components::STORAGE_PRESETS.join(", ")
        ))
    })
}

/// Names of the shipped presets and scenarios, by kind.
#[pyfunction]
fn list_presets() -> Vec<(String, Vec<String>)> {
    config::list_presets()
        .into_iter()
        .map(|(kind, names)| (kind.to_string(), names.into_iter().collect()))
        .collect()
}

/// Panels needed for yearly direct and surplus energy (MWh) at a yearly
/// insolation in Wh/m², for the given PV preset.
#[pyfunction]
#[pyo3(signature = (direct_mwh, surplus_mwh, insolation_wh_m2, pv="sharp-nd250"))]
fn panel_counts(
    direct_mwh: f64,
    surplus_mwh: f64,
    insolation_wh_m2: f64,
    pv: &str,
) -> PyResult<(f64, f64)> {
    let spec = config::resolve_pv_preset(pv).py()?;
    let p = components::panel_counts(direct_mwh, surplus_mwh, insolation_wh_m2, &spec).py()?;
    Ok((p.n_direct, p.n_surplus))
}

fn power_series(samples: Vec<f64>, step_minutes: i64) -> PyResult<PowerTimeSeries> {
    PowerTimeSeries::new(
        dispatch::reference_day().and_time(NaiveTime::MIN),
        TimeDelta::minutes(step_minutes),
        samples,
        SeriesKind::Power,
    )
    .py()
}

/// Split PV output (MW samples) against load into direct, stored and
/// curtailed energy (MWh). The series start at midnight; `cap_mwh_per_day`
/// limits what storage absorbs each day (`None` is unbounded).
#[pyfunction]
#[pyo3(signature = (pv_mw, load_mw, step_minutes=30, cap_mwh_per_day=None))]
fn split_energy<'py>(
    py: Python<'py>,
    pv_mw: Vec<f64>,
    load_mw: Vec<f64>,
    step_minutes: i64,
    cap_mwh_per_day: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let pv = power_series(pv_mw, step_minutes)?;
    let load = power_series(load_mw, step_minutes)?;
    let r = dispatch::split_energy(&pv, &load, cap_mwh_per_day).py()?;
    let d = PyDict::new(py);
    d.set_item("direct", r.e_direct)?;
    d.set_item("stored", r.e_surplus_stored)?;
    d.set_item("curtailed", r.e_curtailed)?;
    d.set_item("unserved", r.e_unserved)?;
    d.set_item("hours", r.period_hours)?;
    Ok(d)
}

/// One day of clear-sky irradiance, W/m², as a list of samples.
#[pyfunction]
#[pyo3(signature = (peak_w_m2, sunrise_hour=6.0, sunset_hour=18.0, step_minutes=30))]
fn clear_sky_profile(
    peak_w_m2: f64,
    sunrise_hour: f64,
    sunset_hour: f64,
    step_minutes: i64,
) -> PyResult<Vec<f64>> {
    let clock = |h: f64| {
        NaiveTime::from_num_seconds_from_midnight_opt((h * 3600.0).round() as u32, 0)
            .ok_or_else(|| PyValueError::new_err(format!("hour {h} is not a time of day")))
    };
    let s = dispatch::clear_sky_profile(
        peak_w_m2,
        clock(sunrise_hour)?,
        clock(sunset_hour)?,
        TimeDelta::minutes(step_minutes),
    )
    .py()?;
    Ok(s.samples().to_vec())
}

/// One row of a rate sweep.
#[pyclass(name = "SweepRow", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PySweepRow {
    rate: f64,
    basecase: f64,
    marginal_1_2: f64,
    marginal_2_3: f64,
    marginal_1_3: f64,
    lcod: f64,
    lcoe_system: f64,
}

impl From<scenarios::SweepRow> for PySweepRow {
    fn from(r: scenarios::SweepRow) -> Self {
        PySweepRow {
            rate: r.rate,
            basecase: r.basecase,
            marginal_1_2: r.marginal_1_2,
            marginal_2_3: r.marginal_2_3,
            marginal_1_3: r.marginal_1_3,
            lcod: r.lcod,
            lcoe_system: r.lcoe_system,
        }
    }
}

#[pymethods]
impl PySweepRow {
    fn __repr__(&self) -> String {
        format!(
            "SweepRow(rate={}, basecase={}, marginal_1_2={}, marginal_2_3={}, marginal_1_3={}, lcod={}, lcoe_system={})",
            self.rate,
            self.basecase,
            self.marginal_1_2,
            self.marginal_2_3,
            self.marginal_1_3,
            self.lcod,
            self.lcoe_system
        )
    }
}

/// Case 1-3 study loaded from a scenario file or a shipped scenario name.
#[pyclass(name = "CaseScenario", frozen, skip_from_py_object)]
struct PyCaseScenario(CaseScenario);

#[pymethods]
impl PyCaseScenario {
    /// `paper_bounds` sums discounted streams over t = 0..n.
    #[staticmethod]
    #[pyo3(signature = (name_or_path, paper_bounds=false))]
    fn load(name_or_path: &str, paper_bounds: bool) -> PyResult<Self> {
        match config::load_scenario(name_or_path).py()?.file {
            ScenarioFile::Cases(f) => Ok(PyCaseScenario(f.to_scenario(paper_bounds).py()?)),
            _ => Err(PyValueError::new_err(format!(
                "{name_or_path} is not a Case 1-3 scenario"
            ))),
        }
    }

    #[getter]
    fn name(&self) -> &str {
        &self.0.name
    }

    #[getter]
    fn fin(&self) -> PyFin {
        PyFin(self.0.fin)
    }

    #[getter]
    fn storage(&self) -> PyStorage {
        PyStorage(self.0.storage.clone())
    }

    /// Same scenario with another storage preset, keeping the capacity.
    fn with_storage(&self, storage: &PyStorage) -> Self {
        PyCaseScenario(self.0.with_storage(storage.0.clone()))
    }

    /// Rows for each rate. A failing rate raises.
    fn sweep(&self, rates: Vec<f64>) -> PyResult<Vec<PySweepRow>> {
        scenarios::rate_sweep(&self.0, &rates)
            .into_iter()
            .map(|r| r.map(PySweepRow::from).py())
            .collect()
    }

    /// Breakdown of Case 3 at `rate`.
    fn case3_breakdown(&self, rate: f64) -> PyResult<PySce> {
        Ok(PySce(self.0.evaluate(rate).py()?.case3.breakdown))
    }
}

/// Rate brackets over which `a - b` changes sign.
#[pyfunction]
fn crossover_interval(rates: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    scenarios::crossover_interval(&rates, &a, &b).py()
}

type CaseCell = (i32, f64, String, String, String, f64);

/// Per-year LCOD and system LCOE of a case-study scenario, as
/// `(year, rate, technology, bound, metric, value)` tuples.
#[pyfunction]
#[pyo3(signature = (name_or_path, paper_bounds=false))]
fn case_study(
    name_or_path: &str,
    paper_bounds: bool,
) -> PyResult<Vec<CaseCell>> {
    let loaded = config::load_scenario(name_or_path).py()?;
    let ScenarioFile::Casestudy(f) = &loaded.file else {
        return Err(PyValueError::new_err(format!("{name_or_path} is not a case study")));
    };
    let inputs = f.load(&loaded.base_dir, paper_bounds).py()?;
    let cells = levelcost::run::case_study_cells(&inputs).py()?;
    Ok(cells
        .into_iter()
        .map(|c| (c.year, c.rate, c.technology, c.bound, c.metric, c.value))
        .collect())
}

/// Constant yearly series of the right length for `fin`.
#[pyfunction]
fn constant_series(value: f64, fin: &PyFin) -> PyResult<Vec<f64>> {
    Ok(YearSeries::constant(value, &fin.0, UnitTag::Money).py()?.values().to_vec())
}

#[pymodule]
fn levelcost_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFin>()?;
    m.add_class::<PyMetric>()?;
    m.add_class::<PySce>()?;
    m.add_class::<PyStorage>()?;
    m.add_class::<PySweepRow>()?;
    m.add_class::<PyCaseScenario>()?;
    m.add_function(wrap_pyfunction!(present_value, m)?)?;
    m.add_function(wrap_pyfunction!(annuity_factor, m)?)?;
    m.add_function(wrap_pyfunction!(lcoe_discounting, m)?)?;
    m.add_function(wrap_pyfunction!(lcoe_annuitizing, m)?)?;
    m.add_function(wrap_pyfunction!(pv_module_lcoe, m)?)?;
    m.add_function(wrap_pyfunction!(lcoe_energy_in, m)?)?;
    m.add_function(wrap_pyfunction!(lcod, m)?)?;
    m.add_function(wrap_pyfunction!(lcoe_system, m)?)?;
    m.add_function(wrap_pyfunction!(lcos_wec, m)?)?;
    m.add_function(wrap_pyfunction!(lcos_net, m)?)?;
    m.add_function(wrap_pyfunction!(storage_preset, m)?)?;
    m.add_function(wrap_pyfunction!(list_presets, m)?)?;
    m.add_function(wrap_pyfunction!(panel_counts, m)?)?;
    m.add_function(wrap_pyfunction!(split_energy, m)?)?;
    m.add_function(wrap_pyfunction!(clear_sky_profile, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_interval, m)?)?;
    m.add_function(wrap_pyfunction!(case_study, m)?)?;
    m.add_function(wrap_pyfunction!(constant_series, m)?)?;
    Ok(())
}
