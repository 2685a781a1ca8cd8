//! Present-value and levelization arithmetic.
//!
//! Every metric in the crate is a ratio of two discounted streams. The
//! functions here own the discounting convention: which year index the
//! summation starts at, how the zero-rate annuity limit is taken, and how a
//! degenerate denominator is reported.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which year index a present-value summation starts at.
///
/// `ExcludeYearZero` sums `t = 1..=n` and is the default: capital is
/// modelled as an undiscounted lump outside the recurring streams.
/// `IncludeYearZero` sums `t = 0..=n`, with `values[0]` entering
/// undiscounted, and reproduces the literal bounds of the published tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartConvention {
    IncludeYearZero,
    #[default]
    ExcludeYearZero,
}

impl StartConvention {
    pub fn first_year(self) -> usize {
        match self {
            StartConvention::IncludeYearZero => 0,
            StartConvention::ExcludeYearZero => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinancialAssumptions {
    /// Real discount rate per year. May be negative but must exceed -1.
    pub discount_rate: f64,
    pub horizon_years: u32,
    #[serde(default)]
    pub start_convention: StartConvention,
}

impl FinancialAssumptions {
    pub fn new(discount_rate: f64, horizon_years: u32) -> Result<Self> {
        let fin = FinancialAssumptions {
            discount_rate,
            horizon_years,
            start_convention: StartConvention::default(),
        };
        fin.validate()?;
        Ok(fin)
    }

    pub fn with_convention(mut self, convention: StartConvention) -> Self {
        self.start_convention = convention;
        self
    }

    pub fn with_rate(mut self, discount_rate: f64) -> Self {
        self.discount_rate = discount_rate;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.discount_rate.is_finite() || self.discount_rate <= -1.0 {
            return Err(Error::Domain(format!(
                "discount rate must be finite and > -1, got {}",
                self.discount_rate
            )));
        }
        if self.horizon_years < 1 {
            return Err(Error::Domain("horizon must be at least one year".into()));
        }
        Ok(())
    }

    /// Number of entries a [`YearSeries`] must have for this horizon.
    pub fn series_len(&self) -> usize {
        self.horizon_years as usize + 1
    }

    /// `(1 + r)^-t`
    pub fn discount_factor(&self, year: usize) -> f64 {
        (1.0 + self.discount_rate).powi(-(year as i32))
    }

    /// Year indices summed by [`present_value`].
    pub fn years(&self) -> std::ops::RangeInclusive<usize> {
        self.start_convention.first_year()..=self.horizon_years as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitTag {
    Money,
    Energy,
}

/// Per-year values over a project horizon, indexed `t = 0..=n`.
///
/// Money is in US dollars, energy in kWh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearSeries {
    values: Vec<f64>,
    unit: UnitTag,
}

impl YearSeries {
    pub fn new(values: Vec<f64>, unit: UnitTag) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Contract("year series must not be empty".into()));
        }
        if let Some((t, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain(format!("year {t} value {v} is not finite")));
        }
        if unit == UnitTag::Energy {
            if let Some((t, v)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
                return Err(Error::Domain(format!(
                    "energy must be non-negative, year {t} is {v}"
                )));
            }
        }
        Ok(YearSeries { values, unit })
    }

    pub fn money(values: Vec<f64>) -> Result<Self> {
        Self::new(values, UnitTag::Money)
    }

    pub fn energy(values: Vec<f64>) -> Result<Self> {
        Self::new(values, UnitTag::Energy)
    }

    /// Series of `horizon_years + 1` entries built from `f(t)`.
    pub fn from_fn(
        fin: &FinancialAssumptions,
        unit: UnitTag,
        f: impl FnMut(usize) -> f64,
    ) -> Result<Self> {
        Self::new((0..fin.series_len()).map(f).collect(), unit)
    }

    pub fn constant(value: f64, fin: &FinancialAssumptions, unit: UnitTag) -> Result<Self> {
        Self::from_fn(fin, unit, |_| value)
    }

    pub fn zeros(fin: &FinancialAssumptions, unit: UnitTag) -> Self {
        YearSeries {
            values: vec![0.0; fin.series_len()],
            unit,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> UnitTag {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * k).collect(), self.unit)
    }

    fn check_horizon(&self, fin: &FinancialAssumptions) -> Result<()> {
        if self.values.len() != fin.series_len() {
            return Err(Error::Contract(format!(
                "series has {} entries, horizon of {} years needs {}",
                self.values.len(),
                fin.horizon_years,
                fin.series_len()
            )));
        }
        Ok(())
    }
}

/// A levelized cost with its discounted numerator and denominator kept for
/// auditing. `value == pv_cost / pv_energy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelizedMetric {
    pub name: String,
    /// USD
    pub pv_cost: f64,
    /// kWh
    pub pv_energy: f64,
    /// USD/kWh
    pub value: f64,
}

impl LevelizedMetric {
    pub fn new(name: impl Into<String>, pv_cost: f64, pv_energy: f64) -> Result<Self> {
        let name = name.into();
        if !(pv_energy > 0.0) || !pv_energy.is_finite() {
            return Err(Error::DegenerateDenominator(format!(
                "{name}: discounted energy is {pv_energy}"
            )));
        }
        Ok(LevelizedMetric {
            value: pv_cost / pv_energy,
            name,
            pv_cost,
            pv_energy,
        })
    }
}

/// `sum_t values[t] / (1 + r)^t` over the years selected by the start
/// convention.
pub fn present_value(series: &YearSeries, fin: &FinancialAssumptions) -> Result<f64> {
    fin.validate()?;
    series.check_horizon(fin)?;
    Ok(fin
        .years()
        .map(|t| series.values[t] * fin.discount_factor(t))
        .sum())
}

/// Capital recovery factor `r / (1 - (1 + r)^-n)`.
///
/// At `r = 0` this takes the analytic limit `1/n`. The denominator is
/// evaluated as `-expm1(-n ln(1 + r))`, which stays accurate for small `r`
/// where `1 - (1 + r)^-n` cancels.
pub fn annuity_factor(fin: &FinancialAssumptions) -> Result<f64> {
    fin.validate()?;
    let r = fin.discount_rate;
    let n = fin.horizon_years as f64;
    if r == 0.0 {
        return Ok(1.0 / n);
    }
    Ok(r / -(-n * r.ln_1p()).exp_m1())
}

fn check_pair(costs: &YearSeries, energies: &YearSeries) -> Result<()> {
    if costs.len() != energies.len() {
        return Err(Error::Contract(format!(
            "cost series has {} entries but energy series has {}",
            costs.len(),
            energies.len()
        )));
    }
    Ok(())
}

/// Discounting method: PrV(costs) / PrV(energies).
pub fn lcoe_discounting(
    costs: &YearSeries,
    energies: &YearSeries,
    fin: &FinancialAssumptions,
) -> Result<LevelizedMetric> {
    check_pair(costs, energies)?;
    LevelizedMetric::new(
        "LCOE_discounting",
        present_value(costs, fin)?,
        present_value(energies, fin)?,
    )
}

/// Annuitizing method: equivalent annual cost over the undiscounted average
/// output of years `1..=n`.
///
/// The retained numerator is the annual cost and the denominator the average
/// annual output, so `value` keeps its ratio invariant.
pub fn lcoe_annuitizing(
    costs: &YearSeries,
    energies: &YearSeries,
    fin: &FinancialAssumptions,
) -> Result<LevelizedMetric> {
    check_pair(costs, energies)?;
    let annual_cost = present_value(costs, fin)? * annuity_factor(fin)?;
    energies.check_horizon(fin)?;
    let n = fin.horizon_years as usize;
    let average = energies.values[1..=n].iter().sum::<f64>() / n as f64;
    LevelizedMetric::new("LCOE_annuitizing", annual_cost, average)
}

/// LCOE of a PV module with output degrading by `(1 - d)` per year.
///
/// `capital` is paid at t = 0 and enters undiscounted, outside both the
/// recurring-cost summation and the degradation product. The energy
/// denominator is `sum_t S (1 - d)^t / (1 + r)^t` over the convention's years.
pub fn pv_module_lcoe(
    capital: f64,
    yearly_costs: &YearSeries,
    rated_annual_energy: f64,
    degradation: f64,
    fin: &FinancialAssumptions,
) -> Result<LevelizedMetric> {
    if !(0.0..1.0).contains(&degradation) {
        return Err(Error::Domain(format!(
            "degradation must be in [0, 1), got {degradation}"
        )));
    }
    if !(rated_annual_energy >= 0.0) {
        return Err(Error::Domain(format!(
            "rated annual energy must be non-negative, got {rated_annual_energy}"
        )));
    }
    let energies = YearSeries::from_fn(fin, UnitTag::Energy, |t| {
        rated_annual_energy * (1.0 - degradation).powi(t as i32)
    })?;
    LevelizedMetric::new(
        "LCOE_pv_module",
        capital + present_value(yearly_costs, fin)?,
        present_value(&energies, fin)?,
    )
}
