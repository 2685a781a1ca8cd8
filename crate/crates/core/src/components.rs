//! Component specifications and the yearly cost/energy schedule builders.
//!
//! Schedules are undiscounted; levelization discounts them later. Energy
//! arguments are MWh (per day or per year, as named) and the returned
//! energy series are kWh.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finance::{present_value, FinancialAssumptions, UnitTag, YearSeries};

const KWH_PER_MWH: f64 = 1000.0;
const DAYS_PER_YEAR: f64 = 365.0;

/// Per-panel cost and technical parameters of a PV array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvArraySpec {
    /// USD per panel
    pub capital_per_unit: f64,
    /// USD per panel
    pub install_per_unit: f64,
    /// USD per panel per year
    pub om_per_unit_year: f64,
    /// W per panel
    pub rated_power_w: f64,
    pub efficiency: f64,
    /// m² per panel
    pub panel_area_m2: f64,
    /// Fractional output loss per year.
    pub degradation: f64,
}

impl PvArraySpec {
    /// Sharp ND-R250A5: 250 W, 15.3 % efficient, 1.64 m².
    pub fn sharp_nd250() -> Self {
        PvArraySpec {
            capital_per_unit: 120.0,
            install_per_unit: 108.0,
            om_per_unit_year: 6.0,
            rated_power_w: 250.0,
            efficiency: 0.153,
            panel_area_m2: 1.64,
            degradation: 0.005,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency < 1.0) {
            return Err(Error::Domain(format!(
                "panel efficiency must be in (0, 1), got {}",
                self.efficiency
            )));
        }
        if !(0.0..1.0).contains(&self.degradation) {
            return Err(Error::Domain(format!(
                "panel degradation must be in [0, 1), got {}",
                self.degradation
            )));
        }
        if !(self.panel_area_m2 > 0.0) {
            return Err(Error::Domain("panel area must be positive".into()));
        }
        if !(self.rated_power_w > 0.0) {
            return Err(Error::Domain("rated power must be positive".into()));
        }
        for (name, v) in [
            ("capital", self.capital_per_unit),
            ("installation", self.install_per_unit),
            ("O&M", self.om_per_unit_year),
        ] {
            if !(v >= 0.0) {
                return Err(Error::Domain(format!("{name} cost must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Ratio of the rated power to `efficiency * area * 1000 W/m²`.
    pub fn nameplate_ratio(&self) -> f64 {
        self.rated_power_w / (self.efficiency * self.panel_area_m2 * 1000.0)
    }

    /// Up-front cost of one panel (capital plus installation).
    pub fn upfront_per_unit(&self) -> f64 {
        self.capital_per_unit + self.install_per_unit
    }
}

/// Storage technology parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageSpec {
    /// USD per kWh of capacity, all-in (no separate installation line).
    pub capital_per_kwh: f64,
    /// USD per kWh of capacity per year.
    pub om_per_kwh_year: f64,
    pub power_rating_mw: f64,
    pub energy_capacity_mwh: f64,
    pub round_trip_efficiency: f64,
    /// Fractional throughput loss per year.
    pub degradation: f64,
    pub lifetime_years: u32,
}

impl StorageSpec {
    fn preset(capital: f64, om: f64, efficiency: f64, lifetime: u32) -> Self {
        StorageSpec {
            capital_per_kwh: capital,
            om_per_kwh_year: om,
            power_rating_mw: 2.0,
            energy_capacity_mwh: 4.0,
            round_trip_efficiency: efficiency,
            degradation: 0.01,
            lifetime_years: lifetime,
        }
    }

    pub fn vrb_lower() -> Self {
        Self::preset(760.0, 100.0, 0.7, 20)
    }

    pub fn vrb_upper() -> Self {
        Self::preset(1600.0, 140.0, 0.7, 20)
    }

    pub fn liion_lower() -> Self {
        Self::preset(715.0, 80.0, 0.9, 15)
    }

    pub fn liion_upper() -> Self {
        Self::preset(1640.0, 95.0, 0.9, 15)
    }

    pub fn with_capacity_mwh(mut self, capacity: f64) -> Self {
        self.energy_capacity_mwh = capacity;
        self
    }

    pub fn capacity_kwh(&self) -> f64 {
        self.energy_capacity_mwh * KWH_PER_MWH
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.round_trip_efficiency > 0.0 && self.round_trip_efficiency <= 1.0) {
            return Err(Error::Domain(format!(
                "round-trip efficiency must be in (0, 1], got {}",
                self.round_trip_efficiency
            )));
        }
        if !(self.energy_capacity_mwh > 0.0) {
            return Err(Error::Domain("storage energy capacity must be positive".into()));
        }
        if !(self.power_rating_mw > 0.0) {
            return Err(Error::Domain("storage power rating must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.degradation) {
            return Err(Error::Domain(format!(
                "storage degradation must be in [0, 1), got {}",
                self.degradation
            )));
        }
        if !(self.capital_per_kwh >= 0.0 && self.om_per_kwh_year >= 0.0) {
            return Err(Error::Domain("storage costs must be non-negative".into()));
        }
        if self.lifetime_years == 0 {
            return Err(Error::Domain("storage lifetime must be at least one year".into()));
        }
        Ok(())
    }
}

/// Names of the shipped component presets.
pub const PV_PRESETS: &[&str] = &["sharp-nd250"];
pub const STORAGE_PRESETS: &[&str] = &["vrb-lower", "vrb-upper", "liion-lower", "liion-upper"];

pub fn pv_preset(name: &str) -> Option<PvArraySpec> {
    match name {
        "sharp-nd250" => Some(PvArraySpec::sharp_nd250()),
        _ => None,
    }
}

pub fn storage_preset(name: &str) -> Option<StorageSpec> {
    match name {
        "vrb-lower" => Some(StorageSpec::vrb_lower()),
        "vrb-upper" => Some(StorageSpec::vrb_upper()),
        "liion-lower" => Some(StorageSpec::liion_lower()),
        "liion-upper" => Some(StorageSpec::liion_upper()),
        _ => None,
    }
}

/// Split of a PV array into the panels feeding the load directly and those
/// producing energy for storage. Counts are continuous.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelAllocation {
    pub n_direct: f64,
    pub n_surplus: f64,
}

impl PanelAllocation {
    pub fn total(&self) -> f64 {
        self.n_direct + self.n_surplus
    }
}

/// Up-front capital paid at t = 0 plus a recurring yearly cost stream.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSchedule {
    pub capital: f64,
    pub yearly: YearSeries,
}

impl CostSchedule {
    /// Undiscounted capital plus the present value of the recurring stream.
    pub fn present_value(&self, fin: &FinancialAssumptions) -> Result<f64> {
        Ok(self.capital + present_value(&self.yearly, fin)?)
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

/// Storage capital `capital_per_kwh * capacity` and yearly O&M
/// `om_per_kwh_year * capacity`.
pub fn ess_cost_schedule(spec: &StorageSpec, fin: &FinancialAssumptions) -> Result<CostSchedule> {
    fin.validate()?;
    non_negative("storage capacity", spec.energy_capacity_mwh)?;
    let kwh = spec.capacity_kwh();
    Ok(CostSchedule {
        capital: spec.capital_per_kwh * kwh,
        yearly: YearSeries::constant(spec.om_per_kwh_year * kwh, fin, UnitTag::Money)?,
    })
}

/// Energy delivered by storage: `eta * daily_surplus * 365 * (1 - D)^t`, kWh.
pub fn ess_energy_schedule(
    daily_surplus_mwh: f64,
    spec: &StorageSpec,
    fin: &FinancialAssumptions,
) -> Result<YearSeries> {
    fin.validate()?;
    non_negative("daily surplus", daily_surplus_mwh)?;
    let year0 = spec.round_trip_efficiency * daily_surplus_mwh * DAYS_PER_YEAR * KWH_PER_MWH;
    YearSeries::from_fn(fin, UnitTag::Energy, |t| {
        year0 * (1.0 - spec.degradation).powi(t as i32)
    })
}

/// Energy charged into storage before round-trip losses, kWh.
pub fn ess_input_energy_schedule(
    daily_surplus_mwh: f64,
    spec: &StorageSpec,
    fin: &FinancialAssumptions,
) -> Result<YearSeries> {
    fin.validate()?;
    non_negative("daily surplus", daily_surplus_mwh)?;
    let year0 = daily_surplus_mwh * DAYS_PER_YEAR * KWH_PER_MWH;
    YearSeries::from_fn(fin, UnitTag::Energy, |t| {
        year0 * (1.0 - spec.degradation).powi(t as i32)
    })
}

/// Panel capital `(capital + install) * count` and yearly O&M
/// `om_per_unit_year * count`.
pub fn pv_cost_schedule(
    spec: &PvArraySpec,
    count: f64,
    fin: &FinancialAssumptions,
) -> Result<CostSchedule> {
    fin.validate()?;
    non_negative("panel count", count)?;
    Ok(CostSchedule {
        capital: spec.upfront_per_unit() * count,
        yearly: YearSeries::constant(spec.om_per_unit_year * count, fin, UnitTag::Money)?,
    })
}

/// PV energy consumed directly: `daily_direct * 365 * (1 - D_pv)^t`, kWh.
pub fn pv_direct_energy_schedule(
    daily_direct_mwh: f64,
    spec: &PvArraySpec,
    fin: &FinancialAssumptions,
) -> Result<YearSeries> {
    fin.validate()?;
    non_negative("daily direct energy", daily_direct_mwh)?;
    let year0 = daily_direct_mwh * DAYS_PER_YEAR * KWH_PER_MWH;
    YearSeries::from_fn(fin, UnitTag::Energy, |t| {
        year0 * (1.0 - spec.degradation).powi(t as i32)
    })
}

/// Panels needed to produce the given yearly direct and surplus energies.
///
/// `n = E / (efficiency * panel_area * insolation)`, with `E` in MWh/yr and
/// the yearly insolation in Wh/m². Dividing by the panel area turns the
/// collector area into a panel count.
pub fn panel_counts(
    direct_energy_year_mwh: f64,
    surplus_energy_year_mwh: f64,
    insolation_year_wh_m2: f64,
    spec: &PvArraySpec,
) -> Result<PanelAllocation> {
    if !(insolation_year_wh_m2 > 0.0) {
        return Err(Error::Domain(format!(
            "yearly insolation must be positive, got {insolation_year_wh_m2}"
        )));
    }
    non_negative("direct energy", direct_energy_year_mwh)?;
    non_negative("surplus energy", surplus_energy_year_mwh)?;
    let wh_per_panel = spec.efficiency * spec.panel_area_m2 * insolation_year_wh_m2;
    let to_wh = 1e6;
    Ok(PanelAllocation {
        n_direct: direct_energy_year_mwh * to_wh / wh_per_panel,
        n_surplus: surplus_energy_year_mwh * to_wh / wh_per_panel,
    })
}
