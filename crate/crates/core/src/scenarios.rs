//! Case 1-3 evaluation, marginal LCOE between cases, discount-rate sweeps
//! and multi-year case studies.
//!
//! * Case 1: the array whose peak output just meets a flat load.
//! * Case 2: the same load with the array enlarged (1.5x in the shipped
//!   scenarios); the output above the load is surplus and is not counted.
//! * Case 3: Case 2 plus storage charged from the surplus.

use std::collections::BTreeMap;

use chrono::{NaiveTime, TimeDelta};
use serde::{Deserialize, Serialize};

use crate::components::{
    panel_counts, pv_cost_schedule, pv_direct_energy_schedule, PanelAllocation, PvArraySpec,
    StorageSpec,
};
use crate::dispatch::{
    clear_sky_profile, mean_daily, pv_power_from_irradiance, split_energy_daily, DispatchResult,
    PowerTimeSeries, SeriesKind, StorageLimits,
};
use crate::error::{Error, Result};
use crate::finance::{FinancialAssumptions, LevelizedMetric, StartConvention};
use crate::metrics::{lcod, lcoe_system, SystemCostEnergy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
}

/// One system configuration: an array of `panel_count` panels under
/// `pv_profile` (irradiance, W/m²) serving `load` (MW), with or without
/// storage.
#[derive(Debug, Clone)]
pub struct CaseDefinition {
    pub id: CaseId,
    pub panel_count: f64,
    pub storage: Option<StorageSpec>,
    pub load: PowerTimeSeries,
    pub pv_profile: PowerTimeSeries,
}

impl CaseDefinition {
    pub fn validate(&self) -> Result<()> {
        match (self.id, &self.storage) {
            (CaseId::Case3, None) => {
                return Err(Error::Contract("Case 3 needs a storage spec".into()))
            }
            (CaseId::Case1 | CaseId::Case2, Some(_)) => {
                return Err(Error::Contract(format!("{:?} must not have storage", self.id)))
            }
            _ => {}
        }
        if let Some(s) = &self.storage {
            s.validate()?;
        }
        if self.pv_profile.kind() != SeriesKind::Irradiance {
            return Err(Error::Contract("case PV profile must be irradiance (W/m²)".into()));
        }
        if !(self.panel_count >= 0.0) {
            return Err(Error::Domain(format!(
                "panel count must be >= 0, got {}",
                self.panel_count
            )));
        }
        Ok(())
    }
}

/// Discounted totals of one case. `total_cost` and `total_energy` are the
/// sums of the breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseTotals {
    pub id: CaseId,
    pub total_cost: f64,
    pub total_energy: f64,
    pub breakdown: SystemCostEnergy,
    /// Mean daily energy split, MWh.
    pub daily: DispatchResult,
    pub panels: PanelAllocation,
}

impl CaseTotals {
    pub fn lcoe(&self) -> Result<LevelizedMetric> {
        LevelizedMetric::new(format!("LCOE_{:?}", self.id), self.total_cost, self.total_energy)
    }
}

/// Run dispatch for the case, build schedules and discount them.
///
/// Panels are attributed to the direct and surplus paths in proportion to
/// the PV energy each path receives; curtailed output counts as surplus.
/// Only direct energy and storage discharge count towards the total.
pub fn evaluate_case(
    def: &CaseDefinition,
    pv_spec: &PvArraySpec,
    fin: &FinancialAssumptions,
) -> Result<CaseTotals> {
    def.validate()?;
    pv_spec.validate()?;
    fin.validate()?;
    let pv = pv_power_from_irradiance(&def.pv_profile, pv_spec, def.panel_count)?;
    let limits = StorageLimits::daily_cap(Some(
        def.storage.as_ref().map_or(0.0, |s| s.energy_capacity_mwh),
    ));
    let daily = mean_daily(&split_energy_daily(&pv, &def.load, &limits)?);
    let pv_total = daily.pv_total();
    let direct_share = if pv_total > 0.0 { daily.e_direct / pv_total } else { 1.0 };
    let n_direct = def.panel_count * direct_share;
    let panels = PanelAllocation {
        n_direct,
        n_surplus: def.panel_count - n_direct,
    };
    let breakdown = SystemCostEnergy::from_schedules(
        &pv_cost_schedule(pv_spec, panels.n_surplus, fin)?,
        &pv_cost_schedule(pv_spec, panels.n_direct, fin)?,
        &pv_direct_energy_schedule(daily.e_direct, pv_spec, fin)?,
        def.storage.as_ref().map(|s| (s, daily.e_surplus_stored)),
        fin,
    )?;
    Ok(CaseTotals {
        id: def.id,
        total_cost: breakdown.total_cost(),
        total_energy: breakdown.total_energy(),
        breakdown,
        daily,
        panels,
    })
}

/// `dC / dE` between two cases. The sign is kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalLcoe {
    pub delta_cost: f64,
    pub delta_energy: f64,
    pub value: f64,
}

pub fn marginal_lcoe(a: &CaseTotals, b: &CaseTotals) -> Result<MarginalLcoe> {
    let delta_cost = b.total_cost - a.total_cost;
    let delta_energy = b.total_energy - a.total_energy;
    if delta_energy == 0.0 || !delta_energy.is_finite() {
        return Err(Error::DegenerateDenominator(format!(
            "marginal LCOE {:?} -> {:?}: energy difference is {delta_energy}",
            a.id, b.id
        )));
    }
    Ok(MarginalLcoe {
        delta_cost,
        delta_energy,
        value: delta_cost / delta_energy,
    })
}

/// One representative clear-sky day, `peak * sin(...)` between sunrise and
/// sunset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClearSkyDay {
    pub peak_irradiance_w_m2: f64,
    pub sunrise: NaiveTime,
    pub sunset: NaiveTime,
    pub step_minutes: i64,
}

impl ClearSkyDay {
    pub fn profile(&self) -> Result<PowerTimeSeries> {
        clear_sky_profile(
            self.peak_irradiance_w_m2,
            self.sunrise,
            self.sunset,
            TimeDelta::minutes(self.step_minutes),
        )
    }
}

/// Inputs shared by the three cases of a Table 4/5 style study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseScenario {
    pub name: String,
    pub pv: PvArraySpec,
    pub storage: StorageSpec,
    pub case1_panels: f64,
    pub case2_multiplier: f64,
    pub day: ClearSkyDay,
    pub fin: FinancialAssumptions,
}

/// Discounted totals of Cases 1-3 at one discount rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResults {
    pub rate: f64,
    pub case1: CaseTotals,
    pub case2: CaseTotals,
    pub case3: CaseTotals,
}

/// One row of a rate sweep, USD/kWh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rate: f64,
    pub basecase: f64,
    pub marginal_1_2: f64,
    pub marginal_2_3: f64,
    pub marginal_1_3: f64,
    pub lcod: f64,
    pub lcoe_system: f64,
}

impl SweepRow {
    /// The six metric values in table column order.
    pub fn values(&self) -> [f64; 6] {
        [
            self.basecase,
            self.marginal_1_2,
            self.marginal_2_3,
            self.marginal_1_3,
            self.lcod,
            self.lcoe_system,
        ]
    }
}

/// Table column names, in [`SweepRow::values`] order.
pub const SWEEP_COLUMNS: [&str; 6] = ["LCOE_basecase", "1-2", "2-3", "1-3", "LCOD", "LCOE_system"];

impl CaseResults {
    pub fn row(&self) -> Result<SweepRow> {
        let eta = self.case3.breakdown.energy_ess / self.case3.breakdown.energy_surplus_in;
        Ok(SweepRow {
            rate: self.rate,
            basecase: self.case1.lcoe()?.value,
            marginal_1_2: marginal_lcoe(&self.case1, &self.case2)?.value,
            marginal_2_3: marginal_lcoe(&self.case2, &self.case3)?.value,
            marginal_1_3: marginal_lcoe(&self.case1, &self.case3)?.value,
            lcod: lcod_of(&self.case3, eta)?.value,
            lcoe_system: lcoe_system(&self.case3.breakdown)?.value,
        })
    }
}

fn lcod_of(case3: &CaseTotals, eta: f64) -> Result<LevelizedMetric> {
    if !eta.is_finite() {
        return Err(Error::DegenerateDenominator(
            "Case 3 stores no energy; LCOD is undefined".into(),
        ));
    }
    lcod(&case3.breakdown, eta)
}

impl CaseScenario {
    pub fn validate(&self) -> Result<()> {
        self.pv.validate()?;
        self.storage.validate()?;
        self.fin.validate()?;
        if !(self.case1_panels > 0.0) {
            return Err(Error::Domain("Case 1 needs a positive panel count".into()));
        }
        if !(self.case2_multiplier >= 1.0) {
            return Err(Error::Domain(format!(
                "Case 2 multiplier must be >= 1, got {}",
                self.case2_multiplier
            )));
        }
        Ok(())
    }

    /// Flat load at the Case-1 array's peak output, MW.
    pub fn load(&self, irradiance: &PowerTimeSeries) -> Result<PowerTimeSeries> {
        let peak = pv_power_from_irradiance(irradiance, &self.pv, self.case1_panels)?.max();
        irradiance.constant_like(peak, SeriesKind::Power)
    }

    pub fn definitions(&self) -> Result<[CaseDefinition; 3]> {
        self.validate()?;
        let irr = self.day.profile()?;
        let load = self.load(&irr)?;
        let n2 = self.case1_panels * self.case2_multiplier;
        let def = |id, panel_count, storage| CaseDefinition {
            id,
            panel_count,
            storage,
            load: load.clone(),
            pv_profile: irr.clone(),
        };
        Ok([
            def(CaseId::Case1, self.case1_panels, None),
            def(CaseId::Case2, n2, None),
            def(CaseId::Case3, n2, Some(self.storage.clone())),
        ])
    }

    /// Evaluate all cases at `rate`, keeping the horizon and convention.
    pub fn evaluate(&self, rate: f64) -> Result<CaseResults> {
        let fin = self.fin.with_rate(rate);
        fin.validate()?;
        let [d1, d2, d3] = self.definitions()?;
        Ok(CaseResults {
            rate,
            case1: evaluate_case(&d1, &self.pv, &fin)?,
            case2: evaluate_case(&d2, &self.pv, &fin)?,
            case3: evaluate_case(&d3, &self.pv, &fin)?,
        })
    }

    /// Same scenario with another storage spec, keeping its capacity.
    pub fn with_storage(&self, storage: StorageSpec) -> Self {
        let capacity = self.storage.energy_capacity_mwh;
        CaseScenario {
            storage: storage.with_capacity_mwh(capacity),
            ..self.clone()
        }
    }
}

/// One row per rate, in input order. A failing rate yields an error in its
/// slot and the remaining rates still run.
pub fn rate_sweep(scenario: &CaseScenario, rates: &[f64]) -> Vec<Result<SweepRow>> {
    rates
        .iter()
        .map(|&r| scenario.evaluate(r).and_then(|c| c.row()))
        .collect()
}

/// Targets the shipped Table 4/5 scenarios are calibrated against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationAnchors {
    /// Energy stored per day in Case 3, MWh.
    pub daily_surplus_mwh: f64,
    /// Case-1 LCOE at `rate`, USD/kWh.
    pub basecase_lcoe: f64,
    pub rate: f64,
    pub horizon_years: u32,
    pub start_convention: StartConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub peak_irradiance_w_m2: f64,
    pub case1_panels: f64,
}

/// Solve the clear-sky peak and the Case-1 panel count from the anchors.
///
/// The basecase LCOE depends only on the per-panel yield, so the peak is
/// found first by bisection. The Case 2 surplus is then linear in the array
/// size (the load follows the Case-1 peak), which fixes the panel count.
/// `template` supplies the PV spec, the day window and the multiplier.
pub fn calibrate_cases(anchors: &CalibrationAnchors, template: &CaseScenario) -> Result<Calibration> {
    let fin = FinancialAssumptions {
        discount_rate: anchors.rate,
        horizon_years: anchors.horizon_years,
        start_convention: anchors.start_convention,
    };
    fin.validate()?;
    if !(anchors.basecase_lcoe > 0.0 && anchors.daily_surplus_mwh > 0.0) {
        return Err(Error::Domain("calibration anchors must be positive".into()));
    }
    let unit = |peak: f64| -> Result<CaseScenario> {
        Ok(CaseScenario {
            case1_panels: 1.0,
            day: ClearSkyDay {
                peak_irradiance_w_m2: peak,
                ..template.day
            },
            fin,
            ..template.clone()
        })
    };
    let basecase = |peak: f64| -> Result<f64> {
        let [d1, _, _] = unit(peak)?.definitions()?;
        Ok(evaluate_case(&d1, &template.pv, &fin)?.lcoe()?.value)
    };

    // basecase LCOE falls as the peak rises
    let (mut lo, mut hi) = (1e-3, 1e4);
    if basecase(hi)? > anchors.basecase_lcoe || basecase(lo)? < anchors.basecase_lcoe {
        return Err(Error::Domain(format!(
            "basecase LCOE {} is out of reach for this PV spec",
            anchors.basecase_lcoe
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if basecase(mid)? > anchors.basecase_lcoe {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    let peak = 0.5 * (lo + hi);

    let [_, d2, _] = unit(peak)?.definitions()?;
    let per_panel = evaluate_case(&d2, &template.pv, &fin)?.daily.e_residual();
    if !(per_panel > 0.0) {
        return Err(Error::Domain(
            "Case 2 produces no surplus; the multiplier must exceed 1".into(),
        ));
    }
    Ok(Calibration {
        peak_irradiance_w_m2: peak,
        case1_panels: anchors.daily_surplus_mwh / per_panel,
    })
}

/// Brackets `(r_lo, r_hi)` of the sampled rates over which `a - b` changes
/// sign. A tie at a sampled rate is reported as the interval between its
/// neighbours.
pub fn crossover_interval(rates: &[f64], a: &[f64], b: &[f64]) -> Result<Vec<(f64, f64)>> {
    if rates.len() != a.len() || rates.len() != b.len() {
        return Err(Error::Contract("crossover inputs differ in length".into()));
    }
    if rates.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract("rates must be strictly increasing".into()));
    }
    let sign: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).signum() * f64::from(x != y)).collect();
    let last = rates.len().saturating_sub(1);
    let mut out = Vec::new();
    for i in 0..rates.len() {
        if sign[i] == 0.0 {
            out.push((rates[i.saturating_sub(1)], rates[(i + 1).min(last)]));
        } else if i < last && sign[i] * sign[i + 1] < 0.0 {
            out.push((rates[i], rates[i + 1]));
        }
    }
    out.dedup();
    Ok(out)
}

/// Yearly energy balance of a PV farm in one year of data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearEnergy {
    pub direct_mwh: f64,
    pub stored_mwh: f64,
    pub curtailed_mwh: f64,
    pub insolation_wh_m2: f64,
    pub days: usize,
    pub panels: PanelAllocation,
}

/// PV farm and storage used by [`multi_year_case_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudySpecs {
    pub pv: PvArraySpec,
    pub farm_rated_mw: f64,
    pub storage: StorageSpec,
}

impl CaseStudySpecs {
    pub fn farm_panels(&self) -> f64 {
        self.farm_rated_mw * 1e6 / self.pv.rated_power_w
    }
}

/// Metrics of one year of data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearMetrics {
    pub lcod: f64,
    pub lcoe_system: f64,
    pub energy: YearEnergy,
    pub breakdown: SystemCostEnergy,
}

/// Bring `load` onto the time base of `irradiance`: a single-day load is
/// repeated for every day, a load of the same length is re-stamped.
pub fn align_load(load: &PowerTimeSeries, irradiance: &PowerTimeSeries) -> Result<PowerTimeSeries> {
    if load.kind() != SeriesKind::Power {
        return Err(Error::Contract("load must be a power series (MW)".into()));
    }
    if load.step() != irradiance.step() {
        return Err(Error::Contract(format!(
            "load step {} differs from irradiance step {}",
            load.step(),
            irradiance.step()
        )));
    }
    let per_day = irradiance.steps_per_day()?;
    if load.len() == irradiance.len() {
        return PowerTimeSeries::new(
            irradiance.start(),
            irradiance.step(),
            load.samples().to_vec(),
            SeriesKind::Power,
        );
    }
    if load.len() == per_day && irradiance.len().is_multiple_of(per_day) {
        return load.tile_daily(irradiance.start(), irradiance.len() / per_day);
    }
    Err(Error::Contract(format!(
        "load has {} samples; expected one day ({per_day}) or {}",
        load.len(),
        irradiance.len()
    )))
}

/// Dispatch one year and size the direct and surplus arrays from the
/// resulting energies (curtailed output carries no panel cost).
pub fn year_energy(
    irradiance: &PowerTimeSeries,
    load: &PowerTimeSeries,
    specs: &CaseStudySpecs,
) -> Result<YearEnergy> {
    specs.pv.validate()?;
    specs.storage.validate()?;
    if !(specs.farm_rated_mw > 0.0) {
        return Err(Error::Domain("farm rating must be positive".into()));
    }
    let load = align_load(load, irradiance)?;
    let pv = pv_power_from_irradiance(irradiance, &specs.pv, specs.farm_panels())?;
    let days = split_energy_daily(
        &pv,
        &load,
        &StorageLimits::daily_cap(Some(specs.storage.energy_capacity_mwh)),
    )?;
    let total: DispatchResult = days.iter().copied().sum();
    let insolation = irradiance.integral();
    let panels = panel_counts(total.e_direct, total.e_surplus_stored, insolation, &specs.pv)?;
    Ok(YearEnergy {
        direct_mwh: total.e_direct,
        stored_mwh: total.e_surplus_stored,
        curtailed_mwh: total.e_curtailed,
        insolation_wh_m2: insolation,
        days: days.len(),
        panels,
    })
}

/// Levelize one year's energy balance.
pub fn year_metrics(
    energy: &YearEnergy,
    specs: &CaseStudySpecs,
    fin: &FinancialAssumptions,
) -> Result<YearMetrics> {
    let days = energy.days as f64;
    let breakdown = SystemCostEnergy::from_schedules(
        &pv_cost_schedule(&specs.pv, energy.panels.n_surplus, fin)?,
        &pv_cost_schedule(&specs.pv, energy.panels.n_direct, fin)?,
        &pv_direct_energy_schedule(energy.direct_mwh / days, &specs.pv, fin)?,
        Some((&specs.storage, energy.stored_mwh / days)),
        fin,
    )?;
    Ok(YearMetrics {
        lcod: lcod(&breakdown, specs.storage.round_trip_efficiency)?.value,
        lcoe_system: lcoe_system(&breakdown)?.value,
        energy: *energy,
        breakdown,
    })
}

/// Per-year LCOD and system LCOE. Years whose irradiance integrates to zero
/// are skipped with a warning.
pub fn multi_year_case_study(
    irradiance_by_year: &BTreeMap<i32, PowerTimeSeries>,
    load: &PowerTimeSeries,
    specs: &CaseStudySpecs,
    fin: &FinancialAssumptions,
) -> Result<BTreeMap<i32, YearMetrics>> {
    if irradiance_by_year.is_empty() {
        return Err(Error::Contract("case study needs at least one year".into()));
    }
    let mut out = BTreeMap::new();
    for (&year, irr) in irradiance_by_year {
        if !(irr.integral() > 0.0) {
            log::warn!("year {year}: no irradiance, skipped");
            continue;
        }
        let energy = year_energy(irr, load, specs)?;
        out.insert(year, year_metrics(&energy, specs, fin)?);
    }
    Ok(out)
}
