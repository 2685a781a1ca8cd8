//! LCOE of stored energy, LCOD, LCOS variants and system LCOE.
//!
//! All inputs are already-discounted totals (USD and kWh), so the functions
//! here are plain ratios. [`SystemCostEnergy::from_schedules`] builds the
//! totals from component schedules.

use serde::{Deserialize, Serialize};

use crate::components::{
    ess_cost_schedule, ess_energy_schedule, ess_input_energy_schedule, CostSchedule, StorageSpec,
};
use crate::error::{Error, Result};
use crate::finance::{present_value, FinancialAssumptions, LevelizedMetric, YearSeries};

/// Discounted costs and energies of a PV + storage system.
///
/// `cost_pv_surplus` is the cost of the panels whose output is charged into
/// storage, `energy_surplus_in` the discounted energy charged before
/// round-trip losses and `energy_ess` the discounted energy discharged.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SystemCostEnergy {
    pub cost_pv_surplus: f64,
    pub cost_pv_direct: f64,
    pub cost_ess: f64,
    pub energy_ess: f64,
    pub energy_pv_direct: f64,
    pub energy_surplus_in: f64,
}

impl SystemCostEnergy {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cost_pv_surplus", self.cost_pv_surplus),
            ("cost_pv_direct", self.cost_pv_direct),
            ("cost_ess", self.cost_ess),
            ("energy_ess", self.energy_ess),
            ("energy_pv_direct", self.energy_pv_direct),
            ("energy_surplus_in", self.energy_surplus_in),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Discount the PV and storage schedules of one system.
    ///
    /// `daily_stored_mwh` is the average energy charged per day; the storage
    /// streams degrade with the storage spec and `energy_ess` carries the
    /// round-trip efficiency. Without storage the ESS terms are zero.
    pub fn from_schedules(
        pv_surplus: &CostSchedule,
        pv_direct: &CostSchedule,
        direct_energy: &YearSeries,
        storage: Option<(&StorageSpec, f64)>,
        fin: &FinancialAssumptions,
    ) -> Result<Self> {
        let mut sce = SystemCostEnergy {
            cost_pv_surplus: pv_surplus.present_value(fin)?,
            cost_pv_direct: pv_direct.present_value(fin)?,
            energy_pv_direct: present_value(direct_energy, fin)?,
            ..Default::default()
        };
        if let Some((spec, daily_stored_mwh)) = storage {
            sce.cost_ess = ess_cost_schedule(spec, fin)?.present_value(fin)?;
            sce.energy_ess = present_value(&ess_energy_schedule(daily_stored_mwh, spec, fin)?, fin)?;
            sce.energy_surplus_in =
                present_value(&ess_input_energy_schedule(daily_stored_mwh, spec, fin)?, fin)?;
        }
        sce.validate()?;
        Ok(sce)
    }

    pub fn total_cost(&self) -> f64 {
        self.cost_pv_surplus + self.cost_pv_direct + self.cost_ess
    }

    pub fn total_energy(&self) -> f64 {
        self.energy_ess + self.energy_pv_direct
    }

    /// Levelized cost of storage from the breakdown alone, `C_ESS / E_ESS`.
    pub fn ess_ratio(&self) -> Result<LevelizedMetric> {
        LevelizedMetric::new("LCOS_wec", self.cost_ess, self.energy_ess)
    }

    /// Cost of the direct path, `C_pvdirect / E_pvdirect`.
    pub fn direct_lcoe(&self) -> Result<LevelizedMetric> {
        LevelizedMetric::new("LCOE_direct", self.cost_pv_direct, self.energy_pv_direct)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("efficiency must be in (0, 1], got {eta}")));
    }
    Ok(())
}

/// LCOE of the energy charged into storage, `C_pvsurplus / E_in`.
pub fn lcoe_energy_in(sce: &SystemCostEnergy) -> Result<LevelizedMetric> {
    sce.validate()?;
    LevelizedMetric::new("LCOE_in", sce.cost_pv_surplus, sce.energy_surplus_in)
}

/// Levelized cost of delivery: `(C_pvsurplus + C_ESS) / (eta * E_in)`.
///
/// Equals `lcoe_energy_in / eta + lcos_wec` when the breakdown comes from
/// one set of schedules.
pub fn lcod(sce: &SystemCostEnergy, eta: f64) -> Result<LevelizedMetric> {
    sce.validate()?;
    check_eta(eta)?;
    LevelizedMetric::new(
        "LCOD",
        sce.cost_pv_surplus + sce.cost_ess,
        eta * sce.energy_surplus_in,
    )
}

/// LCOS without the charging cost: `(capital + PrV(costs)) / PrV(energy)`.
pub fn lcos_wec(
    capital: f64,
    ess_yearly_costs: &YearSeries,
    ess_energy: &YearSeries,
    fin: &FinancialAssumptions,
) -> Result<LevelizedMetric> {
    if !(capital >= 0.0) || !capital.is_finite() {
        return Err(Error::Domain(format!("capital must be finite and >= 0, got {capital}")));
    }
    LevelizedMetric::new(
        "LCOS_wec",
        capital + present_value(ess_yearly_costs, fin)?,
        present_value(ess_energy, fin)?,
    )
}

/// [`lcos_wec`] of a storage spec charged with `daily_stored_mwh` per day.
pub fn lcos_wec_for_spec(
    spec: &StorageSpec,
    daily_stored_mwh: f64,
    fin: &FinancialAssumptions,
) -> Result<LevelizedMetric> {
    let costs = ess_cost_schedule(spec, fin)?;
    let energy = ess_energy_schedule(daily_stored_mwh, spec, fin)?;
    lcos_wec(costs.capital, &costs.yearly, &energy, fin)
}

/// Net LCOS, `lcoe - charging_price / efficiency`. Negative values are
/// allowed and flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetLcos {
    pub value: f64,
    pub negative: bool,
}

pub fn lcos_net(lcoe: f64, charging_price: f64, overall_efficiency: f64) -> Result<NetLcos> {
    check_eta(overall_efficiency)?;
    let value = lcoe - charging_price / overall_efficiency;
    Ok(NetLcos {
        value,
        negative: value < 0.0,
    })
}

/// `(C_pvsurplus + C_ESS + C_pvdirect) / (E_ESS + E_pvdirect)`.
pub fn lcoe_system(sce: &SystemCostEnergy) -> Result<LevelizedMetric> {
    sce.validate()?;
    LevelizedMetric::new("LCOE_system", sce.total_cost(), sce.total_energy())
}
