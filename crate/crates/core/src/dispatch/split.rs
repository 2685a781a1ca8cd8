use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::series::{PowerTimeSeries, SeriesKind};
use crate::error::{Error, Result};

/// Energy flows of one period, MWh.
///
/// `e_direct + e_surplus_stored + e_curtailed` is the PV energy of the
/// period. `e_unserved` is load not met by PV; storage discharge is not
/// scheduled, so it is informational only.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DispatchResult {
    pub e_direct: f64,
    pub e_surplus_stored: f64,
    pub e_curtailed: f64,
    pub e_unserved: f64,
    pub period_hours: f64,
}

impl DispatchResult {
    pub fn pv_total(&self) -> f64 {
        self.e_direct + self.e_surplus_stored + self.e_curtailed
    }

    /// Residual PV above load, stored or not.
    pub fn e_residual(&self) -> f64 {
        self.e_surplus_stored + self.e_curtailed
    }
}

impl Add for DispatchResult {
    type Output = DispatchResult;

    fn add(self, o: DispatchResult) -> DispatchResult {
        DispatchResult {
            e_direct: self.e_direct + o.e_direct,
            e_surplus_stored: self.e_surplus_stored + o.e_surplus_stored,
            e_curtailed: self.e_curtailed + o.e_curtailed,
            e_unserved: self.e_unserved + o.e_unserved,
            period_hours: self.period_hours + o.period_hours,
        }
    }
}

impl std::iter::Sum for DispatchResult {
    fn sum<I: Iterator<Item = DispatchResult>>(iter: I) -> Self {
        iter.fold(DispatchResult::default(), Add::add)
    }
}

/// Limits on what storage can absorb.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StorageLimits {
    /// Energy that can be stored per calendar day, MWh. `None` is unbounded,
    /// `Some(0.0)` means no storage.
    pub daily_energy_cap_mwh: Option<f64>,
    /// Optional cap on charging power, MW. Off by default.
    pub charge_power_mw: Option<f64>,
}

impl StorageLimits {
    pub fn daily_cap(cap: Option<f64>) -> Self {
        StorageLimits {
            daily_energy_cap_mwh: cap,
            charge_power_mw: None,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("daily storage cap", self.daily_energy_cap_mwh),
            ("charge power limit", self.charge_power_mw),
        ] {
            if let Some(v) = v {
                if !(v >= 0.0) {
                    return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
                }
            }
        }
        Ok(())
    }
}

fn check_inputs(pv: &PowerTimeSeries, load: &PowerTimeSeries) -> Result<()> {
    if pv.kind() != SeriesKind::Power || load.kind() != SeriesKind::Power {
        return Err(Error::Contract("dispatch needs power series (MW)".into()));
    }
    if !pv.is_aligned(load) {
        return Err(Error::Contract(format!(
            "PV ({} x {} from {}) and load ({} x {} from {}) are not aligned",
            pv.len(),
            pv.step(),
            pv.start(),
            load.len(),
            load.step(),
            load.start()
        )));
    }
    pv.steps_per_day()?;
    Ok(())
}

/// Split PV output against load, one [`DispatchResult`] per calendar day
/// touched by the series.
///
/// Per step, `min(pv, load) * step` is direct. Any residual accrues to the
/// day's storage up to the daily cap (and the optional charge-power limit);
/// the rest is curtailed.
pub fn split_energy_daily(
    pv: &PowerTimeSeries,
    load: &PowerTimeSeries,
    limits: &StorageLimits,
) -> Result<Vec<DispatchResult>> {
    check_inputs(pv, load)?;
    limits.validate()?;
    let h = pv.step_hours();
    let mut days = Vec::new();
    let mut day = DispatchResult::default();
    let mut current_date = pv.start().date();
    for (k, (&p, &l)) in pv.samples().iter().zip(load.samples()).enumerate() {
        let date = pv.timestamp(k).date();
        if date != current_date {
            days.push(day);
            day = DispatchResult::default();
            current_date = date;
        }
        day.period_hours += h;
        day.e_direct += p.min(l) * h;
        day.e_unserved += (l - p).max(0.0) * h;
        let residual = (p - l).max(0.0) * h;
        if residual == 0.0 {
            continue;
        }
        let mut chargeable = residual;
        if let Some(mw) = limits.charge_power_mw {
            chargeable = chargeable.min(mw * h);
        }
        if let Some(cap) = limits.daily_energy_cap_mwh {
            chargeable = chargeable.min((cap - day.e_surplus_stored).max(0.0));
        }
        day.e_surplus_stored += chargeable;
        day.e_curtailed += residual - chargeable;
    }
    days.push(day);
    Ok(days)
}

/// Whole-span totals of [`split_energy_daily`] with a daily storage cap.
pub fn split_energy(
    pv: &PowerTimeSeries,
    load: &PowerTimeSeries,
    storage_cap_mwh_per_day: Option<f64>,
) -> Result<DispatchResult> {
    Ok(split_energy_daily(pv, load, &StorageLimits::daily_cap(storage_cap_mwh_per_day))?
        .into_iter()
        .sum())
}

/// Representative day: the mean of per-day results.
pub fn mean_daily(days: &[DispatchResult]) -> DispatchResult {
    if days.is_empty() {
        return DispatchResult::default();
    }
    let n = days.len() as f64;
    let total: DispatchResult = days.iter().copied().sum();
    DispatchResult {
        e_direct: total.e_direct / n,
        e_surplus_stored: total.e_surplus_stored / n,
        e_curtailed: total.e_curtailed / n,
        e_unserved: total.e_unserved / n,
        period_hours: total.period_hours / n,
    }
}
