//! Brute-force year-by-year cash-flow ledger used as an independent oracle.
//!
//! Nothing here calls the closed forms under test: every stream is rebuilt
//! from the component fields year by year and discounted with a running factor.

#![allow(dead_code)]

use levelcost::components::{PvArraySpec, StorageSpec};
use levelcost::finance::{FinancialAssumptions, StartConvention};

pub const DAYS: f64 = 365.0;
pub const KWH_PER_MWH: f64 = 1000.0;

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / b.abs().max(a.abs()).max(f64::MIN_POSITIVE)
}

/// One year of the ledger: the discount factor and the flows booked in it.
#[derive(Debug, Clone, Copy, Default)]
pub struct Entry {
    pub year: usize,
    pub factor: f64,
}

/// Years summed under the convention, with the running discount factor.
pub fn ledger(fin: &FinancialAssumptions) -> Vec<Entry> {
    let first = match fin.start_convention {
        StartConvention::IncludeYearZero => 0,
        StartConvention::ExcludeYearZero => 1,
    };
    let mut out = Vec::new();
    let mut factor = 1.0;
    for year in 0..=fin.horizon_years as usize {
        if year > 0 {
            factor /= 1.0 + fin.discount_rate;
        }
        if year >= first {
            out.push(Entry { year, factor });
        }
    }
    out
}

pub fn discount(values: &[f64], fin: &FinancialAssumptions) -> f64 {
    let mut total = 0.0;
    for e in ledger(fin) {
        total += values[e.year] * e.factor;
    }
    total
}

/// Stream `year0 * k^t` built by repeated multiplication.
pub fn geometric(year0: f64, k: f64, fin: &FinancialAssumptions) -> Vec<f64> {
    let mut v = Vec::with_capacity(fin.horizon_years as usize + 1);
    let mut x = year0;
    for _ in 0..=fin.horizon_years {
        v.push(x);
        x *= k;
    }
    v
}

/// Level annual payment that repays 1 over years 1..=n.
pub fn capital_recovery(fin: &FinancialAssumptions) -> f64 {
    let mut annuity = 0.0;
    let mut factor = 1.0;
    for _ in 1..=fin.horizon_years {
        factor /= 1.0 + fin.discount_rate;
        annuity += factor;
    }
    1.0 / annuity
}

pub fn lcoe_discounting(costs: &[f64], energy: &[f64], fin: &FinancialAssumptions) -> f64 {
    discount(costs, fin) / discount(energy, fin)
}

pub fn lcoe_annuitizing(costs: &[f64], energy: &[f64], fin: &FinancialAssumptions) -> f64 {
    let n = fin.horizon_years as usize;
    let mut sum = 0.0;
    for e in &energy[1..=n] {
        sum += e;
    }
    discount(costs, fin) * capital_recovery(fin) / (sum / n as f64)
}

pub fn pv_module_lcoe(
    capital: f64,
    om: &[f64],
    rated: f64,
    d: f64,
    fin: &FinancialAssumptions,
) -> f64 {
    (capital + discount(om, fin)) / discount(&geometric(rated, 1.0 - d, fin), fin)
}

/// Discounted totals of a PV + storage system, booked year by year.
#[derive(Debug, Clone, Copy, Default)]
pub struct SystemLedger {
    pub cost_pv_surplus: f64,
    pub cost_pv_direct: f64,
    pub cost_ess: f64,
    pub energy_ess: f64,
    pub energy_pv_direct: f64,
    pub energy_in: f64,
}

impl SystemLedger {
    pub fn lcoe_in(&self) -> f64 {
        self.cost_pv_surplus / self.energy_in
    }

    pub fn lcod(&self, eta: f64) -> f64 {
        (self.cost_pv_surplus + self.cost_ess) / (eta * self.energy_in)
    }

    pub fn lcos_wec(&self) -> f64 {
        self.cost_ess / self.energy_ess
    }

    pub fn lcoe_system(&self) -> f64 {
        (self.cost_pv_surplus + self.cost_pv_direct + self.cost_ess)
            / (self.energy_ess + self.energy_pv_direct)
    }
}

/// Book panels, storage and energies for `n_surplus` / `n_direct` panels
/// with the given mean daily direct and stored energy (MWh).
pub fn system_ledger(
    pv: &PvArraySpec,
    n_surplus: f64,
    n_direct: f64,
    daily_direct_mwh: f64,
    storage: Option<(&StorageSpec, f64)>,
    fin: &FinancialAssumptions,
) -> SystemLedger {
    let upfront = pv.capital_per_unit + pv.install_per_unit;
    let mut l = SystemLedger::default();
    for e in ledger(fin) {
        let t = e.year;
        l.cost_pv_surplus += pv.om_per_unit_year * n_surplus * e.factor;
        l.cost_pv_direct += pv.om_per_unit_year * n_direct * e.factor;
        let pv_fade = (1.0 - pv.degradation).powi(t as i32);
        l.energy_pv_direct += daily_direct_mwh * DAYS * KWH_PER_MWH * pv_fade * e.factor;
        if let Some((s, stored)) = storage {
            let kwh = s.energy_capacity_mwh * KWH_PER_MWH;
            l.cost_ess += s.om_per_kwh_year * kwh * e.factor;
            let fade = (1.0 - s.degradation).powi(t as i32);
            let charged = stored * DAYS * KWH_PER_MWH * fade * e.factor;
            l.energy_in += charged;
            l.energy_ess += s.round_trip_efficiency * charged;
        }
    }
    l.cost_pv_surplus += upfront * n_surplus;
    l.cost_pv_direct += upfront * n_direct;
    if let Some((s, _)) = storage {
        l.cost_ess += s.capital_per_kwh * s.energy_capacity_mwh * KWH_PER_MWH;
    }
    l
}
