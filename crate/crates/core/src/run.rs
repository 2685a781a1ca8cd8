//! Glue between loaded scenario files and report records.

use serde::Serialize;

use crate::config::{CaseStudyInputs, LevelizeInputs, LevelizeMethod};
use crate::error::Result;
use crate::finance::{lcoe_annuitizing, lcoe_discounting};
use crate::metrics::{lcoe_energy_in, lcoe_system, lcos_net, lcod};
use crate::report::{fingerprint, technology_and_bound, CaseStudyCell, MetricRecord};
use crate::scenarios::{marginal_lcoe, multi_year_case_study, CaseScenario, MarginalLcoe};

#[derive(Serialize)]
struct LevelizeFingerprint<'a> {
    fin: &'a crate::finance::FinancialAssumptions,
    costs: &'a [f64],
    energy: &'a [f64],
}

/// LCOE of the cost and energy series by each requested method, plus the
/// net LCOS reference when configured.
pub fn levelize_records(inputs: &LevelizeInputs) -> Result<Vec<MetricRecord>> {
    let fp = fingerprint(&LevelizeFingerprint {
        fin: &inputs.fin,
        costs: inputs.costs.values(),
        energy: inputs.energy.values(),
    })?;
    let rate = inputs.fin.discount_rate;
    let mut out = Vec::new();
    for m in &inputs.methods {
        let metric = match m {
            LevelizeMethod::Discounting => lcoe_discounting(&inputs.costs, &inputs.energy, &inputs.fin)?,
            LevelizeMethod::Annuitizing => lcoe_annuitizing(&inputs.costs, &inputs.energy, &inputs.fin)?,
        };
        out.push(MetricRecord::from_metric(&metric, &fp).with_rate(rate));
    }
    if let Some(net) = &inputs.net {
        let lcoe = lcoe_discounting(&inputs.costs, &inputs.energy, &inputs.fin)?.value;
        let n = lcos_net(lcoe, net.charging_price, net.efficiency)?;
        out.push(MetricRecord {
            name: "LCOS_net".into(),
            pv_cost: None,
            pv_energy: None,
            value: n.value,
            inputs_fingerprint: fp.clone(),
            rate: Some(rate),
            flag: n.negative.then(|| "negative".to_string()),
        });
    }
    Ok(out)
}

fn marginal_record(name: &str, m: MarginalLcoe, fp: &str, rate: f64) -> MetricRecord {
    MetricRecord {
        name: name.into(),
        pv_cost: Some(m.delta_cost),
        pv_energy: Some(m.delta_energy),
        value: m.value,
        inputs_fingerprint: fp.into(),
        rate: Some(rate),
        flag: (m.value < 0.0).then(|| "negative".to_string()),
    }
}

/// Every metric of the Case 1-3 study at one rate.
pub fn scenario_records(scenario: &CaseScenario, rate: f64) -> Result<Vec<MetricRecord>> {
    let fp = fingerprint(&(scenario, rate))?;
    let c = scenario.evaluate(rate)?;
    let b = &c.case3.breakdown;
    let eta = scenario.storage.round_trip_efficiency;
    let rec = |m: &crate::finance::LevelizedMetric| MetricRecord::from_metric(m, &fp).with_rate(rate);
    let mut basecase = c.case1.lcoe()?;
    basecase.name = "LCOE_basecase".into();
    Ok(vec![
        rec(&basecase),
        marginal_record("LCOE_marginal_1-2", marginal_lcoe(&c.case1, &c.case2)?, &fp, rate),
        marginal_record("LCOE_marginal_2-3", marginal_lcoe(&c.case2, &c.case3)?, &fp, rate),
        marginal_record("LCOE_marginal_1-3", marginal_lcoe(&c.case1, &c.case3)?, &fp, rate),
        rec(&lcoe_energy_in(b)?),
        rec(&b.ess_ratio()?),
        rec(&lcod(b, eta)?),
        rec(&lcoe_system(b)?),
    ])
}

/// Long-format LCOD and system LCOE for every year, technology and rate.
pub fn case_study_cells(inputs: &CaseStudyInputs) -> Result<Vec<CaseStudyCell>> {
    let mut cells = Vec::new();
    for (preset, spec, base_fin) in &inputs.technologies {
        let (technology, bound) = technology_and_bound(preset);
        let specs = inputs.specs(spec);
        for &rate in &inputs.rates {
            let fin = base_fin.with_rate(rate);
            let by_year = multi_year_case_study(&inputs.years, &inputs.load, &specs, &fin)?;
            for (year, m) in by_year {
                for (metric, value) in [("LCOD", m.lcod), ("LCOE_system", m.lcoe_system)] {
                    cells.push(CaseStudyCell {
                        year,
                        rate,
                        technology: technology.clone(),
                        bound: bound.clone(),
                        metric: metric.into(),
                        value,
                    });
                }
            }
        }
    }
    Ok(cells)
}
