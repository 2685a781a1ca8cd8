use chrono::NaiveTime;

use levelcost::components::*;
use levelcost::finance::*;
use levelcost::scenarios::*;
use levelcost::Error;

fn hm(h: u32) -> NaiveTime {
    NaiveTime::from_hms_opt(h, 0, 0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn scenario() -> CaseScenario {
    CaseScenario {
        name: "test".into(),
        pv: PvArraySpec::sharp_nd250(),
        storage: StorageSpec::vrb_lower().with_capacity_mwh(5.0),
        case1_panels: 20_000.0,
        case2_multiplier: 1.5,
        day: ClearSkyDay {
            peak_irradiance_w_m2: 800.0,
            sunrise: hm(6),
            sunset: hm(18),
            step_minutes: 30,
        },
        fin: FinancialAssumptions::new(0.08, 20)
            .unwrap()
            .with_convention(StartConvention::IncludeYearZero),
    }
}

#[test]
fn case1_is_all_direct() {
    let c = scenario().evaluate(0.08).unwrap();
    assert_eq!(c.case1.daily.e_residual(), 0.0);
    assert_eq!(c.case1.panels.n_surplus, 0.0);
    assert!(c.case2.daily.e_residual() > 0.0);
}

#[test]
fn case2_without_extra_panels_matches_case1() {
    let s = CaseScenario {
        case2_multiplier: 1.0,
        ..scenario()
    };
    let c = s.evaluate(0.05).unwrap();
    assert_eq!(c.case1.total_cost, c.case2.total_cost);
    assert_eq!(c.case1.total_energy, c.case2.total_energy);
}

#[test]
fn case3_minus_case2_is_storage() {
    let c = scenario().evaluate(0.08).unwrap();
    let b = c.case3.breakdown;
    assert!(rel(c.case3.total_cost - c.case2.total_cost, b.cost_ess) < 1e-12);
    assert!(rel(c.case3.total_energy - c.case2.total_energy, b.energy_ess) < 1e-12);
    let m = marginal_lcoe(&c.case2, &c.case3).unwrap().value;
    assert!(rel(m, b.cost_ess / b.energy_ess) < 1e-12);
}

#[test]
fn totals_equal_breakdown_sums() {
    let c = scenario().evaluate(0.1).unwrap();
    for t in [&c.case1, &c.case2, &c.case3] {
        let b = t.breakdown;
        assert!(rel(t.total_cost, b.cost_pv_direct + b.cost_pv_surplus + b.cost_ess) < 1e-12);
        assert!(rel(t.total_energy, b.energy_pv_direct + b.energy_ess) < 1e-12);
    }
}

#[test]
fn marginal_of_collinear_cases_is_lcoe() {
    let c = scenario().evaluate(0.08).unwrap();
    let mut b = c.case1.clone();
    b.total_cost *= 3.0;
    b.total_energy *= 3.0;
    let m = marginal_lcoe(&c.case1, &b).unwrap().value;
    assert!(rel(m, c.case1.lcoe().unwrap().value) < 1e-12);
    assert!(matches!(
        marginal_lcoe(&c.case1, &c.case1),
        Err(Error::DegenerateDenominator(_))
    ));
}

#[test]
fn marginal_chains_as_mediant() {
    let c = scenario().evaluate(0.08).unwrap();
    let row = c.row().unwrap();
    let (lo, hi) = (
        row.marginal_1_2.min(row.marginal_2_3),
        row.marginal_1_2.max(row.marginal_2_3),
    );
    assert!(lo <= row.marginal_1_3 && row.marginal_1_3 <= hi);
}

#[test]
fn sweep_keeps_order_and_isolates_errors() {
    let rows = rate_sweep(&scenario(), &[0.02, -1.5, 0.08]);
    assert_eq!(rows.len(), 3);
    assert!(matches!(rows[1], Err(Error::Domain(_))));
    assert_eq!(rows[0].as_ref().unwrap().rate, 0.02);
    assert_eq!(rows[2].as_ref().unwrap().rate, 0.08);
    let single = scenario().evaluate(0.08).unwrap().row().unwrap();
    assert_eq!(rows[2].as_ref().unwrap(), &single);
}

#[test]
fn calibration_hits_anchors() {
    let anchors = CalibrationAnchors {
        daily_surplus_mwh: 4.676,
        basecase_lcoe: 0.095,
        rate: 0.02,
        horizon_years: 20,
        start_convention: StartConvention::IncludeYearZero,
    };
    let cal = calibrate_cases(&anchors, &scenario()).unwrap();
    let mut s = scenario();
    s.case1_panels = cal.case1_panels;
    s.day.peak_irradiance_w_m2 = cal.peak_irradiance_w_m2;
    let c = s.evaluate(0.02).unwrap();
    assert!(rel(c.case1.lcoe().unwrap().value, 0.095) < 1e-9);
    assert!(rel(c.case3.daily.e_surplus_stored, 4.676) < 1e-9);
}

#[test]
fn crossover_brackets() {
    let r = [0.0, 0.02, 0.05, 0.08];
    let a = [1.0, 2.0, 3.0, 4.0];
    let b = [1.5, 2.5, 2.9, 3.0];
    assert_eq!(crossover_interval(&r, &a, &b).unwrap(), vec![(0.02, 0.05)]);
    let tie = [1.5, 2.0, 2.9, 3.0];
    assert_eq!(crossover_interval(&r, &a, &tie).unwrap(), vec![(0.0, 0.05)]);
    assert!(crossover_interval(&r, &a, &a[..3]).is_err());
}

mod canned {
    use levelcost::config::{load_scenario, ScenarioFile};
    use levelcost::components::StorageSpec;
    use levelcost::scenarios::*;

    const RATES: [f64; 5] = [0.02, 0.05, 0.08, 0.10, 0.15];

    fn shipped(name: &str) -> CaseScenario {
        match load_scenario(name).unwrap().file {
            ScenarioFile::Cases(f) => f.to_scenario(false).unwrap(),
            _ => panic!("{name} is not a cases scenario"),
        }
    }

    fn sweep(sc: &CaseScenario) -> Vec<SweepRow> {
        rate_sweep(sc, &RATES).into_iter().map(|r| r.unwrap()).collect()
    }

    fn bounds() -> [(&'static str, CaseScenario, CaseScenario); 2] {
        let vrb = shipped("table4-vrb-lower");
        let li = shipped("table5-liion-lower");
        [
            ("lower", vrb.clone(), li.clone()),
            (
                "upper",
                vrb.with_storage(StorageSpec::vrb_upper()),
                li.with_storage(StorageSpec::liion_upper()),
            ),
        ]
    }

    #[test]
    fn every_column_rises_with_rate() {
        for name in ["table4-vrb-lower", "table5-liion-lower"] {
            let rows = sweep(&shipped(name));
            for (col, label) in SWEEP_COLUMNS.iter().enumerate() {
                for w in rows.windows(2) {
                    assert!(
                        w[1].values()[col] > w[0].values()[col],
                        "{name} {label} at r = {}",
                        w[1].rate
                    );
                }
            }
        }
    }

    #[test]
    fn vrb_delivery_costs_more_than_liion() {
        for (bound, vrb, li) in bounds() {
            for (a, b) in sweep(&vrb).iter().zip(sweep(&li)) {
                assert!(a.lcod > b.lcod, "{bound} bound at r = {}: {} vs {}", a.rate, a.lcod, b.lcod);
            }
        }
    }

    #[test]
    fn early_storage_is_cheaper_at_high_rates() {
        for row in sweep(&shipped("table4-vrb-lower")).iter().filter(|r| r.rate >= 0.08) {
            assert!(row.lcoe_system < row.marginal_1_3, "r = {}", row.rate);
            assert!(row.marginal_1_3 < row.marginal_2_3, "r = {}", row.rate);
        }
    }

    #[test]
    fn single_rate_sweep_matches_direct_calls() {
        let sc = shipped("table4-vrb-lower");
        let row = rate_sweep(&sc, &[0.08]).remove(0).unwrap();
        let c = sc.evaluate(0.08).unwrap();
        assert_eq!(row.basecase, c.case1.lcoe().unwrap().value);
        assert_eq!(row.marginal_2_3, marginal_lcoe(&c.case2, &c.case3).unwrap().value);
        assert_eq!(
            row.lcoe_system,
            levelcost::metrics::lcoe_system(&c.case3.breakdown).unwrap().value
        );
    }
}
