use levelcost::components::*;
use levelcost::finance::*;
use levelcost::metrics::*;
use levelcost::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sce(cpvs: f64, cpvd: f64, cess: f64, eess: f64, epvd: f64, ein: f64) -> SystemCostEnergy {
    SystemCostEnergy {
        cost_pv_surplus: cpvs,
        cost_pv_direct: cpvd,
        cost_ess: cess,
        energy_ess: eess,
        energy_pv_direct: epvd,
        energy_surplus_in: ein,
    }
}

#[test]
fn energy_in_ratio() {
    let s = sce(100.0, 0.0, 0.0, 0.0, 0.0, 1000.0);
    assert!(rel(lcoe_energy_in(&s).unwrap().value, 0.1) < 1e-15);
    let d = sce(200.0, 0.0, 0.0, 0.0, 0.0, 2000.0);
    assert_eq!(lcoe_energy_in(&d).unwrap().value, lcoe_energy_in(&s).unwrap().value);
    assert!(matches!(
        lcoe_energy_in(&sce(1.0, 0.0, 0.0, 0.0, 0.0, 0.0)),
        Err(Error::DegenerateDenominator(_))
    ));
}

#[test]
fn lcod_unit_efficiency_adds_components() {
    // LCOE_in = 0.1, LCOS = 0.2
    let s = sce(100.0, 0.0, 200.0, 1000.0, 0.0, 1000.0);
    assert!(rel(lcod(&s, 1.0).unwrap().value, 0.3) < 1e-15);
    assert!(lcod(&s, 0.0).is_err());
    assert!(lcod(&s, 1.1).is_err());
}

#[test]
fn lcod_decomposes_over_schedules() {
    let fin = FinancialAssumptions::new(0.08, 20).unwrap();
    let spec = StorageSpec::vrb_lower().with_capacity_mwh(5.0);
    let pv = PvArraySpec::sharp_nd250();
    let s = SystemCostEnergy::from_schedules(
        &pv_cost_schedule(&pv, 8000.0, &fin).unwrap(),
        &pv_cost_schedule(&pv, 22000.0, &fin).unwrap(),
        &pv_direct_energy_schedule(12.0, &pv, &fin).unwrap(),
        Some((&spec, 4.676)),
        &fin,
    )
    .unwrap();
    let eta = spec.round_trip_efficiency;
    assert!(rel(s.energy_ess, eta * s.energy_surplus_in) < 1e-12);
    let ein = lcoe_energy_in(&s).unwrap().value;
    let wec = lcos_wec_for_spec(&spec, 4.676, &fin).unwrap().value;
    assert!(rel(lcod(&s, eta).unwrap().value, ein / eta + wec) < 1e-12);
    assert!(rel(s.ess_ratio().unwrap().value, wec) < 1e-12);
}

#[test]
fn lcos_wec_flat_zero_rate() {
    let fin = FinancialAssumptions::new(0.0, 10).unwrap();
    let e = YearSeries::constant(100.0, &fin, UnitTag::Energy).unwrap();
    let m = lcos_wec(1000.0, &YearSeries::zeros(&fin, UnitTag::Money), &e, &fin).unwrap();
    assert!(rel(m.value, 1.0) < 1e-15);
}

#[test]
fn lcos_wec_table1_vrb_in_lazard_band() {
    // 2 MW / 4 MWh, 20 y, 8 %, 1750 MWh/yr delivered
    let fin = FinancialAssumptions::new(0.08, 20).unwrap();
    for spec in [StorageSpec::vrb_lower(), StorageSpec::vrb_upper()] {
        let c = ess_cost_schedule(&spec, &fin).unwrap();
        let e = YearSeries::constant(1_750_000.0, &fin, UnitTag::Energy).unwrap();
        let v = lcos_wec(c.capital, &c.yearly, &e, &fin).unwrap().value;
        assert!((0.373..=0.950).contains(&v), "{v}");
    }
}

#[test]
fn net_lcos_examples() {
    let a = lcos_net(0.5, 0.1, 0.5).unwrap();
    assert!(rel(a.value, 0.3) < 1e-15);
    assert!(!a.negative);
    assert_eq!(lcos_net(0.37, 0.0, 0.8).unwrap().value, 0.37);
    let b = lcos_net(0.2, 0.15, 0.7).unwrap();
    assert!(rel(b.value, -0.014_285_714_285_714_285) < 1e-12);
    assert!(b.negative);
    assert!(lcos_net(0.2, 0.1, 0.0).is_err());
}

#[test]
fn system_without_storage_is_direct_lcoe() {
    let s = sce(0.0, 500.0, 0.0, 0.0, 2500.0, 0.0);
    assert!(rel(lcoe_system(&s).unwrap().value, 0.2) < 1e-15);
    assert!(lcoe_system(&SystemCostEnergy::default()).is_err());
}

#[test]
fn system_is_mediant_of_paths() {
    let s = sce(300.0, 500.0, 900.0, 1500.0, 2500.0, 2000.0);
    let sys = lcoe_system(&s).unwrap().value;
    let a = lcod(&s, 0.75).unwrap().value;
    let b = s.direct_lcoe().unwrap().value;
    assert!(a.min(b) < sys && sys < a.max(b));
}

#[test]
fn negative_inputs_rejected() {
    assert!(matches!(
        lcoe_system(&sce(-1.0, 1.0, 1.0, 1.0, 1.0, 1.0)),
        Err(Error::Domain(_))
    ));
}

#[test]
fn include_year_zero_changes_breakdown() {
    let f = FinancialAssumptions::new(0.05, 15).unwrap();
    let g = f.with_convention(StartConvention::IncludeYearZero);
    let spec = StorageSpec::liion_lower();
    assert!(lcos_wec_for_spec(&spec, 3.0, &g).unwrap().value
        < lcos_wec_for_spec(&spec, 3.0, &f).unwrap().value);
}
