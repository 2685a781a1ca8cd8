use std::path::Path;

use levelcost::components::StorageSpec;
use levelcost::config::*;
use levelcost::finance::StartConvention;
use levelcost::scenarios::calibrate_cases;
use levelcost::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn builtin_scenarios_parse() {
    for (name, _) in BUILTIN_SCENARIOS {
        let s = load_scenario(name).unwrap();
        match &s.file {
            ScenarioFile::Cases(c) => {
                c.to_scenario(false).unwrap();
            }
            ScenarioFile::Casestudy(c) => {
                c.load(&s.base_dir, false).unwrap();
            }
            ScenarioFile::Levelize(_) => panic!("{name} is a levelize file"),
        }
    }
}

#[test]
fn stored_calibration_matches_solver() {
    for name in ["table4-vrb-lower", "table5-liion-lower"] {
        let ScenarioFile::Cases(c) = load_scenario(name).unwrap().file else {
            panic!("{name}")
        };
        let stored = c.to_scenario(false).unwrap();
        let template = stored.with_storage(StorageSpec::vrb_lower());
        let solved = calibrate_cases(&c.anchors(false).unwrap(), &template).unwrap();
        assert!(rel(solved.case1_panels, stored.case1_panels) < 1e-9, "{name}");
        assert!(rel(solved.peak_irradiance_w_m2, stored.day.peak_irradiance_w_m2) < 1e-9);
    }
}

#[test]
fn calibration_computed_when_missing() {
    let text = r#"
kind = "cases"
name = "uncalibrated"
[finance]
start_convention = "include-year-zero"
[storage]
preset = "vrb-lower"
energy_capacity_mwh = 5.0
[calibration]
anchor_daily_surplus_mwh = 4.0
anchor_basecase_lcoe = 0.1
anchor_rate = 0.02
anchor_horizon_years = 20
"#;
    let ScenarioFile::Cases(c) = parse_scenario(text, "inline").unwrap() else {
        panic!()
    };
    let s = c.to_scenario(false).unwrap();
    let c1 = s.evaluate(0.02).unwrap();
    assert!(rel(c1.case1.lcoe().unwrap().value, 0.1) < 1e-9);
}

#[test]
fn unknown_fields_and_presets_are_config_errors() {
    let bad = "kind = \"cases\"\nname = \"x\"\n[storage]\npreset = \"vrb-lower\"\ncolour = 1\n";
    assert!(matches!(parse_scenario(bad, "inline"), Err(Error::Config(_))));
    let section = StorageSection {
        preset: Some("flywheel".into()),
        ..Default::default()
    };
    assert!(matches!(section.resolve(None), Err(Error::Config(_))));
    assert!(matches!(load_scenario("no-such-scenario"), Err(Error::Config(_))));
    assert!(matches!(load_scenario("missing/file.toml"), Err(Error::Io { .. })));
}

#[test]
fn storage_overrides_apply() {
    let section = StorageSection {
        preset: Some("liion-upper".into()),
        energy_capacity_mwh: Some(6.0),
        om_per_kwh_year: Some(10.0),
        ..Default::default()
    };
    let s = section.resolve(None).unwrap();
    assert_eq!(s.energy_capacity_mwh, 6.0);
    assert_eq!(s.om_per_kwh_year, 10.0);
    assert_eq!(s.capital_per_kwh, 1640.0);
}

#[test]
fn year_csv_parsing() {
    let p = Path::new("c.csv");
    assert_eq!(
        parse_year_csv("year,value\n0,1000\n1,100\n2,100\n", p).unwrap(),
        vec![1000.0, 100.0, 100.0]
    );
    for (text, line) in [("0,1\n1,x\n", 2), ("0,1\n2,1\n", 2), ("0,1,2\n", 1)] {
        match parse_year_csv(text, p) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn levelize_file_inline() {
    let text = r#"
kind = "levelize"
costs = [1000.0, 100.0, 100.0]
energy = [0.0, 500.0, 500.0]
[finance]
discount_rate = 0.1
start_convention = "include-year-zero"
"#;
    let ScenarioFile::Levelize(l) = parse_scenario(text, "inline").unwrap() else {
        panic!()
    };
    let inputs = l.load(Path::new("."), false).unwrap();
    assert_eq!(inputs.fin.horizon_years, 2);
    assert_eq!(inputs.methods.len(), 2);
}

#[test]
fn paper_bounds_force_year_zero() {
    let f = FinanceSection {
        horizon_years: Some(5),
        ..Default::default()
    };
    assert_eq!(
        f.resolve(None, true).unwrap().start_convention,
        StartConvention::IncludeYearZero
    );
    assert_eq!(
        f.resolve(None, false).unwrap().start_convention,
        StartConvention::ExcludeYearZero
    );
}
