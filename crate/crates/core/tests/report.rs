use levelcost::report::*;
use levelcost::scenarios::SweepRow;

#[test]
fn six_significant_digits() {
    assert_eq!(sig6(0.095238095238), "0.0952381");
    assert_eq!(sig6(12_345_678.9), "12345700");
    assert_eq!(sig6(0.1), "0.1");
    assert_eq!(sig6(-0.0142857142857), "-0.0142857");
    assert_eq!(sig6(0.0), "0");
    assert_eq!(sig6(7.000000000000001), "7");
}

#[test]
fn fingerprint_is_stable() {
    let a = fingerprint(&[1.0, 2.0]).unwrap();
    assert_eq!(a.len(), 16);
    assert_eq!(a, fingerprint(&[1.0, 2.0]).unwrap());
    assert_ne!(a, fingerprint(&[1.0, 2.5]).unwrap());
}

#[test]
fn sweep_table_layout() {
    let row = SweepRow {
        rate: 0.07,
        basecase: 0.1,
        marginal_1_2: 0.2,
        marginal_2_3: 0.3,
        marginal_1_3: 0.25,
        lcod: 0.5,
        lcoe_system: 0.15,
    };
    let csv = sweep_table(&[row]).to_csv().unwrap();
    assert_eq!(
        csv,
        "r_pct,LCOE_basecase,1-2,2-3,1-3,LCOD,LCOE_system\n7,0.1,0.2,0.3,0.25,0.5,0.15\n"
    );
    let md = sweep_table(&[row]).to_markdown();
    assert!(md.starts_with("| r_pct | LCOE_basecase |"));
    assert_eq!(md.lines().count(), 3);
}

#[test]
fn jsonl_roundtrip_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let recs = vec![MetricRecord {
        name: "LCOD".into(),
        pv_cost: Some(1.0 / 3.0),
        pv_energy: Some(2.0e7 / 7.0),
        value: 0.123_456_789_012_345_67,
        inputs_fingerprint: "abc".into(),
        rate: Some(0.08),
        flag: None,
    }];
    write_jsonl(&path, &recs).unwrap();
    let back: Vec<MetricRecord> = read_jsonl(&path).unwrap();
    assert_eq!(back, recs);
}

#[test]
fn grid_pivots_long_cells() {
    let cell = |year, rate, metric: &str, value| CaseStudyCell {
        year,
        rate,
        technology: "vrb".into(),
        bound: "lower".into(),
        metric: metric.into(),
        value,
    };
    let cells = vec![
        cell(2011, 0.02, "LCOD", 2.0),
        cell(2009, 0.02, "LCOD", 1.0),
        cell(2009, 0.02, "LCOE_system", 3.0),
        cell(2009, 0.05, "LCOD", 4.0),
    ];
    let t = case_study_grid(&cells, "vrb", "lower");
    assert_eq!(t.headers, ["d_pct", "LCOD_2009", "LCOD_2011", "LCOE_system_2009"]);
    assert_eq!(t.rows.len(), 2);
    assert_eq!(t.rows[1][2], Cell::Text(String::new()));
    assert_eq!(technology_and_bound("liion-upper"), ("liion".into(), "upper".into()));
    assert_eq!(technology_and_bound("custom"), ("custom".into(), String::new()));
}
