"""Smoke test for the levelcost_py extension module.

Build and install the module first:

    pip install maturin
    pip install --no-build-isolation -e crates/py

then run `python python/smoke_test.py` (or `pytest python/smoke_test.py`).
"""

import math

import levelcost_py as lc


def close(a, b, tol=1e-12):
    return math.isclose(a, b, rel_tol=tol, abs_tol=0.0)


def test_finance():
    fin = lc.FinancialAssumptions(0.10, 2, "include-year-zero")
    m = lc.lcoe_discounting([1000, 100, 100], [0, 500, 500], fin)
    # 1173.5537 / 867.7686 by hand
    pv_cost = 1000 + 100 / 1.1 + 100 / 1.1**2
    pv_energy = 500 / 1.1 + 500 / 1.1**2
    assert close(m.value, pv_cost / pv_energy)
    assert close(m.pv_cost, pv_cost) and close(m.pv_energy, pv_energy)
    assert close(float(m), m.value)

    flat = lc.FinancialAssumptions(0.07, 25)
    costs = lc.constant_series(100.0, flat)
    energy = lc.constant_series(1000.0, flat)
    assert close(lc.lcoe_discounting(costs, energy, flat).value, 0.1)
    assert close(lc.lcoe_annuitizing(costs, energy, flat).value, 0.1)
    assert close(lc.annuity_factor(lc.FinancialAssumptions(0.0, 8)), 1 / 8)


def test_metrics():
    sce = lc.SystemCostEnergy(cost_pv_surplus=100.0, cost_ess=200.0, energy_ess=1000.0, energy_surplus_in=1000.0)
    assert close(lc.lcod(sce, 1.0).value, 0.3)
    value, negative = lc.lcos_net(0.2, 0.15, 0.7)
    assert negative and close(value, 0.2 - 0.15 / 0.7)

    fin = lc.FinancialAssumptions(0.08, 20)
    vrb = lc.storage_preset("vrb-lower")
    capital = vrb.capital_per_kwh * vrb.energy_capacity_mwh * 1000
    om = lc.constant_series(vrb.om_per_kwh_year * vrb.energy_capacity_mwh * 1000, fin)
    lcos = lc.lcos_wec(capital, om, lc.constant_series(1_750_000.0, fin), fin).value
    assert 0.373 <= lcos <= 0.950


def test_dispatch():
    irr = lc.clear_sky_profile(800.0)
    pv = [x * 0.153 * 1.64 * 20000 / 1e6 for x in irr]
    load = [1.5] * len(pv)
    split = lc.split_energy(pv, load, cap_mwh_per_day=3.0)
    total = 0.5 * sum(pv)
    assert close(split["direct"] + split["stored"] + split["curtailed"], total, 1e-9)
    assert split["stored"] <= 3.0 + 1e-12
    n_direct, n_surplus = lc.panel_counts(1000.0, 0.0, 2.0e6)
    assert close(n_direct, 1000e6 / (0.153 * 1.64 * 2.0e6)) and n_surplus == 0.0


def test_scenarios():
    sc = lc.CaseScenario.load("table4-vrb-lower")
    rows = sc.sweep([0.02, 0.08])
    assert abs(rows[0].basecase - 0.095) < 1e-9
    assert rows[1].basecase > rows[0].basecase
    b = sc.case3_breakdown(0.08).as_dict()
    assert close(rows[1].marginal_2_3, b["cost_ess"] / b["energy_ess"], 1e-9)

    li = lc.CaseScenario.load("table5-liion-lower")
    rates = [0.02, 0.05, 0.08]
    vrb_sys = [r.lcoe_system for r in sc.sweep(rates)]
    li_sys = [r.lcoe_system for r in li.sweep(rates)]
    brackets = lc.crossover_interval(rates, vrb_sys, li_sys)
    assert all(lo < hi for lo, hi in brackets)

    cells = lc.case_study("table6to9-template")
    years = sorted({c[0] for c in cells})
    assert len(years) == 3
    lcod = {c[0]: c[5] for c in cells if c[2] == "liion" and c[3] == "lower" and c[4] == "LCOD" and c[1] == 0.08}
    assert lcod[years[-1]] < lcod[years[0]]


def test_errors():
    for bad in (lambda: lc.FinancialAssumptions(-1.5, 10), lambda: lc.storage_preset("nope")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        lc.CaseScenario.load("missing/dir/file.toml")
    except OSError:
        pass
    else:
        raise AssertionError("expected OSError")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok  {name}")
    print("smoke test passed")
