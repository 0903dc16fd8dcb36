import json
import os

import numpy as np
import pytest

import ardlkit


def random_walks(n=300, seed=3):
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.normal(size=n))
    y = 0.5 * x + rng.normal(size=n)
    return y, x


def test_version():
    assert ardlkit.__version__.count(".") == 2


def test_ols_recovers_coefficients():
    rng = np.random.default_rng(0)
    X = np.column_stack([np.ones(200), rng.normal(size=200)])
    y = X @ np.array([1.0, -2.0])
    fit = ardlkit.ols(y, X, ["const", "x"])
    np.testing.assert_allclose(fit["coefficients"], [1.0, -2.0], atol=1e-10)
    assert fit["names"] == ["const", "x"]


def test_adf_rejects_white_noise():
    e = np.random.default_rng(1).normal(size=300)
    r = ardlkit.unit_root(e, "adf", "c")
    assert r["p_value"] < 0.01
    assert set(r["critical_values"]) == {0.01, 0.05, 0.1}


def test_johansen_telescoping():
    y, x = random_walks()
    r = ardlkit.johansen(np.column_stack([y, x]), 2, 3)
    assert r["trace"][0] == pytest.approx(r["max_eigen"][0] + r["max_eigen"][1], rel=1e-12)


def test_ardl_and_bounds():
    y, x = random_walks()
    r = ardlkit.ardl(y, x.reshape(-1, 1), "y", ["x"], max_p=4, max_q=4)
    assert r["spec"].startswith("ARDL(")
    assert r["verdict"] in {"cointegrated", "not_cointegrated", "inconclusive"}
    assert r["f_bounds"][0.05] == pytest.approx((3.15, 4.11))


def test_var_and_structural():
    y, x = random_walks()
    sel = ardlkit.var_lag_selection(np.column_stack([y, x]), ["y", "x"], 6)
    assert len(sel["rows"]) == 7
    s = ardlkit.structural(np.column_stack([np.diff(y), np.diff(x)]), ["y", "x"], 2, 12)
    for table in s["fevd"]:
        np.testing.assert_allclose(table.sum(axis=1), 1.0, atol=1e-10)
    for i, contrib in enumerate(s["hd_contributions"]):
        np.testing.assert_allclose(s["hd_baseline"][:, i] + contrib.sum(axis=1), s["hd_observed"][:, i], atol=1e-8)
    assert all(abs(z) < 1 for z in s["roots"])


def test_toda_yamamoto_df():
    y, x = random_walks()
    rows = ardlkit.toda_yamamoto(np.column_stack([y, x]), ["y", "x"], 3, 1)
    assert all(r["df"] == 3 for r in rows)


def test_critical_value_lookup():
    assert ardlkit.critical_value("df_tau", "c", 1, None, 0.05) == pytest.approx(-2.86, abs=0.01)


def test_errors_are_translated():
    with pytest.raises(ardlkit.ArdlkitError):
        ardlkit.unit_root(np.ones(5), "adf", "c")


def test_pipeline_and_plots(tmp_path):
    rng = np.random.default_rng(5)
    n = 200
    a = np.exp(3 + np.cumsum(rng.normal(0, 0.05, n)))
    b = np.exp(1 + np.cumsum(rng.normal(0, 0.05, n)))
    lines = ["date,a,b"] + [f"{2000 + t // 12}-{t % 12 + 1:02d},{a[t]:.6f},{b[t]:.6f}" for t in range(n)]
    (tmp_path / "d.csv").write_text("\n".join(lines) + "\n")
    cfg = {
        "schema_version": 1,
        "data": {"path": "d.csv"},
        "transforms": [{"source": "a", "kind": "logdiff", "name": "ra"}],
        "output_dir": str(tmp_path / "out"),
        "stages": ["describe", "unit_root"],
        "describe": {"series": ["ra"]},
        "unit_root": {"panels": [{"name": "returns", "series": ["ra"], "deterministic": "c"}], "tests": ["adf"]},
    }
    (tmp_path / "c.json").write_text(json.dumps(cfg))
    res = ardlkit.run_pipeline(str(tmp_path / "c.json"))
    assert res["ok"]
    assert sorted(res["artifacts"]) == ["fig1_series.csv", "table1.csv", "table2.csv"]
    paths = ardlkit.emit_plots(str(tmp_path / "out"), "svg")
    assert [os.path.basename(p) for p in paths] == ["fig1_series.svg"]
