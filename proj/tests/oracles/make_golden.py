"""Synthetic monthly price pair for the golden pipeline run.

Writes tests/data/golden/prices.csv and golden.json; the reference bundle is
then produced with

    build/tools/ardlkit run tests/data/golden/golden.json
"""
import json
import pathlib

import numpy as np
import pandas as pd

root = pathlib.Path(__file__).resolve().parents[2]
out = root / "tests" / "data" / "golden"
out.mkdir(parents=True, exist_ok=True)

rng = np.random.default_rng(19920101)
n = 322  # 1992-01 .. 2018-10
lnoil = np.log(18.0) + np.cumsum(0.004 + rng.normal(0, 0.08, n))
u = np.zeros(n)
e = rng.normal(0, 0.09, n)
for t in range(1, n):
    u[t] = 0.93 * u[t - 1] + e[t]
lngas = 0.2 + 0.35 * lnoil + u
dates = pd.period_range("1992-01", periods=n, freq="M").strftime("%Y-%m")
pd.DataFrame({"date": dates, "dubai": np.exp(lnoil), "gasus": np.exp(lngas)}).to_csv(
    out / "prices.csv", index=False, float_format="%.10g")

config = json.loads((root / "data" / "reproduction.json").read_text())
config["data"]["path"] = "prices.csv"
config["data"].pop("url", None)
config["output_dir"] = "reference"
(out / "golden.json").write_text(json.dumps(config, indent=1) + "\n")
