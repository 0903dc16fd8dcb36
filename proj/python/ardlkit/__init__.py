"""ARDL bounds testing, unit roots, cointegration and VAR causality.

Thin bindings over the C++ library; arrays are numpy, results are dicts.
"""
import os as _os

# Installed wheels carry the table file inside the package.
_tables = _os.path.join(_os.path.dirname(__file__), "critical_values.txt")
if "ARDLKIT_TABLES" not in _os.environ and _os.path.exists(_tables):
    _os.environ["ARDLKIT_TABLES"] = _tables

from ._ardlkit import (
    ArdlkitError,
    __version__,
    ardl,
    critical_value,
    emit_plots,
    johansen,
    ols,
    run_pipeline,
    structural,
    toda_yamamoto,
    unit_root,
    var_lag_selection,
)

__all__ = [
    "ArdlkitError",
    "__version__",
    "ardl",
    "critical_value",
    "emit_plots",
    "johansen",
    "ols",
    "run_pipeline",
    "structural",
    "toda_yamamoto",
    "unit_root",
    "var_lag_selection",
]
