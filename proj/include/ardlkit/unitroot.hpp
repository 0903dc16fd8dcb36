#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/critical_values.hpp"
#include "ardlkit/dataframe.hpp"
#include "ardlkit/linreg.hpp"
#include "ardlkit/test_result.hpp"

namespace ardlkit {

enum class Deterministic { None, Constant, ConstantTrend };

const char* variant_code(Deterministic d);  // "n", "c", "ct"

struct LagSelection {
  enum class Mode { Fixed, Aic, Sic };
  Mode mode = Mode::Sic;
  int lags = 0;     // Fixed
  int max_lag = -1; // criterion search; -1 -> floor(12 (n/100)^(1/4))

  static LagSelection fixed(int p) { return {Mode::Fixed, p, -1}; }
  static LagSelection sic(int max_p = -1) { return {Mode::Sic, 0, max_p}; }
  static LagSelection aic(int max_p = -1) { return {Mode::Aic, 0, max_p}; }
};

struct UnitRootSpec {
  Deterministic deterministic = Deterministic::ConstantTrend;
  LagSelection lags = LagSelection::sic();
  /// PP/KPSS Bartlett bandwidth; nullopt -> Newey-West (1994) automatic.
  std::optional<int> bandwidth;
};

enum class UnitRootKind { Adf, Dfgls, Pp, Kpss, Ers };

struct UnitRootResult {
  TestResult test;
  UnitRootKind kind = UnitRootKind::Adf;
  int lags = -1;       // augmentation lags (ADF, DF-GLS, ERS spectral regression)
  int bandwidth = -1;  // PP/KPSS
  int nobs = 0;        // observations in the test regression
  /// True when small values reject (all but KPSS).
  bool rejects_below = true;
};

UnitRootResult unit_root(const Eigen::VectorXd& y, UnitRootKind kind, const UnitRootSpec& spec = {},
                         const CriticalValueTables& tables = default_tables());
inline UnitRootResult unit_root(const Series& s, UnitRootKind kind, const UnitRootSpec& spec = {},
                                const CriticalValueTables& tables = default_tables()) {
  return unit_root(s.to_vector(), kind, spec, tables);
}

/// Augmented Dickey-Fuller regression with a fixed lag count, using
/// observations from index `first` (>= lags + 1) onward. Returns the fit of
/// dy on {y(-1), dy(-1..-p), deterministics}.
OlsFit adf_regression(const Eigen::VectorXd& y, int lags, Deterministic det, int first = -1);
/// Lag chosen by the criterion on the common sample of the largest model.
int select_adf_lags(const Eigen::VectorXd& y, Deterministic det, const LagSelection& sel);

enum class BreakKind { PerronIo, PerronAo, ZivotAndrews, LsCrash, LsBreak };

struct BreakResult {
  BreakKind kind = BreakKind::ZivotAndrews;
  double statistic = 0.0;
  std::vector<int> break_index;  // last pre-break observation (0-based)
  std::vector<MonthStamp> break_dates;
  std::map<double, double> critical_values;
  int lags = 0;

  bool rejects(double level) const;
  TestResult as_test(const std::string& name) const;
};

struct BreakSpec {
  std::optional<double> trimming;  // default 0.15 (ZA, Perron), 0.10 (LS)
  LagSelection lags = LagSelection::sic();
  /// LS tests use one lag count for every break pair, chosen on the no-break
  /// LM regression; set to force a value.
  std::optional<int> ls_lags;
};

BreakResult break_unit_root(const Series& s, BreakKind kind, const BreakSpec& spec = {},
                            const CriticalValueTables& tables = default_tables());

/// Test statistic at one fixed break (or pair of breaks) with fixed lags; the
/// per-date oracle for the grid search.
double break_statistic_at(const Eigen::VectorXd& y, BreakKind kind, const std::vector<int>& breaks, int lags);

/// Candidate break indices for the trimmed interior of n observations.
std::pair<int, int> break_range(int n, double trimming);

/// Smallest d in {0,1,2} at which ADF (constant + trend) rejects for every
/// column; ExcessIntegration beyond 2.
int max_integration_order(const Frame& frame, double level = 0.05,
                          const CriticalValueTables& tables = default_tables());

}  // namespace ardlkit
