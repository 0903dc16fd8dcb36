#pragma once

#include <set>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/critical_values.hpp"
#include "ardlkit/linreg.hpp"
#include "ardlkit/test_result.hpp"

namespace ardlkit {

/// Q = n(n+2) sum_j r_j^2/(n-j) on x, or on x^2 when `squared`.
TestResult ljung_box(const Eigen::VectorXd& x, int lags, bool squared = false);

/// Regression of e^2 on a constant and `lags` own lags.
LmTest arch_lm(const Eigen::VectorXd& resid, int lags);

/// Residuals on the original regressors plus `lags` lagged residuals, with
/// pre-sample lags set to zero.
LmTest breusch_godfrey(const OlsFit& fit, int lags);

/// Adds fitted^p for each p in `powers` (subset of {2,3,4}).
TestResult ramsey_reset(const OlsFit& fit, const std::set<int>& powers = {2});

enum class HetKind { Bpg, White, Harvey, Glejser };

/// Auxiliary regression of g(e) on Z (always with a constant). White adds
/// squares and cross products of the regressors.
LmTest het_test(const OlsFit& fit, HetKind kind);

/// One-step-ahead prediction errors scaled by their standard errors, for
/// observations k+1..n. Element r corresponds to observation k + r.
Eigen::VectorXd recursive_residuals(const OlsFit& fit);

enum class CusumKind { Cusum, Cusumq };

struct CusumPath {
  CusumKind kind = CusumKind::Cusum;
  double level = 0.05;
  std::vector<int> step;  // observation index (0-based) in the fit sample
  std::vector<double> statistic;
  std::vector<double> lower;
  std::vector<double> upper;

  bool inside() const;
};

CusumPath cusum(const OlsFit& fit, CusumKind kind, double level = 0.05,
                const CriticalValueTables& tables = default_tables());

/// Two-sided CUSUM of squares band half-width for m recursive residuals.
double cusumq_c0(int m, double level, const CriticalValueTables& tables = default_tables());

}  // namespace ardlkit
