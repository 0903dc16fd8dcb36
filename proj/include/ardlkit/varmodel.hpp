#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/dataframe.hpp"
#include "ardlkit/linreg.hpp"
#include "ardlkit/test_result.hpp"

namespace ardlkit {

enum class VarDeterministic { None, Const, ConstTrend };

/// Levels VAR estimated equation by equation. Regressor order in every
/// equation: for each variable v, lags v(-1)..v(-p); then const, trend; then
/// the extra exogenous lags v(-p-1)..v(-p-d) of every variable.
struct VarFit {
  int p = 0;
  int extra_exog_lags = 0;
  VarDeterministic deterministic = VarDeterministic::Const;
  std::vector<std::string> names;
  MonthStamp sample_start;         // date of the first equation observation
  std::vector<Eigen::MatrixXd> A;  // A[l-1](i, j): equation i, variable j, lag l
  Eigen::MatrixXd exog;            // n x (deterministics + n*d), in regressor order
  std::vector<std::string> exog_names;
  DesignMatrix regressors;          // shared T x m design
  Eigen::MatrixXd Y;                // T x n
  Eigen::MatrixXd levels;           // full input data, (T + p + d) x n
  std::vector<OlsFit> equations;
  Eigen::MatrixXd residuals;        // T x n
  Eigen::MatrixXd sigma;            // divisor T
  Eigen::MatrixXd sigma_adjusted;   // divisor T - m
  int T = 0;
  int m = 0;  // regressors per equation
  double loglik = 0.0;
  double aic = 0.0, sc = 0.0, hq = 0.0, fpe = 0.0;

  int n() const { return static_cast<int>(names.size()); }
  Eigen::MatrixXd companion() const;
  /// Index of a variable by name; throws InvalidArgument.
  int index_of(const std::string& name) const;
};

VarFit fit_var(const Frame& frame, int p, VarDeterministic det = VarDeterministic::Const, int extra_exog_lags = 0);
/// As above on a raw matrix; `first` fixes the first equation observation
/// (default p + extra_exog_lags) so nested models share a sample.
VarFit fit_var(const Eigen::MatrixXd& levels, const std::vector<std::string>& names, int p, VarDeterministic det,
               int extra_exog_lags = 0, int first = -1);

struct SelectionRow {
  int lag = 0;
  double loglik = 0.0;
  double lr = 0.0;  // NaN for lag 0
  double lr_p = 0.0;
  double fpe = 0.0, aic = 0.0, sc = 0.0, hq = 0.0;
  int params = 0;  // total coefficients n*m
};

struct SelectionTable {
  VarDeterministic deterministic = VarDeterministic::ConstTrend;
  int max_lag = 0;
  int nobs = 0;
  int n = 0;
  std::vector<SelectionRow> rows;
  int lr = 0, fpe = 0, aic = 0, sc = 0, hq = 0;
};

/// Lags 0..max_lag on the common sample; LR is the modified sequential
/// statistic (T - m)(ln|S_{p-1}| - ln|S_p|) tested at 5% from max_lag down.
SelectionTable select_lag_order(const Frame& frame, int max_lag = 12,
                                VarDeterministic det = VarDeterministic::ConstTrend);

/// Companion eigenvalues sorted by descending modulus.
std::vector<std::complex<double>> stability_roots(const VarFit& fit);
bool is_stable(const VarFit& fit);

struct ExclusionTest {
  std::string excluded;  // variable name, or "All"
  TestResult test;
};

struct EquationExogeneity {
  std::string equation;
  std::vector<ExclusionTest> rows;
};

/// Chi-square Wald tests on lags 1..p of each other variable, per equation.
std::vector<EquationExogeneity> block_exogeneity(const VarFit& fit);

struct TYResult {
  int k = 0;
  int d_max = 0;
  VarFit fit;
  std::vector<EquationExogeneity> blocks;

  /// Wald test of `from` not Granger-causing `to`.
  const TestResult& wald(const std::string& from, const std::string& to) const;
  bool causes(const std::string& from, const std::string& to, double level = 0.05) const;
};

TYResult toda_yamamoto(const Frame& frame, int k, int d_max, VarDeterministic det = VarDeterministic::Const);

/// Adjusted multivariate Ljung-Box Q with chi-square df n^2 (lags - p).
TestResult portmanteau(const VarFit& fit, int lags);

}  // namespace ardlkit
