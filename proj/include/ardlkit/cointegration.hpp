#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/critical_values.hpp"
#include "ardlkit/dataframe.hpp"
#include "ardlkit/test_result.hpp"
#include "ardlkit/unitroot.hpp"

namespace ardlkit {

enum class ResidualTestKind { EngleGranger, PhillipsOuliaris };

struct ResidualCointSpec {
  /// Deterministic terms of the static cointegrating regression.
  Deterministic deterministic = Deterministic::Constant;
  LagSelection lags = LagSelection::sic();
  std::optional<int> bandwidth;  // Phillips-Ouliaris; nullopt -> Newey-West (1994)
};

struct EGResult {
  std::string dependent;
  ResidualTestKind kind = ResidualTestKind::EngleGranger;
  TestResult tau;
  TestResult z;
  int lag_order = 0;   // Engle-Granger augmentation lags
  int bandwidth = -1;  // Phillips-Ouliaris
  Eigen::VectorXd cointegrating_coefficients;
};

EGResult residual_cointegration(const Series& y, const Series& x, ResidualTestKind kind,
                                const ResidualCointSpec& spec = {},
                                const CriticalValueTables& tables = default_tables());

/// Johansen deterministic cases: 1 none, 2 restricted constant,
/// 3 unrestricted constant, 4 restricted trend, 5 unrestricted trend.
enum class JohansenCase { None = 1, RestrictedConstant = 2, UnrestrictedConstant = 3, RestrictedTrend = 4,
                          UnrestrictedTrend = 5 };

struct JohansenResult {
  JohansenCase det_case = JohansenCase::UnrestrictedConstant;
  int var_lags = 2;
  int nobs = 0;
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::VectorXd trace;        // by hypothesised rank r = 0..n-1
  Eigen::VectorXd max_eigen;
  Eigen::VectorXd trace_cv5, max_cv5;
  Eigen::VectorXd trace_p, max_p;  // NaN where no table supports a p-value
  Eigen::MatrixXd beta;           // cointegrating vectors, columns by eigenvalue
  /// Concentrated log-likelihood by rank 0..n.
  Eigen::VectorXd loglik;
  Eigen::VectorXd aic, sc;
};

/// `frame` holds the levels; `var_lags` counts lags of the levels VAR, so
/// the test regression has var_lags - 1 lagged differences.
JohansenResult johansen(const Eigen::MatrixXd& levels, int var_lags, JohansenCase det_case,
                        const CriticalValueTables* tables = &default_tables());
inline JohansenResult johansen(const Frame& frame, int var_lags, JohansenCase det_case,
                               const CriticalValueTables* tables = &default_tables()) {
  return johansen(frame.to_matrix(), var_lags, det_case, tables);
}

struct JohansenSummary {
  std::vector<JohansenCase> cases;
  Eigen::MatrixXd loglik;  // rows: rank 0..n, cols: case
  Eigen::MatrixXd aic;
  Eigen::MatrixXd sc;
};
JohansenSummary johansen_summary(const Eigen::MatrixXd& levels, int var_lags);

enum class GhModel { Level, LevelTrend, Regime, RegimeTrend };
const char* gh_code(GhModel m);

struct GhStatistic {
  double value = 0.0;
  int break_index = -1;
  MonthStamp break_date;
  std::map<double, double> critical_values;
  bool rejects(double level) const;
};

struct GHResult {
  GhModel model = GhModel::RegimeTrend;
  std::string dependent;
  GhStatistic adf;
  GhStatistic zt;
  GhStatistic za;
};

struct GhSpec {
  double trimming = 0.15;
  LagSelection lags = LagSelection::sic();
  std::optional<int> bandwidth;
};

GHResult gregory_hansen(const Series& y, const Series& x, GhModel model, const GhSpec& spec = {},
                        const CriticalValueTables& tables = default_tables());

struct GhAt {
  double adf, zt, za;
};
/// Residual statistics for one break date with fixed lags and bandwidth.
GhAt gregory_hansen_at(const Eigen::VectorXd& y, const Eigen::VectorXd& x, GhModel model, int break_index, int lags,
                       int bandwidth);

}  // namespace ardlkit
