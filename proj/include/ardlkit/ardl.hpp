#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/critical_values.hpp"
#include "ardlkit/dataframe.hpp"
#include "ardlkit/linreg.hpp"
#include "ardlkit/test_result.hpp"

namespace ardlkit {

/// Deterministic cases I..V of the bounds-testing framework.
enum class ArdlCase { NoConst = 1, RestrictedConst = 2, UnrestrictedConst = 3, RestrictedTrend = 4, UnrestrictedTrend = 5 };

const char* case_code(ArdlCase c);  // "no_const", ...
ArdlCase parse_case(const std::string& text);

enum class Criterion { Aic, Sc, Hq };

struct ArdlSpec {
  int p = 1;
  std::vector<int> q;
  ArdlCase det_case = ArdlCase::NoConst;
  std::string label() const;  // ARDL(p,q1,...)
};

struct ArdlOptions {
  int max_p = 8;
  int max_q = 8;
  Criterion criterion = Criterion::Aic;
  ArdlCase det_case = ArdlCase::NoConst;
  CovarianceKind covariance = CovarianceKind::Ordinary;
  std::optional<int> hac_bandwidth;
};

struct LongRunCoefficient {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 0.0;
};

struct ArdlCandidate {
  int p = 0;
  std::vector<int> q;
  double criterion = 0.0;
  bool rank_deficient = false;
};

struct ArdlFit {
  ArdlSpec spec;
  ArdlOptions options;
  std::string dependent;
  std::vector<std::string> regressors;
  MonthStamp sample_start;
  int first = 0;  // index of the first observation in the estimation sample
  Eigen::VectorXd y;  // full input
  Eigen::MatrixXd x;  // full input, one column per regressor
  OlsFit levels_fit;
  std::vector<LongRunCoefficient> long_run;
  double ec_coefficient = 0.0;
  double ec_t = 0.0;
  OlsFit ec_fit;
  double aic = 0.0, sc = 0.0, hq = 0.0;
  std::vector<ArdlCandidate> candidates;
};

/// Grid search over p in 1..max_p and each q in 0..max_q, every candidate on
/// the sample left after max(max_p, max_q) initial observations.
ArdlFit fit_ardl(const Series& y, const Frame& xs, const ArdlOptions& options = {});
/// A single specification on observations first.. (default max(p, q)).
ArdlFit fit_ardl(const Series& y, const Frame& xs, const ArdlSpec& spec, const ArdlOptions& options = {},
                 int first = -1);

/// Long-run multipliers with delta-method inference on the levels covariance.
std::vector<LongRunCoefficient> long_run_coefficients(const ArdlFit& fit);
/// Regression of dy on the differenced short-run terms and ec(-1).
OlsFit ecm_representation(const ArdlFit& fit);

enum class BoundsSource { PesaranAsymptotic, NarayanSmallSample };
enum class BoundsVerdict { Cointegrated, NotCointegrated, Inconclusive };

const char* verdict_code(BoundsVerdict v);

struct BoundsResult {
  double f_statistic = 0.0;
  std::optional<double> t_statistic;
  // t bounds are tabulated for cases I, III and V only
  std::map<double, BoundPair> f_bounds;
  std::map<double, BoundPair> t_bounds;
  BoundsSource source = BoundsSource::PesaranAsymptotic;
  BoundsSource requested = BoundsSource::PesaranAsymptotic;
  int nobs = 0;
  int k = 0;
  BoundsVerdict verdict = BoundsVerdict::Inconclusive;
  double verdict_level = 0.05;
  OlsFit conditional_ecm;
  std::vector<std::string> level_terms;  // restricted under the null
};

BoundsResult bounds_test(const ArdlFit& fit, BoundsSource source = BoundsSource::PesaranAsymptotic,
                         double level = 0.05, const CriticalValueTables& tables = default_tables());
BoundsVerdict bounds_verdict(double f, std::optional<double> t, const BoundPair& fb, std::optional<BoundPair> tb);

/// Wald F on the lagged (j >= 1) terms of `regressor` (all regressors when
/// empty), with the levels-fit covariance.
TestResult short_run_causality(const ArdlFit& fit, const std::string& regressor = {});

}  // namespace ardlkit
