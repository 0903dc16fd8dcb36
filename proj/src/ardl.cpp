#include "ardlkit/ardl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ardlkit/distributions.hpp"
#include "ardlkit/error.hpp"

namespace ardlkit {

namespace {

std::string lag_name(const std::string& v, int l) { return l == 0 ? v : v + "(-" + std::to_string(l) + ")"; }
std::string diff_name(const std::string& v, int l) { return "D(" + lag_name(v, l) + ")"; }

bool has_const(ArdlCase c) { return c != ArdlCase::NoConst; }
bool has_trend(ArdlCase c) { return c == ArdlCase::RestrictedTrend || c == ArdlCase::UnrestrictedTrend; }

/// Deterministic term entering the long-run relation, if any.
std::string restricted_term(ArdlCase c) {
  if (c == ArdlCase::RestrictedConst) return "const";
  if (c == ArdlCase::RestrictedTrend) return "trend";
  return {};
}

DesignMatrix levels_design(const ArdlFit& f, const ArdlSpec& s, int first) {
  const auto T = f.y.size() - first;
  DesignMatrix X;
  for (int l = 1; l <= s.p; ++l) X.append(f.y.segment(first - l, T), lag_name(f.dependent, l));
  for (std::size_t i = 0; i < f.regressors.size(); ++i)
    for (int l = 0; l <= s.q[i]; ++l) X.append(f.x.col(i).segment(first - l, T), lag_name(f.regressors[i], l));
  if (has_const(s.det_case)) X.append(Eigen::VectorXd::Ones(T), "const");
  if (has_trend(s.det_case))
    X.append(Eigen::VectorXd::LinSpaced(T, first + 1.0, static_cast<double>(first + T)), "trend");
  return X;
}

OlsFit finish_covariance(const OlsFit& fit, const ArdlOptions& o) {
  return o.covariance == CovarianceKind::Hac ? with_hac(fit, o.hac_bandwidth) : fit;
}

double criterion_value(const OlsFit& f, Criterion c) {
  return c == Criterion::Aic ? f.aic : c == Criterion::Sc ? f.sc : f.hq;
}

ArdlFit prepare(const Series& y, const Frame& xs, const ArdlOptions& options) {
  if (xs.empty()) fail(ErrorCode::InvalidArgument, "ARDL needs at least one regressor");
  if (xs.start() != y.start() || xs.rows() != y.size())
    fail(ErrorCode::InvalidArgument, "dependent and regressors are not aligned");
  ArdlFit f;
  f.options = options;
  f.dependent = y.name();
  f.regressors = xs.names();
  f.y = y.to_vector();
  f.x = xs.to_matrix();
  f.sample_start = y.start();
  return f;
}

void estimate(ArdlFit& f, const ArdlSpec& spec, int first, MonthStamp data_start) {
  f.spec = spec;
  f.first = first;
  f.sample_start = data_start.plus(first);
  const DesignMatrix X = levels_design(f, spec, first);
  if (f.y.size() - first <= X.cols()) fail(ErrorCode::InsufficientData, "sample too short for " + spec.label());
  const OlsFit plain = ols(f.y.tail(f.y.size() - first), X);
  f.aic = plain.aic;
  f.sc = plain.sc;
  f.hq = plain.hq;
  f.levels_fit = finish_covariance(plain, f.options);
  f.long_run = long_run_coefficients(f);
  f.ec_fit = ecm_representation(f);
  const auto ec = f.ec_fit.index_of("CointEq(-1)");
  f.ec_coefficient = f.ec_fit.coefficients(ec);
  f.ec_t = f.ec_fit.t_stats()(ec);
}

}  // namespace

const char* case_code(ArdlCase c) {
  switch (c) {
    case ArdlCase::NoConst:
      return "no_const";
    case ArdlCase::RestrictedConst:
      return "restricted_const";
    case ArdlCase::UnrestrictedConst:
      return "unrestricted_const";
    case ArdlCase::RestrictedTrend:
      return "restricted_trend";
    case ArdlCase::UnrestrictedTrend:
      return "unrestricted_trend";
  }
  return "no_const";
}

ArdlCase parse_case(const std::string& text) {
  for (int i = 1; i <= 5; ++i)
    if (text == case_code(static_cast<ArdlCase>(i))) return static_cast<ArdlCase>(i);
  fail(ErrorCode::InvalidArgument, "unknown ARDL case '" + text + "'");
}

const char* verdict_code(BoundsVerdict v) {
  switch (v) {
    case BoundsVerdict::Cointegrated:
      return "cointegrated";
    case BoundsVerdict::NotCointegrated:
      return "not_cointegrated";
    case BoundsVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string ArdlSpec::label() const {
  std::string s = "ARDL(" + std::to_string(p);
  for (int v : q) s += "," + std::to_string(v);
  return s + ")";
}

ArdlFit fit_ardl(const Series& y, const Frame& xs, const ArdlSpec& spec, const ArdlOptions& options, int first) {
  ArdlFit f = prepare(y, xs, options);
  if (spec.p < 1) fail(ErrorCode::InvalidArgument, "p must be >= 1");
  if (spec.q.size() != f.regressors.size()) fail(ErrorCode::InvalidArgument, "one q per regressor required");
  for (int v : spec.q)
    if (v < 0) fail(ErrorCode::InvalidArgument, "q must be >= 0");
  const int need = std::max(spec.p, *std::max_element(spec.q.begin(), spec.q.end()));
  if (first < 0) first = need;
  if (first < need) fail(ErrorCode::InvalidArgument, "sample start precedes the available lags");
  f.options.det_case = spec.det_case;
  estimate(f, spec, first, y.start());
  return f;
}

ArdlFit fit_ardl(const Series& y, const Frame& xs, const ArdlOptions& options) {
  if (options.max_p < 1 || options.max_q < 0) fail(ErrorCode::InvalidArgument, "max_p >= 1 and max_q >= 0 required");
  ArdlFit f = prepare(y, xs, options);
  const int k = static_cast<int>(f.regressors.size());
  const int first = std::max(options.max_p, options.max_q);
  const int largest = options.max_p + k * (options.max_q + 1) + (has_const(options.det_case) ? 1 : 0) +
                      (has_trend(options.det_case) ? 1 : 0);
  if (static_cast<int>(f.y.size()) - first <= largest)
    fail(ErrorCode::InsufficientData, "common sample does not exceed the largest candidate's parameter count");

  std::vector<ArdlCandidate> grid;
  std::vector<int> q(k, 0);
  for (int p = 1; p <= options.max_p; ++p) {
    std::fill(q.begin(), q.end(), 0);
    while (true) {
      grid.push_back({p, q, 0.0, false});
      int i = 0;
      while (i < k && ++q[i] > options.max_q) q[i++] = 0;
      if (i == k) break;
    }
  }
  std::stable_sort(grid.begin(), grid.end(), [](const ArdlCandidate& a, const ArdlCandidate& b) {
    const int ta = a.p + std::accumulate(a.q.begin(), a.q.end(), 0);
    const int tb = b.p + std::accumulate(b.q.begin(), b.q.end(), 0);
    if (ta != tb) return ta < tb;
    if (a.p != b.p) return a.p < b.p;
    return a.q < b.q;
  });

  const ArdlCandidate* best = nullptr;
  for (auto& c : grid) {
    try {
      const ArdlSpec s{c.p, c.q, options.det_case};
      const OlsFit fit = ols(f.y.tail(f.y.size() - first), levels_design(f, s, first));
      c.criterion = criterion_value(fit, options.criterion);
      if (!best || c.criterion < best->criterion) best = &c;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      c.rank_deficient = true;
    }
  }
  if (!best) fail(ErrorCode::RankDeficient, "every ARDL candidate is rank deficient");
  const ArdlSpec chosen{best->p, best->q, options.det_case};
  f.candidates = grid;
  estimate(f, chosen, first, y.start());
  return f;
}

std::vector<LongRunCoefficient> long_run_coefficients(const ArdlFit& f) {
  const OlsFit& L = f.levels_fit;
  double sum_a = 0.0;
  for (int l = 1; l <= f.spec.p; ++l) sum_a += L.coef(lag_name(f.dependent, l));
  const double D = 1.0 - sum_a;
  if (std::fabs(D) <= 1e-6)
    fail(ErrorCode::UnitRootDenominator, "autoregressive coefficients sum to one; no long-run relation");

  auto make = [&](const std::string& name, const std::vector<std::string>& terms) {
    double num = 0.0;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(L.k);
    for (const auto& t : terms) {
      num += L.coef(t);
      g(L.index_of(t)) = 1.0 / D;
    }
    for (int l = 1; l <= f.spec.p; ++l) g(L.index_of(lag_name(f.dependent, l))) = num / (D * D);
    LongRunCoefficient c;
    c.name = name;
    c.value = num / D;
    c.std_error = std::sqrt(std::max(0.0, g.dot(L.covariance * g)));
    c.t_stat = c.value / c.std_error;
    c.p_value = t_two_sided(c.t_stat, L.df_resid());
    return c;
  };

  std::vector<LongRunCoefficient> out;
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    std::vector<std::string> terms;
    for (int l = 0; l <= f.spec.q[i]; ++l) terms.push_back(lag_name(f.regressors[i], l));
    out.push_back(make(f.regressors[i], terms));
  }
  const std::string r = restricted_term(f.spec.det_case);
  if (!r.empty()) out.push_back(make(r, {r}));
  return out;
}

OlsFit ecm_representation(const ArdlFit& f) {
  const int first = f.first;
  const auto T = f.y.size() - first;
  const Eigen::VectorXd dy = f.y.tail(f.y.size() - 1) - f.y.head(f.y.size() - 1);  // dy(i) = y(i+1) - y(i)
  auto dseg = [&](const Eigen::VectorXd& d, int lag) { return d.segment(first - lag - 1, T); };

  Eigen::VectorXd ec = f.y.segment(first - 1, T);
  for (const auto& c : f.long_run) {
    if (c.name == "const") {
      ec.array() -= c.value;
    } else if (c.name == "trend") {
      ec -= c.value * Eigen::VectorXd::LinSpaced(T, static_cast<double>(first), static_cast<double>(first + T - 1));
    } else {
      const auto it = std::find(f.regressors.begin(), f.regressors.end(), c.name);
      const auto i = it - f.regressors.begin();
      // q = 0 regressors enter at t, as in the conditional ECM
      ec -= c.value * f.x.col(i).segment(f.spec.q[i] == 0 ? first : first - 1, T);
    }
  }

  DesignMatrix X;
  for (int j = 1; j < f.spec.p; ++j) X.append(dseg(dy, j), diff_name(f.dependent, j));
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    const Eigen::VectorXd xi = f.x.col(i);
    const Eigen::VectorXd dx = xi.tail(xi.size() - 1) - xi.head(xi.size() - 1);
    for (int j = 0; j < f.spec.q[i]; ++j) X.append(dseg(dx, j), diff_name(f.regressors[i], j));
  }
  const ArdlCase c = f.spec.det_case;
  if (c == ArdlCase::UnrestrictedConst || c == ArdlCase::RestrictedTrend || c == ArdlCase::UnrestrictedTrend)
    X.append(Eigen::VectorXd::Ones(T), "const");
  if (c == ArdlCase::UnrestrictedTrend)
    X.append(Eigen::VectorXd::LinSpaced(T, first + 1.0, static_cast<double>(first + T)), "trend");
  X.append(ec, "CointEq(-1)");
  return finish_covariance(ols(dseg(dy, 0), X), f.options);
}

BoundsVerdict bounds_verdict(double f, std::optional<double> t, const BoundPair& fb, std::optional<BoundPair> tb) {
  const bool t_usable = t && tb;
  if (f > fb.i1 && (!t_usable || *t < tb->i1)) return BoundsVerdict::Cointegrated;
  if (f < fb.i0) return BoundsVerdict::NotCointegrated;
  return BoundsVerdict::Inconclusive;
}

BoundsResult bounds_test(const ArdlFit& f, BoundsSource source, double level, const CriticalValueTables& tables) {
  const int first = f.first;
  const auto T = f.y.size() - first;
  const Eigen::VectorXd dy = f.y.tail(f.y.size() - 1) - f.y.head(f.y.size() - 1);
  auto dseg = [&](const Eigen::VectorXd& d, int lag) { return d.segment(first - lag - 1, T); };

  BoundsResult r;
  DesignMatrix X;
  X.append(f.y.segment(first - 1, T), lag_name(f.dependent, 1));
  r.level_terms.push_back(lag_name(f.dependent, 1));
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    // q = 0 keeps the contemporaneous level so the model stays a reparameterization.
    const int l = f.spec.q[i] == 0 ? 0 : 1;
    X.append(f.x.col(i).segment(first - l, T), lag_name(f.regressors[i], l));
    r.level_terms.push_back(lag_name(f.regressors[i], l));
  }
  const ArdlCase c = f.spec.det_case;
  if (c == ArdlCase::RestrictedConst) {
    X.append(Eigen::VectorXd::Ones(T), "const");
    r.level_terms.push_back("const");
  }
  if (c == ArdlCase::RestrictedTrend) {
    X.append(Eigen::VectorXd::LinSpaced(T, first + 1.0, static_cast<double>(first + T)), "trend");
    r.level_terms.push_back("trend");
  }
  for (int j = 1; j < f.spec.p; ++j) X.append(dseg(dy, j), diff_name(f.dependent, j));
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    const Eigen::VectorXd xi = f.x.col(i);
    const Eigen::VectorXd dx = xi.tail(xi.size() - 1) - xi.head(xi.size() - 1);
    for (int j = 0; j < f.spec.q[i]; ++j) X.append(dseg(dx, j), diff_name(f.regressors[i], j));
  }
  if (c == ArdlCase::UnrestrictedConst || c == ArdlCase::RestrictedTrend || c == ArdlCase::UnrestrictedTrend)
    X.append(Eigen::VectorXd::Ones(T), "const");
  if (c == ArdlCase::UnrestrictedTrend)
    X.append(Eigen::VectorXd::LinSpaced(T, first + 1.0, static_cast<double>(first + T)), "trend");

  r.conditional_ecm = ols(dseg(dy, 0), X);
  r.f_statistic = wald_zero(r.conditional_ecm, r.level_terms, WaldForm::F).statistic;
  r.t_statistic = r.conditional_ecm.t_stats()(0);
  r.nobs = static_cast<int>(T);
  r.k = static_cast<int>(f.regressors.size());
  r.requested = source;
  r.verdict_level = level;

  const std::string variant = std::to_string(static_cast<int>(c));
  std::optional<double> n;
  r.source = BoundsSource::PesaranAsymptotic;
  if (source == BoundsSource::NarayanSmallSample && r.nobs >= 30 && r.nobs <= 80 &&
      !tables.bound_sample_sizes("bounds_f", variant, r.k).empty()) {
    n = r.nobs;
    r.source = BoundsSource::NarayanSmallSample;
  }
  const bool t_tabulated = tables.has("bounds_t", variant, r.k);
  for (double lev : {0.10, 0.05, 0.025, 0.01}) {
    try {
      r.f_bounds[lev] = tables.bound({"bounds_f", variant, r.k, n}, lev);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingCriticalValues) throw;
    }
    if (!t_tabulated) continue;
    try {
      r.t_bounds[lev] = tables.bound({"bounds_t", variant, r.k, n}, lev);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingCriticalValues) throw;
    }
  }
  const auto fb = r.f_bounds.find(level);
  if (fb == r.f_bounds.end())
    fail(ErrorCode::MissingCriticalValues, "no F bounds for case " + variant + ", k = " + std::to_string(r.k));
  std::optional<BoundPair> tb;
  if (auto it = r.t_bounds.find(level); it != r.t_bounds.end()) tb = it->second;
  r.verdict = bounds_verdict(r.f_statistic, r.t_statistic, fb->second, tb);
  return r;
}

TestResult short_run_causality(const ArdlFit& f, const std::string& regressor) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    if (!regressor.empty() && f.regressors[i] != regressor) continue;
    for (int l = 1; l <= f.spec.q[i]; ++l) names.push_back(lag_name(f.regressors[i], l));
  }
  if (names.empty()) fail(ErrorCode::NoLaggedRegressors, "the selected model has no lagged regressor terms");
  TestResult t = wald_zero(f.levels_fit, names, WaldForm::F);
  t.name = "short-run causality";
  return t;
}

}  // namespace ardlkit
