#include "ardlkit/unitroot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ardlkit/error.hpp"
#include "ardlkit/linreg.hpp"
#include "internal.hpp"

namespace ardlkit {

using detail::diff;

const char* variant_code(Deterministic d) {
  switch (d) {
    case Deterministic::None:
      return "n";
    case Deterministic::Constant:
      return "c";
    case Deterministic::ConstantTrend:
      return "ct";
  }
  return "c";
}

namespace {

void add_deterministics(DesignMatrix& X, Deterministic det, Eigen::Index first, Eigen::Index count) {
  if (det == Deterministic::None) return;
  X.append(Eigen::VectorXd::Ones(count), "const");
  if (det == Deterministic::ConstantTrend) X.append(detail::trend(count, first), "trend");
}

double criterion(const OlsFit& f, LagSelection::Mode mode) { return mode == LagSelection::Mode::Aic ? f.aic : f.sc; }

/// Chooses lags 0..max_p by criterion using fits produced by `fit_at(p, first)`
/// on the common sample first = max_p + offset.
template <class F>
int select_lags(const LagSelection& sel, int max_p, int offset, F&& fit_at) {
  if (sel.mode == LagSelection::Mode::Fixed) return sel.lags;
  int best = 0;
  double best_ic = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= max_p; ++p) {
    const double ic = criterion(fit_at(p, max_p + offset), sel.mode);
    if (ic < best_ic) {
      best_ic = ic;
      best = p;
    }
  }
  return best;
}

int resolve_max_lag(const LagSelection& sel, Eigen::Index n) {
  if (sel.mode == LagSelection::Mode::Fixed) return sel.lags;
  return sel.max_lag >= 0 ? sel.max_lag : detail::schwert_max_lag(n);
}

void check_length(Eigen::Index n, int need, const char* what) {
  if (n < need) fail(ErrorCode::InsufficientData, std::string(what) + " needs at least " + std::to_string(need) +
                                                      " observations, got " + std::to_string(n));
}

void check_variation(const Eigen::VectorXd& y) {
  if (y.size() == 0 || y.maxCoeff() == y.minCoeff()) fail(ErrorCode::ZeroVariance, "series is constant");
}

TestResult tabulated(const std::string& name, double stat, const CvKey& key, const CriticalValueTables& tables) {
  TestResult t;
  t.name = name;
  t.statistic = stat;
  t.distribution = NullDistribution::tabulated(key.family + "/" + key.variant);
  t.tail = tables.tail(key.family);
  t.critical_values = tables.critical_values(key);
  if (tables.supports_p_value(key)) t.p_value = tables.p_value(key, stat);
  return t;
}

/// GLS quasi-differencing with parameter a: x_0, x_t - a x_{t-1}.
Eigen::MatrixXd quasi_diff(const Eigen::MatrixXd& x, double a) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index t = x.rows() - 1; t >= 1; --t) out.row(t) = x.row(t) - a * x.row(t - 1);
  return out;
}

Eigen::MatrixXd det_matrix(Eigen::Index n, Deterministic det) {
  Eigen::MatrixXd Z(n, det == Deterministic::ConstantTrend ? 2 : 1);
  Z.col(0).setOnes();
  if (det == Deterministic::ConstantTrend) Z.col(1) = detail::trend(n);
  return Z;
}

double gls_cbar(Deterministic det) { return det == Deterministic::ConstantTrend ? -13.5 : -7.0; }

}  // namespace

OlsFit adf_regression(const Eigen::VectorXd& y, int lags, Deterministic det, int first) {
  const auto T = y.size();
  if (first < 0) first = lags + 1;
  if (first < lags + 1) fail(ErrorCode::InvalidArgument, "first observation precedes available lags");
  const Eigen::Index count = T - first;
  const Eigen::VectorXd dy = diff(y);  // dy(i) = y(i+1) - y(i)
  DesignMatrix X;
  X.append(y.segment(first - 1, count), "y(-1)");
  for (int i = 1; i <= lags; ++i) X.append(dy.segment(first - 1 - i, count), "dy(-" + std::to_string(i) + ")");
  add_deterministics(X, det, first, count);
  return ols(dy.segment(first - 1, count), X);
}

int select_adf_lags(const Eigen::VectorXd& y, Deterministic det, const LagSelection& sel) {
  const int max_p = resolve_max_lag(sel, y.size());
  return select_lags(sel, max_p, 1, [&](int p, int first) { return adf_regression(y, p, det, first); });
}

UnitRootResult unit_root(const Eigen::VectorXd& y, UnitRootKind kind, const UnitRootSpec& spec,
                         const CriticalValueTables& tables) {
  check_variation(y);
  const auto T = y.size();
  UnitRootResult res;
  res.kind = kind;
  const Deterministic det = spec.deterministic;
  const std::string variant = variant_code(det);

  switch (kind) {
    case UnitRootKind::Adf: {
      check_length(T, 10, "adf");
      res.lags = select_adf_lags(y, det, spec.lags);
      const OlsFit fit = adf_regression(y, res.lags, det);
      res.nobs = fit.n;
      res.test = tabulated("adf", fit.t_stats()(0), {"df_tau", variant, 1, double(fit.n)}, tables);
      break;
    }
    case UnitRootKind::Dfgls: {
      if (det == Deterministic::None) fail(ErrorCode::InvalidArgument, "dfgls needs a constant or constant+trend");
      check_length(T, 10, "dfgls");
      const double a = 1.0 + gls_cbar(det) / static_cast<double>(T);
      const Eigen::MatrixXd Z = det_matrix(T, det);
      const Eigen::MatrixXd Zq = quasi_diff(Z, a);
      const Eigen::VectorXd yq = quasi_diff(y, a);
      const Eigen::VectorXd beta = Zq.colPivHouseholderQr().solve(yq);
      const Eigen::VectorXd yd = y - Z * beta;
      res.lags = select_adf_lags(yd, Deterministic::None, spec.lags);
      const OlsFit fit = adf_regression(yd, res.lags, Deterministic::None);
      res.nobs = fit.n;
      res.test = tabulated("dfgls", fit.t_stats()(0), {"dfgls", variant, 1, double(fit.n)}, tables);
      break;
    }
    case UnitRootKind::Pp: {
      check_length(T, 10, "pp");
      const OlsFit fit = adf_regression(y, 0, det);
      const Eigen::VectorXd& e = fit.residuals;
      const double n = fit.n;
      res.bandwidth = spec.bandwidth ? *spec.bandwidth : detail::newey_west_bandwidth(e);
      if (res.bandwidth >= fit.n) fail(ErrorCode::BandwidthTooLarge, std::to_string(res.bandwidth));
      const double g0 = fit.ssr / n;
      const double f0 = detail::bartlett_lrv(e, res.bandwidth);
      const double t = fit.t_stats()(0);
      const double se = fit.std_errors()(0);
      const double s = std::sqrt(fit.sigma2);
      const double zt = t * std::sqrt(g0 / f0) - n * (f0 - g0) * se / (2.0 * std::sqrt(f0) * s);
      res.nobs = fit.n;
      res.lags = 0;
      res.test = tabulated("pp", zt, {"df_tau", variant, 1, n}, tables);
      break;
    }
    case UnitRootKind::Kpss: {
      if (det == Deterministic::None) fail(ErrorCode::InvalidArgument, "kpss needs a constant or constant+trend");
      check_length(T, 10, "kpss");
      DesignMatrix X(det_matrix(T, det), det == Deterministic::ConstantTrend
                                             ? std::vector<std::string>{"const", "trend"}
                                             : std::vector<std::string>{"const"});
      const OlsFit fit = ols(y, X);
      const Eigen::VectorXd& e = fit.residuals;
      res.bandwidth = spec.bandwidth ? *spec.bandwidth : detail::newey_west_bandwidth(e);
      if (res.bandwidth >= T) fail(ErrorCode::BandwidthTooLarge, std::to_string(res.bandwidth));
      const double f0 = detail::bartlett_lrv(e, res.bandwidth);
      double s = 0.0;
      double acc = 0.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        acc += e(t);
        s += acc * acc;
      }
      const double eta = s / (static_cast<double>(T) * T * f0);
      res.nobs = static_cast<int>(T);
      res.rejects_below = false;
      res.test = tabulated("kpss", eta, {"kpss", variant, 1, std::nullopt}, tables);
      break;
    }
    case UnitRootKind::Ers: {
      if (det == Deterministic::None) fail(ErrorCode::InvalidArgument, "ers needs a constant or constant+trend");
      check_length(T, 10, "ers");
      const double abar = 1.0 + gls_cbar(det) / static_cast<double>(T);
      const Eigen::MatrixXd Z = det_matrix(T, det);
      auto ssr_at = [&](double a) {
        const Eigen::MatrixXd Zq = quasi_diff(Z, a);
        const Eigen::VectorXd yq = quasi_diff(y, a);
        const Eigen::VectorXd beta = Zq.colPivHouseholderQr().solve(yq);
        return (yq - Zq * beta).squaredNorm();
      };
      const double s_abar = ssr_at(abar);
      const double s_one = ssr_at(1.0);
      res.lags = select_adf_lags(y, det, spec.lags);
      const OlsFit ar = adf_regression(y, res.lags, det);
      double sum_beta = 0.0;
      for (int i = 1; i <= res.lags; ++i) sum_beta += ar.coefficients(i);
      const double f0 = (ar.ssr / ar.n) / ((1.0 - sum_beta) * (1.0 - sum_beta));
      const double pt = (s_abar - abar * s_one) / f0;
      res.nobs = static_cast<int>(T);
      res.test = tabulated("ers", pt, {"ers", variant, 1, double(T)}, tables);
      break;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Break tests

std::pair<int, int> break_range(int n, double trimming) {
  if (!(trimming > 0.0 && trimming < 0.5)) fail(ErrorCode::InvalidArgument, "trimming must lie in (0, 0.5)");
  if (n * trimming < 2.0) fail(ErrorCode::InsufficientData, "trimmed interior too small");
  const int lo = std::max(2, static_cast<int>(std::ceil(trimming * n)));
  const int hi = std::min(n - 3, static_cast<int>(std::floor((1.0 - trimming) * n)));
  if (hi < lo) fail(ErrorCode::InsufficientData, "trimmed interior is empty");
  return {lo, hi};
}

namespace {

Eigen::VectorXd du(Eigen::Index T, int b) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(T);
  for (Eigen::Index t = b + 1; t < T; ++t) v(t) = 1.0;
  return v;
}

Eigen::VectorXd dt(Eigen::Index T, int b) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(T);
  for (Eigen::Index t = b + 1; t < T; ++t) v(t) = static_cast<double>(t - b);
  return v;
}

Eigen::VectorXd pulse(Eigen::Index T, int at) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(T);
  if (at >= 0 && at < T) v(at) = 1.0;
  return v;
}

/// Regression of dy_t on y_{t-1}, lags of dy and the given extra full-length
/// columns, over t in [first, T).
OlsFit break_adf(const Eigen::VectorXd& y, int lags, int first, const std::vector<Eigen::VectorXd>& extra,
                 bool constant_trend) {
  const auto T = y.size();
  const Eigen::Index count = T - first;
  const Eigen::VectorXd dy = diff(y);
  DesignMatrix X;
  X.append(y.segment(first - 1, count), "y(-1)");
  for (int i = 1; i <= lags; ++i) X.append(dy.segment(first - 1 - i, count), "dy(-" + std::to_string(i) + ")");
  if (constant_trend) {
    X.append(Eigen::VectorXd::Ones(count), "const");
    X.append(detail::trend(count, first), "trend");
  }
  for (std::size_t j = 0; j < extra.size(); ++j) X.append(extra[j].segment(first, count), "d" + std::to_string(j));
  return ols(dy.segment(first - 1, count), X);
}

OlsFit za_fit(const Eigen::VectorXd& y, int b, int lags, int first) {
  const auto T = y.size();
  return break_adf(y, lags, first, {du(T, b), dt(T, b)}, true);
}

OlsFit io_fit(const Eigen::VectorXd& y, int b, int lags, int first) {
  const auto T = y.size();
  return break_adf(y, lags, first, {du(T, b), dt(T, b), pulse(T, b + 1)}, true);
}

Eigen::VectorXd ao_detrended(const Eigen::VectorXd& y, int b) {
  const auto T = y.size();
  DesignMatrix X;
  X.append(Eigen::VectorXd::Ones(T), "const");
  X.append(detail::trend(T), "trend");
  X.append(du(T, b), "du");
  X.append(dt(T, b), "dt");
  return ols(y, X).residuals;
}

OlsFit ao_fit(const Eigen::VectorXd& yt, int b, int lags, int first) {
  const auto T = yt.size();
  std::vector<Eigen::VectorXd> pulses;
  for (int i = 0; i <= lags; ++i) pulses.push_back(pulse(T, b + 1 + i));
  // pulses that fall outside the estimation sample are dropped
  std::vector<Eigen::VectorXd> used;
  for (auto& p : pulses)
    if (p.segment(first, T - first).any()) used.push_back(std::move(p));
  return break_adf(yt, lags, first, used, false);
}

/// LM detrending for two breaks; returns the test-regression fit.
OlsFit ls_fit(const Eigen::VectorXd& y, BreakKind kind, int b1, int b2, int lags) {
  const auto T = y.size();
  const bool trend_break = kind == BreakKind::LsBreak;
  // Z_t = [t, D1, D2, (DT1, DT2)] without the constant; dZ_t its difference.
  const int kz = trend_break ? 5 : 3;
  Eigen::MatrixXd Z(T, kz);
  Z.col(0) = detail::trend(T);
  Z.col(1) = du(T, b1);
  Z.col(2) = du(T, b2);
  if (trend_break) {
    Z.col(3) = dt(T, b1);
    Z.col(4) = dt(T, b2);
  }
  const Eigen::MatrixXd dZ = Z.bottomRows(T - 1) - Z.topRows(T - 1);
  const Eigen::VectorXd dy = diff(y);
  const Eigen::VectorXd delta = dZ.colPivHouseholderQr().solve(dy);
  const double psi = y(0) - Z.row(0).dot(delta);
  const Eigen::VectorXd S = y - Z * delta - Eigen::VectorXd::Constant(T, psi);
  const Eigen::VectorXd dS = diff(S);

  // dy_t on dZ_t, S_{t-1}, dS_{t-1..t-p} for t = lags+1 .. T-1
  const int first = lags + 1;
  const Eigen::Index count = T - first;
  DesignMatrix X;
  X.append(S.segment(first - 1, count), "S(-1)");
  for (int j = 0; j < kz; ++j) X.append(dZ.col(j).segment(first - 1, count), "dz" + std::to_string(j));
  for (int i = 1; i <= lags; ++i) X.append(dS.segment(first - 1 - i, count), "dS(-" + std::to_string(i) + ")");
  return ols(dy.segment(first - 1, count), X);
}

/// No-break LM regression used to fix the LS lag count.
OlsFit ls_nobreak_fit(const Eigen::VectorXd& y, int lags, int first) {
  const auto T = y.size();
  const Eigen::VectorXd dy = diff(y);
  const double delta = dy.mean();
  const Eigen::VectorXd S = y - detail::trend(T) * delta - Eigen::VectorXd::Constant(T, y(0) - delta);
  const Eigen::VectorXd dS = diff(S);
  const Eigen::Index count = T - first;
  DesignMatrix X;
  X.append(S.segment(first - 1, count), "S(-1)");
  X.append(Eigen::VectorXd::Ones(count), "dz0");
  for (int i = 1; i <= lags; ++i) X.append(dS.segment(first - 1 - i, count), "dS(-" + std::to_string(i) + ")");
  return ols(dy.segment(first - 1, count), X);
}

std::string ls_variant(BreakKind kind, int b1, int b2, int T) {
  if (kind == BreakKind::LsCrash) return "crash";
  char buf[64];
  std::snprintf(buf, sizeof buf, "break:%.6g:%.6g", (b1 + 1.0) / T, (b2 + 1.0) / T);
  return buf;
}

}  // namespace

double break_statistic_at(const Eigen::VectorXd& y, BreakKind kind, const std::vector<int>& breaks, int lags) {
  const bool two = kind == BreakKind::LsCrash || kind == BreakKind::LsBreak;
  if (breaks.size() != (two ? 2u : 1u)) fail(ErrorCode::InvalidArgument, "wrong number of break dates");
  switch (kind) {
    case BreakKind::ZivotAndrews:
      return za_fit(y, breaks[0], lags, lags + 1).t_stats()(0);
    case BreakKind::PerronIo:
      return io_fit(y, breaks[0], lags, lags + 1).t_stats()(0);
    case BreakKind::PerronAo:
      return ao_fit(ao_detrended(y, breaks[0]), breaks[0], lags, lags + 1).t_stats()(0);
    case BreakKind::LsCrash:
    case BreakKind::LsBreak:
      return ls_fit(y, kind, breaks[0], breaks[1], lags).t_stats()(0);
  }
  return 0.0;
}

bool BreakResult::rejects(double level) const {
  auto it = critical_values.find(level);
  if (it == critical_values.end()) {
    for (auto& [lev, cv] : critical_values)
      if (std::fabs(lev - level) < 1e-12) return statistic < cv;
    fail(ErrorCode::MissingCriticalValues, "no critical value at requested level");
  }
  return statistic < it->second;
}

TestResult BreakResult::as_test(const std::string& name) const {
  TestResult t;
  t.name = name;
  t.statistic = statistic;
  t.tail = Tail::Lower;
  t.critical_values = critical_values;
  t.distribution = NullDistribution::tabulated(name);
  return t;
}

BreakResult break_unit_root(const Series& s, BreakKind kind, const BreakSpec& spec, const CriticalValueTables& tables) {
  const Eigen::VectorXd y = s.to_vector();
  check_variation(y);
  const int T = static_cast<int>(y.size());
  check_length(T, 30, "break unit root test");
  const bool two = kind == BreakKind::LsCrash || kind == BreakKind::LsBreak;
  const double trim = spec.trimming ? *spec.trimming : (two ? 0.10 : 0.15);
  const auto [lo, hi] = break_range(T, trim);

  BreakResult res;
  res.kind = kind;
  res.statistic = std::numeric_limits<double>::infinity();

  if (!two) {
    const int max_p = resolve_max_lag(spec.lags, T);
    for (int b = lo; b <= hi; ++b) {
      Eigen::VectorXd base = y;
      if (kind == BreakKind::PerronAo) base = ao_detrended(y, b);
      auto fit_at = [&](int p, int first) {
        switch (kind) {
          case BreakKind::ZivotAndrews:
            return za_fit(y, b, p, first);
          case BreakKind::PerronIo:
            return io_fit(y, b, p, first);
          default:
            return ao_fit(base, b, p, first);
        }
      };
      const int p = select_lags(spec.lags, max_p, 1, fit_at);
      const double stat = fit_at(p, p + 1).t_stats()(0);
      if (stat < res.statistic) {  // strict: earliest date wins ties
        res.statistic = stat;
        res.break_index = {b};
        res.lags = p;
      }
    }
  } else {
    int p = 0;
    if (spec.ls_lags) {
      p = *spec.ls_lags;
    } else {
      LagSelection sel = spec.lags;
      if (sel.mode != LagSelection::Mode::Fixed && sel.max_lag < 0) sel.max_lag = std::min(8, detail::schwert_max_lag(T));
      p = select_lags(sel, resolve_max_lag(sel, T), 1, [&](int q, int first) { return ls_nobreak_fit(y, q, first); });
    }
    res.lags = p;
    for (int b1 = lo; b1 <= hi; ++b1) {
      for (int b2 = b1 + 2; b2 <= hi; ++b2) {
        const double stat = ls_fit(y, kind, b1, b2, p).t_stats()(0);
        if (stat < res.statistic) {
          res.statistic = stat;
          res.break_index = {b1, b2};
        }
      }
    }
  }
  for (int b : res.break_index) res.break_dates.push_back(s.date(static_cast<std::size_t>(b)));

  CvKey key;
  switch (kind) {
    case BreakKind::ZivotAndrews:
      key = {"za", "ct", 1, std::nullopt};
      break;
    case BreakKind::PerronIo:
      key = {"perron_io", "ct", 1, std::nullopt};
      break;
    case BreakKind::PerronAo:
      key = {"perron_ao", "ct", 1, std::nullopt};
      break;
    default:
      key = {"ls", ls_variant(kind, res.break_index[0], res.break_index[1], T), 1, std::nullopt};
  }
  res.critical_values = tables.critical_values(key);
  return res;
}

int max_integration_order(const Frame& frame, double level, const CriticalValueTables& tables) {
  if (frame.empty()) fail(ErrorCode::InvalidArgument, "empty frame");
  int order = 0;
  for (const auto& col : frame.columns()) {
    Eigen::VectorXd y = col.to_vector();
    int d = 0;
    for (;; ++d) {
      const auto r = unit_root(y, UnitRootKind::Adf, UnitRootSpec{}, tables);
      if (r.test.p_value && *r.test.p_value < level) break;
      if (d == 2)
        fail(ErrorCode::ExcessIntegration, "column '" + col.name() + "' is not stationary after two differences");
      y = diff(y);
    }
    order = std::max(order, d);
  }
  return order;
}

}  // namespace ardlkit
