#include "ardlkit/cointegration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ardlkit/error.hpp"
#include "ardlkit/linreg.hpp"
#include "internal.hpp"

namespace ardlkit {

using detail::diff;

namespace {

void require_aligned(const Series& y, const Series& x) {
  if (y.start() != x.start() || y.size() != x.size())
    fail(ErrorCode::InvalidArgument, "series '" + y.name() + "' and '" + x.name() + "' are not aligned");
}

/// Phillips-type corrections from the AR(1) regression of e on e(-1).
struct PoStats {
  double zt, za;
  int bandwidth;
};

PoStats po_stats(const Eigen::VectorXd& e, std::optional<int> bandwidth) {
  const auto T = e.size();
  DesignMatrix X(e.head(T - 1), {"e(-1)"});
  const OlsFit fit = ols(e.tail(T - 1), X);
  const Eigen::VectorXd& u = fit.residuals;
  const double n = fit.n;
  const int bw = bandwidth ? *bandwidth : detail::newey_west_bandwidth(u);
  const double g0 = fit.ssr / n;
  const double f0 = detail::bartlett_lrv(u, bw);
  const double rho = fit.coefficients(0);
  const double se = fit.std_errors()(0);
  const double s2 = fit.sigma2;
  const double t = (rho - 1.0) / se;
  PoStats out;
  out.bandwidth = bw;
  out.zt = t * std::sqrt(g0 / f0) - n * (f0 - g0) * se / (2.0 * std::sqrt(f0) * std::sqrt(s2));
  out.za = n * (rho - 1.0) - 0.5 * (n * n * se * se / s2) * (f0 - g0);
  return out;
}

TestResult coint_test(const std::string& name, double stat, const std::string& family, Deterministic det, int k,
                      double n, const CriticalValueTables& tables) {
  CvKey key{family, variant_code(det), k, n};
  TestResult t;
  t.name = name;
  t.statistic = stat;
  t.tail = Tail::Lower;
  t.distribution = NullDistribution::tabulated(family + "/" + key.variant + "/k=" + std::to_string(k));
  t.critical_values = tables.critical_values(key);
  if (tables.supports_p_value(key)) t.p_value = tables.p_value(key, stat);
  return t;
}

}  // namespace

EGResult residual_cointegration(const Series& y, const Series& x, ResidualTestKind kind,
                                const ResidualCointSpec& spec, const CriticalValueTables& tables) {
  require_aligned(y, x);
  const auto T = static_cast<Eigen::Index>(y.size());
  if (T <= 20) fail(ErrorCode::InsufficientData, "residual cointegration tests need more than 20 observations");
  DesignMatrix X;
  if (spec.deterministic != Deterministic::None) X.append(Eigen::VectorXd::Ones(T), "const");
  if (spec.deterministic == Deterministic::ConstantTrend) X.append(detail::trend(T), "trend");
  X.append(x.to_vector(), x.name());
  const OlsFit stat = ols(y.to_vector(), X);
  const Eigen::VectorXd& e = stat.residuals;

  EGResult res;
  res.dependent = y.name();
  res.kind = kind;
  res.cointegrating_coefficients = stat.coefficients;
  const int nvars = 2;
  if (kind == ResidualTestKind::EngleGranger) {
    res.lag_order = select_adf_lags(e, Deterministic::None, spec.lags);
    const OlsFit adf = adf_regression(e, res.lag_order, Deterministic::None);
    double sum_delta = 0.0;
    for (int i = 1; i <= res.lag_order; ++i) sum_delta += adf.coefficients(i);
    const double tau = adf.t_stats()(0);
    const double z = adf.n * adf.coefficients(0) / (1.0 - sum_delta);
    res.tau = coint_test("eg_tau", tau, "df_tau", spec.deterministic, nvars, adf.n, tables);
    res.z = coint_test("eg_z", z, "df_z", spec.deterministic, nvars, adf.n, tables);
  } else {
    const PoStats po = po_stats(e, spec.bandwidth);
    res.bandwidth = po.bandwidth;
    res.tau = coint_test("po_zt", po.zt, "df_tau", spec.deterministic, nvars, T - 1.0, tables);
    res.z = coint_test("po_za", po.za, "df_z", spec.deterministic, nvars, T - 1.0, tables);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Johansen

namespace {

struct JohansenCore {
  Eigen::VectorXd lambda;  // descending, length n
  Eigen::MatrixXd beta;
  double logdet_s00 = 0.0;
  int T = 0;
  int n = 0;
  int unrestricted_det = 0;
  int restricted_det = 0;
};

Eigen::MatrixXd residualize(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z) {
  if (Z.cols() == 0) return Y;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(Z.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < Z.cols(); ++j)
    if (std::fabs(R(j, j)) < 1e-10 * std::max(1e-300, Z.col(j).norm()))
      fail(ErrorCode::SingularSystem, "short-run regressors are collinear");
  const Eigen::MatrixXd B = qr.solve(Y);
  return Y - Z * B;
}

JohansenCore johansen_core(const Eigen::MatrixXd& L, int p, JohansenCase c) {
  const auto n = L.cols();
  const auto Tfull = L.rows();
  if (n < 1) fail(ErrorCode::InvalidArgument, "johansen needs at least one column");
  if (p < 1) fail(ErrorCode::InvalidArgument, "var_lags must be >= 1");
  const Eigen::Index first = p;  // first usable observation of dy_t with p-1 lagged differences
  const Eigen::Index T = Tfull - first;
  if (T <= n * p + 3) fail(ErrorCode::InsufficientData, "sample too short for johansen");
  const Eigen::MatrixXd D = L.bottomRows(Tfull - 1) - L.topRows(Tfull - 1);  // D.row(i) = dy_{i+1}

  Eigen::MatrixXd Z0 = D.bottomRows(T);  // dy_t, t = first..
  int dr = (c == JohansenCase::RestrictedConstant || c == JohansenCase::RestrictedTrend) ? 1 : 0;
  Eigen::MatrixXd Z1(T, n + dr);
  Z1.leftCols(n) = L.middleRows(first - 1, T);
  if (c == JohansenCase::RestrictedConstant) Z1.col(n).setOnes();
  if (c == JohansenCase::RestrictedTrend) Z1.col(n) = detail::trend(T, first);

  int du = c == JohansenCase::UnrestrictedConstant || c == JohansenCase::RestrictedTrend ? 1
           : c == JohansenCase::UnrestrictedTrend                                        ? 2
                                                                                         : 0;
  Eigen::MatrixXd Z2(T, n * (p - 1) + du);
  for (int i = 1; i < p; ++i) Z2.middleCols(n * (i - 1), n) = D.middleRows(first - 1 - i, T);
  if (du >= 1) Z2.col(n * (p - 1)).setOnes();
  if (du == 2) Z2.col(n * (p - 1) + 1) = detail::trend(T, first);

  const Eigen::MatrixXd R0 = residualize(Z0, Z2);
  const Eigen::MatrixXd R1 = residualize(Z1, Z2);
  const double Td = static_cast<double>(T);
  const Eigen::MatrixXd S00 = R0.transpose() * R0 / Td;
  const Eigen::MatrixXd S11 = R1.transpose() * R1 / Td;
  const Eigen::MatrixXd S01 = R0.transpose() * R1 / Td;

  Eigen::LLT<Eigen::MatrixXd> l00(S00);
  Eigen::LLT<Eigen::MatrixXd> l11(S11);
  if (l00.info() != Eigen::Success || l11.info() != Eigen::Success)
    fail(ErrorCode::SingularSystem, "moment matrices are not positive definite");
  const Eigen::MatrixXd A = S01.transpose() * l00.solve(S01);
  const Eigen::MatrixXd Linv = l11.matrixL().solve(Eigen::MatrixXd::Identity(S11.rows(), S11.cols()));
  Eigen::MatrixXd C = Linv * A * Linv.transpose();
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) fail(ErrorCode::SingularSystem, "eigen decomposition failed");

  JohansenCore core;
  core.n = static_cast<int>(n);
  core.T = static_cast<int>(T);
  core.unrestricted_det = du;
  core.restricted_det = dr;
  const auto m = C.rows();
  core.lambda.resize(n);
  core.beta.resize(m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = m - 1 - i;  // ascending order from the solver
    core.lambda(i) = std::clamp(es.eigenvalues()(src), 0.0, 1.0 - 1e-15);
    core.beta.col(i) = Linv.transpose() * es.eigenvectors().col(src);
  }
  core.logdet_s00 = 2.0 * Eigen::MatrixXd(l00.matrixL()).diagonal().array().log().sum();
  return core;
}

void fill_likelihood(const JohansenCore& c, int p, Eigen::VectorXd& ll, Eigen::VectorXd& aic, Eigen::VectorXd& sc) {
  const int n = c.n;
  const double T = c.T;
  ll.resize(n + 1);
  aic.resize(n + 1);
  sc.resize(n + 1);
  double acc = 0.0;
  for (int r = 0; r <= n; ++r) {
    if (r > 0) acc += std::log(1.0 - c.lambda(r - 1));
    ll(r) = -0.5 * T * n * (1.0 + std::log(2.0 * std::numbers::pi)) - 0.5 * T * (c.logdet_s00 + acc);
    const int K = n * n * (p - 1) + n * c.unrestricted_det + 2 * n * r - r * r + r * c.restricted_det;
    aic(r) = -2.0 * ll(r) / T + 2.0 * K / T;
    sc(r) = -2.0 * ll(r) / T + K * std::log(T) / T;
  }
}

}  // namespace

JohansenResult johansen(const Eigen::MatrixXd& levels, int var_lags, JohansenCase det_case,
                        const CriticalValueTables* tables) {
  if (levels.cols() < 1) fail(ErrorCode::InvalidArgument, "johansen needs at least one series");
  const JohansenCore core = johansen_core(levels, var_lags, det_case);
  const int n = core.n;
  JohansenResult res;
  res.det_case = det_case;
  res.var_lags = var_lags;
  res.nobs = core.T;
  res.eigenvalues = core.lambda;
  res.beta = core.beta;
  res.trace.resize(n);
  res.max_eigen.resize(n);
  double acc = 0.0;
  for (int r = n - 1; r >= 0; --r) {
    acc += -core.T * std::log(1.0 - core.lambda(r));
    res.trace(r) = acc;
  }
  for (int r = 0; r < n; ++r) res.max_eigen(r) = r + 1 < n ? res.trace(r) - res.trace(r + 1) : res.trace(r);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  res.trace_cv5 = Eigen::VectorXd::Constant(n, nan);
  res.max_cv5 = Eigen::VectorXd::Constant(n, nan);
  res.trace_p = Eigen::VectorXd::Constant(n, nan);
  res.max_p = Eigen::VectorXd::Constant(n, nan);
  if (tables) {
    const std::string variant = std::to_string(static_cast<int>(det_case));
    for (int r = 0; r < n; ++r) {
      const int k = n - r;
      CvKey kt{"johansen_trace", variant, k, std::nullopt};
      CvKey km{"johansen_max", variant, k, std::nullopt};
      if (tables->has(kt.family, variant, k)) {
        res.trace_cv5(r) = tables->critical_value(kt, 0.05);
        if (tables->supports_p_value(kt)) res.trace_p(r) = tables->p_value(kt, res.trace(r));
      }
      if (tables->has(km.family, variant, k)) {
        res.max_cv5(r) = tables->critical_value(km, 0.05);
        if (tables->supports_p_value(km)) res.max_p(r) = tables->p_value(km, res.max_eigen(r));
      }
    }
  }
  fill_likelihood(core, var_lags, res.loglik, res.aic, res.sc);
  return res;
}

JohansenSummary johansen_summary(const Eigen::MatrixXd& levels, int var_lags) {
  JohansenSummary s;
  const auto n = levels.cols();
  s.cases = {JohansenCase::None, JohansenCase::RestrictedConstant, JohansenCase::UnrestrictedConstant,
             JohansenCase::RestrictedTrend, JohansenCase::UnrestrictedTrend};
  s.loglik.resize(n + 1, 5);
  s.aic.resize(n + 1, 5);
  s.sc.resize(n + 1, 5);
  for (int j = 0; j < 5; ++j) {
    const JohansenCore core = johansen_core(levels, var_lags, s.cases[j]);
    Eigen::VectorXd ll, aic, sc;
    fill_likelihood(core, var_lags, ll, aic, sc);
    s.loglik.col(j) = ll;
    s.aic.col(j) = aic;
    s.sc.col(j) = sc;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Gregory-Hansen

const char* gh_code(GhModel m) {
  switch (m) {
    case GhModel::Level:
      return "level";
    case GhModel::LevelTrend:
      return "level_trend";
    case GhModel::Regime:
      return "regime";
    case GhModel::RegimeTrend:
      return "regime_trend";
  }
  return "level";
}

bool GhStatistic::rejects(double level) const {
  for (auto& [lev, cv] : critical_values)
    if (std::fabs(lev - level) < 1e-12) return value < cv;
  fail(ErrorCode::MissingCriticalValues, "no Gregory-Hansen critical value at requested level");
}

namespace {

Eigen::VectorXd gh_residuals(const Eigen::VectorXd& y, const Eigen::VectorXd& x, GhModel model, int b) {
  const auto T = y.size();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(T);
  for (Eigen::Index t = b + 1; t < T; ++t) phi(t) = 1.0;
  const Eigen::VectorXd tr = detail::trend(T);
  DesignMatrix X;
  X.append(Eigen::VectorXd::Ones(T), "const");
  X.append(phi, "du");
  if (model == GhModel::LevelTrend || model == GhModel::RegimeTrend) X.append(tr, "trend");
  if (model == GhModel::RegimeTrend) X.append(tr.cwiseProduct(phi), "trend*du");
  X.append(x, "x");
  if (model == GhModel::Regime || model == GhModel::RegimeTrend) X.append(x.cwiseProduct(phi), "x*du");
  return ols(y, X).residuals;
}

/// Gregory-Hansen bias-corrected first-order serial correlation statistics.
std::pair<double, double> gh_phillips(const Eigen::VectorXd& e, int bandwidth) {
  const auto n = e.size();
  const Eigen::VectorXd lag = e.head(n - 1);
  const Eigen::VectorXd lead = e.tail(n - 1);
  const double see = lag.squaredNorm();
  const double rho = lag.dot(lead) / see;
  const Eigen::VectorXd v = lead - rho * lag;
  const auto m = v.size();
  double lambda = 0.0;
  double g0 = v.squaredNorm() / static_cast<double>(m);
  for (int j = 1; j <= bandwidth && j < m; ++j) {
    const double g = v.tail(m - j).dot(v.head(m - j)) / static_cast<double>(m);
    lambda += (1.0 - j / (bandwidth + 1.0)) * g;
  }
  const double sigma2 = g0 + 2.0 * lambda;
  const double rho_star = (lag.dot(lead) - (n - 1) * lambda) / see;
  const double za = static_cast<double>(n) * (rho_star - 1.0);
  const double zt = (rho_star - 1.0) / std::sqrt(sigma2 / see);
  return {zt, za};
}

int gh_bandwidth(const Eigen::VectorXd& e, std::optional<int> bw) {
  if (bw) return *bw;
  const auto n = e.size();
  const Eigen::VectorXd lag = e.head(n - 1);
  const Eigen::VectorXd lead = e.tail(n - 1);
  const double rho = lag.dot(lead) / lag.squaredNorm();
  return detail::newey_west_bandwidth(lead - rho * lag);
}

}  // namespace

GhAt gregory_hansen_at(const Eigen::VectorXd& y, const Eigen::VectorXd& x, GhModel model, int b, int lags,
                       int bandwidth) {
  const Eigen::VectorXd e = gh_residuals(y, x, model, b);
  const double adf = adf_regression(e, lags, Deterministic::None).t_stats()(0);
  auto [zt, za] = gh_phillips(e, bandwidth);
  return {adf, zt, za};
}

GHResult gregory_hansen(const Series& y, const Series& x, GhModel model, const GhSpec& spec,
                        const CriticalValueTables& tables) {
  require_aligned(y, x);
  const Eigen::VectorXd yv = y.to_vector();
  const Eigen::VectorXd xv = x.to_vector();
  const int T = static_cast<int>(yv.size());
  if (T < 30) fail(ErrorCode::InsufficientData, "gregory_hansen needs at least 30 observations");
  const auto [lo, hi] = break_range(T, spec.trimming);
  GHResult res;
  res.model = model;
  res.dependent = y.name();
  const double inf = std::numeric_limits<double>::infinity();
  res.adf.value = res.zt.value = res.za.value = inf;
  for (int b = lo; b <= hi; ++b) {
    const Eigen::VectorXd e = gh_residuals(yv, xv, model, b);
    const int p = select_adf_lags(e, Deterministic::None, spec.lags);
    const double adf = adf_regression(e, p, Deterministic::None).t_stats()(0);
    auto [zt, za] = gh_phillips(e, gh_bandwidth(e, spec.bandwidth));
    if (adf < res.adf.value) res.adf = {adf, b, {}, {}};
    if (zt < res.zt.value) res.zt = {zt, b, {}, {}};
    if (za < res.za.value) res.za = {za, b, {}, {}};
  }
  for (GhStatistic* s : {&res.adf, &res.zt, &res.za}) s->break_date = y.date(static_cast<std::size_t>(s->break_index));
  res.adf.critical_values = tables.critical_values({"gh_t", gh_code(model), 1, std::nullopt});
  res.zt.critical_values = res.adf.critical_values;
  res.za.critical_values = tables.critical_values({"gh_za", gh_code(model), 1, std::nullopt});
  return res;
}

}  // namespace ardlkit
