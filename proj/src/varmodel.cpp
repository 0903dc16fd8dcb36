#include "ardlkit/varmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ardlkit/distributions.hpp"
#include "ardlkit/error.hpp"

namespace ardlkit {

namespace {

std::string lag_name(const std::string& v, int l) { return v + "(-" + std::to_string(l) + ")"; }

double logdet_spd(const Eigen::MatrixXd& S) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}

/// Residuals and ML covariance for lag p on observations [first, end); p may be 0.
struct SystemFit {
  Eigen::MatrixXd resid;
  DesignMatrix X;
  std::vector<OlsFit> eqs;
};

SystemFit system_ols(const Eigen::MatrixXd& L, const std::vector<std::string>& names, int p, VarDeterministic det,
                     int extra, int first) {
  const auto n = L.cols();
  const auto T = L.rows() - first;
  DesignMatrix X;
  for (Eigen::Index v = 0; v < n; ++v)
    for (int l = 1; l <= p; ++l) X.append(L.col(v).segment(first - l, T), lag_name(names[v], l));
  if (det != VarDeterministic::None) X.append(Eigen::VectorXd::Ones(T), "const");
  if (det == VarDeterministic::ConstTrend)
    X.append(Eigen::VectorXd::LinSpaced(T, first + 1.0, static_cast<double>(first + T)), "trend");
  for (Eigen::Index v = 0; v < n; ++v)
    for (int l = p + 1; l <= p + extra; ++l) X.append(L.col(v).segment(first - l, T), lag_name(names[v], l));
  if (T <= X.cols()) fail(ErrorCode::InsufficientData, "VAR sample of " + std::to_string(T) + " observations for " +
                                                           std::to_string(X.cols()) + " regressors per equation");
  SystemFit s;
  s.resid.resize(T, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (X.cols() == 0) {
      s.resid.col(i) = L.col(i).segment(first, T);
      continue;
    }
    s.eqs.push_back(ols(L.col(i).segment(first, T), X));
    s.eqs.back().design.names = X.names;
    s.resid.col(i) = s.eqs.back().residuals;
  }
  s.X = std::move(X);
  return s;
}

}  // namespace

Eigen::MatrixXd VarFit::companion() const {
  const int k = n();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k * p, k * p);
  for (int l = 0; l < p; ++l) C.block(0, k * l, k, k) = A[l];
  if (p > 1) C.block(k, 0, k * (p - 1), k * (p - 1)).setIdentity();
  return C;
}

int VarFit::index_of(const std::string& name) const {
  for (int i = 0; i < n(); ++i)
    if (names[i] == name) return i;
  fail(ErrorCode::InvalidArgument, "variable '" + name + "' is not in the VAR");
}

VarFit fit_var(const Eigen::MatrixXd& levels, const std::vector<std::string>& names, int p, VarDeterministic det,
               int extra, int first) {
  if (p < 1) fail(ErrorCode::InvalidArgument, "VAR lag order must be >= 1");
  if (extra < 0) fail(ErrorCode::InvalidArgument, "extra_exog_lags must be >= 0");
  if (static_cast<std::size_t>(levels.cols()) != names.size())
    fail(ErrorCode::InvalidArgument, "one name per VAR column required");
  if (first < 0) first = p + extra;
  if (first < p + extra) fail(ErrorCode::InvalidArgument, "sample start precedes the available lags");
  if (levels.rows() <= first) fail(ErrorCode::InsufficientData, "no observations left after lag truncation");

  SystemFit s = system_ols(levels, names, p, det, extra, first);
  VarFit f;
  f.p = p;
  f.extra_exog_lags = extra;
  f.deterministic = det;
  f.names = names;
  f.levels = levels;
  const int n = static_cast<int>(names.size());
  f.T = static_cast<int>(s.resid.rows());
  f.m = static_cast<int>(s.X.cols());
  f.Y = levels.bottomRows(f.T);
  f.A.assign(p, Eigen::MatrixXd::Zero(n, n));
  const int nx = static_cast<int>(s.X.cols()) - n * p;
  f.exog.resize(n, nx);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd& b = s.eqs[i].coefficients;
    for (int v = 0; v < n; ++v)
      for (int l = 0; l < p; ++l) f.A[l](i, v) = b(v * p + l);
    f.exog.row(i) = b.tail(nx).transpose();
  }
  f.exog_names.assign(s.X.names.end() - nx, s.X.names.end());
  f.residuals = s.resid;
  f.sigma = s.resid.transpose() * s.resid / static_cast<double>(f.T);
  f.sigma_adjusted = s.resid.transpose() * s.resid / static_cast<double>(f.T - f.m);
  f.equations = std::move(s.eqs);
  f.regressors = std::move(s.X);

  const double T = f.T;
  const double ld = logdet_spd(f.sigma);
  f.loglik = -0.5 * T * n * (1.0 + std::log(2.0 * std::numbers::pi)) - 0.5 * T * ld;
  const double K = static_cast<double>(n) * f.m;
  f.aic = -2.0 * f.loglik / T + 2.0 * K / T;
  f.sc = -2.0 * f.loglik / T + K * std::log(T) / T;
  f.hq = -2.0 * f.loglik / T + 2.0 * K * std::log(std::log(T)) / T;
  f.fpe = std::exp(ld) * std::pow((T + f.m) / (T - f.m), n);
  f.sample_start = MonthStamp{};
  return f;
}

VarFit fit_var(const Frame& frame, int p, VarDeterministic det, int extra) {
  VarFit f = fit_var(frame.to_matrix(), frame.names(), p, det, extra);
  f.sample_start = frame.start().plus(p + extra);
  return f;
}

SelectionTable select_lag_order(const Frame& frame, int max_lag, VarDeterministic det) {
  if (max_lag < 1) fail(ErrorCode::InvalidArgument, "max_lag must be >= 1");
  const Eigen::MatrixXd L = frame.to_matrix();
  const auto names = frame.names();
  const int n = static_cast<int>(names.size());
  if (L.rows() <= max_lag) fail(ErrorCode::InsufficientData, "sample does not support max_lag");
  SelectionTable tab;
  tab.deterministic = det;
  tab.max_lag = max_lag;
  tab.n = n;
  tab.nobs = static_cast<int>(L.rows()) - max_lag;
  const double T = tab.nobs;
  double prev_ld = 0.0;
  for (int p = 0; p <= max_lag; ++p) {
    const SystemFit s = system_ols(L, names, p, det, 0, max_lag);
    const Eigen::MatrixXd S = s.resid.transpose() * s.resid / T;
    const double ld = logdet_spd(S);
    const int m = static_cast<int>(s.X.cols());
    SelectionRow r;
    r.lag = p;
    r.params = n * m;
    r.loglik = -0.5 * T * n * (1.0 + std::log(2.0 * std::numbers::pi)) - 0.5 * T * ld;
    r.aic = -2.0 * r.loglik / T + 2.0 * r.params / T;
    r.sc = -2.0 * r.loglik / T + r.params * std::log(T) / T;
    r.hq = -2.0 * r.loglik / T + 2.0 * r.params * std::log(std::log(T)) / T;
    r.fpe = std::exp(ld) * std::pow((T + m) / (T - m), n);
    if (p == 0) {
      r.lr = r.lr_p = std::numeric_limits<double>::quiet_NaN();
    } else {
      r.lr = (T - m) * (prev_ld - ld);
      r.lr_p = chi2_sf(r.lr, static_cast<double>(n) * n);
    }
    prev_ld = ld;
    tab.rows.push_back(r);
  }
  auto argmin = [&](auto member) {
    int best = 0;
    for (int p = 1; p <= max_lag; ++p)
      if (tab.rows[p].*member < tab.rows[best].*member) best = p;
    return best;
  };
  tab.aic = argmin(&SelectionRow::aic);
  tab.sc = argmin(&SelectionRow::sc);
  tab.hq = argmin(&SelectionRow::hq);
  tab.fpe = argmin(&SelectionRow::fpe);
  tab.lr = 0;
  for (int p = max_lag; p >= 1; --p)
    if (tab.rows[p].lr_p < 0.05) {
      tab.lr = p;
      break;
    }
  return tab;
}

std::vector<std::complex<double>> stability_roots(const VarFit& fit) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(fit.companion(), false);
  std::vector<std::complex<double>> roots(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(roots.begin(), roots.end(), [](auto a, auto b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return roots;
}

bool is_stable(const VarFit& fit) {
  for (const auto& z : stability_roots(fit))
    if (std::abs(z) >= 1.0) return false;
  return true;
}

std::vector<EquationExogeneity> block_exogeneity(const VarFit& fit) {
  const int n = fit.n();
  std::vector<EquationExogeneity> out;
  for (int i = 0; i < n; ++i) {
    EquationExogeneity eq;
    eq.equation = fit.names[i];
    std::vector<std::string> all;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<std::string> lags;
      for (int l = 1; l <= fit.p; ++l) lags.push_back(lag_name(fit.names[j], l));
      all.insert(all.end(), lags.begin(), lags.end());
      TestResult t = wald_zero(fit.equations[i], lags, WaldForm::Chi2);
      t.name = "exclude " + fit.names[j];
      eq.rows.push_back({fit.names[j], t});
    }
    if (!all.empty()) {
      TestResult t = wald_zero(fit.equations[i], all, WaldForm::Chi2);
      t.name = "exclude all";
      eq.rows.push_back({"All", t});
    }
    out.push_back(std::move(eq));
  }
  return out;
}

const TestResult& TYResult::wald(const std::string& from, const std::string& to) const {
  for (const auto& eq : blocks)
    if (eq.equation == to)
      for (const auto& r : eq.rows)
        if (r.excluded == from) return r.test;
  fail(ErrorCode::InvalidArgument, "no causality test " + from + " -> " + to);
}

bool TYResult::causes(const std::string& from, const std::string& to, double level) const {
  return wald(from, to).p_value.value() < level;
}

TYResult toda_yamamoto(const Frame& frame, int k, int d_max, VarDeterministic det) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (d_max < 0 || d_max > 2) fail(ErrorCode::InvalidArgument, "d_max must be in {0, 1, 2}");
  TYResult r;
  r.k = k;
  r.d_max = d_max;
  r.fit = fit_var(frame, k, det, d_max);
  r.blocks = block_exogeneity(r.fit);
  return r;
}

TestResult portmanteau(const VarFit& fit, int lags) {
  if (lags <= fit.p)
    fail(ErrorCode::InsufficientData, "portmanteau lags must exceed the VAR order (df would be nonpositive)");
  const Eigen::MatrixXd& U = fit.residuals;
  const auto T = U.rows();
  if (lags >= T) fail(ErrorCode::InsufficientData, "portmanteau lags exceed the sample");
  const Eigen::MatrixXd C0 = U.transpose() * U / static_cast<double>(T);
  Eigen::LDLT<Eigen::MatrixXd> c0inv(C0);
  double q = 0.0;
  for (int j = 1; j <= lags; ++j) {
    const Eigen::MatrixXd Cj = U.bottomRows(T - j).transpose() * U.topRows(T - j) / static_cast<double>(T);
    const Eigen::MatrixXd a = c0inv.solve(Cj);
    const Eigen::MatrixXd b = c0inv.solve(Cj.transpose());
    q += (a * b).trace() / static_cast<double>(T - j);
  }
  q *= static_cast<double>(T) * T;
  const int n = fit.n();
  const double df = static_cast<double>(n) * n * (lags - fit.p);
  TestResult t;
  t.name = "portmanteau(" + std::to_string(lags) + ")";
  t.statistic = q;
  t.distribution = NullDistribution::chi2(df);
  t.p_value = chi2_sf(q, df);
  return t;
}

}  // namespace ardlkit
