#include "ardlkit/diagnostics.hpp"

#include <cmath>

#include "ardlkit/distributions.hpp"
#include "ardlkit/error.hpp"

namespace ardlkit {

namespace {

Eigen::VectorXd ones(Eigen::Index n) { return Eigen::VectorXd::Ones(n); }

bool has_constant(const DesignMatrix& X) {
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto c = X.X.col(j);
    if (c.maxCoeff() == c.minCoeff() && c(0) != 0.0) return true;
  }
  return false;
}

/// F and n*R^2 forms for adding the last q columns of Z.
LmTest auxiliary(const std::string& name, const Eigen::VectorXd& g, const DesignMatrix& restricted,
                 const DesignMatrix& full) {
  const OlsFit r = ols(g, restricted);
  const OlsFit u = ols(g, full);
  const int q = u.k - r.k;
  LmTest out;
  out.f = ssr_f_test(r.ssr, u.ssr, q, u.df_resid());
  out.f.name = name + "_f";
  out.lm.name = name + "_lm";
  out.lm.tail = Tail::Upper;
  out.lm.statistic = u.n * (1.0 - u.ssr / r.ssr);
  out.lm.distribution = NullDistribution::chi2(q);
  out.lm.p_value = chi2_sf(out.lm.statistic, q);
  return out;
}

void require_variation(const Eigen::VectorXd& v, const char* what) {
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v.array() - v.mean()).abs().maxCoeff() <= 1e-14 * scale) fail(ErrorCode::ZeroVariance, what);
}

}  // namespace

TestResult ljung_box(const Eigen::VectorXd& x_in, int lags, bool squared) {
  const auto n = x_in.size();
  if (lags < 1 || 2 * lags >= n) fail(ErrorCode::InvalidArgument, "ljung_box needs 1 <= lags < n/2");
  Eigen::VectorXd x = squared ? Eigen::VectorXd(x_in.array().square()) : x_in;
  require_variation(x, squared ? "squared series is constant" : "series is constant");
  const Eigen::VectorXd d = x.array() - x.mean();
  const double c0 = d.squaredNorm();
  double q = 0.0;
  for (int j = 1; j <= lags; ++j) {
    const double rj = d.tail(n - j).dot(d.head(n - j)) / c0;
    q += rj * rj / static_cast<double>(n - j);
  }
  TestResult res;
  res.name = squared ? "ljung_box_sq" : "ljung_box";
  res.statistic = static_cast<double>(n) * (n + 2.0) * q;
  res.distribution = NullDistribution::chi2(lags);
  res.p_value = chi2_sf(res.statistic, lags);
  res.tail = Tail::Upper;
  return res;
}

LmTest arch_lm(const Eigen::VectorXd& resid, int lags) {
  const auto n = resid.size();
  if (lags < 1 || 2 * lags >= n) fail(ErrorCode::InvalidArgument, "arch_lm needs 1 <= lags < n/2");
  const Eigen::VectorXd e2 = resid.array().square();
  require_variation(e2, "squared residuals are constant");
  const Eigen::Index m = n - lags;
  const Eigen::VectorXd g = e2.tail(m);
  DesignMatrix r(ones(m), {"const"});
  DesignMatrix u = r;
  for (int j = 1; j <= lags; ++j) u.append(e2.segment(lags - j, m), "e2(-" + std::to_string(j) + ")");
  return auxiliary("arch", g, r, u);
}

LmTest breusch_godfrey(const OlsFit& fit, int lags) {
  if (lags < 1) fail(ErrorCode::InvalidArgument, "breusch_godfrey needs lags >= 1");
  const Eigen::VectorXd& e = fit.residuals;
  const double scale = std::max(1.0, fit.y.cwiseAbs().maxCoeff());
  if (e.cwiseAbs().maxCoeff() <= 1e-12 * scale) fail(ErrorCode::ZeroVariance, "residuals are identically zero");
  DesignMatrix u = fit.design;
  for (int j = 1; j <= lags; ++j) {
    Eigen::VectorXd lag = Eigen::VectorXd::Zero(fit.n);
    if (j < fit.n) lag.tail(fit.n - j) = e.head(fit.n - j);
    u.append(lag, "resid(-" + std::to_string(j) + ")");
  }
  return auxiliary("breusch_godfrey", e, fit.design, u);
}

TestResult ramsey_reset(const OlsFit& fit, const std::set<int>& powers) {
  if (powers.empty()) fail(ErrorCode::InvalidArgument, "no RESET powers");
  for (int p : powers)
    if (p < 2 || p > 4) fail(ErrorCode::InvalidArgument, "RESET powers must lie in {2,3,4}");
  const double scale = std::max(1.0, fit.y.squaredNorm());
  if (fit.ssr <= 1e-24 * scale) {
    TestResult res;
    res.name = "reset_f";
    res.statistic = 0.0;
    res.distribution = NullDistribution::f(static_cast<double>(powers.size()), fit.n - fit.k - powers.size());
    res.p_value = 1.0;
    return res;
  }
  DesignMatrix u = fit.design;
  for (int p : powers) u.append(fit.fitted.array().pow(p).matrix(), "fitted^" + std::to_string(p));
  const OlsFit uf = ols(fit.y, u);
  auto res = ssr_f_test(fit.ssr, uf.ssr, static_cast<int>(powers.size()), uf.df_resid());
  res.name = "reset_f";
  return res;
}

LmTest het_test(const OlsFit& fit, HetKind kind) {
  const Eigen::VectorXd& e = fit.residuals;
  DesignMatrix base;
  if (!has_constant(fit.design)) base.append(ones(fit.n), "const");
  for (Eigen::Index j = 0; j < fit.design.cols(); ++j) base.append(fit.design.X.col(j), fit.design.names[j]);

  Eigen::VectorXd g;
  std::vector<Eigen::Index> keep;
  switch (kind) {
    case HetKind::Bpg:
    case HetKind::White:
      g = e.array().square();
      break;
    case HetKind::Glejser:
      g = e.cwiseAbs();
      break;
    case HetKind::Harvey: {
      const double scale = std::max(1e-300, std::sqrt(fit.ssr / fit.n));
      for (Eigen::Index i = 0; i < e.size(); ++i)
        if (std::fabs(e(i)) > 1e-12 * scale) keep.push_back(i);
      const auto dropped = e.size() - static_cast<Eigen::Index>(keep.size());
      if (dropped > 0 && static_cast<double>(dropped) >= 0.01 * e.size())
        fail(ErrorCode::DomainError, std::to_string(dropped) + " zero residuals under log");
      g.resize(static_cast<Eigen::Index>(keep.size()));
      for (std::size_t i = 0; i < keep.size(); ++i) g(static_cast<Eigen::Index>(i)) = std::log(e(keep[i]) * e(keep[i]));
      if (dropped > 0) {
        Eigen::MatrixXd Z(static_cast<Eigen::Index>(keep.size()), base.cols());
        for (std::size_t i = 0; i < keep.size(); ++i) Z.row(static_cast<Eigen::Index>(i)) = base.X.row(keep[i]);
        base.X = Z;
      }
      break;
    }
  }

  DesignMatrix full = base;
  if (kind == HetKind::White) {
    const auto& X = fit.design;
    for (Eigen::Index a = 0; a < X.cols(); ++a) {
      for (Eigen::Index b = a; b < X.cols(); ++b) {
        Eigen::VectorXd prod = X.X.col(a).cwiseProduct(X.X.col(b));
        if (prod.maxCoeff() == prod.minCoeff()) continue;  // constant times constant
        bool duplicate = false;
        for (Eigen::Index c = 0; c < full.cols() && !duplicate; ++c) duplicate = full.X.col(c) == prod;
        if (duplicate) continue;
        full.append(prod, X.names[a] + "*" + X.names[b]);
      }
    }
  }
  DesignMatrix restricted(Eigen::VectorXd::Ones(full.rows()), {"const"});
  const char* name = kind == HetKind::Bpg ? "bpg" : kind == HetKind::White ? "white" : kind == HetKind::Harvey
                                                                                          ? "harvey"
                                                                                          : "glejser";
  return auxiliary(name, g, restricted, full);
}

Eigen::VectorXd recursive_residuals(const OlsFit& fit) {
  const int n = fit.n;
  const int k = fit.k;
  if (n <= k + 1) fail(ErrorCode::InsufficientData, "recursive residuals need n > k + 1");
  const Eigen::MatrixXd& X = fit.design.X;
  Eigen::VectorXd w(n - k);
  for (int r = k; r < n; ++r) {
    // estimate on observations [0, r), predict observation r
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X.topRows(r));
    const Eigen::MatrixXd R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j)
      if (std::fabs(R(j, j)) < 1e-10 * std::max(1e-300, X.topRows(r).col(j).norm()))
        fail(ErrorCode::RankDeficient, "initial recursive window is rank deficient at column " + fit.design.names[j]);
    const Eigen::VectorXd qty = qr.householderQ().adjoint() * fit.y.head(r);
    const Eigen::VectorXd beta = R.triangularView<Eigen::Upper>().solve(qty.head(k));
    const Eigen::VectorXd xr = X.row(r).transpose();
    const Eigen::VectorXd v = R.transpose().triangularView<Eigen::Lower>().solve(xr);
    w(r - k) = (fit.y(r) - xr.dot(beta)) / std::sqrt(1.0 + v.squaredNorm());
  }
  return w;
}

double cusumq_c0(int m, double level, const CriticalValueTables& tables) {
  return tables.critical_value({"cusumq", "two_sided", 1, static_cast<double>(m)}, level);
}

CusumPath cusum(const OlsFit& fit, CusumKind kind, double level, const CriticalValueTables& tables) {
  const Eigen::VectorXd w = recursive_residuals(fit);
  const int n = fit.n;
  const int k = fit.k;
  const int m = n - k;
  CusumPath path;
  path.kind = kind;
  path.level = level;
  if (kind == CusumKind::Cusum) {
    double a = 0.0;
    if (std::fabs(level - 0.05) < 1e-12) a = 0.948;
    else if (std::fabs(level - 0.01) < 1e-12) a = 1.143;
    else if (std::fabs(level - 0.10) < 1e-12) a = 0.850;
    else fail(ErrorCode::MissingCriticalValues, "cusum bands exist at 1, 5 and 10% only");
    const double s = std::sqrt((w.array() - w.mean()).square().sum() / (m - 1.0));
    if (!(s > 0.0)) fail(ErrorCode::ZeroVariance, "recursive residuals are constant");
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      acc += w(i);
      const int r = k + i + 1;  // 1-based observation
      const double band = a * std::sqrt(static_cast<double>(m)) + 2.0 * a * (r - k) / std::sqrt(static_cast<double>(m));
      path.step.push_back(r - 1);
      path.statistic.push_back(acc / s);
      path.lower.push_back(-band);
      path.upper.push_back(band);
    }
  } else {
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += w(i) * w(i);
    if (!(total > 0.0)) fail(ErrorCode::ZeroVariance, "recursive residuals are zero");
    const double c0 = cusumq_c0(m, level, tables);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      acc += w(i) * w(i);
      const int r = k + i + 1;
      const double expect = static_cast<double>(r - k) / m;
      path.step.push_back(r - 1);
      path.statistic.push_back(acc / total);
      path.lower.push_back(expect - c0);
      path.upper.push_back(expect + c0);
    }
  }
  return path;
}

bool CusumPath::inside() const {
  for (std::size_t i = 0; i < statistic.size(); ++i)
    if (!(statistic[i] > lower[i] && statistic[i] < upper[i])) return false;
  return true;
}

}  // namespace ardlkit
