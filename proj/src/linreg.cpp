#include "ardlkit/linreg.hpp"

#include <cmath>
#include <numbers>

#include "ardlkit/distributions.hpp"
#include "ardlkit/error.hpp"

namespace ardlkit {

DesignMatrix::DesignMatrix(Eigen::MatrixXd x, std::vector<std::string> n) : X(std::move(x)), names(std::move(n)) {
  if (static_cast<Eigen::Index>(names.size()) != X.cols())
    fail(ErrorCode::InvalidArgument, "design has " + std::to_string(X.cols()) + " columns but " +
                                         std::to_string(names.size()) + " names");
}

void DesignMatrix::append(const Eigen::VectorXd& column, std::string name) {
  if (X.cols() > 0 && column.size() != X.rows()) fail(ErrorCode::InvalidArgument, "column length mismatch");
  if (X.cols() == 0) X.resize(column.size(), 0);
  X.conservativeResize(Eigen::NoChange, X.cols() + 1);
  X.col(X.cols() - 1) = column;
  names.push_back(std::move(name));
}

Eigen::Index DesignMatrix::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Eigen::Index>(i);
  return -1;
}

Eigen::VectorXd OlsFit::std_errors() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }

Eigen::VectorXd OlsFit::t_stats() const { return coefficients.cwiseQuotient(std_errors()); }

Eigen::VectorXd OlsFit::p_values() const {
  Eigen::VectorXd t = t_stats();
  Eigen::VectorXd p(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) p(i) = t_two_sided(t(i), df_resid());
  return p;
}

Eigen::Index OlsFit::index_of(const std::string& name) const {
  auto i = design.find(name);
  if (i < 0) fail(ErrorCode::InvalidArgument, "no regressor named '" + name + "'");
  return i;
}

InformationCriteria information_criteria(double loglik, int n, int k) {
  const double nd = n;
  return {-2.0 * loglik / nd + 2.0 * k / nd, -2.0 * loglik / nd + k * std::log(nd) / nd,
          -2.0 * loglik / nd + 2.0 * k * std::log(std::log(nd)) / nd};
}

OlsFit ols(const Eigen::VectorXd& y, const DesignMatrix& X) {
  const auto n = X.rows();
  const auto k = X.cols();
  if (y.size() != n) fail(ErrorCode::InvalidArgument, "y has " + std::to_string(y.size()) + " rows, X has " +
                                                          std::to_string(n));
  if (k == 0) fail(ErrorCode::InvalidArgument, "design has no columns");
  if (n <= k) fail(ErrorCode::InsufficientData, std::to_string(n) + " observations for " + std::to_string(k) +
                                                    " regressors");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X.X);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  std::string deficient;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double norm = X.X.col(j).norm();
    if (norm == 0.0 || std::fabs(R(j, j)) < 1e-10 * norm) deficient += (deficient.empty() ? "" : ",") + X.names[j];
  }
  if (!deficient.empty()) fail(ErrorCode::RankDeficient, "{" + deficient + "}");

  OlsFit fit;
  fit.n = static_cast<int>(n);
  fit.k = static_cast<int>(k);
  Eigen::VectorXd qty = qr.householderQ().adjoint() * y;
  fit.coefficients = R.triangularView<Eigen::Upper>().solve(qty.head(k));
  fit.fitted = X.X * fit.coefficients;
  fit.residuals = y - fit.fitted;
  fit.ssr = fit.residuals.squaredNorm();
  fit.sigma2 = fit.ssr / static_cast<double>(n - k);
  const double tss = (y.array() - y.mean()).square().sum();
  fit.r2 = tss > 0.0 ? 1.0 - fit.ssr / tss : 0.0;
  const double nd = static_cast<double>(n);
  fit.loglik = -0.5 * nd * (1.0 + std::log(2.0 * std::numbers::pi) + std::log(fit.ssr / nd));
  auto ic = information_criteria(fit.loglik, fit.n, fit.k);
  fit.aic = ic.aic;
  fit.sc = ic.sc;
  fit.hq = ic.hq;
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  fit.covariance = fit.sigma2 * (Rinv * Rinv.transpose());
  fit.design = X;
  fit.y = y;
  return fit;
}

int auto_bandwidth(int n) { return static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0))); }

Eigen::MatrixXd hac_covariance(const OlsFit& fit, std::optional<int> bandwidth) {
  const int n = fit.n;
  const int L = bandwidth ? *bandwidth : auto_bandwidth(n);
  if (L < 0) fail(ErrorCode::InvalidArgument, "negative bandwidth");
  if (L >= n) fail(ErrorCode::BandwidthTooLarge, std::to_string(L) + " >= " + std::to_string(n));
  const Eigen::MatrixXd& X = fit.design.X;
  const Eigen::MatrixXd U = X.array().colwise() * fit.residuals.array();  // rows x_t e_t
  Eigen::MatrixXd S = U.transpose() * U;
  for (int j = 1; j <= L; ++j) {
    const double w = 1.0 - static_cast<double>(j) / (L + 1.0);
    const Eigen::MatrixXd G = U.bottomRows(n - j).transpose() * U.topRows(n - j);
    S += w * (G + G.transpose());
  }
  const Eigen::MatrixXd XtXinv = (fit.design.X.transpose() * fit.design.X).ldlt().solve(
      Eigen::MatrixXd::Identity(fit.k, fit.k));
  Eigen::MatrixXd V = XtXinv * S * XtXinv * (static_cast<double>(n) / (n - fit.k));
  return 0.5 * (V + V.transpose());
}

OlsFit with_hac(const OlsFit& fit, std::optional<int> bandwidth) {
  OlsFit out = fit;
  out.covariance = hac_covariance(fit, bandwidth);
  out.covariance_kind = CovarianceKind::Hac;
  out.hac_bandwidth = bandwidth ? *bandwidth : auto_bandwidth(fit.n);
  return out;
}

TestResult wald_test(const OlsFit& fit, const Eigen::MatrixXd& R, const Eigen::VectorXd& r, WaldForm form) {
  const auto q = R.rows();
  if (q == 0) fail(ErrorCode::InvalidArgument, "empty restriction set");
  if (R.cols() != fit.k || r.size() != q) fail(ErrorCode::InvalidArgument, "restriction dimensions do not match");
  Eigen::FullPivLU<Eigen::MatrixXd> rank_check(R);
  if (rank_check.rank() < q) fail(ErrorCode::InvalidArgument, "restriction matrix lacks full row rank");

  const Eigen::VectorXd d = R * fit.coefficients - r;
  const Eigen::MatrixXd M = R * fit.covariance * R.transpose();
  double W = 0.0;
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  if (M.norm() == 0.0 && d.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    W = 0.0;  // exact fit satisfying the restriction
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-13);
    if (lu.rank() < q) fail(ErrorCode::SingularRestrictionCovariance, "R V R' is singular");
    W = d.dot(lu.solve(d));
  }
  TestResult res;
  res.tail = Tail::Upper;
  if (form == WaldForm::F) {
    res.name = "wald_f";
    res.statistic = W / static_cast<double>(q);
    res.distribution = NullDistribution::f(static_cast<double>(q), fit.df_resid());
    res.p_value = W == 0.0 ? 1.0 : f_sf(res.statistic, static_cast<double>(q), fit.df_resid());
  } else {
    res.name = "wald_chi2";
    res.statistic = W;
    res.distribution = NullDistribution::chi2(static_cast<double>(q));
    res.p_value = W == 0.0 ? 1.0 : chi2_sf(W, static_cast<double>(q));
  }
  return res;
}

TestResult wald_zero(const OlsFit& fit, const std::vector<std::string>& names, WaldForm form) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(names.size()), fit.k);
  for (std::size_t i = 0; i < names.size(); ++i) R(static_cast<Eigen::Index>(i), fit.index_of(names[i])) = 1.0;
  return wald_test(fit, R, Eigen::VectorXd::Zero(R.rows()), form);
}

TestResult ssr_f_test(double ssr_restricted, double ssr_unrestricted, int q, int df_unrestricted) {
  if (q <= 0 || df_unrestricted <= 0) fail(ErrorCode::InvalidArgument, "degrees of freedom must be positive");
  TestResult res;
  res.name = "f";
  res.tail = Tail::Upper;
  if (!(ssr_unrestricted > 0.0)) fail(ErrorCode::ZeroVariance, "unrestricted regression fits exactly");
  res.statistic = ((ssr_restricted - ssr_unrestricted) / q) / (ssr_unrestricted / df_unrestricted);
  res.distribution = NullDistribution::f(q, df_unrestricted);
  res.p_value = f_sf(res.statistic, q, df_unrestricted);
  return res;
}

}  // namespace ardlkit
