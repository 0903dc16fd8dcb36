#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/test_result.hpp"

namespace ardlkit {

/// Regressor matrix with one name per column.
struct DesignMatrix {
  Eigen::MatrixXd X;
  std::vector<std::string> names;

  DesignMatrix() = default;
  DesignMatrix(Eigen::MatrixXd x, std::vector<std::string> n);

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
  void append(const Eigen::VectorXd& column, std::string name);
  /// Index of the named column, or -1.
  Eigen::Index find(const std::string& name) const;
};

enum class CovarianceKind { Ordinary, Hac };

struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  CovarianceKind covariance_kind = CovarianceKind::Ordinary;
  int hac_bandwidth = -1;
  Eigen::VectorXd residuals;
  Eigen::VectorXd fitted;
  double ssr = 0.0;
  double sigma2 = 0.0;  // SSR / (n - k)
  double r2 = 0.0;      // centred
  double loglik = 0.0;  // Gaussian, ML variance SSR / n
  double aic = 0.0;
  double sc = 0.0;
  double hq = 0.0;
  int n = 0;
  int k = 0;
  DesignMatrix design;
  Eigen::VectorXd y;

  int df_resid() const { return n - k; }
  Eigen::VectorXd std_errors() const;
  Eigen::VectorXd t_stats() const;
  Eigen::VectorXd p_values() const;
  /// Coefficient index by regressor name; throws InvalidArgument if absent.
  Eigen::Index index_of(const std::string& name) const;
  double coef(const std::string& name) const { return coefficients(index_of(name)); }
};

/// Per-observation information criteria from a log-likelihood.
struct InformationCriteria {
  double aic, sc, hq;
};
InformationCriteria information_criteria(double loglik, int n, int k);

/// Least squares via Householder QR. A column whose norm after projection on
/// the preceding columns falls below 1e-10 of its own norm is reported as
/// rank deficient.
OlsFit ols(const Eigen::VectorXd& y, const DesignMatrix& X);

/// Newey-West covariance with Bartlett weights 1 - j/(L+1), scaled by
/// n/(n-k). `bandwidth` nullopt selects floor(4 (n/100)^(2/9)).
Eigen::MatrixXd hac_covariance(const OlsFit& fit, std::optional<int> bandwidth = std::nullopt);
int auto_bandwidth(int n);
/// Copy of `fit` with its covariance replaced by the HAC estimate.
OlsFit with_hac(const OlsFit& fit, std::optional<int> bandwidth = std::nullopt);

enum class WaldForm { F, Chi2 };

/// W = (Rb - r)' [R V R']^{-1} (Rb - r), using the fit's covariance.
TestResult wald_test(const OlsFit& fit, const Eigen::MatrixXd& R, const Eigen::VectorXd& r,
                     WaldForm form = WaldForm::F);
/// Joint zero restriction on the named coefficients.
TestResult wald_zero(const OlsFit& fit, const std::vector<std::string>& names, WaldForm form = WaldForm::F);

/// F test comparing nested fits on the same sample via their SSRs.
TestResult ssr_f_test(double ssr_restricted, double ssr_unrestricted, int q, int df_unrestricted);

}  // namespace ardlkit
