#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/linreg.hpp"

namespace ardlkit::detail {

inline Eigen::VectorXd diff(const Eigen::VectorXd& y) { return y.tail(y.size() - 1) - y.head(y.size() - 1); }

/// 1, 2, ..., n shifted so that observation `first` has value first + 1.
inline Eigen::VectorXd trend(Eigen::Index n, Eigen::Index first = 0) {
  return Eigen::VectorXd::LinSpaced(n, static_cast<double>(first + 1), static_cast<double>(first + n));
}

/// Rows [first, first + count) of x.
inline Eigen::VectorXd rows(const Eigen::VectorXd& x, Eigen::Index first, Eigen::Index count) {
  return x.segment(first, count);
}

/// Bartlett-weighted long-run variance of a mean-zero series with divisor n.
inline double bartlett_lrv(const Eigen::VectorXd& e, int bandwidth) {
  const auto n = e.size();
  double s = e.squaredNorm() / static_cast<double>(n);
  for (int j = 1; j <= bandwidth && j < n; ++j) {
    const double g = e.tail(n - j).dot(e.head(n - j)) / static_cast<double>(n);
    s += 2.0 * (1.0 - j / (bandwidth + 1.0)) * g;
  }
  return s;
}

/// Newey-West (1994) data-dependent Bartlett bandwidth.
inline int newey_west_bandwidth(const Eigen::VectorXd& e) {
  const auto n = e.size();
  const int pilot = static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0)));
  double s0 = e.squaredNorm() / static_cast<double>(n);
  double s1 = 0.0;
  for (int j = 1; j <= pilot && j < n; ++j) {
    const double g = e.tail(n - j).dot(e.head(n - j)) / static_cast<double>(n);
    s0 += 2.0 * g;
    s1 += 2.0 * j * g;
  }
  if (s0 == 0.0) return 0;
  const double gamma = 1.1447 * std::pow((s1 / s0) * (s1 / s0), 1.0 / 3.0);
  const int bw = static_cast<int>(std::floor(gamma * std::pow(static_cast<double>(n), 1.0 / 3.0)));
  return std::min(bw, static_cast<int>(n) - 1);
}

inline int schwert_max_lag(Eigen::Index n) {
  return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

}  // namespace ardlkit::detail
