#include "ardlkit/distributions.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "ardlkit/error.hpp"

namespace ardlkit {

namespace bm = boost::math;

double normal_cdf(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return bm::cdf(bm::normal_distribution<>(), x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::DomainError, "normal quantile needs p in (0,1)");
  return bm::quantile(bm::normal_distribution<>(), p);
}

double chi2_sf(double x, double df) {
  if (!(df > 0.0)) fail(ErrorCode::DomainError, "chi-square df must be positive");
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return bm::cdf(bm::complement(bm::chi_squared_distribution<>(df), x));
}

double chi2_quantile(double p, double df) {
  return bm::quantile(bm::chi_squared_distribution<>(df), p);
}

double f_sf(double x, double df1, double df2) {
  if (!(df1 > 0.0 && df2 > 0.0)) fail(ErrorCode::DomainError, "F degrees of freedom must be positive");
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return bm::cdf(bm::complement(bm::fisher_f_distribution<>(df1, df2), x));
}

double t_two_sided(double t, double df) {
  if (!(df > 0.0)) fail(ErrorCode::DomainError, "t df must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  return 2.0 * bm::cdf(bm::complement(bm::students_t_distribution<>(df), std::fabs(t)));
}

}  // namespace ardlkit
