#pragma once

namespace ardlkit {

double normal_cdf(double x);
double normal_quantile(double p);
/// Upper tail P(X > x) of chi-square(df).
double chi2_sf(double x, double df);
double chi2_quantile(double p, double df);
/// Upper tail P(F > x) of F(df1, df2).
double f_sf(double x, double df1, double df2);
/// Two-sided Student-t p-value for |t|.
double t_two_sided(double t, double df);

}  // namespace ardlkit
