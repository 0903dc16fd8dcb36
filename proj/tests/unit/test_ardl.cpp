#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ardlkit/ardl.hpp"
#include "ardlkit/error.hpp"
#include "support.hpp"

using namespace ardlkit;
using testing_support::col;
using testing_support::cumsum;
using testing_support::normals;
using testing_support::oracle;
using testing_support::series;

namespace {

Series ys() { return series(col("y"), "y"); }
Frame xs() { return Frame({series(col("x"), "x")}); }

ArdlSpec spec(int p, std::vector<int> q, ArdlCase c = ArdlCase::NoConst) {
  ArdlSpec s;
  s.p = p;
  s.q = std::move(q);
  s.det_case = c;
  return s;
}

/// Cointegrated pair y = pi* x + u with AR(1) u and a random-walk x.
std::pair<Eigen::VectorXd, Eigen::VectorXd> coint_pair(int n, double pi, std::uint64_t seed) {
  const Eigen::VectorXd x = cumsum(normals(n, seed, 0));
  const Eigen::VectorXd e = normals(n, seed, 1);
  Eigen::VectorXd y(n);
  double u = 0.0;
  for (int t = 0; t < n; ++t) {
    u = 0.5 * u + e(t);
    y(t) = pi * x(t) + u;
  }
  return {y, x};
}

void check_identities(const ArdlFit& f) {
  const OlsFit& L = f.levels_fit;
  double sa = 0.0;
  for (int l = 1; l <= f.spec.p; ++l) sa += L.coef(f.dependent + "(-" + std::to_string(l) + ")");
  EXPECT_NEAR(f.ec_coefficient, -(1.0 - sa), 1e-8);
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    double sb = 0.0;
    for (int l = 0; l <= f.spec.q[i]; ++l)
      sb += L.coef(l == 0 ? f.regressors[i] : f.regressors[i] + "(-" + std::to_string(l) + ")");
    EXPECT_NEAR(f.long_run[i].value, sb / (1.0 - sa), 1e-8);
  }
  // the ECM is a reparameterization: same residuals, ec(-1) coefficient, partial sums
  const OlsFit& E = f.ec_fit;
  EXPECT_LT((E.residuals - L.residuals).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(E.coef("CointEq(-1)"), f.ec_coefficient, 1e-8);
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    const std::string& x = f.regressors[i];
    for (int j = 1; j < f.spec.q[i]; ++j) {
      double tail = 0.0;
      for (int l = j + 1; l <= f.spec.q[i]; ++l) tail += L.coef(x + "(-" + std::to_string(l) + ")");
      EXPECT_NEAR(E.coef("D(" + x + "(-" + std::to_string(j) + "))"), -tail, 1e-8);
    }
  }
  for (int j = 1; j < f.spec.p; ++j) {
    double tail = 0.0;
    for (int l = j + 1; l <= f.spec.p; ++l) tail += L.coef(f.dependent + "(-" + std::to_string(l) + ")");
    EXPECT_NEAR(E.coef("D(" + f.dependent + "(-" + std::to_string(j) + "))"), -tail, 1e-8);
  }
}

}  // namespace

TEST(Ardl, LevelsMatchOracleWithoutDeterministics) {
  const auto& o = oracle()["ardl21_n"];
  const ArdlFit f = fit_ardl(ys(), xs(), spec(2, {1}));
  const std::vector<std::string> names = {"y(-1)", "y(-2)", "x", "x(-1)"};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(f.levels_fit.coef(names[i]), o["params"][i].get<double>(), 1e-10);
  EXPECT_EQ(f.levels_fit.n, o["nobs"].get<int>());
}

TEST(Ardl, LevelsMatchOracleWithConstant) {
  const auto& o = oracle()["ardl21_c"];
  const ArdlFit f = fit_ardl(ys(), xs(), spec(2, {1}, ArdlCase::UnrestrictedConst));
  const std::vector<std::string> names = {"const", "y(-1)", "y(-2)", "x", "x(-1)"};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(f.levels_fit.coef(names[i]), o["params"][i].get<double>(), 1e-9);
}

TEST(Bounds, FStatisticMatchesOracle) {
  const BoundsResult b = bounds_test(fit_ardl(ys(), xs(), spec(2, {1})));
  EXPECT_NEAR(b.f_statistic, oracle()["uecm21_n"]["bounds_f"].get<double>(), 1e-8);
  const auto& p = oracle()["uecm21_n"]["params"];
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(b.conditional_ecm.coefficients(i), p[i].get<double>(), 1e-10);
  const BoundsResult b3 = bounds_test(fit_ardl(ys(), xs(), spec(2, {1}, ArdlCase::UnrestrictedConst)));
  EXPECT_NEAR(b3.f_statistic, oracle()["uecm21_c"]["bounds_f"].get<double>(), 1e-8);
}

TEST(Bounds, FEqualsRestrictedSsrRatio) {
  const ArdlFit f = fit_ardl(ys(), xs(), spec(3, {2}));
  const BoundsResult b = bounds_test(f);
  // restricted model: dy on the short-run differences only
  const Eigen::VectorXd y = col("y"), x = col("x");
  const int first = f.first, T = 240 - first;
  DesignMatrix R;
  for (int j = 1; j < 3; ++j) R.append(y.segment(first - j, T) - y.segment(first - j - 1, T), "dy" + std::to_string(j));
  for (int j = 0; j < 2; ++j) R.append(x.segment(first - j, T) - x.segment(first - j - 1, T), "dx" + std::to_string(j));
  const Eigen::VectorXd dy = y.segment(first, T) - y.segment(first - 1, T);
  const OlsFit r = ols(dy, R);
  const OlsFit& u = b.conditional_ecm;
  const double F = ((r.ssr - u.ssr) / 2.0) / (u.ssr / u.df_resid());
  EXPECT_NEAR(b.f_statistic, F, 1e-8 * F);
  EXPECT_NEAR(*b.t_statistic, u.t_stats()(0), 1e-12);
}

TEST(Bounds, CaseOneBandsAndVerdicts) {
  const BoundsResult b = bounds_test(fit_ardl(ys(), xs(), spec(2, {1})));
  ASSERT_TRUE(b.f_bounds.count(0.05));
  EXPECT_NEAR(b.f_bounds.at(0.05).i0, 3.15, 1e-9);
  EXPECT_NEAR(b.f_bounds.at(0.05).i1, 4.11, 1e-9);
  EXPECT_NEAR(b.t_bounds.at(0.05).i0, -1.95, 1e-9);
  EXPECT_NEAR(b.t_bounds.at(0.05).i1, -2.60, 1e-9);
  for (const auto& [lev, fb] : b.f_bounds) EXPECT_LE(fb.i0, fb.i1);
  for (const auto& [lev, tb] : b.t_bounds) EXPECT_LE(std::fabs(tb.i0), std::fabs(tb.i1));
  const BoundPair F{3.15, 4.11}, t{-1.95, -2.6};
  EXPECT_EQ(bounds_verdict(5.0529, -3.1652, F, t), BoundsVerdict::Cointegrated);
  EXPECT_EQ(bounds_verdict(0.4036, -0.546774, F, t), BoundsVerdict::NotCointegrated);
  EXPECT_EQ(bounds_verdict(3.5, -2.2, F, t), BoundsVerdict::Inconclusive);
  EXPECT_EQ(bounds_verdict(5.0, -2.2, F, t), BoundsVerdict::Inconclusive);
  EXPECT_EQ(b.verdict, BoundsVerdict::Cointegrated);
}

TEST(Bounds, SmallSampleSourceUsedInsideRange) {
  const Eigen::VectorXd y = col("y").head(60), x = col("x").head(60);
  const ArdlFit f = fit_ardl(series(y, "y"), Frame({series(x, "x")}), spec(1, {1}));
  const BoundsResult b = bounds_test(f, BoundsSource::NarayanSmallSample);
  EXPECT_EQ(b.source, BoundsSource::NarayanSmallSample);
  EXPECT_GT(b.f_bounds.at(0.05).i1, 4.11);
  const BoundsResult big = bounds_test(fit_ardl(ys(), xs(), spec(1, {1})), BoundsSource::NarayanSmallSample);
  EXPECT_EQ(big.source, BoundsSource::PesaranAsymptotic);
  EXPECT_EQ(big.requested, BoundsSource::NarayanSmallSample);
}

TEST(LongRun, RoundedCoefficientsSatisfyEcmArithmetic) {
  // levels coefficients as printed (4 d.p.)
  const double a1 = 0.9432;
  const std::vector<double> b = {0.2802, -0.3194, 0.3189, -0.1899, 0.0345, -0.2550, 0.3815, -0.2319};
  const double pi = std::accumulate(b.begin(), b.end(), 0.0) / (1.0 - a1);
  EXPECT_NEAR(pi, 0.3326, 0.005);
  // ECM short-run terms are minus the tail sums: D(x(-j)) = -(b_{j+1} + ... + b_7)
  const std::vector<double> ecm = {0.2802, -0.0580, 0.2608, 0.0709, 0.1054, -0.1495, 0.2319};
  EXPECT_NEAR(b[0], ecm[0], 1e-12);
  for (int j = 1; j <= 6; ++j) {
    const double tail = std::accumulate(b.begin() + j + 1, b.end(), 0.0);
    // each printed entry carries at most 5e-5 rounding error
    EXPECT_NEAR(-tail, ecm[j], 5e-5 * (8 - j) + 5e-5) << j;
  }
  EXPECT_NEAR(-(1.0 - a1), -0.0567, 1e-4 + 1e-9);
}

TEST(LongRun, IdentitiesHoldForFixtureModels) {
  for (auto c : {ArdlCase::NoConst, ArdlCase::RestrictedConst, ArdlCase::UnrestrictedConst, ArdlCase::RestrictedTrend,
                 ArdlCase::UnrestrictedTrend})
    for (auto [p, q] : {std::pair{1, 0}, std::pair{2, 1}, std::pair{3, 4}}) {
      SCOPED_TRACE(std::string(case_code(c)) + " " + std::to_string(p) + "," + std::to_string(q));
      check_identities(fit_ardl(ys(), xs(), spec(p, {q}, c)));
    }
}

TEST(LongRun, IdentitiesHoldOnRandomData) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int n = 80 + static_cast<int>(s) * 7;
    const auto [y, x] = coint_pair(n, 0.7, 500 + s);
    const Eigen::VectorXd z = cumsum(normals(n, 500 + s, 2));
    const int p = 1 + static_cast<int>(s % 3), q1 = static_cast<int>(s % 4), q2 = static_cast<int>((s + 1) % 3);
    const ArdlCase c = static_cast<ArdlCase>(1 + s % 5);
    check_identities(fit_ardl(series(y, "y"), Frame({series(x, "x"), series(z, "z")}), spec(p, {q1, q2}, c)));
  }
}

TEST(LongRun, StaticModelCollapsesToOlsSlope) {
  const ArdlFit f = fit_ardl(ys(), xs(), spec(1, {0}));
  EXPECT_NEAR(f.long_run[0].value, f.levels_fit.coef("x") / (1.0 - f.levels_fit.coef("y(-1)")), 1e-12);
  // exact static relation: a_1 = 0, so pi is the plain OLS slope
  const Eigen::VectorXd x = cumsum(normals(500, 3, 1));
  const Eigen::VectorXd y = 2.0 * x;
  const ArdlFit g = fit_ardl(series(y, "y"), Frame({series(x, "x")}), spec(1, {0}));
  EXPECT_NEAR(g.levels_fit.coef("y(-1)"), 0.0, 1e-10);
  DesignMatrix Xs;
  Xs.append(x.tail(499), "x");
  EXPECT_NEAR(g.long_run[0].value, ols(y.tail(499), Xs).coefficients(0), 1e-9);
}

TEST(LongRun, ScaleEquivariance) {
  const double c = 3.7;
  const ArdlFit f = fit_ardl(ys(), xs(), spec(2, {2}, ArdlCase::UnrestrictedConst));
  const ArdlFit g = fit_ardl(ys(), Frame({series((c * col("x")).eval(), "x")}), spec(2, {2}, ArdlCase::UnrestrictedConst));
  EXPECT_NEAR(g.long_run[0].value, f.long_run[0].value / c, 1e-9);
  const BoundsResult bf = bounds_test(f), bg = bounds_test(g);
  EXPECT_NEAR(bg.f_statistic, bf.f_statistic, 1e-8);
  EXPECT_NEAR(*bg.t_statistic, *bf.t_statistic, 1e-9);
}

TEST(LongRun, ConvergesToTrueMultiplier) {
  std::vector<double> err;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [y, x] = coint_pair(2000, 0.8, 7000 + s);
    const ArdlFit f = fit_ardl(series(y, "y"), Frame({series(x, "x")}), spec(2, {1}, ArdlCase::UnrestrictedConst));
    err.push_back(std::fabs(f.long_run[0].value - 0.8));
  }
  std::nth_element(err.begin(), err.begin() + 50, err.end());
  EXPECT_LT(err[50], 0.05);
}

TEST(Selection, GridCoversCommonSampleAndTieBreakIsOrderFree) {
  ArdlOptions o;
  o.max_p = 4;
  o.max_q = 4;
  const ArdlFit f = fit_ardl(ys(), xs(), o);
  EXPECT_EQ(f.candidates.size(), 4u * 5u);
  EXPECT_EQ(f.first, 4);
  // the chosen model re-estimated alone on the same sample reproduces the criterion
  const ArdlFit g = fit_ardl(ys(), xs(), f.spec, o, 4);
  EXPECT_NEAR(g.aic, f.aic, 1e-12);
  // a shuffled scan with the documented rule lands on the same spec
  auto better = [](const ArdlCandidate& a, const ArdlCandidate& b) {
    if (a.criterion != b.criterion) return a.criterion < b.criterion;
    const int la = a.p + std::accumulate(a.q.begin(), a.q.end(), 0), lb = b.p + std::accumulate(b.q.begin(), b.q.end(), 0);
    if (la != lb) return la < lb;
    return a.p < b.p;
  };
  std::mt19937 rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    auto c = f.candidates;
    std::shuffle(c.begin(), c.end(), rng);
    const auto best = *std::min_element(c.begin(), c.end(), better);
    EXPECT_EQ(best.p, f.spec.p);
    EXPECT_EQ(best.q, f.spec.q);
  }
  EXPECT_EQ(fit_ardl(ys(), xs(), o).spec.label(), f.spec.label());
}

TEST(ShortRun, MatchesGenericWald) {
  const ArdlFit f = fit_ardl(ys(), xs(), spec(1, {3}));
  const TestResult t = short_run_causality(f);
  const OlsFit& L = f.levels_fit;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(3, L.k);
  for (int j = 1; j <= 3; ++j) R(j - 1, L.index_of("x(-" + std::to_string(j) + ")")) = 1.0;
  const TestResult w = wald_test(L, R, Eigen::VectorXd::Zero(3), WaldForm::F);
  EXPECT_NEAR(t.statistic, w.statistic, 1e-10);
  EXPECT_EQ(t.distribution.df1, 3.0);
  EXPECT_EQ(t.distribution.df2, static_cast<double>(L.df_resid()));
}

TEST(ShortRun, NoLaggedRegressorsRaises) {
  const ArdlFit f = fit_ardl(ys(), xs(), spec(1, {0}));
  try {
    short_run_causality(f);
    FAIL() << "expected NoLaggedRegressors";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoLaggedRegressors);
  }
}

TEST(Ardl, HacCovarianceAppliedToLevelsAndEcm) {
  ArdlOptions o;
  o.covariance = CovarianceKind::Hac;
  const ArdlFit f = fit_ardl(ys(), xs(), spec(2, {1}), o);
  const ArdlFit g = fit_ardl(ys(), xs(), spec(2, {1}));
  EXPECT_EQ(f.levels_fit.covariance_kind, CovarianceKind::Hac);
  EXPECT_EQ(f.ec_fit.covariance_kind, CovarianceKind::Hac);
  EXPECT_LT((f.levels_fit.covariance - hac_covariance(g.levels_fit)).cwiseAbs().maxCoeff(), 1e-12);
  // the bounds F stays SSR-based
  EXPECT_NEAR(bounds_test(f).f_statistic, bounds_test(g).f_statistic, 1e-12);
}
