#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ardlkit/critical_values.hpp"
#include "ardlkit/distributions.hpp"
#include "ardlkit/error.hpp"

using namespace ardlkit;

namespace {

const CriticalValueTables& T() { return default_tables(); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Tables, MacKinnonAsymptoticDfValues) {
  const CvKey c{"df_tau", "c", 1, std::nullopt};
  EXPECT_NEAR(T().critical_value(c, 0.01), -3.43, 0.005);
  EXPECT_NEAR(T().critical_value(c, 0.05), -2.86, 0.005);
  EXPECT_NEAR(T().critical_value(c, 0.10), -2.57, 0.005);
  const CvKey ct{"df_tau", "ct", 1, std::nullopt};
  EXPECT_NEAR(T().critical_value(ct, 0.05), -3.41, 0.005);
}

TEST(Tables, CointegrationPValues) {
  // MacKinnon (1994) surfaces; reference values from statsmodels' mackinnonp
  EXPECT_NEAR(T().p_value(CvKey{"df_tau", "c", 2, std::nullopt}, -3.0788), 0.09264066212610739, 1e-8);
  EXPECT_NEAR(T().p_value(CvKey{"df_tau", "n", 2, std::nullopt}, -2.9371), 0.031989064108842426, 1e-8);
  // Reference Engle-Granger p-value (no deterministic terms, two variables),
  // reported to four decimals from a finite-sample surface
  EXPECT_NEAR(T().p_value(CvKey{"df_tau", "n", 2, std::nullopt}, -3.0788), 0.0227, 0.001);
}

TEST(Tables, PValueAtCriticalValueIsLevel) {
  for (const char* v : {"n", "c", "ct"})
    for (int k = 1; k <= 3; ++k) {
      const CvKey key{"df_tau", v, k, std::nullopt};
      EXPECT_NEAR(T().p_value(key, T().critical_value(key, 0.05)), 0.05, 0.002) << v << k;
    }
  const CvKey kp{"kpss", "c", 1, std::nullopt};
  EXPECT_NEAR(T().p_value(kp, T().critical_value(kp, 0.05)), 0.05, 0.002);
  const CvKey jo{"johansen_trace", "3", 2, std::nullopt};
  EXPECT_NEAR(T().p_value(jo, T().critical_value(jo, 0.05)), 0.05, 0.002);
}

TEST(Tables, PValueMonotoneInStatistic) {
  for (const auto& [key, lo, hi] : {std::tuple{CvKey{"df_tau", "c", 1, 200.0}, -6.0, 1.0},
                                    std::tuple{CvKey{"df_tau", "ct", 2, std::nullopt}, -7.0, 1.0},
                                    std::tuple{CvKey{"df_z", "c", 1, std::nullopt}, -60.0, 1.0},
                                    std::tuple{CvKey{"kpss", "ct", 1, std::nullopt}, 0.01, 0.5},
                                    std::tuple{CvKey{"johansen_trace", "1", 2, std::nullopt}, 0.5, 40.0},
                                    std::tuple{CvKey{"johansen_max", "4", 1, std::nullopt}, 0.5, 30.0}}) {
    const bool upper = T().tail(key.family) == Tail::Upper;
    double prev = T().p_value(key, lo);
    for (int i = 1; i <= 200; ++i) {
      const double s = lo + (hi - lo) * i / 200.0;
      const double p = T().p_value(key, s);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      if (upper)
        EXPECT_LE(p, prev + 1e-12) << key.id() << " at " << s;
      else
        EXPECT_GE(p, prev - 1e-12) << key.id() << " at " << s;
      prev = p;
    }
  }
}

TEST(Tables, InterpolationLinearInInverseN) {
  const std::vector<double> ns = T().bound_sample_sizes("bounds_f", "3", 1);
  ASSERT_GE(ns.size(), 2u);
  const double n0 = ns[0], n1 = ns[1];
  const double mid = 2.0 / (1.0 / n0 + 1.0 / n1);  // halfway in 1/n
  const BoundPair a = T().bound({"bounds_f", "3", 1, n0}, 0.05);
  const BoundPair b = T().bound({"bounds_f", "3", 1, n1}, 0.05);
  const BoundPair m = T().bound({"bounds_f", "3", 1, mid}, 0.05);
  EXPECT_NEAR(m.i0, 0.5 * (a.i0 + b.i0), 1e-12);
  EXPECT_NEAR(m.i1, 0.5 * (a.i1 + b.i1), 1e-12);
}

TEST(Bounds, ReproductionBandsCaseOne) {
  const BoundPair f = T().bound({"bounds_f", "1", 1, std::nullopt}, 0.05);
  EXPECT_DOUBLE_EQ(f.i0, 3.15);
  EXPECT_DOUBLE_EQ(f.i1, 4.11);
  const BoundPair t = T().bound({"bounds_t", "1", 1, std::nullopt}, 0.05);
  EXPECT_DOUBLE_EQ(t.i0, -1.95);
  EXPECT_DOUBLE_EQ(t.i1, -2.6);
}

TEST(Bounds, PairsOrdered) {
  for (const char* c : {"1", "2", "3", "4", "5"})
    for (int k = 1; k <= 3; ++k)
      for (double level : {0.10, 0.05, 0.01}) {
        const BoundPair f = T().bound({"bounds_f", c, k, std::nullopt}, level);
        EXPECT_LE(f.i0, f.i1);
        for (double n : T().bound_sample_sizes("bounds_f", c, k)) {
          const BoundPair fn = T().bound({"bounds_f", c, k, n}, level);
          EXPECT_LE(fn.i0, fn.i1) << c << " " << k << " " << n;
        }
        if (T().has("bounds_t", c, k)) {
          // lower-tail statistic: the I(1) bound is further from zero
          const BoundPair t = T().bound({"bounds_t", c, k, std::nullopt}, level);
          EXPECT_LE(std::fabs(t.i0), std::fabs(t.i1));
        }
      }
}

TEST(Bounds, SmallSampleWiderThanAsymptotic) {
  for (const char* c : {"1", "2", "3", "4", "5"}) {
    const BoundPair a = T().bound({"bounds_f", c, 1, std::nullopt}, 0.05);
    const BoundPair s = T().bound({"bounds_f", c, 1, 50.0}, 0.05);
    EXPECT_GT(s.i0, a.i0) << c;
    EXPECT_GT(s.i1, a.i1) << c;
  }
}

TEST(Tables, MissingKeysRaise) {
  EXPECT_EQ(code_of([] { T().critical_value({"df_tau", "c", 40, std::nullopt}, 0.05); }),
            ErrorCode::MissingCriticalValues);
  EXPECT_EQ(code_of([] { T().critical_value({"nonsense", "c", 1, std::nullopt}, 0.05); }),
            ErrorCode::MissingCriticalValues);
  EXPECT_EQ(code_of([] { T().p_value({"bounds_f", "1", 1, std::nullopt}, 4.0); }), ErrorCode::UnsupportedPValue);
}

TEST(Tables, SerializeRoundTripIsExact) {
  const std::string text = T().serialize();
  const CriticalValueTables again = CriticalValueTables::parse(text);
  EXPECT_EQ(again.serialize(), text);
  EXPECT_EQ(again.critical_value({"df_tau", "ct", 3, 123.0}, 0.05), T().critical_value({"df_tau", "ct", 3, 123.0}, 0.05));
}

TEST(Tables, EveryFamilyHasProvenance) {
  for (const auto& f : T().families()) EXPECT_FALSE(T().provenance(f).empty()) << f;
}

TEST(Rng, CounterStreamsAreDeterministicAndDistinct) {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
}

TEST(Rng, NormalMoments) {
  CounterRng r(1, 0);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Simulate, BitwiseDeterministicAcrossThreadCounts) {
  SimulationSpec s;
  s.family = "df";
  s.variant = "c";
  s.n = 100;
  s.replications = 100000;
  s.seed = 42;
  s.threads = 1;
  const SimulatedTable a = simulate_table(s);
  const SimulatedTable b = simulate_table(s);
  s.threads = 3;
  const SimulatedTable c = simulate_table(s);
  EXPECT_EQ(a.records(), b.records());
  EXPECT_EQ(a.records(), c.records());
}

TEST(Simulate, DfConvergesToMacKinnon) {
  SimulationSpec s;
  s.family = "df";
  s.variant = "c";
  s.n = 300;
  s.replications = 1000000;
  const SimulatedTable t = simulate_table(s);
  const auto& q = t.quantiles.begin()->second;
  const CvKey key{"df_tau", "c", 1, 300.0};
  for (double p : {0.01, 0.05, 0.10}) EXPECT_NEAR(q.at(p), T().critical_value(key, p), 0.02) << p;
  EXPECT_NEAR(q.at(0.05), -2.86, 0.03);
}

TEST(Simulate, KpssConverges) {
  SimulationSpec s;
  s.family = "kpss";
  s.variant = "c";
  s.n = 500;
  s.replications = 100000;
  const SimulatedTable t = simulate_table(s);
  EXPECT_NEAR(t.quantiles.begin()->second.at(0.95), 0.463, 0.01);
}

TEST(Simulate, JohansenMatchesPublishedAsymptotic) {
  SimulationSpec s;
  s.family = "johansen";
  s.variant = "3";
  s.k = 2;
  s.n = 400;
  s.replications = 20000;
  s.probs = {0.95};
  const SimulatedTable t = simulate_table(s);
  EXPECT_NEAR(t.quantiles.at("trace").at(0.95), 15.49, 0.3);
  EXPECT_NEAR(t.quantiles.at("max").at(0.95), 14.26, 0.3);
}

TEST(Simulate, BoundsLargeSampleMatchesPesaran) {
  SimulationSpec s;
  s.family = "bounds";
  s.variant = "1";
  s.k = 1;
  s.n = 1000;
  s.replications = 20000;
  s.probs = {0.05, 0.95};
  const SimulatedTable t = simulate_table(s);
  const std::string rec = t.records();
  const CriticalValueTables sim = CriticalValueTables::parse("version 1\ntail bounds_f upper\ntail bounds_t lower\n" + rec);
  const BoundPair f = sim.bound({"bounds_f", "1", 1, 1000.0}, 0.05);
  EXPECT_NEAR(f.i0, 3.15, 0.15);
  EXPECT_NEAR(f.i1, 4.11, 0.15);
}

TEST(Simulate, RejectsUnknownFamilyAndTinyRuns) {
  SimulationSpec s;
  s.family = "nope";
  s.variant = "c";
  EXPECT_EQ(code_of([&] { simulate_table(s); }), ErrorCode::UnsupportedFamily);
  s.family = "df";
  s.replications = 1000;
  EXPECT_EQ(code_of([&] { simulate_table(s); }), ErrorCode::InvalidArgument);
}

TEST(Distributions, Basics) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(chi2_sf(3.841458820694124, 1), 0.05, 1e-12);
  EXPECT_NEAR(f_sf(3.0, 2, 100), 0.054288361816690896, 1e-10);
}
