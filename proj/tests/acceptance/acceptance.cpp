// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ardlkit/ardl.hpp"
#include "ardlkit/cointegration.hpp"
#include "ardlkit/critical_values.hpp"
#include "ardlkit/diagnostics.hpp"
#include "ardlkit/format.hpp"
#include "ardlkit/linreg.hpp"
#include "ardlkit/pipeline.hpp"
#include "ardlkit/structural.hpp"
#include "ardlkit/unitroot.hpp"
#include "ardlkit/varmodel.hpp"

using namespace ardlkit;

namespace {

// Tolerances.
constexpr double kCoefTol = 0.005;
constexpr double kLagCoefTol = 0.002;
constexpr double kEcTol = 0.001;
constexpr double kIdentityTol = 1e-8;
constexpr double kBoundsFTol = 0.05;
constexpr double kBoundsTTol = 0.02;
constexpr double kReverseFTol = 0.02;
constexpr double kWaldTol = 0.05;
constexpr double kWaldReverseTol = 0.02;
constexpr double kUnitRootTol = 0.15;
constexpr double kJohansenTol = 0.5;
constexpr double kFevdSumTol = 1e-10;
constexpr double kHdTol = 1e-8;
constexpr double kTable3Tol = 5e-5;  // 4 d.p.
constexpr double kSizeNominal = 0.05;
constexpr int kSizeSeeds = 200;
constexpr int kSizeBand = 10;  // +-5 points of 200
constexpr double kDescribeSeconds = 1.0;
constexpr double kVarSelectSeconds = 5.0;
constexpr double kPropertySeconds = 120.0;
constexpr double kPipelineSeconds = 60.0;

struct Check {
  std::vector<std::string> failures;
  int passed = 0;

  void expect(bool ok, const std::string& what) {
    if (ok)
      ++passed;
    else
      failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(8);
    s << what << " = " << got << " (want " << want << " +- " << tol << ")";
    expect(std::isfinite(got) && std::fabs(got - want) <= tol, s.str());
  }
  bool ok() const { return failures.empty(); }
};

int g_failed = 0;

void report(int n, const std::string& title, const Check& c, const std::string& extra = {}) {
  std::string detail = std::to_string(c.passed) + " checks passed";
  if (!c.ok()) {
    detail = std::to_string(c.failures.size()) + " failed: " + c.failures.front();
    for (std::size_t i = 1; i < std::min<std::size_t>(c.failures.size(), 4); ++i) detail += "; " + c.failures[i];
    if (c.failures.size() > 4) detail += "; ...";
  }
  if (!extra.empty()) detail += " | " + extra;
  std::printf("%s criterion %d (%s): %s\n", c.ok() ? "PASS" : "FAIL", n, title.c_str(), detail.c_str());
  std::fflush(stdout);
  g_failed += !c.ok();
}

void report_missing(int n, const std::string& title, const std::string& why) {
  std::printf("FAIL criterion %d (%s): %s\n", n, title.c_str(), why.c_str());
  std::fflush(stdout);
  ++g_failed;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Artifact tables.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static Table parse(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f = split_csv_record(line);
      if (first)
        t.header = f;
      else
        t.rows.push_back(f);
      first = false;
    }
    return t;
  }

  int col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }

  using Match = std::map<std::string, std::string>;
  /// First row whose named cells equal the given values, or nullptr.
  const std::vector<std::string>* find(const Match& m) const {
    for (const auto& r : rows) {
      bool ok = true;
      for (const auto& [k, v] : m) {
        const int c = col(k);
        if (c < 0 || c >= static_cast<int>(r.size()) || r[c] != v) {
          ok = false;
          break;
        }
      }
      if (ok) return &r;
    }
    return nullptr;
  }

  std::string get(const std::vector<std::string>& row, const std::string& name) const {
    const int c = col(name);
    return c >= 0 && c < static_cast<int>(row.size()) ? row[c] : std::string();
  }
  double num(const std::vector<std::string>& row, const std::string& name) const {
    const std::string s = get(row, name);
    if (s.empty() || s == "NA") return std::nan("");
    return std::stod(s);
  }
};

std::string label(const Table::Match& m) {
  std::string s;
  for (const auto& [k, v] : m) s += (s.empty() ? "" : " ") + v;
  return s;
}

/// Looks up a row and its numeric cell; NaN when absent.
double cell(const Table& t, const Table::Match& m, const std::string& column, Check& c) {
  const auto* r = t.find(m);
  if (!r) {
    c.expect(false, "missing row " + label(m));
    return std::nan("");
  }
  return t.num(*r, column);
}

/// Printed value with its tolerance of one unit in the last printed digit.
std::pair<double, double> printed(const std::string& text) {
  const auto dot = text.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(text.size() - dot - 1);
  return {std::stod(text), std::pow(10.0, -decimals)};
}

// ---------------------------------------------------------------------------
// Criteria on the reproduction bundle.

void criterion1(const Table& t1, double describe_seconds) {
  Check c;
  const std::vector<std::string> cols = {"mean", "stdev", "skewness", "kurtosis", "jb", "arch", "lb", "lb2"};
  const std::map<std::string, std::vector<std::string>> want = {
      {"dlndubai", {"0.0051", "0.0813", "-0.9425", "5.2470", "115.06", "8.8135", "43.638", "84.835"}},
      {"dlngasus", {"0.0029", "0.1346", "0.08713", "4.1522", "18.164", "2.0392", "19.560", "23.135"}},
  };
  for (const auto& [series, values] : want)
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto [v, tol] = printed(values[i]);
      c.near(cell(t1, {{"series", series}}, cols[i], c), v, tol * (1 + 1e-9), series + " " + cols[i]);
    }
  char buf[64];
  std::snprintf(buf, sizeof buf, "describe %.3f s", describe_seconds);
  c.expect(describe_seconds < kDescribeSeconds, std::string("runtime ") + buf);
  report(1, "Table 1 descriptive statistics", c, buf);
}

void criterion2(const Table& t3, double seconds) {
  Check c;
  c.near(cell(t3, {{"lag", "0"}}, "loglik", c), -305.8749, kTable3Tol, "lag 0 logL");
  c.near(cell(t3, {{"lag", "0"}}, "aic", c), 1.999193, kTable3Tol, "lag 0 AIC");
  const std::map<std::string, int> sel = {{"aic", 3}, {"fpe", 3}, {"sc", 2}, {"hq", 2}, {"lr", 11}};
  for (const auto& [crit, lag] : sel) {
    const auto* r = t3.find({{crit + "_selected", "1"}});
    const int got = r ? std::stoi(t3.get(*r, "lag")) : -1;
    c.expect(got == lag, crit + " selects " + std::to_string(got) + " (want " + std::to_string(lag) + ")");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "var_select %.3f s", seconds);
  c.expect(seconds < kVarSelectSeconds, std::string("runtime ") + buf);
  report(2, "Table 3 lag selection", c, buf);
}

/// pi formula, ec = -(1 - sum a), ECM partial sums and equal residuals.
void ardl_identities(const ArdlFit& f, Check& c, const std::string& tag) {
  const OlsFit& L = f.levels_fit;
  double sa = 0.0;
  for (int l = 1; l <= f.spec.p; ++l) sa += L.coef(f.dependent + "(-" + std::to_string(l) + ")");
  c.expect(std::fabs(f.ec_coefficient + (1.0 - sa)) <= kIdentityTol, tag + " ec = -(1 - sum a)");
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    double sb = 0.0;
    for (int l = 0; l <= f.spec.q[i]; ++l)
      sb += L.coef(l == 0 ? f.regressors[i] : f.regressors[i] + "(-" + std::to_string(l) + ")");
    c.expect(std::fabs(f.long_run[i].value - sb / (1.0 - sa)) <= kIdentityTol, tag + " pi formula");
  }
  const OlsFit& E = f.ec_fit;
  c.expect((E.residuals - L.residuals).cwiseAbs().maxCoeff() <= kIdentityTol, tag + " ECM residuals");
  c.expect(std::fabs(E.coef("CointEq(-1)") - f.ec_coefficient) <= kIdentityTol, tag + " CointEq(-1)");
  for (std::size_t i = 0; i < f.regressors.size(); ++i) {
    const std::string& x = f.regressors[i];
    for (int j = 1; j < f.spec.q[i]; ++j) {
      double tail = 0.0;
      for (int l = j + 1; l <= f.spec.q[i]; ++l) tail += L.coef(x + "(-" + std::to_string(l) + ")");
      c.expect(std::fabs(E.coef("D(" + x + "(-" + std::to_string(j) + "))") + tail) <= kIdentityTol,
               tag + " partial sum " + x + " " + std::to_string(j));
    }
  }
  for (int j = 1; j < f.spec.p; ++j) {
    double tail = 0.0;
    for (int l = j + 1; l <= f.spec.p; ++l) tail += L.coef(f.dependent + "(-" + std::to_string(l) + ")");
    c.expect(std::fabs(E.coef("D(" + f.dependent + "(-" + std::to_string(j) + "))") + tail) <= kIdentityTol,
             tag + " partial sum " + f.dependent + " " + std::to_string(j));
  }
}

Series make_series(const Eigen::VectorXd& v, const std::string& name) {
  return Series(name, {2000, 1}, std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd normals(int n, std::uint64_t seed, std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

Eigen::VectorXd cumsum(const Eigen::VectorXd& e) {
  Eigen::VectorXd s(e.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) s(i) = acc += e(i);
  return s;
}

/// Identities on seeded synthetic models across every case.
void synthetic_ardl_identities(Check& c) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int n = 120 + static_cast<int>(s) * 11;
    const Eigen::VectorXd x = cumsum(normals(n, 900 + s, 0));
    const Eigen::VectorXd e = normals(n, 900 + s, 1);
    Eigen::VectorXd y(n);
    double u = 0.0;
    for (int t = 0; t < n; ++t) y(t) = 0.6 * x(t) + (u = 0.5 * u + e(t));
    ArdlSpec spec;
    spec.p = 1 + static_cast<int>(s % 3);
    spec.q = {static_cast<int>(s % 4)};
    spec.det_case = static_cast<ArdlCase>(1 + s % 5);
    ardl_identities(fit_ardl(make_series(y, "y"), Frame({make_series(x, "x")}), spec), c,
                    "synthetic " + spec.label());
  }
}

void criterion3(const Table& t5, const Table& t6, const std::string& spec, const ArdlFit* fit) {
  Check c;
  c.expect(spec == "ARDL(1,7)", "selected " + spec + " (want ARDL(1,7))");
  const std::vector<std::pair<std::string, double>> levels = {
      {"lndubai", 0.2802},     {"lndubai(-1)", -0.3194}, {"lndubai(-2)", 0.3189},
      {"lndubai(-3)", -0.1899}, {"lndubai(-4)", 0.0345},  {"lndubai(-5)", -0.2550},
      {"lndubai(-6)", 0.3815},  {"lndubai(-7)", -0.2319}};
  c.near(cell(t5, {{"model", "lngasus"}, {"variable", "lngasus(-1)"}}, "coefficient", c), 0.9432, kLagCoefTol,
         "lngasus(-1)");
  for (const auto& [v, w] : levels)
    c.near(cell(t5, {{"model", "lngasus"}, {"variable", v}}, "coefficient", c), w, kCoefTol, "T5 " + v);
  const std::vector<std::pair<std::string, double>> ecm = {
      {"D(lndubai)", 0.2802},     {"D(lndubai(-1))", -0.0580}, {"D(lndubai(-2))", 0.2608},
      {"D(lndubai(-3))", 0.0709}, {"D(lndubai(-4))", 0.1054},  {"D(lndubai(-5))", -0.1495},
      {"D(lndubai(-6))", 0.2319}};
  for (const auto& [v, w] : ecm)
    c.near(cell(t6, {{"model", "lngasus"}, {"variable", v}}, "coefficient", c), w, kCoefTol, "T6 " + v);
  c.near(cell(t6, {{"model", "lngasus"}, {"variable", "CointEq(-1)"}}, "coefficient", c), -0.0567, kEcTol,
         "CointEq(-1)");
  if (fit) ardl_identities(*fit, c, "data");
  synthetic_ardl_identities(c);
  report(3, "Table 5/6 ARDL and ECM", c);
}

void criterion4(const Table& b) {
  Check c;
  const Table::Match fg{{"model", "lngasus"}, {"statistic", "F"}, {"level", "0.05"}};
  const Table::Match tg{{"model", "lngasus"}, {"statistic", "t"}, {"level", "0.05"}};
  const Table::Match fd{{"model", "lndubai"}, {"statistic", "F"}, {"level", "0.05"}};
  c.near(cell(b, fg, "value", c), 5.0529, kBoundsFTol, "F lngasus");
  c.near(cell(b, tg, "value", c), -3.1652, kBoundsTTol, "t lngasus");
  c.near(cell(b, fd, "value", c), 0.4036, kReverseFTol, "F lndubai");
  c.near(cell(b, fg, "i0", c), 3.15, 1e-12, "F I(0)");
  c.near(cell(b, fg, "i1", c), 4.11, 1e-12, "F I(1)");
  c.near(cell(b, tg, "i0", c), -1.95, 1e-12, "t I(0)");
  c.near(cell(b, tg, "i1", c), -2.6, 1e-12, "t I(1)");
  const auto* g = b.find(fg);
  const auto* d = b.find(fd);
  c.expect(g && b.get(*g, "verdict") == "cointegrated", "lngasus verdict " + (g ? b.get(*g, "verdict") : "?"));
  c.expect(d && b.get(*d, "verdict") == "not_cointegrated", "lndubai verdict " + (d ? b.get(*d, "verdict") : "?"));
  c.expect(d && b.get(*d, "spec") == "ARDL(2,1)", "lndubai spec " + (d ? b.get(*d, "spec") : "?") + " (want ARDL(2,1))");
  report(4, "bounds test", c);
}

void criterion5(const Table& t7) {
  Check c;
  const Table::Match ab{{"equation", "lngasus"}, {"excluded", "lndubai"}};
  const Table::Match ba{{"equation", "lndubai"}, {"excluded", "lngasus"}};
  c.near(cell(t7, ab, "chi2", c), 13.530, kWaldTol, "lndubai -> lngasus chi2");
  c.near(cell(t7, ba, "chi2", c), 0.5428, kWaldReverseTol, "lngasus -> lndubai chi2");
  c.near(cell(t7, ab, "df", c), 3, 0.0, "df lndubai -> lngasus");
  c.near(cell(t7, ba, "df", c), 3, 0.0, "df lngasus -> lndubai");
  const double pab = cell(t7, ab, "p_value", c), pba = cell(t7, ba, "p_value", c);
  c.expect(pab < 0.05, "lndubai -> lngasus significant");
  c.expect(pba > 0.05, "lngasus -> lndubai not significant");
  char buf[96];
  std::snprintf(buf, sizeof buf, "p = %.4f / %.4f", pab, pba);
  report(5, "Table 7 Toda-Yamamoto", c, buf);
}

struct Expect {
  std::string panel, series, test;
  double stat;
  bool star;
};

void criterion6(const Table& t2, const Table& t4) {
  Check c;
  const std::vector<std::string> tests = {"adf", "dfgls", "pp", "kpss", "ers",
                                          "perron_io", "perron_ao", "za", "ls_crash", "ls_break"};
  struct Row {
    std::string panel, series;
    std::vector<double> stat;
    std::vector<bool> star;
  };
  const std::vector<Row> t2rows = {
      {"log_levels", "lndubai", {-2.42, -2.40, -2.02, 0.26, 7.83, -4.20, -4.18, -4.18, -2.94, -5.01},
       {0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
      {"log_levels", "lngasus", {-2.74, -2.06, -2.80, 0.44, 11.2, -5.12, -4.36, -5.14, -3.39, -6.07},
       {0, 0, 0, 1, 0, 0, 0, 0, 0, 1}},
      {"returns", "dlndubai", {-13.4, -13.2, -13.2, 0.06, 0.64, -14.0, -14.1, -13.7, -12.6, -13.2},
       {1, 1, 1, 0, 1, 1, 1, 1, 1, 1}},
      {"returns", "dlngasus", {-16.9, -16.1, -16.9, 0.02, 0.61, -17.3, -17.4, -17.0, -8.02, -11.4},
       {1, 1, 1, 0, 1, 1, 1, 1, 1, 1}},
  };
  for (const auto& r : t2rows)
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const Table::Match m{{"panel", r.panel}, {"series", r.series}, {"test", tests[i]}};
      const auto* row = t2.find(m);
      if (!row) {
        c.expect(false, "missing row " + label(m));
        continue;
      }
      const std::string tag = r.series + " " + tests[i];
      c.near(t2.num(*row, "statistic"), r.stat[i], kUnitRootTol, tag);
      c.expect(t2.get(*row, "reject") == (r.star[i] ? "1" : "0"), tag + " 5% decision");
    }

  // Table 4: EG/PO decisions from the printed MacKinnon p-values.
  const std::vector<Expect> t4rows = {
      {"engle_granger", "lndubai", "tau", -2.9371, true},
      {"engle_granger", "lndubai", "z", -15.752, true},
      {"engle_granger", "lngasus", "tau", -3.0788, true},
      {"engle_granger", "lngasus", "z", -17.328, true},
      {"phillips_ouliaris", "lndubai", "tau", -2.9055, true},
      {"phillips_ouliaris", "lndubai", "z", -15.326, false},
      {"phillips_ouliaris", "lngasus", "tau", -3.0692, true},
      {"phillips_ouliaris", "lngasus", "z", -17.149, true},
      {"gregory_hansen_level", "lndubai", "adf", -5.20, true},
      {"gregory_hansen_level", "lndubai", "zt", -5.34, true},
      {"gregory_hansen_level", "lndubai", "za", -44.42, true},
      {"gregory_hansen_regime", "lndubai", "adf", -4.97, true},
      {"gregory_hansen_regime", "lndubai", "zt", -5.08, true},
      {"gregory_hansen_regime", "lndubai", "za", -40.70, false},
      {"gregory_hansen_regime_trend", "lndubai", "adf", -4.43, false},
      {"gregory_hansen_regime_trend", "lndubai", "zt", -4.80, false},
      {"gregory_hansen_regime_trend", "lndubai", "za", -31.72, false},
      {"gregory_hansen_level", "lngasus", "adf", -5.61, true},
      {"gregory_hansen_level", "lngasus", "zt", -5.65, true},
      {"gregory_hansen_level", "lngasus", "za", -50.38, true},
      {"gregory_hansen_regime", "lngasus", "adf", -5.77, true},
      {"gregory_hansen_regime", "lngasus", "zt", -5.91, true},
      {"gregory_hansen_regime", "lngasus", "za", -54.41, true},
      {"gregory_hansen_regime_trend", "lngasus", "adf", -6.05, true},
      {"gregory_hansen_regime_trend", "lngasus", "zt", -6.27, true},
      {"gregory_hansen_regime_trend", "lngasus", "za", -63.94, true},
  };
  for (const auto& e : t4rows) {
    const Table::Match m{{"panel", e.panel}, {"dependent", e.series}, {"test", e.test}};
    const auto* row = t4.find(m);
    if (!row) {
      c.expect(false, "missing row " + label(m));
      continue;
    }
    const std::string tag = e.panel + " " + e.series + " " + e.test;
    c.expect(t4.get(*row, "reject") == (e.star ? "1" : "0"), tag + " 5% decision");
    // residual-based tau statistics follow the unit-root tolerance; the GH
    // statistics are pinned only for the most general lngasus model
    if (e.test == "tau" || (e.panel == "gregory_hansen_regime_trend" && e.series == "lngasus"))
      c.near(t4.num(*row, "statistic"), e.stat, kUnitRootTol, tag);
  }
  const std::vector<std::tuple<std::string, std::string, double>> joh = {
      {"trace", "none", 10.989}, {"trace", "at_most_1", 0.2893},
      {"max_eigen", "none", 10.699}, {"max_eigen", "at_most_1", 0.2893}};
  for (const auto& [test, hyp, stat] : joh) {
    const Table::Match m{{"panel", "johansen"}, {"test", test}, {"hypothesis", hyp}};
    const auto* row = t4.find(m);
    if (!row) {
      c.expect(false, "missing row " + label(m));
      continue;
    }
    c.near(t4.num(*row, "statistic"), stat, kJohansenTol, "johansen " + test + " " + hyp);
    c.expect(t4.get(*row, "reject") == "0", "johansen " + test + " " + hyp + " 5% decision");
  }
  report(6, "Table 2/4 decisions", c);
}

// ---------------------------------------------------------------------------
// Structural properties.

void structural_properties(const VarFit& fit, const std::vector<std::string>& ordering, Check& c,
                           const std::string& tag) {
  const FevdTable fv = fevd(fit, 24, ordering);
  double worst = 0.0;
  for (const auto& s : fv.shares) worst = std::max(worst, (s.rowwise().sum().array() - 1.0).abs().maxCoeff());
  c.expect(worst <= kFevdSumTol, tag + " FEVD rows sum to 1");
  const HDTable hd = historical_decomposition(fit);
  double gap = 0.0;
  for (int i = 0; i < fit.n(); ++i)
    gap = std::max(gap, (hd.observed.col(i) - hd.baseline.col(i) - hd.contributions[i].rowwise().sum())
                            .cwiseAbs()
                            .maxCoeff());
  c.expect(gap <= kHdTol, tag + " HD additivity");
  const IrfPaths irf = impulse_response(fit, 4, {IrfMethod::Cholesky, ordering, BandMethod::None});
  // impact of a later-ordered shock on an earlier-ordered variable is exactly zero
  std::vector<int> pos;
  for (const auto& n : ordering.empty() ? fit.names : ordering) pos.push_back(fit.index_of(n));
  for (std::size_t a = 0; a < pos.size(); ++a)
    for (std::size_t b = a + 1; b < pos.size(); ++b)
      c.expect(irf.responses[pos[b]](pos[a], 0) == 0.0, tag + " Cholesky impact lower triangular");
}

void synthetic_structural(Check& c) {
  Eigen::MatrixXd L(300, 2);
  const Eigen::VectorXd e1 = normals(300, 14, 0), e2 = normals(300, 14, 1);
  L.row(0).setZero();
  for (int t = 1; t < 300; ++t) L.row(t) << 0.5 * L(t - 1, 0) + 0.2 * L(t - 1, 1) + e1(t), -0.3 * L(t - 1, 1) + e2(t) + 0.4 * e1(t);
  const VarFit g = fit_var(L, {"a", "b"}, 2, VarDeterministic::Const);
  structural_properties(g, {"b", "a"}, c, "synthetic");

  VarFit f = fit_var(L, {"a", "b"}, 1, VarDeterministic::None);
  f.A[0](0, 1) = f.A[0](1, 0) = 0.0;
  f.sigma_adjusted(0, 1) = f.sigma_adjusted(1, 0) = 0.0;
  f.sigma(0, 1) = f.sigma(1, 0) = 0.0;
  for (auto m : {IrfMethod::Cholesky, IrfMethod::Generalized}) {
    const IrfPaths r = impulse_response(f, 24, {m, {}, BandMethod::None});
    c.expect(r.responses[0].row(1).cwiseAbs().maxCoeff() == 0.0 && r.responses[1].row(0).cwiseAbs().maxCoeff() == 0.0,
             "diagonal VAR cross responses zero");
  }
}

void criterion7(const Table& fevd_csv, const VarFit* fit, const std::vector<std::string>& ordering) {
  Check c;
  const double share = cell(fevd_csv, {{"variable", "lngasus"}, {"horizon", "24"}, {"shock", "lndubai"}}, "share", c);
  c.expect(share >= 0.13 && share <= 0.23, "long-run lndubai share of lngasus " + std::to_string(share) +
                                               " outside [0.13, 0.23]");
  if (fit) structural_properties(*fit, ordering, c, "data");
  synthetic_structural(c);
  char buf[64];
  std::snprintf(buf, sizeof buf, "share at h=24 %.4f", share);
  report(7, "structural properties", c, buf);
}

// ---------------------------------------------------------------------------
// Criterion 8: data-independent property suites.

void ols_properties(Check& c) {
  const int n = 200;
  Eigen::MatrixXd X(n, 3);
  X.col(0).setOnes();
  X.col(1) = normals(n, 5, 0);
  X.col(2) = cumsum(normals(n, 5, 1));
  const Eigen::VectorXd y = 1.0 + 0.5 * X.col(1).array() - 0.2 * X.col(2).array() + normals(n, 5, 2).array();
  const DesignMatrix D(X, {"const", "a", "b"});
  const OlsFit f = ols(y, D);
  const double orth = (X.transpose() * f.residuals).cwiseAbs().maxCoeff() / (X.norm() * y.norm());
  c.expect(orth <= 1e-12, "X'e = 0");
  const double scale = 4.25;
  const OlsFit g = ols(scale * y, D);
  c.expect((g.coefficients - scale * f.coefficients).cwiseAbs().maxCoeff() <= 1e-9, "y scale equivariance");
  c.expect((g.t_stats() - f.t_stats()).cwiseAbs().maxCoeff() <= 1e-8, "t invariant to y scale");
  Eigen::MatrixXd Xs = X;
  Xs.col(2) *= scale;
  const OlsFit h = ols(y, DesignMatrix(Xs, {"const", "a", "b"}));
  c.expect(std::fabs(h.coefficients(2) * scale - f.coefficients(2)) <= 1e-9, "regressor scale equivariance");
  c.expect((h.residuals - f.residuals).cwiseAbs().maxCoeff() <= 1e-9, "residuals invariant to regressor scale");
}

void telescoping(Check& c) {
  Eigen::MatrixXd Z(240, 3);
  const Eigen::VectorXd common = cumsum(normals(240, 77, 0));
  Z.col(0) = common + normals(240, 77, 1);
  Z.col(1) = 0.5 * common + normals(240, 77, 2);
  Z.col(2) = cumsum(normals(240, 77, 3));
  for (int k = 1; k <= 5; ++k) {
    const JohansenResult r = johansen(Z, 2, static_cast<JohansenCase>(k));
    const std::string tag = "case " + std::to_string(k);
    for (int i = 0; i + 1 < 3; ++i)
      c.expect(std::fabs(r.trace(i) - r.trace(i + 1) - r.max_eigen(i)) <= 1e-10, tag + " trace telescopes");
    c.expect(std::fabs(r.trace(2) - r.max_eigen(2)) <= 1e-12, tag + " last rank");
  }
}

Frame ar_pair(int n, double phi, std::uint64_t seed) {
  std::vector<Series> cols;
  for (int j = 0; j < 2; ++j) {
    const Eigen::VectorXd e = normals(n + 50, seed, j);
    Eigen::VectorXd u(n + 50);
    double prev = 0.0;
    for (int t = 0; t < n + 50; ++t) u(t) = prev = phi * prev + e(t);
    cols.push_back(make_series(u.tail(n), j == 0 ? "a" : "b"));
  }
  return Frame(cols);
}

void ty_df(Check& c) {
  for (int k = 1; k <= 4; ++k)
    for (int d = 0; d <= 2; ++d) {
      const TYResult ty = toda_yamamoto(ar_pair(200, 0.9, 600 + k), k, d);
      const std::string tag = "k=" + std::to_string(k) + " d=" + std::to_string(d);
      c.expect(ty.fit.p == k && ty.fit.extra_exog_lags == d, tag + " VAR(k + d_max)");
      for (const auto& eq : ty.blocks)
        for (const auto& r : eq.rows) c.expect(r.test.distribution.df1 == k, tag + " Wald df = k");
    }
}

void cusumq_endpoint(Check& c) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const int n = 60 + 30 * static_cast<int>(s);
    Eigen::MatrixXd X(n, 2);
    X.col(0).setOnes();
    X.col(1) = normals(n, 300 + s, 0);
    const Eigen::VectorXd y = X.col(1) + normals(n, 300 + s, 1);
    const CusumPath p = cusum(ols(y, DesignMatrix(X, {"const", "x"})), CusumKind::Cusumq);
    c.expect(std::fabs(p.statistic.back() - 1.0) <= 1e-12, "CUSUMQ ends at 1 (n=" + std::to_string(n) + ")");
    c.expect(std::is_sorted(p.statistic.begin(), p.statistic.end()), "CUSUMQ nondecreasing");
  }
}

std::string monte_carlo_sizes(Check& c) {
  int adf = 0, kpss = 0, ab = 0, ba = 0;
  for (int s = 0; s < kSizeSeeds; ++s) {
    const Eigen::VectorXd e = normals(300, 31000 + s);
    const UnitRootSpec spec{Deterministic::Constant, LagSelection::sic(), std::nullopt};
    adf += *unit_root(cumsum(e), UnitRootKind::Adf, spec).test.p_value < kSizeNominal;
    const UnitRootResult k = unit_root(e, UnitRootKind::Kpss, spec);
    kpss += k.test.statistic > k.test.critical_values.at(kSizeNominal);
    const Frame fr = ar_pair(200, 0.5, 41000 + s);
    const int lag = std::max(1, select_lag_order(fr, 8, VarDeterministic::Const).aic);
    const TYResult ty = toda_yamamoto(fr, lag, max_integration_order(fr));
    ab += ty.causes("a", "b");
    ba += ty.causes("b", "a");
  }
  const int nominal = static_cast<int>(kSizeNominal * kSizeSeeds);
  for (auto [name, count] : {std::pair{"ADF", adf}, {"KPSS", kpss}, {"TY a->b", ab}, {"TY b->a", ba}})
    c.expect(std::abs(count - nominal) <= kSizeBand,
             std::string(name) + " size " + std::to_string(count) + "/" + std::to_string(kSizeSeeds));
  char buf[128];
  std::snprintf(buf, sizeof buf, "sizes ADF %.3f KPSS %.3f TY %.3f/%.3f", adf / double(kSizeSeeds),
                kpss / double(kSizeSeeds), ab / double(kSizeSeeds), ba / double(kSizeSeeds));
  return buf;
}

void criterion8() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  ols_properties(c);
  telescoping(c);
  ty_df(c);
  cusumq_endpoint(c);
  std::string sizes = monte_carlo_sizes(c);
  const double secs = seconds_since(t0);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.1f s", secs);
  c.expect(secs < kPropertySeconds, std::string("runtime ") + buf);
  report(8, "property suites", c, sizes + ", " + buf);
}

// ---------------------------------------------------------------------------

void criterion9(const PipelineConfig& base, const ReportBundle& first, double first_seconds) {
  Check c;
  PipelineConfig cfg = base;
  const auto t0 = std::chrono::steady_clock::now();
  const ReportBundle second = build_bundle(cfg);
  const double second_seconds = seconds_since(t0);
  cfg.threads = 4;
  const ReportBundle threaded = build_bundle(cfg);
  c.expect(first.ok(), "pipeline stages failed");
  c.expect(first.artifacts == second.artifacts, "repeat run differs");
  c.expect(first.artifacts == threaded.artifacts, "threads=4 run differs");
  const double worst = std::max(first_seconds, second_seconds);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu artifacts, %.2f s per run", first.artifacts.size(), worst);
  c.expect(worst < kPipelineSeconds, std::string("runtime ") + buf);
  report(9, "determinism", c, buf);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path config_path =
      argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::path(ARDLKIT_SOURCE_DIR) / "data/reproduction.json";
  PipelineConfig cfg;
  std::string missing;
  try {
    cfg = PipelineConfig::load(config_path);
    if (!std::filesystem::exists(cfg.data_path)) missing = "dataset missing: " + cfg.data_path.string();
  } catch (const std::exception& e) {
    missing = std::string("config unreadable: ") + e.what();
  }

  const std::vector<std::string> titles = {"", "Table 1 descriptive statistics", "Table 3 lag selection",
                                           "Table 5/6 ARDL and ECM", "bounds test", "Table 7 Toda-Yamamoto",
                                           "Table 2/4 decisions", "structural properties", "property suites",
                                           "determinism"};
  if (!missing.empty()) {
    for (int n : {1, 2, 3, 4, 5, 6, 7}) report_missing(n, titles[n], missing);
    criterion8();
    report_missing(9, titles[9], missing);
  } else {
    cfg.threads = 1;
    PipelineConfig only = cfg;
    only.stages = {"describe"};
    auto t0 = std::chrono::steady_clock::now();
    const ReportBundle described = build_bundle(only);
    const double describe_seconds = seconds_since(t0);
    only.stages = {"var_select"};
    t0 = std::chrono::steady_clock::now();
    const ReportBundle selected = build_bundle(only);
    const double select_seconds = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const ReportBundle full = build_bundle(cfg);
    const double full_seconds = seconds_since(t0);
    auto artifact = [&](const ReportBundle& b, const std::string& name) {
      auto it = b.artifacts.find(name);
      return Table::parse(it == b.artifacts.end() ? std::string() : it->second);
    };
    for (const auto& s : full.stages)
      if (!s.ok) std::printf("note: stage %s: %s\n", s.stage.c_str(), s.error.c_str());

    // Refits for the identities on the data.
    std::map<std::string, Series> all;
    const Frame raw = load_csv(cfg.data_path, cfg.date_column, cfg.columns);
    for (const auto& t : cfg.transforms) {
      const Transform kind = t.kind == "log" ? Transform::Log : t.kind == "diff" ? Transform::Diff : Transform::LogDiff;
      all.emplace(t.name, transform(raw.column(t.source), kind).renamed(t.name));
    }
    std::optional<ArdlFit> ardl;
    std::optional<TYResult> ty;
    std::string spec = "?";
    const auto& resolved = full.manifest.at("resolved");
    try {
      if (resolved.contains("ardl")) spec = resolved.at("ardl").at(0).at("spec").get<std::string>();
      ArdlOptions o;
      o.max_p = cfg.ardl_max_p;
      o.max_q = cfg.ardl_max_q;
      o.det_case = parse_case(cfg.ardl_case);
      ardl = fit_ardl(all.at("lngasus"), Frame({all.at("lndubai")}), o);
      const int k = resolved.at("toda_yamamoto").at("k").get<int>();
      const int d = resolved.at("toda_yamamoto").at("d_max").get<int>();
      ty = toda_yamamoto(Frame({all.at("lndubai"), all.at("lngasus")}), k, d, VarDeterministic::Const);
    } catch (const std::exception& e) {
      std::printf("note: refit failed: %s\n", e.what());
    }

    criterion1(artifact(described, "table1.csv"), describe_seconds);
    criterion2(artifact(selected, "table3.csv"), select_seconds);
    criterion3(artifact(full, "table5.csv"), artifact(full, "table6.csv"), spec, ardl ? &*ardl : nullptr);
    criterion4(artifact(full, "ardl_bounds.csv"));
    criterion5(artifact(full, "table7.csv"));
    criterion6(artifact(full, "table2.csv"), artifact(full, "table4.csv"));
    criterion7(artifact(full, "fig5_fevd.csv"), ty ? &ty->fit : nullptr, cfg.ordering);
    criterion8();
    criterion9(cfg, full, full_seconds);
  }
  std::printf("%d of 9 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
