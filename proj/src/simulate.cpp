#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "ardlkit/cointegration.hpp"
#include "ardlkit/critical_values.hpp"
#include "ardlkit/error.hpp"
#include "ardlkit/format.hpp"
#include "ardlkit/linreg.hpp"

namespace ardlkit {

namespace {

using Draw = std::function<std::vector<double>(CounterRng&)>;

/// Runs `draw` once per replication; replication r always uses stream r, so
/// the result does not depend on how replications are split across threads.
std::vector<std::vector<double>> run(const SimulationSpec& spec, std::size_t nstats, const Draw& draw) {
  const std::size_t R = spec.replications;
  std::vector<std::vector<double>> out(nstats, std::vector<double>(R));
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, R));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      CounterRng rng(spec.seed, r);
      const auto v = draw(rng);
      for (std::size_t s = 0; s < nstats; ++s) out[s][r] = v[s];
    }
  };
  if (threads <= 1) {
    work(0, R);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, R * t / threads, R * (t + 1) / threads);
    for (auto& th : pool) th.join();
  }
  return out;
}

/// Linear interpolation between order statistics (sample quantile type 7).
double quantile(std::vector<double>& sorted, double prob) {
  const double h = (sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

int det_columns(const std::string& v) {
  if (v == "n") return 0;
  if (v == "c") return 1;
  if (v == "ct") return 2;
  fail(ErrorCode::InvalidArgument, "deterministic variant must be n, c or ct");
}

/// Dickey-Fuller tau and z for a driftless random walk, via accumulated
/// normal equations so 10^6 replications stay cheap.
std::vector<double> df_draw(CounterRng& rng, int n, int d) {
  const int m = 1 + d;
  double xtx[3][3] = {};
  double xty[3] = {};
  double yty = 0.0;
  double y = 0.0;
  for (int t = 1; t <= n; ++t) {
    const double e = rng.normal();
    const double x[3] = {y, 1.0, static_cast<double>(t)};
    for (int a = 0; a < m; ++a) {
      xty[a] += x[a] * e;
      for (int b = 0; b <= a; ++b) xtx[a][b] += x[a] * x[b];
    }
    yty += e * e;
    y += e;
  }
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int a = 0; a < m; ++a) {
    v(a) = xty[a];
    for (int b = 0; b <= a; ++b) M(a, b) = M(b, a) = xtx[a][b];
  }
  const Eigen::Matrix3d Mi = M.inverse();
  const Eigen::Vector3d beta = Mi * v;
  const double ssr = yty - beta.head(m).dot(v.head(m));
  const double s2 = ssr / (n - m);
  const double tau = beta(0) / std::sqrt(s2 * Mi(0, 0));
  return {tau, n * beta(0)};
}

/// Engle-Granger residual statistics for k independent random walks.
std::vector<double> eg_draw(CounterRng& rng, int n, int k, int d) {
  Eigen::MatrixXd W(n + 1, k);
  W.row(0).setZero();
  for (int t = 1; t <= n; ++t)
    for (int j = 0; j < k; ++j) W(t, j) = W(t - 1, j) + rng.normal();
  DesignMatrix X;
  if (d >= 1) X.append(Eigen::VectorXd::Ones(n + 1), "const");
  if (d >= 2) X.append(Eigen::VectorXd::LinSpaced(n + 1, 1.0, n + 1.0), "trend");
  for (int j = 1; j < k; ++j) X.append(W.col(j), "x" + std::to_string(j));
  const Eigen::VectorXd e = ols(W.col(0), X).residuals;
  const OlsFit f = ols(e.tail(n) - e.head(n), DesignMatrix(e.head(n), {"e(-1)"}));
  return {f.coefficients(0) / f.std_errors()(0), n * f.coefficients(0)};
}

std::vector<double> kpss_draw(CounterRng& rng, int n, int d) {
  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) y(t) = rng.normal();
  Eigen::VectorXd e;
  if (d == 1) {
    e = y.array() - y.mean();
  } else {
    DesignMatrix X;
    X.append(Eigen::VectorXd::Ones(n), "const");
    X.append(Eigen::VectorXd::LinSpaced(n, 1.0, n), "trend");
    e = ols(y, X).residuals;
  }
  double s = 0.0;
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    s += e(t);
    acc += s * s;
  }
  const double g0 = e.squaredNorm() / n;
  return {acc / (static_cast<double>(n) * n * g0)};
}

std::vector<double> johansen_draw(CounterRng& rng, int T, int k, int c) {
  Eigen::MatrixXd L(T + 1, k);
  L.row(0).setZero();
  for (int t = 1; t <= T; ++t)
    for (int j = 0; j < k; ++j) {
      double step = rng.normal();
      if (j == 0 && (c == 3 || c == 4)) step += 1.0;
      if (j == 0 && c == 5) step += 1.0 + 0.01 * t;
      L(t, j) = L(t - 1, j) + step;
    }
  const JohansenResult r = johansen(L, 1, static_cast<JohansenCase>(c), nullptr);
  return {r.trace(0), r.max_eigen(0)};
}

/// Conditional ECM without short-run lags under the null of no level
/// relation: F on the level terms and t on y(-1).
std::vector<double> bounds_draw(CounterRng& rng, int n, int k, int c, bool integrated) {
  Eigen::VectorXd y(n + 1);
  Eigen::MatrixXd x(n + 1, k);
  y(0) = 0.0;
  x.row(0).setZero();
  for (int t = 1; t <= n; ++t) {
    y(t) = y(t - 1) + rng.normal();
    for (int j = 0; j < k; ++j) x(t, j) = (integrated ? x(t - 1, j) : 0.0) + rng.normal();
  }
  if (!integrated)
    for (int j = 0; j < k; ++j) x(0, j) = rng.normal();
  DesignMatrix X;
  std::vector<std::string> level{"y(-1)"};
  X.append(y.head(n), "y(-1)");
  for (int j = 0; j < k; ++j) {
    level.push_back("x" + std::to_string(j) + "(-1)");
    X.append(x.col(j).head(n), level.back());
  }
  const Eigen::VectorXd tr = Eigen::VectorXd::LinSpaced(n, 1.0, n);
  if (c == 2) {
    X.append(Eigen::VectorXd::Ones(n), "const");
    level.push_back("const");
  }
  if (c == 4) {
    X.append(tr, "trend");
    level.push_back("trend");
  }
  for (int j = 0; j < k; ++j) X.append(x.col(j).tail(n) - x.col(j).head(n), "dx" + std::to_string(j));
  if (c >= 3) X.append(Eigen::VectorXd::Ones(n), "const");
  if (c == 5) X.append(tr, "trend");
  const OlsFit f = ols(y.tail(n) - y.head(n), X);
  return {wald_zero(f, level, WaldForm::F).statistic, f.t_stats()(0)};
}

std::vector<double> cusumq_draw(CounterRng& rng, int m) {
  std::vector<double> s(m);
  double acc = 0.0;
  for (int r = 0; r < m; ++r) {
    const double w = rng.normal();
    acc += w * w;
    s[r] = acc;
  }
  double worst = 0.0;
  for (int r = 0; r < m; ++r) worst = std::max(worst, std::fabs(s[r] / acc - (r + 1.0) / m));
  return {worst};
}

const std::vector<double> kLower{0.01, 0.05, 0.10};
const std::vector<double> kUpper{0.90, 0.95, 0.99};

}  // namespace

SimulatedTable simulate_table(const SimulationSpec& spec) {
  if (spec.replications < 10000) fail(ErrorCode::InvalidArgument, "at least 10^4 replications required");
  if (spec.n < 10) fail(ErrorCode::InvalidArgument, "sample size must be >= 10");
  if (spec.k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  SimulatedTable out;
  out.spec = spec;
  const int n = spec.n;
  const int k = spec.k;
  std::vector<std::string> names;
  std::vector<bool> upper;
  std::vector<std::vector<double>> stats;

  if (spec.family == "df") {
    const int d = det_columns(spec.variant);
    names = {"tau", "z"};
    upper = {false, false};
    stats = run(spec, 2, [&](CounterRng& g) { return k == 1 ? df_draw(g, n, d) : eg_draw(g, n, k, d); });
  } else if (spec.family == "kpss") {
    const int d = det_columns(spec.variant);
    if (d == 0) fail(ErrorCode::InvalidArgument, "kpss variant must be c or ct");
    names = {"eta"};
    upper = {true};
    stats = run(spec, 1, [&](CounterRng& g) { return kpss_draw(g, n, d); });
  } else if (spec.family == "johansen") {
    const int c = std::stoi(spec.variant);
    if (c < 1 || c > 5) fail(ErrorCode::InvalidArgument, "johansen variant must be 1..5");
    names = {"trace", "max"};
    upper = {true, true};
    stats = run(spec, 2, [&](CounterRng& g) { return johansen_draw(g, n, k, c); });
  } else if (spec.family == "bounds") {
    const int c = std::stoi(spec.variant);
    if (c < 1 || c > 5) fail(ErrorCode::InvalidArgument, "bounds variant must be 1..5");
    names = {"f_i0", "t_i0", "f_i1", "t_i1"};
    upper = {true, false, true, false};
    stats = run(spec, 4, [&](CounterRng& g) {
      auto a = bounds_draw(g, n, k, c, false);
      const auto b = bounds_draw(g, n, k, c, true);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    });
  } else if (spec.family == "cusumq") {
    names = {"c0"};
    upper = {true};
    stats = run(spec, 1, [&](CounterRng& g) { return cusumq_draw(g, n); });
  } else {
    fail(ErrorCode::UnsupportedFamily, "no simulator for family '" + spec.family + "'");
  }

  for (std::size_t s = 0; s < names.size(); ++s) {
    std::sort(stats[s].begin(), stats[s].end());
    const std::vector<double>& probs = spec.probs.empty() ? (upper[s] ? kUpper : kLower) : spec.probs;
    for (double p : probs) {
      if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::InvalidArgument, "quantile probabilities must lie in (0, 1)");
      out.quantiles[names[s]][p] = quantile(stats[s], p);
    }
  }
  return out;
}

std::string SimulatedTable::records() const {
  const SimulationSpec& s = spec;
  const std::string tag = "simulated " + std::to_string(s.replications) + " replications, seed " +
                          std::to_string(s.seed) + ", n " + std::to_string(s.n);
  const std::string kn = std::to_string(s.k) + " " + std::to_string(s.n) + " ";
  std::string out;
  auto emit = [&](const std::string& family, const std::string& variant, const std::string& stat) {
    const auto it = quantiles.find(stat);
    if (it == quantiles.end()) return;
    for (const auto& [p, v] : it->second)
      out += "quantile " + family + " " + variant + " " + kn + format_shortest(p) + " " + format_shortest(v) + "\n";
  };
  if (s.family == "df") {
    out += "source df_tau " + tag + "\nsource df_z " + tag + "\n";
    emit("df_tau", s.variant, "tau");
    emit("df_z", s.variant, "z");
  } else if (s.family == "kpss") {
    out += "source kpss " + tag + "\n";
    emit("kpss", s.variant, "eta");
  } else if (s.family == "johansen") {
    out += "source johansen_trace " + tag + "\nsource johansen_max " + tag + "\n";
    emit("johansen_trace", s.variant, "trace");
    emit("johansen_max", s.variant, "max");
  } else if (s.family == "cusumq") {
    out += "source cusumq " + tag + "\n";
    emit("cusumq", "two_sided", "c0");
  } else if (s.family == "bounds") {
    out += "source bounds_f " + tag + "\nsource bounds_t " + tag + "\n";
    const auto& fi0 = quantiles.at("f_i0");
    const auto& fi1 = quantiles.at("f_i1");
    for (const auto& [p, v] : fi0)
      if (p > 0.5 && fi1.count(p))
        out += "bound bounds_f " + s.variant + " " + kn + format_shortest(std::round((1.0 - p) * 1e10) / 1e10) + " " + format_shortest(v) + " " +
               format_shortest(fi1.at(p)) + "\n";
    if (s.variant == "1" || s.variant == "3" || s.variant == "5") {
      const auto& ti0 = quantiles.at("t_i0");
      const auto& ti1 = quantiles.at("t_i1");
      for (const auto& [p, v] : ti0)
        if (p < 0.5 && ti1.count(p))
          out += "bound bounds_t " + s.variant + " " + kn + format_shortest(p) + " " + format_shortest(v) + " " +
                 format_shortest(ti1.at(p)) + "\n";
    }
  }
  return out;
}

}  // namespace ardlkit
