#include "ardlkit/structural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ardlkit/critical_values.hpp"
#include "ardlkit/error.hpp"

namespace ardlkit {

namespace {

std::vector<int> resolve_order(const VarFit& fit, const std::vector<std::string>& ordering) {
  std::vector<int> order;
  if (ordering.empty()) {
    order.resize(fit.n());
    std::iota(order.begin(), order.end(), 0);
    return order;
  }
  if (static_cast<int>(ordering.size()) != fit.n())
    fail(ErrorCode::InvalidArgument, "ordering must list every VAR variable once");
  for (const auto& name : ordering) order.push_back(fit.index_of(name));
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorCode::InvalidArgument, "ordering lists a variable twice");
  return order;
}

std::vector<Eigen::MatrixXd> theta(const std::vector<Eigen::MatrixXd>& A, const Eigen::MatrixXd& sigma, int H,
                                   IrfMethod method, const std::vector<int>& order) {
  const Eigen::MatrixXd B = impact_matrix(sigma, method, order);
  auto phi = ma_coefficients(A, H);
  for (auto& m : phi) m = m * B;
  return phi;
}

/// Coefficient covariance blocks: lag coefficients via sigma (x) (X'X)^{-1};
/// vech(sigma) elements via (s_ik s_jl + s_il s_jk) / T.
struct ParamLayout {
  int n, p;
  int na() const { return n * n * p; }
  int ns() const { return n * (n + 1) / 2; }
  int size() const { return na() + ns(); }
};

Eigen::VectorXd pack(const VarFit& fit) {
  const ParamLayout L{fit.n(), fit.p};
  Eigen::VectorXd th(L.size());
  int k = 0;
  for (int l = 0; l < fit.p; ++l)
    for (int i = 0; i < L.n; ++i)
      for (int j = 0; j < L.n; ++j) th(k++) = fit.A[l](i, j);
  for (int i = 0; i < L.n; ++i)
    for (int j = 0; j <= i; ++j) th(k++) = fit.sigma_adjusted(i, j);
  return th;
}

void unpack(const Eigen::VectorXd& th, int n, int p, std::vector<Eigen::MatrixXd>& A, Eigen::MatrixXd& S) {
  A.assign(p, Eigen::MatrixXd(n, n));
  S.resize(n, n);
  int k = 0;
  for (int l = 0; l < p; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A[l](i, j) = th(k++);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) S(i, j) = S(j, i) = th(k++);
}

Eigen::MatrixXd param_covariance(const VarFit& fit) {
  const ParamLayout L{fit.n(), fit.p};
  const int n = L.n, p = L.p;
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(L.size(), L.size());
  const Eigen::MatrixXd& X = fit.regressors.X;
  const Eigen::MatrixXd XtXi = (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
  const Eigen::MatrixXd& S = fit.sigma_adjusted;
  auto aidx = [&](int l, int i, int j) { return l * n * n + i * n + j; };
  for (int l = 0; l < p; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l2 = 0; l2 < p; ++l2)
          for (int i2 = 0; i2 < n; ++i2)
            for (int j2 = 0; j2 < n; ++j2)
              V(aidx(l, i, j), aidx(l2, i2, j2)) = S(i, i2) * XtXi(j * p + l, j2 * p + l2);
  std::vector<std::pair<int, int>> vech;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) vech.emplace_back(i, j);
  const double T = fit.T;
  for (int a = 0; a < L.ns(); ++a)
    for (int b = 0; b < L.ns(); ++b) {
      const auto [i, j] = vech[a];
      const auto [k, l] = vech[b];
      V(L.na() + a, L.na() + b) = (S(i, k) * S(j, l) + S(i, l) * S(j, k)) / T;
    }
  return V;
}

Eigen::VectorXd flatten(const std::vector<Eigen::MatrixXd>& th) {
  const auto n = th[0].rows();
  Eigen::VectorXd v(static_cast<Eigen::Index>(th.size()) * n * n);
  Eigen::Index k = 0;
  for (const auto& m : th)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) v(k++) = m(i, j);
  return v;
}

}  // namespace

std::vector<Eigen::MatrixXd> ma_coefficients(const std::vector<Eigen::MatrixXd>& A, int H) {
  const auto n = A.empty() ? 0 : A[0].rows();
  std::vector<Eigen::MatrixXd> phi;
  phi.reserve(H);
  for (int h = 0; h < H; ++h) {
    if (h == 0) {
      phi.push_back(Eigen::MatrixXd::Identity(n, n));
      continue;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int l = 1; l <= std::min<int>(h, static_cast<int>(A.size())); ++l) m += A[l - 1] * phi[h - l];
    phi.push_back(std::move(m));
  }
  return phi;
}

Eigen::MatrixXd impact_matrix(const Eigen::MatrixXd& sigma, IrfMethod method, const std::vector<int>& order) {
  const auto n = sigma.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(sigma(i, i) > 0.0)) fail(ErrorCode::DegenerateCovariance, "residual variance is not positive");
  if (method == IrfMethod::Generalized) {
    Eigen::MatrixXd B = sigma;
    for (Eigen::Index j = 0; j < n; ++j) B.col(j) /= std::sqrt(sigma(j, j));
    return B;
  }
  Eigen::MatrixXd Sp(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) Sp(a, b) = sigma(order[a], order[b]);
  Eigen::LLT<Eigen::MatrixXd> llt(Sp);
  if (llt.info() != Eigen::Success) fail(ErrorCode::DegenerateCovariance, "residual covariance is not positive definite");
  const Eigen::MatrixXd Lp = llt.matrixL();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) B(order[a], order[b]) = Lp(a, b);
  return B;
}

IrfPaths impulse_response(const VarFit& fit, int H, const IrfOptions& opt) {
  if (H < 1) fail(ErrorCode::InvalidArgument, "horizon must be >= 1");
  const int n = fit.n();
  const std::vector<int> order = resolve_order(fit, opt.ordering);
  IrfPaths out;
  out.method = opt.method;
  out.names = fit.names;
  for (int v : order) out.ordering.push_back(fit.names[v]);
  out.horizon = H;
  if (!is_stable(fit)) out.warnings.push_back("VAR has a root with modulus >= 1; responses need not decay");

  const auto th = theta(fit.A, fit.sigma_adjusted, H, opt.method, order);
  out.responses.assign(n, Eigen::MatrixXd(n, H));
  for (int h = 0; h < H; ++h)
    for (int j = 0; j < n; ++j) out.responses[j].col(h) = th[h].col(j);

  Eigen::VectorXd se = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(H) * n * n);
  const Eigen::VectorXd th0 = pack(fit);
  const Eigen::MatrixXd V = param_covariance(fit);
  auto eval = [&](const Eigen::VectorXd& par) {
    std::vector<Eigen::MatrixXd> A;
    Eigen::MatrixXd S;
    unpack(par, n, fit.p, A, S);
    return flatten(theta(A, S, H, opt.method, order));
  };
  if (opt.bands == BandMethod::Analytic) {
    Eigen::MatrixXd J(se.size(), th0.size());
    for (Eigen::Index k = 0; k < th0.size(); ++k) {
      const double step = 1e-6 * std::max(1.0, std::fabs(th0(k)));
      Eigen::VectorXd up = th0, dn = th0;
      up(k) += step;
      dn(k) -= step;
      J.col(k) = (eval(up) - eval(dn)) / (2.0 * step);
    }
    se = (J * V * J.transpose()).diagonal().cwiseMax(0.0).cwiseSqrt();
  } else if (opt.bands == BandMethod::MonteCarlo) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(V);
    const Eigen::MatrixXd root =
        es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(se.size());
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(se.size());
    int kept = 0;
    for (int r = 0; r < opt.replications; ++r) {
      CounterRng rng(opt.seed, static_cast<std::uint64_t>(r));
      Eigen::VectorXd z(th0.size());
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.normal();
      try {
        const Eigen::VectorXd v = eval(th0 + root * z);
        sum += v;
        sumsq += v.cwiseProduct(v);
        ++kept;
      } catch (const Error&) {
        // draw with a non-positive-definite covariance
      }
    }
    if (kept > 1) {
      const Eigen::VectorXd mean = sum / kept;
      se = ((sumsq - kept * mean.cwiseProduct(mean)) / (kept - 1)).cwiseMax(0.0).cwiseSqrt();
    }
  }
  out.std_errors.assign(n, Eigen::MatrixXd::Zero(n, H));
  Eigen::Index k = 0;
  for (int h = 0; h < H; ++h)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) out.std_errors[j](i, h) = se(k++);
  for (int j = 0; j < n; ++j) {
    out.lower.push_back(out.responses[j] - 2.0 * out.std_errors[j]);
    out.upper.push_back(out.responses[j] + 2.0 * out.std_errors[j]);
  }
  return out;
}

FevdTable fevd(const VarFit& fit, int H, const std::vector<std::string>& ordering) {
  if (H < 1) fail(ErrorCode::InvalidArgument, "horizon must be >= 1");
  const int n = fit.n();
  const std::vector<int> order = resolve_order(fit, ordering);
  const auto th = theta(fit.A, fit.sigma_adjusted, H, IrfMethod::Cholesky, order);
  FevdTable t;
  t.names = fit.names;
  for (int v : order) t.ordering.push_back(fit.names[v]);
  t.horizon = H;
  t.shares.assign(n, Eigen::MatrixXd(H, n));
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (int h = 0; h < H; ++h) {
    acc += th[h].cwiseProduct(th[h]);
    for (int i = 0; i < n; ++i) t.shares[i].row(h) = acc.row(i) / acc.row(i).sum();
  }
  return t;
}

HDTable historical_decomposition(const VarFit& fit) {
  const int n = fit.n();
  const int p = fit.p;
  const int T = fit.T;
  const int first = static_cast<int>(fit.levels.rows()) - T;
  if (n > 8) fail(ErrorCode::InvalidArgument, "historical decomposition supports at most 8 variables");
  HDTable hd;
  hd.names = fit.names;
  hd.start = fit.sample_start;
  hd.observed = fit.Y;

  // Exogenous part of each observation: deterministics and augmentation lags.
  const Eigen::Index nx = fit.exog.cols();
  const Eigen::MatrixXd D = fit.regressors.X.rightCols(nx);
  Eigen::MatrixXd path = fit.levels.topRows(first).transpose();  // n x (first + T), grown below
  path.conservativeResize(n, first + T);
  hd.baseline.resize(T, n);
  for (int t = 0; t < T; ++t) {
    Eigen::VectorXd v = nx > 0 ? Eigen::VectorXd(fit.exog * D.row(t).transpose()) : Eigen::VectorXd::Zero(n);
    for (int l = 1; l <= p; ++l) v += fit.A[l - 1] * path.col(first + t - l);
    path.col(first + t) = v;
    hd.baseline.row(t) = v.transpose();
  }

  const Eigen::MatrixXd& U = fit.residuals;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  hd.contributions.assign(n, Eigen::MatrixXd::Zero(T, n));
  int orderings = 0;
  do {
    const Eigen::MatrixXd B = impact_matrix(fit.sigma, IrfMethod::Cholesky, order);
    const Eigen::MatrixXd E = B.partialPivLu().solve(U.transpose());  // n x T structural shocks
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, T);
      for (int t = 0; t < T; ++t) {
        Eigen::VectorXd v = B.col(j) * E(j, t);
        for (int l = 1; l <= std::min(p, t); ++l) v += fit.A[l - 1] * c.col(t - l);
        c.col(t) = v;
      }
      for (int i = 0; i < n; ++i) hd.contributions[i].col(j) += c.row(i).transpose();
    }
    ++orderings;
  } while (std::next_permutation(order.begin(), order.end()));

  for (int i = 0; i < n; ++i) {
    hd.contributions[i] /= orderings;
    const Eigen::VectorXd gap = hd.observed.col(i) - hd.baseline.col(i) - hd.contributions[i].rowwise().sum();
    hd.unattributed = std::max(hd.unattributed, gap.cwiseAbs().maxCoeff());
    hd.contributions[i].col(n - 1) = hd.observed.col(i) - hd.baseline.col(i);
    for (int j = 0; j + 1 < n; ++j) hd.contributions[i].col(n - 1) -= hd.contributions[i].col(j);
  }
  return hd;
}

}  // namespace ardlkit
