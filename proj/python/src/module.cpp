#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ardlkit/ardl.hpp"
#include "ardlkit/cointegration.hpp"
#include "ardlkit/critical_values.hpp"
#include "ardlkit/dataframe.hpp"
#include "ardlkit/diagnostics.hpp"
#include "ardlkit/error.hpp"
#include "ardlkit/linreg.hpp"
#include "ardlkit/pipeline.hpp"
#include "ardlkit/structural.hpp"
#include "ardlkit/unitroot.hpp"
#include "ardlkit/varmodel.hpp"

namespace py = pybind11;
using namespace ardlkit;

namespace {

Series make_series(const Eigen::VectorXd& v, const std::string& name, const std::string& start) {
  return Series(name, MonthStamp::parse(start), std::vector<double>(v.data(), v.data() + v.size()));
}

Frame make_frame(const Eigen::MatrixXd& m, const std::vector<std::string>& names, const std::string& start) {
  if (static_cast<Eigen::Index>(names.size()) != m.cols()) throw py::value_error("one name per column required");
  std::vector<Series> cols;
  for (Eigen::Index j = 0; j < m.cols(); ++j) cols.push_back(make_series(m.col(j), names[j], start));
  return Frame(cols);
}

py::dict test_dict(const TestResult& t) {
  py::dict d;
  d["name"] = t.name;
  d["statistic"] = t.statistic;
  d["p_value"] = t.p_value ? py::cast(*t.p_value) : py::none();
  d["critical_values"] = t.critical_values;
  d["distribution"] = t.distribution.describe();
  return d;
}

py::dict fit_dict(const OlsFit& f) {
  py::dict d;
  d["names"] = f.design.names;
  d["coefficients"] = f.coefficients;
  d["std_errors"] = f.std_errors();
  d["t_stats"] = f.t_stats();
  d["p_values"] = f.p_values();
  d["residuals"] = f.residuals;
  d["ssr"] = f.ssr;
  d["r2"] = f.r2;
  d["loglik"] = f.loglik;
  d["aic"] = f.aic;
  d["sc"] = f.sc;
  d["hq"] = f.hq;
  d["nobs"] = f.n;
  return d;
}

UnitRootKind unit_kind(const std::string& s) {
  static const std::map<std::string, UnitRootKind> m = {
      {"adf", UnitRootKind::Adf}, {"dfgls", UnitRootKind::Dfgls}, {"pp", UnitRootKind::Pp},
      {"kpss", UnitRootKind::Kpss}, {"ers", UnitRootKind::Ers}};
  auto it = m.find(s);
  if (it == m.end()) throw py::value_error("unknown unit-root test " + s);
  return it->second;
}

Deterministic det_of(const std::string& s) {
  if (s == "n") return Deterministic::None;
  if (s == "c") return Deterministic::Constant;
  if (s == "ct") return Deterministic::ConstantTrend;
  throw py::value_error("deterministic must be n, c or ct");
}

VarDeterministic var_det_of(const std::string& s) {
  if (s == "none") return VarDeterministic::None;
  if (s == "const") return VarDeterministic::Const;
  if (s == "const_trend") return VarDeterministic::ConstTrend;
  throw py::value_error("deterministic must be none, const or const_trend");
}

}  // namespace

PYBIND11_MODULE(_ardlkit, m) {
  m.doc() = "ARDL bounds testing, unit roots, cointegration and VAR causality";
  m.attr("__version__") = ARDLKIT_VERSION;

  static py::handle exc = py::exception<Error>(m, "ArdlkitError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  m.def(
      "ols",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X, std::vector<std::string> names, bool hac) {
        if (names.empty())
          for (Eigen::Index j = 0; j < X.cols(); ++j) names.push_back("x" + std::to_string(j));
        OlsFit f = ols(y, DesignMatrix(X, names));
        if (hac) f = with_hac(f);
        return fit_dict(f);
      },
      py::arg("y"), py::arg("X"), py::arg("names") = std::vector<std::string>{}, py::arg("hac") = false);

  m.def(
      "unit_root",
      [](const Eigen::VectorXd& y, const std::string& test, const std::string& deterministic, int max_lag) {
        UnitRootSpec spec;
        spec.deterministic = det_of(deterministic);
        spec.lags = LagSelection::sic(max_lag);
        const UnitRootResult r = unit_root(y, unit_kind(test), spec);
        py::dict d = test_dict(r.test);
        d["lags"] = r.lags;
        d["bandwidth"] = r.bandwidth;
        d["nobs"] = r.nobs;
        return d;
      },
      py::arg("y"), py::arg("test") = "adf", py::arg("deterministic") = "c", py::arg("max_lag") = -1);

  m.def(
      "johansen",
      [](const Eigen::MatrixXd& levels, int var_lags, int det_case) {
        const JohansenResult r = johansen(levels, var_lags, static_cast<JohansenCase>(det_case));
        py::dict d;
        d["eigenvalues"] = r.eigenvalues;
        d["trace"] = r.trace;
        d["max_eigen"] = r.max_eigen;
        d["trace_p"] = r.trace_p;
        d["max_p"] = r.max_p;
        d["trace_cv5"] = r.trace_cv5;
        d["max_cv5"] = r.max_cv5;
        d["nobs"] = r.nobs;
        return d;
      },
      py::arg("levels"), py::arg("var_lags") = 2, py::arg("case") = 3);

  m.def(
      "ardl",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const std::string& y_name,
         const std::vector<std::string>& x_names, int max_p, int max_q, const std::string& det_case,
         const std::string& covariance, const std::string& start) {
        ArdlOptions opt;
        opt.max_p = max_p;
        opt.max_q = max_q;
        opt.det_case = parse_case(det_case);
        opt.covariance = covariance == "hac" ? CovarianceKind::Hac : CovarianceKind::Ordinary;
        const ArdlFit fit = fit_ardl(make_series(y, y_name, start), make_frame(x, x_names, start), opt);
        const BoundsResult b = bounds_test(fit);
        py::dict d;
        d["spec"] = fit.spec.label();
        d["levels"] = fit_dict(fit.levels_fit);
        d["ecm"] = fit_dict(fit.ec_fit);
        d["ec_coefficient"] = fit.ec_coefficient;
        py::list lr;
        for (const auto& c : fit.long_run)
          lr.append(py::dict(py::arg("name") = c.name, py::arg("value") = c.value, py::arg("std_error") = c.std_error));
        d["long_run"] = lr;
        d["bounds_f"] = b.f_statistic;
        d["bounds_t"] = b.t_statistic ? py::cast(*b.t_statistic) : py::none();
        d["verdict"] = verdict_code(b.verdict);
        py::dict fb;
        for (const auto& [lev, pr] : b.f_bounds) fb[py::cast(lev)] = py::make_tuple(pr.i0, pr.i1);
        d["f_bounds"] = fb;
        return d;
      },
      py::arg("y"), py::arg("x"), py::arg("y_name") = "y", py::arg("x_names") = std::vector<std::string>{"x"},
      py::arg("max_p") = 8, py::arg("max_q") = 8, py::arg("case") = "no_const", py::arg("covariance") = "ordinary",
      py::arg("start") = "2000-01");

  m.def(
      "var_lag_selection",
      [](const Eigen::MatrixXd& levels, const std::vector<std::string>& names, int max_lag,
         const std::string& deterministic) {
        const SelectionTable t = select_lag_order(make_frame(levels, names, "2000-01"), max_lag, var_det_of(deterministic));
        py::dict d;
        py::list rows;
        for (const auto& r : t.rows)
          rows.append(py::dict(py::arg("lag") = r.lag, py::arg("loglik") = r.loglik, py::arg("lr") = r.lr,
                               py::arg("fpe") = r.fpe, py::arg("aic") = r.aic, py::arg("sc") = r.sc,
                               py::arg("hq") = r.hq));
        d["rows"] = rows;
        d["selected"] = py::dict(py::arg("lr") = t.lr, py::arg("fpe") = t.fpe, py::arg("aic") = t.aic,
                                 py::arg("sc") = t.sc, py::arg("hq") = t.hq);
        return d;
      },
      py::arg("levels"), py::arg("names"), py::arg("max_lag") = 12, py::arg("deterministic") = "const_trend");

  m.def(
      "toda_yamamoto",
      [](const Eigen::MatrixXd& levels, const std::vector<std::string>& names, int k, int d_max) {
        const TYResult r = toda_yamamoto(make_frame(levels, names, "2000-01"), k, d_max);
        py::list out;
        for (const auto& eq : r.blocks)
          for (const auto& row : eq.rows)
            out.append(py::dict(py::arg("equation") = eq.equation, py::arg("excluded") = row.excluded,
                                py::arg("chi2") = row.test.statistic, py::arg("df") = row.test.distribution.df1,
                                py::arg("p_value") = row.test.p_value ? *row.test.p_value : std::nan("")));
        return out;
      },
      py::arg("levels"), py::arg("names"), py::arg("k"), py::arg("d_max"));

  m.def(
      "structural",
      [](const Eigen::MatrixXd& levels, const std::vector<std::string>& names, int p, int horizon,
         const std::string& deterministic) {
        const VarFit fit = fit_var(levels, names, p, var_det_of(deterministic), 0);
        IrfOptions io;
        io.bands = BandMethod::Analytic;
        const IrfPaths irf = impulse_response(fit, horizon, io);
        const FevdTable fv = fevd(fit, horizon, {});
        const HDTable hd = historical_decomposition(fit);
        py::dict d;
        d["irf"] = irf.responses;
        d["irf_se"] = irf.std_errors;
        d["fevd"] = fv.shares;
        d["hd_observed"] = hd.observed;
        d["hd_baseline"] = hd.baseline;
        d["hd_contributions"] = hd.contributions;
        d["roots"] = stability_roots(fit);
        return d;
      },
      py::arg("levels"), py::arg("names"), py::arg("p"), py::arg("horizon") = 24, py::arg("deterministic") = "const");

  m.def(
      "critical_value",
      [](const std::string& family, const std::string& variant, int k, std::optional<double> n, double level) {
        return default_tables().critical_value(CvKey{family, variant, k, n}, level);
      },
      py::arg("family"), py::arg("variant"), py::arg("k"), py::arg("n") = std::nullopt, py::arg("level") = 0.05);

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config) {
        const ReportBundle b = run_pipeline(PipelineConfig::load(config));
        py::dict d;
        d["dir"] = b.dir;
        d["ok"] = b.ok();
        d["failed_stages"] = b.failed_stages();
        std::vector<std::string> names;
        for (const auto& [k, v] : b.artifacts) names.push_back(k);
        d["artifacts"] = names;
        return d;
      },
      py::arg("config"));

  m.def(
      "emit_plots",
      [](const std::filesystem::path& dir, const std::string& format) {
        return emit_plots(dir, format == "csv" ? PlotFormat::Csv : PlotFormat::Svg);
      },
      py::arg("bundle_dir"), py::arg("format") = "svg");
}
