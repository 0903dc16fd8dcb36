#include "ardlkit/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <mutex>
#include <sstream>

#include <openssl/evp.h>

#include "ardlkit/ardl.hpp"
#include "ardlkit/cointegration.hpp"
#include "ardlkit/dataframe.hpp"
#include "ardlkit/diagnostics.hpp"
#include "ardlkit/error.hpp"
#include "ardlkit/format.hpp"
#include "ardlkit/structural.hpp"
#include "ardlkit/unitroot.hpp"
#include "ardlkit/varmodel.hpp"

#ifndef ARDLKIT_VERSION
#define ARDLKIT_VERSION "dev"
#endif

namespace ardlkit {

using nlohmann::json;

namespace {

/// CSV text built row by row; numbers carry 10 significant digits.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

  Csv& add(const std::vector<std::string>& cells) {
    if (cells.size() != width_) fail(ErrorCode::InvalidArgument, "csv row width mismatch");
    row(cells);
    return *this;
  }
  const std::string& text() const { return text_; }

 private:
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + quoted(cells[i]);
    text_ += "\n";
  }
  static std::string quoted(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string q = "\"";
    for (char c : cell) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  std::size_t width_;
  std::string text_;
};

std::string num(double x) { return format_sig(x, 10); }
std::string num(std::optional<double> x) { return x ? format_sig(*x, 10) : ""; }
std::string integer(long long v) { return std::to_string(v); }
std::string count(int v) { return v < 0 ? std::string() : std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

std::string cv_at(const std::map<double, double>& cvs, double level) {
  for (const auto& [l, v] : cvs)
    if (std::fabs(l - level) < 1e-12) return num(v);
  return "";
}

std::string decision(const TestResult& t, double level) {
  const auto r = t.rejects(level);
  return r ? flag(*r) : "";
}

struct StageContext {
  const PipelineConfig& cfg;
  Frame frame;
  std::map<std::string, std::string> artifacts;
  json resolved = json::object();
  std::vector<std::string> warnings;
  std::mutex mu;

  void put(const std::string& name, const std::string& text) {
    std::lock_guard lock(mu);
    artifacts[name] = text;
  }
  void resolve(const std::string& key, const json& value) {
    std::lock_guard lock(mu);
    resolved[key] = value;
  }
  void warn(const std::string& w) {
    std::lock_guard lock(mu);
    warnings.push_back(w);
  }
};

/// Series restricted to the dates where every listed column is defined.
Frame aligned(const std::map<std::string, Series>& all, const std::vector<std::string>& names, const char* what) {
  if (names.empty()) fail(ErrorCode::ConfigError, std::string(what) + " lists no variables");
  MonthStamp start{1, 1};
  MonthStamp end{9999, 12};
  for (const auto& n : names) {
    auto it = all.find(n);
    if (it == all.end()) fail(ErrorCode::ConfigError, std::string(what) + " refers to unknown column '" + n + "'");
    start = std::max(start, it->second.start());
    end = std::min(end, it->second.end());
  }
  std::vector<Series> cols;
  for (const auto& n : names) {
    const Series& s = all.at(n);
    cols.push_back(s.slice(static_cast<std::size_t>(s.start().months_until(start)),
                           static_cast<std::size_t>(start.months_until(end) + 1)));
  }
  return Frame(cols);
}

VarDeterministic var_det(const std::string& s) {
  return s == "none" ? VarDeterministic::None : s == "const" ? VarDeterministic::Const : VarDeterministic::ConstTrend;
}

Deterministic unit_det(const std::string& s) {
  return s == "none" || s == "n" ? Deterministic::None : s == "c" ? Deterministic::Constant : Deterministic::ConstantTrend;
}

// ---------------------------------------------------------------------------

void stage_describe(StageContext& ctx, const std::map<std::string, Series>& all) {
  const auto& cfg = ctx.cfg;
  Csv t({"series", "n", "mean", "stdev", "skewness", "kurtosis", "jb", "jb_p", "arch", "arch_p", "lb", "lb_p", "lb2",
         "lb2_p"});
  for (const auto& name : cfg.describe_series) {
    auto it = all.find(name);
    if (it == all.end()) fail(ErrorCode::ConfigError, "describe refers to unknown column '" + name + "'");
    const Series& s = it->second;
    const DescriptiveStats d = describe(s);
    const Eigen::VectorXd v = s.to_vector();
    const Eigen::VectorXd centred = v.array() - v.mean();
    const LmTest arch = arch_lm(centred, cfg.describe_lags);
    const TestResult lb = ljung_box(v, cfg.describe_lags, false);
    const TestResult lb2 = ljung_box(v, cfg.describe_lags, true);
    t.add({name, integer(d.n), num(d.mean), num(d.stdev), num(d.skewness), num(d.kurtosis), num(d.jarque_bera),
           num(d.jarque_bera_p), num(arch.lm.statistic), num(arch.lm.p_value), num(lb.statistic), num(lb.p_value),
           num(lb2.statistic), num(lb2.p_value)});
  }
  ctx.put("table1.csv", t.text());
}

void stage_unit_root(StageContext& ctx, const std::map<std::string, Series>& all) {
  const auto& cfg = ctx.cfg;
  Csv t({"panel", "series", "test", "statistic", "p_value", "cv_1", "cv_5", "cv_10", "reject", "lags", "bandwidth",
         "nobs", "break_dates"});
  const LagSelection sel = cfg.unit_root_criterion == "aic" ? LagSelection::aic(cfg.unit_root_max_lag)
                                                            : LagSelection::sic(cfg.unit_root_max_lag);
  for (const auto& panel : cfg.unit_root_panels) {
    for (const auto& name : panel.series) {
      auto it = all.find(name);
      if (it == all.end()) fail(ErrorCode::ConfigError, "unit_root refers to unknown column '" + name + "'");
      const Series& s = it->second;
      for (const auto& test : cfg.unit_root_tests) {
        static const std::map<std::string, UnitRootKind> plain = {{"adf", UnitRootKind::Adf},
                                                                  {"dfgls", UnitRootKind::Dfgls},
                                                                  {"pp", UnitRootKind::Pp},
                                                                  {"kpss", UnitRootKind::Kpss},
                                                                  {"ers", UnitRootKind::Ers}};
        static const std::map<std::string, BreakKind> breaks = {{"perron_io", BreakKind::PerronIo},
                                                                {"perron_ao", BreakKind::PerronAo},
                                                                {"za", BreakKind::ZivotAndrews},
                                                                {"ls_crash", BreakKind::LsCrash},
                                                                {"ls_break", BreakKind::LsBreak}};
        if (auto p = plain.find(test); p != plain.end()) {
          UnitRootSpec spec;
          spec.deterministic = unit_det(panel.deterministic);
          spec.lags = sel;
          const UnitRootResult r = unit_root(s, p->second, spec);
          t.add({panel.name, name, test, num(r.test.statistic), num(r.test.p_value),
                 cv_at(r.test.critical_values, 0.01), cv_at(r.test.critical_values, 0.05),
                 cv_at(r.test.critical_values, 0.10), decision(r.test, cfg.level), count(r.lags),
                 count(r.bandwidth), integer(r.nobs), ""});
        } else {
          BreakSpec spec;
          spec.lags = sel;
          const BreakResult r = break_unit_root(s, breaks.at(test), spec);
          std::string dates;
          for (const auto& d : r.break_dates) dates += (dates.empty() ? "" : ";") + d.to_string();
          const TestResult tr = r.as_test(test);
          t.add({panel.name, name, test, num(r.statistic), "", cv_at(r.critical_values, 0.01),
                 cv_at(r.critical_values, 0.05), cv_at(r.critical_values, 0.10), decision(tr, cfg.level),
                 integer(r.lags), "", integer(static_cast<long long>(s.size())), dates});
        }
      }
    }
  }
  ctx.put("table2.csv", t.text());
}

SelectionTable run_selection(StageContext& ctx, const std::map<std::string, Series>& all) {
  const auto& cfg = ctx.cfg;
  return select_lag_order(aligned(all, cfg.var_variables, "var_select"), cfg.var_max_lag,
                          var_det(cfg.var_deterministic));
}

void stage_var_select(StageContext& ctx, const std::map<std::string, Series>& all) {
  const SelectionTable tab = run_selection(ctx, all);
  Csv t({"lag", "loglik", "lr", "lr_p", "fpe", "aic", "sc", "hq", "lr_selected", "fpe_selected", "aic_selected",
         "sc_selected", "hq_selected"});
  for (const auto& r : tab.rows)
    t.add({integer(r.lag), num(r.loglik), r.lag == 0 ? "NA" : num(r.lr), r.lag == 0 ? "NA" : num(r.lr_p), num(r.fpe),
           num(r.aic), num(r.sc), num(r.hq), flag(tab.lr == r.lag), flag(tab.fpe == r.lag), flag(tab.aic == r.lag),
           flag(tab.sc == r.lag), flag(tab.hq == r.lag)});
  ctx.put("table3.csv", t.text());
  ctx.resolve("var_select", {{"nobs", tab.nobs}, {"lr", tab.lr}, {"fpe", tab.fpe}, {"aic", tab.aic}, {"sc", tab.sc},
                             {"hq", tab.hq}});
}

void stage_cointegration(StageContext& ctx, const std::map<std::string, Series>& all) {
  const auto& cfg = ctx.cfg;
  const Frame f = aligned(all, cfg.coint_variables, "cointegration");
  if (f.cols() != 2) fail(ErrorCode::ConfigError, "cointegration stage expects exactly two variables");
  Csv t({"panel", "dependent", "test", "hypothesis", "statistic", "p_value", "cv_5", "reject", "eigenvalue",
         "break_date", "lags", "bandwidth"});
  ResidualCointSpec spec;
  spec.deterministic = unit_det(cfg.residual_deterministic);
  for (int d = 0; d < 2; ++d) {
    const Series& y = f.column(d);
    const Series& x = f.column(1 - d);
    for (auto kind : {ResidualTestKind::EngleGranger, ResidualTestKind::PhillipsOuliaris}) {
      const EGResult r = residual_cointegration(y, x, kind, spec);
      const std::string panel = kind == ResidualTestKind::EngleGranger ? "engle_granger" : "phillips_ouliaris";
      for (const TestResult* tr : {&r.tau, &r.z})
        t.add({panel, y.name(), tr == &r.tau ? "tau" : "z", "none", num(tr->statistic), num(tr->p_value),
               cv_at(tr->critical_values, 0.05), decision(*tr, cfg.level), "", "",
               kind == ResidualTestKind::EngleGranger ? count(r.lag_order) : "", count(r.bandwidth)});
    }
  }
  const JohansenResult j = johansen(f, cfg.johansen_var_lags, static_cast<JohansenCase>(cfg.johansen_case));
  for (int r = 0; r < j.trace.size(); ++r) {
    const std::string hyp = r == 0 ? "none" : "at_most_" + std::to_string(r);
    auto rej = [&](double p) { return std::isnan(p) ? std::string() : flag(p < cfg.level); };
    t.add({"johansen", "", "trace", hyp, num(j.trace(r)), num(j.trace_p(r)), num(j.trace_cv5(r)), rej(j.trace_p(r)),
           num(j.eigenvalues(r)), "", integer(j.var_lags), ""});
    t.add({"johansen", "", "max_eigen", hyp, num(j.max_eigen(r)), num(j.max_p(r)), num(j.max_cv5(r)),
           rej(j.max_p(r)), num(j.eigenvalues(r)), "", integer(j.var_lags), ""});
  }
  GhSpec gh;
  gh.trimming = cfg.gh_trimming;
  for (int d = 0; d < 2; ++d) {
    for (const auto& m : cfg.gh_models) {
      GhModel model = m == "level" ? GhModel::Level
                      : m == "level_trend" ? GhModel::LevelTrend
                      : m == "regime"      ? GhModel::Regime
                                           : GhModel::RegimeTrend;
      const GHResult r = gregory_hansen(f.column(d), f.column(1 - d), model, gh);
      for (const auto& [stat, g] : {std::pair{"adf", &r.adf}, std::pair{"zt", &r.zt}, std::pair{"za", &r.za}})
        t.add({"gregory_hansen_" + m, f.column(d).name(), stat, "none", num(g->value), "",
               cv_at(g->critical_values, 0.05), flag(g->rejects(cfg.level)), "", g->break_date.to_string(), "", ""});
    }
  }
  ctx.put("table4.csv", t.text());

  const JohansenSummary s = johansen_summary(f.to_matrix(), cfg.johansen_var_lags);
  Csv ic({"rank", "case", "loglik", "aic", "sc"});
  for (int r = 0; r < s.loglik.rows(); ++r)
    for (int c = 0; c < s.loglik.cols(); ++c)
      ic.add({integer(r), integer(static_cast<int>(s.cases[c])), num(s.loglik(r, c)), num(s.aic(r, c)),
              num(s.sc(r, c))});
  ctx.put("table4_johansen_ic.csv", ic.text());
}

void coefficient_rows(Csv& t, const std::string& model, const OlsFit& f) {
  const Eigen::VectorXd se = f.std_errors();
  const Eigen::VectorXd ts = f.t_stats();
  const Eigen::VectorXd ps = f.p_values();
  for (int i = 0; i < f.k; ++i)
    t.add({model, f.design.names[i], num(f.coefficients(i)), num(se(i)), num(ts(i)), num(ps(i))});
}

void stage_ardl(StageContext& ctx, const std::map<std::string, Series>& all) {
  const auto& cfg = ctx.cfg;
  Csv levels({"model", "variable", "coefficient", "std_error", "t_stat", "p_value"});
  Csv ecm({"model", "variable", "coefficient", "std_error", "t_stat", "p_value"});
  Csv bounds({"model", "spec", "nobs", "statistic", "value", "p_value", "level", "i0", "i1", "source", "verdict"});
  Csv diag({"model", "test", "statistic", "p_value", "df"});
  Csv cus({"model", "kind", "date", "statistic", "lower", "upper"});
  ArdlOptions opt;
  opt.max_p = cfg.ardl_max_p;
  opt.max_q = cfg.ardl_max_q;
  opt.criterion = cfg.ardl_criterion == "aic" ? Criterion::Aic : cfg.ardl_criterion == "sc" ? Criterion::Sc : Criterion::Hq;
  opt.det_case = parse_case(cfg.ardl_case);
  opt.covariance = cfg.ardl_covariance == "hac" ? CovarianceKind::Hac : CovarianceKind::Ordinary;
  const BoundsSource src =
      cfg.bounds_source == "narayan_small_sample" ? BoundsSource::NarayanSmallSample : BoundsSource::PesaranAsymptotic;
  json resolved = json::array();
  for (const auto& m : cfg.ardl_models) {
    std::vector<std::string> names{m.dependent};
    names.insert(names.end(), m.regressors.begin(), m.regressors.end());
    const Frame f = aligned(all, names, "ardl");
    const Frame xs = f.select(m.regressors);
    const ArdlFit fit = fit_ardl(f.column(0), xs, opt);
    const std::string model = m.dependent;
    const std::string label = fit.spec.label();
    resolved.push_back({{"dependent", m.dependent}, {"spec", label}, {"nobs", fit.levels_fit.n}});
    coefficient_rows(levels, model, fit.levels_fit);
    coefficient_rows(ecm, model, fit.ec_fit);
    for (const auto& lr : fit.long_run)
      ecm.add({model, "long_run:" + lr.name, num(lr.value), num(lr.std_error), num(lr.t_stat), num(lr.p_value)});

    const BoundsResult b = bounds_test(fit, src, cfg.level);
    const std::string source = b.source == BoundsSource::NarayanSmallSample ? "narayan_small_sample" : "pesaran_asymptotic";
    if (b.source != b.requested) ctx.warn(model + ": small-sample bounds unavailable for n = " + std::to_string(b.nobs) + ", asymptotic bounds used");
    for (const auto& [lev, pr] : b.f_bounds)
      bounds.add({model, label, integer(b.nobs), "F", num(b.f_statistic), "", num(lev), num(pr.i0), num(pr.i1), source,
                  verdict_code(b.verdict)});
    for (const auto& [lev, pr] : b.t_bounds)
      bounds.add({model, label, integer(b.nobs), "t", num(b.t_statistic), "", num(lev), num(pr.i0), num(pr.i1), source,
                  verdict_code(b.verdict)});
    if (b.t_bounds.empty())
      bounds.add({model, label, integer(b.nobs), "t", num(b.t_statistic), "", "", "", "", source, verdict_code(b.verdict)});
    try {
      const TestResult sr = short_run_causality(fit);
      bounds.add({model, label, integer(b.nobs), "short_run_wald_F", num(sr.statistic), num(sr.p_value), "", "", "",
                  "", ""});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoLaggedRegressors) throw;
    }

    // Residual checks use the ordinary-covariance fit.
    OlsFit plain = fit.levels_fit;
    const LmTest bg = breusch_godfrey(plain, cfg.ardl_serial_lags);
    const LmTest ar = arch_lm(plain.residuals, cfg.ardl_arch_lags);
    const TestResult reset = ramsey_reset(plain);
    const DescriptiveStats jb = describe(std::span<const double>(plain.residuals.data(), plain.residuals.size()));
    auto add = [&](const std::string& name, const TestResult& r) {
      diag.add({model, name, num(r.statistic), num(r.p_value),
                r.distribution.kind == NullDistribution::Kind::F
                    ? num(r.distribution.df1) + "/" + num(r.distribution.df2)
                    : num(r.distribution.df1)});
    };
    add("breusch_godfrey_F", bg.f);
    add("breusch_godfrey_LM", bg.lm);
    add("arch_F", ar.f);
    add("arch_LM", ar.lm);
    for (const auto& [name, kind] : {std::pair{"breusch_pagan_godfrey", HetKind::Bpg}, std::pair{"white", HetKind::White},
                                     std::pair{"harvey", HetKind::Harvey}, std::pair{"glejser", HetKind::Glejser}}) {
      const LmTest h = het_test(plain, kind);
      add(std::string(name) + "_F", h.f);
      add(std::string(name) + "_LM", h.lm);
    }
    add("ramsey_reset_F", reset);
    diag.add({model, "jarque_bera", num(jb.jarque_bera), num(jb.jarque_bera_p), "2"});

    for (auto kind : {CusumKind::Cusum, CusumKind::Cusumq}) {
      const CusumPath p = cusum(plain, kind, cfg.cusum_level);
      for (std::size_t i = 0; i < p.step.size(); ++i)
        cus.add({model, kind == CusumKind::Cusum ? "cusum" : "cusumq", fit.sample_start.plus(p.step[i]).to_string(),
                 num(p.statistic[i]), num(p.lower[i]), num(p.upper[i])});
    }
  }
  ctx.put("table5.csv", levels.text());
  ctx.put("table6.csv", ecm.text());
  ctx.put("ardl_bounds.csv", bounds.text());
  ctx.put("ardl_diagnostics.csv", diag.text());
  ctx.put("fig2_cusum.csv", cus.text());
  ctx.resolve("ardl", resolved);
}

TYResult run_ty(StageContext& ctx, const std::map<std::string, Series>& all) {
  const auto& cfg = ctx.cfg;
  const std::vector<std::string>& vars = cfg.ty_variables.empty() ? cfg.var_variables : cfg.ty_variables;
  const Frame f = aligned(all, vars, "toda_yamamoto");
  int k = 0;
  if (cfg.ty_k) {
    k = *cfg.ty_k;
  } else {
    k = select_lag_order(f, cfg.var_max_lag, var_det(cfg.var_deterministic)).aic;
    if (k < 1) k = 1;
  }
  const int d_max = cfg.ty_d_max ? *cfg.ty_d_max : max_integration_order(f, cfg.level);
  ctx.resolve("toda_yamamoto", {{"k", k}, {"d_max", d_max}});
  return toda_yamamoto(f, k, d_max, var_det(cfg.ty_deterministic));
}

void stage_toda_yamamoto(StageContext& ctx, const TYResult& ty) {
  const auto& cfg = ctx.cfg;
  Csv t({"equation", "excluded", "chi2", "df", "p_value"});
  for (const auto& eq : ty.blocks)
    for (const auto& r : eq.rows)
      t.add({eq.equation, r.excluded, num(r.test.statistic), num(r.test.distribution.df1), num(r.test.p_value)});
  ctx.put("table7.csv", t.text());

  Csv d({"test", "equation", "statistic", "p_value", "df"});
  const TestResult pm = portmanteau(ty.fit, cfg.portmanteau_lags);
  d.add({"portmanteau_adjusted_q", "system", num(pm.statistic), num(pm.p_value), num(pm.distribution.df1)});
  for (int i = 0; i < ty.fit.n(); ++i) {
    const LmTest bg = breusch_godfrey(ty.fit.equations[i], cfg.ty_serial_lags);
    d.add({"breusch_godfrey_F", ty.fit.names[i], num(bg.f.statistic), num(bg.f.p_value),
           num(bg.f.distribution.df1) + "/" + num(bg.f.distribution.df2)});
  }
  ctx.put("ty_diagnostics.csv", d.text());

  Csv roots({"index", "real", "imag", "modulus"});
  int i = 0;
  for (const auto& z : stability_roots(ty.fit)) roots.add({integer(i++), num(z.real()), num(z.imag()), num(std::abs(z))});
  ctx.put("fig3_roots.csv", roots.text());
}

void stage_structural(StageContext& ctx, const TYResult& ty) {
  const auto& cfg = ctx.cfg;
  const VarFit& fit = ty.fit;
  IrfOptions io;
  io.method = IrfMethod::Cholesky;
  io.ordering = cfg.ordering;
  io.bands = cfg.bands == "analytic" ? BandMethod::Analytic : cfg.bands == "none" ? BandMethod::None : BandMethod::MonteCarlo;
  io.replications = cfg.band_replications;
  io.seed = cfg.seed;
  const IrfPaths irf = impulse_response(fit, cfg.horizon, io);
  for (const auto& w : irf.warnings) ctx.warn("structural: " + w);
  Csv t({"shock", "variable", "horizon", "value", "lower", "upper"});
  for (int j = 0; j < fit.n(); ++j)
    for (int i = 0; i < fit.n(); ++i)
      for (int h = 0; h < cfg.horizon; ++h)
        t.add({fit.names[j], fit.names[i], integer(h + 1), num(irf.responses[j](i, h)), num(irf.lower[j](i, h)),
               num(irf.upper[j](i, h))});
  ctx.put("fig4_irf.csv", t.text());

  const FevdTable fv = fevd(fit, cfg.horizon, cfg.ordering);
  Csv fc({"variable", "horizon", "shock", "share"});
  for (int i = 0; i < fit.n(); ++i)
    for (int h = 0; h < cfg.horizon; ++h)
      for (int j = 0; j < fit.n(); ++j) fc.add({fit.names[i], integer(h + 1), fit.names[j], num(fv.shares[i](h, j))});
  ctx.put("fig5_fevd.csv", fc.text());

  const HDTable hd = historical_decomposition(fit);
  std::vector<std::string> header{"variable", "date", "observed", "baseline"};
  for (const auto& n : fit.names) header.push_back("shock_" + n);
  Csv hc(header);
  for (int i = 0; i < fit.n(); ++i)
    for (int t2 = 0; t2 < hd.observed.rows(); ++t2) {
      std::vector<std::string> row{fit.names[i], hd.start.plus(t2).to_string(), num(hd.observed(t2, i)),
                                   num(hd.baseline(t2, i))};
      for (int j = 0; j < fit.n(); ++j) row.push_back(num(hd.contributions[i](t2, j)));
      hc.add(row);
    }
  ctx.put("fig5_hd.csv", hc.text());
  ctx.resolve("structural", {{"hd_unattributed", num(hd.unattributed)}, {"stable", is_stable(fit)}});
}

std::string series_csv(const std::map<std::string, Series>& all, const std::vector<std::string>& order) {
  MonthStamp start{9999, 12};
  MonthStamp end{1, 1};
  for (const auto& n : order) {
    start = std::min(start, all.at(n).start());
    end = std::max(end, all.at(n).end());
  }
  std::vector<std::string> header{"date"};
  header.insert(header.end(), order.begin(), order.end());
  Csv t(header);
  for (MonthStamp d = start; d <= end; d = d.next()) {
    std::vector<std::string> row{d.to_string()};
    for (const auto& n : order) {
      const Series& s = all.at(n);
      const int i = s.start().months_until(d);
      row.push_back(i >= 0 && i < static_cast<int>(s.size()) ? num(s[static_cast<std::size_t>(i)]) : "");
    }
    t.add(row);
  }
  return t.text();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

bool ReportBundle::ok() const { return failed_stages().empty(); }

std::vector<std::string> ReportBundle::failed_stages() const {
  std::vector<std::string> out;
  for (const auto& s : stages)
    if (!s.ok) out.push_back(s.stage);
  return out;
}

std::filesystem::path resolve_output_dir(const PipelineConfig& config) {
  if (const char* root = std::getenv("ARDLKIT_OUTPUT_ROOT"); root && *root)
    return std::filesystem::path(root) / config.output_dir;
  return config.output_dir;
}

ReportBundle build_bundle(const PipelineConfig& cfg) {
  ReportBundle bundle;
  bundle.dir = resolve_output_dir(cfg);
  StageContext ctx{cfg, {}, {}, json::object(), {}, {}};
  json data_info = json::object();

  std::map<std::string, Series> all;
  std::vector<std::string> order;
  StageOutcome load{"data", true, false, {}};
  try {
    if (cfg.data_path.empty()) fail(ErrorCode::ConfigError, "data.path is required");
    if (!std::filesystem::exists(cfg.data_path))
      fail(ErrorCode::ConfigError, "data file " + cfg.data_path.string() + " not found" +
                                       (cfg.data_url.empty() ? "" : "; run `ardlkit fetch " + cfg.data_url + " <out>`"));
    const std::string raw = read_file(cfg.data_path);
    const Frame f = cfg.columns.empty() ? load_csv(cfg.data_path, cfg.date_column)
                                        : load_csv(cfg.data_path, cfg.date_column, cfg.columns);
    data_info = {{"path", cfg.data_path.filename().string()},
                 {"sha256", sha256_hex(raw)},
                 {"rows", f.rows()},
                 {"start", f.start().to_string()},
                 {"end", f.column(0).end().to_string()}};
    for (const auto& s : f.columns()) {
      all.emplace(s.name(), s);
      order.push_back(s.name());
    }
    for (const auto& t : cfg.transforms) {
      auto it = all.find(t.source);
      if (it == all.end()) fail(ErrorCode::ConfigError, "transform source '" + t.source + "' is not a column");
      const Transform kind = t.kind == "log" ? Transform::Log : t.kind == "diff" ? Transform::Diff : Transform::LogDiff;
      Series s = transform(it->second, kind);
      if (!t.name.empty()) s = s.renamed(t.name);
      if (all.count(s.name())) fail(ErrorCode::ConfigError, "transform output '" + s.name() + "' already exists");
      order.push_back(s.name());
      all.emplace(s.name(), std::move(s));
    }
  } catch (const std::exception& e) {
    load.ok = false;
    load.error = e.what();
  }
  bundle.stages.push_back(load);

  auto selected = [&](const std::string& s) {
    return std::find(cfg.stages.begin(), cfg.stages.end(), s) != cfg.stages.end();
  };
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    StageOutcome o{name, true, false, {}};
    if (!load.ok) {
      o.ok = false;
      o.skipped = true;
      o.error = "data failed to load";
      return o;
    }
    try {
      body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
    }
    return o;
  };

  // Stages without data dependencies on each other.
  std::vector<std::pair<std::string, std::function<void()>>> independent = {
      {"describe", [&] { stage_describe(ctx, all); }},
      {"unit_root",
       [&] {
         stage_unit_root(ctx, all);
         ctx.put("fig1_series.csv", series_csv(all, order));
       }},
      {"var_select", [&] { stage_var_select(ctx, all); }},
      {"cointegration", [&] { stage_cointegration(ctx, all); }},
      {"ardl", [&] { stage_ardl(ctx, all); }},
  };
  std::vector<std::future<StageOutcome>> futures;
  std::vector<StageOutcome> done;
  for (auto& [name, body] : independent) {
    if (!selected(name)) continue;
    if (cfg.threads > 1)
      futures.push_back(std::async(std::launch::async, guarded, name, body));
    else
      done.push_back(guarded(name, body));
  }
  for (auto& f : futures) done.push_back(f.get());
  bundle.stages.insert(bundle.stages.end(), done.begin(), done.end());

  if (selected("toda_yamamoto") || selected("structural")) {
    std::optional<TYResult> ty;
    StageOutcome o = guarded("toda_yamamoto", [&] {
      ty = run_ty(ctx, all);
      if (selected("toda_yamamoto")) stage_toda_yamamoto(ctx, *ty);
    });
    if (selected("toda_yamamoto")) bundle.stages.push_back(o);
    if (selected("structural")) {
      if (ty) {
        bundle.stages.push_back(guarded("structural", [&] { stage_structural(ctx, *ty); }));
      } else {
        bundle.stages.push_back({"structural", false, true, "dependency toda_yamamoto failed: " + o.error});
      }
    }
  }

  bundle.artifacts = ctx.artifacts;
  json artifacts = json::object();
  for (const auto& [name, text] : bundle.artifacts)
    artifacts[name] = {{"sha256", sha256_hex(text)}, {"bytes", text.size()}};
  json stages = json::object();
  for (const auto& s : bundle.stages)
    stages[s.stage] = s.ok ? json("ok") : json({{"error", s.error}, {"skipped", s.skipped}});
  bundle.manifest = {{"library_version", ARDLKIT_VERSION},
                     {"config", cfg.to_json()},
                     {"resolved", ctx.resolved},
                     {"data", data_info},
                     {"artifacts", artifacts},
                     {"stages", stages},
                     {"warnings", ctx.warnings}};
  return bundle;
}

void write_bundle(const ReportBundle& bundle) {
  std::filesystem::create_directories(bundle.dir);
  for (const auto& [name, text] : bundle.artifacts) {
    std::ofstream out(bundle.dir / name, std::ios::binary);
    out << text;
  }
  std::ofstream out(bundle.dir / "manifest.json", std::ios::binary);
  out << bundle.manifest.dump(2) << "\n";
}

ReportBundle run_pipeline(const PipelineConfig& config) {
  ReportBundle b = build_bundle(config);
  write_bundle(b);
  return b;
}

}  // namespace ardlkit
