#include <fstream>
#include <set>
#include <sstream>

#include "ardlkit/error.hpp"
#include "ardlkit/pipeline.hpp"

namespace ardlkit {

using nlohmann::json;

namespace {

/// Reads keys off one JSON object and rejects whatever is left unread.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(ErrorCode::ConfigError, where_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(ErrorCode::ConfigError, where_ + "." + key + ": " + e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    std::string unknown;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) unknown += (unknown.empty() ? "" : ", ") + it.key();
    if (!unknown.empty()) fail(ErrorCode::ConfigError, "unknown key(s) in " + where_ + ": " + unknown);
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void one_of(const std::string& value, const std::vector<std::string>& allowed, const std::string& what) {
  for (const auto& a : allowed)
    if (a == value) return;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  fail(ErrorCode::ConfigError, what + " must be one of {" + list + "}, got '" + value + "'");
}

std::optional<int> auto_or_int(const json* j, const std::string& what) {
  if (!j || (j->is_string() && j->get<std::string>() == "auto")) return std::nullopt;
  if (!j->is_number_integer()) fail(ErrorCode::ConfigError, what + " must be an integer or \"auto\"");
  return j->get<int>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  Reader top(j, "config");
  top.get("schema_version", c.schema_version);
  if (c.schema_version != 1)
    fail(ErrorCode::ConfigError, "unsupported schema_version " + std::to_string(c.schema_version));

  if (const json* d = top.child("data")) {
    Reader r(*d, "data");
    std::string path;
    r.get("path", path);
    r.get("url", c.data_url);
    r.get("date_column", c.date_column);
    r.get("columns", c.columns);
    r.finish();
    if (!path.empty()) c.data_path = std::filesystem::absolute(base_dir / path).lexically_normal();
  }
  if (const json* t = top.child("transforms")) {
    if (!t->is_array()) fail(ErrorCode::ConfigError, "transforms must be an array");
    for (const auto& e : *t) {
      Reader r(e, "transforms[]");
      TransformSpec s;
      r.get("source", s.source);
      r.get("kind", s.kind);
      r.get("name", s.name);
      r.finish();
      one_of(s.kind, {"log", "diff", "logdiff"}, "transform kind");
      c.transforms.push_back(s);
    }
  }
  top.get("output_dir", c.output_dir);
  top.get("seed", c.seed);
  top.get("threads", c.threads);
  top.get("stages", c.stages);
  for (const auto& s : c.stages) one_of(s, kStages, "stage");

  if (const json* d = top.child("describe")) {
    Reader r(*d, "describe");
    r.get("series", c.describe_series);
    r.get("lags", c.describe_lags);
    r.finish();
  }
  if (const json* d = top.child("unit_root")) {
    Reader r(*d, "unit_root");
    if (const json* p = r.child("panels")) {
      if (!p->is_array()) fail(ErrorCode::ConfigError, "unit_root.panels must be an array");
      for (const auto& e : *p) {
        Reader pr(e, "unit_root.panels[]");
        UnitRootPanel panel;
        pr.get("name", panel.name);
        pr.get("series", panel.series);
        pr.get("deterministic", panel.deterministic);
        pr.finish();
        one_of(panel.deterministic, {"c", "ct"}, "unit_root panel deterministic");
        c.unit_root_panels.push_back(panel);
      }
    }
    r.get("tests", c.unit_root_tests);
    r.get("criterion", c.unit_root_criterion);
    r.get("max_lag", c.unit_root_max_lag);
    r.finish();
    for (const auto& t : c.unit_root_tests)
      one_of(t, {"adf", "dfgls", "pp", "kpss", "ers", "perron_io", "perron_ao", "za", "ls_crash", "ls_break"},
             "unit_root test");
    one_of(c.unit_root_criterion, {"sic", "aic"}, "unit_root.criterion");
  }
  top.get("level", c.level);
  if (const json* d = top.child("var_select")) {
    Reader r(*d, "var_select");
    r.get("variables", c.var_variables);
    r.get("max_lag", c.var_max_lag);
    r.get("deterministic", c.var_deterministic);
    r.finish();
    one_of(c.var_deterministic, {"none", "const", "const_trend"}, "var_select.deterministic");
  }
  if (const json* d = top.child("cointegration")) {
    Reader r(*d, "cointegration");
    r.get("variables", c.coint_variables);
    r.get("residual_deterministic", c.residual_deterministic);
    r.get("johansen_case", c.johansen_case);
    r.get("johansen_var_lags", c.johansen_var_lags);
    r.get("gh_models", c.gh_models);
    r.get("gh_trimming", c.gh_trimming);
    r.finish();
    one_of(c.residual_deterministic, {"none", "c", "ct"}, "cointegration.residual_deterministic");
    if (c.johansen_case < 1 || c.johansen_case > 5) fail(ErrorCode::ConfigError, "johansen_case must be 1..5");
    for (const auto& m : c.gh_models) one_of(m, {"level", "level_trend", "regime", "regime_trend"}, "gh model");
  }
  if (const json* d = top.child("ardl")) {
    Reader r(*d, "ardl");
    if (const json* m = r.child("models")) {
      if (!m->is_array()) fail(ErrorCode::ConfigError, "ardl.models must be an array");
      for (const auto& e : *m) {
        Reader mr(e, "ardl.models[]");
        ArdlModelSpec s;
        mr.get("dependent", s.dependent);
        mr.get("regressors", s.regressors);
        mr.finish();
        c.ardl_models.push_back(s);
      }
    }
    r.get("max_p", c.ardl_max_p);
    r.get("max_q", c.ardl_max_q);
    r.get("criterion", c.ardl_criterion);
    r.get("case", c.ardl_case);
    r.get("covariance", c.ardl_covariance);
    r.get("bounds_source", c.bounds_source);
    r.get("serial_lags", c.ardl_serial_lags);
    r.get("arch_lags", c.ardl_arch_lags);
    r.get("cusum_level", c.cusum_level);
    r.finish();
    one_of(c.ardl_criterion, {"aic", "sc", "hq"}, "ardl.criterion");
    one_of(c.ardl_case, {"no_const", "restricted_const", "unrestricted_const", "restricted_trend", "unrestricted_trend"},
           "ardl.case");
    one_of(c.ardl_covariance, {"ordinary", "hac"}, "ardl.covariance");
    one_of(c.bounds_source, {"pesaran_asymptotic", "narayan_small_sample"}, "ardl.bounds_source");
  }
  if (const json* d = top.child("toda_yamamoto")) {
    Reader r(*d, "toda_yamamoto");
    r.get("variables", c.ty_variables);
    c.ty_k = auto_or_int(r.child("k"), "toda_yamamoto.k");
    c.ty_d_max = auto_or_int(r.child("d_max"), "toda_yamamoto.d_max");
    r.get("deterministic", c.ty_deterministic);
    r.get("portmanteau_lags", c.portmanteau_lags);
    r.get("serial_lags", c.ty_serial_lags);
    r.finish();
    one_of(c.ty_deterministic, {"none", "const", "const_trend"}, "toda_yamamoto.deterministic");
  }
  if (const json* d = top.child("structural")) {
    Reader r(*d, "structural");
    r.get("horizon", c.horizon);
    r.get("ordering", c.ordering);
    r.get("bands", c.bands);
    r.get("replications", c.band_replications);
    r.finish();
    one_of(c.bands, {"analytic", "monte_carlo", "none"}, "structural.bands");
  }
  top.finish();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  // A manifest carries the full config under "config".
  if (j.is_object() && j.contains("config") && j.contains("artifacts")) j = j.at("config");
  return from_json(j, path.parent_path());
}

json PipelineConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["data"] = {{"path", data_path.string()}, {"url", data_url}, {"date_column", date_column}, {"columns", columns}};
  j["transforms"] = json::array();
  for (const auto& t : transforms) j["transforms"].push_back({{"source", t.source}, {"kind", t.kind}, {"name", t.name}});
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  j["threads"] = threads;
  j["stages"] = stages;
  j["level"] = level;
  j["describe"] = {{"series", describe_series}, {"lags", describe_lags}};
  json panels = json::array();
  for (const auto& p : unit_root_panels)
    panels.push_back({{"name", p.name}, {"series", p.series}, {"deterministic", p.deterministic}});
  j["unit_root"] = {{"panels", panels},
                    {"tests", unit_root_tests},
                    {"criterion", unit_root_criterion},
                    {"max_lag", unit_root_max_lag}};
  j["var_select"] = {{"variables", var_variables}, {"max_lag", var_max_lag}, {"deterministic", var_deterministic}};
  j["cointegration"] = {{"variables", coint_variables},     {"residual_deterministic", residual_deterministic},
                        {"johansen_case", johansen_case},   {"johansen_var_lags", johansen_var_lags},
                        {"gh_models", gh_models},           {"gh_trimming", gh_trimming}};
  json models = json::array();
  for (const auto& m : ardl_models) models.push_back({{"dependent", m.dependent}, {"regressors", m.regressors}});
  j["ardl"] = {{"models", models},
               {"max_p", ardl_max_p},
               {"max_q", ardl_max_q},
               {"criterion", ardl_criterion},
               {"case", ardl_case},
               {"covariance", ardl_covariance},
               {"bounds_source", bounds_source},
               {"serial_lags", ardl_serial_lags},
               {"arch_lags", ardl_arch_lags},
               {"cusum_level", cusum_level}};
  j["toda_yamamoto"] = {{"variables", ty_variables},
                        {"k", ty_k ? json(*ty_k) : json("auto")},
                        {"d_max", ty_d_max ? json(*ty_d_max) : json("auto")},
                        {"deterministic", ty_deterministic},
                        {"portmanteau_lags", portmanteau_lags},
                        {"serial_lags", ty_serial_lags}};
  j["structural"] = {{"horizon", horizon}, {"ordering", ordering}, {"bands", bands}, {"replications", band_replications}};
  return j;
}

}  // namespace ardlkit
