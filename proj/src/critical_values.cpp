#include "ardlkit/critical_values.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

#include "ardlkit/distributions.hpp"
#include "ardlkit/error.hpp"
#include "ardlkit/format.hpp"

namespace ardlkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double num(std::string_view s, std::size_t line_no) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(ErrorCode::ParseError, "table line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  return v;
}

int integer(std::string_view s, std::size_t line_no) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(ErrorCode::ParseError, "table line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
  return v;
}

std::string n_text(double n) {
  if (std::isinf(n)) return n > 0 ? "inf" : "-inf";
  return format_shortest(n);
}

bool same(double a, double b) { return std::fabs(a - b) < 1e-12 * std::max(1.0, std::fabs(a)); }

double inv_n(double n) { return std::isinf(n) ? 0.0 : 1.0 / n; }

/// Linear interpolation in 1/n over (n, value) points; clamps outside range.
double interp_inv_n(std::vector<std::pair<double, double>> pts, std::optional<double> n) {
  if (pts.empty()) fail(ErrorCode::MissingCriticalValues, "no tabulated sample sizes");
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return inv_n(a.first) < inv_n(b.first); });
  if (pts.size() == 1) return pts.front().second;
  if (!n) {
    // asymptotic request: the largest tabulated sample
    return pts.front().second;
  }
  const double x = inv_n(*n);
  if (x <= inv_n(pts.front().first)) return pts.front().second;
  if (x >= inv_n(pts.back().first)) return pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double x0 = inv_n(pts[i - 1].first);
    const double x1 = inv_n(pts[i].first);
    if (x <= x1) {
      const double w = (x - x0) / (x1 - x0);
      return pts[i - 1].second + w * (pts[i].second - pts[i - 1].second);
    }
  }
  return pts.back().second;
}

double polyval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

/// Splits "name:a:b" into name and the two fractions.
bool fractional_variant(const std::string& v, std::string& name, double& a, double& b) {
  auto p1 = v.find(':');
  if (p1 == std::string::npos) return false;
  auto p2 = v.find(':', p1 + 1);
  if (p2 == std::string::npos) return false;
  name = v.substr(0, p1);
  try {
    a = std::stod(v.substr(p1 + 1, p2 - p1 - 1));
    b = std::stod(v.substr(p2 + 1));
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

std::string CvKey::id() const {
  return family + "/" + variant + "/k=" + std::to_string(k) + "/n=" + (n ? format_shortest(*n) : std::string("inf"));
}

CriticalValueTables CriticalValueTables::parse(std::string_view text) {
  CriticalValueTables t;
  std::size_t line_no = 0;
  bool versioned = false;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    auto tok = tokens(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    const auto kind = tok[0];
    auto need = [&](std::size_t count) {
      if (tok.size() < count)
        fail(ErrorCode::ParseError, "table line " + std::to_string(line_no) + ": too few fields");
    };
    if (kind == "version") {
      need(2);
      if (integer(tok[1], line_no) != 1) fail(ErrorCode::ParseError, "unsupported table version");
      versioned = true;
    } else if (kind == "source") {
      need(3);
      auto pos = line.find(tok[2]);
      std::string_view rest = line.substr(pos);
      while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.remove_suffix(1);
      t.sources_[std::string(tok[1])].emplace_back(rest);
    } else if (kind == "tail") {
      need(3);
      if (tok[2] != "lower" && tok[2] != "upper")
        fail(ErrorCode::ParseError, "table line " + std::to_string(line_no) + ": tail must be lower or upper");
      t.tails_[std::string(tok[1])] = tok[2] == "lower" ? Tail::Lower : Tail::Upper;
    } else if (kind == "cv" || kind == "quantile" || kind == "bound" || kind == "surface" || kind == "pvpoly") {
      need(5);
      auto& e = t.entries_[{std::string(tok[1]), std::string(tok[2]), integer(tok[3], line_no)}];
      if (kind == "cv") {
        need(7);
        e.cv.push_back({num(tok[4], line_no), num(tok[5], line_no), num(tok[6], line_no)});
      } else if (kind == "quantile") {
        need(7);
        e.quantile.push_back({num(tok[4], line_no), num(tok[5], line_no), num(tok[6], line_no)});
      } else if (kind == "bound") {
        need(8);
        e.bound.push_back({num(tok[4], line_no), num(tok[5], line_no), num(tok[6], line_no), num(tok[7], line_no)});
      } else if (kind == "surface") {
        need(6);
        Surface s{num(tok[4], line_no), {}};
        for (std::size_t i = 5; i < tok.size(); ++i) s.b.push_back(num(tok[i], line_no));
        e.surface.push_back(std::move(s));
      } else {
        need(8);
        if (tok[4] != "linear" && tok[4] != "logabs")
          fail(ErrorCode::ParseError, "table line " + std::to_string(line_no) + ": unknown transform");
        PvPoly p{tok[4] == "logabs", num(tok[5], line_no), num(tok[6], line_no), {}};
        for (std::size_t i = 7; i < tok.size(); ++i) p.c.push_back(num(tok[i], line_no));
        e.pvpoly.push_back(std::move(p));
      }
    } else {
      fail(ErrorCode::ParseError, "table line " + std::to_string(line_no) + ": unknown record '" +
                                      std::string(kind) + "'");
    }
  }
  if (!versioned) fail(ErrorCode::ParseError, "table file lacks a version record");
  return t;
}

CriticalValueTables CriticalValueTables::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::MissingCriticalValues, "cannot open table file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string CriticalValueTables::serialize() const {
  std::string out = "version 1\n";
  std::set<std::string> fams;
  for (auto& [f, _] : sources_) fams.insert(f);
  for (auto& [f, _] : tails_) fams.insert(f);
  for (auto& [key, _] : entries_) fams.insert(std::get<0>(key));
  for (const auto& fam : fams) {
    if (auto it = sources_.find(fam); it != sources_.end())
      for (const auto& s : it->second) out += "source " + fam + " " + s + "\n";
    if (auto it = tails_.find(fam); it != tails_.end())
      out += "tail " + fam + (it->second == Tail::Lower ? " lower\n" : " upper\n");
    for (const auto& [key, e] : entries_) {
      if (std::get<0>(key) != fam) continue;
      const std::string head = fam + " " + std::get<1>(key) + " " + std::to_string(std::get<2>(key)) + " ";
      for (const auto& p : e.pvpoly) {
        out += "pvpoly " + head + (p.logabs ? "logabs " : "linear ") + n_text(p.lo) + " " + n_text(p.hi);
        for (double c : p.c) out += " " + format_shortest(c);
        out += "\n";
      }
      for (const auto& s : e.surface) {
        out += "surface " + head + format_shortest(s.level);
        for (double b : s.b) out += " " + format_shortest(b);
        out += "\n";
      }
      for (const auto& c : e.cv)
        out += "cv " + head + n_text(c.n) + " " + format_shortest(c.level) + " " + format_shortest(c.value) + "\n";
      for (const auto& q : e.quantile)
        out += "quantile " + head + n_text(q.n) + " " + format_shortest(q.prob) + " " + format_shortest(q.value) + "\n";
      for (const auto& b : e.bound)
        out += "bound " + head + n_text(b.n) + " " + format_shortest(b.level) + " " + format_shortest(b.i0) + " " +
               format_shortest(b.i1) + "\n";
    }
  }
  return out;
}

void CriticalValueTables::merge(const CriticalValueTables& other) {
  for (const auto& [f, s] : other.sources_) {
    auto& dst = sources_[f];
    for (const auto& line : s)
      if (std::find(dst.begin(), dst.end(), line) == dst.end()) dst.push_back(line);
  }
  for (const auto& [f, t] : other.tails_) tails_[f] = t;
  for (const auto& [key, e] : other.entries_) {
    auto& d = entries_[key];
    d.cv.insert(d.cv.end(), e.cv.begin(), e.cv.end());
    d.surface.insert(d.surface.end(), e.surface.begin(), e.surface.end());
    d.pvpoly.insert(d.pvpoly.end(), e.pvpoly.begin(), e.pvpoly.end());
    d.quantile.insert(d.quantile.end(), e.quantile.begin(), e.quantile.end());
    d.bound.insert(d.bound.end(), e.bound.begin(), e.bound.end());
  }
}

const CriticalValueTables::Entry* CriticalValueTables::find(const std::string& family, const std::string& variant,
                                                            int k) const {
  auto it = entries_.find({family, variant, k});
  return it == entries_.end() ? nullptr : &it->second;
}

const CriticalValueTables::Entry& CriticalValueTables::require(const CvKey& key) const {
  const Entry* e = find(key.family, key.variant, key.k);
  if (!e) fail(ErrorCode::MissingCriticalValues, key.id());
  return *e;
}

bool CriticalValueTables::has(const std::string& family, const std::string& variant, int k) const {
  return find(family, variant, k) != nullptr;
}

Tail CriticalValueTables::tail(const std::string& family) const {
  auto it = tails_.find(family);
  if (it == tails_.end()) fail(ErrorCode::MissingCriticalValues, "no tail record for family " + family);
  return it->second;
}

std::vector<std::string> CriticalValueTables::provenance(const std::string& family) const {
  auto it = sources_.find(family);
  return it == sources_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> CriticalValueTables::families() const {
  std::set<std::string> fams;
  for (auto& [key, _] : entries_) fams.insert(std::get<0>(key));
  return {fams.begin(), fams.end()};
}

double CriticalValueTables::direct_cv(const Entry& e, const CvKey& key, double level) const {
  std::vector<std::pair<double, double>> pts;
  for (const auto& c : e.cv)
    if (same(c.level, level)) pts.emplace_back(c.n, c.value);
  if (!pts.empty()) return interp_inv_n(pts, key.n);

  for (const auto& s : e.surface) {
    if (!same(s.level, level)) continue;
    const double x = key.n ? 1.0 / *key.n : 0.0;
    return polyval(s.b, x);
  }

  const Tail side = tail(key.family);
  const double prob = side == Tail::Lower ? level : 1.0 - level;
  if (!e.quantile.empty()) {
    std::map<double, std::vector<std::pair<double, double>>> by_n;  // n -> (prob, value)
    for (const auto& q : e.quantile) by_n[q.n].emplace_back(q.prob, q.value);
    std::vector<std::pair<double, double>> per_n;
    for (auto& [n, grid] : by_n) {
      std::sort(grid.begin(), grid.end());
      if (prob < grid.front().first || prob > grid.back().first) continue;
      for (std::size_t i = 1; i < grid.size(); ++i) {
        if (prob <= grid[i].first) {
          const double w = (prob - grid[i - 1].first) / (grid[i].first - grid[i - 1].first);
          per_n.emplace_back(n, grid[i - 1].second + w * (grid[i].second - grid[i - 1].second));
          break;
        }
      }
    }
    if (!per_n.empty()) return interp_inv_n(per_n, key.n);
  }

  if (!e.pvpoly.empty()) {
    // invert the p-value function by bisection on its support
    double lo = kInf;
    double hi = -kInf;
    for (const auto& p : e.pvpoly) {
      lo = std::min(lo, std::isinf(p.lo) ? -1000.0 : p.lo);
      hi = std::max(hi, std::isinf(p.hi) ? 1000.0 : p.hi);
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double p = p_value(key, mid);
      if ((side == Tail::Lower) == (p < level)) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  fail(ErrorCode::MissingCriticalValues, key.id() + " at level " + format_shortest(level));
}

double CriticalValueTables::fractional_cv(const CvKey& key, double level) const {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  if (!fractional_variant(key.variant, name, a, b)) fail(ErrorCode::MissingCriticalValues, key.id());
  double wsum = 0.0;
  double acc = 0.0;
  for (const auto& [k, e] : entries_) {
    if (std::get<0>(k) != key.family || std::get<2>(k) != key.k) continue;
    std::string n2;
    double a2 = 0.0;
    double b2 = 0.0;
    if (!fractional_variant(std::get<1>(k), n2, a2, b2) || n2 != name) continue;
    const double d2 = (a - a2) * (a - a2) + (b - b2) * (b - b2);
    const double v = direct_cv(e, key, level);
    if (d2 < 1e-12) return v;
    wsum += 1.0 / d2;
    acc += v / d2;
  }
  if (wsum == 0.0) fail(ErrorCode::MissingCriticalValues, key.id());
  return acc / wsum;
}

double CriticalValueTables::critical_value(const CvKey& key, double level) const {
  if (const Entry* e = find(key.family, key.variant, key.k)) return direct_cv(*e, key, level);
  return fractional_cv(key, level);
}

std::map<double, double> CriticalValueTables::critical_values(const CvKey& key) const {
  std::map<double, double> out;
  for (double level : {0.01, 0.05, 0.10}) {
    try {
      out[level] = critical_value(key, level);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingCriticalValues) throw;
    }
  }
  if (out.empty()) fail(ErrorCode::MissingCriticalValues, key.id());
  return out;
}

bool CriticalValueTables::supports_p_value(const CvKey& key) const {
  const Entry* e = find(key.family, key.variant, key.k);
  return e && (!e->pvpoly.empty() || !e->quantile.empty());
}

double CriticalValueTables::p_value(const CvKey& key, double statistic) const {
  const Entry* e = find(key.family, key.variant, key.k);
  if (!e) fail(ErrorCode::MissingCriticalValues, key.id());
  if (!e->bound.empty() && e->pvpoly.empty() && e->quantile.empty())
    fail(ErrorCode::UnsupportedPValue, key.family + " tables carry bands only");
  if (std::isnan(statistic)) fail(ErrorCode::DomainError, "p-value of NaN statistic");
  const Tail side = tail(key.family);

  if (!e->pvpoly.empty()) {
    double lowest = kInf;
    double highest = -kInf;
    for (const auto& p : e->pvpoly) {
      lowest = std::min(lowest, p.lo);
      highest = std::max(highest, p.hi);
      if (statistic >= p.lo && statistic <= p.hi) {
        const double x = p.logabs ? std::log(std::fabs(statistic)) : statistic;
        const double cdf = normal_cdf(polyval(p.c, x));
        return side == Tail::Lower ? cdf : 1.0 - cdf;
      }
    }
    const double cdf = statistic < lowest ? 0.0 : 1.0;
    return side == Tail::Lower ? cdf : 1.0 - cdf;
  }

  if (!e->quantile.empty()) {
    std::map<double, std::vector<std::pair<double, double>>> by_n;  // n -> (value, z)
    for (const auto& q : e->quantile)
      if (q.prob > 0.0 && q.prob < 1.0) by_n[q.n].emplace_back(q.value, normal_quantile(q.prob));
    std::vector<std::pair<double, double>> per_n;  // n -> z at statistic
    for (auto& [n, grid] : by_n) {
      std::sort(grid.begin(), grid.end());
      if (grid.size() < 2) continue;
      std::size_t i = 1;
      while (i + 1 < grid.size() && statistic > grid[i].first) ++i;
      const auto& [x0, z0] = grid[i - 1];
      const auto& [x1, z1] = grid[i];
      per_n.emplace_back(n, z0 + (statistic - x0) * (z1 - z0) / (x1 - x0));
    }
    if (per_n.empty()) fail(ErrorCode::MissingCriticalValues, key.id());
    const double cdf = normal_cdf(interp_inv_n(per_n, key.n));
    return side == Tail::Lower ? cdf : 1.0 - cdf;
  }
  fail(ErrorCode::UnsupportedPValue, key.id() + " has critical values only");
}

BoundPair CriticalValueTables::bound(const CvKey& key, double level) const {
  const Entry& e = require(key);
  std::vector<std::pair<double, double>> lo;
  std::vector<std::pair<double, double>> hi;
  for (const auto& b : e.bound) {
    if (!same(b.level, level)) continue;
    if (!key.n && !std::isinf(b.n)) continue;
    lo.emplace_back(b.n, b.i0);
    hi.emplace_back(b.n, b.i1);
  }
  if (lo.empty()) fail(ErrorCode::MissingCriticalValues, key.id() + " at level " + format_shortest(level));
  return {interp_inv_n(lo, key.n), interp_inv_n(hi, key.n)};
}

std::vector<double> CriticalValueTables::bound_sample_sizes(const std::string& family, const std::string& variant,
                                                            int k) const {
  std::set<double> ns;
  if (const Entry* e = find(family, variant, k))
    for (const auto& b : e->bound)
      if (!std::isinf(b.n)) ns.insert(b.n);
  return {ns.begin(), ns.end()};
}

std::filesystem::path default_tables_path() {
  if (const char* env = std::getenv("ARDLKIT_TABLES"); env && *env) return env;
#ifdef ARDLKIT_DATA_DIR
  return std::filesystem::path(ARDLKIT_DATA_DIR) / "critical_values.txt";
#else
  return "critical_values.txt";
#endif
}

const CriticalValueTables& default_tables() {
  static const CriticalValueTables tables = CriticalValueTables::load(default_tables_path());
  return tables;
}

namespace {
std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix(s);
  std::uint64_t t = stream ^ 0xD1B54A32D192ED03ULL;
  const std::uint64_t b = splitmix(t);
  state_ = a ^ (b * 0xD6E8FEB86659FD93ULL);
}

std::uint64_t CounterRng::next_u64() { return splitmix(state_); }

double CounterRng::uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

}  // namespace ardlkit
