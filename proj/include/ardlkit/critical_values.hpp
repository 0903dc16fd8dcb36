#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ardlkit/test_result.hpp"

namespace ardlkit {

/// Identifies one null distribution. `variant` is the deterministic case or
/// model label used by the family (e.g. "c", "ct", "regime_trend", "3");
/// `k` is the number of variables; `n` is the sample size, nullopt for the
/// asymptotic table.
struct CvKey {
  std::string family;
  std::string variant;
  int k = 1;
  std::optional<double> n;

  std::string id() const;
};

struct BoundPair {
  double i0 = 0.0;
  double i1 = 0.0;
};

/// Read-only store of every embedded table. Text format, one record per line:
///   version 1
///   source <family> <free text>
///   tail <family> lower|upper
///   cv <family> <variant> <k> <n|inf> <level> <value>
///   surface <family> <variant> <k> <level> <b0> <b1> <b2> <b3>
///   pvpoly <family> <variant> <k> linear|logabs <lo> <hi> <c0> <c1> ...
///   quantile <family> <variant> <k> <n|inf> <prob> <value>
///   bound <family> <variant> <k> <n|inf> <level> <i0> <i1>
/// Blank lines and lines starting with '#' are ignored.
class CriticalValueTables {
 public:
  static CriticalValueTables parse(std::string_view text);
  static CriticalValueTables load(const std::filesystem::path& path);
  /// Canonical text; parse(serialize()) reproduces every value bit for bit.
  std::string serialize() const;

  void merge(const CriticalValueTables& other);

  bool has(const std::string& family, const std::string& variant, int k) const;
  Tail tail(const std::string& family) const;
  std::vector<std::string> provenance(const std::string& family) const;
  std::vector<std::string> families() const;

  /// Critical value at significance `level`; interpolates linearly in 1/n
  /// between tabulated sample sizes.
  double critical_value(const CvKey& key, double level) const;
  /// Values at the conventional 1/5/10% levels that can be resolved.
  std::map<double, double> critical_values(const CvKey& key) const;
  double p_value(const CvKey& key, double statistic) const;
  bool supports_p_value(const CvKey& key) const;

  BoundPair bound(const CvKey& key, double level) const;
  /// Tabulated sample sizes for a bounds key (inf excluded).
  std::vector<double> bound_sample_sizes(const std::string& family, const std::string& variant, int k) const;

  struct Cv {
    double n;  // +inf for asymptotic
    double level;
    double value;
  };
  struct Surface {
    double level;
    std::vector<double> b;
  };
  struct PvPoly {
    bool logabs;
    double lo, hi;
    std::vector<double> c;
  };
  struct Quantile {
    double n;
    double prob;
    double value;
  };
  struct Bound {
    double n;
    double level;
    double i0, i1;
  };
  struct Entry {
    std::vector<Cv> cv;
    std::vector<Surface> surface;
    std::vector<PvPoly> pvpoly;
    std::vector<Quantile> quantile;
    std::vector<Bound> bound;
  };

 private:
  const Entry* find(const std::string& family, const std::string& variant, int k) const;
  const Entry& require(const CvKey& key) const;
  double direct_cv(const Entry& e, const CvKey& key, double level) const;
  double fractional_cv(const CvKey& key, double level) const;

  std::map<std::string, std::vector<std::string>> sources_;
  std::map<std::string, Tail> tails_;
  std::map<std::tuple<std::string, std::string, int>, Entry> entries_;
};

/// Tables shipped with the library: $ARDLKIT_TABLES if set, otherwise the
/// data directory recorded at build time. Loaded once.
const CriticalValueTables& default_tables();
std::filesystem::path default_tables_path();

/// Counter-based generator: draw i of stream s under seed is a pure function
/// of (seed, s, i), so replications can be split across threads freely.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double uniform();  // (0, 1)
  double normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SimulationSpec {
  std::string family;   // df, kpss, johansen, bounds, cusumq
  std::string variant;  // deterministic case
  int k = 1;
  int n = 100;
  std::size_t replications = 100000;
  std::uint64_t seed = 42;
  std::vector<double> probs;  // empty -> {0.01, 0.05, 0.10} lower tail, mirrored for upper tails
  unsigned threads = 0;       // 0 -> hardware concurrency
};

struct SimulatedTable {
  SimulationSpec spec;
  /// Per statistic name (e.g. "trace", "max", "f", "t"): prob -> quantile.
  std::map<std::string, std::map<double, double>> quantiles;
  /// Records in the table file format.
  std::string records() const;
};

SimulatedTable simulate_table(const SimulationSpec& spec);

}  // namespace ardlkit
