#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ardlkit {

/// Side of the null distribution on which the test rejects.
enum class Tail { Lower, Upper };

struct NullDistribution {
  enum class Kind { ChiSquare, F, StudentT, Table };
  Kind kind = Kind::Table;
  double df1 = 0.0;
  double df2 = 0.0;
  std::string table;  // criticalvalues family/variant for Kind::Table

  static NullDistribution chi2(double df) { return {Kind::ChiSquare, df, 0.0, {}}; }
  static NullDistribution f(double df1, double df2) { return {Kind::F, df1, df2, {}}; }
  static NullDistribution t(double df) { return {Kind::StudentT, df, 0.0, {}}; }
  static NullDistribution tabulated(std::string id) { return {Kind::Table, 0.0, 0.0, std::move(id)}; }

  std::string describe() const;
};

struct TestResult {
  std::string name;
  double statistic = 0.0;
  NullDistribution distribution;
  std::optional<double> p_value;
  std::map<double, double> critical_values;  // significance level -> value
  Tail tail = Tail::Upper;

  /// Decision at `level`. Uses the p-value when present, otherwise the
  /// critical value at that level; nullopt when neither is available.
  std::optional<bool> rejects(double level) const;
  /// Levels among {0.01, 0.05, 0.10} at which the null is rejected.
  std::vector<double> reject_at() const;
};

/// Auxiliary-regression tests report both the F and the n*R^2 form.
struct LmTest {
  TestResult f;
  TestResult lm;
};

}  // namespace ardlkit
