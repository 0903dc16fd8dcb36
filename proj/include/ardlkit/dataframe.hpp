#pragma once

#include <compare>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ardlkit {

/// A calendar month. Ordered chronologically; arithmetic is in whole months.
struct MonthStamp {
  int year = 1970;
  int month = 1;

  MonthStamp() = default;
  MonthStamp(int y, int m);

  /// Accepts "YYYY-MM" and "YYYYMmm" (e.g. 1992M01).
  static MonthStamp parse(std::string_view text);

  MonthStamp plus(int months) const;
  MonthStamp next() const { return plus(1); }
  /// Signed number of months from this stamp to `other`.
  int months_until(const MonthStamp& other) const;

  std::string to_string() const;  // YYYY-MM

  friend auto operator<=>(const MonthStamp&, const MonthStamp&) = default;
  friend bool operator==(const MonthStamp&, const MonthStamp&) = default;
};

/// Contiguous monthly observations of one variable.
class Series {
 public:
  Series(std::string name, MonthStamp start, std::vector<double> values);

  const std::string& name() const noexcept { return name_; }
  MonthStamp start() const noexcept { return start_; }
  MonthStamp end() const noexcept { return start_.plus(static_cast<int>(values_.size()) - 1); }
  MonthStamp date(std::size_t i) const { return start_.plus(static_cast<int>(i)); }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  Eigen::VectorXd to_vector() const;

  Series renamed(std::string name) const;
  /// Observations [first, first + count).
  Series slice(std::size_t first, std::size_t count) const;

 private:
  std::string name_;
  MonthStamp start_;
  std::vector<double> values_;
};

/// Ordered set of series sharing start date and length.
class Frame {
 public:
  Frame() = default;
  explicit Frame(std::vector<Series> columns);

  std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  bool empty() const noexcept { return columns_.empty(); }
  MonthStamp start() const;
  const std::vector<Series>& columns() const noexcept { return columns_; }
  const Series& column(std::size_t i) const { return columns_.at(i); }
  const Series& column(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::vector<std::string> names() const;

  Frame with_column(Series s) const;
  Frame select(const std::vector<std::string>& names) const;
  /// Columns as a rows x cols matrix.
  Eigen::MatrixXd to_matrix() const;

 private:
  std::vector<Series> columns_;
};

Frame load_csv(const std::filesystem::path& path, std::string_view date_column,
               const std::vector<std::string>& value_columns);
/// Loads every non-date column, in file order.
Frame load_csv(const std::filesystem::path& path, std::string_view date_column = "date");
Frame parse_csv(std::string_view text, std::string_view date_column,
                const std::vector<std::string>& value_columns);

/// Writes the frame in the same text format load_csv reads. Values use the
/// shortest decimal form that parses back to the identical double.
std::string to_csv(const Frame& frame, std::string_view date_column = "date");

enum class Transform { Log, Diff, LogDiff };

Series transform(const Series& s, Transform kind);

struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  double stdev = 0.0;     // n - 1 divisor
  double skewness = 0.0;  // m3 / m2^1.5
  double kurtosis = 0.0;  // m4 / m2^2, Gaussian = 3
  double jarque_bera = 0.0;
  double jarque_bera_p = 1.0;
};

DescriptiveStats describe(std::span<const double> x);
inline DescriptiveStats describe(const Series& s) { return describe(s.values()); }

}  // namespace ardlkit
