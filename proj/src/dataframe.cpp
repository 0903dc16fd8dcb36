#include "ardlkit/dataframe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ardlkit/distributions.hpp"
#include "ardlkit/error.hpp"
#include "ardlkit/format.hpp"

namespace ardlkit {

MonthStamp::MonthStamp(int y, int m) : year(y), month(m) {
  if (m < 1 || m > 12) fail(ErrorCode::InvalidArgument, "month out of range: " + std::to_string(m));
}

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (;;) {
    auto pos = line.find(',', begin);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(begin)));
      return out;
    }
    out.push_back(trim(line.substr(begin, pos - begin)));
    begin = pos + 1;
  }
}

}  // namespace

MonthStamp MonthStamp::parse(std::string_view text) {
  text = trim(text);
  int y = 0;
  int m = 0;
  bool ok = false;
  if (text.size() == 7 && text[4] == '-') {
    ok = parse_int(text.substr(0, 4), y) && parse_int(text.substr(5, 2), m);
  } else if (text.size() >= 6 && text.size() <= 7 && (text[4] == 'M' || text[4] == 'm')) {
    ok = parse_int(text.substr(0, 4), y) && parse_int(text.substr(5), m);
  }
  if (!ok || m < 1 || m > 12) fail(ErrorCode::ParseError, "unrecognised month '" + std::string(text) + "'");
  return {y, m};
}

MonthStamp MonthStamp::plus(int months) const {
  int idx = year * 12 + (month - 1) + months;
  int y = idx >= 0 ? idx / 12 : -((-idx + 11) / 12);
  return {y, idx - y * 12 + 1};
}

int MonthStamp::months_until(const MonthStamp& other) const {
  return (other.year * 12 + other.month) - (year * 12 + month);
}

std::string MonthStamp::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

Series::Series(std::string name, MonthStamp start, std::vector<double> values)
    : name_(std::move(name)), start_(start), values_(std::move(values)) {
  if (values_.empty()) fail(ErrorCode::LengthError, "series '" + name_ + "' is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      fail(ErrorCode::DomainError, "series '" + name_ + "' has a non-finite value at index " + std::to_string(i));
  }
}

Eigen::VectorXd Series::to_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

Series Series::renamed(std::string name) const { return Series(std::move(name), start_, values_); }

Series Series::slice(std::size_t first, std::size_t count) const {
  if (first + count > values_.size() || count == 0) fail(ErrorCode::LengthError, "slice out of range");
  return Series(name_, date(first), {values_.begin() + first, values_.begin() + first + count});
}

Frame::Frame(std::vector<Series> columns) : columns_(std::move(columns)) {
  for (const auto& c : columns_) {
    if (c.start() != columns_.front().start() || c.size() != columns_.front().size())
      fail(ErrorCode::InvalidArgument, "column '" + c.name() + "' is not aligned with '" +
                                           columns_.front().name() + "'");
  }
  for (std::size_t i = 0; i < columns_.size(); ++i)
    for (std::size_t j = i + 1; j < columns_.size(); ++j)
      if (columns_[i].name() == columns_[j].name())
        fail(ErrorCode::InvalidArgument, "duplicate column '" + columns_[i].name() + "'");
}

MonthStamp Frame::start() const {
  if (columns_.empty()) fail(ErrorCode::LengthError, "empty frame");
  return columns_.front().start();
}

const Series& Frame::column(std::string_view name) const {
  for (const auto& c : columns_)
    if (c.name() == name) return c;
  fail(ErrorCode::InvalidArgument, "no column named '" + std::string(name) + "'");
}

bool Frame::contains(std::string_view name) const {
  return std::any_of(columns_.begin(), columns_.end(), [&](const Series& c) { return c.name() == name; });
}

std::vector<std::string> Frame::names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name());
  return out;
}

Frame Frame::with_column(Series s) const {
  auto cols = columns_;
  cols.push_back(std::move(s));
  return Frame(std::move(cols));
}

Frame Frame::select(const std::vector<std::string>& names) const {
  std::vector<Series> cols;
  for (const auto& n : names) cols.push_back(column(n));
  return Frame(std::move(cols));
}

Eigen::MatrixXd Frame::to_matrix() const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
  for (std::size_t j = 0; j < cols(); ++j) m.col(static_cast<Eigen::Index>(j)) = columns_[j].to_vector();
  return m;
}

Frame parse_csv(std::string_view text, std::string_view date_column, const std::vector<std::string>& value_columns) {
  std::vector<std::string_view> lines;
  {
    std::size_t begin = 0;
    while (begin <= text.size()) {
      auto pos = text.find('\n', begin);
      auto line = text.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin);
      if (!trim(line).empty()) lines.push_back(line);
      if (pos == std::string_view::npos) break;
      begin = pos + 1;
    }
  }
  if (lines.empty()) fail(ErrorCode::ParseError, "missing header row");
  auto header = split_commas(lines.front());
  auto find_col = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    fail(ErrorCode::ParseError, "header has no column '" + std::string(name) + "'");
  };
  const std::size_t date_idx = find_col(date_column);
  std::vector<std::string> names = value_columns;
  if (names.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (i != date_idx) names.emplace_back(header[i]);
  }
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(find_col(n));

  std::vector<std::vector<double>> values(names.size());
  MonthStamp start;
  MonthStamp prev;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_commas(lines[r]);
    if (cells.size() != header.size())
      fail(ErrorCode::ParseError, "row " + std::to_string(r) + ": expected " + std::to_string(header.size()) +
                                      " cells, found " + std::to_string(cells.size()));
    MonthStamp date;
    try {
      date = MonthStamp::parse(cells[date_idx]);
    } catch (const Error&) {
      fail(ErrorCode::ParseError, "row " + std::to_string(r) + ", column " + std::string(date_column));
    }
    if (r == 1) {
      start = date;
    } else if (date == prev) {
      fail(ErrorCode::DuplicateDate, date.to_string());
    } else if (date != prev.next()) {
      if (date < prev) fail(ErrorCode::ParseError, "row " + std::to_string(r) + ": dates out of order");
      fail(ErrorCode::MissingObservation, prev.next().to_string());
    }
    prev = date;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      auto cell = cells[idx[c]];
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v))
        fail(ErrorCode::ParseError, "row " + std::to_string(r) + ", column " + names[c]);
      values[c].push_back(v);
    }
  }
  if (lines.size() < 2) fail(ErrorCode::ParseError, "no data rows");
  std::vector<Series> cols;
  for (std::size_t c = 0; c < names.size(); ++c) cols.emplace_back(names[c], start, std::move(values[c]));
  return Frame(std::move(cols));
}

namespace {
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

Frame load_csv(const std::filesystem::path& path, std::string_view date_column,
               const std::vector<std::string>& value_columns) {
  return parse_csv(read_file(path), date_column, value_columns);
}

Frame load_csv(const std::filesystem::path& path, std::string_view date_column) {
  return parse_csv(read_file(path), date_column, {});
}

std::string to_csv(const Frame& frame, std::string_view date_column) {
  std::string out(date_column);
  for (const auto& c : frame.columns()) out += "," + c.name();
  out += "\n";
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    out += frame.start().plus(static_cast<int>(r)).to_string();
    for (const auto& c : frame.columns()) {
      out += ",";
      out += format_shortest(c[r]);
    }
    out += "\n";
  }
  return out;
}

Series transform(const Series& s, Transform kind) {
  const auto v = s.values();
  if ((kind == Transform::Diff || kind == Transform::LogDiff) && v.size() < 2)
    fail(ErrorCode::LengthError, "series '" + s.name() + "' needs at least two observations to difference");
  std::vector<double> base(v.begin(), v.end());
  if (kind == Transform::Log || kind == Transform::LogDiff) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (!(base[i] > 0.0))
        fail(ErrorCode::DomainError, "series '" + s.name() + "' is nonpositive at index " + std::to_string(i));
      base[i] = std::log(base[i]);
    }
  }
  switch (kind) {
    case Transform::Log:
      return Series("ln_" + s.name(), s.start(), std::move(base));
    case Transform::Diff:
    case Transform::LogDiff: {
      std::vector<double> d(base.size() - 1);
      for (std::size_t i = 1; i < base.size(); ++i) d[i - 1] = base[i] - base[i - 1];
      return Series((kind == Transform::Diff ? "d_" : "dln_") + s.name(), s.start().next(), std::move(d));
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown transform");
}

DescriptiveStats describe(std::span<const double> x) {
  const auto n = x.size();
  if (n < 4) fail(ErrorCode::LengthError, "describe needs at least 4 observations");
  DescriptiveStats st;
  st.n = n;
  double sum = 0.0;
  for (double v : x) sum += v;
  st.mean = sum / static_cast<double>(n);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = v - st.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double nd = static_cast<double>(n);
  if (!(m2 > 0.0) || m2 <= 1e-28 * nd * (1.0 + st.mean * st.mean)) fail(ErrorCode::ZeroVariance, "constant series");
  st.stdev = std::sqrt(m2 / (nd - 1.0));
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  st.skewness = m3 / std::pow(m2, 1.5);
  st.kurtosis = m4 / (m2 * m2);
  st.jarque_bera = nd * (st.skewness * st.skewness / 6.0 + (st.kurtosis - 3.0) * (st.kurtosis - 3.0) / 24.0);
  st.jarque_bera_p = chi2_sf(st.jarque_bera, 2.0);
  return st;
}

}  // namespace ardlkit
