#include "httplib.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <regex>

#include "ardlkit/error.hpp"
#include "ardlkit/pipeline.hpp"

#ifndef ARDLKIT_DATA_DIR
#define ARDLKIT_DATA_DIR "data"
#endif

namespace ardlkit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_header(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r' && c != '"') {
      cell += c;
    }
  }
  out.push_back(cell);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

bool same_file(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::error_code ec;
  return std::filesystem::exists(a, ec) && std::filesystem::exists(b, ec) && std::filesystem::equivalent(a, b, ec);
}

}  // namespace

std::vector<std::string> validate_csv_body(const std::string& body) {
  std::size_t start = body.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (start == std::string::npos) fail(ErrorCode::SchemaError, "empty response body");
  const std::string head = lower(body.substr(start, 512));
  const std::string first_line = body.substr(start, body.find('\n', start) - start);
  if (head.rfind("<!doctype", 0) == 0 || head.rfind("<html", 0) == 0 || head.find("<body") != std::string::npos ||
      head.rfind("<?xml", 0) == 0)
    fail(ErrorCode::SchemaError, "response is markup, not CSV; header: [" + join(split_header(first_line)) + "]");
  const std::vector<std::string> header = split_header(first_line);
  if (header.size() < 2)
    fail(ErrorCode::SchemaError, "CSV needs a date column and at least one value column; header: [" + join(header) + "]");
  for (const auto& h : header)
    if (h.empty()) fail(ErrorCode::SchemaError, "blank column name in header: [" + join(header) + "]");
  // Every data row must carry the same number of fields as the header.
  std::size_t pos = body.find('\n', start);
  std::size_t rows = 0;
  while (pos != std::string::npos && pos + 1 < body.size()) {
    const std::size_t next = body.find('\n', pos + 1);
    std::string line = body.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      if (split_header(line).size() != header.size())
        fail(ErrorCode::SchemaError, "row " + std::to_string(rows + 1) + " width differs from header: [" +
                                         join(header) + "]");
      ++rows;
    }
    pos = next;
  }
  if (rows == 0) fail(ErrorCode::SchemaError, "CSV has no data rows; header: [" + join(header) + "]");
  return header;
}

FetchResult fetch(const std::string& url, const std::filesystem::path& out) {
  static const std::regex re(R"(^(https?)://([^/:]+)(:\d+)?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) fail(ErrorCode::InvalidArgument, "unsupported URL: " + url);
  const std::filesystem::path bundled = std::filesystem::path(ARDLKIT_DATA_DIR);
  if (same_file(out.parent_path().empty() ? "." : out.parent_path(), bundled))
    fail(ErrorCode::InvalidArgument, "refusing to write into the bundled data directory " + bundled.string());

  const std::string origin = m[1].str() + "://" + m[2].str() + m[3].str();
  const std::string path = m[4].matched ? m[4].str() : "/";
  httplib::Client cli(origin);
  cli.set_follow_location(true);
  cli.set_connection_timeout(15);
  cli.set_read_timeout(60);
  const auto res = cli.Get(path);
  if (!res) fail(ErrorCode::NetworkError, "request to " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    fail(ErrorCode::NetworkError, "request to " + url + " returned HTTP " + std::to_string(res->status));

  FetchResult r;
  r.header = validate_csv_body(res->body);
  r.path = out;
  r.bytes = res->body.size();
  r.sha256 = sha256_hex(res->body);

  if (!out.parent_path().empty()) std::filesystem::create_directories(out.parent_path());
  std::filesystem::path tmp = out;
  tmp += ".part";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    f << res->body;
  }
  std::filesystem::rename(tmp, out);
  return r;
}

}  // namespace ardlkit
