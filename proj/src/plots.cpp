#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ardlkit/error.hpp"
#include "ardlkit/format.hpp"
#include "ardlkit/pipeline.hpp"

namespace ardlkit {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(ErrorCode::SchemaError, "plot data lacks column '" + name + "'");
    return static_cast<int>(it - header.begin());
  }
  double number(std::size_t r, int c) const {
    const std::string& s = rows[r][static_cast<std::size_t>(c)];
    return s.empty() || s == "NA" ? std::nan("") : std::stod(s);
  }
};

Table read_table(const std::filesystem::path& p) {
  std::ifstream in(p);
  Table t;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::MissingArtifact, p.string() + " is empty");
  t.header = split_csv_record(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split_csv_record(line));
  return t;
}

const char* kPalette[] = {"#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#566573"};

struct Line {
  std::string label;
  std::vector<double> y;
  bool dashed = false;
  int color = -1;  // palette index; -1 -> next in sequence
};

struct Panel {
  std::string title;
  std::vector<double> x;
  std::vector<Line> lines;
  std::vector<double> lower, upper;  // shaded band, optional
  bool zero_line = false;
  std::string first_label, last_label;  // x-axis end labels; numeric when empty
};

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {}

  void panel(const Panel& p, double ox, double oy, double pw, double ph) {
    const double l = ox + 50, r = ox + pw - 10, t = oy + 24, b = oy + ph - 28;
    double xmin = *std::min_element(p.x.begin(), p.x.end()), xmax = *std::max_element(p.x.begin(), p.x.end());
    double ymin = INFINITY, ymax = -INFINITY;
    auto scan = [&](const std::vector<double>& v) {
      for (double y : v)
        if (std::isfinite(y)) ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    };
    for (const auto& ln : p.lines) scan(ln.y);
    scan(p.lower);
    scan(p.upper);
    if (p.zero_line) ymin = std::min(ymin, 0.0), ymax = std::max(ymax, 0.0);
    if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
    if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
    if (xmax - xmin < 1e-12) xmax = xmin + 1;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto X = [&](double x) { return l + (x - xmin) / (xmax - xmin) * (r - l); };
    auto Y = [&](double y) { return b - (y - ymin) / (ymax - ymin) * (b - t); };

    out_ << "<text x=\"" << num(ox + pw / 2) << "\" y=\"" << num(oy + 16)
         << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(p.title) << "</text>\n";
    out_ << "<rect x=\"" << num(l) << "\" y=\"" << num(t) << "\" width=\"" << num(r - l) << "\" height=\"" << num(b - t)
         << "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (double v : {ymin + pad, ymax - pad})
      out_ << "<text x=\"" << num(l - 4) << "\" y=\"" << num(Y(v) + 3) << "\" text-anchor=\"end\" font-size=\"9\">"
           << format_sig(v, 3) << "</text>\n";
    out_ << "<text x=\"" << num(l) << "\" y=\"" << num(b + 12) << "\" font-size=\"9\">"
         << (p.first_label.empty() ? format_sig(xmin, 6) : p.first_label) << "</text>\n<text x=\"" << num(r)
         << "\" y=\"" << num(b + 12) << "\" text-anchor=\"end\" font-size=\"9\">"
         << (p.last_label.empty() ? format_sig(xmax, 6) : p.last_label) << "</text>\n";
    if (p.zero_line && ymin < 0 && ymax > 0)
      out_ << "<line x1=\"" << num(l) << "\" x2=\"" << num(r) << "\" y1=\"" << num(Y(0)) << "\" y2=\"" << num(Y(0))
           << "\" stroke=\"#bbb\"/>\n";
    if (!p.lower.empty()) {
      std::string pts;
      for (std::size_t i = 0; i < p.x.size(); ++i)
        if (std::isfinite(p.upper[i])) pts += num(X(p.x[i])) + "," + num(Y(p.upper[i])) + " ";
      for (std::size_t i = p.x.size(); i-- > 0;)
        if (std::isfinite(p.lower[i])) pts += num(X(p.x[i])) + "," + num(Y(p.lower[i])) + " ";
      out_ << "<polygon class=\"band\" points=\"" << pts << "\" fill=\"#aab7c4\" fill-opacity=\"0.4\" stroke=\"none\"/>\n";
    }
    int c = 0;
    for (const auto& ln : p.lines) {
      const char* colour = kPalette[(ln.color < 0 ? c : ln.color) % 6];
      std::string pts;
      for (std::size_t i = 0; i < p.x.size(); ++i)
        if (std::isfinite(ln.y[i])) pts += num(X(p.x[i])) + "," + num(Y(ln.y[i])) + " ";
      out_ << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\""
           << (ln.dashed ? " stroke-dasharray=\"4,3\"" : "") << "/>\n";
      if (!ln.label.empty())
        out_ << "<text x=\"" << num(l + 6) << "\" y=\"" << num(t + 12 + 11 * c) << "\" font-size=\"9\" fill=\""
             << colour << "\">" << escape(ln.label) << "</text>\n";
      ++c;
    }
  }

  void roots(const std::vector<double>& re, const std::vector<double>& im, double size) {
    const double c = size / 2, rad = size / 2 - 30;
    out_ << "<text x=\"" << num(c) << "\" y=\"16\" text-anchor=\"middle\" font-size=\"12\">"
         << "Inverse roots of the AR characteristic polynomial</text>\n";
    out_ << "<line x1=\"20\" x2=\"" << num(size - 20) << "\" y1=\"" << num(c) << "\" y2=\"" << num(c)
         << "\" stroke=\"#bbb\"/>\n<line y1=\"20\" y2=\"" << num(size - 20) << "\" x1=\"" << num(c) << "\" x2=\""
         << num(c) << "\" stroke=\"#bbb\"/>\n";
    out_ << "<circle class=\"unit\" cx=\"" << num(c) << "\" cy=\"" << num(c) << "\" r=\"" << num(rad)
         << "\" fill=\"none\" stroke=\"#555\"/>\n";
    for (std::size_t i = 0; i < re.size(); ++i)
      out_ << "<circle class=\"root\" cx=\"" << num(c + re[i] * rad) << "\" cy=\"" << num(c - im[i] * rad)
           << "\" r=\"3\" fill=\"" << kPalette[0] << "\"/>\n";
  }

  std::string str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w_) + "\" height=\"" + num(h_) +
           "\" viewBox=\"0 0 " + num(w_) + " " + num(h_) + "\" font-family=\"sans-serif\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + out_.str() + "</svg>\n";
  }

 private:
  static std::string num(double v) { return format_sig(std::round(v * 100) / 100, 8); }
  static std::string escape(const std::string& s) {
    std::string o;
    for (char ch : s) {
      if (ch == '<') o += "&lt;";
      else if (ch == '>') o += "&gt;";
      else if (ch == '&') o += "&amp;";
      else o += ch;
    }
    return o;
  }
  double w_, h_;
  std::ostringstream out_;
};

/// Panels laid out in a grid of `cols` columns.
std::string grid(const std::vector<Panel>& panels, int cols, double pw = 360, double ph = 240) {
  const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  Svg svg(pw * cols, ph * rows);
  for (std::size_t i = 0; i < panels.size(); ++i)
    svg.panel(panels[i], pw * static_cast<double>(i % cols), ph * static_cast<double>(i / cols), pw, ph);
  return svg.str();
}

/// Date strings YYYY-MM as fractional years.
double year_of(const std::string& d) { return std::stoi(d.substr(0, 4)) + (std::stoi(d.substr(5, 2)) - 1) / 12.0; }

std::string series_svg(const Table& t) {
  std::vector<Panel> panels;
  std::vector<double> x;
  for (const auto& r : t.rows) x.push_back(year_of(r[0]));
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    Panel p{t.header[c], x, {{"", {}, false}}, {}, {}, false, t.rows.front()[0], t.rows.back()[0]};
    for (std::size_t i = 0; i < t.rows.size(); ++i) p.lines[0].y.push_back(t.number(i, static_cast<int>(c)));
    panels.push_back(p);
  }
  return grid(panels, 2);
}

std::string cusum_svg(const Table& t) {
  const int model = t.col("model"), kind = t.col("kind"), date = t.col("date"), st = t.col("statistic"),
            lo = t.col("lower"), up = t.col("upper");
  std::map<std::pair<std::string, std::string>, Panel> by;
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    auto key = std::pair{t.rows[i][static_cast<std::size_t>(model)], t.rows[i][static_cast<std::size_t>(kind)]};
    auto [it, fresh] = by.try_emplace(key);
    if (fresh) {
      order.push_back(key);
      it->second.title = (key.second == "cusum" ? "CUSUM: " : "CUSUM of squares: ") + key.first;
      it->second.lines = {{key.second, {}, false}, {"5% bounds", {}, true, 1}, {"", {}, true, 1}};
      it->second.zero_line = key.second == "cusum";
    }
    Panel& p = it->second;
    const std::string& d = t.rows[i][static_cast<std::size_t>(date)];
    if (p.x.empty()) p.first_label = d;
    p.last_label = d;
    p.x.push_back(year_of(d));
    p.lines[0].y.push_back(t.number(i, st));
    p.lines[1].y.push_back(t.number(i, lo));
    p.lines[2].y.push_back(t.number(i, up));
  }
  std::vector<Panel> panels;
  for (const auto& k : order) panels.push_back(by.at(k));
  return grid(panels, 2);
}

std::string irf_svg(const Table& t) {
  const int shock = t.col("shock"), var = t.col("variable"), h = t.col("horizon"), v = t.col("value"),
            lo = t.col("lower"), up = t.col("upper");
  std::map<std::pair<std::string, std::string>, Panel> by;
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    auto key = std::pair{t.rows[i][static_cast<std::size_t>(var)], t.rows[i][static_cast<std::size_t>(shock)]};
    auto [it, fresh] = by.try_emplace(key);
    if (fresh) {
      order.push_back(key);
      it->second.title = "Response of " + key.first + " to " + key.second;
      it->second.lines = {{"", {}, false}};
      it->second.zero_line = true;
    }
    Panel& p = it->second;
    p.x.push_back(t.number(i, h));
    p.lines[0].y.push_back(t.number(i, v));
    p.lower.push_back(t.number(i, lo));
    p.upper.push_back(t.number(i, up));
  }
  std::vector<Panel> panels;
  for (const auto& k : order) {
    Panel p = by.at(k);
    if (std::none_of(p.lower.begin(), p.lower.end(), [](double x) { return std::isfinite(x); })) p.lower.clear(), p.upper.clear();
    panels.push_back(p);
  }
  const int cols = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(panels.size())))));
  return grid(panels, cols);
}

std::string fevd_svg(const Table& t) {
  const int var = t.col("variable"), h = t.col("horizon"), shock = t.col("shock"), share = t.col("share");
  std::map<std::string, Panel> by;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& name = t.rows[i][static_cast<std::size_t>(var)];
    const std::string& s = t.rows[i][static_cast<std::size_t>(shock)];
    auto [it, fresh] = by.try_emplace(name);
    Panel& p = it->second;
    if (fresh) {
      order.push_back(name);
      p.title = "Variance decomposition of " + name;
    }
    auto ln = std::find_if(p.lines.begin(), p.lines.end(), [&](const Line& l) { return l.label == s; });
    if (ln == p.lines.end()) {
      p.lines.push_back({s, {}, false});
      ln = p.lines.end() - 1;
    }
    const double x = t.number(i, h);
    if (p.x.empty() || p.x.back() != x) p.x.push_back(x);
    ln->y.push_back(100 * t.number(i, share));
  }
  std::vector<Panel> panels;
  for (const auto& k : order) panels.push_back(by.at(k));
  return grid(panels, 2);
}

std::string hd_svg(const Table& t) {
  const int var = t.col("variable"), date = t.col("date"), obs = t.col("observed"), base = t.col("baseline");
  std::vector<int> shocks;
  for (std::size_t c = 0; c < t.header.size(); ++c)
    if (t.header[c].rfind("shock_", 0) == 0) shocks.push_back(static_cast<int>(c));
  std::map<std::string, Panel> by;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& name = t.rows[i][static_cast<std::size_t>(var)];
    auto [it, fresh] = by.try_emplace(name);
    Panel& p = it->second;
    if (fresh) {
      order.push_back(name);
      p.title = "Historical decomposition of " + name;
      p.lines.push_back({"observed - baseline", {}, false});
      for (int c : shocks) p.lines.push_back({t.header[static_cast<std::size_t>(c)], {}, true});
      p.zero_line = true;
    }
    const std::string& d = t.rows[i][static_cast<std::size_t>(date)];
    if (p.x.empty()) p.first_label = d;
    p.last_label = d;
    p.x.push_back(year_of(d));
    p.lines[0].y.push_back(t.number(i, obs) - t.number(i, base));
    for (std::size_t j = 0; j < shocks.size(); ++j) p.lines[j + 1].y.push_back(t.number(i, shocks[j]));
  }
  std::vector<Panel> panels;
  for (const auto& k : order) panels.push_back(by.at(k));
  return grid(panels, 1, 720);
}

std::string roots_svg(const Table& t) {
  const int re = t.col("real"), im = t.col("imag");
  std::vector<double> a, b;
  for (std::size_t i = 0; i < t.rows.size(); ++i) a.push_back(t.number(i, re)), b.push_back(t.number(i, im));
  Svg svg(360, 360);
  svg.roots(a, b, 360);
  return svg.str();
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& bundle_dir, PlotFormat format) {
  using Renderer = std::string (*)(const Table&);
  static const std::vector<std::pair<std::string, Renderer>> kinds = {
      {"fig1_series", series_svg}, {"fig2_cusum", cusum_svg}, {"fig3_roots", roots_svg},
      {"fig4_irf", irf_svg},       {"fig5_fevd", fevd_svg},   {"fig5_hd", hd_svg}};
  std::vector<std::filesystem::path> written;
  const std::filesystem::path out_dir = bundle_dir / "plots";
  for (const auto& [stem, render] : kinds) {
    const std::filesystem::path src = bundle_dir / (stem + ".csv");
    if (!std::filesystem::exists(src)) continue;
    std::filesystem::create_directories(out_dir);
    if (format == PlotFormat::Csv) {
      const auto dst = out_dir / (stem + ".csv");
      std::filesystem::copy_file(src, dst, std::filesystem::copy_options::overwrite_existing);
      written.push_back(dst);
    } else {
      const Table t = read_table(src);
      if (t.rows.empty()) continue;
      const auto dst = out_dir / (stem + ".svg");
      std::ofstream(dst, std::ios::binary) << render(t);
      written.push_back(dst);
    }
  }
  if (written.empty()) fail(ErrorCode::MissingArtifact, "no plot data (fig*.csv) in " + bundle_dir.string());
  return written;
}

}  // namespace ardlkit
