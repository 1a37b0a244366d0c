#include "schurnorm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "schurnorm/errors.hpp"

namespace schurnorm {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct Range {
  double lo = 0.0, hi = 1.0;

  void cover(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

Range range_of(const std::vector<double>& v) {
  Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (double x : v) r.cover(x);
  return r;
}

Range padded(Range r) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) return {0.0, 1.0};
  double span = r.hi - r.lo;
  if (span <= 0.0) span = std::max(1.0, std::abs(r.hi)) * 0.1;
  return {r.lo - 0.05 * span, r.hi + 0.05 * span};
}

/// Plot area inside a document with one or more panels stacked vertically.
class Panel {
 public:
  Panel(double top, double height, Range x, Range y)
      : top_(top), height_(height), x_(x), y_(y) {}

  double px(double x) const {
    return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const { return top_ + height_ - (y - y_.lo) / (y_.hi - y_.lo) * height_; }

  std::string axes(const std::string& xlabel, const std::string& ylabel) const {
    std::string s;
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = top_ + height_, y1 = top_;
    s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) +
         "\" height=\"" + num(height_) + "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = x_.lo + (x_.hi - x_.lo) * k / 4.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * k / 4.0;
      s += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(y0 + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + label(xv) + "</text>\n";
      s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py(yv) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + label(yv) + "</text>\n";
    }
    s += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"" + num(y0 + 34) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + "</text>\n";
    s += "<text x=\"14\" y=\"" + num(top_ + 0.5 * height_) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         num(top_ + 0.5 * height_) + ")\">" + ylabel + "</text>\n";
    return s;
  }

  std::string polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::string& color, const std::string& name) const {
    std::string pts;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(px(xs[k])) + ',' + num(py(ys[k]));
    }
    return "<polyline class=\"series\" data-name=\"" + name + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }

  std::string hline(double y, const std::string& color, const std::string& name) const {
    return "<line class=\"baseline\" data-name=\"" + name + "\" x1=\"" + num(kLeft) +
           "\" x2=\"" + num(kWidth - kRight) + "\" y1=\"" + num(py(y)) + "\" y2=\"" +
           num(py(y)) + "\" stroke=\"" + color + "\" stroke-dasharray=\"6 3\"/>\n";
  }

 private:
  double top_, height_;
  Range x_, y_;
};

std::string svg_open(double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(kWidth) + ' ' + num(height) +
         "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
}

std::string legend(const std::vector<std::pair<std::string, std::string>>& items) {
  std::string s;
  double x = kLeft + 10.0;
  for (const auto& [name, color] : items) {
    s += "<line x1=\"" + num(x) + "\" x2=\"" + num(x + 18) + "\" y1=\"16\" y2=\"16\" stroke=\"" +
         color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(x + 22) + "\" y=\"20\" font-size=\"11\">" + name + "</text>\n";
    x += 30.0 + 7.0 * static_cast<double>(name.size());
  }
  return s;
}

void require_rows(const CsvTable& t, const std::string& what) {
  if (t.rows.empty()) throw Error(what + " has no data rows");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw MissingColumn(name);
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw Error(path.string() + " is empty");
  t.header = split(line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != t.header.size()) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                  std::to_string(t.header.size()) + " fields, found " +
                  std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": not a number: " + c);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

BaselineLines read_baselines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  BaselineLines b;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    auto get = [&](const char* key) -> std::optional<double> {
      if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
      return doc[key].get<double>();
    };
    b.lambda_inverse = get("lambda_inverse");
    b.l2_kbar = get("l2_norm_kbar");
    b.tkbar_norm = get("norm_t_kbar");
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed baselines file " + path.string() + ": " + e.what());
  }
  return b;
}

std::string sweep_svg(const CsvTable& sweep, const BaselineLines& lines) {
  const std::vector<double> omega = sweep.values("omega");
  const std::vector<double> schur = sweep.values("schur_estimate");
  const std::vector<double> l2 = sweep.values("l2_norm_k");
  const std::vector<double> trunc = sweep.values("truncation_norm");
  require_rows(sweep, "sweep CSV");

  Range y = range_of(schur);
  for (const auto* v : {&l2, &trunc})
    for (double x : *v) y.cover(x);
  for (const auto& h : {lines.lambda_inverse, lines.l2_kbar, lines.tkbar_norm})
    if (h) y.cover(*h);
  const Panel p(kTop, kHeight - kTop - kBottom, padded(range_of(omega)), padded(y));

  std::string s = svg_open(kHeight);
  s += p.axes("omega", "norm estimate");
  s += p.polyline(omega, l2, "#d62728", "l2_norm_k");
  s += p.polyline(omega, schur, "#17becf", "schur_estimate");
  s += p.polyline(omega, trunc, "#1f77b4", "truncation_norm");
  if (lines.lambda_inverse) s += p.hline(*lines.lambda_inverse, "#ff7f0e", "lambda_inverse");
  if (lines.l2_kbar) s += p.hline(*lines.l2_kbar, "#d62728", "l2_norm_kbar");
  if (lines.tkbar_norm) s += p.hline(*lines.tkbar_norm, "#808000", "norm_t_kbar");
  s += legend({{"L2 norm of K", "#d62728"},
               {"Schur estimate", "#17becf"},
               {"truncation norm", "#1f77b4"}});
  return s + "</svg>\n";
}

std::string convergence_svg(const CsvTable& history) {
  const std::vector<double> it = history.values("iteration");
  const std::vector<double> t = history.values("t");
  const std::vector<double> refs = history.values("ref_points");
  require_rows(history, "history CSV");

  const double panel_h = 180.0;
  const double height = kTop + 2.0 * panel_h + 2.0 * kBottom;
  const Range x = padded(range_of(it));
  const Panel top(kTop, panel_h, x, padded(range_of(t)));
  const Panel bottom(kTop + panel_h + kBottom, panel_h, x, padded(range_of(refs)));

  std::string s = svg_open(height);
  s += top.axes("iteration", "t");
  s += top.polyline(it, t, "#1f77b4", "t");
  s += bottom.axes("iteration", "reference points");
  s += bottom.polyline(it, refs, "#2ca02c", "ref_points");
  return s + "</svg>\n";
}

std::string profiles_svg(const CsvTable& profiles) {
  const std::vector<double> omega = profiles.values("omega");
  require_rows(profiles, "profiles CSV");
  const std::size_t oc = profiles.column("omega");
  std::vector<std::size_t> pcols;
  for (std::size_t c = 0; c < profiles.header.size(); ++c) {
    if (c != oc && profiles.header[c].rfind("p_", 0) == 0) pcols.push_back(c);
  }
  if (pcols.size() < 2) throw MissingColumn("p_0");

  std::vector<double> theta(pcols.size());
  for (std::size_t k = 0; k < pcols.size(); ++k) {
    theta[k] = -1.0 + static_cast<double>(k) / static_cast<double>(pcols.size() - 1);
  }
  Range y{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& r : profiles.rows)
    for (std::size_t c : pcols) y.cover(r[c]);
  const Panel p(kTop, kHeight - kTop - kBottom, {-1.0, 0.0}, padded(y));

  const Range w = range_of(omega);
  std::string s = svg_open(kHeight);
  s += p.axes("theta / tau", "p(theta)");
  for (std::size_t r = 0; r < profiles.rows.size(); ++r) {
    const double f = w.hi > w.lo ? (omega[r] - w.lo) / (w.hi - w.lo) : 0.5;
    char color[16];
    std::snprintf(color, sizeof color, "#%02x00%02x", static_cast<int>(std::lround(255 * f)),
                  static_cast<int>(std::lround(255 * (1.0 - f))));
    std::vector<double> ys;
    ys.reserve(pcols.size());
    for (std::size_t c : pcols) ys.push_back(profiles.rows[r][c]);
    s += p.polyline(theta, ys, color, "omega=" + label(omega[r]));
  }
  return s + "</svg>\n";
}

std::vector<fs::path> cmd_plot(const PlotInputs& in, const fs::path& output_dir) {
  std::vector<std::pair<fs::path, std::string>> docs;
  if (in.sweep_csv) {
    const BaselineLines lines = in.baselines_json ? read_baselines(*in.baselines_json)
                                                  : BaselineLines{};
    docs.emplace_back(output_dir / "sweep.svg", sweep_svg(read_csv(*in.sweep_csv), lines));
  }
  if (in.history_csv) {
    docs.emplace_back(output_dir / "convergence.svg", convergence_svg(read_csv(*in.history_csv)));
  }
  if (in.profiles_csv) {
    docs.emplace_back(output_dir / "profiles.svg", profiles_svg(read_csv(*in.profiles_csv)));
  }
  if (docs.empty()) throw ConfigError("plot: no input files given");
  fs::create_directories(output_dir);
  std::vector<fs::path> written;
  for (const auto& [path, text] : docs) {
    write_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace schurnorm
