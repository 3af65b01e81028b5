#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "hypereig/cli.hpp"
#include "hypereig/error.hpp"

namespace hypereig::cli {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote in CSV line");
  out.push_back(std::move(field));
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 55;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
  double x0, x1, y0, y1;

  Frame(double xa, double xb, double ya, double yb) : x0(xa), x1(xb), y0(ya), y1(yb) {
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) {
      const double pad = std::max(1.0, std::abs(y0)) * 0.1;
      y0 -= pad;
      y1 += pad;
    }
  }
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

class Svg {
 public:
  explicit Svg(const std::string& title) {
    body_ += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
        kWidth, kHeight, kWidth / 2, escape(title));
  }

  void axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    const double xa = kLeft, xb = kWidth - kRight, ya = kHeight - kBottom, yb = kTop;
    body_ += fmt::format("<g stroke=\"black\" fill=\"none\"><line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>"
                         "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\"/></g>\n",
                         xa, ya, xb, yb);
    for (int i = 0; i <= 5; ++i) {
      const double x = f.x0 + (f.x1 - f.x0) * i / 5.0;
      const double y = f.y0 + (f.y1 - f.y0) * i / 5.0;
      body_ += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>"
                           "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:.3g}</text>\n",
                           f.px(x), ya, ya + 5, ya + 18, x);
      body_ += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
                           "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.3g}</text>\n",
                           xa - 5, f.py(y), xa, xa - 8, f.py(y) + 4, y);
    }
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (xa + xb) / 2, kHeight - 12,
                         escape(xlabel));
    body_ += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                         (ya + yb) / 2, escape(ylabel));
  }

  void polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts, const std::string& color,
                const std::string& extra = "") {
    if (pts.empty()) return;
    body_ += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\" {}points=\"", color, extra);
    for (const auto& [x, y] : pts) body_ += fmt::format("{:.2f},{:.2f} ", f.px(x), f.py(y));
    body_ += "\"/>\n";
  }

  void vertical_rule(const Frame& f, double x, const std::string& label) {
    body_ += fmt::format("<line class=\"singular\" x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#888\" "
                         "stroke-dasharray=\"4 3\"><title>{3}</title></line>\n",
                         f.px(x), kTop, kHeight - kBottom, escape(label));
  }

  void legend(int row, const std::string& color, const std::string& label) {
    const double y = kTop + 14 * row;
    body_ += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
                         "<text x=\"{4}\" y=\"{5}\">{6}</text>\n",
                         kWidth - kRight - 150, y, kWidth - kRight - 130, color, kWidth - kRight - 125, y + 4,
                         escape(label));
  }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  std::string body_;
};

}  // namespace

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "tail") return PlotKind::kTail;
  if (name == "curves") return PlotKind::kCurves;
  throw ParameterError("plot kind must be tail or curves, got '" + name + "'");
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& text = rows.at(row).at(col);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ParseError(fmt::format("CSV row {} column '{}': '{}' is not a number", row + 2, header.at(col), text));
  }
  return value;
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(fmt::format("CSV line {} has {} fields, header has {}", line_no, fields.size(), table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw ParseError("CSV is empty");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  return parse_csv(in);
}

std::string render_tail_svg(const CsvTable& table) {
  const auto ct = table.column("t");
  const auto cs = table.column("survival");
  const auto fit_it = std::find(table.header.begin(), table.header.end(), "fit");
  const bool has_fit = fit_it != table.header.end();
  std::vector<std::pair<double, double>> survival, fit;
  double tmax = 0.0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double t = table.number(r, ct);
    const double s = table.number(r, cs);
    if (s < 0.0 || s > 1.0) throw ParseError(fmt::format("survival {} outside [0, 1]", s));
    survival.emplace_back(t, s);
    tmax = std::max(tmax, t);
    if (has_fit) {
      const double y = table.number(r, static_cast<std::size_t>(fit_it - table.header.begin()));
      if (std::isfinite(y)) fit.emplace_back(t, std::min(y, 1.05));
    }
  }
  if (survival.empty()) throw ParseError("tail CSV has no rows");
  const Frame frame(0.0, tmax, 0.0, 1.05);
  Svg svg("Empirical survival Pr[|X : v^(k-1)| >= t]");
  svg.axes(frame, "t", "survival");
  // Step function: the empirical survival is right-continuous.
  std::vector<std::pair<double, double>> steps;
  for (std::size_t i = 0; i < survival.size(); ++i) {
    if (i > 0) steps.emplace_back(survival[i].first, survival[i - 1].second);
    steps.push_back(survival[i]);
  }
  svg.polyline(frame, steps, kPalette[0], "class=\"survival\" ");
  svg.legend(0, kPalette[0], "empirical");
  if (!fit.empty()) {
    svg.polyline(frame, fit, kPalette[1], "class=\"fit\" stroke-dasharray=\"6 4\" ");
    svg.legend(1, kPalette[1], "C exp(-c t^2)");
  }
  return svg.finish();
}

std::string render_curves_svg(const CsvTable& table) {
  const auto cid = table.column("curve_id");
  const auto ct = table.column("t");
  const auto cre = table.column("lambda_re");
  const auto cim = table.column("lambda_im");
  const auto csing = table.column("singular_flag");
  std::map<long, std::vector<std::pair<double, double>>> re, im;
  std::set<double> singular;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto id = static_cast<long>(table.number(r, cid));
    const double t = table.number(r, ct);
    const double a = table.number(r, cre);
    const double b = table.number(r, cim);
    re[id].emplace_back(t, a);
    im[id].emplace_back(t, b);
    ymin = std::min({ymin, a, b});
    ymax = std::max({ymax, a, b});
    if (table.number(r, csing) != 0.0) singular.insert(t);
  }
  if (re.empty()) throw ParseError("curves CSV has no rows");
  const Frame frame(0.0, 1.0, ymin, ymax);
  Svg svg("Eigenvalue curves along A(t) = A0 + t B");
  svg.axes(frame, "t", "Re λ (solid), Im λ (dashed)");
  for (double t : singular) svg.vertical_rule(frame, t, fmt::format("singular near t = {:.6g}", t));
  int i = 0;
  for (const auto& [id, pts] : re) {
    const std::string color = kPalette[i % 8];
    svg.polyline(frame, pts, color, fmt::format("class=\"curve-re\" data-curve=\"{}\" ", id));
    svg.polyline(frame, im[id], color, fmt::format("class=\"curve-im\" data-curve=\"{}\" stroke-dasharray=\"5 3\" ", id));
    if (i < 12) svg.legend(i, color, fmt::format("curve {}", id));
    ++i;
  }
  return svg.finish();
}

void plot_csv(const std::string& csv_path, PlotKind kind, const std::string& svg_path) {
  const CsvTable table = read_csv_file(csv_path);
  write_file_atomic(svg_path, kind == PlotKind::kTail ? render_tail_svg(table) : render_curves_svg(table));
}

}  // namespace hypereig::cli
