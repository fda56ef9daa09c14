#include "qmlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qmlab/linalg.hpp"
#include "qmlab/report.hpp"

namespace qmlab {

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 72, kRight = 24, kTop = 48, kBottom = 58;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fixed(double v, int prec = 2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

// Tick label with enough digits to distinguish neighbours but no noise.
std::string tick_label(double v) {
  if (v == 0) return "0";
  double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1e", v);
    return buf;
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  // Data value -> axis coordinate in [0, 1].
  double unit(double v) const {
    double a = log ? std::log10(lo) : lo;
    double b = log ? std::log10(hi) : hi;
    double u = log ? std::log10(v) : v;
    return (u - a) / (b - a);
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      int ka = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      int kb = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      for (int k = ka; k <= kb; ++k) out.push_back(std::pow(10.0, k));
      if (out.size() < 2) {
        out = {lo, hi};
      }
      return out;
    }
    double span = hi - lo;
    double raw = span / 5;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag * (1 + 1e-12)) {
        step = m * mag;
        break;
      }
    }
    double first = std::ceil(lo / step - 1e-9) * step;
    for (double v = first; v <= hi + step * 1e-9; v += step)
      out.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return out;
  }
};

Axis fit_axis(const PlotSpec& spec, bool horizontal) {
  Axis ax;
  ax.log = horizontal ? spec.log_x : spec.log_y;
  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& s : spec.series) {
    const auto& vs = horizontal ? s.x : s.y;
    for (double v : vs) {
      if (!std::isfinite(v)) continue;
      if (ax.log && v <= 0) continue;
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!any) {
    lo = ax.log ? 0.1 : 0;
    hi = ax.log ? 10 : 1;
  }
  if (ax.log) {
    ax.lo = std::pow(10.0, std::floor(std::log10(lo)));
    ax.hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (ax.lo == ax.hi) ax.hi *= 10;
  } else {
    double pad = (hi - lo) * 0.05;
    if (pad == 0) pad = (lo == 0) ? 1 : std::abs(lo) * 0.05;
    ax.lo = lo - pad;
    ax.hi = hi + pad;
  }
  return ax;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  Axis xa = fit_axis(spec, true);
  Axis ya = fit_axis(spec, false);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + xa.unit(v) * plot_w; };
  auto py = [&](double v) { return kTop + (1 - ya.unit(v)) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
     << "width=\"" << kWidth << "\" height=\"" << kHeight << "\" "
     << "viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";

  for (const auto& s : spec.series) {
    os << "<!--data:" << s.name << " ";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (i) os << ";";
      os << format_double(s.x[i]) << "," << format_double(s.y[i]);
    }
    os << "-->\n";
  }

  os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"15\" font-weight=\"bold\">"
     << escape_xml(spec.title) << "</text>\n";
  double anno_y = 38;
  for (const auto& a : spec.annotations) {
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << anno_y
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"12\" fill=\"#444\">" << escape_xml(a) << "</text>\n";
    anno_y += 14;
  }

  // Grid and ticks.
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n";
  for (double t : xa.ticks()) {
    double x = px(t);
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kTop) << "\" x2=\""
       << fixed(x) << "\" y2=\"" << fixed(kTop + plot_h)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kTop + plot_h + 18)
       << "\" text-anchor=\"middle\">" << escape_xml(tick_label(t))
       << "</text>\n";
  }
  for (double t : ya.ticks()) {
    double y = py(t);
    os << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(y) << "\" x2=\""
       << fixed(kLeft + plot_w) << "\" y2=\"" << fixed(y)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4)
       << "\" text-anchor=\"end\">" << escape_xml(tick_label(t))
       << "</text>\n";
  }
  os << "</g>\n";

  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
     << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // Series.
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.6\" points=\"";
    bool first = true;
    for (size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i], yv = s.y[i];
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      if (xa.log && xv <= 0) continue;
      if (ya.log && yv <= 0) continue;
      if (!first) os << " ";
      os << fixed(px(xv), 2) << "," << fixed(py(yv), 2);
      first = false;
    }
    os << "\"/>\n";
  }

  // Legend.
  double ly = kTop + 14;
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    double lx = kLeft + plot_w - 190;
    os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly - 4)
       << "\" x2=\"" << fixed(lx + 24) << "\" y2=\"" << fixed(ly - 4)
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly)
       << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << escape_xml(spec.series[si].name) << "</text>\n";
    ly += 16;
  }

  // Axis labels.
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"13\">" << escape_xml(spec.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + plot_h / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">"
     << escape_xml(spec.y_label) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>
parse_svg_data(const std::string& svg) {
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> out;
  const std::string open = "<!--data:", close = "-->";
  size_t pos = 0;
  while ((pos = svg.find(open, pos)) != std::string::npos) {
    size_t end = svg.find(close, pos);
    if (end == std::string::npos) throw Error("unterminated data comment");
    std::string body = svg.substr(pos + open.size(), end - pos - open.size());
    pos = end + close.size();
    size_t space = body.find(' ');
    if (space == std::string::npos) throw Error("malformed data comment");
    std::string name = body.substr(0, space);
    std::string points = body.substr(space + 1);
    std::vector<std::pair<double, double>> pts;
    size_t start = 0;
    while (start < points.size()) {
      size_t semi = points.find(';', start);
      std::string item = semi == std::string::npos
                             ? points.substr(start)
                             : points.substr(start, semi - start);
      size_t comma = item.find(',');
      if (comma == std::string::npos) throw Error("malformed data point");
      pts.emplace_back(std::stod(item.substr(0, comma)),
                       std::stod(item.substr(comma + 1)));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    out.emplace_back(std::move(name), std::move(pts));
  }
  return out;
}

}  // namespace qmlab
