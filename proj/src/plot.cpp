#include "auctionval/plot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "auctionval/format.hpp"

namespace auctionval {

std::vector<Series> plot_series(std::span<const std::pair<std::string, MonotoneCurve>> curves,
                                std::span<const std::pair<std::string, ConfidenceBand>> bands) {
  std::vector<Series> out;
  for (const auto& [name, c] : curves) {
    if (c.kind() == CurveKind::PiecewiseLinear) {
      out.push_back({name, c.knots(), c.values()});
      continue;
    }
    // Steps drawn as a staircase.
    Series s{name, {}, {}};
    for (std::size_t i = 0; i < c.knots().size(); ++i) {
      s.x.push_back(c.knots()[i]);
      s.y.push_back(c.left_limit(c.knots()[i]));
      s.x.push_back(c.knots()[i]);
      s.y.push_back(c.values()[i]);
    }
    out.push_back(std::move(s));
  }
  for (const auto& [name, b] : bands) {
    if (b.knots.empty()) continue;
    out.push_back({name + "_lower", b.knots, b.lower});
    out.push_back({name + "_upper", b.knots, b.upper});
  }
  return out;
}

void write_plot_csv(std::span<const Series> series, std::ostream& out, std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "x,series,value\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) out << format_double(s.x[i]) << "," << s.name << "," << format_double(s.y[i]) << "\n";
  }
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void write_plot_svg(std::span<const Series> series, std::ostream& out, const std::string& title) {
  constexpr double W = 720, H = 480, L = 60, R = 160, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = 1.0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x0 < x1)) {
    x0 = std::isfinite(x0) ? x0 - 1 : 0;
    x1 = x0 + 2;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
    out << "<text x=\"" << num(px(xv)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 7];
    const bool dashed = s.name.size() > 6 && (s.name.ends_with("_lower") || s.name.ends_with("_upper"));
    out << "<polyline fill=\"none\" stroke=\"" << color << "\"" << (dashed ? " stroke-dasharray=\"4 3\"" : "")
        << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
    }
    out << "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(k);
    out << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\"/>\n";
    out << "<text x=\"" << W - R + 35 << "\" y=\"" << ly + 4 << "\">" << escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace auctionval
