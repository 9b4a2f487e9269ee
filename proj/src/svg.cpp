#include "polyco/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace polyco {

namespace {

constexpr int kWidth = 640, kHeight = 480, kMargin = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

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

// blue at -1, white at 0, red at +1
std::string diverging(double t) {
  t = std::clamp(t, -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (t < 0) {
    r = g = static_cast<int>(std::lround(255 * (1 + t)));
  } else {
    g = b = static_cast<int>(std::lround(255 * (1 - t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

void header(std::ostringstream& o, const std::string& title) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";
}

}  // namespace

std::string heat_map_svg(const std::vector<double>& values, int rows, int cols, const std::string& title,
                         const std::string& row_label, const std::string& col_label, int max_cells) {
  if (rows < 1 || cols < 1 || values.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("heat_map_svg: size mismatch");
  const int sr = std::max(1, (rows + max_cells - 1) / max_cells);
  const int sc = std::max(1, (cols + max_cells - 1) / max_cells);
  const int nr = (rows + sr - 1) / sr, nc = (cols + sc - 1) / sc;
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;

  std::ostringstream o;
  header(o, title);
  const double w = double(kWidth - 2 * kMargin) / nc, h = double(kHeight - 2 * kMargin) / nr;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      const double v = values[static_cast<std::size_t>(i * sr) * cols + j * sc];
      o << "<rect x=\"" << num(kMargin + j * w) << "\" y=\"" << num(kHeight - kMargin - (i + 1) * h) << "\" width=\""
        << num(w + 0.05) << "\" height=\"" << num(h + 0.05) << "\" fill=\"" << diverging(v / scale) << "\"/>\n";
    }
  o << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 20 << "\" text-anchor=\"middle\">" << escape(col_label)
    << "</text>\n";
  o << "<text x=\"20\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 20 " << kHeight / 2
    << ")\" text-anchor=\"middle\">" << escape(row_label) << "</text>\n";
  o << "<text x=\"" << kWidth - kMargin << "\" y=\"44\" text-anchor=\"end\">|value| max " << num(scale) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::string line_plot_svg(const std::vector<double>& x, const std::vector<Series>& series, const std::string& title,
                          const std::string& x_label) {
  if (x.size() < 2) throw std::invalid_argument("line_plot_svg: need two abscissae");
  double ylo = 0.0, yhi = 0.0;
  bool first = true;
  for (const auto& s : series) {
    if (s.y.size() != x.size()) throw std::invalid_argument("line_plot_svg: series " + s.name + " has wrong length");
    for (double v : s.y) {
      ylo = first ? v : std::min(ylo, v);
      yhi = first ? v : std::max(yhi, v);
      first = false;
    }
  }
  if (yhi - ylo < 1e-12) {
    yhi += 0.5;
    ylo -= 0.5;
  }
  const double xlo = x.front(), xhi = x.back();
  auto px = [&](double v) { return kMargin + (v - xlo) / (xhi - xlo) * (kWidth - 2 * kMargin); };
  auto py = [&](double v) { return kHeight - kMargin - (v - ylo) / (yhi - ylo) * (kHeight - 2 * kMargin); };

  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream o;
  header(o, title);
  o << "<path d=\"M" << kMargin << " " << kHeight - kMargin << " H" << kWidth - kMargin << " M" << kMargin << " "
    << kHeight - kMargin << " V" << kMargin << "\" stroke=\"black\" fill=\"none\"/>\n";
  o << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\">" << num(xlo) << "</text>\n";
  o << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\" text-anchor=\"end\">" << num(xhi)
    << "</text>\n";
  o << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\">" << num(ylo) << "</text>\n";
  o << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4 << "\" text-anchor=\"end\">" << num(yhi) << "</text>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 20 << "\" text-anchor=\"middle\">" << escape(x_label)
    << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* c = colours[s % 4];
    o << "<path d=\"";
    for (std::size_t i = 0; i < x.size(); ++i) o << (i ? " L" : "M") << num(px(x[i])) << " " << num(py(series[s].y[i]));
    o << "\" stroke=\"" << c << "\" stroke-width=\"1.5\" fill=\"none\"/>\n";
    o << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\"" << kMargin + 16 * (s + 1) << "\" text-anchor=\"end\" fill=\"" << c
      << "\">" << escape(series[s].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace polyco
