#include "wqcopt/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wqcopt/text.hpp"

namespace wqcopt {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kPaletteSize = 8;

// Two decimals is plenty for pixel coordinates and keeps the files small
// and byte-stable across runs.
std::string px(double v) {
  double r = std::round(v * 100.0) / 100.0;
  if (r == 0.0) r = 0.0;  // normalize -0
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << r;
  return os.str();
}

std::string axis_number(double v) {
  // Short human-readable tick labels.
  double a = std::abs(v);
  std::ostringstream os;
  if (v == 0.0) return "0";
  if (a >= 1e4 || a < 1e-3) {
    os.setf(std::ios::scientific);
    os.precision(1);
    os << v;
  } else {
    os.setf(std::ios::fixed);
    os.precision(a >= 100 ? 0 : (a >= 1 ? 1 : 3));
    os << v;
  }
  return os.str();
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series, bool log_y) {
  // Collect plottable points, transforming y when log scale is requested.
  struct Drawn {
    const PlotSeries* src;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Drawn> drawn;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    Drawn d{&s, {}};
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log_y && y <= 0.0) continue;
      double yy = log_y ? std::log10(y) : y;
      d.pts.emplace_back(x, yy);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, yy);
      ymax = std::max(ymax, yy);
    }
    if (!d.pts.empty()) drawn.push_back(std::move(d));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open plot file: " + path);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kWidth)
      << "\" height=\"" << px(kHeight) << "\" viewBox=\"0 0 " << px(kWidth)
      << " " << px(kHeight) << "\">\n";
  out << "<rect width=\"" << px(kWidth) << "\" height=\"" << px(kHeight)
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << px(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(title) << "</text>\n";

  if (drawn.empty()) {
    out << "<text x=\"" << px(kWidth / 2) << "\" y=\"" << px(kHeight / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\" fill=\"#888\">no plottable data</text>\n";
    out << "</svg>\n";
    return;
  }

  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) {
    return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w;
  };
  auto sy = [&](double y) {
    return kMarginTop + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h;
  };

  // Frame and grid with 5 ticks per axis.
  out << "<rect x=\"" << px(kMarginLeft) << "\" y=\"" << px(kMarginTop)
      << "\" width=\"" << px(plot_w) << "\" height=\"" << px(plot_h)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    double fx = xmin + (xmax - xmin) * i / ticks;
    double fy = ymin + (ymax - ymin) * i / ticks;
    double gx = sx(fx);
    double gy = sy(fy);
    if (i > 0 && i < ticks) {
      out << "<line x1=\"" << px(gx) << "\" y1=\"" << px(kMarginTop)
          << "\" x2=\"" << px(gx) << "\" y2=\"" << px(kMarginTop + plot_h)
          << "\" stroke=\"#ddd\"/>\n";
      out << "<line x1=\"" << px(kMarginLeft) << "\" y1=\"" << px(gy)
          << "\" x2=\"" << px(kMarginLeft + plot_w) << "\" y2=\"" << px(gy)
          << "\" stroke=\"#ddd\"/>\n";
    }
    out << "<text x=\"" << px(gx) << "\" y=\"" << px(kMarginTop + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << axis_number(fx) << "</text>\n";
    std::string ylab =
        log_y ? ("1e" + axis_number(fy)) : axis_number(fy);
    out << "<text x=\"" << px(kMarginLeft - 6) << "\" y=\"" << px(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << ylab << "</text>\n";
  }
  out << "<text x=\"" << px(kMarginLeft + plot_w / 2) << "\" y=\""
      << px(kHeight - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << px(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 "
      << px(kMarginTop + plot_h / 2) << ")\">"
      << escape_xml(log_y ? ("log10 " + y_label) : y_label) << "</text>\n";

  // Series polylines plus a legend in the top-right corner.
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"";
    if (drawn[i].src->dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t j = 0; j < drawn[i].pts.size(); ++j) {
      if (j) out << " ";
      out << px(sx(drawn[i].pts[j].first)) << ","
          << px(sy(drawn[i].pts[j].second));
    }
    out << "\"/>\n";
  }
  double ly = kMarginTop + 14;
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    double lx = kMarginLeft + plot_w - 170;
    out << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
        << px(lx + 24) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"";
    if (drawn[i].src->dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "<text x=\"" << px(lx + 30) << "\" y=\"" << px(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(drawn[i].src->label) << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
}

}  // namespace wqcopt
