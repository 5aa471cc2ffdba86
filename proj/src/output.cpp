#include "frachp/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace frachp {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 60.0;

std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

double two_sig_step(double x) { return std::pow(10.0, std::floor(std::log10(std::abs(x))) - 1.0); }

struct Range {
  double lo;
  double hi;
};

Range axis_range(const std::vector<double>& values) {
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  Range r{round_down_2sig(*mn), round_up_2sig(*mx)};
  if (r.hi <= r.lo) {
    const double pad = r.lo == 0.0 ? 1.0 : 0.1 * std::abs(r.lo);
    r = {round_down_2sig(r.lo - pad), round_up_2sig(r.hi + pad)};
  }
  return r;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool include_velocity) {
  const auto n = trajectory.dim();
  out << "step,s";
  for (std::size_t i = 1; i <= n; ++i) out << ",q_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",p_" << i;
  if (include_velocity) {
    for (std::size_t i = 1; i <= n; ++i) out << ",v_" << i;
  }
  out << '\n';
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const auto& x = trajectory.states[k];
    out << k << ',' << format_real(trajectory.grid.point(k));
    for (Eigen::Index i = 0; i < x.q.size(); ++i) out << ',' << format_real(x.q[i]);
    for (Eigen::Index i = 0; i < x.p.size(); ++i) out << ',' << format_real(x.p[i]);
    if (include_velocity) {
      for (Eigen::Index i = 0; i < x.v.size(); ++i) out << ',' << format_real(x.v[i]);
    }
    out << '\n';
  }
}

double round_down_2sig(double x) {
  if (x == 0.0 || !std::isfinite(x)) {
    return x;
  }
  const double step = two_sig_step(x);
  return std::floor(x / step) * step;
}

double round_up_2sig(double x) {
  if (x == 0.0 || !std::isfinite(x)) {
    return x;
  }
  const double step = two_sig_step(x);
  return std::ceil(x / step) * step;
}

void write_svg(std::ostream& out, const PlotSeries& series) {
  if (series.x.size() != series.y.size() || series.x.empty()) {
    throw Error(Errc::DegenerateInput, "plot needs equally many x and y values, at least one");
  }
  for (std::size_t i = 0; i < series.x.size(); ++i) {
    if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) {
      throw Error(Errc::NumericalBlowup, "plot data contains a non-finite value", i);
    }
  }
  const auto xr = axis_range(series.x);
  const auto yr = axis_range(series.y);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  const std::size_t count = series.x.size();
  const std::size_t stride = count > kMaxPlotPoints ? (count + kMaxPlotPoints - 1) / kMaxPlotPoints : 1;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<!-- " << count << " points";
  if (stride > 1) {
    out << ", subsampled with stride " << stride;
  }
  out << " -->\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << escape(series.title) << "</text>\n";
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(series.x_label)
      << "</text>\n";
  out << "<text x=\"20\" y=\"" << kMarginTop + plot_h / 2 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 20 " << kMarginTop + plot_h / 2
      << ")\">" << escape(series.y_label) << "</text>\n";
  const double tick_y = kMarginTop + plot_h + 18;
  out << "<text x=\"" << kMarginLeft << "\" y=\"" << tick_y
      << "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"12\">" << label_number(xr.lo)
      << "</text>\n";
  out << "<text x=\"" << kMarginLeft + plot_w << "\" y=\"" << tick_y
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label_number(xr.hi)
      << "</text>\n";
  out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + plot_h
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label_number(yr.lo)
      << "</text>\n";
  out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label_number(yr.hi)
      << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1\" points=\"";
  bool first = true;
  for (std::size_t i = 0; i < count; i += stride) {
    if (!first) out << ' ';
    first = false;
    out << fixed2(px(series.x[i])) << ',' << fixed2(py(series.y[i]));
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace frachp
