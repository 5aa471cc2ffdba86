#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "frachp/core.hpp"

namespace frachp {

/// Shortest stable text for CSV output: 17 significant digits (%.17g).
std::string format_real(double x);

/// Header `step,s,q_1..q_n,p_1..p_n[,v_1..v_n]`, one row per grid point.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool include_velocity);

/// Plots above this many points are stride-subsampled.
inline constexpr std::size_t kMaxPlotPoints = 100000;

struct PlotSeries {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Lower/upper bound rounded outward to two significant digits.
double round_down_2sig(double x);
double round_up_2sig(double x);

/// SVG 1.1 polyline plot with a frame fixed by the rounded data bounds.
/// Output is a pure function of the series.
void write_svg(std::ostream& out, const PlotSeries& series);

}  // namespace frachp
