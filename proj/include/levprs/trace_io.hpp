#pragma once

#include "levprs/core.hpp"

#include <string>
#include <vector>

namespace levprs {

/// CSV with header iter,residual,dist,ratio; unknown values are empty fields.
std::string trace_to_csv(const SolveTrace& trace);
SolveTrace trace_from_csv(const std::string& text);

void write_trace(const SolveTrace& trace, const std::string& path);
SolveTrace read_trace(const std::string& path);

/// One curve of a convergence plot: the normalized or absolute distance to
/// the fixed point per iteration.
struct PlotSeries {
  std::string label;
  SolveTrace trace;
  bool normalized = true;  // divide by the initial distance
};

/// Straight line rate^n * start on a log scale.
struct BoundLine {
  std::string label;
  double rate = 0.0;
  double start = 1.0;
  int iterations = 0;
};

std::vector<double> bound_line_values(const BoundLine& line);

/// Self-contained gnuplot script with inline data blocks.
std::string plot_script(const std::vector<PlotSeries>& series, const std::vector<BoundLine>& bounds,
                        const std::string& title);
void write_plot_script(const std::vector<PlotSeries>& series, const std::vector<BoundLine>& bounds,
                       const std::string& title, const std::string& path);

}  // namespace levprs
