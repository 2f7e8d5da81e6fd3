#include "levprs/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace levprs {

namespace {

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<double> parse_optional(const std::string& field, int line) {
  if (field.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::IOError, "bad number '" + field + "' on line " + std::to_string(line));
  }
}

void write_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IOError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IOError, "write to " + path + " failed");
}

}  // namespace

std::string trace_to_csv(const SolveTrace& trace) {
  if (trace.records.empty()) throw Error(ErrorKind::InvalidInput, "trace is empty");
  std::string out = "iter,residual,dist,ratio\n";
  for (const TraceRecord& r : trace.records) {
    out += std::to_string(r.iter);
    out += ',';
    out += format(r.residual);
    out += ',';
    if (r.dist_to_fixed_point) out += format(*r.dist_to_fixed_point);
    out += ',';
    if (r.contraction_ratio) out += format(*r.contraction_ratio);
    out += '\n';
  }
  return out;
}

SolveTrace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "iter,residual,dist,ratio") {
    throw Error(ErrorKind::IOError, "missing trace header");
  }
  SolveTrace trace;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream cells(line);
    while (std::getline(cells, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) {
      throw Error(ErrorKind::IOError, "expected 4 fields on line " + std::to_string(lineno));
    }
    TraceRecord r;
    const auto iter = parse_optional(fields[0], lineno);
    const auto residual = parse_optional(fields[1], lineno);
    if (!iter || !residual) {
      throw Error(ErrorKind::IOError, "iter and residual are required on line " +
                                          std::to_string(lineno));
    }
    r.iter = static_cast<int>(*iter);
    r.residual = *residual;
    r.dist_to_fixed_point = parse_optional(fields[2], lineno);
    r.contraction_ratio = parse_optional(fields[3], lineno);
    trace.records.push_back(r);
  }
  trace.iterations = trace.records.empty() ? 0 : trace.records.back().iter;
  return trace;
}

void write_trace(const SolveTrace& trace, const std::string& path) {
  write_file(trace_to_csv(trace), path);
}

SolveTrace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IOError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return trace_from_csv(buf.str());
}

std::vector<double> bound_line_values(const BoundLine& line) {
  std::vector<double> out(line.iterations + 1);
  for (int n = 0; n <= line.iterations; ++n) out[n] = std::pow(line.rate, n) * line.start;
  return out;
}

std::string plot_script(const std::vector<PlotSeries>& series, const std::vector<BoundLine>& bounds,
                        const std::string& title) {
  std::ostringstream out;
  int block = 0;
  std::vector<std::string> plots;
  for (const PlotSeries& s : series) {
    const std::string name = "$series" + std::to_string(block++);
    out << name << " << EOD\n";
    const double scale =
        s.normalized && s.trace.initial_distance && *s.trace.initial_distance > 0.0
            ? 1.0 / *s.trace.initial_distance
            : 1.0;
    if (s.trace.initial_distance) out << "0 " << format(*s.trace.initial_distance * scale) << "\n";
    for (const TraceRecord& r : s.trace.records) {
      if (r.dist_to_fixed_point) out << r.iter << ' ' << format(*r.dist_to_fixed_point * scale) << "\n";
    }
    out << "EOD\n";
    plots.push_back(name + " using 1:2 with lines title '" + s.label + "'");
  }
  for (const BoundLine& b : bounds) {
    const std::string name = "$bound" + std::to_string(block++);
    out << name << " << EOD\n";
    const std::vector<double> values = bound_line_values(b);
    for (std::size_t n = 0; n < values.size(); ++n) out << n << ' ' << format(values[n]) << "\n";
    out << "EOD\n";
    plots.push_back(name + " using 1:2 with lines dashtype 2 title '" + b.label + "'");
  }
  out << "set title '" << title << "'\n";
  out << "set logscale y\nset format y '%.0e'\nset xlabel 'iteration'\nset ylabel 'error'\n";
  out << "plot ";
  for (std::size_t k = 0; k < plots.size(); ++k) out << (k ? ", \\\n     " : "") << plots[k];
  out << "\npause mouse close\n";
  return out.str();
}

void write_plot_script(const std::vector<PlotSeries>& series, const std::vector<BoundLine>& bounds,
                       const std::string& title, const std::string& path) {
  write_file(plot_script(series, bounds, title), path);
}

}  // namespace levprs
