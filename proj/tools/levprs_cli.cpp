// Command-line front end: rate tables, verification runs, the least-squares
// benchmark and the deblurring demo.

#include "levprs/harness.hpp"
#include "levprs/leverage.hpp"
#include "levprs/proxlib.hpp"
#include "levprs/rates.hpp"
#include "levprs/restoration.hpp"
#include "levprs/solvers.hpp"
#include "levprs/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace levprs;
using nlohmann::json;

namespace {

std::string default_output_dir() {
  const char* env = std::getenv("LEVPRS_OUTPUT_DIR");
  return env && *env ? env : ".";
}

void add_regularity(CLI::App* cmd, RegularityParams& reg) {
  cmd->add_option("--rho", reg.rho, "strong convexity of f")->required();
  cmd->add_option("--alpha", reg.alpha, "cocoercivity of grad f")->required();
  cmd->add_option("--mu", reg.mu, "strong convexity of g")->required();
  cmd->add_option("--beta", reg.beta, "cocoercivity of grad g")->required();
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

int cmd_rates(const RegularityParams& reg, std::optional<double> delta, std::optional<double> eta,
              std::optional<double> tau) {
  validate_regularity(reg, ValidationMode::leveraged);
  LeverageParams lp = simple_optimal_params(reg);
  if (delta) lp = optimal_params(reg, *delta);
  if (eta) lp.eta = *eta;
  if (tau) lp.tau = *tau;
  validate_leverage(lp, reg);
  const RateBundle b = rate_bundle(lp, reg);
  std::printf("delta %.10g  eta %.10g  tau %.10g\n", lp.delta, lp.eta, lp.tau);
  std::printf("r1 %.10g  r2 %.10g  r %.10g  r* %.10g\n", b.r1, b.r2, b.r, b.r_star);
  std::printf("delta* %.10g\n\n", delta_star(reg));
  const DominanceReport d = dominance_report(reg);
  for (const MethodRate& m : d.entries) std::printf("%-12s %s\n", m.method.c_str(), fmt(m.rate).c_str());
  std::printf("\nleveraged strictly best: %s\n", d.leveraged_strictly_best ? "yes" : "no");
  return 0;
}

int cmd_tight(const RegularityParams& reg, int steps) {
  const TightCheckResult r = run_tight_check(reg, steps);
  std::printf("r* %.17g\n", r.r_star);
  for (std::size_t n = 0; n < r.ratios.size(); ++n) std::printf("%3zu %.17g\n", n + 1, r.ratios[n]);
  std::printf("max deviation %.3e\n", r.max_deviation);
  return 0;
}

int cmd_sweep(const RegularityParams& reg, int grid) {
  const double dev = rate_constancy_check(reg, grid);
  std::printf("r* %.17g\nmax |r(delta) - r*| over %d shifts: %.3e\n", optimal_rate(reg), grid, dev);
  return 0;
}

std::array<int, 3> parse_dims(const std::string& text) {
  std::array<int, 3> d{};
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream in(text);
  if (!(in >> d[0] >> sep1 >> d[1] >> sep2 >> d[2]) || sep1 != ',' || sep2 != ',') {
    throw Error(ErrorKind::InvalidInput, "dims must look like m,n,p: '" + text + "'");
  }
  return d;
}

int cmd_bench(const std::vector<std::string>& dims, int reps, std::uint64_t seed, double tol,
              int max_iter, const std::string& out_dir) {
  BenchmarkConfig config;
  config.dims_list.clear();
  for (const std::string& d : dims) config.dims_list.push_back(parse_dims(d));
  config.repetitions = reps;
  config.seed = seed;
  config.tol = tol;
  config.max_iter = max_iter;
  const BenchmarkReport report = run_academic_benchmark(config);
  std::cout << report.table();
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / "academic_benchmark.csv").string();
  std::ofstream(path) << report.csv();
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

Matrix json_matrix(const json& j) {
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j.at(i).size()) != cols) {
      throw Error(ErrorKind::ShapeMismatch, "ragged matrix in problem file");
    }
    for (Index k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

Vector json_vector(const json& j, Index n) {
  if (j.is_null()) return Vector::Zero(n);
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

// {"A": [[..]], "a": [..], "B": [[..]], "b": [..], "method": "prs-lev" | "prs" | "drs" |
//  "fista1" | "fista2", optional "delta", "eta", "tau", "lambda", "tol", "max_iter"}
int cmd_solve(const std::string& file, const std::string& out_dir) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IOError, "cannot open " + file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IOError, std::string("malformed problem file: ") + e.what());
  }
  const Matrix A = json_matrix(j.at("A"));
  const Matrix B = json_matrix(j.at("B"));
  LeastSquaresFn f(A, json_vector(j.value("a", json()), A.rows()));
  LeastSquaresFn g(B, json_vector(j.value("b", json()), B.rows()));
  const RegularityParams reg{f.moduli().rho, f.moduli().alpha, g.moduli().rho, g.moduli().alpha};
  const Eigen::LLT<Matrix> llt(f.normal_matrix() + g.normal_matrix());
  std::optional<Vector> solution;
  if (llt.info() == Eigen::Success) solution = llt.solve(f.normal_rhs() + g.normal_rhs());
  CompositeProblem problem(f.as_prox_function("f"), g.as_prox_function("g"), reg, solution);

  SolverConfig sc;
  sc.tol = j.value("tol", 1e-10);
  sc.max_iter = j.value("max_iter", 100000);
  const Vector z0 = Vector::Zero(A.cols());
  const std::string method = j.value("method", "prs-lev");
  SolveResult r;
  if (method == "prs-lev") {
    LeverageParams lp = simple_optimal_params(reg);
    if (j.contains("delta")) lp = optimal_params(reg, j["delta"].get<double>());
    if (j.contains("eta")) lp.eta = j["eta"].get<double>();
    if (j.contains("tau")) lp.tau = j["tau"].get<double>();
    r = prs_lev_solve(problem, lp, sc, z0);
  } else if (method == "prs") {
    const double tau = j.contains("tau") ? j["tau"].get<double>() : classical_prs_optimal(reg.f()).tau;
    r = prs_classic_solve(problem, tau, sc, z0);
  } else if (method == "drs") {
    const DrsParams p = drs_optimal_rate(reg, j.contains("tau") ? std::optional<double>(j["tau"].get<double>()) : std::nullopt);
    r = drs_solve(problem, p.tau, j.value("lambda", p.lambda), sc, z0);
  } else if (method == "fista1" || method == "fista2") {
    r = fista_solve(problem, method == "fista1" ? FistaMode::forward_on_f : FistaMode::forward_on_g, sc, z0);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown method '" + method + "'");
  }
  json out;
  out["method"] = method;
  out["status"] = to_string(r.trace.status);
  out["iterations"] = r.trace.iterations;
  out["x"] = std::vector<double>(r.x.data(), r.x.data() + r.x.size());
  out["regularity"] = {{"rho", reg.rho}, {"alpha", reg.alpha}, {"mu", reg.mu}, {"beta", reg.beta}};
  std::cout << out.dump(2) << "\n";
  if (!r.trace.records.empty()) {
    std::filesystem::create_directories(out_dir);
    write_trace(r.trace, (std::filesystem::path(out_dir) / ("trace_" + method + ".csv")).string());
  }
  return 0;
}

int cmd_restore(RestorationConfig config) {
  const RestorationReport report = run_restoration_demo(config);
  const RegularityParams& reg = report.regularity;
  std::printf("rho %.4g  alpha %.4g  mu %.4g  beta %.4g\n", reg.rho, reg.alpha, reg.mu, reg.beta);
  std::printf("%-8s %8s %10s %12s %14s\n", "method", "iters", "time (s)", "rate", "|x-x*|/|x*|");
  for (const RestorationRun& run : report.runs) {
    if (!run.defined) {
      std::printf("%-8s %8s   (%s)\n", run.method.c_str(), "-", run.reason.c_str());
      continue;
    }
    std::printf("%-8s %8d %10.3f %12.6f %14.3e\n", run.method.c_str(), run.iterations, run.seconds,
                run.rate, run.distance_to_reference);
  }
  if (config.output_dir) std::printf("outputs in %s\n", config.output_dir->c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leveraged Peaceman-Rachford splitting tools"};
  app.require_subcommand(1);
  std::string out_dir = default_output_dir();
  app.add_option("--out", out_dir, "output directory (default $LEVPRS_OUTPUT_DIR or .)");

  RegularityParams reg;
  std::optional<double> delta;
  std::optional<double> eta;
  std::optional<double> tau;
  auto* rates = app.add_subcommand("rates", "rates and baseline comparison for given moduli");
  add_regularity(rates, reg);
  rates->add_option("--delta", delta, "shift (default: delta*)");
  rates->add_option("--eta", eta, "dual shift override");
  rates->add_option("--tau", tau, "step override");

  int steps = 20;
  auto* tight = app.add_subcommand("tight-check", "per-step ratios on the diagonal 2-D example");
  add_regularity(tight, reg);
  tight->add_option("--steps", steps);

  int grid = 101;
  auto* sweep = app.add_subcommand("sweep-delta", "optimal rate across the shift interval");
  add_regularity(sweep, reg);
  sweep->add_option("--grid", grid);

  std::vector<std::string> dims{"20,20,20"};
  int reps = 30;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_iter = 200000;
  auto* bench = app.add_subcommand("bench-academic", "random least-squares benchmark");
  bench->add_option("--dims", dims, "one or more m,n,p triples");
  bench->add_option("--reps", reps);
  bench->add_option("--seed", seed);
  bench->add_option("--tol", tol);
  bench->add_option("--max-iter", max_iter);

  std::string problem_file;
  auto* solve = app.add_subcommand("solve", "solve a least-squares pair read from JSON");
  solve->add_option("--problem-file", problem_file)->required()->check(CLI::ExistingFile);

  RestorationConfig rc;
  std::string image;
  bool write_outputs = true;
  auto* restore = app.add_subcommand("restore", "deblurring with a Haar-Huber prior");
  restore->add_option("--image", image, "PGM input (default: synthetic 64x64)");
  restore->add_option("--sigma", rc.sigma);
  restore->add_option("--lambda", rc.lambda);
  restore->add_option("--epsilon", rc.epsilon);
  restore->add_option("--noise-variance", rc.noise_variance);
  restore->add_option("--levels", rc.haar_levels);
  restore->add_option("--seed", rc.seed);
  restore->add_option("--max-iter", rc.max_iter);
  restore->add_flag("!--no-output", write_outputs, "skip writing images and traces");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*rates) return cmd_rates(reg, delta, eta, tau);
    if (*tight) return cmd_tight(reg, steps);
    if (*sweep) return cmd_sweep(reg, grid);
    if (*bench) return cmd_bench(dims, reps, seed, tol, max_iter, out_dir);
    if (*solve) return cmd_solve(problem_file, out_dir);
    if (*restore) {
      if (!image.empty()) rc.image_path = image;
      if (write_outputs) rc.output_dir = out_dir;
      return cmd_restore(rc);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
