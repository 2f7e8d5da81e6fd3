#include "levprs/restoration.hpp"

#include "levprs/harness.hpp"
#include "levprs/proxlib.hpp"
#include "levprs/rates.hpp"
#include "levprs/solvers.hpp"
#include "levprs/trace_io.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

namespace levprs {

GrayImage synthetic_image(Index rows, Index cols) {
  GrayImage img{rows, cols, Vector::Constant(rows * cols, 0.1)};
  const double cr = 0.65 * rows;
  const double cc = 0.65 * cols;
  const double radius = 0.2 * static_cast<double>(std::min(rows, cols));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double v = 0.1;
      if (i >= rows / 8 && i < rows / 2 && j >= cols / 8 && j < cols / 2) v = 0.9;
      const double di = static_cast<double>(i) - cr;
      const double dj = static_cast<double>(j) - cc;
      if (di * di + dj * dj <= radius * radius) v = 0.6;
      if (i >= (4 * rows) / 5 && i < (19 * rows) / 20) {
        v = 0.1 + 0.8 * static_cast<double>(j) / static_cast<double>(std::max<Index>(cols - 1, 1));
      }
      img.pixels(i * cols + j) = v;
    }
  }
  return img;
}

const RestorationRun* RestorationReport::find(const std::string& method) const {
  for (const RestorationRun& r : runs) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

namespace {

template <class Solve>
void timed_run(RestorationRun& run, Solve&& solve) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult r = solve();
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.defined = true;
  run.iterations = r.trace.iterations;
  run.status = r.trace.status;
  run.trace = std::move(r.trace);
  run.x = std::move(r.x);
}

}  // namespace

RestorationReport run_restoration_demo(const RestorationConfig& config) {
  RestorationReport report;
  report.clean = config.image_path ? read_pgm(*config.image_path)
                                   : synthetic_image(config.rows, config.cols);
  const Index rows = report.clean.rows;
  const Index cols = report.clean.cols;

  const BlurOperator blur = config.sigma > 0.0
                                ? BlurOperator::gaussian(config.kernel_size, config.sigma, rows, cols)
                                : BlurOperator::identity(rows, cols);
  Rng rng(config.seed);
  Vector observed = blur.apply(report.clean.pixels);
  const double noise_sd = std::sqrt(config.noise_variance);
  if (noise_sd > 0.0) {
    for (Index k = 0; k < observed.size(); ++k) observed(k) += noise_sd * rng.normal();
  }
  report.observed = {rows, cols, observed};

  const HaarTransform haar(rows, cols, config.haar_levels);
  const BlurLeastSquaresFn fit(blur, observed);
  const HuberFn prior(config.epsilon, config.lambda, rows * cols, haar);
  const Moduli mf = fit.moduli();
  const Moduli mg = prior.moduli();
  report.regularity = {mf.strong_convexity, mf.cocoercivity, mg.strong_convexity,
                       mg.cocoercivity};
  const RegularityParams& reg = report.regularity;

  CompositeProblem problem(fit.as_prox_function(), prior.as_prox_function(), reg);

  bool leveraged_ok = true;
  try {
    validate_regularity(reg, ValidationMode::leveraged);
  } catch (const Error&) {
    leveraged_ok = false;
  }

  // Reference minimizer.
  const Vector& start = observed;
  {
    SolverConfig sc;
    sc.max_iter = config.reference_iter;
    sc.stopping = StoppingRule::residual;
    sc.tol = 1e-14 * (1.0 + observed.norm());
    if (leveraged_ok) {
      report.reference = prs_lev_solve(problem, simple_optimal_params(reg), sc, start).x;
    } else {
      report.reference = fista_solve(problem, FistaMode::forward_on_f, sc, start).x;
    }
  }
  const Vector& xref = report.reference;
  CompositeProblem solved(fit.as_prox_function(), prior.as_prox_function(), reg, xref);

  SolverConfig sc;
  sc.max_iter = config.max_iter;
  sc.tol = config.tol;
  sc.stopping = StoppingRule::normalized_error;

  for (const std::string& method : config.methods) {
    RestorationRun run;
    run.method = method;
    if (method == "PRS-lev") {
      if (!leveraged_ok) {
        run.reason = "f and g have no strong convexity to shift";
      } else {
        const LeverageParams lp = simple_optimal_params(reg);
        run.rate = leveraged_rate(lp, reg);
        timed_run(run, [&] { return prs_lev_solve(solved, lp, sc, start); });
      }
    } else if (method == "PRS") {
      if (!(reg.rho > 0.0)) {
        run.reason = "f is not strongly convex";
      } else {
        const StepRate sr = classical_prs_optimal(reg.f());
        run.rate = sr.rate;
        timed_run(run, [&] { return prs_classic_solve(solved, sr.tau, sc, start); });
      }
    } else if (method == "FISTA1") {
      run.rate = reg.rho + reg.mu > 0.0 ? fista_rate(reg.alpha, reg.rho + reg.mu, reg.mu) : 1.0;
      timed_run(run, [&] { return fista_solve(solved, FistaMode::forward_on_f, sc, start); });
    } else if (method == "FISTA2") {
      run.rate = reg.rho + reg.mu > 0.0 ? fista_rate(reg.beta, reg.rho + reg.mu, reg.rho) : 1.0;
      timed_run(run, [&] { return fista_solve(solved, FistaMode::forward_on_g, sc, start); });
    } else {
      throw Error(ErrorKind::InvalidInput, "unknown restoration method '" + method + "'");
    }
    if (run.defined) {
      run.distance_to_reference = (run.x - xref).norm() / std::max(xref.norm(), 1e-300);
    }
    report.runs.push_back(std::move(run));
  }

  if (config.output_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(*config.output_dir);
    fs::create_directories(dir);
    write_pgm(report.clean, (dir / "clean.pgm").string());
    write_pgm(report.observed, (dir / "observed.pgm").string());
    write_pgm({rows, cols, xref}, (dir / "reference.pgm").string());
    std::vector<PlotSeries> series;
    std::vector<BoundLine> bounds;
    for (const RestorationRun& run : report.runs) {
      if (!run.defined) continue;
      write_pgm({rows, cols, run.x}, (dir / ("restored_" + run.method + ".pgm")).string());
      if (!run.trace.records.empty()) {
        write_trace(run.trace, (dir / ("trace_" + run.method + ".csv")).string());
      }
      series.push_back({run.method, run.trace, true});
      if (run.rate < 1.0) bounds.push_back({run.method + " bound", run.rate, 1.0, run.iterations});
    }
    write_plot_script(series, bounds, "normalized error", (dir / "errors.gp").string());
  }
  return report;
}

}  // namespace levprs
