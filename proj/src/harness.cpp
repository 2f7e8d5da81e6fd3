#include "levprs/harness.hpp"

#include "levprs/leverage.hpp"
#include "levprs/rates.hpp"
#include "levprs/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace levprs {

double Rng::normal() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Vector Rng::uniform_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = uniform();
  return v;
}

// Column-major fill, the order Julia's rand(n, m) uses.
Matrix Rng::uniform_matrix(Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = uniform();
  }
  return out;
}

LeastSquaresInstance generate_least_squares_instance(const InstanceSpec& spec) {
  if (spec.m <= 0 || spec.n <= 0 || spec.p <= 0) {
    throw Error(ErrorKind::InvalidInput, "instance dimensions must be positive");
  }
  Rng rng(spec.seed);
  Matrix A = spec.scale_A * rng.uniform_matrix(spec.n, spec.m);
  Matrix B = spec.scale_B * rng.uniform_matrix(spec.p, spec.m);
  Vector a = spec.a.value_or(Vector::Zero(spec.n));
  Vector b = spec.b.value_or(Vector::Zero(spec.p));
  LeastSquaresFn f(std::move(A), std::move(a));
  LeastSquaresFn g(std::move(B), std::move(b));

  const Eigen::LLT<Matrix> llt(f.normal_matrix() + g.normal_matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSystem, "A^T A + B^T B is singular");
  }
  Vector solution = llt.solve(f.normal_rhs() + g.normal_rhs());

  const LeastSquaresModuli mf = f.moduli();
  const LeastSquaresModuli mg = g.moduli();
  const RegularityParams reg{mf.rho, mf.alpha, mg.rho, mg.alpha};
  ProxFunction pf = f.as_prox_function("f");
  ProxFunction pg = g.as_prox_function("g");
  auto oracle = [f, solution](const LeverageParams& lp) {
    const double s = lp.tau + lp.eta;
    return Vector((1.0 + lp.delta * s) * solution + s * f.gradient(solution));
  };
  CompositeProblem problem(std::move(pf), std::move(pg), reg, solution, oracle);
  return {std::move(f), std::move(g), std::move(problem)};
}

CompositeProblem generate_instance(const InstanceSpec& spec) {
  return generate_least_squares_instance(spec).problem;
}

Vector fixed_point_oracle(const CompositeProblem& problem, const LeverageParams& lp) {
  if (!problem.solution()) throw Error(ErrorKind::InvalidInput, "problem has no known solution");
  return leveraged_fixed_point(problem.f(), *problem.solution(), lp);
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::uint64_t instance_seed(std::uint64_t base, std::size_t dims_index, int rep) {
  // splitmix64 finalizer over a simple combination.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (dims_index * 100003ULL + rep + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <class Solve>
MethodOutcome timed(Solve&& solve) {
  MethodOutcome out;
  out.defined = true;
  const auto start = std::chrono::steady_clock::now();
  const SolveResult r = solve();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.iterations = r.trace.iterations;
  out.status = r.trace.status;
  if (!r.trace.records.empty() && r.trace.records.back().dist_to_fixed_point) {
    out.final_error = *r.trace.records.back().dist_to_fixed_point;
  }
  return out;
}

constexpr const char* kMethods[] = {"PRS-lev", "PRS1", "PRS2"};

std::array<MethodOutcome, 3> run_instance(const CompositeProblem& problem, const Vector& z0,
                                          const BenchmarkConfig& config) {
  SolverConfig sc;
  sc.tol = config.tol;
  sc.max_iter = config.max_iter;
  sc.stopping = StoppingRule::fixed_point_distance;
  const RegularityParams& reg = problem.regularity();
  std::array<MethodOutcome, 3> out;

  bool leveraged_ok = true;
  try {
    validate_regularity(reg, ValidationMode::leveraged);
  } catch (const Error&) {
    leveraged_ok = false;
  }
  if (leveraged_ok) {
    const LeverageParams lp = simple_optimal_params(reg);
    out[0] = timed([&] { return prs_lev_solve(problem, lp, sc, z0); });
  }
  if (reg.rho > 0.0 && reg.alpha > 0.0) {
    const double tau = std::sqrt(reg.alpha / reg.rho);
    out[1] = timed([&] { return prs_classic_solve(problem, tau, sc, z0); });
  }
  if (reg.mu > 0.0 && reg.beta > 0.0) {
    const double tau = std::sqrt(reg.beta / reg.mu);
    out[2] = timed([&] { return prs_classic_solve(problem, tau, sc, z0); });
  }
  return out;
}

}  // namespace

BenchmarkReport run_academic_benchmark(const BenchmarkConfig& config) {
  if (config.repetitions < 1) throw Error(ErrorKind::InvalidInput, "repetitions must be >= 1");
  BenchmarkReport report;
  for (std::size_t d = 0; d < config.dims_list.size(); ++d) {
    const auto dims = config.dims_list[d];
    const int reps = config.repetitions;
    std::vector<std::array<MethodOutcome, 3>> outcomes(reps);
    std::vector<RegularityParams> regs(reps);
    std::vector<std::string> failures(reps);

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
      try {
        InstanceSpec spec;
        spec.m = dims[0];
        spec.n = dims[1];
        spec.p = dims[2];
        spec.seed = instance_seed(config.seed, d, r);
        const CompositeProblem problem = generate_instance(spec);
        Rng start_rng(spec.seed ^ 0x5DEECE66DULL);
        const Vector z0 = start_rng.uniform_vector(spec.m);
        regs[r] = problem.regularity();
        outcomes[r] = run_instance(problem, z0, config);
      } catch (const std::exception& e) {
        failures[r] = e.what();
      }
    }
    for (const std::string& msg : failures) {
      if (!msg.empty()) throw Error(ErrorKind::InvalidInput, "benchmark repetition failed: " + msg);
    }

    DimsSummary row;
    row.dims = dims;
    for (const RegularityParams& reg : regs) {
      row.average.rho += reg.rho / reps;
      row.average.alpha += reg.alpha / reps;
      row.average.mu += reg.mu / reps;
      row.average.beta += reg.beta / reps;
    }
    for (int k = 0; k < 3; ++k) {
      MethodSummary ms;
      ms.method = kMethods[k];
      ms.defined = true;
      std::vector<double> iters;
      for (int r = 0; r < reps; ++r) {
        const MethodOutcome& o = outcomes[r][k];
        ms.runs.push_back(o);
        if (!o.defined) {
          ms.defined = false;
          continue;
        }
        iters.push_back(o.iterations);
        ms.mean_seconds += o.seconds / reps;
        if (o.status == SolveStatus::converged) ++ms.converged;
      }
      if (ms.defined) {
        for (double it : iters) ms.mean_iterations += it / reps;
        ms.median_iterations = median(iters);
      } else {
        ms.mean_seconds = 0.0;
        ms.converged = 0;
      }
      row.methods.push_back(std::move(ms));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string BenchmarkReport::csv() const {
  std::ostringstream out;
  out << "m,n,p,method,mean_iterations,median_iterations,converged,avg_rho,avg_alpha,avg_mu,"
         "avg_beta\n";
  char buf[512];
  for (const DimsSummary& row : rows) {
    for (const MethodSummary& ms : row.methods) {
      if (ms.defined) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%s,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g\n",
                      row.dims[0], row.dims[1], row.dims[2], ms.method.c_str(),
                      ms.mean_iterations, ms.median_iterations, ms.converged, row.average.rho,
                      row.average.alpha, row.average.mu, row.average.beta);
      } else {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%s,-,-,-,%.17g,%.17g,%.17g,%.17g\n",
                      row.dims[0], row.dims[1], row.dims[2], ms.method.c_str(), row.average.rho,
                      row.average.alpha, row.average.mu, row.average.beta);
      }
      out << buf;
    }
  }
  return out.str();
}

std::string BenchmarkReport::table() const {
  std::ostringstream out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-14s %-10s %-10s %-10s %-10s %-8s %12s %12s %12s\n", "(m,n,p)",
                "rho", "alpha", "mu", "beta", "method", "mean iters", "median", "mean time");
  out << buf;
  for (const DimsSummary& row : rows) {
    char dims[64];
    std::snprintf(dims, sizeof dims, "(%d,%d,%d)", row.dims[0], row.dims[1], row.dims[2]);
    for (const MethodSummary& ms : row.methods) {
      if (ms.defined) {
        std::snprintf(buf, sizeof buf,
                      "%-14s %-10.3g %-10.3g %-10.3g %-10.3g %-8s %12.1f %12.1f %11.2es\n", dims,
                      row.average.rho, row.average.alpha, row.average.mu, row.average.beta,
                      ms.method.c_str(), ms.mean_iterations, ms.median_iterations,
                      ms.mean_seconds);
      } else {
        std::snprintf(buf, sizeof buf, "%-14s %-10.3g %-10.3g %-10.3g %-10.3g %-8s %12s %12s %12s\n",
                      dims, row.average.rho, row.average.alpha, row.average.mu, row.average.beta,
                      ms.method.c_str(), "-", "-", "-");
      }
      out << buf;
    }
  }
  return out.str();
}

TightCheckResult run_tight_check(const RegularityParams& reg, int steps, const Vector& z0) {
  validate_regularity(reg, ValidationMode::leveraged);
  if (!(reg.alpha > 0.0) || !(reg.beta > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "the tight example needs alpha > 0 and beta > 0");
  }
  if (steps < 1) throw Error(ErrorKind::InvalidInput, "steps must be at least 1");
  if (z0.size() != 2) throw Error(ErrorKind::DimensionMismatch, "the tight example lives in R^2");

  auto diagonal = [](double c1, double c2) {
    QuadraticFunction q;
    q.offset = 0.0;
    q.linear = Vector::Zero(2);
    q.hessian = Eigen::Vector2d(c1, c2).asDiagonal();
    return q;
  };
  const QuadraticFunction qf = diagonal(reg.rho, 1.0 / reg.alpha);
  const QuadraticFunction qg = diagonal(reg.mu, 1.0 / reg.beta);
  CompositeProblem problem(qf.as_prox_function(reg.f()), qg.as_prox_function(reg.g()), reg,
                           Vector::Zero(2));

  SolverConfig config;
  config.max_iter = steps;
  config.stopping = StoppingRule::residual;
  config.tol = std::numeric_limits<double>::denorm_min();
  const SolveResult run = prs_lev_solve(problem, simple_optimal_params(reg), config, z0);

  TightCheckResult out;
  out.r_star = optimal_rate(reg);
  for (const TraceRecord& rec : run.trace.records) {
    if (!rec.contraction_ratio) continue;
    out.ratios.push_back(*rec.contraction_ratio);
    out.max_deviation = std::max(out.max_deviation, std::abs(*rec.contraction_ratio - out.r_star));
  }
  return out;
}

GridMinimum grid_search_parameters(const RegularityParams& reg, double delta,
                                   const GridSearchOptions& options) {
  validate_regularity(reg, ValidationMode::leveraged);
  if (!(delta >= -reg.rho) || !(delta <= reg.mu)) {
    throw Error(ErrorKind::DeltaOutOfRange, "delta must lie in [-rho, mu]");
  }
  if (options.nodes < 5 || options.refinements < 0) {
    throw Error(ErrorKind::InvalidInput, "grid search needs at least 5 nodes per axis");
  }
  const double eta_lo = -reg.alpha / (1.0 + reg.alpha * delta);
  const double eta_hi = reg.beta / (1.0 - reg.beta * delta);
  const double scale = std::sqrt((reg.alpha + reg.beta) / (reg.rho + reg.mu));

  ParameterGrid grid{0.0, 4.0 * scale, options.nodes, eta_lo, eta_hi, options.nodes};
  GridMinimum best = kernels::grid_min_rate(reg, delta, grid);
  for (int grow = 0; grow < 60 && best.tau >= grid.tau_hi; ++grow) {
    grid.tau_hi *= 2.0;
    best = kernels::grid_min_rate(reg, delta, grid);
  }
  for (int level = 0; level < options.refinements; ++level) {
    const double dt = 2.0 * (grid.tau_hi - grid.tau_lo) / (grid.n_tau - 1);
    const double de = 2.0 * (grid.eta_hi - grid.eta_lo) / (grid.n_eta - 1);
    grid.tau_lo = std::max(0.0, best.tau - dt);
    grid.tau_hi = best.tau + dt;
    grid.eta_lo = std::max(eta_lo, best.eta - de);
    grid.eta_hi = std::min(eta_hi, best.eta + de);
    best = kernels::grid_min_rate(reg, delta, grid);
  }
  return best;
}

}  // namespace levprs
