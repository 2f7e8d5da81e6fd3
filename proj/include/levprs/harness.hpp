#pragma once

#include "levprs/core.hpp"
#include "levprs/kernels.hpp"
#include "levprs/proxlib.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace levprs {

/// Seedable generator with a fixed, platform-independent output stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Standard normal by Box-Muller.
  double normal();
  Vector uniform_vector(Index n);
  Matrix uniform_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct InstanceSpec {
  int m = 20;  // unknowns
  int n = 20;  // rows of A
  int p = 20;  // rows of B
  double scale_A = 0.5;
  double scale_B = 15.0;
  std::uint64_t seed = 0;
  std::optional<Vector> a;  // zero when unset
  std::optional<Vector> b;
};

/// f = 1/2 |A x - a|^2, g = 1/2 |B x - b|^2, A = scale_A U(0,1)^{n x m},
/// B = scale_B U(0,1)^{p x m}.
struct LeastSquaresInstance {
  LeastSquaresFn f;
  LeastSquaresFn g;
  CompositeProblem problem;
};

LeastSquaresInstance generate_least_squares_instance(const InstanceSpec& spec);
CompositeProblem generate_instance(const InstanceSpec& spec);

/// z* for the leveraged iteration; requires a gradient oracle on f and a
/// known solution.
Vector fixed_point_oracle(const CompositeProblem& problem, const LeverageParams& lp);

struct MethodOutcome {
  bool defined = false;
  int iterations = 0;
  double seconds = 0.0;
  double final_error = 0.0;
  SolveStatus status = SolveStatus::max_iter;
};

struct MethodSummary {
  std::string method;
  bool defined = false;  // hypotheses held on every repetition
  double mean_iterations = 0.0;
  double median_iterations = 0.0;
  double mean_seconds = 0.0;
  int converged = 0;
  std::vector<MethodOutcome> runs;
};

struct DimsSummary {
  std::array<int, 3> dims{};  // (m, n, p)
  RegularityParams average;   // mean rho, alpha, mu, beta over repetitions
  std::vector<MethodSummary> methods;  // PRS-lev, PRS1, PRS2
};

struct BenchmarkConfig {
  std::vector<std::array<int, 3>> dims_list{{20, 20, 20}};
  int repetitions = 30;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_iter = 200000;
};

struct BenchmarkReport {
  std::vector<DimsSummary> rows;
  /// One line per (dims, method); no timings, so equal configs give equal bytes.
  std::string csv() const;
  /// Human-readable table including mean wall time.
  std::string table() const;
};

/// Repetitions run in parallel; results are gathered in (instance, method) order.
BenchmarkReport run_academic_benchmark(const BenchmarkConfig& config);

struct TightCheckResult {
  double max_deviation = 0.0;
  double r_star = 0.0;
  std::vector<double> ratios;
};

/// Runs the leveraged iteration with (delta*, 0, tau*) on the diagonal pair
/// f = rho/2 x1^2 + x2^2/(2 alpha), g = mu/2 x1^2 + x2^2/(2 beta) from z0 and
/// reports max_n |ratio_n - r*|. Needs alpha > 0 and beta > 0.
TightCheckResult run_tight_check(const RegularityParams& reg, int steps,
                                 const Vector& z0 = Vector::Ones(2));

struct GridSearchOptions {
  int nodes = 101;  // per axis
  int refinements = 3;
};

/// Numerical minimization of r1 * r2 over (tau, eta) at fixed delta by
/// repeated grid zooming. The tau box grows until the minimizer is interior.
GridMinimum grid_search_parameters(const RegularityParams& reg, double delta,
                                   const GridSearchOptions& options = {});

}  // namespace levprs
