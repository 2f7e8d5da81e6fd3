#pragma once

#include "levprs/core.hpp"

#include <optional>

namespace levprs {

enum class StoppingRule {
  fixed_point_distance,  // |z_{n+1} - z*| <= tol
  normalized_error,      // |z_{n+1} - z*| / |z_0 - z*| < tol
  residual,              // |p_n - x_n| <= tol
};

struct SolverConfig {
  int max_iter = 1000;
  double tol = 1e-10;
  /// Unset: fixed_point_distance when a fixed point is known, residual otherwise.
  std::optional<StoppingRule> stopping;
  bool record_trace = true;
  /// Divergence is declared once the monitored distance stays above
  /// divergence_factor times its initial value for divergence_window steps.
  double divergence_factor = 10.0;
  int divergence_window = 50;
};

/// One sweep of the leveraged recurrence started from z.
struct IterateState {
  Vector z;       // driving point the step started from
  Vector x;       // prox of f
  Vector y;       // reflected point
  Vector p;       // prox of g
  Vector z_next;  // z_{n+1}
};

IterateState prs_lev_step(const Vector& z, const CompositeProblem& problem,
                          const LeverageParams& lp);

struct SolveResult {
  Vector x;  // primal estimate at the last driving point
  Vector z;  // last driving point
  SolveTrace trace;
};

/// Leveraged Peaceman-Rachford. Uses only prox of the original f and g.
SolveResult prs_lev_solve(const CompositeProblem& problem, const LeverageParams& lp,
                          const SolverConfig& config, const Vector& z0);

/// Which prox is applied to z first. f_first gives z+ = R_g R_f z, the
/// ordering of the leveraged recurrence.
enum class ProxOrder { f_first, g_first };

IterateState prs_classic_step(const Vector& z, const CompositeProblem& problem, double tau,
                              ProxOrder order = ProxOrder::f_first);

SolveResult prs_classic_solve(const CompositeProblem& problem, double tau,
                              const SolverConfig& config, const Vector& z0,
                              ProxOrder order = ProxOrder::f_first);

/// z+ = (1 - lambda) z + lambda R R z.
IterateState drs_step(const Vector& z, const CompositeProblem& problem, double tau, double lambda,
                      ProxOrder order = ProxOrder::f_first);

SolveResult drs_solve(const CompositeProblem& problem, double tau, double lambda,
                      const SolverConfig& config, const Vector& z0,
                      ProxOrder order = ProxOrder::f_first);

/// FISTA 1 takes the gradient step on f and the prox step on g; FISTA 2 the reverse.
enum class FistaMode { forward_on_f, forward_on_g };

struct FistaOptions {
  /// Defaults to the cocoercivity modulus of the forward function.
  std::optional<double> step;
  /// Defaults to (1 - sqrt(q)) / (1 + sqrt(q)) with
  /// q = step (rho + mu) / (1 + step * sigma_backward), or to the classical
  /// t-sequence when q = 0.
  std::optional<double> momentum;
};

SolveResult fista_solve(const CompositeProblem& problem, FistaMode mode,
                        const SolverConfig& config, const Vector& x0,
                        const FistaOptions& options = {});

}  // namespace levprs
