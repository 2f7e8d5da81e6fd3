#include "levprs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace levprs {

namespace {

void check_config(const SolverConfig& config) {
  if (config.max_iter < 1) throw Error(ErrorKind::InvalidInput, "max_iter must be at least 1");
  if (!(config.tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tol must be positive");
}

void check_start(const CompositeProblem& problem, const Vector& start) {
  if (start.size() != problem.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "starting point has the wrong dimension");
  }
}

struct StepOutput {
  Vector z_next;
  double residual = 0.0;
};

// Shared driver: iterates `step` from z0, records the trace and applies the
// stopping and divergence rules. `primal` maps the final driving point to the
// reported primal estimate.
template <class Step, class Primal>
SolveResult run_iteration(const Vector& z0, const std::optional<Vector>& fixed_point,
                          const SolverConfig& config, Step&& step, Primal&& primal) {
  check_config(config);
  const StoppingRule rule = config.stopping.value_or(
      fixed_point ? StoppingRule::fixed_point_distance : StoppingRule::residual);
  if (rule != StoppingRule::residual && !fixed_point) {
    throw Error(ErrorKind::InvalidInput, "stopping rule needs a known fixed point");
  }

  SolveResult result;
  SolveTrace& trace = result.trace;
  std::optional<double> prev_dist;
  if (fixed_point) {
    prev_dist = (z0 - *fixed_point).norm();
    trace.initial_distance = prev_dist;
  }

  Vector z = z0;
  std::optional<double> baseline = trace.initial_distance;
  int above = 0;
  trace.status = SolveStatus::max_iter;

  for (int n = 0; n < config.max_iter; ++n) {
    StepOutput out = step(z);
    std::optional<double> dist;
    std::optional<double> ratio;
    if (fixed_point) {
      dist = (out.z_next - *fixed_point).norm();
      if (*prev_dist > 0.0) ratio = *dist / *prev_dist;
    }
    if (config.record_trace) trace.records.push_back({n + 1, out.residual, dist, ratio});
    z = std::move(out.z_next);
    trace.iterations = n + 1;
    prev_dist = dist;

    bool done = false;
    switch (rule) {
      case StoppingRule::fixed_point_distance: done = *dist <= config.tol; break;
      case StoppingRule::normalized_error:
        done = *trace.initial_distance == 0.0 || *dist / *trace.initial_distance < config.tol;
        break;
      case StoppingRule::residual: done = out.residual <= config.tol; break;
    }
    if (done) {
      trace.status = SolveStatus::converged;
      break;
    }

    const double monitored = dist ? *dist : out.residual;
    if (!std::isfinite(monitored)) {
      trace.status = SolveStatus::diverged;
      break;
    }
    if (!baseline) baseline = monitored;
    above = monitored > config.divergence_factor * *baseline ? above + 1 : 0;
    if (above >= config.divergence_window) {
      trace.status = SolveStatus::diverged;
      break;
    }
  }
  result.x = primal(z);
  result.z = std::move(z);
  return result;
}

std::optional<Vector> known_fixed_point(const CompositeProblem& problem, const LeverageParams& lp) {
  if (problem.has_fixed_point_oracle()) return problem.fixed_point(lp);
  if (problem.solution() && problem.f().has_gradient()) {
    return leveraged_fixed_point(problem.f(), *problem.solution(), lp);
  }
  return std::nullopt;
}

// Fixed point of z+ = R_second R_first z with step tau: x* + tau grad first(x*).
std::optional<Vector> classic_fixed_point(const CompositeProblem& problem, double tau,
                                          ProxOrder order) {
  if (order == ProxOrder::f_first) return known_fixed_point(problem, {0.0, 0.0, tau});
  if (problem.solution() && problem.g().has_gradient()) {
    return leveraged_fixed_point(problem.g(), *problem.solution(), {0.0, 0.0, tau});
  }
  return std::nullopt;
}

}  // namespace

IterateState prs_lev_step(const Vector& z, const CompositeProblem& problem,
                          const LeverageParams& lp) {
  const double tau = lp.tau;
  const double eta = lp.eta;
  const double delta = lp.delta;
  const double plus = tau + eta;
  const double minus = tau - eta;
  const double scale_f = 1.0 + delta * plus;
  const double scale_g = 1.0 - delta * minus;
  if (!(scale_f > 0.0) || !(scale_g > 0.0) || !(plus > 0.0) || !(minus > 0.0)) {
    throw Error(ErrorKind::ShiftDomain, "leveraged step denominators must be positive");
  }
  IterateState s;
  s.z = z;
  s.x = problem.f().prox(plus / scale_f, z / scale_f);
  s.y = (2.0 * tau / plus) * s.x - (minus / plus) * z;
  s.p = problem.g().prox(minus / scale_g, s.y / scale_g);
  s.z_next = z + (2.0 * tau / minus) * (s.p - s.x);
  return s;
}

SolveResult prs_lev_solve(const CompositeProblem& problem, const LeverageParams& lp,
                          const SolverConfig& config, const Vector& z0) {
  validate_leverage(lp, problem.regularity());
  check_start(problem, z0);
  return run_iteration(z0, known_fixed_point(problem, lp), config, [&](const Vector& z) {
    IterateState s = prs_lev_step(z, problem, lp);
    const double residual = (s.p - s.x).norm();
    return StepOutput{std::move(s.z_next), residual};
  }, [&](const Vector& z) { return prs_lev_step(z, problem, lp).x; });
}

IterateState prs_classic_step(const Vector& z, const CompositeProblem& problem, double tau,
                              ProxOrder order) {
  const ProxFunction& first = order == ProxOrder::f_first ? problem.f() : problem.g();
  const ProxFunction& second = order == ProxOrder::f_first ? problem.g() : problem.f();
  IterateState s;
  s.z = z;
  s.x = first.prox(tau, z);
  s.y = 2.0 * s.x - z;
  s.p = second.prox(tau, s.y);
  s.z_next = z + 2.0 * (s.p - s.x);
  return s;
}

SolveResult prs_classic_solve(const CompositeProblem& problem, double tau,
                              const SolverConfig& config, const Vector& z0, ProxOrder order) {
  if (!(tau > 0.0)) throw Error(ErrorKind::StepDomain, "tau must be positive");
  check_start(problem, z0);
  return run_iteration(z0, classic_fixed_point(problem, tau, order), config, [&](const Vector& z) {
    IterateState s = prs_classic_step(z, problem, tau, order);
    const double residual = (s.p - s.x).norm();
    return StepOutput{std::move(s.z_next), residual};
  }, [&](const Vector& z) {
    return (order == ProxOrder::f_first ? problem.f() : problem.g()).prox(tau, z);
  });
}

IterateState drs_step(const Vector& z, const CompositeProblem& problem, double tau, double lambda,
                      ProxOrder order) {
  IterateState s = prs_classic_step(z, problem, tau, order);
  s.z_next = (1.0 - lambda) * z + lambda * s.z_next;
  return s;
}

SolveResult drs_solve(const CompositeProblem& problem, double tau, double lambda,
                      const SolverConfig& config, const Vector& z0, ProxOrder order) {
  if (!(tau > 0.0)) throw Error(ErrorKind::StepDomain, "tau must be positive");
  if (!(lambda > 0.0) || lambda > 1.0) {
    throw Error(ErrorKind::InvalidInput, "lambda must lie in ]0, 1]");
  }
  check_start(problem, z0);
  return run_iteration(z0, classic_fixed_point(problem, tau, order), config, [&](const Vector& z) {
    IterateState s = drs_step(z, problem, tau, lambda, order);
    const double residual = (s.p - s.x).norm();
    return StepOutput{std::move(s.z_next), residual};
  }, [&](const Vector& z) {
    return (order == ProxOrder::f_first ? problem.f() : problem.g()).prox(tau, z);
  });
}

SolveResult fista_solve(const CompositeProblem& problem, FistaMode mode,
                        const SolverConfig& config, const Vector& x0,
                        const FistaOptions& options) {
  check_start(problem, x0);
  const bool on_f = mode == FistaMode::forward_on_f;
  const ProxFunction& smooth = on_f ? problem.f() : problem.g();
  const ProxFunction& backward = on_f ? problem.g() : problem.f();
  const RegularityParams& reg = problem.regularity();
  const double c = on_f ? reg.alpha : reg.beta;
  const double sigma_backward = on_f ? reg.mu : reg.rho;
  if (!smooth.has_gradient() || !(c > 0.0)) {
    throw Error(ErrorKind::NotSmooth, "the forward function needs a Lipschitz gradient");
  }
  const double step = options.step.value_or(c);
  if (!(step > 0.0)) throw Error(ErrorKind::StepDomain, "FISTA step must be positive");

  const double q = step * (reg.rho + reg.mu) / (1.0 + step * sigma_backward);
  std::optional<double> momentum = options.momentum;
  if (!momentum && q > 0.0) {
    const double root = std::sqrt(std::min(q, 1.0));
    momentum = (1.0 - root) / (1.0 + root);
  }

  // Driving point is the extrapolated y; the reported sequence is x.
  Vector x_prev = x0;
  Vector y = x0;
  double t = 1.0;
  return run_iteration(x0, problem.solution(), config, [&](const Vector&) {
    Vector x = backward.prox(step, y - step * smooth.gradient(y));
    const double residual = (x - y).norm();
    double m;
    if (momentum) {
      m = *momentum;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      m = (t - 1.0) / t_next;
      t = t_next;
    }
    y = x + m * (x - x_prev);
    x_prev = x;
    return StepOutput{x, residual};
  }, [](const Vector& z) { return z; });
}

}  // namespace levprs
