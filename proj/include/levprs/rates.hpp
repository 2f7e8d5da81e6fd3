#pragma once

#include "levprs/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levprs {

/// Lipschitz constant of the reflected operator of the shifted f.
double rate_r1(const LeverageParams& lp, const RegularityParams& reg);
/// Lipschitz constant of the reflected operator of the shifted g.
double rate_r2(const LeverageParams& lp, const RegularityParams& reg);
/// r1 * r2, the contraction factor of the leveraged iteration.
double leveraged_rate(const LeverageParams& lp, const RegularityParams& reg);

struct RateBundle {
  double r1 = 1.0;
  double r2 = 1.0;
  double r = 1.0;
  double r_star = 1.0;
};

RateBundle rate_bundle(const LeverageParams& lp, const RegularityParams& reg);

/// Step size and dual shift minimizing r1 * r2 for a fixed shift delta in [-rho, mu].
LeverageParams optimal_params(const RegularityParams& reg, double delta);

/// Best contraction factor attainable by the leveraged iteration.
double optimal_rate(const RegularityParams& reg);

/// The shift for which the optimal dual shift vanishes.
double delta_star(const RegularityParams& reg);

/// (delta*, 0, tau*): optimal parameters with no dual shift.
LeverageParams simple_optimal_params(const RegularityParams& reg);

/// max |r1*r2 - r*| over an interior grid of shifts, each paired with its
/// optimal (eta, tau). The grid spans [-rho + eps, mu - eps] with
/// eps = 1e-6 (rho + mu).
double rate_constancy_check(const RegularityParams& reg, int grid_size);

/// Contraction factor of R_{tau h} for h with the given moduli.
double classical_prs_rate(double tau, const Moduli& m);

struct StepRate {
  double tau = 0.0;
  double rate = 1.0;
};

/// tau = sqrt(c / sigma), rate = (1 - sqrt(c sigma)) / (1 + sqrt(c sigma)).
StepRate classical_prs_optimal(const Moduli& m);

struct DrsParams {
  double tau = 0.0;
  double lambda = 1.0;
  double rate = 1.0;
};

/// Relaxed DRS with f rho-strongly convex and grad g 1/beta-Lipschitz:
/// rate 1/(1 + sqrt(beta rho)). The step defaults to sqrt(beta / rho).
DrsParams drs_optimal_rate(const RegularityParams& reg, std::optional<double> tau = std::nullopt);

/// 1 - sqrt(c (rho + mu) / (1 + c sigma_other)) for accelerated forward-backward
/// with the forward step on the function of cocoercivity c, where
/// sigma_other is the strong convexity of the backward function.
double fista_rate(double cocoercivity, double total_strong_convexity,
                  double backward_strong_convexity);

struct MethodRate {
  std::string method;
  std::optional<double> rate;  // nullopt: the method's hypotheses fail
};

struct DominanceReport {
  std::vector<MethodRate> entries;  // defined rates ascending, undefined last
  bool leveraged_strictly_best = false;
};

DominanceReport dominance_report(const RegularityParams& reg);

}  // namespace levprs
