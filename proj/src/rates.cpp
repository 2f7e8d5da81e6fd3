#include "levprs/rates.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

namespace levprs {

double rate_r1(const LeverageParams& lp, const RegularityParams& reg) {
  const double t = lp.tau;
  const double e = lp.eta;
  const double ad = 1.0 + reg.alpha * lp.delta;
  const double k = reg.rho + lp.delta;
  const double smooth = ((t - e) * ad - reg.alpha) / ((t + e) * ad + reg.alpha);
  const double strong = (1.0 - (t - e) * k) / (1.0 + (t + e) * k);
  return std::max(smooth, strong);
}

double rate_r2(const LeverageParams& lp, const RegularityParams& reg) {
  const double t = lp.tau;
  const double e = lp.eta;
  const double bd = 1.0 - reg.beta * lp.delta;
  const double k = reg.mu - lp.delta;
  const double smooth = ((t + e) * bd - reg.beta) / ((t - e) * bd + reg.beta);
  const double strong = (1.0 - (t + e) * k) / (1.0 + (t - e) * k);
  return std::max(smooth, strong);
}

double leveraged_rate(const LeverageParams& lp, const RegularityParams& reg) {
  return rate_r1(lp, reg) * rate_r2(lp, reg);
}

RateBundle rate_bundle(const LeverageParams& lp, const RegularityParams& reg) {
  RateBundle b;
  b.r1 = rate_r1(lp, reg);
  b.r2 = rate_r2(lp, reg);
  b.r = b.r1 * b.r2;
  b.r_star = optimal_rate(reg);
  return b;
}

LeverageParams optimal_params(const RegularityParams& reg, double delta) {
  validate_regularity(reg, ValidationMode::leveraged);
  const auto [rho, alpha, mu, beta] = reg;
  if (!(delta >= -rho) || !(delta <= mu)) {
    throw Error(ErrorKind::DeltaOutOfRange, "delta must lie in [-rho, mu]");
  }
  const double den = (rho + delta) * (mu - delta) * (alpha + beta) +
                     (1.0 + alpha * delta) * (1.0 - beta * delta) * (rho + mu);
  const double eta =
      (beta * rho - alpha * mu + delta * (alpha * (1.0 + beta * mu) + beta * (1.0 + alpha * rho))) /
      den;
  const double tau =
      std::sqrt((alpha + beta) * (rho + mu) * (1.0 + alpha * mu) * (1.0 + beta * rho)) / den;
  return {delta, eta, tau};
}

double optimal_rate(const RegularityParams& reg) {
  validate_regularity(reg, ValidationMode::leveraged);
  const auto [rho, alpha, mu, beta] = reg;
  const double ac = std::sqrt((1.0 + beta * rho) * (1.0 + alpha * mu));
  const double bd = std::sqrt((alpha + beta) * (rho + mu));
  return (ac - bd) / (ac + bd);
}

double delta_star(const RegularityParams& reg) {
  validate_regularity(reg, ValidationMode::leveraged);
  const auto [rho, alpha, mu, beta] = reg;
  return (alpha * mu - beta * rho) / (beta * (1.0 + alpha * mu) + alpha * (1.0 + beta * rho));
}

LeverageParams simple_optimal_params(const RegularityParams& reg) {
  const auto [rho, alpha, mu, beta] = reg;
  const double spread = beta * (1.0 + alpha * mu) + alpha * (1.0 + beta * rho);
  const double tau =
      spread / std::sqrt((alpha + beta) * (rho + mu) * (1.0 + alpha * mu) * (1.0 + beta * rho));
  return {delta_star(reg), 0.0, tau};
}

double rate_constancy_check(const RegularityParams& reg, int grid_size) {
  if (grid_size < 2) throw Error(ErrorKind::InvalidInput, "grid_size must be at least 2");
  const double r_star = optimal_rate(reg);
  const double eps = 1e-6 * (reg.rho + reg.mu);
  const double lo = -reg.rho + eps;
  const double hi = reg.mu - eps;
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (int i = 0; i < grid_size; ++i) {
    const double delta = lo + (hi - lo) * static_cast<double>(i) / (grid_size - 1);
    const LeverageParams lp = optimal_params(reg, delta);
    worst = std::max(worst, std::abs(leveraged_rate(lp, reg) - r_star));
  }
  return worst;
}

double classical_prs_rate(double tau, const Moduli& m) {
  if (!(m.strong_convexity > 0.0) || !(m.cocoercivity > 0.0)) {
    throw Error(ErrorKind::NotStronglyRegular,
                "classical PRS rate needs positive strong convexity and cocoercivity");
  }
  if (!(tau > 0.0)) throw Error(ErrorKind::StepDomain, "tau must be positive");
  const double s = tau / m.cocoercivity;
  const double ts = tau * m.strong_convexity;
  return std::max((s - 1.0) / (s + 1.0), (1.0 - ts) / (1.0 + ts));
}

StepRate classical_prs_optimal(const Moduli& m) {
  if (!(m.strong_convexity > 0.0) || !(m.cocoercivity > 0.0)) {
    throw Error(ErrorKind::NotStronglyRegular,
                "classical PRS rate needs positive strong convexity and cocoercivity");
  }
  const double root = std::sqrt(m.cocoercivity * m.strong_convexity);
  return {std::sqrt(m.cocoercivity / m.strong_convexity), (1.0 - root) / (1.0 + root)};
}

DrsParams drs_optimal_rate(const RegularityParams& reg, std::optional<double> tau) {
  if (!(reg.rho > 0.0) || !(reg.beta > 0.0)) {
    throw Error(ErrorKind::NotStronglyRegular, "DRS rate needs rho > 0 and beta > 0");
  }
  const double s = std::sqrt(reg.beta * reg.rho);
  DrsParams p;
  p.tau = tau.value_or(std::sqrt(reg.beta / reg.rho));
  p.lambda = (1.0 + s / 2.0) / (1.0 + s);
  p.rate = 1.0 / (1.0 + s);
  return p;
}

double fista_rate(double cocoercivity, double total_strong_convexity,
                  double backward_strong_convexity) {
  const double q =
      cocoercivity * total_strong_convexity / (1.0 + cocoercivity * backward_strong_convexity);
  return 1.0 - std::sqrt(q);
}

DominanceReport dominance_report(const RegularityParams& reg) {
  validate_regularity(reg, ValidationMode::leveraged);
  const auto [rho, alpha, mu, beta] = reg;

  DominanceReport report;
  auto& e = report.entries;
  const double r_star = optimal_rate(reg);
  e.push_back({"PRS-lev", r_star});

  auto undefined_unless = [](bool ok, double v) { return ok ? std::optional<double>(v) : std::nullopt; };
  const bool f_strong = rho > 0.0 && alpha > 0.0;
  const bool g_strong = mu > 0.0 && beta > 0.0;
  e.push_back({"PRS1", undefined_unless(f_strong, f_strong ? classical_prs_optimal(reg.f()).rate : 0)});
  e.push_back({"PRS2", undefined_unless(g_strong, g_strong ? classical_prs_optimal(reg.g()).rate : 0)});
  e.push_back({"DRS", undefined_unless(rho > 0.0 && beta > 0.0,
                                       1.0 / (1.0 + std::sqrt(beta * rho)))});
  e.push_back({"DRS-swapped", undefined_unless(mu > 0.0 && alpha > 0.0,
                                               1.0 / (1.0 + std::sqrt(alpha * mu)))});
  e.push_back({"FISTA1", undefined_unless(alpha > 0.0, fista_rate(alpha, rho + mu, mu))});
  e.push_back({"FISTA2", undefined_unless(beta > 0.0, fista_rate(beta, rho + mu, rho))});

  std::stable_sort(e.begin(), e.end(), [](const MethodRate& a, const MethodRate& b) {
    if (a.rate && b.rate) return *a.rate < *b.rate;
    return a.rate.has_value() && !b.rate.has_value();
  });

  report.leveraged_strictly_best = std::all_of(e.begin(), e.end(), [&](const MethodRate& m) {
    return m.method == "PRS-lev" || !m.rate || r_star < *m.rate;
  });
  return report;
}

}  // namespace levprs
