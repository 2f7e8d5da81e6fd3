#include "levprs/core.hpp"

#include "levprs/rates.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace levprs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::DegenerateQuadratic: return "DegenerateQuadratic";
    case ErrorKind::NoLeverage: return "NoLeverage";
    case ErrorKind::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorKind::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorKind::TauTooSmall: return "TauTooSmall";
    case ErrorKind::ShiftIncompatible: return "ShiftIncompatible";
    case ErrorKind::StepDomain: return "StepDomain";
    case ErrorKind::ShiftDomain: return "ShiftDomain";
    case ErrorKind::TransferDomain: return "TransferDomain";
    case ErrorKind::NotStronglyRegular: return "NotStronglyRegular";
    case ErrorKind::NotSmooth: return "NotSmooth";
    case ErrorKind::NoGradient: return "NoGradient";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

namespace {

std::string describe(const RegularityParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(rho=" << p.rho << ", alpha=" << p.alpha << ", mu=" << p.mu << ", beta=" << p.beta
     << ")";
  return os.str();
}

std::string describe(const LeverageParams& lp) {
  std::ostringstream os;
  os.precision(17);
  os << "(delta=" << lp.delta << ", eta=" << lp.eta << ", tau=" << lp.tau << ")";
  return os.str();
}

bool nonneg_finite(double v) { return std::isfinite(v) && v >= 0.0; }

double slack(double bound, const Tolerances& tol) {
  return tol.atol + tol.rtol * std::abs(bound);
}

}  // namespace

RegularityParams validate_regularity(const RegularityParams& params, ValidationMode mode,
                                     const Tolerances& tol) {
  if (!nonneg_finite(params.rho) || !nonneg_finite(params.alpha) ||
      !nonneg_finite(params.mu) || !nonneg_finite(params.beta)) {
    throw Error(ErrorKind::InvalidInput, "moduli must be finite and nonnegative " +
                                             describe(params));
  }
  const double ar = params.alpha * params.rho;
  const double bm = params.beta * params.mu;
  // alpha*rho <= 1 always holds for a genuine pair; rounding in estimated
  // moduli may push the product a hair above one.
  if (ar > 1.0 + tol.rtol || bm > 1.0 + tol.rtol) {
    throw Error(ErrorKind::BoundViolation,
                "alpha*rho and beta*mu must lie in [0,1] " + describe(params));
  }
  if (mode == ValidationMode::leveraged) {
    if (ar >= 1.0 || bm >= 1.0) {
      throw Error(ErrorKind::DegenerateQuadratic,
                  "max{alpha*rho, beta*mu} = 1 (purely quadratic term) " + describe(params));
    }
    if (params.rho + params.mu == 0.0 || params.alpha + params.beta == 0.0) {
      throw Error(ErrorKind::NoLeverage,
                  "min{rho+mu, alpha+beta} must be positive " + describe(params));
    }
  }
  return params;
}

LeverageParams validate_leverage(const LeverageParams& lp, const RegularityParams& reg,
                                 const Tolerances& tol) {
  validate_regularity(reg, ValidationMode::leveraged, tol);
  if (!std::isfinite(lp.delta) || !std::isfinite(lp.eta) || !std::isfinite(lp.tau)) {
    throw Error(ErrorKind::InvalidInput, "non-finite leverage parameters " + describe(lp));
  }
  const double d = lp.delta;
  if (d < -reg.rho - slack(reg.rho, tol) || d > reg.mu + slack(reg.mu, tol)) {
    throw Error(ErrorKind::DeltaOutOfRange, "delta must lie in [-rho, mu] " + describe(lp));
  }
  const double eta_lo = -reg.alpha / (1.0 + reg.alpha * d);
  const double eta_hi = reg.beta / (1.0 - reg.beta * d);
  if (lp.eta < eta_lo - slack(eta_lo, tol) || lp.eta > eta_hi + slack(eta_hi, tol)) {
    throw Error(ErrorKind::EtaOutOfRange,
                "eta must lie in [-alpha/(1+alpha delta), beta/(1-beta delta)] " + describe(lp));
  }
  if (!(lp.tau > std::abs(lp.eta))) {
    throw Error(ErrorKind::TauTooSmall, "tau must exceed |eta| " + describe(lp));
  }
  if (!(lp.tau * std::abs(d) < 1.0 + d * lp.eta) || !(1.0 + d * (lp.tau + lp.eta) > 0.0) ||
      !(1.0 - d * (lp.tau - lp.eta) > 0.0)) {
    throw Error(ErrorKind::ShiftIncompatible,
                "tau |delta| must be below 1 + delta eta " + describe(lp));
  }
  // On the boundary of the eta interval one reflected operator is merely
  // nonexpansive; the other one has to carry the contraction.
  if (!(leveraged_rate(lp, reg) < 1.0)) {
    throw Error(ErrorKind::EtaOutOfRange,
                "parameters give no contraction (r1*r2 >= 1) " + describe(lp));
  }
  return lp;
}

ProxFunction::ProxFunction(Index dimension, Moduli moduli, ProxOracle prox, ValueOracle value,
                           GradientOracle gradient, std::string name)
    : dimension_(dimension),
      moduli_(moduli),
      prox_(std::move(prox)),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      name_(std::move(name)) {
  if (dimension_ <= 0) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  if (!prox_) throw Error(ErrorKind::InvalidInput, "a prox oracle is required");
  if (!(moduli_.strong_convexity >= 0.0) || !(moduli_.cocoercivity >= 0.0)) {
    throw Error(ErrorKind::InvalidInput, "moduli must be nonnegative");
  }
}

Vector ProxFunction::prox(double gamma, const Vector& x) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::StepDomain, "prox step must be positive and finite");
  }
  if (x.size() != dimension_) {
    throw Error(ErrorKind::DimensionMismatch, "prox argument has the wrong dimension");
  }
  return prox_(gamma, x);
}

Vector ProxFunction::reflect(double gamma, const Vector& x) const {
  return 2.0 * prox(gamma, x) - x;
}

double ProxFunction::value(const Vector& x) const {
  if (!value_) throw Error(ErrorKind::InvalidInput, name_ + ": no value oracle");
  return value_(x);
}

Vector ProxFunction::gradient(const Vector& x) const {
  if (!gradient_) throw Error(ErrorKind::NoGradient, name_ + ": no gradient oracle");
  return gradient_(x);
}

CompositeProblem::CompositeProblem(ProxFunction f, ProxFunction g, RegularityParams regularity,
                                   std::optional<Vector> solution, FixedPointOracle fixed_point)
    : f_(std::move(f)),
      g_(std::move(g)),
      regularity_(validate_regularity(regularity, ValidationMode::general)),
      solution_(std::move(solution)),
      fixed_point_(std::move(fixed_point)) {
  if (f_.dimension() != g_.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "f and g must act on the same space");
  }
  if (solution_ && solution_->size() != f_.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "solution oracle has the wrong dimension");
  }
}

Vector CompositeProblem::fixed_point(const LeverageParams& lp) const {
  if (fixed_point_) return fixed_point_(lp);
  if (!solution_) throw Error(ErrorKind::InvalidInput, "no solution oracle attached");
  return leveraged_fixed_point(f_, *solution_, lp);
}

Vector leveraged_fixed_point(const ProxFunction& f, const Vector& solution,
                             const LeverageParams& lp) {
  const double s = lp.tau + lp.eta;
  return (1.0 + lp.delta * s) * solution + s * f.gradient(solution);
}

}  // namespace levprs
