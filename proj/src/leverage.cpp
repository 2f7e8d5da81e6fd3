#include "levprs/leverage.hpp"

#include <cmath>
#include <utility>

namespace levprs {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(b)); }

}  // namespace

ShiftedProxSpec::ShiftedProxSpec(ProxFunction base, double delta, double eta, ShiftSide side,
                                 const Tolerances& tol)
    : base_(std::move(base)), delta_(delta), eta_(eta), side_(side) {
  const double d = signed_delta();
  const double e = signed_eta();
  const double sigma = base_.moduli().strong_convexity;
  const double c = base_.moduli().cocoercivity;
  if (d < -sigma - tol.atol) {
    throw Error(ErrorKind::ShiftDomain, "shift below minus the strong convexity modulus");
  }
  const double cd = 1.0 + c * d;
  if (cd > 0.0 && std::isfinite(c)) {
    const double lower = -c / cd;
    if (e < lower - tol.atol - tol.rtol * std::abs(lower)) {
      throw Error(ErrorKind::ShiftDomain, "dual shift below -c/(1 + c delta)");
    }
  }
}

Vector shifted_prox(const ShiftedProxSpec& spec, double tau, const Vector& x) {
  const double d = spec.signed_delta();
  const double e = spec.signed_eta();
  if (!(tau > std::max(-e, 0.0))) {
    throw Error(ErrorKind::StepDomain, "tau must exceed max{-eta, 0}");
  }
  const double s = tau + e;
  const double scale = 1.0 + d * s;
  if (!(scale > 0.0)) throw Error(ErrorKind::ShiftDomain, "delta (tau + eta) must exceed -1");
  const Vector p = spec.base().prox(s / scale, x / scale);
  return (e / s) * x + (tau / s) * p;
}

Vector shifted_reflect(const ShiftedProxSpec& spec, double tau, const Vector& x) {
  const double d = spec.signed_delta();
  const double e = spec.signed_eta();
  if (!(tau > std::max(-e, 0.0))) {
    throw Error(ErrorKind::StepDomain, "tau must exceed max{-eta, 0}");
  }
  const double s = tau + e;
  const double scale = 1.0 + d * s;
  if (!(scale > 0.0)) throw Error(ErrorKind::ShiftDomain, "delta (tau + eta) must exceed -1");
  const Vector p = spec.base().prox(s / scale, x / scale);
  return (2.0 * tau / s) * p - ((tau - e) / s) * x;
}

QuadraticFunction QuadraticFunction::isotropic(double offset, Vector linear, double curvature) {
  QuadraticFunction q;
  q.offset = offset;
  const Index n = linear.size();
  q.linear = std::move(linear);
  q.hessian = curvature * Matrix::Identity(n, n);
  return q;
}

double QuadraticFunction::value(const Vector& x) const {
  return offset + linear.dot(x) + 0.5 * x.dot(hessian * x);
}

Vector QuadraticFunction::gradient(const Vector& x) const { return linear + hessian * x; }

Vector QuadraticFunction::prox(double gamma, const Vector& x) const {
  const Index n = dimension();
  const Matrix system = Matrix::Identity(n, n) + gamma * hessian;
  Eigen::LDLT<Matrix> ldlt(system);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSystem, "I + gamma Q is not positive definite");
  }
  return ldlt.solve(x - gamma * linear);
}

double QuadraticFunction::isotropic_curvature() const {
  const Index n = dimension();
  if (hessian.rows() != n || hessian.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "hessian shape does not match the linear term");
  }
  const double c = n > 0 ? hessian(0, 0) : 0.0;
  const double off = (hessian - c * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (off > 1e-12 * (1.0 + std::abs(c))) {
    throw Error(ErrorKind::InvalidInput, "hessian is not a multiple of the identity");
  }
  return c;
}

ProxFunction QuadraticFunction::as_prox_function(Moduli moduli) const {
  auto self = std::make_shared<const QuadraticFunction>(*this);
  return ProxFunction(
      dimension(), moduli, [self](double gamma, const Vector& x) { return self->prox(gamma, x); },
      [self](const Vector& x) { return self->value(x); },
      [self](const Vector& x) { return self->gradient(x); }, "quadratic");
}

ConjugateShiftResult quadratic_conjugate_shift(const QuadraticFunction& h, double delta,
                                               double eta) {
  const double rho = h.isotropic_curvature();
  const double a = h.offset;
  const Vector& b = h.linear;
  if (near(delta, -rho)) {
    return AffineFunction{a - 0.5 * eta * b.squaredNorm(), b};
  }
  if (delta < -rho) {
    throw Error(ErrorKind::ShiftDomain, "delta must be at least -rho");
  }
  const double k = rho + delta;
  const double threshold = -1.0 / k;
  const double base_offset = a - b.squaredNorm() / (2.0 * k);
  if (near(eta, threshold)) {
    return PointIndicator{-b / k, base_offset};
  }
  if (eta > threshold) {
    // |x + b/k|^2 / (2 (eta + 1/k)) + a - |b|^2/(2k), expanded.
    const double curvature = 1.0 / (eta + 1.0 / k);
    const Vector center = b / k;
    QuadraticFunction q = QuadraticFunction::isotropic(
        base_offset + 0.5 * curvature * center.squaredNorm(), curvature * center, curvature);
    return q;
  }
  return MinusInfinity{};
}

Moduli regularity_transfer(const Moduli& in, double delta, double eta, const Tolerances& tol) {
  const double sigma = in.strong_convexity;
  const double c = in.cocoercivity;
  if (!(sigma >= 0.0) || !(c >= 0.0) || sigma * c > 1.0 + tol.rtol) {
    throw Error(ErrorKind::TransferDomain, "moduli must satisfy sigma * c <= 1");
  }
  if (delta < -sigma - tol.atol) {
    throw Error(ErrorKind::TransferDomain, "delta must be at least -sigma");
  }
  const double cd = 1.0 + c * delta;
  const double lower = -c / cd;
  if (eta < lower - tol.atol - tol.rtol * std::abs(lower)) {
    throw Error(ErrorKind::TransferDomain, "eta must be at least -c/(1 + c delta)");
  }
  Moduli out;
  if (delta > -sigma + tol.atol) {
    const double k = sigma + delta;
    const double den = 1.0 + k * eta;
    out.strong_convexity = den > 0.0 ? k / den : kInfinity;
  }
  if (eta > lower + tol.atol) out.cocoercivity = c / cd + eta;
  return out;
}

Vector recover_solution(const Vector& z_tilde, const CompositeProblem& problem,
                        const LeverageParams& lp) {
  if (lp.eta == 0.0) return z_tilde;
  const double s = 1.0 + lp.eta * lp.delta;
  if (!(s > 0.0)) throw Error(ErrorKind::ShiftDomain, "1 + eta delta must be positive");
  if (lp.eta > 0.0) return problem.f().prox(lp.eta / s, z_tilde / s);
  return problem.g().prox(-lp.eta / s, z_tilde / s);
}

}  // namespace levprs
