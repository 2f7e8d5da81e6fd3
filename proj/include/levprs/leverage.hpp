#pragma once

#include "levprs/core.hpp"

#include <variant>

namespace levprs {

/// Which role a function plays in the leveraged pair: f is shifted by
/// (delta, eta), g by (-delta, -eta).
enum class ShiftSide { plus, minus };

/// The function phi = (((h_d)^*)_e)^* with h_d = h + (d/2)|.|^2 and (d, e)
/// equal to (delta, eta) or (-delta, -eta) according to the side.
/// Only its prox and reflected prox are ever materialized.
class ShiftedProxSpec {
 public:
  ShiftedProxSpec(ProxFunction base, double delta, double eta, ShiftSide side,
                  const Tolerances& tol = {});

  const ProxFunction& base() const { return base_; }
  double delta() const { return delta_; }
  double eta() const { return eta_; }
  ShiftSide side() const { return side_; }
  /// Shift applied to this function after accounting for the side.
  double signed_delta() const { return side_ == ShiftSide::plus ? delta_ : -delta_; }
  double signed_eta() const { return side_ == ShiftSide::plus ? eta_ : -eta_; }

 private:
  ProxFunction base_;
  double delta_;
  double eta_;
  ShiftSide side_;
};

/// prox_{tau phi}(x), evaluated with one call to prox of the base function.
Vector shifted_prox(const ShiftedProxSpec& spec, double tau, const Vector& x);
/// R_{tau phi}(x) = 2 prox_{tau phi}(x) - x.
Vector shifted_reflect(const ShiftedProxSpec& spec, double tau, const Vector& x);

/// q(x) = offset + <linear, x> + (1/2) x^T hessian x.
struct QuadraticFunction {
  double offset = 0.0;
  Vector linear;
  Matrix hessian;

  /// offset + <linear, x> + (curvature/2)|x|^2.
  static QuadraticFunction isotropic(double offset, Vector linear, double curvature);

  Index dimension() const { return linear.size(); }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Solves (I + gamma Q) p = x - gamma b.
  Vector prox(double gamma, const Vector& x) const;
  /// Returns c when the hessian equals c I (within 1e-12), throws otherwise.
  double isotropic_curvature() const;
  ProxFunction as_prox_function(Moduli moduli) const;
};

/// <linear, x> + offset.
struct AffineFunction {
  double offset = 0.0;
  Vector linear;
};

/// Indicator of {point} plus a constant.
struct PointIndicator {
  Vector point;
  double offset = 0.0;
};

/// The conjugate shift is identically -infinity.
struct MinusInfinity {};

using ConjugateShiftResult = std::variant<AffineFunction, PointIndicator, QuadraticFunction, MinusInfinity>;

/// Closed form of (((h_delta)^*)_eta)^* for h = a + <b,.> + (rho/2)|.|^2,
/// the only shape a function with alpha*rho = 1 can have.
ConjugateShiftResult quadratic_conjugate_shift(const QuadraticFunction& h, double delta, double eta);

/// Strong convexity and cocoercivity moduli of (((h_delta)^*)_eta)^* given
/// those of h. An endpoint (delta = -sigma, or eta at its lower bound)
/// reports modulus 0.
Moduli regularity_transfer(const Moduli& in, double delta, double eta,
                           const Tolerances& tol = {});

/// Maps a minimizer of the shifted problem back to a minimizer of f + g.
Vector recover_solution(const Vector& z_tilde, const CompositeProblem& problem,
                        const LeverageParams& lp);

}  // namespace levprs
