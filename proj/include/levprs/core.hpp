#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levprs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Extended-real +infinity, used as the value of a function outside its domain.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  BoundViolation,
  DegenerateQuadratic,
  NoLeverage,
  DeltaOutOfRange,
  EtaOutOfRange,
  TauTooSmall,
  ShiftIncompatible,
  StepDomain,
  ShiftDomain,
  TransferDomain,
  NotStronglyRegular,
  NotSmooth,
  NoGradient,
  SingularSystem,
  ShapeMismatch,
  IOError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the named kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical tolerances shared by the validators and checks.
struct Tolerances {
  double atol = 1e-12;
  double rtol = 1e-10;
};

/// Strong-convexity modulus and cocoercivity modulus of one function.
struct Moduli {
  double strong_convexity = 0.0;
  double cocoercivity = 0.0;
};

/// (rho, alpha) describe f, (mu, beta) describe g.
struct RegularityParams {
  double rho = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
  double beta = 0.0;

  Moduli f() const { return {rho, alpha}; }
  Moduli g() const { return {mu, beta}; }
  /// The same pair with the roles of f and g exchanged.
  RegularityParams swapped() const { return {mu, beta, rho, alpha}; }
};

/// Quadratic shift, dual shift and step size of the leveraged scheme.
struct LeverageParams {
  double delta = 0.0;
  double eta = 0.0;
  double tau = 1.0;
};

enum class ValidationMode { general, leveraged };

RegularityParams validate_regularity(const RegularityParams& params, ValidationMode mode,
                                     const Tolerances& tol = {});

LeverageParams validate_leverage(const LeverageParams& lp, const RegularityParams& reg,
                                 const Tolerances& tol = {});

/// A closed convex function seen through its proximity operator.
///
/// The prox oracle is mandatory; value and gradient oracles are optional
/// because the splitting schemes never evaluate the function itself.
/// Oracles must be re-entrant: the same object may be used from several
/// threads at once.
class ProxFunction {
 public:
  using ProxOracle = std::function<Vector(double gamma, const Vector& x)>;
  using ValueOracle = std::function<double(const Vector& x)>;
  using GradientOracle = std::function<Vector(const Vector& x)>;

  ProxFunction(Index dimension, Moduli moduli, ProxOracle prox, ValueOracle value = {},
               GradientOracle gradient = {}, std::string name = {});

  /// prox_{gamma h}(x).
  Vector prox(double gamma, const Vector& x) const;
  /// 2 prox_{gamma h}(x) - x.
  Vector reflect(double gamma, const Vector& x) const;

  bool has_value() const { return static_cast<bool>(value_); }
  bool has_gradient() const { return static_cast<bool>(gradient_); }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  Index dimension() const { return dimension_; }
  const Moduli& moduli() const { return moduli_; }
  const std::string& name() const { return name_; }

 private:
  Index dimension_;
  Moduli moduli_;
  ProxOracle prox_;
  ValueOracle value_;
  GradientOracle gradient_;
  std::string name_;
};

/// minimize f(x) + g(x).
class CompositeProblem {
 public:
  using FixedPointOracle = std::function<Vector(const LeverageParams&)>;

  CompositeProblem(ProxFunction f, ProxFunction g, RegularityParams regularity,
                   std::optional<Vector> solution = std::nullopt,
                   FixedPointOracle fixed_point = {});

  const ProxFunction& f() const { return f_; }
  const ProxFunction& g() const { return g_; }
  const RegularityParams& regularity() const { return regularity_; }
  Index dimension() const { return f_.dimension(); }

  const std::optional<Vector>& solution() const { return solution_; }
  bool has_fixed_point_oracle() const { return static_cast<bool>(fixed_point_); }
  /// Fixed point z* of the leveraged iteration for the given parameters.
  Vector fixed_point(const LeverageParams& lp) const;

 private:
  ProxFunction f_;
  ProxFunction g_;
  RegularityParams regularity_;
  std::optional<Vector> solution_;
  FixedPointOracle fixed_point_;
};

/// z* = (1 + delta (tau + eta)) x* + (tau + eta) grad f(x*), the fixed point of
/// the leveraged iteration associated with a minimizer x*. Requires a gradient
/// oracle on f.
Vector leveraged_fixed_point(const ProxFunction& f, const Vector& solution,
                             const LeverageParams& lp);

enum class SolveStatus { converged, max_iter, diverged };

const char* to_string(SolveStatus status);

struct TraceRecord {
  int iter = 0;
  double residual = 0.0;
  std::optional<double> dist_to_fixed_point;
  std::optional<double> contraction_ratio;
};

struct SolveTrace {
  std::vector<TraceRecord> records;
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  std::optional<double> initial_distance;
};

}  // namespace levprs
