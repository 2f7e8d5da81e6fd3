#pragma once

#include "levprs/core.hpp"

#include <cstddef>
#include <memory>
#include <optional>

namespace levprs {

struct LeastSquaresModuli {
  double rho = 0.0;    // lambda_min(A^T A), 0 when rank deficient
  double alpha = 0.0;  // 1 / lambda_max(A^T A)
};

/// Dense symmetric eigensolve of A^T A.
LeastSquaresModuli estimate_moduli(const Matrix& A);

/// x -> 1/2 |A x - a|^2 with A of size n x m, acting on R^m.
///
/// Factorizations of I + gamma A^T A are cached per gamma (exact bit match)
/// behind a mutex, so one instance may be shared across threads. Copies share
/// the cache.
class LeastSquaresFn {
 public:
  LeastSquaresFn(Matrix A, Vector a);

  Vector prox(double gamma, const Vector& x) const;
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  Index dimension() const;
  const Matrix& A() const;
  const Vector& a() const;
  const Matrix& normal_matrix() const;  // A^T A
  const Vector& normal_rhs() const;     // A^T a
  LeastSquaresModuli moduli() const;
  std::size_t cached_factorizations() const;

  ProxFunction as_prox_function(std::string name = "least squares") const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Orthonormal 2-D Haar transform on row-major rows x cols images.
class HaarTransform {
 public:
  HaarTransform(Index rows, Index cols, int levels = 1);

  Vector forward(const Vector& image) const;
  Vector inverse(const Vector& coefficients) const;

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  int levels() const { return levels_; }
  Index size() const { return rows_ * cols_; }

 private:
  Index rows_;
  Index cols_;
  int levels_;
};

/// x -> lambda sum_i h^eps((W x)_i), W an optional Haar transform.
class HuberFn {
 public:
  HuberFn(double epsilon, double lambda, Index dimension,
          std::optional<HaarTransform> transform = std::nullopt);

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Vector prox(double gamma, const Vector& x) const;

  double epsilon() const { return epsilon_; }
  double lambda() const { return lambda_; }
  Index dimension() const { return dimension_; }
  /// Strong convexity 0, cocoercivity eps / lambda.
  Moduli moduli() const { return {0.0, epsilon_ / lambda_}; }

  ProxFunction as_prox_function() const;

 private:
  double epsilon_;
  double lambda_;
  Index dimension_;
  std::optional<HaarTransform> transform_;
};

/// Circular 2-D correlation with a normalized square kernel. The adjoint
/// correlates with the kernel flipped about its center.
class BlurOperator {
 public:
  BlurOperator(Matrix kernel, Index rows, Index cols);

  /// size x size Gaussian with standard deviation sigma (pixels), normalized.
  static BlurOperator gaussian(int size, double sigma, Index rows, Index cols);
  static BlurOperator identity(Index rows, Index cols);

  Vector apply(const Vector& image) const;
  Vector adjoint(const Vector& image) const;
  /// T^T T x.
  Vector normal(const Vector& image) const;

  const Matrix& kernel() const { return kernel_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return rows_ * cols_; }

 private:
  Matrix kernel_;
  Matrix flipped_;
  Index rows_;
  Index cols_;
};

/// x -> 1/2 |T x - b|^2 for a blur T. The prox solves (I + gamma T^T T) p =
/// x + gamma T^T b by conjugate gradients; the moduli come from Lanczos.
class BlurLeastSquaresFn {
 public:
  BlurLeastSquaresFn(BlurOperator op, Vector observation, double cg_tol = 1e-14);

  Vector prox(double gamma, const Vector& x) const;
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  const BlurOperator& op() const { return op_; }
  const Vector& observation() const { return observation_; }
  /// (lambda_min(T^T T), 1 / lambda_max(T^T T)).
  Moduli moduli() const { return moduli_; }

  ProxFunction as_prox_function() const;

 private:
  BlurOperator op_;
  Vector observation_;
  Vector adjoint_observation_;
  double cg_tol_;
  Moduli moduli_;
};

}  // namespace levprs
