#pragma once

#include "levprs/core.hpp"

#include <cstdint>
#include <functional>

namespace levprs {

using LinearMap = std::function<Vector(const Vector&)>;

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradients for a symmetric positive definite map. Stops when
/// |r| <= tol |rhs| or after max_iter steps.
CgResult conjugate_gradient(const LinearMap& apply, const Vector& rhs, const Vector& x0,
                            double tol = 1e-14, int max_iter = 1000);

struct ExtremeEigenvalues {
  double smallest = 0.0;
  double largest = 0.0;
  int steps = 0;
};

/// Smallest and largest eigenvalue of a symmetric operator on R^n by Lanczos
/// with full reorthogonalization, started from a seeded random vector. Stops
/// once both Ritz values move by less than tol (relative) for three steps.
ExtremeEigenvalues lanczos_extremes(const LinearMap& apply, Index n, double tol = 1e-12,
                                    int max_steps = 600, std::uint64_t seed = 7);

}  // namespace levprs
