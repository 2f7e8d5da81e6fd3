#pragma once

// Data-parallel inner loops. Each kernel exists twice: the OpenMP version in
// levprs::kernels, used by the library, and a plain serial version in
// levprs::reference, kept for testing and benchmarking. Both perform the same
// arithmetic per output element, so results agree bitwise except for the
// reductions noted below.

#include "levprs/core.hpp"

#include <span>

namespace levprs {

struct GridMinimum {
  double value = 1.0;
  double tau = 0.0;
  double eta = 0.0;
};

/// Rectangular (tau, eta) grid with n_tau x n_eta nodes, end points included.
struct ParameterGrid {
  double tau_lo = 0.0;
  double tau_hi = 1.0;
  int n_tau = 2;
  double eta_lo = 0.0;
  double eta_hi = 0.0;
  int n_eta = 1;
};

namespace kernels {

/// out(i,j) = sum_{u,v} k(u,v) in((i + u - ci) mod rows, (j + v - cj) mod cols),
/// row-major images, center (ci, cj).
void correlate_circular(const Matrix& kernel, Index center_row, Index center_col, Index rows,
                        Index cols, std::span<const double> in, std::span<double> out);

/// Orthonormal multi-level 2-D Haar analysis/synthesis on a row-major image.
void haar_forward(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out);
void haar_inverse(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out);

/// Elementwise prox of weight * h^eps.
void huber_prox(std::span<const double> in, double weight, double eps, std::span<double> out);
/// Elementwise clip(w / eps, -1, 1).
void huber_gradient(std::span<const double> in, double eps, std::span<double> out);
/// sum_i h^eps(w_i). Parallel summation order differs from the serial one.
double huber_sum(std::span<const double> in, double eps);

/// Minimum of r1 * r2 over the grid at fixed delta. Ties go to the lowest
/// (tau index, eta index), so the result matches the serial version exactly.
/// Nodes violating tau > |eta| or the shift conditions are skipped.
GridMinimum grid_min_rate(const RegularityParams& reg, double delta, const ParameterGrid& grid);

}  // namespace kernels

namespace reference {

void correlate_circular(const Matrix& kernel, Index center_row, Index center_col, Index rows,
                        Index cols, std::span<const double> in, std::span<double> out);
void haar_forward(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out);
void haar_inverse(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out);
void huber_prox(std::span<const double> in, double weight, double eps, std::span<double> out);
void huber_gradient(std::span<const double> in, double eps, std::span<double> out);
double huber_sum(std::span<const double> in, double eps);
GridMinimum grid_min_rate(const RegularityParams& reg, double delta, const ParameterGrid& grid);

}  // namespace reference

/// Scalar Huber function: |xi| - eps/2 beyond eps, xi^2/(2 eps) inside.
inline double huber_scalar(double xi, double eps) {
  const double a = xi < 0 ? -xi : xi;
  return a > eps ? a - 0.5 * eps : 0.5 * xi * xi / eps;
}

/// argmin_p weight * h^eps(p) + (p - xi)^2 / 2.
inline double huber_scalar_prox(double xi, double weight, double eps) {
  const double a = xi < 0 ? -xi : xi;
  if (a <= eps + weight) return eps * xi / (eps + weight);
  return xi < 0 ? xi + weight : xi - weight;
}

inline double huber_scalar_gradient(double xi, double eps) {
  const double s = xi / eps;
  return s > 1.0 ? 1.0 : (s < -1.0 ? -1.0 : s);
}

/// True when the grid node is admissible for the leveraged iteration.
bool grid_node_admissible(const RegularityParams& reg, double delta, double tau, double eta);

}  // namespace levprs
