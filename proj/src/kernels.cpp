#include "levprs/kernels.hpp"

#include "levprs/rates.hpp"

#include <cmath>
#include <vector>

namespace levprs {

bool grid_node_admissible(const RegularityParams& reg, double delta, double tau, double eta) {
  if (!(tau > std::abs(eta))) return false;
  if (!(1.0 + delta * (tau + eta) > 0.0) || !(1.0 - delta * (tau - eta) > 0.0)) return false;
  const double lower = -reg.alpha / (1.0 + reg.alpha * delta);
  const double upper = reg.beta / (1.0 - reg.beta * delta);
  return eta >= lower && eta <= upper;
}

namespace kernels {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double grid_point(double lo, double hi, int n, int i) {
  return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

void correlate_circular(const Matrix& kernel, Index center_row, Index center_col, Index rows,
                        Index cols, std::span<const double> in, std::span<double> out) {
  const Index k_rows = kernel.rows();
  const Index k_cols = kernel.cols();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (Index u = 0; u < k_rows; ++u) {
        const Index r = ((i + u - center_row) % rows + rows) % rows;
        for (Index v = 0; v < k_cols; ++v) {
          const Index c = ((j + v - center_col) % cols + cols) % cols;
          acc += kernel(u, v) * in[r * cols + c];
        }
      }
      out[i * cols + j] = acc;
    }
  }
}

void haar_forward(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out) {
  std::vector<double> tmp(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k];
  for (int level = 0; level < levels; ++level) {
    const Index br = rows >> level;
    const Index bc = cols >> level;
    const Index hr = br / 2;
    const Index hc = bc / 2;
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < br; ++i) {
      for (Index j = 0; j < hc; ++j) {
        const double a = out[i * cols + 2 * j];
        const double b = out[i * cols + 2 * j + 1];
        tmp[i * cols + j] = (a + b) * kInvSqrt2;
        tmp[i * cols + hc + j] = (a - b) * kInvSqrt2;
      }
    }
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < hr; ++i) {
      for (Index j = 0; j < bc; ++j) {
        const double a = tmp[(2 * i) * cols + j];
        const double b = tmp[(2 * i + 1) * cols + j];
        out[i * cols + j] = (a + b) * kInvSqrt2;
        out[(hr + i) * cols + j] = (a - b) * kInvSqrt2;
      }
    }
  }
}

void haar_inverse(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out) {
  std::vector<double> tmp(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k];
  for (int level = levels - 1; level >= 0; --level) {
    const Index br = rows >> level;
    const Index bc = cols >> level;
    const Index hr = br / 2;
    const Index hc = bc / 2;
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < hr; ++i) {
      for (Index j = 0; j < bc; ++j) {
        const double s = out[i * cols + j];
        const double d = out[(hr + i) * cols + j];
        tmp[(2 * i) * cols + j] = (s + d) * kInvSqrt2;
        tmp[(2 * i + 1) * cols + j] = (s - d) * kInvSqrt2;
      }
    }
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < br; ++i) {
      for (Index j = 0; j < hc; ++j) {
        const double s = tmp[i * cols + j];
        const double d = tmp[i * cols + hc + j];
        out[i * cols + 2 * j] = (s + d) * kInvSqrt2;
        out[i * cols + 2 * j + 1] = (s - d) * kInvSqrt2;
      }
    }
  }
}

void huber_prox(std::span<const double> in, double weight, double eps, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = huber_scalar_prox(in[k], weight, eps);
}

void huber_gradient(std::span<const double> in, double eps, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = huber_scalar_gradient(in[k], eps);
}

double huber_sum(std::span<const double> in, double eps) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
  double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::ptrdiff_t k = 0; k < n; ++k) total += huber_scalar(in[k], eps);
  return total;
}

GridMinimum grid_min_rate(const RegularityParams& reg, double delta, const ParameterGrid& grid) {
  if (grid.n_tau < 1 || grid.n_eta < 1) throw Error(ErrorKind::InvalidInput, "empty grid");
  const long long total = static_cast<long long>(grid.n_tau) * grid.n_eta;
  GridMinimum best;
  long long best_index = total;
#pragma omp parallel
  {
    GridMinimum local;
    long long local_index = total;
#pragma omp for schedule(static) nowait
    for (long long node = 0; node < total; ++node) {
      const int i = static_cast<int>(node / grid.n_eta);
      const int j = static_cast<int>(node % grid.n_eta);
      const double tau = grid_point(grid.tau_lo, grid.tau_hi, grid.n_tau, i);
      const double eta = grid_point(grid.eta_lo, grid.eta_hi, grid.n_eta, j);
      if (!grid_node_admissible(reg, delta, tau, eta)) continue;
      const double r = leveraged_rate({delta, eta, tau}, reg);
      if (local_index == total || r < local.value) {
        local = {r, tau, eta};
        local_index = node;
      }
    }
#pragma omp critical
    {
      if (local_index < total &&
          (best_index == total || local.value < best.value ||
           (local.value == best.value && local_index < best_index))) {
        best = local;
        best_index = local_index;
      }
    }
  }
  if (best_index == total) throw Error(ErrorKind::InvalidInput, "no admissible grid node");
  return best;
}

}  // namespace kernels
}  // namespace levprs
