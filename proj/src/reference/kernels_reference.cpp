#include "levprs/kernels.hpp"

#include "levprs/rates.hpp"

#include <cmath>
#include <vector>

namespace levprs::reference {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Index wrap(Index i, Index n) { return ((i % n) + n) % n; }

double grid_point(double lo, double hi, int n, int i) {
  return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// One analysis level on the top-left br x bc block of a row-major image.
void haar_level(Index cols, Index br, Index bc, std::span<double> img) {
  std::vector<double> row(bc);
  for (Index i = 0; i < br; ++i) {
    for (Index j = 0; j < bc / 2; ++j) {
      const double a = img[i * cols + 2 * j];
      const double b = img[i * cols + 2 * j + 1];
      row[j] = (a + b) * kInvSqrt2;
      row[bc / 2 + j] = (a - b) * kInvSqrt2;
    }
    for (Index j = 0; j < bc; ++j) img[i * cols + j] = row[j];
  }
  std::vector<double> col(br);
  for (Index j = 0; j < bc; ++j) {
    for (Index i = 0; i < br / 2; ++i) {
      const double a = img[(2 * i) * cols + j];
      const double b = img[(2 * i + 1) * cols + j];
      col[i] = (a + b) * kInvSqrt2;
      col[br / 2 + i] = (a - b) * kInvSqrt2;
    }
    for (Index i = 0; i < br; ++i) img[i * cols + j] = col[i];
  }
}

void haar_level_inverse(Index cols, Index br, Index bc, std::span<double> img) {
  std::vector<double> col(br);
  for (Index j = 0; j < bc; ++j) {
    for (Index i = 0; i < br / 2; ++i) {
      const double s = img[i * cols + j];
      const double d = img[(br / 2 + i) * cols + j];
      col[2 * i] = (s + d) * kInvSqrt2;
      col[2 * i + 1] = (s - d) * kInvSqrt2;
    }
    for (Index i = 0; i < br; ++i) img[i * cols + j] = col[i];
  }
  std::vector<double> row(bc);
  for (Index i = 0; i < br; ++i) {
    for (Index j = 0; j < bc / 2; ++j) {
      const double s = img[i * cols + j];
      const double d = img[i * cols + bc / 2 + j];
      row[2 * j] = (s + d) * kInvSqrt2;
      row[2 * j + 1] = (s - d) * kInvSqrt2;
    }
    for (Index j = 0; j < bc; ++j) img[i * cols + j] = row[j];
  }
}

}  // namespace

void correlate_circular(const Matrix& kernel, Index center_row, Index center_col, Index rows,
                        Index cols, std::span<const double> in, std::span<double> out) {
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (Index u = 0; u < kernel.rows(); ++u) {
        for (Index v = 0; v < kernel.cols(); ++v) {
          acc += kernel(u, v) *
                 in[wrap(i + u - center_row, rows) * cols + wrap(j + v - center_col, cols)];
        }
      }
      out[i * cols + j] = acc;
    }
  }
}

void haar_forward(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k];
  for (int level = 0; level < levels; ++level) haar_level(cols, rows >> level, cols >> level, out);
}

void haar_inverse(Index rows, Index cols, int levels, std::span<const double> in,
                  std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k];
  for (int level = levels - 1; level >= 0; --level) {
    haar_level_inverse(cols, rows >> level, cols >> level, out);
  }
}

void huber_prox(std::span<const double> in, double weight, double eps, std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = huber_scalar_prox(in[k], weight, eps);
}

void huber_gradient(std::span<const double> in, double eps, std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = huber_scalar_gradient(in[k], eps);
}

double huber_sum(std::span<const double> in, double eps) {
  double total = 0.0;
  for (double w : in) total += huber_scalar(w, eps);
  return total;
}

GridMinimum grid_min_rate(const RegularityParams& reg, double delta, const ParameterGrid& grid) {
  if (grid.n_tau < 1 || grid.n_eta < 1) throw Error(ErrorKind::InvalidInput, "empty grid");
  GridMinimum best;
  bool found = false;
  for (int i = 0; i < grid.n_tau; ++i) {
    const double tau = grid_point(grid.tau_lo, grid.tau_hi, grid.n_tau, i);
    for (int j = 0; j < grid.n_eta; ++j) {
      const double eta = grid_point(grid.eta_lo, grid.eta_hi, grid.n_eta, j);
      if (!grid_node_admissible(reg, delta, tau, eta)) continue;
      const double r = leveraged_rate({delta, eta, tau}, reg);
      if (!found || r < best.value) {
        best = {r, tau, eta};
        found = true;
      }
    }
  }
  if (!found) throw Error(ErrorKind::InvalidInput, "no admissible grid node");
  return best;
}

}  // namespace levprs::reference
