#include "levprs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace levprs {

CgResult conjugate_gradient(const LinearMap& apply, const Vector& rhs, const Vector& x0,
                            double tol, int max_iter) {
  if (rhs.size() != x0.size()) throw Error(ErrorKind::DimensionMismatch, "CG start size");
  CgResult out;
  out.x = x0;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.x.setZero();
    return out;
  }
  Vector r = rhs - apply(out.x);
  Vector d = r;
  double rr = r.squaredNorm();
  const double target = tol * rhs_norm;
  int k = 0;
  while (std::sqrt(rr) > target && k < max_iter) {
    const Vector ad = apply(d);
    const double curvature = d.dot(ad);
    if (!(curvature > 0.0)) throw Error(ErrorKind::SingularSystem, "CG met nonpositive curvature");
    const double step = rr / curvature;
    out.x += step * d;
    r -= step * ad;
    const double rr_next = r.squaredNorm();
    d = r + (rr_next / rr) * d;
    rr = rr_next;
    ++k;
  }
  out.iterations = k;
  out.relative_residual = std::sqrt(rr) / rhs_norm;
  return out;
}

ExtremeEigenvalues lanczos_extremes(const LinearMap& apply, Index n, double tol, int max_steps,
                                    std::uint64_t seed) {
  if (n <= 0) throw Error(ErrorKind::InvalidInput, "operator dimension must be positive");
  std::mt19937_64 gen(seed);
  Vector q(n);
  for (Index i = 0; i < n; ++i) q(i) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  q.normalize();

  const int steps_cap = static_cast<int>(std::min<Index>(max_steps, n));
  std::vector<Vector> basis;
  basis.reserve(steps_cap);
  std::vector<double> diag;
  std::vector<double> off;
  ExtremeEigenvalues out;
  double prev_lo = 0.0;
  double prev_hi = 0.0;
  int settled = 0;

  for (int k = 0; k < steps_cap; ++k) {
    basis.push_back(q);
    Vector w = apply(q);
    const double a = q.dot(w);
    diag.push_back(a);
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& v : basis) w -= v.dot(w) * v;
    }
    const double b = w.norm();

    const Index m = static_cast<Index>(diag.size());
    Matrix t = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
      t(i, i) = diag[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = off[i];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(t, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(m - 1);
    out.smallest = lo;
    out.largest = hi;
    out.steps = k + 1;

    const double scale = std::max(std::abs(hi), 1e-300);
    const bool still = k > 0 && std::abs(lo - prev_lo) <= tol * scale &&
                       std::abs(hi - prev_hi) <= tol * scale;
    settled = still ? settled + 1 : 0;
    if (settled >= 3) break;
    if (b <= 1e-14 * scale) break;  // invariant subspace found: Ritz values are exact
    prev_lo = lo;
    prev_hi = hi;
    off.push_back(b);
    q = w / b;
  }
  return out;
}

}  // namespace levprs
