#include <doctest.h>

#include "levprs/harness.hpp"
#include "levprs/linalg.hpp"
#include "levprs/proxlib.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace levprs;

TEST_CASE("least-squares prox small cases") {
  const LeastSquaresFn id(Matrix::Identity(3, 3), Vector::Zero(3));
  const Vector x = Eigen::Vector3d(2.0, -4.0, 1.0);
  CHECK((id.prox(1.0, x) - x / 2.0).norm() <= 1e-15);

  const Matrix D = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const Vector a = Eigen::Vector3d(1.0, 1.0, 1.0);
  const LeastSquaresFn diag(D, a);
  const Vector p = diag.prox(0.5, x);
  for (int i = 0; i < 3; ++i) {
    const double d = D(i, i);
    CHECK(p(i) == doctest::Approx((x(i) + 0.5 * d * a(i)) / (1.0 + 0.5 * d * d)).epsilon(1e-14));
  }
}

TEST_CASE("least-squares prox satisfies optimality and matches brute force") {
  Rng rng(8);
  const Matrix A = rng.uniform_matrix(7, 5);
  const Vector a = rng.uniform_vector(7);
  const LeastSquaresFn ls(A, a);
  for (double gamma : {0.1, 1.0, 7.0}) {
    const Vector x = rng.uniform_vector(5) * 4.0 - Vector::Constant(5, 2.0);
    const Vector p = ls.prox(gamma, x);
    CHECK((p - x + gamma * ls.gradient(p)).norm() <= 1e-12 * (1.0 + x.norm()));
    const Vector brute = oracle::brute_prox([&](const Vector& y) { return ls.value(y); }, gamma, x);
    CHECK((p - brute).norm() <= 1e-6);
  }
  CHECK(ls.cached_factorizations() == 3);
  ls.prox(1.0, Vector::Zero(5));
  const LeastSquaresFn copy = ls;
  copy.prox(0.1, Vector::Zero(5));
  CHECK(ls.cached_factorizations() == 3);
  CHECK_THROWS_AS(ls.prox(1.0, Vector::Zero(4)), Error);
  CHECK_THROWS_AS(LeastSquaresFn(A, Vector::Zero(3)), Error);
}

TEST_CASE("gradient matches finite differences") {
  Rng rng(9);
  const LeastSquaresFn ls(rng.uniform_matrix(6, 4), rng.uniform_vector(6));
  const Vector x = rng.uniform_vector(4);
  const Vector fd = oracle::fd_gradient([&](const Vector& y) { return ls.value(y); }, x);
  CHECK((fd - ls.gradient(x)).norm() <= 1e-7);
}

TEST_CASE("moduli of least-squares terms") {
  const LeastSquaresModuli two = estimate_moduli(2.0 * Matrix::Identity(4, 4));
  CHECK(two.rho == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(two.alpha == doctest::Approx(0.25).epsilon(1e-14));
  Matrix col(2, 1);
  col << 1.0, 0.0;
  const LeastSquaresModuli c = estimate_moduli(col);
  CHECK(c.rho == doctest::Approx(1.0));
  CHECK(c.alpha == doctest::Approx(1.0));
  Rng rng(10);
  CHECK(estimate_moduli(rng.uniform_matrix(3, 6)).rho == 0.0);
  for (int k = 0; k < 20; ++k) {
    const LeastSquaresModuli m = estimate_moduli(rng.uniform_matrix(8, 5));
    CHECK(m.alpha * m.rho <= 1.0);
    CHECK(m.rho > 0.0);
  }
}

TEST_CASE("Huber function basics") {
  const double eps = 0.5;
  const double lambda = 2.0;
  const HuberFn h(eps, lambda, 1);
  CHECK(h.value(Vector::Constant(1, 2.0 * eps)) == doctest::Approx(1.5 * lambda * eps));
  CHECK(h.value(Vector::Constant(1, 0.0)) == 0.0);
  CHECK(h.value(Vector::Constant(1, 0.25)) == doctest::Approx(lambda * 0.25 * 0.25 / (2.0 * eps)));

  const HuberFn unit(1.0, 1.0, 1);
  CHECK(unit.prox(0.5, Vector::Constant(1, 0.3))(0) == doctest::Approx(0.2));
  CHECK(unit.prox(1.0, Vector::Constant(1, 2.0))(0) == doctest::Approx(1.0));
  CHECK(unit.prox(1.0, Vector::Constant(1, -2.0))(0) == doctest::Approx(-1.0));

  Rng rng(11);
  const HuberFn many(0.1, 0.7, 6);
  for (int k = 0; k < 20; ++k) {
    const Vector x = rng.uniform_vector(6) - Vector::Constant(6, 0.5);
    const Vector y = rng.uniform_vector(6) - Vector::Constant(6, 0.5);
    const Vector fd = oracle::fd_gradient([&](const Vector& v) { return many.value(v); }, x, 1e-7);
    CHECK((fd - many.gradient(x)).norm() <= 1e-6);
    CHECK((many.gradient(x) - many.gradient(y)).norm() <=
          (0.7 / 0.1) * (x - y).norm() * (1.0 + 1e-12));
    const double gamma = 0.05 + rng.uniform();
    const Vector px = many.prox(gamma, x);
    CHECK((many.prox(gamma, -x) + px).norm() <= 1e-15);
    CHECK((px - many.prox(gamma, y)).norm() <= (x - y).norm() * (1.0 + 1e-12));
    const Vector brute = oracle::brute_prox([&](const Vector& v) { return many.value(v); }, gamma, x);
    CHECK((px - brute).norm() <= 1e-6);
  }
  CHECK_THROWS_AS(HuberFn(0.0, 1.0, 3), Error);
  CHECK_THROWS_AS(HuberFn(1.0, -1.0, 3), Error);
}

TEST_CASE("Haar transform") {
  const HaarTransform w(4, 6, 1);
  const Vector flat = Vector::Constant(24, 3.0);
  const Vector c = w.forward(flat);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 6; ++j) {
      if (i >= 2 || j >= 3) CHECK(std::abs(c(i * 6 + j)) <= 1e-14);
    }
  }
  Rng rng(12);
  for (int levels : {1, 2}) {
    const HaarTransform t(8, 8, levels);
    const Vector x = rng.uniform_vector(64);
    const Vector y = t.forward(x);
    CHECK(y.norm() == doctest::Approx(x.norm()).epsilon(1e-14));
    CHECK((t.inverse(y) - x).norm() <= 1e-13);
  }
  CHECK_THROWS_AS(HaarTransform(3, 4, 1), Error);
  CHECK_THROWS_AS(HaarTransform(4, 4, 3), Error);
  CHECK_THROWS_AS(w.forward(Vector::Zero(10)), Error);
}

TEST_CASE("Huber composed with Haar uses the orthonormal composition rule") {
  const HaarTransform w(4, 4, 1);
  const HuberFn h(0.2, 0.5, 16, w);
  Rng rng(14);
  for (int k = 0; k < 3; ++k) {
    const Vector x = 2.0 * rng.uniform_vector(16) - Vector::Ones(16);
    const double gamma = 0.3 + rng.uniform();
    const Vector p = h.prox(gamma, x);
    const Vector brute = oracle::brute_prox([&](const Vector& v) { return h.value(v); }, gamma, x);
    CHECK((p - brute).norm() <= 1e-6);
    const Vector fd = oracle::fd_gradient([&](const Vector& v) { return h.value(v); }, x, 1e-7);
    CHECK((fd - h.gradient(x)).norm() <= 1e-6);
  }
}

TEST_CASE("blur operator") {
  Rng rng(15);
  const BlurOperator id = BlurOperator::identity(5, 7);
  const Vector x = rng.uniform_vector(35);
  CHECK((id.apply(x) - x).norm() == 0.0);

  const BlurOperator g = BlurOperator::gaussian(5, 1.0, 16, 16);
  CHECK(g.kernel().sum() == doctest::Approx(1.0).epsilon(1e-15));
  const Vector flat = Vector::Constant(256, 0.7);
  CHECK((g.apply(flat) - flat).cwiseAbs().maxCoeff() <= 1e-15);

  const Vector u = rng.uniform_vector(256);
  const Vector v = rng.uniform_vector(256);
  CHECK(g.apply(u).dot(v) == doctest::Approx(u.dot(g.adjoint(v))).epsilon(1e-13));

  Vector q = rng.uniform_vector(256);
  double norm = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Vector nq = g.normal(q);
    norm = nq.norm() / q.norm();
    q = nq / nq.norm();
  }
  CHECK(norm <= 1.0 + 1e-12);

  Matrix asym = Matrix::Zero(3, 3);
  asym(0, 1) = 1.0;
  const BlurOperator shift(asym, 6, 6);
  const Vector e = Vector::Unit(36, 14);
  CHECK(shift.apply(e).dot(Vector::Unit(36, 20)) + shift.apply(e).dot(Vector::Unit(36, 8)) == 1.0);
  CHECK(shift.apply(u.head(36)).dot(v.head(36)) ==
        doctest::Approx(u.head(36).dot(shift.adjoint(v.head(36)))).epsilon(1e-14));

  CHECK_THROWS_AS(BlurOperator(Matrix::Constant(2, 2, 0.25), 8, 8), Error);
  CHECK_THROWS_AS(BlurOperator(Matrix::Constant(3, 3, 0.2), 8, 8), Error);
  Matrix neg = Matrix::Zero(3, 3);
  neg(1, 1) = 2.0;
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS(BlurOperator(neg, 8, 8), Error);
}

TEST_CASE("blurred least squares: moduli from Lanczos agree with the DFT spectrum") {
  for (double sigma : {0.5, 1.0}) {
    const BlurOperator g = BlurOperator::gaussian(5, sigma, 16, 16);
    const BlurLeastSquaresFn fn(g, Vector::Zero(256));
    const auto [lo, hi] = oracle::blur_normal_spectrum(g.kernel(), 16, 16);
    CHECK(fn.moduli().strong_convexity == doctest::Approx(lo).epsilon(1e-8));
    CHECK(fn.moduli().cocoercivity == doctest::Approx(1.0 / hi).epsilon(1e-8));
  }
}

TEST_CASE("blurred least-squares prox solves its normal equations") {
  Rng rng(16);
  const BlurOperator g = BlurOperator::gaussian(5, 0.8, 12, 10);
  const Vector b = rng.uniform_vector(120);
  const BlurLeastSquaresFn fn(g, b);
  const Vector x = rng.uniform_vector(120);
  for (double gamma : {0.2, 3.0}) {
    const Vector p = fn.prox(gamma, x);
    CHECK((p - x + gamma * fn.gradient(p)).norm() <= 1e-12 * (1.0 + x.norm()));
  }
  const Vector fd = oracle::fd_gradient([&](const Vector& v) { return fn.value(v); }, x);
  CHECK((fd - fn.gradient(x)).norm() <= 1e-6);
}

TEST_CASE("conjugate gradients and Lanczos on a dense matrix") {
  Rng rng(17);
  const Matrix M = rng.uniform_matrix(30, 30);
  const Matrix S = M.transpose() * M + 0.1 * Matrix::Identity(30, 30);
  const LinearMap apply = [&](const Vector& v) { return Vector(S * v); };
  const Vector rhs = rng.uniform_vector(30);
  const CgResult cg = conjugate_gradient(apply, rhs, Vector::Zero(30), 1e-13, 500);
  CHECK((S * cg.x - rhs).norm() <= 1e-12 * rhs.norm());
  const ExtremeEigenvalues ev = lanczos_extremes(apply, 30);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  CHECK(ev.smallest == doctest::Approx(eig.eigenvalues()(0)).epsilon(1e-9));
  CHECK(ev.largest == doctest::Approx(eig.eigenvalues()(29)).epsilon(1e-10));
}
