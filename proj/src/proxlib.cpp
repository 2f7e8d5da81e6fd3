#include "levprs/proxlib.hpp"

#include "levprs/kernels.hpp"
#include "levprs/linalg.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <unordered_map>
#include <utility>

namespace levprs {

LeastSquaresModuli estimate_moduli(const Matrix& A) {
  if (A.size() == 0) throw Error(ErrorKind::InvalidInput, "matrix is empty");
  const Matrix gram = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  const double lmax = eig.eigenvalues()(gram.rows() - 1);
  if (!(lmax > 0.0)) throw Error(ErrorKind::InvalidInput, "matrix is zero");
  LeastSquaresModuli out;
  out.alpha = 1.0 / lmax;
  const double floor = static_cast<double>(gram.rows()) *
                       std::numeric_limits<double>::epsilon() * lmax;
  if (A.rows() >= A.cols() && lmin > floor) out.rho = lmin;
  return out;
}

struct LeastSquaresFn::State {
  Matrix A;
  Vector a;
  Matrix gram;
  Vector rhs;
  LeastSquaresModuli moduli;
  mutable std::mutex mutex;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const Eigen::LLT<Matrix>>> cache;
};

LeastSquaresFn::LeastSquaresFn(Matrix A, Vector a) : state_(std::make_shared<State>()) {
  if (A.rows() != a.size()) {
    throw Error(ErrorKind::DimensionMismatch, "A has " + std::to_string(A.rows()) +
                                                  " rows but a has " +
                                                  std::to_string(a.size()) + " entries");
  }
  state_->gram = A.transpose() * A;
  state_->rhs = A.transpose() * a;
  state_->moduli = estimate_moduli(A);
  state_->A = std::move(A);
  state_->a = std::move(a);
}

Vector LeastSquaresFn::prox(double gamma, const Vector& x) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::StepDomain, "prox step must be positive and finite");
  }
  if (x.size() != dimension()) throw Error(ErrorKind::DimensionMismatch, "prox argument size");
  std::shared_ptr<const Eigen::LLT<Matrix>> llt;
  {
    std::lock_guard<std::mutex> lock(state_->mutex);
    auto& slot = state_->cache[std::bit_cast<std::uint64_t>(gamma)];
    if (!slot) {
      const Index m = dimension();
      auto fresh = std::make_shared<Eigen::LLT<Matrix>>(Matrix::Identity(m, m) +
                                                        gamma * state_->gram);
      if (fresh->info() != Eigen::Success) {
        state_->cache.erase(std::bit_cast<std::uint64_t>(gamma));
        throw Error(ErrorKind::SingularSystem, "I + gamma A^T A is not positive definite");
      }
      slot = std::move(fresh);
    }
    llt = slot;
  }
  return llt->solve(x + gamma * state_->rhs);
}

double LeastSquaresFn::value(const Vector& x) const {
  return 0.5 * (state_->A * x - state_->a).squaredNorm();
}

Vector LeastSquaresFn::gradient(const Vector& x) const {
  return state_->gram * x - state_->rhs;
}

Index LeastSquaresFn::dimension() const { return state_->A.cols(); }
const Matrix& LeastSquaresFn::A() const { return state_->A; }
const Vector& LeastSquaresFn::a() const { return state_->a; }
const Matrix& LeastSquaresFn::normal_matrix() const { return state_->gram; }
const Vector& LeastSquaresFn::normal_rhs() const { return state_->rhs; }
LeastSquaresModuli LeastSquaresFn::moduli() const { return state_->moduli; }

std::size_t LeastSquaresFn::cached_factorizations() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->cache.size();
}

ProxFunction LeastSquaresFn::as_prox_function(std::string name) const {
  const LeastSquaresFn self = *this;
  return ProxFunction(
      dimension(), {state_->moduli.rho, state_->moduli.alpha},
      [self](double gamma, const Vector& x) { return self.prox(gamma, x); },
      [self](const Vector& x) { return self.value(x); },
      [self](const Vector& x) { return self.gradient(x); }, std::move(name));
}

HaarTransform::HaarTransform(Index rows, Index cols, int levels)
    : rows_(rows), cols_(cols), levels_(levels) {
  if (rows <= 0 || cols <= 0 || levels < 0) {
    throw Error(ErrorKind::ShapeMismatch, "image sides must be positive and levels nonnegative");
  }
  const Index block = Index{1} << levels;
  if (rows % block != 0 || cols % block != 0) {
    throw Error(ErrorKind::ShapeMismatch, "image sides must be divisible by 2^levels");
  }
}

Vector HaarTransform::forward(const Vector& image) const {
  if (image.size() != size()) throw Error(ErrorKind::ShapeMismatch, "image size");
  Vector out(size());
  kernels::haar_forward(rows_, cols_, levels_, {image.data(), static_cast<std::size_t>(size())},
                        {out.data(), static_cast<std::size_t>(size())});
  return out;
}

Vector HaarTransform::inverse(const Vector& coefficients) const {
  if (coefficients.size() != size()) throw Error(ErrorKind::ShapeMismatch, "coefficient size");
  Vector out(size());
  kernels::haar_inverse(rows_, cols_, levels_,
                        {coefficients.data(), static_cast<std::size_t>(size())},
                        {out.data(), static_cast<std::size_t>(size())});
  return out;
}

namespace {

std::span<const double> view(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

HuberFn::HuberFn(double epsilon, double lambda, Index dimension,
                 std::optional<HaarTransform> transform)
    : epsilon_(epsilon), lambda_(lambda), dimension_(dimension), transform_(std::move(transform)) {
  if (!(epsilon > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "epsilon and lambda must be positive");
  }
  if (dimension <= 0) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  if (transform_ && transform_->size() != dimension) {
    throw Error(ErrorKind::ShapeMismatch, "transform size differs from dimension");
  }
}

double HuberFn::value(const Vector& x) const {
  if (x.size() != dimension_) throw Error(ErrorKind::DimensionMismatch, "argument size");
  const Vector w = transform_ ? transform_->forward(x) : x;
  return lambda_ * kernels::huber_sum(view(w), epsilon_);
}

Vector HuberFn::gradient(const Vector& x) const {
  if (x.size() != dimension_) throw Error(ErrorKind::DimensionMismatch, "argument size");
  const Vector w = transform_ ? transform_->forward(x) : x;
  Vector gw(w.size());
  kernels::huber_gradient(view(w), epsilon_, view(gw));
  gw *= lambda_;
  return transform_ ? transform_->inverse(gw) : gw;
}

Vector HuberFn::prox(double gamma, const Vector& x) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::StepDomain, "prox step must be positive and finite");
  }
  if (x.size() != dimension_) throw Error(ErrorKind::DimensionMismatch, "argument size");
  const Vector w = transform_ ? transform_->forward(x) : x;
  Vector pw(w.size());
  kernels::huber_prox(view(w), gamma * lambda_, epsilon_, view(pw));
  return transform_ ? transform_->inverse(pw) : pw;
}

ProxFunction HuberFn::as_prox_function() const {
  const HuberFn self = *this;
  return ProxFunction(
      dimension_, moduli(), [self](double gamma, const Vector& x) { return self.prox(gamma, x); },
      [self](const Vector& x) { return self.value(x); },
      [self](const Vector& x) { return self.gradient(x); }, "huber");
}

BlurOperator::BlurOperator(Matrix kernel, Index rows, Index cols)
    : kernel_(std::move(kernel)), rows_(rows), cols_(cols) {
  if (kernel_.rows() != kernel_.cols() || kernel_.rows() == 0 || kernel_.rows() % 2 == 0) {
    throw Error(ErrorKind::ShapeMismatch, "kernel must be square with odd side");
  }
  if (rows <= 0 || cols <= 0) throw Error(ErrorKind::ShapeMismatch, "image sides must be positive");
  if (kernel_.minCoeff() < 0.0) throw Error(ErrorKind::InvalidInput, "kernel must be nonnegative");
  if (std::abs(kernel_.sum() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidInput, "kernel must sum to 1");
  }
  flipped_ = kernel_.reverse();
}

BlurOperator BlurOperator::gaussian(int size, double sigma, Index rows, Index cols) {
  if (size <= 0 || size % 2 == 0 || !(sigma > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "gaussian kernel needs odd size and positive sigma");
  }
  const int half = size / 2;
  Matrix k(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double di = i - half;
      const double dj = j - half;
      k(i, j) = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
    }
  }
  k /= k.sum();
  return BlurOperator(std::move(k), rows, cols);
}

BlurOperator BlurOperator::identity(Index rows, Index cols) {
  return BlurOperator(Matrix::Ones(1, 1), rows, cols);
}

Vector BlurOperator::apply(const Vector& image) const {
  if (image.size() != size()) throw Error(ErrorKind::ShapeMismatch, "image size");
  Vector out(size());
  const Index c = kernel_.rows() / 2;
  kernels::correlate_circular(kernel_, c, c, rows_, cols_, view(image), view(out));
  return out;
}

Vector BlurOperator::adjoint(const Vector& image) const {
  if (image.size() != size()) throw Error(ErrorKind::ShapeMismatch, "image size");
  Vector out(size());
  const Index c = kernel_.rows() / 2;
  kernels::correlate_circular(flipped_, c, c, rows_, cols_, view(image), view(out));
  return out;
}

Vector BlurOperator::normal(const Vector& image) const { return adjoint(apply(image)); }

BlurLeastSquaresFn::BlurLeastSquaresFn(BlurOperator op, Vector observation, double cg_tol)
    : op_(std::move(op)), observation_(std::move(observation)), cg_tol_(cg_tol) {
  if (observation_.size() != op_.size()) {
    throw Error(ErrorKind::ShapeMismatch, "observation size differs from the image size");
  }
  adjoint_observation_ = op_.adjoint(observation_);
  const ExtremeEigenvalues ev =
      lanczos_extremes([this](const Vector& v) { return op_.normal(v); }, op_.size());
  moduli_.cocoercivity = 1.0 / ev.largest;
  moduli_.strong_convexity = std::max(ev.smallest, 0.0);
}

Vector BlurLeastSquaresFn::prox(double gamma, const Vector& x) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::StepDomain, "prox step must be positive and finite");
  }
  if (x.size() != op_.size()) throw Error(ErrorKind::DimensionMismatch, "argument size");
  const Vector rhs = x + gamma * adjoint_observation_;
  const CgResult cg = conjugate_gradient(
      [&](const Vector& v) -> Vector { return v + gamma * op_.normal(v); }, rhs, x, cg_tol_,
      10 * static_cast<int>(op_.size()));
  return cg.x;
}

double BlurLeastSquaresFn::value(const Vector& x) const {
  return 0.5 * (op_.apply(x) - observation_).squaredNorm();
}

Vector BlurLeastSquaresFn::gradient(const Vector& x) const {
  return op_.normal(x) - adjoint_observation_;
}

ProxFunction BlurLeastSquaresFn::as_prox_function() const {
  auto self = std::make_shared<const BlurLeastSquaresFn>(*this);
  return ProxFunction(
      op_.size(), moduli_, [self](double gamma, const Vector& x) { return self->prox(gamma, x); },
      [self](const Vector& x) { return self->value(x); },
      [self](const Vector& x) { return self->gradient(x); }, "blur least squares");
}

}  // namespace levprs
