#include <doctest.h>

#include "levprs/harness.hpp"
#include "levprs/leverage.hpp"
#include "levprs/rates.hpp"
#include "levprs/solvers.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace levprs;

namespace {

QuadraticFunction diagonal(const Vector& d) {
  QuadraticFunction q;
  q.linear = Vector::Zero(d.size());
  q.hessian = d.asDiagonal();
  return q;
}

CompositeProblem tight_pair(const RegularityParams& reg) {
  const ProxFunction f =
      diagonal(Eigen::Vector2d(reg.rho, 1.0 / reg.alpha)).as_prox_function(reg.f());
  const ProxFunction g =
      diagonal(Eigen::Vector2d(reg.mu, 1.0 / reg.beta)).as_prox_function(reg.g());
  return CompositeProblem(f, g, reg, Vector::Zero(2));
}

ProxFunction zero_function(Index n) {
  return ProxFunction(
      n, {0.0, 0.0}, [](double, const Vector& x) { return x; }, [](const Vector&) { return 0.0; },
      [](const Vector& x) { return Vector(Vector::Zero(x.size())); }, "zero");
}

}  // namespace

TEST_CASE("tight example contracts by exactly r* in each coordinate") {
  const RegularityParams reg{1.0, 0.25, 0.0, 1.0};
  const CompositeProblem problem = tight_pair(reg);
  const LeverageParams lp = simple_optimal_params(reg);
  const double rstar = optimal_rate(reg);
  Vector z = Vector::Ones(2);
  for (int n = 0; n < 20; ++n) {
    const IterateState s = prs_lev_step(z, problem, lp);
    CHECK(std::abs(s.z_next(0)) == doctest::Approx(rstar * std::abs(z(0))).epsilon(1e-12));
    CHECK(std::abs(s.z_next(1)) == doctest::Approx(rstar * std::abs(z(1))).epsilon(1e-12));
    // The reflected point obeys its defining relation.
    const Vector y = (2.0 * lp.tau / (lp.tau + lp.eta)) * s.x -
                     ((lp.tau - lp.eta) / (lp.tau + lp.eta)) * z;
    CHECK((s.y - y).norm() <= 1e-15 * (1.0 + z.norm()));
    z = s.z_next;
  }

  SolverConfig config;
  config.max_iter = 20;
  config.stopping = StoppingRule::residual;
  config.tol = 1e-300;
  const SolveResult r = prs_lev_solve(problem, lp, config, Vector::Ones(2));
  REQUIRE(r.trace.records.size() == 20);
  CHECK(*r.trace.records.front().contraction_ratio == doctest::Approx(0.116963).epsilon(1e-6));
  for (const TraceRecord& rec : r.trace.records) {
    CHECK(std::abs(*rec.contraction_ratio - rstar) <= 1e-10);
  }
}

TEST_CASE("zero shifts reproduce the classical step bitwise") {
  const InstanceSpec spec{8, 10, 9, 0.5, 15.0, 4, std::nullopt, std::nullopt};
  const CompositeProblem problem = generate_instance(spec);
  Rng rng(3);
  Vector z = rng.uniform_vector(8);
  Vector w = z;
  for (int n = 0; n < 10; ++n) {
    z = prs_lev_step(z, problem, {0.0, 0.0, 0.8}).z_next;
    w = prs_classic_step(w, problem, 0.8).z_next;
    CHECK((z - w).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("with eta = 0 and delta = delta* the step is the reduced scheme") {
  const InstanceSpec spec{20, 20, 20, 0.5, 15.0, 8, std::nullopt, std::nullopt};
  const LeastSquaresInstance inst = generate_least_squares_instance(spec);
  const RegularityParams& reg = inst.problem.regularity();
  const LeverageParams lp = simple_optimal_params(reg);
  const double d = lp.delta;
  const double t = lp.tau;
  Rng rng(5);
  const Vector z = rng.uniform_vector(20);
  const Vector x = inst.f.prox(t / (1.0 + d * t), z / (1.0 + d * t));
  const Vector p = inst.g.prox(t / (1.0 - d * t), (2.0 * x - z) / (1.0 - d * t));
  const Vector expected = z + 2.0 * (p - x);
  const IterateState s = prs_lev_step(z, inst.problem, lp);
  CHECK((s.z_next - expected).norm() <= 1e-13 * (1.0 + z.norm()));
}

TEST_CASE("starting at the fixed point stops after one step") {
  const RegularityParams reg{1.0, 0.25, 0.2, 1.0};
  const CompositeProblem problem = tight_pair(reg);
  const SolveResult r = prs_lev_solve(problem, simple_optimal_params(reg), {}, Vector::Zero(2));
  CHECK(r.trace.status == SolveStatus::converged);
  CHECK(r.trace.iterations == 1);
  CHECK_FALSE(r.trace.records.front().contraction_ratio.has_value());
  const SolveResult c = prs_classic_solve(problem, 0.5, {}, Vector::Zero(2));
  CHECK(c.trace.iterations == 1);
}

TEST_CASE("iteration count respects the linear-rate bound") {
  const InstanceSpec spec{20, 20, 20, 0.5, 15.0, 21, std::nullopt, std::nullopt};
  const CompositeProblem problem = generate_instance(spec);
  const RegularityParams& reg = problem.regularity();
  const LeverageParams lp = simple_optimal_params(reg);
  Rng rng(2);
  const Vector z0 = rng.uniform_vector(20);
  SolverConfig config;
  config.max_iter = 100000;
  const SolveResult r = prs_lev_solve(problem, lp, config, z0);
  REQUIRE(r.trace.status == SolveStatus::converged);
  const Vector zstar = fixed_point_oracle(problem, lp);
  const double bound =
      std::log(config.tol / (z0 - zstar).norm()) / std::log(leveraged_rate(lp, reg)) + 1.0;
  CHECK(r.trace.iterations <= bound);
}

TEST_CASE("per-step contraction never exceeds r(lp) for valid parameters") {
  Rng rng(41);
  for (int k = 0; k < 15; ++k) {
    const InstanceSpec spec{10, 6 + k, 12, 0.5, 15.0, 500u + k, std::nullopt, std::nullopt};
    const CompositeProblem problem = generate_instance(spec);
    const RegularityParams& reg = problem.regularity();
    const double delta = -reg.rho + rng.uniform() * (reg.rho + reg.mu);
    LeverageParams lp = optimal_params(reg, delta);
    lp.tau *= 0.5 + rng.uniform();  // any admissible step, not only the optimal one
    try {
      validate_leverage(lp, reg);
    } catch (const Error&) {
      continue;
    }
    const double r = leveraged_rate(lp, reg);
    SolverConfig config;
    config.max_iter = 200;
    config.stopping = StoppingRule::fixed_point_distance;
    config.tol = 1e-300;
    const Vector z0 = rng.uniform_vector(10);
    const SolveResult res = prs_lev_solve(problem, lp, config, z0);
    const double d0 = *res.trace.initial_distance;
    double prev = d0;
    for (const TraceRecord& rec : res.trace.records) {
      CHECK(*rec.dist_to_fixed_point <= r * prev + 1e-10 * d0);
      prev = *rec.dist_to_fixed_point;
    }
  }
}

TEST_CASE("leveraged solve recovers a minimizer") {
  Rng rng(43);
  for (int k = 0; k < 5; ++k) {
    InstanceSpec spec{12, 15, 11, 0.5, 15.0, 900u + k, rng.uniform_vector(15),
                      rng.uniform_vector(11)};
    const LeastSquaresInstance inst = generate_least_squares_instance(spec);
    const RegularityParams& reg = inst.problem.regularity();
    const LeverageParams lp = optimal_params(reg, -reg.rho + 0.3 * (reg.rho + reg.mu));
    SolverConfig config;
    config.max_iter = 100000;
    config.stopping = StoppingRule::residual;
    config.tol = 1e-13;
    const SolveResult r = prs_lev_solve(inst.problem, lp, config, Vector::Zero(12));
    REQUIRE(r.trace.status == SolveStatus::converged);
    const Vector gf = inst.f.gradient(r.x);
    CHECK((gf + inst.g.gradient(r.x)).norm() <= 1e-6 * (1.0 + gf.norm()));
  }
}

TEST_CASE("classical PRS on the tight pair contracts at its own rate") {
  const RegularityParams reg{1.0, 0.25, 0.0, 1.0};
  const CompositeProblem problem = tight_pair(reg);
  const StepRate s = classical_prs_optimal(reg.f());
  SolverConfig config;
  config.max_iter = 30;
  config.tol = 1e-300;
  const SolveResult r = prs_classic_solve(problem, s.tau, config, Eigen::Vector2d(1.0, -2.0));
  for (const TraceRecord& rec : r.trace.records) {
    CHECK(*rec.contraction_ratio <= s.rate + 1e-12);
  }
}

TEST_CASE("PRS oscillates on the axis indicator while DRS converges") {
  const ProxFunction axis(
      2, {0.0, 0.0}, [](double, const Vector& x) { return Vector(Eigen::Vector2d(x(0), 0.0)); },
      {}, {}, "axis indicator");
  const CompositeProblem problem(axis, zero_function(2), {0, 0, 0, 0});
  Vector z = Eigen::Vector2d(1.0, 1.0);
  std::vector<Vector> orbit{z};
  for (int n = 0; n < 6; ++n) orbit.push_back(z = prs_classic_step(z, problem, 1.0).z_next);
  for (int n = 0; n + 2 < static_cast<int>(orbit.size()); ++n) {
    CHECK((orbit[n + 2] - orbit[n]).norm() <= 1e-14);
    CHECK((orbit[n + 1] - orbit[n]).norm() > 0.1);
  }
  SolverConfig config;
  config.max_iter = 100;
  const SolveResult prs = prs_classic_solve(problem, 1.0, config, Eigen::Vector2d(1.0, 1.0));
  CHECK(prs.trace.status != SolveStatus::converged);
  const SolveResult drs = drs_solve(problem, 1.0, 0.5, config, Eigen::Vector2d(1.0, 1.0));
  CHECK(drs.trace.status == SolveStatus::converged);
  CHECK(std::abs(drs.z(1)) <= 1e-10);
}

TEST_CASE("DRS with unit relaxation is PRS") {
  const InstanceSpec spec{6, 9, 7, 0.5, 15.0, 6, std::nullopt, std::nullopt};
  const CompositeProblem problem = generate_instance(spec);
  Rng rng(1);
  Vector a = rng.uniform_vector(6);
  Vector b = a;
  for (int n = 0; n < 15; ++n) {
    a = prs_classic_step(a, problem, 0.3).z_next;
    b = drs_step(b, problem, 0.3, 1.0).z_next;
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(drs_solve(problem, 0.3, 0.0, {}, a), Error);
  CHECK_THROWS_AS(drs_solve(problem, 0.3, 1.5, {}, a), Error);
}

TEST_CASE("tuned DRS contracts at most by 1/(1 + sqrt(beta rho))") {
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    // f with curvatures in [1, 5], g with curvatures in [0, 1].
    Vector cf(4);
    Vector cg(4);
    for (int i = 0; i < 4; ++i) {
      cf(i) = 1.0 + 4.0 * rng.uniform();
      cg(i) = rng.uniform();
    }
    cf(0) = 1.0;
    cg(1) = 1.0;
    const RegularityParams reg{1.0, 1.0 / cf.maxCoeff(), 0.0, 1.0};
    const CompositeProblem problem(diagonal(cf).as_prox_function(reg.f()),
                                   diagonal(cg).as_prox_function(reg.g()), reg, Vector::Zero(4));
    const DrsParams p = drs_optimal_rate(reg);
    SolverConfig config;
    config.max_iter = 40;
    config.tol = 1e-300;
    const SolveResult r = drs_solve(problem, p.tau, p.lambda, config, rng.uniform_vector(4));
    for (const TraceRecord& rec : r.trace.records) {
      if (rec.contraction_ratio) CHECK(*rec.contraction_ratio <= 0.5 + 1e-12);
    }
  }
}

TEST_CASE("FISTA solves a least-squares problem with a zero partner") {
  Rng rng(19);
  const Matrix A = rng.uniform_matrix(12, 5);
  const Vector a = rng.uniform_vector(12);
  const LeastSquaresFn ls(A, a);
  const Vector xstar = (A.transpose() * A).ldlt().solve(A.transpose() * a);
  const RegularityParams reg{ls.moduli().rho, ls.moduli().alpha, 0.0, 0.0};
  const CompositeProblem problem(ls.as_prox_function(), zero_function(5), reg, xstar);
  SolverConfig config;
  config.max_iter = 20000;
  config.tol = 1e-11;
  const SolveResult r = fista_solve(problem, FistaMode::forward_on_f, config, Vector::Zero(5));
  CHECK(r.trace.status == SolveStatus::converged);
  CHECK((r.x - xstar).norm() <= 1e-10);
  CHECK_THROWS_AS(fista_solve(problem, FistaMode::forward_on_g, config, Vector::Zero(5)), Error);
}

TEST_CASE("FISTA never contracts faster than r* on least squares") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    const InstanceSpec spec{20, 20, 20, 0.5, 15.0, seed, std::nullopt, std::nullopt};
    const CompositeProblem generated = generate_instance(spec);
    const RegularityParams& reg = generated.regularity();
    const CompositeProblem problem(generated.f(), generated.g(), reg, Vector::Zero(20));
    Rng rng(seed);
    const Vector x0 = rng.uniform_vector(20);
    SolverConfig config;
    config.max_iter = 400;
    config.tol = 1e-300;
    const double rstar = optimal_rate(reg);
    for (FistaMode mode : {FistaMode::forward_on_f, FistaMode::forward_on_g}) {
      const SolveResult r = fista_solve(problem, mode, config, x0);
      const auto& recs = r.trace.records;
      const double tail = std::pow(*recs.back().dist_to_fixed_point /
                                       *recs[recs.size() / 2].dist_to_fixed_point,
                                   1.0 / static_cast<double>(recs.size() - recs.size() / 2 - 1));
      CHECK(tail >= rstar);
    }
  }
}

TEST_CASE("a non-contractive map is reported as divergent") {
  const ProxFunction expand(
      2, {0.0, 0.0}, [](double, const Vector& x) { return Vector(3.0 * x); }, {}, {}, "bad");
  const CompositeProblem problem(expand, zero_function(2), {0, 0, 0, 0}, Vector::Zero(2));
  SolverConfig config;
  config.max_iter = 1000;
  const SolveResult r = prs_classic_solve(problem, 1.0, config, Eigen::Vector2d(1.0, 0.0));
  CHECK(r.trace.status == SolveStatus::diverged);
  CHECK(r.trace.iterations < 1000);
}

TEST_CASE("solver configuration errors") {
  const RegularityParams reg{1.0, 0.25, 0.0, 1.0};
  const CompositeProblem problem = tight_pair(reg);
  const LeverageParams lp = simple_optimal_params(reg);
  SolverConfig bad;
  bad.max_iter = 0;
  CHECK_THROWS_AS(prs_lev_solve(problem, lp, bad, Vector::Ones(2)), Error);
  bad.max_iter = 10;
  bad.tol = 0.0;
  CHECK_THROWS_AS(prs_lev_solve(problem, lp, bad, Vector::Ones(2)), Error);
  CHECK_THROWS_AS(prs_lev_solve(problem, lp, {}, Vector::Ones(3)), Error);
  CHECK_THROWS_AS(prs_lev_solve(problem, {0.0, 0.0, 0.0}, {}, Vector::Ones(2)), Error);
  CHECK_THROWS_AS(prs_classic_solve(problem, -1.0, {}, Vector::Ones(2)), Error);

  const CompositeProblem unknown(problem.f(), problem.g(), reg);
  SolverConfig needs;
  needs.stopping = StoppingRule::normalized_error;
  CHECK_THROWS_AS(prs_classic_solve(unknown, 1.0, needs, Vector::Ones(2)), Error);
  SolverConfig quiet;
  quiet.record_trace = false;
  const SolveResult r = prs_lev_solve(problem, lp, quiet, Vector::Ones(2));
  CHECK(r.trace.records.empty());
  CHECK(r.trace.iterations > 0);
}
