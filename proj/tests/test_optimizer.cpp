#include <doctest.h>

#include <cmath>
#include <numbers>

#include "irsmc/gradient_check.hpp"
#include "irsmc/linalg.hpp"
#include "irsmc/optimizer.hpp"
#include "oracles.hpp"

using namespace irsmc;

namespace {

double rel_norm(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

ChannelAuxiliaries scalar_aux(Complex a, Complex b, Complex c) {
  return {CMatrix::Constant(1, 1, a), CMatrix::Constant(1, 1, b), CMatrix::Constant(1, 1, c)};
}

// C(x) = log2(1 + |a - b c / (j x + zs)|^2 r) and its derivative in x.
struct ScalarProblem {
  Complex a, b, c, zs;
  double r;

  Complex h(double x) const { return a - b * c / (Complex{0.0, x} + zs); }
  double rate(double x) const { return std::log2(1.0 + std::norm(h(x)) * r); }
  double derivative(double x) const {
    const Complex w = Complex{0.0, x} + zs;
    const Complex dh = b * c * Complex{0.0, 1.0} / (w * w);
    return r * 2.0 * std::real(std::conj(h(x)) * dh) / ((1.0 + std::norm(h(x)) * r) * std::numbers::ln2);
  }
};

}  // namespace

TEST_CASE("rate of simple channels") {
  SUBCASE("zero channel") {
    CHECK(achievable_rate(CMatrix::Zero(3, 4), TransmitCovariance::scaled_identity(4, 1.0)) == 0.0);
  }
  SUBCASE("single receiver") {
    CMatrix h(1, 3);
    h << Complex{1.0, 2.0}, Complex{-0.5, 0.0}, Complex{0.0, 3.0};
    const double expected = std::log2(1.0 + h.squaredNorm() / 3.0);
    CHECK(achievable_rate(h, TransmitCovariance::scaled_identity(3, 1.0)) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("log det matches the eigenvalue route") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const RandomInstance inst = make_random_instance(4, 8, 3, seed);
      const double lib = achievable_rate(inst.aux, inst.Z_S, inst.state, inst.covariance);
      const double ref = oracle::rate(inst.aux.A, inst.aux.B, inst.aux.C, inst.Z_S, inst.covariance.R_T,
                                      inst.state.reactances_ohm);
      CHECK(std::abs(lib - ref) <= 1e-10 * std::max(1.0, ref));
      CHECK(lib >= 0.0);
    }
  }
}

TEST_CASE("transmit covariance") {
  const TransmitCovariance cov = TransmitCovariance::scaled_identity(4, 8.0);
  CHECK(cov.R_T == CMatrix::Identity(4, 4) * 2.0);
  CHECK(cov.power_scale == 8.0);
  CHECK_THROWS_AS(TransmitCovariance::scaled_identity(0, 1.0), DomainError);
  CHECK_THROWS_AS(TransmitCovariance::scaled_identity(2, 0.0), DomainError);
  TransmitCovariance bad{CMatrix::Identity(2, 2), 1.0};
  bad.R_T(0, 0) = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.R_T = CMatrix::Identity(2, 2);
  bad.R_T(0, 1) = Complex{0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("closed-form gradient equals the stacked trace form") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RandomInstance inst = make_random_instance(3, 6, 2, seed);
    const CVector g = rate_gradient(inst.aux, inst.Z_S, inst.state, inst.covariance);
    const CVector ref = oracle::stacked_trace_gradient(inst.aux.A, inst.aux.B, inst.aux.C, inst.Z_S,
                                                       inst.covariance.R_T, inst.state.reactances_ohm);
    CHECK(rel_norm(g, ref) < 1e-10);
  }
}

TEST_CASE("reactance gradient equals the log-det differential and finite differences") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RandomInstance inst = make_random_instance(4, 8, 2, seed);
    const RVector g = reactance_gradient(inst.aux, inst.Z_S, inst.state, inst.covariance);
    const RVector ref = oracle::reactance_derivative(inst.aux.A, inst.aux.B, inst.aux.C, inst.Z_S,
                                                     inst.covariance.R_T, inst.state.reactances_ohm);
    CHECK((g - ref).norm() < 1e-10 * ref.norm());

    const auto f = [&](const RVector& x) {
      return oracle::rate(inst.aux.A, inst.aux.B, inst.aux.C, inst.Z_S, inst.covariance.R_T, x);
    };
    const RVector fd = oracle::central_difference(f, inst.state.reactances_ohm, 1e-5);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      CHECK(std::abs(g(k) - fd(k)) <= 1e-5 * std::max(std::abs(g(k)), std::abs(fd(k))));
    }
    // The library's own checker agrees with the independent one.
    const GradientCheck chk = check_reactance_gradient(inst.aux, inst.Z_S, inst.state, inst.covariance);
    CHECK(chk.max_relative_error < 1e-5);
    CHECK((chk.analytic - g).norm() == 0.0);
  }
}

TEST_CASE("gradient special cases") {
  SUBCASE("no surface path means no gradient") {
    RandomInstance inst = make_random_instance(3, 5, 2, 4);
    inst.aux.B.setZero();
    const CVector g = rate_gradient(inst.aux, inst.Z_S, inst.state, inst.covariance);
    for (Eigen::Index k = 0; k < g.size(); ++k) CHECK(g(k) == Complex{});
  }
  SUBCASE("scalar surface") {
    const ScalarProblem p{{0.02, -0.01}, {1.1, 0.4}, {0.3, -0.2}, {15.0, -60.0}, 3.0};
    for (double x : {-300.0, -20.0, 0.0, 45.0, 61.0, 250.0}) {
      const IrsState s{RVector::Constant(1, x)};
      const double g = reactance_gradient(scalar_aux(p.a, p.b, p.c), CMatrix::Constant(1, 1, p.zs), s,
                                          TransmitCovariance::scaled_identity(1, p.r))(0);
      CHECK(std::abs(g - p.derivative(x)) <= 1e-12 * std::max(1e-12, std::abs(p.derivative(x))));
    }
  }
}

TEST_CASE("derivative of the loaded inverse") {
  const auto q_of = [](const CMatrix& zs, const RVector& x) {
    CMatrix g = zs;
    g.diagonal() += x.cast<Complex>() * Complex{0.0, 1.0};
    return CMatrix(g.fullPivLu().inverse());
  };
  SUBCASE("finite differences on random surfaces") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const RandomInstance inst = make_random_instance(2, 7, 2, 100 + seed);
      for (std::size_t k = 0; k < inst.state.size(); ++k) {
        const CMatrix d = inverse_derivative(inst.Z_S, inst.state, k);
        const double eps = 1e-4 * (1.0 + std::abs(inst.state.reactances_ohm(static_cast<Eigen::Index>(k))));
        RVector up = inst.state.reactances_ohm, down = up;
        up(static_cast<Eigen::Index>(k)) += eps;
        down(static_cast<Eigen::Index>(k)) -= eps;
        const CMatrix fd = (q_of(inst.Z_S, up) - q_of(inst.Z_S, down)) / Complex{0.0, 2.0 * eps};
        CHECK(rel_norm(d, fd) < 1e-6);
      }
    }
  }
  SUBCASE("scalar") {
    const CMatrix zs = CMatrix::Constant(1, 1, Complex{10.0, 4.0});
    const IrsState s{RVector::Constant(1, 7.0)};
    const Complex q = 1.0 / Complex{10.0, 11.0};
    CHECK(std::abs(inverse_derivative(zs, s, 0)(0, 0) + q * q) < 1e-16);
  }
  SUBCASE("diagonal surface") {
    CMatrix zs = CMatrix::Zero(4, 4);
    zs.diagonal() << Complex{10.0, 1.0}, Complex{20.0, -3.0}, Complex{5.0, 0.0}, Complex{1.0, 9.0};
    const IrsState s{RVector::LinSpaced(4, -2.0, 4.0)};
    const CMatrix d = inverse_derivative(zs, s, 2);
    const Complex q = 1.0 / (zs(2, 2) + Complex{0.0, s.reactances_ohm(2)});
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        if (i == 2 && j == 2) {
          CHECK(std::abs(d(i, j) + q * q) < 1e-16);
        } else {
          CHECK(d(i, j) == Complex{});
        }
      }
    }
  }
  CHECK_THROWS_AS(inverse_derivative(CMatrix::Identity(2, 2), IrsState::zeros(2), 2), DomainError);
}

TEST_CASE("ascent without a surface path stops immediately") {
  RandomInstance inst = make_random_instance(3, 5, 2, 9);
  inst.aux.B.setZero();
  const OptimizationResult res = optimize_loads(inst.aux, inst.Z_S, inst.state, inst.covariance, {});
  CHECK(res.converged);
  CHECK(res.trace.iterations() == 0);
  CHECK(res.state.reactances_ohm == inst.state.reactances_ohm);
}

TEST_CASE("scalar ascent reaches the brute-force optimum") {
  const ScalarProblem problems[] = {
      {{0.02, -0.01}, {1.1, 0.4}, {0.3, -0.2}, {15.0, -60.0}, 3.0},
      {{0.0, 0.0}, {0.8, 0.0}, {0.4, 0.1}, {20.0, 35.0}, 5.0},
      {{-0.05, 0.03}, {0.6, -0.9}, {0.2, 0.5}, {35.6, -22.6}, 2.0},
  };
  for (const ScalarProblem& p : problems) {
    const oracle::ScalarOptimum best =
        oracle::grid_maximum([&](double x) { return p.rate(x); }, -500.0, 500.0, 0.01);
    REQUIRE(std::abs(best.x) < 499.0);
    // With a fixed step the ascent crawls along the flat tails; a growing step converges in a few
    // thousand iterations. Far starts can land in the basin of the open-circuit supremum, so the
    // starts stay near the origin or the optimum.
    OptimizerConfig cfg;
    cfg.expand = 2.0;
    cfg.grad_tol = 1e-10;
    cfg.max_iters = 20000;
    for (double x0 : {0.0, best.x - 10.0, best.x + 10.0}) {
      const OptimizationResult res =
          optimize_loads(scalar_aux(p.a, p.b, p.c), CMatrix::Constant(1, 1, p.zs), IrsState{RVector::Constant(1, x0)},
                         TransmitCovariance::scaled_identity(1, p.r), cfg);
      CHECK(res.converged);
      CHECK(std::abs(res.state.reactances_ohm(0) - best.x) < 1e-3);
      CHECK(std::abs(res.rate() - best.value) < 1e-8);
    }
  }
}

TEST_CASE("backtracking ascent is monotone and improves the rate") {
  // Random instances often have their supremum with some reactances at infinity, so the gradient
  // keeps shrinking without reaching a small tolerance. Convergence is checked on scalar problems.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RandomInstance inst = make_random_instance(4, 8, 2, seed);
    OptimizerConfig cfg;
    cfg.max_iters = 2000;
    cfg.expand = 2.0;
    const OptimizationResult res = optimize_loads(inst.aux, inst.Z_S, inst.state, inst.covariance, cfg);
    CHECK(res.trace.non_decreasing());
    CHECK(res.rate() > res.trace.rate.front());
    CHECK(res.trace.grad_norm.back() < 0.1 * res.trace.grad_norm.front());
    CHECK(res.trace.rate.size() == res.trace.grad_norm.size());
    CHECK(res.trace.rate.size() == res.trace.step.size());
    // Loads are imaginary by representation.
    const CVector z = res.state.loads();
    for (Eigen::Index k = 0; k < z.size(); ++k) CHECK(z(k).real() == 0.0);
    // The reported rate belongs to the returned state.
    CHECK(achievable_rate(inst.aux, inst.Z_S, res.state, inst.covariance) == res.rate());
  }
}

TEST_CASE("plain ascent follows the literal update") {
  const RandomInstance inst = make_random_instance(2, 4, 2, 21);
  OptimizerConfig cfg;
  cfg.backtracking = false;
  cfg.step_size = 0.5;
  cfg.max_iters = 3;
  const OptimizationResult res = optimize_loads(inst.aux, inst.Z_S, inst.state, inst.covariance, cfg);
  RVector x = inst.state.reactances_ohm;
  for (int i = 0; i < 3; ++i) {
    x += 0.5 * rate_gradient(inst.aux, inst.Z_S, IrsState{x}, inst.covariance).imag();
  }
  CHECK((res.state.reactances_ohm - x).norm() <= 1e-12 * x.norm());
  CHECK(res.trace.iterations() == 3);
  CHECK(res.stop_reason == "iteration limit");
}

TEST_CASE("plain ascent reports a singular iterate with the last good state") {
  // The first load resonates at x = 40; a step sized to land there makes the surface singular.
  CMatrix zs = CMatrix::Zero(2, 2);
  zs(0, 0) = Complex{0.0, -40.0};
  zs(1, 1) = Complex{50.0, 0.0};
  ChannelAuxiliaries aux{CMatrix::Zero(1, 1), CMatrix::Zero(1, 2), CMatrix::Zero(2, 1)};
  aux.B(0, 0) = 1.0;
  aux.C(0, 0) = 1.0;
  const IrsState start{RVector::Constant(2, 30.0)};
  const TransmitCovariance cov = TransmitCovariance::scaled_identity(1, 1.0);
  const double g = rate_gradient(aux, zs, start, cov)(0).imag();
  REQUIRE(g > 0.0);
  OptimizerConfig cfg;
  cfg.backtracking = false;
  cfg.step_size = 10.0 / g;
  cfg.max_iters = 5;
  try {
    optimize_loads(aux, zs, start, cov, cfg);
    FAIL("expected a singular iterate");
  } catch (const OptimizationError& err) {
    CHECK(err.last_good_state().reactances_ohm == start.reactances_ohm);
    CHECK(err.trace().iterations() == 0);
    CHECK(err.condition() >= kSingularCondition);
  }
  // With backtracking the same step is rejected and the ascent carries on.
  cfg.backtracking = true;
  const OptimizationResult res = optimize_loads(aux, zs, start, cov, cfg);
  CHECK(res.trace.non_decreasing());
  CHECK(res.trace.iterations() >= 1);
}

TEST_CASE("optimizer configuration is validated") {
  const RandomInstance inst = make_random_instance(2, 3, 1, 1);
  auto run = [&](OptimizerConfig cfg) { return optimize_loads(inst.aux, inst.Z_S, inst.state, inst.covariance, cfg); };
  OptimizerConfig cfg;
  cfg.step_size = 0.0;
  CHECK_THROWS_AS(run(cfg), DomainError);
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(run(cfg), DomainError);
  cfg = {};
  cfg.shrink = 1.0;
  CHECK_THROWS_AS(run(cfg), DomainError);
  cfg = {};
  cfg.grad_tol = -1.0;
  CHECK_THROWS_AS(run(cfg), DomainError);
  CHECK_THROWS_AS(optimize_loads(inst.aux, inst.Z_S, IrsState::zeros(2), inst.covariance, {}), DomainError);
}
