#include <doctest.h>

#include <cmath>
#include <numbers>

#include "irsmc/chu_model.hpp"
#include "irsmc/errors.hpp"
#include "oracles.hpp"

using namespace irsmc;

namespace {

constexpr double kF = 30e9;

// Radius giving k0 a = u at frequency f.
double radius_for(double u, double f) { return u * constants::speed_of_light / (2.0 * constants::pi * f); }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("self impedance at k0 a = 1 is R/2 - jR/2") {
  const ChuElementSpec spec{radius_for(1.0, kF), 50.0};
  const Complex z = chu_self_impedance(spec, kF);
  CHECK(rel(z, Complex{25.0, -25.0}) < 1e-12);
}

TEST_CASE("self impedance matches the ladder written in k0 a") {
  for (double u : {1e-3, 0.05, 0.3, 1.0, 2.7, 40.0, 1e3}) {
    for (double r : {10.0, 50.0, 377.0}) {
      const ChuElementSpec spec{radius_for(u, kF), r};
      CHECK(rel(chu_self_impedance(spec, kF), oracle::chu(spec.radius_m, r, kF)) < 1e-12);
    }
  }
}

TEST_CASE("self impedance limits") {
  const ChuElementSpec spec{0.0025, 50.0};
  const double f_unit = constants::speed_of_light / (2.0 * constants::pi * spec.radius_m);

  SUBCASE("high frequency tends to R") {
    const Complex z = chu_self_impedance(spec, 1e3 * f_unit);
    CHECK(std::abs(z - 50.0) / 50.0 < 1e-3);
  }
  SUBCASE("low frequency is capacitive with vanishing resistance") {
    const Complex z = chu_self_impedance(spec, 1e-4 * f_unit);
    CHECK(z.real() < 1e-6);
    CHECK(z.imag() < -1e5);
  }
  SUBCASE("real part positive over six decades") {
    for (int i = 0; i <= 600; ++i) {
      const double f = f_unit * std::pow(10.0, -3.0 + i / 100.0);
      CHECK(chu_self_impedance(spec, f).real() > 0.0);
    }
  }
}

TEST_CASE("self impedance rejects bad inputs") {
  CHECK_THROWS_AS(chu_self_impedance({0.01, 50.0}, 0.0), DomainError);
  CHECK_THROWS_AS(chu_self_impedance({0.01, 50.0}, -1.0), DomainError);
  CHECK_THROWS_AS(chu_self_impedance({0.0, 50.0}, 1e9), DomainError);
  CHECK_THROWS_AS(chu_self_impedance({0.01, -5.0}, 1e9), DomainError);
  CHECK_THROWS_AS(chu_self_impedance({1e-300, 50.0}, 1e-300), DomainError);
}

TEST_CASE("mutual impedance matches the closed form") {
  const ChuElementSpec a{0.0025, 50.0}, b{0.0015, 75.0};
  for (double d : {0.004, 0.01, 0.05, 0.3}) {
    for (double beta : {0.0, 0.4, std::numbers::pi / 2, 2.0}) {
      for (double gamma : {0.0, 1.1, std::numbers::pi / 3, std::numbers::pi}) {
        const Complex z = mutual_impedance(a, b, {d, beta, gamma}, kF);
        const Complex ref = oracle::mutual(a.radius_m, 50.0, b.radius_m, 75.0, d, beta, gamma, kF);
        // Exact angle products make some terms vanish exactly where the oracle leaves rounding
        // residue, so the error is measured against the size of the undamped terms.
        const double x = 2.0 * std::numbers::pi * kF * d / 299792458.0;
        const double scale = 3.0 * std::sqrt(chu_self_impedance(a, kF).real() * chu_self_impedance(b, kF).real()) *
                             (1.0 / x + 1.0 / (x * x) + 1.0 / (x * x * x));
        CHECK(std::abs(z - ref) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("mutual impedance is reciprocal") {
  const ChuElementSpec a{0.0025, 50.0}, b{0.001, 50.0};
  for (double beta : {0.0, 0.3, 1.2, 2.9}) {
    for (double gamma : {0.1, 1.7, std::numbers::pi}) {
      const Complex ab = mutual_impedance(a, b, {0.02, beta, gamma}, kF);
      const Complex ba = mutual_impedance(b, a, {0.02, gamma, beta}, kF);
      CHECK(ab == ba);
      const Complex aa = mutual_impedance(a, a, {0.02, beta, gamma}, kF);
      const Complex aa_swapped = mutual_impedance(a, a, {0.02, gamma, beta}, kF);
      CHECK(aa == aa_swapped);
    }
  }
}

TEST_CASE("collinear dipoles keep only the near-field bracket") {
  const ChuElementSpec s{0.0025, 50.0};
  const double k0 = wavenumber(kF);
  for (double d : {0.005, 0.02, 0.1}) {
    const Complex x{0.0, k0 * d};
    const double re = chu_self_impedance(s, kF).real();
    const Complex ref = -3.0 * re * (1.0 / (x * x) + 1.0 / (x * x * x)) * std::exp(Complex{0.0, -k0 * d});
    CHECK(rel(mutual_impedance(s, s, {d, 0.0, 0.0}, kF), ref) < 1e-12);
  }
}

TEST_CASE("cross-polarized pairs do not couple") {
  const ChuElementSpec s{0.0025, 50.0};
  const double half_pi = std::numbers::pi / 2;
  CHECK(mutual_impedance(s, s, {0.01, half_pi, 0.0}, kF) == Complex{});
  CHECK(mutual_impedance(s, s, {0.01, 0.0, half_pi}, kF) == Complex{});
  CHECK(mutual_impedance(s, s, {0.01, std::numbers::pi, half_pi}, kF) == Complex{});
}

TEST_CASE("side-by-side coupling decays monotonically and within the bound") {
  const ChuElementSpec s{0.0025, 50.0};
  const double k0 = wavenumber(kF);
  const double re = chu_self_impedance(s, kF).real();
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 900; ++i) {
    const double kd = 10.0 + 0.1 * i;
    const double m = std::abs(mutual_impedance(s, s, {kd / k0, std::numbers::pi / 2, std::numbers::pi / 2}, kF));
    CHECK(m < previous);
    CHECK(m <= 3.0 * re * 1.5 * (1.0 / kd + 1.0 / (kd * kd) + 1.0 / (kd * kd * kd)));
    previous = m;
  }
  const double far = std::abs(mutual_impedance(s, s, {1e6 / k0, std::numbers::pi / 2, std::numbers::pi / 2}, kF));
  CHECK(far * 1e6 == doctest::Approx(1.5 * re).epsilon(1e-5));
}

TEST_CASE("mutual impedance guards") {
  const ChuElementSpec s{0.0025, 50.0};
  CHECK_THROWS_AS(mutual_impedance(s, s, {0.0, 0.0, 0.0}, kF), SingularityError);
  CHECK_THROWS_AS(mutual_impedance(s, s, {-1.0, 0.0, 0.0}, kF), SingularityError);
  CHECK_THROWS_AS(mutual_impedance(s, s, {0.004, 0.0, 0.0}, kF), OverlapError);
  CHECK_NOTHROW(mutual_impedance(s, s, {0.005, 0.0, 0.0}, kF));
}
