#include "irsmc/chu_model.hpp"

#include <cmath>
#include <string>

#include "irsmc/errors.hpp"

namespace irsmc {

namespace {

struct Trig {
  double cos;
  double sin;
};

// Exact values at the quadrant angles that geometry produces (acos(1), acos(0), acos(-1)), so that
// collinear and cross-polarized pairs lose their vanishing bracket exactly.
Trig exact_trig(double angle) {
  if (angle == 0.0) return {1.0, 0.0};
  if (angle == constants::pi / 2) return {0.0, 1.0};
  if (angle == constants::pi) return {-1.0, 0.0};
  return {std::cos(angle), std::sin(angle)};
}

bool is_finite(Impedance z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void ChuElementSpec::validate() const {
  if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
    throw DomainError("Chu element radius must be positive, got " + std::to_string(radius_m));
  }
  if (!(resistance_ohm > 0.0) || !std::isfinite(resistance_ohm)) {
    throw DomainError("Chu element resistance must be positive, got " +
                      std::to_string(resistance_ohm));
  }
}

Impedance chu_self_impedance(const ChuElementSpec& spec, double frequency_hz) {
  spec.validate();
  if (!(frequency_hz > 0.0)) {
    throw DomainError("frequency must be positive, got " + std::to_string(frequency_hz));
  }
  const double c = constants::speed_of_light;
  const double omega = 2.0 * constants::pi * frequency_hz;
  const double capacitance = spec.radius_m / (c * spec.resistance_ohm);
  const double inductance = spec.radius_m * spec.resistance_ohm / c;

  const Impedance z_capacitor = 1.0 / (kJ * omega * capacitance);
  const Impedance z_shunt = 1.0 / (1.0 / (kJ * omega * inductance) + 1.0 / spec.resistance_ohm);
  const Impedance z = z_capacitor + z_shunt;
  if (!is_finite(z)) {
    throw DomainError("Chu self-impedance is not finite at f = " + std::to_string(frequency_hz));
  }
  return z;
}

Impedance mutual_impedance(const ChuElementSpec& first, const ChuElementSpec& second,
                           const PairGeometry& geometry, double frequency_hz) {
  const double d = geometry.distance_m;
  if (!(d > 0.0)) {
    throw SingularityError("mutual impedance requires a positive distance", 0.0);
  }
  const double touching = first.radius_m + second.radius_m;
  // Relative slack so that spheres placed exactly 2a apart are not rejected by rounding.
  if (d < touching * (1.0 - 1e-9)) {
    throw OverlapError("Chu spheres overlap: distance " + std::to_string(d) + " m < " +
                       std::to_string(touching) + " m");
  }

  const double r_first = chu_self_impedance(first, frequency_hz).real();
  const double r_second = chu_self_impedance(second, frequency_hz).real();

  const double k0d = wavenumber(frequency_hz) * d;
  const Complex inv1 = 1.0 / (kJ * k0d);
  const Complex inv2 = inv1 * inv1;
  const Complex inv3 = inv2 * inv1;

  const Trig b = exact_trig(geometry.beta_rad);
  const Trig g = exact_trig(geometry.gamma_rad);

  const Complex bracket = 0.5 * (b.sin * g.sin) * (inv1 + inv2 + inv3) + (b.cos * g.cos) * (inv2 + inv3);
  const Impedance z = -3.0 * std::sqrt(r_first * r_second) * bracket * std::exp(-kJ * k0d);
  if (!is_finite(z)) {
    throw DomainError("mutual impedance is not finite at d = " + std::to_string(d));
  }
  return z;
}

}  // namespace irsmc
