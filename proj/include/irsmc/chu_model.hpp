#pragma once

#include "irsmc/types.hpp"

namespace irsmc {

/// A canonical minimum scattering antenna enclosed in a Chu sphere, radiating the TM1 mode only.
/// The ladder circuit is a series capacitor a/(cR) followed by an inductor aR/c in parallel with R.
struct ChuElementSpec {
  double radius_m = 0.0;
  double resistance_ohm = 50.0;

  void validate() const;
};

/// Relative placement of two dipoles. beta is the angle of the first dipole w.r.t. the axis
/// pointing towards the second one, gamma the angle of the second dipole w.r.t. the axis pointing
/// back towards the first. Both in [0, pi].
struct PairGeometry {
  double distance_m = 0.0;
  double beta_rad = 0.0;
  double gamma_rad = 0.0;
};

/// Input impedance of the TM1 Chu ladder at `frequency_hz`. Throws DomainError for f <= 0 or a
/// non-finite result.
Impedance chu_self_impedance(const ChuElementSpec& spec, double frequency_hz);

/// Mutual impedance between two Chu CMS antennas (induced EMF, Hertz-dipole equivalence):
///
///   Z = -3 sqrt(Re Za Re Zb) [ 1/2 sin(b) sin(g) (1/x + 1/x^2 + 1/x^3)
///                              + cos(b) cos(g) (1/x^2 + 1/x^3) ] exp(-j k0 d),   x = j k0 d
///
/// Both self-impedances are evaluated at `frequency_hz`. Throws SingularityError for d <= 0 and
/// OverlapError when the spheres overlap (d < a1 + a2).
Impedance mutual_impedance(const ChuElementSpec& first, const ChuElementSpec& second,
                           const PairGeometry& geometry, double frequency_hz);

}  // namespace irsmc
