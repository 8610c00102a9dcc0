#pragma once

#include <cstddef>
#include <vector>

#include "irsmc/geometry.hpp"
#include "irsmc/types.hpp"

namespace irsmc {

enum class Terminal { Transmitter, Surface, Receiver };

/// Far-field multipath between two arrays. Angles are measured from the array axis, so that
/// pi/2 is broadside.
struct PathSet {
  std::vector<double> departure_angles;  // at the transmitting array X
  std::vector<double> arrival_angles;    // at the receiving array Y
  double distance_m = 1.0;
  double pathloss_exponent = 2.0;
  double gain_tx = 1.5;
  double gain_rx = 1.5;
  double radius_tx_m = 0.0;
  double radius_rx_m = 0.0;

  std::size_t count() const { return departure_angles.size(); }
  void validate() const;
};

/// Element coordinates projected on the axis along which a plane wave's phase progresses.
/// A ULA with pitch delta has offsets m * delta.
struct ArrayManifold {
  std::vector<double> offsets_m;

  static ArrayManifold uniform_linear(std::size_t count, double spacing_m);
  /// Planar layout seen by waves travelling in the plane spanned by `phase_axis` and the layout
  /// normal: entry k picks up exp(-j k0 (p_k . phase_axis) cos(theta)).
  static ArrayManifold from_layout(const ArrayLayout& layout, const Vec3& phase_axis);

  std::size_t size() const { return offsets_m.size(); }
  CVector steering(double angle_rad, double wavelength_m) const;
};

/// ULA phase progression: entry m = exp(-j (2 pi / lambda) m delta cos(theta)).
CVector steering_vector(std::size_t count, double spacing_m, double wavelength_m, double angle_rad);

struct LinkSpec {
  Terminal tx = Terminal::Transmitter;
  Terminal rx = Terminal::Surface;
  ArrayManifold tx_array;
  ArrayManifold rx_array;
  PathSet paths;

  void validate() const;
};

/// Common phase of a far-field transimpedance: pi - atan(k0 a_X) - atan(k0 a_Y).
double transimpedance_phase(double frequency_hz, double radius_tx_m, double radius_rx_m);

/// Multipath transimpedance Z_YX (N_Y x N_X):
///
///   c sqrt(G_X G_Y) / (2 pi f d^(alpha/2)) diag(Re Z_Y)^(1/2) [sum_l a_Y a_X^T] diag(Re Z_X)^(1/2) e^(-j phi)
///
/// Only the diagonals of Z_X and Z_Y are read. Throws DomainError on a non-positive resistance.
CMatrix transimpedance(const LinkSpec& link, const CMatrix& Z_X, const CMatrix& Z_Y, double frequency_hz);

struct ChannelAuxiliaries {
  CMatrix A;  // N_R x N_T, direct path
  CMatrix B;  // N_R x N_S
  CMatrix C;  // N_S x N_T

  std::size_t n_tx() const { return static_cast<std::size_t>(A.cols()); }
  std::size_t n_surface() const { return static_cast<std::size_t>(C.rows()); }
  std::size_t n_rx() const { return static_cast<std::size_t>(A.rows()); }
  void validate() const;
};

/// A = (I + Z_R Z_L^-1)^-1 Z_RT (Z_G + Z_T)^-1,  B = (I + Z_R Z_L^-1)^-1 Z_RS,  C = Z_ST (Z_G + Z_T)^-1.
ChannelAuxiliaries build_auxiliaries(const CMatrix& Z_RT, const CMatrix& Z_RS, const CMatrix& Z_ST,
                                     const CMatrix& Z_R, const CMatrix& Z_L, const CMatrix& Z_G,
                                     const CMatrix& Z_T);
ChannelAuxiliaries build_auxiliaries(const MultiportImpedances& z);

/// H(z_IRS) = A - B (diag(z_IRS) + Z_S)^-1 C.
CMatrix channel_matrix(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const CVector& z_irs);

/// Load-voltage channel straight from the multiport blocks, without the A/B/C factoring:
/// H = (I + Z_R Z_L^-1)^-1 (Z_RT - Z_RS (Z_IRS + Z_S)^-1 Z_ST) (Z_G + Z_T)^-1.
CMatrix channel_matrix(const MultiportImpedances& z, const CVector& z_irs);

}  // namespace irsmc
