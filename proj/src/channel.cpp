#include "irsmc/channel.hpp"

#include <cmath>
#include <string>

#include "irsmc/errors.hpp"
#include "irsmc/linalg.hpp"

namespace irsmc {

namespace {

RVector sqrt_resistance(const CMatrix& z, const char* name) {
  if (z.rows() != z.cols()) {
    throw DomainError(std::string(name) + " must be square");
  }
  RVector out(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double r = z(i, i).real();
    if (!(r > 0.0)) {
      throw DomainError(std::string(name) + " has non-positive resistance " + std::to_string(r) +
                        " at diagonal entry " + std::to_string(i));
    }
    out(i) = std::sqrt(r);
  }
  return out;
}

// (I + Z_R Z_L^-1)^-1 applied from the left.
CMatrix receive_divider(const CMatrix& Z_R, const CMatrix& Z_L, const CMatrix& rhs) {
  const auto n = Z_R.rows();
  const CMatrix ratio = checked_right_divide(Z_R, Z_L, "Z_L");
  return checked_solve(CMatrix::Identity(n, n) + ratio, rhs, "I + Z_R Z_L^-1");
}

}  // namespace

void PathSet::validate() const {
  if (departure_angles.empty()) {
    throw DomainError("a path set needs at least one path");
  }
  if (arrival_angles.size() != departure_angles.size()) {
    throw DomainError("departure and arrival angle lists differ in length");
  }
  if (!(distance_m > 0.0)) {
    throw DomainError("link distance must be positive");
  }
  if (!(pathloss_exponent >= 2.0)) {
    throw DomainError("path-loss exponent must be at least 2, got " + std::to_string(pathloss_exponent));
  }
  if (!(gain_tx > 0.0) || !(gain_rx > 0.0)) {
    throw DomainError("antenna gains must be positive");
  }
  if (!(radius_tx_m > 0.0) || !(radius_rx_m > 0.0)) {
    throw DomainError("antenna radii must be positive");
  }
}

ArrayManifold ArrayManifold::uniform_linear(std::size_t count, double spacing_m) {
  ArrayManifold m;
  m.offsets_m.resize(count);
  for (std::size_t i = 0; i < count; ++i) m.offsets_m[i] = static_cast<double>(i) * spacing_m;
  return m;
}

ArrayManifold ArrayManifold::from_layout(const ArrayLayout& layout, const Vec3& phase_axis) {
  const Vec3 axis = phase_axis.normalized();
  ArrayManifold m;
  m.offsets_m.reserve(layout.size());
  for (const Vec3& p : layout.positions) m.offsets_m.push_back(p.dot(axis));
  return m;
}

CVector ArrayManifold::steering(double angle_rad, double wavelength_m) const {
  const double k = 2.0 * constants::pi / wavelength_m;
  const double c = std::cos(angle_rad);
  CVector v(static_cast<Eigen::Index>(offsets_m.size()));
  for (std::size_t i = 0; i < offsets_m.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = offsets_m[i] == 0.0 ? Complex{1.0, 0.0} : std::exp(-kJ * (k * offsets_m[i] * c));
  }
  return v;
}

CVector steering_vector(std::size_t count, double spacing_m, double wavelength_m, double angle_rad) {
  if (count == 0) throw DomainError("steering vector needs at least one element");
  return ArrayManifold::uniform_linear(count, spacing_m).steering(angle_rad, wavelength_m);
}

void LinkSpec::validate() const {
  if (tx == rx) throw DomainError("a link needs distinct transmit and receive terminals");
  if (tx == Terminal::Receiver || rx == Terminal::Transmitter) {
    throw DomainError("links run from the transmitter or surface towards the surface or receivers");
  }
  if (tx_array.size() == 0 || rx_array.size() == 0) {
    throw DomainError("link arrays must not be empty");
  }
  paths.validate();
}

double transimpedance_phase(double frequency_hz, double radius_tx_m, double radius_rx_m) {
  const double k0 = wavenumber(frequency_hz);
  return constants::pi - std::atan(k0 * radius_tx_m) - std::atan(k0 * radius_rx_m);
}

CMatrix transimpedance(const LinkSpec& link, const CMatrix& Z_X, const CMatrix& Z_Y, double frequency_hz) {
  link.validate();
  if (!(frequency_hz > 0.0)) throw DomainError("frequency must be positive");
  const RVector sx = sqrt_resistance(Z_X, "Z_X");
  const RVector sy = sqrt_resistance(Z_Y, "Z_Y");
  if (static_cast<std::size_t>(sx.size()) != link.tx_array.size() ||
      static_cast<std::size_t>(sy.size()) != link.rx_array.size()) {
    throw DomainError("impedance matrices do not match the link's array sizes");
  }

  const PathSet& p = link.paths;
  const double lambda = wavelength(frequency_hz);
  CMatrix paths_sum = CMatrix::Zero(sy.size(), sx.size());
  for (std::size_t l = 0; l < p.count(); ++l) {
    const CVector ay = link.rx_array.steering(p.arrival_angles[l], lambda);
    const CVector ax = link.tx_array.steering(p.departure_angles[l], lambda);
    paths_sum.noalias() += ay * ax.transpose();
  }

  const double scale = constants::speed_of_light * std::sqrt(p.gain_tx * p.gain_rx) /
                       (2.0 * constants::pi * frequency_hz * std::pow(p.distance_m, p.pathloss_exponent / 2.0));
  const Complex phase = std::exp(-kJ * transimpedance_phase(frequency_hz, p.radius_tx_m, p.radius_rx_m));
  return (scale * phase) * (sy.asDiagonal() * paths_sum * sx.asDiagonal());
}

void ChannelAuxiliaries::validate() const {
  if (B.rows() != A.rows() || C.cols() != A.cols() || B.cols() != C.rows()) {
    throw DomainError("auxiliary matrices A, B, C have inconsistent shapes");
  }
}

ChannelAuxiliaries build_auxiliaries(const CMatrix& Z_RT, const CMatrix& Z_RS, const CMatrix& Z_ST,
                                     const CMatrix& Z_R, const CMatrix& Z_L, const CMatrix& Z_G,
                                     const CMatrix& Z_T) {
  const CMatrix tx_total = Z_G + Z_T;
  ChannelAuxiliaries aux;
  aux.C = checked_right_divide(Z_ST, tx_total, "Z_G + Z_T");
  aux.A = receive_divider(Z_R, Z_L, checked_right_divide(Z_RT, tx_total, "Z_G + Z_T"));
  aux.B = receive_divider(Z_R, Z_L, Z_RS);
  aux.validate();
  return aux;
}

ChannelAuxiliaries build_auxiliaries(const MultiportImpedances& z) {
  z.validate();
  return build_auxiliaries(z.Z_RT, z.Z_RS, z.Z_ST, z.Z_R, z.Z_L, z.Z_G, z.Z_T);
}

CMatrix channel_matrix(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const CVector& z_irs) {
  aux.validate();
  if (Z_S.rows() != aux.B.cols() || Z_S.cols() != aux.B.cols() || z_irs.size() != Z_S.rows()) {
    throw DomainError("Z_S and z_IRS must match the surface size of the auxiliaries");
  }
  CMatrix loaded = Z_S;
  loaded.diagonal() += z_irs;
  return aux.A - aux.B * checked_solve(loaded, aux.C, "diag(z_IRS) + Z_S");
}

CMatrix channel_matrix(const MultiportImpedances& z, const CVector& z_irs) {
  z.validate();
  if (z_irs.size() != z.Z_S.rows()) throw DomainError("z_IRS must have N_S entries");
  const CMatrix z_irs_diag = z_irs.asDiagonal();
  const CMatrix surface_inverse = checked_solve(z_irs_diag + z.Z_S,
                                                CMatrix::Identity(z.Z_S.rows(), z.Z_S.cols()),
                                                "Z_IRS + Z_S");
  const CMatrix through = z.Z_RT - z.Z_RS * surface_inverse * z.Z_ST;
  const CMatrix rx_identity = CMatrix::Identity(z.Z_R.rows(), z.Z_R.cols());
  const CMatrix load_inverse = checked_solve(z.Z_L, rx_identity, "Z_L");
  const CMatrix rx_inverse = checked_solve(rx_identity + z.Z_R * load_inverse, rx_identity, "I + Z_R Z_L^-1");
  const CMatrix tx_inverse = checked_solve(z.Z_G + z.Z_T, CMatrix::Identity(z.Z_T.rows(), z.Z_T.cols()), "Z_G + Z_T");
  return rx_inverse * through * tx_inverse;
}

}  // namespace irsmc
