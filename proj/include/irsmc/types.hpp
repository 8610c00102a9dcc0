#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace irsmc {

using Complex = std::complex<double>;
using Impedance = std::complex<double>;  // ohms
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr Complex kJ{0.0, 1.0};

namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;  // m/s

// Declared for completeness; no model equation consumes these.
inline constexpr double boltzmann = 1.380649e-23;               // J/K
inline constexpr double vacuum_permeability = 1.25663706212e-6;  // H/m
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

}  // namespace constants

inline double wavelength(double frequency_hz) { return constants::speed_of_light / frequency_hz; }

/// Free-space wave number k0 = 2*pi*f/c.
inline double wavenumber(double frequency_hz) {
  return 2.0 * constants::pi * frequency_hz / constants::speed_of_light;
}

}  // namespace irsmc
