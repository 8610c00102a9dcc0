#include "irsmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "irsmc/errors.hpp"

namespace irsmc {

namespace {

// acos of a dot product between unit vectors, clamped against rounding.
double angle_between(const Vec3& unit_a, const Vec3& unit_b) {
  return std::acos(std::clamp(unit_a.dot(unit_b), -1.0, 1.0));
}

void require_square(const CMatrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw DomainError(std::string(name) + " must be square, got " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
  }
}

void require_shape(const CMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DomainError(std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
}

}  // namespace

void ArrayLayout::validate() const {
  element.validate();
  if (std::abs(dipole_axis.norm() - 1.0) > 1e-12) {
    throw DomainError("dipole axis must have unit norm");
  }
  const double min_distance = 2.0 * element.radius_m * (1.0 - 1e-9);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      const double d = (positions[j] - positions[i]).norm();
      if (!(d > 0.0)) {
        throw DomainError("elements " + std::to_string(i) + " and " + std::to_string(j) +
                          " share a position");
      }
      if (d < min_distance) {
        throw OverlapError("elements " + std::to_string(i) + " and " + std::to_string(j) +
                           " overlap");
      }
    }
  }
}

ArrayLayout build_irs_grid(std::size_t n1, std::size_t n2, double spacing_m, const ChuElementSpec& spec,
                           DipoleAlignment alignment) {
  spec.validate();
  if (n1 == 0 || n2 == 0) {
    throw DomainError("grid dimensions must be at least 1x1");
  }
  if (!(spacing_m >= 2.0 * spec.radius_m * (1.0 - 1e-12))) {
    throw OverlapError("grid spacing " + std::to_string(spacing_m) +
                       " m is smaller than the sphere diameter " + std::to_string(2.0 * spec.radius_m) +
                       " m");
  }

  ArrayLayout layout;
  layout.element = spec;
  layout.n1 = n1;
  layout.n2 = n2;
  layout.first_axis = Vec3::UnitX();
  layout.second_axis = Vec3::UnitY();
  layout.dipole_axis = alignment == DipoleAlignment::FirstGridAxis ? layout.first_axis : layout.second_axis;
  layout.positions.reserve(n1 * n2);
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      layout.positions.emplace_back(static_cast<double>(i1) * spacing_m,
                                    static_cast<double>(i2) * spacing_m, 0.0);
    }
  }
  return layout;
}

PairGeometry pair_geometry(const ArrayLayout& layout, std::size_t i, std::size_t j) {
  if (i == j) {
    throw DomainError("pair_geometry needs two distinct elements, got i = j = " + std::to_string(i));
  }
  if (i >= layout.size() || j >= layout.size()) {
    throw DomainError("element index out of range");
  }
  const Vec3 offset = layout.positions[j] - layout.positions[i];
  const double d = offset.norm();
  if (!(d > 0.0)) {
    throw DomainError("elements " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  }
  const Vec3 towards_j = offset / d;
  return PairGeometry{d, angle_between(layout.dipole_axis, towards_j),
                      angle_between(layout.dipole_axis, -towards_j)};
}

CMatrix assemble_surface_impedance(const ArrayLayout& layout, double frequency_hz, bool coupled) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  const Impedance self = chu_self_impedance(layout.element, frequency_hz);
  CMatrix z = CMatrix::Zero(n, n);
  z.diagonal().setConstant(self);
  if (!coupled) return z;

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const PairGeometry g = pair_geometry(layout, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const Impedance mutual = mutual_impedance(layout.element, layout.element, g, frequency_hz);
      z(i, j) = mutual;
      z(j, i) = mutual;
    }
  }
  return z;
}

CMatrix decouple(const CMatrix& z) {
  require_square(z, "impedance matrix");
  CMatrix out = CMatrix::Zero(z.rows(), z.cols());
  out.diagonal() = z.diagonal();
  return out;
}

TerminalImpedances assemble_terminals(std::size_t n_tx, std::size_t n_rx, double reference_ohm) {
  if (!(reference_ohm > 0.0)) {
    throw DomainError("reference impedance must be positive");
  }
  const auto nt = static_cast<Eigen::Index>(n_tx);
  const auto nr = static_cast<Eigen::Index>(n_rx);
  const CMatrix tx = CMatrix::Identity(nt, nt) * reference_ohm;
  const CMatrix rx = CMatrix::Identity(nr, nr) * reference_ohm;
  return TerminalImpedances{tx, tx, rx, rx};
}

void MultiportImpedances::validate() const {
  require_square(Z_T, "Z_T");
  require_square(Z_S, "Z_S");
  require_square(Z_R, "Z_R");
  const auto nt = Z_T.rows();
  const auto ns = Z_S.rows();
  const auto nr = Z_R.rows();
  require_shape(Z_ST, ns, nt, "Z_ST");
  require_shape(Z_RS, nr, ns, "Z_RS");
  require_shape(Z_RT, nr, nt, "Z_RT");
  require_shape(Z_G, nt, nt, "Z_G");
  require_shape(Z_L, nr, nr, "Z_L");
}

std::size_t grid_side_for_aperture(double aperture_m, double spacing_m) {
  if (!(aperture_m > 0.0) || !(spacing_m > 0.0)) {
    throw DomainError("aperture and spacing must be positive");
  }
  const double cells = aperture_m / spacing_m;
  // Ratios like 4 lambda / (lambda / 2) land a few ulps below the integer.
  const auto side = static_cast<std::size_t>(std::floor(cells * (1.0 + 1e-9)));
  return std::max<std::size_t>(side, 1);
}

}  // namespace irsmc
