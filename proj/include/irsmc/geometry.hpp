#pragma once

#include <cstddef>
#include <vector>

#include "irsmc/chu_model.hpp"
#include "irsmc/types.hpp"

namespace irsmc {

enum class DipoleAlignment {
  FirstGridAxis,   // dipoles point along the direction indexed by n1
  SecondGridAxis,  // dipoles point along the direction indexed by n2
};

/// Positions of identical, co-polarized Chu elements.
struct ArrayLayout {
  std::vector<Vec3> positions;
  Vec3 dipole_axis = Vec3::UnitX();
  ChuElementSpec element;

  // Grid bookkeeping, filled by build_irs_grid.
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  Vec3 first_axis = Vec3::UnitX();
  Vec3 second_axis = Vec3::UnitY();

  std::size_t size() const { return positions.size(); }
  Vec3 normal() const { return first_axis.cross(second_axis); }

  /// Unit dipole axis, distinct positions, non-overlapping spheres.
  void validate() const;
};

/// n1 x n2 planar grid with pitch `spacing_m` in the z = 0 plane, first axis x, second axis y.
/// Element (i1, i2) sits at (i1, i2, 0) * spacing and has row-major index i1 * n2 + i2.
ArrayLayout build_irs_grid(std::size_t n1, std::size_t n2, double spacing_m, const ChuElementSpec& spec,
                           DipoleAlignment alignment = DipoleAlignment::FirstGridAxis);

/// Distance and dipole angles between elements i and j; see PairGeometry for the convention.
PairGeometry pair_geometry(const ArrayLayout& layout, std::size_t i, std::size_t j);

/// Surface impedance matrix Z_S. Self-impedances on the diagonal; mutual impedances off the
/// diagonal when `coupled`, zeros otherwise. The lower triangle mirrors the upper one.
CMatrix assemble_surface_impedance(const ArrayLayout& layout, double frequency_hz, bool coupled);

/// Zeroes the off-diagonal entries of an impedance matrix.
CMatrix decouple(const CMatrix& z);

struct TerminalImpedances {
  CMatrix Z_T;  // transmit array
  CMatrix Z_G;  // generators
  CMatrix Z_R;  // receive antennas
  CMatrix Z_L;  // loads
};

/// Decoupled antennas matched to a reference resistance: Z_T = Z_G = R0 I, Z_R = Z_L = R0 I.
TerminalImpedances assemble_terminals(std::size_t n_tx, std::size_t n_rx, double reference_ohm);

/// Blocks of the joint impedance matrix under the unilateral approximation. The back-action
/// blocks Z_TS, Z_SR, Z_TR are zero by assumption and have no field here.
struct MultiportImpedances {
  CMatrix Z_T, Z_S, Z_R;
  CMatrix Z_ST;  // N_S x N_T
  CMatrix Z_RS;  // N_R x N_S
  CMatrix Z_RT;  // N_R x N_T
  CMatrix Z_G, Z_L;

  std::size_t n_tx() const { return static_cast<std::size_t>(Z_T.rows()); }
  std::size_t n_surface() const { return static_cast<std::size_t>(Z_S.rows()); }
  std::size_t n_rx() const { return static_cast<std::size_t>(Z_R.rows()); }

  /// Shape consistency between all blocks.
  void validate() const;
};

/// Elements per side of a square aperture tiled with pitch `spacing_m` (n * spacing = aperture).
std::size_t grid_side_for_aperture(double aperture_m, double spacing_m);

}  // namespace irsmc
