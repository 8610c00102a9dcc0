#pragma once

#include "irsmc/types.hpp"

namespace irsmc {

/// Factorization of the loaded surface matrix G = diag(z_IRS) + Z_S, so that Q = G^-1 can be
/// applied from either side without forming it. A diagonal Z_S (decoupled model) skips the LU.
class SurfaceSolver {
 public:
  SurfaceSolver(const CMatrix& Z_S, const CVector& loads, bool z_s_is_diagonal);
  SurfaceSolver(const CMatrix& Z_S, const CVector& loads);

  static bool is_diagonal(const CMatrix& z);

  Eigen::Index size() const { return size_; }
  double condition() const { return condition_; }

  CMatrix solve(const CMatrix& rhs) const;       // Q rhs
  CMatrix solve_left(const CMatrix& lhs) const;  // lhs Q
  CMatrix inverse() const;

 private:
  Eigen::Index size_ = 0;
  bool diagonal_ = false;
  CVector diagonal_entries_;
  Eigen::PartialPivLU<CMatrix> lu_;
  double condition_ = 1.0;
};

}  // namespace irsmc
