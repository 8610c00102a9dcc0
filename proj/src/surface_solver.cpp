#include "irsmc/surface_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irsmc/errors.hpp"
#include "irsmc/linalg.hpp"

namespace irsmc {

SurfaceSolver::SurfaceSolver(const CMatrix& Z_S, const CVector& loads, bool z_s_is_diagonal)
    : size_(Z_S.rows()), diagonal_(z_s_is_diagonal) {
  if (Z_S.rows() != Z_S.cols() || loads.size() != Z_S.rows()) {
    throw DomainError("Z_S must be square and match the number of loads");
  }
  if (diagonal_) {
    diagonal_entries_ = Z_S.diagonal() + loads;
    double smallest = std::numeric_limits<double>::infinity();
    double largest = 0.0;
    for (const Complex& d : diagonal_entries_) {
      smallest = std::min(smallest, std::abs(d));
      largest = std::max(largest, std::abs(d));
    }
    condition_ = smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
  } else {
    CMatrix loaded = Z_S;
    loaded.diagonal() += loads;
    lu_.compute(loaded);
    condition_ = condition_estimate(lu_);
  }
  if (!(condition_ < kSingularCondition)) {
    throw SingularityError("diag(z_IRS) + Z_S is singular", condition_);
  }
}

SurfaceSolver::SurfaceSolver(const CMatrix& Z_S, const CVector& loads)
    : SurfaceSolver(Z_S, loads, is_diagonal(Z_S)) {}

bool SurfaceSolver::is_diagonal(const CMatrix& z) {
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      if (i != j && z(i, j) != Complex{}) return false;
    }
  }
  return true;
}

CMatrix SurfaceSolver::solve(const CMatrix& rhs) const {
  if (diagonal_) return diagonal_entries_.cwiseInverse().asDiagonal() * rhs;
  return lu_.solve(rhs);
}

CMatrix SurfaceSolver::solve_left(const CMatrix& lhs) const {
  if (diagonal_) return lhs * diagonal_entries_.cwiseInverse().asDiagonal();
  return transposed_solve(lu_, lhs.transpose()).transpose();
}

CMatrix SurfaceSolver::inverse() const { return solve(CMatrix::Identity(size_, size_)); }

}  // namespace irsmc
