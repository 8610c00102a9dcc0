#include "irsmc/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "irsmc/errors.hpp"

namespace irsmc {

double condition_estimate(const Eigen::PartialPivLU<CMatrix>& lu) {
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || !std::isfinite(rcond)) return std::numeric_limits<double>::infinity();
  return 1.0 / rcond;
}

CMatrix transposed_solve(const Eigen::PartialPivLU<CMatrix>& lu, const CMatrix& rhs) {
  // M^T = U^T L^T P, so U^T L^T (P y) = rhs.
  const CMatrix& lu_factors = lu.matrixLU();
  CMatrix w = lu_factors.triangularView<Eigen::Upper>().transpose().solve(rhs);
  lu_factors.triangularView<Eigen::UnitLower>().transpose().solveInPlace(w);
  return lu.permutationP().transpose() * w;
}

CMatrix checked_solve(const CMatrix& m, const CMatrix& rhs, const char* what) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double cond = condition_estimate(lu);
  if (!(cond < kSingularCondition)) {
    throw SingularityError(std::string(what) + " is singular", cond);
  }
  return lu.solve(rhs);
}

CMatrix checked_right_divide(const CMatrix& rhs, const CMatrix& m, const char* what) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double cond = condition_estimate(lu);
  if (!(cond < kSingularCondition)) {
    throw SingularityError(std::string(what) + " is singular", cond);
  }
  // rhs M^-1 = (M^-T rhs^T)^T
  return transposed_solve(lu, rhs.transpose()).transpose();
}

}  // namespace irsmc
