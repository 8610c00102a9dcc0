#pragma once

#include "irsmc/types.hpp"

namespace irsmc {

/// Largest condition estimate accepted before a square matrix is treated as singular.
inline constexpr double kSingularCondition = 1e15;

/// Estimated 1-norm condition number (reciprocal of LAPACK-style rcond). Infinity when singular.
double condition_estimate(const Eigen::PartialPivLU<CMatrix>& lu);

/// Solves M^T y = rhs from the factors P M = L U.
CMatrix transposed_solve(const Eigen::PartialPivLU<CMatrix>& lu, const CMatrix& rhs);

/// X = M^-1 rhs, throwing SingularityError when M is (numerically) singular.
CMatrix checked_solve(const CMatrix& m, const CMatrix& rhs, const char* what);

/// rhs M^-1, i.e. the right division.
CMatrix checked_right_divide(const CMatrix& rhs, const CMatrix& m, const char* what);

}  // namespace irsmc
