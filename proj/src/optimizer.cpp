#include "irsmc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "irsmc/linalg.hpp"
#include "irsmc/surface_solver.hpp"

namespace irsmc {

namespace {

struct Problem {
  const ChannelAuxiliaries& aux;
  const CMatrix& Z_S;
  const TransmitCovariance& covariance;
  bool diagonal;
};

// Everything computed for one iterate that the gradient can reuse.
struct Evaluation {
  SurfaceSolver solver;
  CMatrix QC;
  CMatrix H;
  double rate;
};

void check_problem(const ChannelAuxiliaries& aux, const CMatrix& Z_S, std::size_t n_loads,
                   const TransmitCovariance& covariance) {
  aux.validate();
  covariance.validate();
  const auto ns = aux.B.cols();
  if (Z_S.rows() != ns || Z_S.cols() != ns) {
    throw DomainError("Z_S does not match the surface size of B and C");
  }
  if (static_cast<Eigen::Index>(n_loads) != ns) {
    throw DomainError("state has " + std::to_string(n_loads) + " loads, surface has " + std::to_string(ns));
  }
  if (covariance.R_T.rows() != aux.C.cols()) {
    throw DomainError("transmit covariance does not match N_T");
  }
}

double log2_det_identity_plus(const CMatrix& H, const CMatrix& R_T) {
  const auto n = H.rows();
  CMatrix gram = CMatrix::Identity(n, n);
  gram.noalias() += H * R_T * H.adjoint();
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw DomainError("I + H R_T H^H is not positive definite");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i).real());
  return log_det / std::numbers::ln2;
}

Evaluation evaluate(const Problem& p, const RVector& reactances) {
  const CVector loads = reactances.cast<Complex>() * kJ;
  SurfaceSolver solver(p.Z_S, loads, p.diagonal);
  CMatrix QC = solver.solve(p.aux.C);
  CMatrix H = p.aux.A - p.aux.B * QC;
  const double rate = log2_det_identity_plus(H, p.covariance.R_T);
  return Evaluation{std::move(solver), std::move(QC), std::move(H), rate};
}

CVector gradient(const Problem& p, const Evaluation& e) {
  const CMatrix& A = p.aux.A;
  const CMatrix& B = p.aux.B;
  const CMatrix& C = p.aux.C;
  const CMatrix& R = p.covariance.R_T;
  const auto nr = A.rows();

  const CMatrix BQ = e.solver.solve_left(B);
  const CMatrix BQC = B * e.QC;
  const CMatrix D = CMatrix::Identity(nr, nr) + A * R * A.adjoint() - A * R * BQC.adjoint();
  const CMatrix E = C * R * (BQC - A).adjoint();
  const CMatrix M = BQ * E + D;
  const CMatrix QE = e.solver.solve(E);
  const CMatrix W = checked_right_divide(QE, M, "B Q E + D");

  const double scale = -std::numbers::log2e;
  CVector g(B.cols());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    g(k) = std::conj(scale * W.row(k).transpose().cwiseProduct(BQ.col(k)).sum());
  }
  return g;
}

double inf_norm(const RVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

IrsState IrsState::zeros(std::size_t n) { return IrsState{RVector::Zero(static_cast<Eigen::Index>(n))}; }

IrsState IrsState::uniform(std::size_t n, double half_range_ohm, Rng& rng) {
  RVector x(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = rng.uniform(-half_range_ohm, half_range_ohm);
  return IrsState{x};
}

TransmitCovariance TransmitCovariance::scaled_identity(std::size_t n_tx, double power_scale) {
  if (n_tx == 0) throw DomainError("transmit covariance needs N_T >= 1");
  if (!(power_scale > 0.0)) throw DomainError("power scale must be positive");
  const auto n = static_cast<Eigen::Index>(n_tx);
  return TransmitCovariance{CMatrix::Identity(n, n) * (power_scale / static_cast<double>(n_tx)), power_scale};
}

void TransmitCovariance::validate() const {
  if (R_T.rows() == 0 || R_T.rows() != R_T.cols()) throw DomainError("R_T must be square and non-empty");
  if (!R_T.isApprox(R_T.adjoint(), 1e-12)) throw DomainError("R_T must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(R_T, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff())) {
    throw DomainError("R_T must be positive semidefinite");
  }
}

void OptimizerConfig::validate() const {
  if (!(step_size > 0.0)) throw DomainError("step size must be positive");
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(grad_tol > 0.0)) throw DomainError("grad_tol must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw DomainError("shrink factor must lie in (0, 1)");
  if (max_shrinks < 0) throw DomainError("max_shrinks must be non-negative");
  if (!(armijo >= 0.0 && armijo < 1.0)) throw DomainError("armijo fraction must lie in [0, 1)");
  if (!(expand >= 1.0)) throw DomainError("expand factor must be at least 1");
  if (!(max_step >= step_size)) throw DomainError("max_step must be at least the step size");
  if (!(max_condition > 1.0)) throw DomainError("max_condition must exceed 1");
}

bool RateTrace::non_decreasing() const {
  return std::is_sorted(rate.begin(), rate.end());
}

double achievable_rate(const CMatrix& H, const TransmitCovariance& covariance) {
  covariance.validate();
  if (H.cols() != covariance.R_T.rows()) throw DomainError("H and R_T disagree on N_T");
  return log2_det_identity_plus(H, covariance.R_T);
}

double achievable_rate(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                       const TransmitCovariance& covariance) {
  check_problem(aux, Z_S, state.size(), covariance);
  const Problem p{aux, Z_S, covariance, SurfaceSolver::is_diagonal(Z_S)};
  return evaluate(p, state.reactances_ohm).rate;
}

CVector rate_gradient(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                      const TransmitCovariance& covariance) {
  check_problem(aux, Z_S, state.size(), covariance);
  const Problem p{aux, Z_S, covariance, SurfaceSolver::is_diagonal(Z_S)};
  return gradient(p, evaluate(p, state.reactances_ohm));
}

RVector reactance_gradient(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                           const TransmitCovariance& covariance) {
  return 2.0 * rate_gradient(aux, Z_S, state, covariance).imag();
}

CMatrix inverse_derivative(const CMatrix& Z_S, const IrsState& state, std::size_t k) {
  if (k >= state.size()) throw DomainError("load index out of range");
  const SurfaceSolver solver(Z_S, state.loads());
  const auto n = solver.size();
  const CMatrix unit = CMatrix::Identity(n, n).col(static_cast<Eigen::Index>(k));
  const CMatrix column = solver.solve(unit);                   // Q e_k
  const CMatrix row = solver.solve_left(unit.transpose());     // e_k^T Q
  return -(column * row);
}

OptimizationResult optimize_loads(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& init,
                                  const TransmitCovariance& covariance, const OptimizerConfig& config) {
  config.validate();
  check_problem(aux, Z_S, init.size(), covariance);
  const Problem p{aux, Z_S, covariance, SurfaceSolver::is_diagonal(Z_S)};

  OptimizationResult result;
  result.state = init;
  RVector& x = result.state.reactances_ohm;
  RateTrace& trace = result.trace;

  Evaluation current = evaluate(p, x);
  RVector direction = gradient(p, current).imag();
  trace.rate.push_back(current.rate);
  trace.grad_norm.push_back(inf_norm(direction));
  trace.step.push_back(0.0);

  double step = config.step_size;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    if (inf_norm(direction) < config.grad_tol) {
      result.converged = true;
      result.stop_reason = "gradient below tolerance";
      break;
    }

    std::optional<Evaluation> next;
    RVector candidate;
    if (!config.backtracking) {
      candidate = x + step * direction;
      try {
        next.emplace(evaluate(p, candidate));
      } catch (const SingularityError& err) {
        throw OptimizationError(std::string("ascent stepped onto a singular surface: ") + err.what(),
                                err.condition(), result.state, trace);
      }
    } else {
      // Directional derivative of C along `direction` in reactance space is 2 |direction|^2.
      const double slope = 2.0 * direction.squaredNorm();
      for (int shrink = 0; shrink <= config.max_shrinks; ++shrink) {
        candidate = x + step * direction;
        try {
          Evaluation trial = evaluate(p, candidate);
          const bool acceptable = std::isfinite(trial.rate) &&
                                  trial.solver.condition() <= config.max_condition &&
                                  trial.rate >= current.rate + config.armijo * step * slope;
          if (acceptable) {
            next.emplace(std::move(trial));
            break;
          }
        } catch (const SingularityError&) {
        } catch (const DomainError&) {
        }
        step *= config.shrink;
      }
      if (!next) {
        result.stop_reason = "line search found no ascent step";
        break;
      }
    }

    x = candidate;
    current = std::move(*next);
    direction = gradient(p, current).imag();
    trace.rate.push_back(current.rate);
    trace.grad_norm.push_back(inf_norm(direction));
    trace.step.push_back(step);

    if (config.backtracking) {
      step = config.expand > 1.0 ? std::min(step * config.expand, config.max_step) : config.step_size;
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "iteration limit";
  return result;
}

}  // namespace irsmc
