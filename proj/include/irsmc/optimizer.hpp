#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "irsmc/channel.hpp"
#include "irsmc/errors.hpp"
#include "irsmc/random.hpp"
#include "irsmc/types.hpp"

namespace irsmc {

/// Phase-shifter loads z_k = j x_k. Only the reactances are stored, so every load is purely
/// imaginary by construction.
struct IrsState {
  RVector reactances_ohm;

  std::size_t size() const { return static_cast<std::size_t>(reactances_ohm.size()); }
  CVector loads() const { return reactances_ohm.cast<Complex>() * kJ; }

  static IrsState zeros(std::size_t n);
  /// x_k ~ Uniform[-half_range, half_range].
  static IrsState uniform(std::size_t n, double half_range_ohm, Rng& rng);
};

/// R_T = (rho / N_T) I by default; rho absorbs transmit power and noise normalization.
struct TransmitCovariance {
  CMatrix R_T;
  double power_scale = 1.0;

  static TransmitCovariance scaled_identity(std::size_t n_tx, double power_scale);
  void validate() const;
};

struct OptimizerConfig {
  double step_size = 1.0;      // eta, ohm per unit of the ascent direction
  int max_iters = 2000;
  double grad_tol = 1e-6;      // stop when max_k |Im{grad_k}| falls below this
  bool backtracking = true;
  double shrink = 0.5;
  int max_shrinks = 30;
  double armijo = 0.0;         // sufficient-increase fraction; 0 accepts any non-decrease
  double expand = 1.0;         // > 1 carries a grown step into the next iteration
  double max_step = 1e12;
  double max_condition = 1e12; // iterates with a worse-conditioned surface matrix are rejected

  void validate() const;
};

struct RateTrace {
  std::vector<double> rate;       // bits/s/Hz, entry 0 is the initial state
  std::vector<double> grad_norm;  // max_k |Im{grad_k}|
  std::vector<double> step;       // step applied to reach this entry (0 for the initial state)

  std::size_t iterations() const { return rate.empty() ? 0 : rate.size() - 1; }
  bool non_decreasing() const;
};

struct OptimizationResult {
  IrsState state;
  RateTrace trace;
  bool converged = false;
  std::string stop_reason;

  double rate() const { return trace.rate.back(); }
};

/// A singular surface matrix was met during plain ascent; carries the last iterate that solved.
class OptimizationError : public SingularityError {
 public:
  OptimizationError(const std::string& what, double condition, IrsState last_good, RateTrace trace)
      : SingularityError(what, condition), last_good_(std::move(last_good)), trace_(std::move(trace)) {}

  const IrsState& last_good_state() const { return last_good_; }
  const RateTrace& trace() const { return trace_; }

 private:
  IrsState last_good_;
  RateTrace trace_;
};

/// log2 det(I + H R_T H^H) with H = A - B (diag(z_IRS) + Z_S)^-1 C.
double achievable_rate(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                       const TransmitCovariance& covariance);

/// log2 det(I + H R_T H^H) for an explicit channel.
double achievable_rate(const CMatrix& H, const TransmitCovariance& covariance);

/// Wirtinger gradient dC/dz*, i.e. diag(Q P)^* with
///   Q = (diag(z_IRS) + Z_S)^-1,
///   P = -log2(e) E (B Q E + D)^-1 B Q,
///   D = I + A R_T A^H - A R_T C^H Q^H B^H,
///   E = C R_T (B Q C - A)^H.
/// P is never formed; only its diagonal contraction with Q.
CVector rate_gradient(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                      const TransmitCovariance& covariance);

/// dC/dx_k for loads j x_k, equal to 2 Im{rate_gradient_k}.
RVector reactance_gradient(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                           const TransmitCovariance& covariance);

/// dQ/dz_k = -Q e_k e_k^T Q.
CMatrix inverse_derivative(const CMatrix& Z_S, const IrsState& state, std::size_t k);

/// Projected gradient ascent x <- x + eta Im{diag(Q P)^*}, optionally with backtracking.
/// Backtracking rejects non-finite, worse, or ill-conditioned iterates, so the trace is
/// non-decreasing. Plain mode throws OptimizationError on a singular iterate.
OptimizationResult optimize_loads(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& init,
                                  const TransmitCovariance& covariance, const OptimizerConfig& config);

}  // namespace irsmc
