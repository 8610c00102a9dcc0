#pragma once

#include <cstddef>
#include <cstdint>

#include "irsmc/optimizer.hpp"

namespace irsmc {

/// A well-conditioned synthetic problem: Gaussian A, B, C, a complex-symmetric Z_S with positive
/// definite real part, random reactances and R_T = I / N_T.
struct RandomInstance {
  ChannelAuxiliaries aux;
  CMatrix Z_S;
  IrsState state;
  TransmitCovariance covariance;
};

RandomInstance make_random_instance(std::size_t n_tx, std::size_t n_surface, std::size_t n_rx,
                                    std::uint64_t seed);

struct GradientCheck {
  RVector analytic;           // dC/dx from the closed form
  RVector finite_difference;  // central differences of the rate
  double max_relative_error = 0.0;
};

/// Central differences with step relative_step * (1 + |x_k|) along each reactance.
GradientCheck check_reactance_gradient(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                                       const TransmitCovariance& covariance, double relative_step = 1e-5);

}  // namespace irsmc
