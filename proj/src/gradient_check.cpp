#include "irsmc/gradient_check.hpp"

#include <algorithm>
#include <cmath>

namespace irsmc {

namespace {

CMatrix gaussian(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      m(i, j) = scale * Complex{re, im} / std::sqrt(2.0);
    }
  }
  return m;
}

}  // namespace

RandomInstance make_random_instance(std::size_t n_tx, std::size_t n_surface, std::size_t n_rx,
                                    std::uint64_t seed) {
  Rng rng(seed);
  const auto nt = static_cast<Eigen::Index>(n_tx);
  const auto ns = static_cast<Eigen::Index>(n_surface);
  const auto nr = static_cast<Eigen::Index>(n_rx);

  RandomInstance inst;
  inst.aux.A = gaussian(nr, nt, 0.5, rng);
  inst.aux.B = gaussian(nr, ns, 4.0, rng);
  inst.aux.C = gaussian(ns, nt, 4.0, rng);

  const Eigen::MatrixXd g = gaussian(ns, ns, 1.0, rng).real();
  Eigen::MatrixXd resistance = 20.0 * Eigen::MatrixXd::Identity(ns, ns) + 10.0 * g * g.transpose() / static_cast<double>(ns);
  const Eigen::MatrixXd h = gaussian(ns, ns, 15.0, rng).real();
  const Eigen::MatrixXd reactance = 0.5 * (h + h.transpose());
  inst.Z_S = resistance.cast<Complex>() + kJ * reactance.cast<Complex>();

  inst.state = IrsState::uniform(n_surface, 100.0, rng);
  inst.covariance = TransmitCovariance::scaled_identity(n_tx, 1.0);
  return inst;
}

GradientCheck check_reactance_gradient(const ChannelAuxiliaries& aux, const CMatrix& Z_S, const IrsState& state,
                                       const TransmitCovariance& covariance, double relative_step) {
  GradientCheck out;
  out.analytic = reactance_gradient(aux, Z_S, state, covariance);
  out.finite_difference.resize(out.analytic.size());
  for (Eigen::Index k = 0; k < out.analytic.size(); ++k) {
    const double h = relative_step * (1.0 + std::abs(state.reactances_ohm(k)));
    IrsState up = state;
    IrsState down = state;
    up.reactances_ohm(k) += h;
    down.reactances_ohm(k) -= h;
    out.finite_difference(k) =
        (achievable_rate(aux, Z_S, up, covariance) - achievable_rate(aux, Z_S, down, covariance)) / (2.0 * h);
    const double scale = std::max(std::abs(out.analytic(k)), std::abs(out.finite_difference(k)));
    if (scale > 0.0) {
      out.max_relative_error =
          std::max(out.max_relative_error, std::abs(out.analytic(k) - out.finite_difference(k)) / scale);
    }
  }
  return out;
}

}  // namespace irsmc
