#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "colldecay/network.hpp"
#include "colldecay/time_series.hpp"

namespace colldecay {

/// Closed single-particle problem: N system modes plus K evenly spaced bath
/// modes per continuum on [center - W/2, center + W/2], coupled with
/// strength sqrt(gamma delta_omega / 2 pi). Heisenberg form dv/dt = -i h v.
struct DiscretizedSystem {
  std::size_t mode_count = 0;
  std::size_t modes_per_continuum = 0;
  double bandwidth = 0.0;
  double center = 0.0;
  double delta_omega = 0.0;

  Eigen::MatrixXcd system_block;        ///< N x N: diag(omega) + g
  Eigen::MatrixXcd coupling;            ///< N x (C K): h_{i,k} = -i kappa sqrt(delta_omega)
  Eigen::VectorXd continuum_energies;   ///< C K bath frequencies

  std::size_t dimension() const { return mode_count + static_cast<std::size_t>(continuum_energies.size()); }
  /// Poincare recurrence 2 pi / delta_omega of the discrete bath.
  double recurrence_time() const;
  /// h applied to a block of column vectors, using the arrowhead structure.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v) const;
  Eigen::MatrixXcd dense_hamiltonian() const;
};

inline constexpr double kMinBandwidthFactor = 10.0;
inline constexpr double kRecurrenceFraction = 0.8;

/// Throws EmptyContinuum for K = 0 and BandwidthTooSmall for W below ten
/// times the largest decay rate.
DiscretizedSystem discretize_continuum(const ValidatedNetwork& net, std::size_t k, double bandwidth);

/// Exact quadratic dynamics from an empty bath: channels c_i, N_i, O_ij, Y_ij
/// and excitation_total (system plus bath). Propagation uses a Chebyshev
/// expansion of exp(-i h dt). Throws RecurrenceHorizonExceeded when t_max is
/// beyond 0.8 of the recurrence time.
TimeSeries oracle_evolve(const DiscretizedSystem& sys, const InitialState& init, const TimeGrid& grid);

}  // namespace colldecay
