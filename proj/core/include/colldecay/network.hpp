#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "colldecay/time_series.hpp"

namespace colldecay {

/// A continuum is `global` when shared by several modes and `local` when it
/// is private to exactly one mode.
enum class Topology { global, local };

enum class Statistics { boson, fermion };

/// Discrete modes decaying into C Markovian continua. Rates and frequencies
/// are in units of a reference rate gamma_0; time in 1/gamma_0.
struct ModeNetwork {
  std::vector<double> omegas;       ///< resonance frequencies, size N
  Eigen::MatrixXd gammas;           ///< N x C decay rates into each continuum
  Eigen::MatrixXd couplings;        ///< N x N real symmetric g_ij, zero diagonal
  std::vector<Topology> topology;   ///< size C
  std::vector<Statistics> statistics;  ///< size N or empty (all bosonic)

  std::size_t mode_count() const { return omegas.size(); }
  std::size_t continuum_count() const { return static_cast<std::size_t>(gammas.cols()); }

  /// Total decay rate of mode i summed over continua.
  double total_rate(std::size_t i) const { return gammas.row(static_cast<Eigen::Index>(i)).sum(); }

  /// Convenience: N uncoupled modes sharing one global continuum.
  static ModeNetwork shared(std::vector<double> omegas, const std::vector<double>& rates);
};

/// Cross-damping matrix Gamma_ij = sum_c sqrt(gamma_i^c gamma_j^c) / 2; a
/// local continuum contributes only to the diagonal.
Eigen::MatrixXd damping_matrix(const ModeNetwork& net);

/// A network whose invariants have been checked. Only validate_network
/// constructs one.
class ValidatedNetwork {
 public:
  const ModeNetwork& network() const { return net_; }
  const ModeNetwork* operator->() const { return &net_; }

  double degeneracy_tolerance() const { return tolerance_; }
  /// Pairs (i, j), i < j, with |omega_i - omega_j| below the tolerance.
  const std::vector<std::pair<std::size_t, std::size_t>>& degenerate_pairs() const { return degenerate_; }
  bool degenerate(std::size_t i, std::size_t j) const;
  bool all_fermionic() const;

 private:
  friend ValidatedNetwork validate_network(ModeNetwork net, double degeneracy_tolerance);
  ValidatedNetwork(ModeNetwork net, double tol) : net_(std::move(net)), tolerance_(tol) {}

  ModeNetwork net_;
  double tolerance_;
  std::vector<std::pair<std::size_t, std::size_t>> degenerate_;
};

inline constexpr double kDefaultDegeneracyTolerance = 1e-9;

/// Checks every invariant; errors name the offending index.
ValidatedNetwork validate_network(ModeNetwork net, double degeneracy_tolerance = kDefaultDegeneracyTolerance);

/// Independent-decay baseline: every mode gets its own private continuum
/// carrying its total rate, so all cross-damping vanishes. Modes with zero
/// total rate get no continuum. Idempotent.
ModeNetwork localize(const ModeNetwork& net);

// ---------------------------------------------------------------------------
// Initial data and drives

struct Coherent {
  cplx alpha;
};

struct Fock {
  unsigned n = 0;
};

using ModeState = std::variant<Coherent, Fock>;

/// Real initial coherences <O_ij(0)>, <Y_ij(0)> for one pair.
struct Coherence {
  double O = 0.0;
  double Y = 0.0;
};

/// Product initial state of the discrete modes with an empty continuum.
/// Explicit coherences (keyed by i < j) override the product-state values.
struct InitialState {
  std::vector<ModeState> modes;
  std::map<std::pair<std::size_t, std::size_t>, Coherence> coherences;

  static InitialState fock(const std::vector<unsigned>& occupations);
  static InitialState coherent(const std::vector<cplx>& alphas);

  std::size_t mode_count() const { return modes.size(); }
  bool all_coherent() const;

  /// Mean amplitudes <c_i(0)>; zero for Fock modes.
  Eigen::VectorXcd amplitudes() const;
  /// Correlation matrix P_ij = <c_i^dagger c_j> at t = 0.
  Eigen::MatrixXcd correlations() const;
};

/// Coherent expectation <b_in^c(t)> per continuum and thermal occupancy per
/// continuum. Missing entries mean zero.
struct DriveSpec {
  std::vector<std::function<cplx(double)>> b_in_mean;
  std::vector<double> n_th;

  cplx input(std::size_t continuum, double t) const;
  double thermal(std::size_t continuum) const;
  bool has_coherent_input() const;
  bool has_thermal_input() const;
  void validate() const;

  static DriveSpec monochromatic(std::size_t continuum, cplx amplitude, double omega);
  static DriveSpec thermal_only(std::vector<double> n_th);
};

}  // namespace colldecay
