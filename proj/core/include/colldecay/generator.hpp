#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "colldecay/network.hpp"

namespace colldecay {

enum class Sector { amplitude, number };

/// Affine system dx/dt = A x + s(t). The number sector is real but stored
/// complex (zero imaginary parts) so both sectors share one solver path.
struct LinearGenerator {
  Sector sector = Sector::amplitude;
  std::size_t mode_count = 0;
  Eigen::MatrixXcd matrix;
  /// Time-independent inhomogeneity (thermal terms of the number sector).
  Eigen::VectorXcd constant_source;
  /// D x C weights multiplying <b_in^c(t)>; amplitude sector only.
  Eigen::MatrixXcd drive_weights;
  std::vector<std::string> basis_labels;
  /// max(|omega_i|, gamma_i, |g_ij|); bounds the explicit step size.
  double rate_scale = 0.0;
  /// Set for the fermionic weak-field reduction: populations must stay <= 1.
  bool weak_field = false;

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }

  /// s(t) for the given drive. Throws NotApplicable when a coherent input is
  /// fed to the number sector (use the fluctuation split in solve instead).
  Eigen::VectorXcd source(double t, const DriveSpec& drive) const;
  /// True when s(t) does not depend on t for this drive.
  bool source_is_constant(const DriveSpec& drive) const;
};

LinearGenerator build_amplitude_generator(const ValidatedNetwork& net);

/// Number-sector generator over (N_1..N_N, O_12, Y_12, O_13, Y_13, ...),
/// obtained by lifting the amplitude matrix through the product rule, plus
/// the thermal source for occupancy n_th in every continuum.
LinearGenerator build_number_generator(const ValidatedNetwork& net, double n_th = 0.0);
/// Per-continuum thermal occupancies; missing entries are zero.
LinearGenerator build_number_generator(const ValidatedNetwork& net, std::span<const double> n_th);

/// sigma_z -> -1 reduction of two-level modes: same matrix as the bosonic
/// amplitude generator, flagged weak_field. Requires every mode fermionic.
LinearGenerator build_fermion_weakfield_generator(const ValidatedNetwork& net);

// ---------------------------------------------------------------------------
// Observable basis helpers

/// Row of O_ij in the number basis (Y_ij follows at +1), i < j, 0-based.
std::size_t pair_offset(std::size_t i, std::size_t j, std::size_t n);
std::size_t number_dimension(std::size_t n);

/// Labels use 1-based indices: "c_1", "N_2", "O_12"; indices are joined by
/// '_' once any exceeds 9 ("O_3_10").
std::string pair_label(char prefix, std::size_t i, std::size_t j, std::size_t n);
std::vector<std::string> amplitude_labels(std::size_t n);
std::vector<std::string> number_labels(std::size_t n);

/// Correlation matrix P_ij = <c_i^dag c_j> <-> (N, O, Y) vector, with
/// N_i = P_ii, O_ij = 2 Re P_ij, Y_ij = -2 Im P_ij.
Eigen::VectorXcd to_number_vector(const Eigen::MatrixXcd& p);
Eigen::MatrixXcd from_number_vector(const Eigen::VectorXcd& x, std::size_t n);

/// Real matrix of P -> conj(A) P + P A^T on the Hermitian observable basis.
Eigen::MatrixXcd lift_to_number_sector(const Eigen::MatrixXcd& a);

/// Q = sum_c n_c s_c s_c^T mapped to the number basis (s_c = sqrt(gamma^c)).
Eigen::VectorXcd thermal_source(const ModeNetwork& net, std::span<const double> n_th);

double rate_scale(const ModeNetwork& net);

}  // namespace colldecay
