#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "colldecay/network.hpp"

namespace colldecay {

/// n_points frequencies evenly spaced over [min, max], relative to the
/// response's reference frequency.
struct FrequencyGrid {
  double min = -10.0;
  double max = 10.0;
  std::size_t n_points = 201;

  std::vector<double> points() const;
  void validate() const;
};

/// Steady response c_i(omega) of every mode to a unit monochromatic input
/// <b_in(t)> = exp(-i omega t) on one continuum.
struct SpectralResponse {
  ModeNetwork network;
  std::size_t input_continuum = 0;
  double reference = 0.0;                ///< mean mode frequency
  std::vector<double> omega_rel;         ///< omega - reference
  Eigen::MatrixXcd amplitudes;           ///< n_points x N
  Eigen::MatrixXd detunings;             ///< n_points x N, omega - omega_i
  std::vector<bool> singular;            ///< response matrix rcond < 1e-12
  std::optional<std::vector<double>> transmitted;
  std::optional<std::vector<double>> reflected;

  std::size_t size() const { return omega_rel.size(); }
  double omega(std::size_t k) const { return reference + omega_rel[k]; }
};

inline constexpr double kSingularRcond = 1e-12;

SpectralResponse spectral_response(const ValidatedNetwork& net, const FrequencyGrid& grid,
                                   std::size_t input_continuum = 0);

/// Pointwise |D_i c_i/sqrt(g_i) - D_j c_j/sqrt(g_j)| / max(|..|, |..|, eps)
/// with total rates g and detunings D_i shifted by kappa*g_i when the direct
/// couplings are g_ij = kappa*sqrt(g_i g_j). Singular points are NaN.
/// Throws NotApplicable when g is nonzero and not of that form.
std::vector<double> correlation_residual(const SpectralResponse& resp, std::size_t i, std::size_t j);

/// Largest finite entry (NaNs skipped); 0 for an all-NaN input.
double max_finite(const std::vector<double>& v);

/// kappa with g_ij = kappa*sqrt(g_i g_j) for every pair, or nullopt.
std::optional<double> coupling_proportionality(const ModeNetwork& net);

/// Per-mode closed-form response for a single shared continuum with
/// g = kappa*sqrt(g_i g_j): c_i = -sqrt(g_i) / (-i D'_i + (1/2 + i kappa)
/// sum_j g_j D'_i / D'_j). Used as an independent check of the linear solve.
SpectralResponse spectral_closed_form(const ValidatedNetwork& net, const FrequencyGrid& grid);

/// Two-sided network with continua (L, R): unit input on L,
/// T = |sum_j sqrt(g_j^R) c_j|^2, R = |1 + sum_j sqrt(g_j^L) c_j|^2.
SpectralResponse transmission(const ValidatedNetwork& net, const FrequencyGrid& grid);

/// CSV: omega_rel, T and R when present, then re_c_i, im_c_i.
void write_csv(std::ostream& out, const SpectralResponse& resp);

}  // namespace colldecay
