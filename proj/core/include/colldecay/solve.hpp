#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "colldecay/generator.hpp"
#include "colldecay/network.hpp"
#include "colldecay/time_series.hpp"

namespace colldecay {

/// Eigen-decomposition A V = V diag(lambda) plus coefficients fitted to an
/// initial state: x(t) = offset + V (coefficients .* exp(lambda t)).
struct ModalSolution {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  Eigen::VectorXcd coefficients;
  Eigen::VectorXcd offset;
  Eigen::VectorXcd initial;  ///< returned verbatim at t = 0
  double condition_number = 1.0;

  Sector sector = Sector::amplitude;
  std::size_t mode_count = 0;
  std::vector<std::string> basis_labels;
  bool weak_field = false;

  /// Fits the coefficients so that state(0) = x0; `offset` is the fixed
  /// point of an affine system (zero when source-free).
  void fit(const Eigen::VectorXcd& x0, const Eigen::VectorXcd& offset = {});
  Eigen::VectorXcd state(double t) const;
};

inline constexpr double kDefectiveCondition = 1e8;

/// Full spectrum of a time-independent generator. Throws DefectiveMatrix when
/// the eigenvector condition number exceeds 1e8.
ModalSolution eigensolve(const LinearGenerator& gen);

TimeSeries evolve_closed_form(const ModalSolution& modal, const TimeGrid& grid);

/// Fixed-step RK4 on dx/dt = A x + s(t). Throws StepTooLarge when
/// dt > 0.05 / rate_scale and NonfiniteState on overflow.
TimeSeries integrate_rk4(const LinearGenerator& gen, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                         const TimeGrid& grid);

/// Generator rebuilt at every RK4 stage time, for omega(t), gamma(t), g(t).
using GeneratorFamily = std::function<LinearGenerator(double)>;
TimeSeries integrate_rk4(const GeneratorFamily& family, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                         const TimeGrid& grid);

/// Exact stepping with exp(dt * [[A, s], [0, 0]]); valid for defective A
/// and time-independent sources.
TimeSeries evolve_expm(const LinearGenerator& gen, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                       const TimeGrid& grid);

/// Solves A x = -s. Throws NoUniqueSteadyState unless every Re(lambda) < 0.
Eigen::VectorXcd steady_state(const LinearGenerator& gen, const Eigen::VectorXcd& constant_source);

enum class Method { automatic, closed_form, expm, rk4 };

/// Dispatches on method; `automatic` picks the closed form for constant
/// sources and falls back to expm on defective matrices, RK4 for
/// time-dependent drives.
TimeSeries evolve(const LinearGenerator& gen, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                  const TimeGrid& grid, Method method = Method::automatic);

struct Trajectory {
  TimeSeries amplitudes;  ///< c_i
  TimeSeries numbers;     ///< N_i, O_ij, Y_ij
};

/// Both sectors for a network, initial state and drive. With coherent input
/// the number sector is assembled as |<c>|^2-type products of the amplitude
/// solution plus the thermal fluctuation part, which is exact for linear
/// dynamics. All-fermionic networks are evolved under the weak-field
/// contract.
Trajectory simulate(const ValidatedNetwork& net, const InitialState& init, const DriveSpec& drive,
                    const TimeGrid& grid, Method method = Method::automatic);

/// Packs state vectors into labelled channels. Number-sector populations in
/// (-1e-9, 0) are clamped to 0, lower values throw NegativePopulation; with
/// weak_field set, any population above 1 + 1e-6 throws WeakFieldViolation.
TimeSeries to_series(const std::vector<double>& times, const std::vector<Eigen::VectorXcd>& states,
                     const std::vector<std::string>& labels, Sector sector, std::size_t mode_count,
                     bool weak_field);

inline constexpr double kPopulationFloor = -1e-9;
inline constexpr double kWeakFieldLimit = 1.0 + 1e-6;
inline constexpr double kStepSafety = 0.05;

}  // namespace colldecay
