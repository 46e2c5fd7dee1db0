#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "colldecay/network.hpp"
#include "colldecay/time_series.hpp"

namespace colldecay {

/// One damped oscillation a * exp((-i f - d) tau) of the memory kernel.
struct KernelTerm {
  cplx amplitude;
  double frequency = 0.0;        ///< f
  double damping = 0.0;          ///< d >= 0
  double detuning_factor = 0.0;  ///< f - carrier
};

enum class KernelForm {
  /// Exact reduction: partners integrated out with their own dissipation.
  elimination,
  /// Stationary-response kernel read off the single-mode spectral solution;
  /// exact for drive-like (bright) initial data only.
  spectral,
};

/// Single-mode equation
///   dc/dt = -i carrier c - instantaneous_rate c - int_0^t K(tau) c(t - tau) dtau
/// with K(tau) = sum of oscillatory_terms for tau >= 0 and zero otherwise.
struct MemoryKernel {
  std::size_t mode = 0;
  double carrier = 0.0;
  double instantaneous_rate = 0.0;
  std::vector<KernelTerm> oscillatory_terms;
  bool causal = true;
  KernelForm form = KernelForm::elimination;

  cplx operator()(double tau) const;
  /// Largest |frequency|, damping or rate the integrator has to resolve.
  double rate_scale() const;
};

/// Integrates out every mode except i from the amplitude equation. Works for
/// any valid network; degenerate dark partners simply contribute terms with
/// zero damping.
MemoryKernel memory_kernel(const ValidatedNetwork& net, std::size_t i);

/// Kernel whose retarded transform reproduces the stationary response of
/// mode i: instantaneous rate sum_j gamma_j/2 and one undamped term per
/// non-degenerate partner with amplitude -i (gamma_j/2)(omega_j - omega_i).
/// Requires g = 0 and a single shared continuum, else NotApplicable.
MemoryKernel spectral_memory_kernel(const ValidatedNetwork& net, std::size_t i);

/// Exact local propagation plus a trapezoidal predictor-corrector for the
/// history convolution; pure exponentials come out exact. Output
/// channel "c_{mode+1}". Throws StepTooLarge if dt > 0.05 / rate_scale.
TimeSeries evolve_with_kernel(const MemoryKernel& k, cplx c0, const TimeGrid& grid);

/// Same integrator with an arbitrary causal kernel function.
TimeSeries evolve_with_kernel(const std::function<cplx(double)>& kernel, double carrier, double instantaneous_rate,
                              double rate_scale, cplx c0, const TimeGrid& grid, const std::string& label);

}  // namespace colldecay
