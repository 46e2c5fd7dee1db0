#include "colldecay/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "colldecay/errors.hpp"
#include "colldecay/generator.hpp"
#include "colldecay/solve.hpp"
#include "colldecay/spectral.hpp"

namespace colldecay {

namespace {

constexpr cplx I{0.0, 1.0};

void check_mode(const ValidatedNetwork& net, std::size_t i) {
  if (i >= net->mode_count()) {
    throw Error(ErrorCode::InvalidArgument, "mode index " + std::to_string(i) + " out of range");
  }
}

}  // namespace

cplx MemoryKernel::operator()(double tau) const {
  if (causal && tau < 0.0) return 0.0;
  cplx k = 0.0;
  for (const auto& term : oscillatory_terms) {
    k += term.amplitude * std::exp(cplx(-term.damping, -term.frequency) * tau);
  }
  return k;
}

double MemoryKernel::rate_scale() const {
  double r = std::max(std::abs(carrier), instantaneous_rate);
  for (const auto& t : oscillatory_terms) r = std::max({r, std::abs(t.frequency), t.damping});
  return r;
}

MemoryKernel memory_kernel(const ValidatedNetwork& net, std::size_t i) {
  check_mode(net, i);
  const LinearGenerator gen = build_amplitude_generator(net);
  const Eigen::MatrixXd gamma = damping_matrix(net.network());
  const auto n = gen.matrix.rows();
  const auto ii = static_cast<Eigen::Index>(i);

  MemoryKernel k;
  k.mode = i;
  k.form = KernelForm::elimination;
  k.carrier = net->omegas[i];
  k.instantaneous_rate = gamma(ii, ii);
  if (n == 1) return k;

  std::vector<Eigen::Index> partners;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != ii) partners.push_back(j);
  }
  const auto np = static_cast<Eigen::Index>(partners.size());
  Eigen::MatrixXcd app(np, np);
  Eigen::RowVectorXcd aip(np);
  Eigen::VectorXcd api(np);
  for (Eigen::Index a = 0; a < np; ++a) {
    aip(a) = gen.matrix(ii, partners[static_cast<std::size_t>(a)]);
    api(a) = gen.matrix(partners[static_cast<std::size_t>(a)], ii);
    for (Eigen::Index b = 0; b < np; ++b) {
      app(a, b) = gen.matrix(partners[static_cast<std::size_t>(a)], partners[static_cast<std::size_t>(b)]);
    }
  }

  // K(tau) = -A_iP exp(A_PP tau) A_Pi, expanded over the partner eigenmodes.
  LinearGenerator sub;
  sub.matrix = app;
  const ModalSolution modal = eigensolve(sub);
  const Eigen::RowVectorXcd left = aip * modal.eigenvectors;
  const Eigen::VectorXcd right = modal.eigenvectors.fullPivLu().solve(api);
  for (Eigen::Index m = 0; m < np; ++m) {
    const cplx a = -left(m) * right(m);
    if (a == cplx{}) continue;
    KernelTerm t;
    t.amplitude = a;
    t.frequency = -modal.eigenvalues(m).imag();
    t.damping = -modal.eigenvalues(m).real();
    t.detuning_factor = t.frequency - k.carrier;
    k.oscillatory_terms.push_back(t);
  }
  return k;
}

MemoryKernel spectral_memory_kernel(const ValidatedNetwork& net, std::size_t i) {
  check_mode(net, i);
  const ModeNetwork& m = net.network();
  if (m.couplings.cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::NotApplicable, "spectral kernel requires g = 0");
  }
  const Eigen::MatrixXd gamma = damping_matrix(m);
  const auto n = gamma.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double lhs = gamma(a, b) * gamma(a, b);
      const double rhs = gamma(a, a) * gamma(b, b);
      if (std::abs(lhs - rhs) > 1e-12 * (rhs + 1e-300)) {
        throw Error(ErrorCode::NotApplicable, "spectral kernel requires a single shared continuum");
      }
    }
  }

  MemoryKernel k;
  k.mode = i;
  k.form = KernelForm::spectral;
  k.carrier = m.omegas[i];
  // gamma_i(omega) = sum_j (gamma_j/2) D_i/D_j, and D_i/D_j = 1 + (w_j - w_i)/(w - w_j):
  // the constant parts add to the instantaneous rate, the poles become
  // undamped oscillations at w_j.
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    k.instantaneous_rate += gamma(j, j);
    if (sj == i || net.degenerate(i, sj)) continue;
    KernelTerm t;
    t.frequency = m.omegas[sj];
    t.detuning_factor = m.omegas[sj] - m.omegas[i];
    t.amplitude = -I * gamma(j, j) * t.detuning_factor;
    k.oscillatory_terms.push_back(t);
  }
  return k;
}

TimeSeries evolve_with_kernel(const MemoryKernel& k, cplx c0, const TimeGrid& grid) {
  return evolve_with_kernel(k, k.carrier, k.instantaneous_rate, k.rate_scale(), c0, grid,
                            "c_" + std::to_string(k.mode + 1));
}

TimeSeries evolve_with_kernel(const std::function<cplx(double)>& kernel, double carrier, double instantaneous_rate,
                              double rate_scale, cplx c0, const TimeGrid& grid, const std::string& label) {
  const auto times = grid.points();
  const double h = grid.dt;
  if (rate_scale > 0.0 && h > kStepSafety / rate_scale) {
    std::ostringstream msg;
    msg << "kernel step " << h << " exceeds " << kStepSafety << "/" << rate_scale;
    throw Error(ErrorCode::StepTooLarge, msg.str());
  }
  const std::size_t n = times.size();
  std::vector<cplx> kv(n);
  for (std::size_t s = 0; s < n; ++s) kv[s] = kernel(times[s]);

  std::vector<cplx> c(n);
  c[0] = c0;
  // The local part is integrated exactly (integrating factor), the memory
  // integral by a trapezoidal predictor-corrector on top of it.
  const cplx decay = std::exp(cplx(-instantaneous_rate, -carrier) * h);

  // I_m = h [K_m c_0 / 2 + sum_{l=1}^{m-1} K_{m-l} c_l + K_0 c_m / 2]
  auto memory = [&](std::size_t m, cplx newest) {
    if (m == 0) return cplx{};
    cplx s = 0.5 * kv[m] * c[0];
    for (std::size_t l = 1; l < m; ++l) s += kv[m - l] * c[l];
    return h * (s + 0.5 * kv[0] * newest);
  };

  cplx mem = 0.0;
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const cplx pred = decay * (c[m] - h * mem);
    const cplx mem_pred = memory(m + 1, pred);
    c[m + 1] = decay * c[m] - 0.5 * h * (decay * mem + mem_pred);
    if (!std::isfinite(c[m + 1].real()) || !std::isfinite(c[m + 1].imag())) {
      throw Error(ErrorCode::NonfiniteState, "kernel evolution diverged at t = " + std::to_string(times[m + 1]));
    }
    mem = memory(m + 1, c[m + 1]);
  }

  TimeSeries out(times);
  out.add_channel(label, std::move(c), true);
  return out;
}

}  // namespace colldecay
