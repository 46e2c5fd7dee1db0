#include "colldecay/oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "colldecay/errors.hpp"
#include "colldecay/generator.hpp"

namespace colldecay {

namespace {

constexpr cplx I{0.0, 1.0};

struct SpectrumBounds {
  double lo;
  double hi;
};

SpectrumBounds bounds(const DiscretizedSystem& sys) {
  const auto n = sys.system_block.rows();
  double lo = sys.continuum_energies.size() ? sys.continuum_energies.minCoeff() : 0.0;
  double hi = sys.continuum_energies.size() ? sys.continuum_energies.maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double radius = sys.system_block.row(i).cwiseAbs().sum() - std::abs(sys.system_block(i, i));
    lo = std::min(lo, sys.system_block(i, i).real() - radius);
    hi = std::max(hi, sys.system_block(i, i).real() + radius);
  }
  // Weyl: the coupling block moves eigenvalues by at most its norm.
  const double b = sys.coupling.norm();
  return {lo - b, hi + b};
}

/// exp(-i h dt) v via a Chebyshev series on the spectrum-scaled operator.
class ChebyshevPropagator {
 public:
  ChebyshevPropagator(const DiscretizedSystem& sys, double dt) : sys_(sys) {
    const auto [lo, hi] = bounds(sys);
    center_ = 0.5 * (hi + lo);
    half_ = std::max(0.5 * (hi - lo), 1e-12);
    const double x = half_ * dt;
    phase_ = std::exp(-I * center_ * dt);
    cplx ik = 1.0;
    for (unsigned k = 0;; ++k) {
      const double j = std::cyl_bessel_j(static_cast<double>(k), x);
      coeff_.push_back((k == 0 ? 1.0 : 2.0) * ik * j);
      ik *= -I;
      if (static_cast<double>(k) > x && std::abs(j) < 1e-17) break;
      if (k > 100000) throw Error(ErrorCode::InvalidArgument, "Chebyshev series failed to converge");
    }
  }

  Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& v) const {
    auto scaled = [&](const Eigen::MatrixXcd& u) -> Eigen::MatrixXcd { return (sys_.apply(u) - center_ * u) / half_; };
    Eigen::MatrixXcd t_prev = v;
    Eigen::MatrixXcd out = coeff_[0] * v;
    if (coeff_.size() == 1) return phase_ * out;
    Eigen::MatrixXcd t_cur = scaled(v);
    out += coeff_[1] * t_cur;
    for (std::size_t k = 2; k < coeff_.size(); ++k) {
      Eigen::MatrixXcd t_next = 2.0 * scaled(t_cur) - t_prev;
      out += coeff_[k] * t_next;
      t_prev = std::move(t_cur);
      t_cur = std::move(t_next);
    }
    return phase_ * out;
  }

  std::size_t terms() const { return coeff_.size(); }

 private:
  const DiscretizedSystem& sys_;
  double center_ = 0.0;
  double half_ = 1.0;
  cplx phase_;
  std::vector<cplx> coeff_;
};

}  // namespace

double DiscretizedSystem::recurrence_time() const { return 2.0 * std::numbers::pi / delta_omega; }

Eigen::MatrixXcd DiscretizedSystem::apply(const Eigen::MatrixXcd& v) const {
  const auto n = static_cast<Eigen::Index>(mode_count);
  const auto m = continuum_energies.size();
  Eigen::MatrixXcd out(v.rows(), v.cols());
  out.topRows(n) = system_block * v.topRows(n) + coupling * v.bottomRows(m);
  out.bottomRows(m) = continuum_energies.cast<cplx>().asDiagonal() * v.bottomRows(m);
  out.bottomRows(m).noalias() += coupling.adjoint() * v.topRows(n);
  return out;
}

Eigen::MatrixXcd DiscretizedSystem::dense_hamiltonian() const {
  const auto n = static_cast<Eigen::Index>(mode_count);
  const auto m = continuum_energies.size();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n + m, n + m);
  h.topLeftCorner(n, n) = system_block;
  h.topRightCorner(n, m) = coupling;
  h.bottomLeftCorner(m, n) = coupling.adjoint();
  h.bottomRightCorner(m, m).diagonal() = continuum_energies.cast<cplx>();
  return h;
}

DiscretizedSystem discretize_continuum(const ValidatedNetwork& net, std::size_t k, double bandwidth) {
  if (k == 0) throw Error(ErrorCode::EmptyContinuum, "continuum needs at least one mode (K = 0)");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive and finite");
  }
  const ModeNetwork& m = net.network();
  double max_rate = 0.0;
  for (std::size_t i = 0; i < m.mode_count(); ++i) max_rate = std::max(max_rate, m.total_rate(i));
  if (bandwidth < kMinBandwidthFactor * max_rate) {
    std::ostringstream msg;
    msg << "bandwidth " << bandwidth << " is below " << kMinBandwidthFactor << " x max rate " << max_rate;
    throw Error(ErrorCode::BandwidthTooSmall, msg.str());
  }

  DiscretizedSystem sys;
  sys.mode_count = m.mode_count();
  sys.modes_per_continuum = k;
  sys.bandwidth = bandwidth;
  double mean = 0.0;
  for (double w : m.omegas) mean += w;
  sys.center = mean / static_cast<double>(m.mode_count());
  sys.delta_omega = bandwidth / static_cast<double>(k);

  const auto n = static_cast<Eigen::Index>(m.mode_count());
  const auto c = m.gammas.cols();
  const auto kk = static_cast<Eigen::Index>(k);
  sys.system_block = m.couplings.cast<cplx>();
  for (Eigen::Index i = 0; i < n; ++i) sys.system_block(i, i) = m.omegas[static_cast<std::size_t>(i)];

  sys.continuum_energies.resize(c * kk);
  sys.coupling = Eigen::MatrixXcd::Zero(n, c * kk);
  for (Eigen::Index ch = 0; ch < c; ++ch) {
    for (Eigen::Index q = 0; q < kk; ++q) {
      const Eigen::Index col = ch * kk + q;
      sys.continuum_energies(col) = sys.center - 0.5 * bandwidth + (static_cast<double>(q) + 0.5) * sys.delta_omega;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double kappa = std::sqrt(m.gammas(i, ch) / (2.0 * std::numbers::pi));
        sys.coupling(i, col) = -I * kappa * std::sqrt(sys.delta_omega);
      }
    }
  }
  return sys;
}

TimeSeries oracle_evolve(const DiscretizedSystem& sys, const InitialState& init, const TimeGrid& grid) {
  const std::size_t n = sys.mode_count;
  if (init.mode_count() != n) throw Error(ErrorCode::ShapeMismatch, "initial state does not match the system");
  const double horizon = kRecurrenceFraction * sys.recurrence_time();
  if (grid.t_max > horizon) {
    std::ostringstream msg;
    msg << "t_max " << grid.t_max << " exceeds " << kRecurrenceFraction << " x recurrence time (" << horizon << ")";
    throw Error(ErrorCode::RecurrenceHorizonExceeded, msg.str());
  }

  const auto times = grid.points();
  const auto ni = static_cast<Eigen::Index>(n);
  const Eigen::VectorXcd alpha = init.amplitudes();
  const Eigen::MatrixXcd p0 = init.correlations();

  // Columns U(t) e_j for the system modes; the bath starts empty, so these
  // are the only columns that ever contribute.
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sys.dimension()), ni);
  v.topRows(ni).setIdentity();
  const ChebyshevPropagator step(sys, grid.dt);

  const auto amp_labels = amplitude_labels(n);
  const auto num_labels = number_labels(n);
  std::vector<std::vector<cplx>> amp(n, std::vector<cplx>(times.size()));
  std::vector<std::vector<cplx>> num(num_labels.size(), std::vector<cplx>(times.size()));
  std::vector<double> total(times.size());

  for (std::size_t s = 0; s < times.size(); ++s) {
    if (s > 0) v = step(v);
    const Eigen::MatrixXcd us = v.topRows(ni);
    const Eigen::VectorXcd c = us * alpha;
    const Eigen::MatrixXcd p = us.conjugate() * p0 * us.transpose();
    const Eigen::VectorXcd x = to_number_vector(p);
    for (std::size_t i = 0; i < n; ++i) amp[i][s] = c(static_cast<Eigen::Index>(i));
    for (std::size_t r = 0; r < num_labels.size(); ++r) num[r][s] = x(static_cast<Eigen::Index>(r)).real();
    total[s] = (v.adjoint() * v).cwiseProduct(p0).sum().real();
  }

  TimeSeries out(times);
  for (std::size_t i = 0; i < n; ++i) out.add_channel(amp_labels[i], std::move(amp[i]), true);
  for (std::size_t r = 0; r < num_labels.size(); ++r) out.add_channel(num_labels[r], std::move(num[r]), false);
  out.add_real_channel("excitation_total", total);
  return out;
}

}  // namespace colldecay
