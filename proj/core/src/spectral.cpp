#include "colldecay/spectral.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "colldecay/errors.hpp"
#include "colldecay/generator.hpp"

namespace colldecay {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kResidualEps = 1e-300;

SpectralResponse empty_response(const ValidatedNetwork& net, const FrequencyGrid& grid) {
  grid.validate();
  SpectralResponse r;
  r.network = net.network();
  const auto& om = net->omegas;
  r.reference = std::accumulate(om.begin(), om.end(), 0.0) / static_cast<double>(om.size());
  r.omega_rel = grid.points();
  const auto np = static_cast<Eigen::Index>(r.omega_rel.size());
  const auto n = static_cast<Eigen::Index>(om.size());
  r.amplitudes = Eigen::MatrixXcd::Zero(np, n);
  r.detunings.resize(np, n);
  for (Eigen::Index k = 0; k < np; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) r.detunings(k, i) = r.omega(static_cast<std::size_t>(k)) - om[static_cast<std::size_t>(i)];
  }
  r.singular.assign(r.omega_rel.size(), false);
  return r;
}

}  // namespace

std::vector<double> FrequencyGrid::points() const {
  validate();
  std::vector<double> out(n_points);
  if (n_points == 1) {
    out[0] = min;
    return out;
  }
  const double step = (max - min) / static_cast<double>(n_points - 1);
  for (std::size_t k = 0; k < n_points; ++k) out[k] = min + step * static_cast<double>(k);
  return out;
}

void FrequencyGrid::validate() const {
  if (n_points == 0) throw Error(ErrorCode::InvalidArgument, "frequency grid needs at least one point");
  if (!std::isfinite(min) || !std::isfinite(max) || max < min) {
    throw Error(ErrorCode::InvalidArgument, "frequency grid bounds must be finite with min <= max");
  }
}

SpectralResponse spectral_response(const ValidatedNetwork& net, const FrequencyGrid& grid, std::size_t input_continuum) {
  if (input_continuum >= net->continuum_count()) {
    throw Error(ErrorCode::WrongContinuumCount, "input continuum " + std::to_string(input_continuum) +
                                                    " does not exist");
  }
  SpectralResponse r = empty_response(net, grid);
  r.input_continuum = input_continuum;
  const LinearGenerator gen = build_amplitude_generator(net);
  const Eigen::VectorXcd s_in = net->gammas.col(static_cast<Eigen::Index>(input_continuum)).array().sqrt().matrix().cast<cplx>();
  // Stationary c(t) = c e^{-i omega t}: (A + i omega) c = sqrt(gamma^in).
  for (std::size_t k = 0; k < r.size(); ++k) {
    Eigen::MatrixXcd m = gen.matrix;
    m.diagonal().array() += I * r.omega(k);
    // FullPivLU::rcond() is unreliable on exactly singular input, so the
    // reciprocal condition number comes from the singular values.
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
    if (!(sv(sv.size() - 1) >= kSingularRcond * sv(0))) {
      r.singular[k] = true;
      r.amplitudes.row(static_cast<Eigen::Index>(k)).setConstant(cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
      continue;
    }
    r.amplitudes.row(static_cast<Eigen::Index>(k)) = m.fullPivLu().solve(s_in).transpose();
  }
  return r;
}

std::optional<double> coupling_proportionality(const ModeNetwork& net) {
  const std::size_t n = net.mode_count();
  std::optional<double> kappa;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double g = net.couplings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double w = std::sqrt(net.total_rate(i) * net.total_rate(j));
      if (g == 0.0 && w == 0.0) continue;
      if (w == 0.0) return std::nullopt;
      if (!kappa) {
        kappa = g / w;
      } else if (std::abs(g - *kappa * w) > 1e-12 * (std::abs(g) + 1.0)) {
        return std::nullopt;
      }
    }
  }
  return kappa.value_or(0.0);
}

std::vector<double> correlation_residual(const SpectralResponse& resp, std::size_t i, std::size_t j) {
  const ModeNetwork& net = resp.network;
  if (i >= net.mode_count() || j >= net.mode_count()) {
    throw Error(ErrorCode::InvalidArgument, "mode index out of range");
  }
  const auto kappa = coupling_proportionality(net);
  if (!kappa) {
    throw Error(ErrorCode::NotApplicable, "couplings are neither zero nor proportional to sqrt(gamma_i gamma_j)");
  }
  const double gi = net.total_rate(i);
  const double gj = net.total_rate(j);
  if (gi <= 0.0 || gj <= 0.0) throw Error(ErrorCode::NotApplicable, "both modes must decay");

  std::vector<double> out(resp.size());
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  for (std::size_t k = 0; k < resp.size(); ++k) {
    if (resp.singular[k]) {
      out[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto kk = static_cast<Eigen::Index>(k);
    const double di = resp.detunings(kk, ii) + *kappa * gi;
    const double dj = resp.detunings(kk, jj) + *kappa * gj;
    const cplx a = di * resp.amplitudes(kk, ii) / std::sqrt(gi);
    const cplx b = dj * resp.amplitudes(kk, jj) / std::sqrt(gj);
    out[k] = std::abs(a - b) / std::max({std::abs(a), std::abs(b), kResidualEps});
  }
  return out;
}

double max_finite(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) m = std::max(m, x);
  }
  return m;
}

SpectralResponse spectral_closed_form(const ValidatedNetwork& net, const FrequencyGrid& grid) {
  const auto kappa = coupling_proportionality(net.network());
  if (!kappa) throw Error(ErrorCode::NotApplicable, "couplings must be zero or proportional to sqrt(gamma_i gamma_j)");
  const Eigen::MatrixXd gam = damping_matrix(net.network()) * 2.0;
  const auto n = gam.rows();
  // Rank-one damping is what a single shared continuum produces.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(gam(i, j) * gam(i, j) - gam(i, i) * gam(j, j)) > 1e-12 * (gam(i, i) * gam(j, j) + 1e-300)) {
        throw Error(ErrorCode::NotApplicable, "closed form needs a single shared continuum");
      }
    }
  }

  SpectralResponse r = empty_response(net, grid);
  for (std::size_t k = 0; k < r.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    std::vector<double> dp(static_cast<std::size_t>(n));
    bool pole = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      dp[static_cast<std::size_t>(j)] = r.detunings(kk, j) + *kappa * gam(j, j);
      if (dp[static_cast<std::size_t>(j)] == 0.0) pole = true;
    }
    if (pole) {
      // Exactly on a resonance the ratio form is 0/0; defer to the solve.
      r.singular[k] = true;
      r.amplitudes.row(kk).setConstant(cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double di = dp[static_cast<std::size_t>(i)];
      cplx sum = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) sum += gam(j, j) * di / dp[static_cast<std::size_t>(j)];
      r.amplitudes(kk, i) = -std::sqrt(gam(i, i)) / (-I * di + (0.5 + I * *kappa) * sum);
    }
  }
  return r;
}

SpectralResponse transmission(const ValidatedNetwork& net, const FrequencyGrid& grid) {
  if (net->continuum_count() != 2) {
    throw Error(ErrorCode::WrongContinuumCount,
                "transmission needs exactly two continua (L, R), got " + std::to_string(net->continuum_count()));
  }
  for (auto t : net->topology) {
    if (t != Topology::global) throw Error(ErrorCode::NotApplicable, "both continua must be global");
  }
  SpectralResponse r = spectral_response(net, grid, 0);
  const Eigen::VectorXcd sl = net->gammas.col(0).array().sqrt().matrix().cast<cplx>();
  const Eigen::VectorXcd sr = net->gammas.col(1).array().sqrt().matrix().cast<cplx>();
  std::vector<double> t(r.size()), rr(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    if (r.singular[k]) {
      t[k] = rr[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const Eigen::VectorXcd c = r.amplitudes.row(kk).transpose();
    t[k] = std::norm((sr.transpose() * c)(0));
    rr[k] = std::norm(1.0 + (sl.transpose() * c)(0));
  }
  r.transmitted = std::move(t);
  r.reflected = std::move(rr);
  return r;
}

void write_csv(std::ostream& out, const SpectralResponse& resp) {
  out << std::setprecision(15) << "omega_rel";
  if (resp.transmitted) out << ",T,R";
  const auto n = resp.amplitudes.cols();
  for (Eigen::Index i = 0; i < n; ++i) out << ",re_c_" << i + 1 << ",im_c_" << i + 1;
  out << '\n';
  for (std::size_t k = 0; k < resp.size(); ++k) {
    out << resp.omega_rel[k];
    if (resp.transmitted) out << ',' << (*resp.transmitted)[k] + 0.0 << ',' << (*resp.reflected)[k] + 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx c = resp.amplitudes(static_cast<Eigen::Index>(k), i);
      out << ',' << c.real() + 0.0 << ',' << c.imag() + 0.0;
    }
    out << '\n';
  }
}

}  // namespace colldecay
