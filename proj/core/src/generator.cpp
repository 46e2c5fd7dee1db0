#include "colldecay/generator.hpp"

#include <algorithm>
#include <cmath>

#include "colldecay/errors.hpp"

namespace colldecay {

namespace {

constexpr cplx I{0.0, 1.0};

std::string index_suffix(std::size_t i, std::size_t j, std::size_t n) {
  if (n <= 9) return std::to_string(i + 1) + std::to_string(j + 1);
  return std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

}  // namespace

Eigen::VectorXcd LinearGenerator::source(double t, const DriveSpec& drive) const {
  Eigen::VectorXcd s = constant_source.size() ? constant_source : Eigen::VectorXcd::Zero(matrix.rows());
  if (!drive.has_coherent_input()) return s;
  if (sector == Sector::number) {
    throw Error(ErrorCode::NotApplicable, "coherent input cannot be expressed as a number-sector source");
  }
  for (Eigen::Index c = 0; c < drive_weights.cols(); ++c) {
    const cplx b = drive.input(static_cast<std::size_t>(c), t);
    if (b != cplx{}) s += drive_weights.col(c) * b;
  }
  return s;
}

bool LinearGenerator::source_is_constant(const DriveSpec& drive) const { return !drive.has_coherent_input(); }

double rate_scale(const ModeNetwork& net) {
  double r = 0.0;
  for (std::size_t i = 0; i < net.mode_count(); ++i) {
    r = std::max({r, std::abs(net.omegas[i]), net.total_rate(i)});
  }
  if (net.couplings.size()) r = std::max(r, net.couplings.cwiseAbs().maxCoeff());
  return r;
}

LinearGenerator build_amplitude_generator(const ValidatedNetwork& vnet) {
  const ModeNetwork& net = vnet.network();
  const auto n = static_cast<Eigen::Index>(net.mode_count());

  LinearGenerator gen;
  gen.sector = Sector::amplitude;
  gen.mode_count = net.mode_count();
  gen.matrix = -damping_matrix(net).cast<cplx>() - I * net.couplings.cast<cplx>();
  for (Eigen::Index i = 0; i < n; ++i) gen.matrix(i, i) -= I * net.omegas[static_cast<std::size_t>(i)];
  gen.constant_source = Eigen::VectorXcd::Zero(n);
  gen.drive_weights = -net.gammas.array().sqrt().matrix().cast<cplx>();
  gen.basis_labels = amplitude_labels(net.mode_count());
  gen.rate_scale = rate_scale(net);
  return gen;
}

LinearGenerator build_number_generator(const ValidatedNetwork& net, double n_th) {
  std::vector<double> per(net->continuum_count(), n_th);
  return build_number_generator(net, per);
}

LinearGenerator build_number_generator(const ValidatedNetwork& vnet, std::span<const double> n_th) {
  for (double v : n_th) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "n_th must be finite and >= 0");
  }
  const LinearGenerator amp = build_amplitude_generator(vnet);
  LinearGenerator gen;
  gen.sector = Sector::number;
  gen.mode_count = amp.mode_count;
  gen.matrix = lift_to_number_sector(amp.matrix);
  gen.constant_source = thermal_source(vnet.network(), n_th);
  gen.drive_weights = Eigen::MatrixXcd::Zero(gen.matrix.rows(), 0);
  gen.basis_labels = number_labels(amp.mode_count);
  gen.rate_scale = amp.rate_scale;
  return gen;
}

LinearGenerator build_fermion_weakfield_generator(const ValidatedNetwork& net) {
  if (!net.all_fermionic()) {
    throw Error(ErrorCode::NotApplicable, "weak-field reduction requires every mode to be fermionic");
  }
  LinearGenerator gen = build_amplitude_generator(net);
  gen.weak_field = true;
  return gen;
}

// ---------------------------------------------------------------------------

std::size_t number_dimension(std::size_t n) { return n * n; }

std::size_t pair_offset(std::size_t i, std::size_t j, std::size_t n) {
  if (!(i < j && j < n)) throw Error(ErrorCode::InvalidArgument, "pair index requires i < j < N");
  // Pairs before row i: sum_{r<i} (n-1-r).
  const std::size_t before = i * (2 * n - i - 1) / 2;
  return n + 2 * (before + (j - i - 1));
}

std::string pair_label(char prefix, std::size_t i, std::size_t j, std::size_t n) {
  return std::string(1, prefix) + "_" + index_suffix(i, j, n);
}

std::vector<std::string> amplitude_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("c_" + std::to_string(i + 1));
  return out;
}

std::vector<std::string> number_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("N_" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back(pair_label('O', i, j, n));
      out.push_back(pair_label('Y', i, j, n));
    }
  }
  return out;
}

Eigen::VectorXcd to_number_vector(const Eigen::MatrixXcd& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  Eigen::VectorXcd x(static_cast<Eigen::Index>(number_dimension(n)));
  for (std::size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i)) = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx pij = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const auto k = static_cast<Eigen::Index>(pair_offset(i, j, n));
      x(k) = 2.0 * pij.real();
      x(k + 1) = -2.0 * pij.imag();
    }
  }
  return x;
}

Eigen::MatrixXcd from_number_vector(const Eigen::VectorXcd& x, std::size_t n) {
  if (static_cast<std::size_t>(x.size()) != number_dimension(n)) {
    throw Error(ErrorCode::ShapeMismatch, "number vector has wrong dimension");
  }
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = x(static_cast<Eigen::Index>(i)).real();
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto k = static_cast<Eigen::Index>(pair_offset(i, j, n));
      const cplx pij(x(k).real() / 2.0, -x(k + 1).real() / 2.0);
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pij;
      p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(pij);
    }
  }
  return p;
}

Eigen::MatrixXcd lift_to_number_sector(const Eigen::MatrixXcd& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  const auto d = static_cast<Eigen::Index>(number_dimension(n));
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
    e(k) = 1.0;
    const Eigen::MatrixXcd p = from_number_vector(e, n);
    const Eigen::MatrixXcd dp = a.conjugate() * p + p * a.transpose();
    m.col(k) = to_number_vector(dp);
  }
  return m;
}

Eigen::VectorXcd thermal_source(const ModeNetwork& net, std::span<const double> n_th) {
  const auto n = static_cast<Eigen::Index>(net.mode_count());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index c = 0; c < net.gammas.cols(); ++c) {
    const double occ = static_cast<std::size_t>(c) < n_th.size() ? n_th[static_cast<std::size_t>(c)] : 0.0;
    if (occ == 0.0) continue;
    const Eigen::VectorXd s = net.gammas.col(c).array().sqrt();
    // A local continuum has one nonzero entry, so this is diagonal there.
    q += occ * (s * s.transpose()).cast<cplx>();
  }
  return to_number_vector(q);
}

}  // namespace colldecay
