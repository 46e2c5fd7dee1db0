#include "colldecay/network.hpp"

#include <cmath>
#include <string>

#include "colldecay/errors.hpp"

namespace colldecay {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

void check_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonfiniteParameter, what + " is not finite");
}

}  // namespace

ModeNetwork ModeNetwork::shared(std::vector<double> omegas, const std::vector<double>& rates) {
  ModeNetwork net;
  const auto n = static_cast<Eigen::Index>(omegas.size());
  net.omegas = std::move(omegas);
  net.gammas = Eigen::MatrixXd::Zero(n, 1);
  for (Eigen::Index i = 0; i < n && i < static_cast<Eigen::Index>(rates.size()); ++i) {
    net.gammas(i, 0) = rates[static_cast<std::size_t>(i)];
  }
  net.couplings = Eigen::MatrixXd::Zero(n, n);
  net.topology = {Topology::global};
  return net;
}

Eigen::MatrixXd damping_matrix(const ModeNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.mode_count());
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index c = 0; c < net.gammas.cols(); ++c) {
    const Eigen::VectorXd s = net.gammas.col(c).array().sqrt();
    if (net.topology[static_cast<std::size_t>(c)] == Topology::global) {
      gamma += 0.5 * s * s.transpose();
    } else {
      gamma.diagonal() += 0.5 * s.cwiseAbs2();
    }
  }
  return gamma;
}

bool ValidatedNetwork::degenerate(std::size_t i, std::size_t j) const {
  if (i == j) return true;
  return std::abs(net_.omegas[i] - net_.omegas[j]) < tolerance_;
}

bool ValidatedNetwork::all_fermionic() const {
  if (net_.statistics.size() != net_.mode_count()) return false;
  for (auto s : net_.statistics) {
    if (s != Statistics::fermion) return false;
  }
  return true;
}

ValidatedNetwork validate_network(ModeNetwork net, double degeneracy_tolerance) {
  const std::size_t n = net.mode_count();
  if (n == 0) throw Error(ErrorCode::EmptyNetwork, "network has no modes");
  const auto ni = static_cast<Eigen::Index>(n);

  if (net.gammas.rows() != ni) {
    throw Error(ErrorCode::ShapeMismatch, "gammas has " + std::to_string(net.gammas.rows()) + " rows for " +
                                              idx(n) + " modes");
  }
  if (net.couplings.size() == 0) net.couplings = Eigen::MatrixXd::Zero(ni, ni);
  if (net.couplings.rows() != ni || net.couplings.cols() != ni) {
    throw Error(ErrorCode::ShapeMismatch, "coupling matrix must be " + idx(n) + "x" + idx(n));
  }
  if (net.topology.size() != net.continuum_count()) {
    throw Error(ErrorCode::ShapeMismatch, "topology flags (" + idx(net.topology.size()) +
                                              ") do not match continuum count (" +
                                              idx(net.continuum_count()) + ")");
  }
  if (!net.statistics.empty() && net.statistics.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "statistics flags must be given for every mode or none");
  }

  for (std::size_t i = 0; i < n; ++i) check_finite(net.omegas[i], "omega[" + idx(i) + "]");

  for (Eigen::Index c = 0; c < net.gammas.cols(); ++c) {
    std::size_t coupled = 0;
    for (Eigen::Index i = 0; i < ni; ++i) {
      const double g = net.gammas(i, c);
      const std::string where = "gamma[" + idx(static_cast<std::size_t>(i)) + "][" +
                                idx(static_cast<std::size_t>(c)) + "]";
      check_finite(g, where);
      if (g < 0.0) throw Error(ErrorCode::NegativeRate, where + " = " + std::to_string(g));
      if (g > 0.0) ++coupled;
    }
    if (net.topology[static_cast<std::size_t>(c)] == Topology::local && coupled != 1) {
      throw Error(ErrorCode::SharedLocalContinuum,
                  "local continuum " + idx(static_cast<std::size_t>(c)) + " couples to " + idx(coupled) +
                      " modes (must be exactly one)");
    }
  }

  for (Eigen::Index i = 0; i < ni; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (net.couplings(i, i) != 0.0) {
      throw Error(ErrorCode::NonzeroSelfCoupling, "g[" + idx(si) + "][" + idx(si) + "] must be zero");
    }
    for (Eigen::Index j = 0; j < ni; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      check_finite(net.couplings(i, j), "g[" + idx(si) + "][" + idx(sj) + "]");
      if (net.couplings(i, j) != net.couplings(j, i)) {
        throw Error(ErrorCode::AsymmetricCoupling, "g[" + idx(si) + "][" + idx(sj) + "] != g[" + idx(sj) + "][" +
                                                       idx(si) + "]");
      }
    }
  }

  ValidatedNetwork out(std::move(net), degeneracy_tolerance);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (out.degenerate(i, j)) out.degenerate_.emplace_back(i, j);
    }
  }
  return out;
}

ModeNetwork localize(const ModeNetwork& net) {
  ModeNetwork out;
  out.omegas = net.omegas;
  out.couplings = net.couplings;
  out.statistics = net.statistics;

  const auto n = static_cast<Eigen::Index>(net.mode_count());
  std::vector<Eigen::Index> owners;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (net.gammas.row(i).sum() > 0.0) owners.push_back(i);
  }
  out.gammas = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(owners.size()));
  for (std::size_t c = 0; c < owners.size(); ++c) {
    out.gammas(owners[c], static_cast<Eigen::Index>(c)) = net.gammas.row(owners[c]).sum();
  }
  out.topology.assign(owners.size(), Topology::local);
  return out;
}

// ---------------------------------------------------------------------------

InitialState InitialState::fock(const std::vector<unsigned>& occupations) {
  InitialState s;
  for (unsigned n : occupations) s.modes.emplace_back(Fock{n});
  return s;
}

InitialState InitialState::coherent(const std::vector<cplx>& alphas) {
  InitialState s;
  for (cplx a : alphas) s.modes.emplace_back(Coherent{a});
  return s;
}

bool InitialState::all_coherent() const {
  for (const auto& m : modes) {
    if (!std::holds_alternative<Coherent>(m)) return false;
  }
  return true;
}

Eigen::VectorXcd InitialState::amplitudes() const {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(modes.size()));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (const auto* c = std::get_if<Coherent>(&modes[i])) a(static_cast<Eigen::Index>(i)) = c->alpha;
  }
  return a;
}

Eigen::MatrixXcd InitialState::correlations() const {
  const auto n = static_cast<Eigen::Index>(modes.size());
  const Eigen::VectorXcd a = amplitudes();
  // Product state: <c_i^dag c_j> = conj(a_i) a_j off the diagonal.
  Eigen::MatrixXcd p = a.conjugate() * a.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (const auto* f = std::get_if<Fock>(&modes[static_cast<std::size_t>(i)])) p(i, i) = static_cast<double>(f->n);
  }
  for (const auto& [key, coh] : coherences) {
    const auto [i, j] = key;
    if (i >= modes.size() || j >= modes.size() || i == j) {
      throw Error(ErrorCode::InvalidArgument,
                  "initial coherence index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
    }
    // O = 2 Re P_ij, Y = -2 Im P_ij.
    const cplx pij(coh.O / 2.0, -coh.Y / 2.0);
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pij;
    p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(pij);
  }
  return p;
}

// ---------------------------------------------------------------------------

cplx DriveSpec::input(std::size_t continuum, double t) const {
  if (continuum >= b_in_mean.size() || !b_in_mean[continuum]) return {0.0, 0.0};
  return b_in_mean[continuum](t);
}

double DriveSpec::thermal(std::size_t continuum) const {
  return continuum < n_th.size() ? n_th[continuum] : 0.0;
}

bool DriveSpec::has_coherent_input() const {
  for (const auto& f : b_in_mean) {
    if (f) return true;
  }
  return false;
}

bool DriveSpec::has_thermal_input() const {
  for (double v : n_th) {
    if (v != 0.0) return true;
  }
  return false;
}

void DriveSpec::validate() const {
  for (std::size_t c = 0; c < n_th.size(); ++c) {
    if (!(n_th[c] >= 0.0) || !std::isfinite(n_th[c])) {
      throw Error(ErrorCode::InvalidArgument, "n_th[" + idx(c) + "] must be finite and >= 0");
    }
  }
}

DriveSpec DriveSpec::monochromatic(std::size_t continuum, cplx amplitude, double omega) {
  DriveSpec d;
  d.b_in_mean.resize(continuum + 1);
  d.b_in_mean[continuum] = [amplitude, omega](double t) { return amplitude * std::exp(cplx(0.0, -omega * t)); };
  return d;
}

DriveSpec DriveSpec::thermal_only(std::vector<double> n_th) {
  DriveSpec d;
  d.n_th = std::move(n_th);
  return d;
}

}  // namespace colldecay
