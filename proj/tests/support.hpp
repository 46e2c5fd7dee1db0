#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <colldecay/colldecay.hpp>

namespace colldecay::testing {

#define EXPECT_CODE(stmt, ec)                                          \
  do {                                                                 \
    try {                                                              \
      stmt;                                                            \
      ADD_FAILURE() << "no exception, expected " << to_string(ec);    \
    } catch (const ::colldecay::Error& e) {                            \
      EXPECT_EQ(e.code(), ec) << e.what();                             \
    }                                                                  \
  } while (0)

inline double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double sup_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

/// Two modes at +-delta/2 on one shared continuum.
inline ValidatedNetwork pair(double delta, double g1, double g2) {
  return validate_network(ModeNetwork::shared({delta / 2.0, -delta / 2.0}, {g1, g2}));
}

struct RandomNetworkOptions {
  std::size_t max_modes = 4;
  std::size_t max_continua = 2;
  bool couplings = true;
  bool local_continua = true;
};

/// Random valid network: frequencies in [-5, 5], rates in [0.2, 3],
/// optional local continua and direct couplings.
inline ModeNetwork random_network(std::mt19937_64& rng, const RandomNetworkOptions& o = {}) {
  std::uniform_int_distribution<std::size_t> nd(1, o.max_modes);
  std::uniform_int_distribution<std::size_t> cd(1, o.max_continua);
  std::uniform_real_distribution<double> freq(-5.0, 5.0);
  std::uniform_real_distribution<double> rate(0.2, 3.0);
  std::uniform_real_distribution<double> coup(-1.5, 1.5);
  std::bernoulli_distribution coin(0.5);

  ModeNetwork net;
  const std::size_t n = nd(rng);
  for (std::size_t i = 0; i < n; ++i) net.omegas.push_back(freq(rng));
  const std::size_t globals = cd(rng);
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < globals; ++c) {
    std::vector<double> col(n);
    for (auto& v : col) v = rate(rng);
    cols.push_back(col);
    net.topology.push_back(Topology::global);
  }
  if (o.local_continua) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!coin(rng)) continue;
      std::vector<double> col(n, 0.0);
      col[i] = rate(rng);
      cols.push_back(col);
      net.topology.push_back(Topology::local);
    }
  }
  net.gammas.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) net.gammas(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = cols[c][i];
  }
  net.couplings = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (o.couplings) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double g = coup(rng);
        net.couplings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g;
        net.couplings(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = g;
      }
    }
  }
  return net;
}

/// Mix of Fock and coherent modes.
inline InitialState random_initial(std::mt19937_64& rng, std::size_t n, bool allow_fock = true) {
  std::uniform_real_distribution<double> amp(-1.5, 1.5);
  std::uniform_int_distribution<unsigned> occ(0, 3);
  std::bernoulli_distribution coin(0.5);
  InitialState s;
  for (std::size_t i = 0; i < n; ++i) {
    if (allow_fock && coin(rng)) {
      s.modes.emplace_back(Fock{occ(rng)});
    } else {
      s.modes.emplace_back(Coherent{cplx(amp(rng), amp(rng))});
    }
  }
  return s;
}

}  // namespace colldecay::testing
