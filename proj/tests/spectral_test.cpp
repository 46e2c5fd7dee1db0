#include "support.hpp"

#include <sstream>

namespace colldecay {
namespace {

ValidatedNetwork two_sided(double delta, double gl = 1.0, double gr = 1.0) {
  ModeNetwork net;
  net.omegas = {delta / 2.0, -delta / 2.0};
  net.gammas.resize(2, 2);
  net.gammas << gl, gr, gl, gr;
  net.topology = {Topology::global, Topology::global};
  return validate_network(net);
}

TEST(Spectral, GridPoints) {
  const FrequencyGrid g{-1.0, 1.0, 5};
  EXPECT_EQ(g.points(), (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
  EXPECT_EQ((FrequencyGrid{2.0, 2.0, 1}.points()), std::vector<double>{2.0});
  EXPECT_CODE((FrequencyGrid{0.0, 1.0, 0}.points()), ErrorCode::InvalidArgument);
  EXPECT_CODE((FrequencyGrid{1.0, 0.0, 3}.validate()), ErrorCode::InvalidArgument);
}

TEST(Spectral, SingleModeLorentzian) {
  const double gamma = 1.7, w0 = 0.4;
  const auto resp = spectral_response(validate_network(ModeNetwork::shared({w0}, {gamma})), {-5.0, 5.0, 101});
  EXPECT_DOUBLE_EQ(resp.reference, w0);
  for (std::size_t k = 0; k < resp.size(); ++k) {
    const double d = resp.omega_rel[k];
    const cplx expect = -std::sqrt(gamma) / cplx(gamma / 2.0, -d);
    ASSERT_LT(std::abs(resp.amplitudes(static_cast<Eigen::Index>(k), 0) - expect), 1e-14);
  }
}

TEST(Spectral, SingleModeTwoSidedTransmission) {
  ModeNetwork net = ModeNetwork::shared({0.0}, {1.0});
  net.gammas.resize(1, 2);
  net.gammas << 1.0, 1.0;
  net.topology = {Topology::global, Topology::global};
  const auto resp = transmission(validate_network(net), {-4.0, 4.0, 81});
  for (std::size_t k = 0; k < resp.size(); ++k) {
    const double d = resp.omega_rel[k];
    ASSERT_NEAR((*resp.transmitted)[k], 1.0 / (1.0 + d * d), 1e-14);
    ASSERT_NEAR((*resp.reflected)[k], d * d / (1.0 + d * d), 1e-14);
  }
}

TEST(Spectral, TransmissionPreconditions) {
  EXPECT_CODE(transmission(testing::pair(1.0, 1.0, 1.0), {}), ErrorCode::WrongContinuumCount);
  ModeNetwork net = ModeNetwork::shared({0.5, -0.5}, {1.0, 1.0});
  net.gammas.resize(2, 2);
  net.gammas << 1.0, 0.0, 0.0, 1.0;
  net.topology = {Topology::local, Topology::local};
  EXPECT_CODE(transmission(validate_network(net), {}), ErrorCode::NotApplicable);
  EXPECT_CODE(spectral_response(testing::pair(1.0, 1.0, 1.0), {}, 1), ErrorCode::WrongContinuumCount);
}

TEST(Spectral, TwoSidedUnitarityAndSingularPoint) {
  const FrequencyGrid grid{-15.0, 15.0, 3001};
  for (double delta : {0.0, 1.0, 2.0, 5.0, 10.0}) {
    const auto r = transmission(two_sided(delta), grid);
    std::size_t singular = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r.singular[k]) {
        ++singular;
        EXPECT_TRUE(std::isnan((*r.transmitted)[k]));
        continue;
      }
      ASSERT_NEAR((*r.transmitted)[k] + (*r.reflected)[k], 1.0, 1e-9) << delta << " " << r.omega_rel[k];
    }
    // at delta = 0 the dark mode makes omega_rel = 0 an exact pole
    EXPECT_EQ(singular, delta == 0.0 ? 1u : 0u) << delta;
  }
}

TEST(Spectral, Reciprocity) {
  ModeNetwork net;
  net.omegas = {1.5, -0.5, 0.2};
  net.gammas.resize(3, 2);
  net.gammas << 1.0, 2.0, 0.5, 0.3, 2.0, 1.0;
  net.topology = {Topology::global, Topology::global};
  const FrequencyGrid grid{-6.0, 6.0, 241};
  const auto lr = transmission(validate_network(net), grid);
  net.gammas.col(0).swap(net.gammas.col(1));
  const auto rl = transmission(validate_network(net), grid);
  for (std::size_t k = 0; k < grid.n_points; ++k) ASSERT_NEAR((*lr.transmitted)[k], (*rl.transmitted)[k], 1e-12);
}

// Monochromatic drive in the time domain settles onto c(omega) e^{-i omega t}.
TEST(Spectral, MatchesDrivenTimeEvolution) {
  ModeNetwork m = ModeNetwork::shared({0.5, -0.5}, {1.0, 1.5});
  m.couplings(0, 1) = m.couplings(1, 0) = 0.2;
  const auto net = validate_network(m);
  const double w_rel = 0.3;
  const auto resp = spectral_response(net, {w_rel, w_rel, 1});
  const double w = resp.omega(0);
  const TimeGrid grid{120.0, 0.005};
  const auto tr = simulate(net, InitialState::coherent({0.0, 0.0}), DriveSpec::monochromatic(0, 1.0, w), grid);
  const double t = grid.points().back();
  for (std::size_t i = 0; i < 2; ++i) {
    const cplx expect = resp.amplitudes(0, static_cast<Eigen::Index>(i)) * std::exp(cplx(0.0, -w * t));
    EXPECT_LT(std::abs(tr.amplitudes.channel("c_" + std::to_string(i + 1)).back() - expect), 1e-6);
  }
}

TEST(Spectral, ClosedFormMatchesLinearSolve) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> freq(-4.0, 4.0), rate(0.2, 3.0), kap(-0.5, 0.5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    std::vector<double> om(n), ga(n);
    for (std::size_t i = 0; i < n; ++i) {
      om[i] = freq(rng);
      ga[i] = rate(rng);
    }
    ModeNetwork net = ModeNetwork::shared(om, ga);
    const double kappa = trial % 2 ? kap(rng) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) net.couplings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kappa * std::sqrt(ga[i] * ga[j]);
      }
    }
    const auto v = validate_network(net);
    ASSERT_NEAR(*coupling_proportionality(net), kappa, 1e-14);
    const FrequencyGrid grid{-8.0, 8.0, 257};
    const auto a = spectral_response(v, grid);
    const auto b = spectral_closed_form(v, grid);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a.singular[k] || b.singular[k]) continue;
      const auto kk = static_cast<Eigen::Index>(k);
      const double scale = 1.0 + a.amplitudes.row(kk).cwiseAbs().maxCoeff();
      ASSERT_LT((a.amplitudes.row(kk) - b.amplitudes.row(kk)).cwiseAbs().maxCoeff(), 1e-10 * scale)
          << "trial " << trial << " k " << k;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) EXPECT_LT(max_finite(correlation_residual(a, i, j)), 1e-9);
    }
  }
}

TEST(Spectral, ResidualNotApplicableForGenericCouplings) {
  ModeNetwork net = ModeNetwork::shared({1.0, -1.0, 0.3}, {1.0, 2.0, 3.0});
  net.couplings(0, 1) = net.couplings(1, 0) = 0.4;
  EXPECT_FALSE(coupling_proportionality(net).has_value());
  const auto v = validate_network(net);
  const auto r = spectral_response(v, {});
  EXPECT_CODE(correlation_residual(r, 0, 1), ErrorCode::NotApplicable);
  EXPECT_CODE(spectral_closed_form(v, {}), ErrorCode::NotApplicable);
  EXPECT_CODE(spectral_closed_form(validate_network(localize(net)), {}), ErrorCode::NotApplicable);
}

TEST(Spectral, OnResonanceSuppression) {
  const auto v = validate_network(ModeNetwork::shared({2.0, -1.0, 0.5}, {1.0, 2.0, 0.7}));
  for (std::size_t i = 0; i < 3; ++i) {
    const double rel = v->omegas[i] - 0.5;  // reference is the mean frequency
    const auto r = spectral_response(v, {rel, rel, 1});
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == i) {
        EXPECT_GT(std::abs(r.amplitudes(0, static_cast<Eigen::Index>(j))), 0.1);
      } else {
        EXPECT_LT(std::abs(r.amplitudes(0, static_cast<Eigen::Index>(j))), 1e-9);
      }
    }
  }
}

TEST(Spectral, CsvColumns) {
  const auto r = transmission(two_sided(2.0), {-1.0, 1.0, 3});
  std::ostringstream out;
  write_csv(out, r);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "omega_rel,T,R,re_c_1,im_c_1,re_c_2,im_c_2");
  std::ostringstream plain;
  write_csv(plain, spectral_response(testing::pair(1.0, 1.0, 1.0), {-1.0, 1.0, 3}));
  EXPECT_EQ(plain.str().substr(0, plain.str().find('\n')), "omega_rel,re_c_1,im_c_1,re_c_2,im_c_2");
}

}  // namespace
}  // namespace colldecay
