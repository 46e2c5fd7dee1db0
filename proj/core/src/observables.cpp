#include "colldecay/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "colldecay/errors.hpp"
#include "colldecay/generator.hpp"

namespace colldecay {

namespace {

std::vector<std::size_t> population_channels(const TimeSeries& series) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1;; ++i) {
    auto idx = series.index_of("N_" + std::to_string(i));
    if (!idx) break;
    out.push_back(*idx);
  }
  return out;
}

}  // namespace

std::vector<double> electric_field(const TimeSeries& series, std::size_t i) {
  const auto& c = series.channel("c_" + std::to_string(i + 1));
  std::vector<double> e(c.size());
  std::transform(c.begin(), c.end(), e.begin(), [](cplx z) { return 2.0 * z.real(); });
  return e;
}

NumberTotal total_number(const TimeSeries& series) {
  NumberTotal out;
  out.trace.assign(series.size(), 0.0);
  for (std::size_t ch : population_channels(series)) {
    const auto& v = series.channel(ch);
    for (std::size_t k = 0; k < v.size(); ++k) out.trace[k] += v[k].real();
  }
  const auto& t = series.times();
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double slope = (out.trace[k] - out.trace[k - 1]) / (t[k] - t[k - 1]);
    out.max_positive_slope = std::max(out.max_positive_slope, slope);
  }
  out.non_increasing = out.max_positive_slope <= kMonotoneSlope;
  return out;
}

std::vector<Interval> detect_backflow(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw Error(ErrorCode::ShapeMismatch, "times and values differ in length");
  std::vector<Interval> out;
  const std::size_t n = times.size();
  if (n < 2) return out;
  auto slope = [&](std::size_t k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    return (values[hi] - values[lo]) / (times[hi] - times[lo]);
  };
  bool open = false;
  for (std::size_t k = 0; k < n; ++k) {
    const bool rising = slope(k) > kBackflowSlope;
    if (rising && !open) {
      out.push_back({times[k], times[k]});
      open = true;
    }
    if (rising) out.back().end = times[k];
    if (!rising) open = false;
  }
  return out;
}

std::vector<Interval> detect_backflow(const TimeSeries& series, std::size_t i) {
  return detect_backflow(series.times(), series.real("N_" + std::to_string(i + 1)));
}

double dark_state_population(const ValidatedNetwork& net, const InitialState& init) {
  const ModeNetwork& m = net.network();
  const std::size_t n = m.mode_count();
  if (init.mode_count() != n) throw Error(ErrorCode::ShapeMismatch, "initial state does not match the network");
  if (net.degenerate_pairs().size() != n * (n - 1) / 2) {
    throw Error(ErrorCode::NotDegenerate, "dark-state population needs all modes degenerate");
  }
  if (m.couplings.cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::NotApplicable, "dark-state population assumes g = 0");
  }
  const Eigen::MatrixXd gamma = damping_matrix(m);
  const auto ni = static_cast<Eigen::Index>(n);
  for (Eigen::Index a = 0; a < ni; ++a) {
    for (Eigen::Index b = 0; b < ni; ++b) {
      const double rhs = gamma(a, a) * gamma(b, b);
      if (std::abs(gamma(a, b) * gamma(a, b) - rhs) > 1e-12 * (rhs + 1e-300)) {
        throw Error(ErrorCode::NotApplicable, "dark-state population needs a single shared continuum");
      }
    }
  }
  const Eigen::MatrixXcd p = init.correlations();
  const Eigen::VectorXd u = (2.0 * gamma.diagonal()).array().sqrt();
  const double trace = p.trace().real();
  const double norm2 = u.squaredNorm();
  if (norm2 == 0.0) return trace;
  const double bright = (u.cast<cplx>().transpose() * p * u.cast<cplx>())(0).real() / norm2;
  return trace - bright;
}

std::optional<double> lifetime_1e(const std::function<double(double)>& f, double t_max, std::size_t samples) {
  if (samples < 2) samples = 2;
  const double f0 = f(0.0);
  if (!(f0 > 0.0)) return std::nullopt;
  const double target = f0 / std::numbers::e;
  double prev = 0.0;
  for (std::size_t k = 1; k < samples; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    if (f(t) <= target) {
      double lo = prev;
      double hi = t;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) <= target ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = t;
  }
  return std::nullopt;
}

std::optional<double> lifetime_1e(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw Error(ErrorCode::ShapeMismatch, "times and values differ in length");
  if (values.empty() || !(values[0] > 0.0)) return std::nullopt;
  const double target = values[0] / std::numbers::e;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] <= target) {
      const double w = (values[k - 1] - target) / (values[k - 1] - values[k]);
      return times[k - 1] + w * (times[k] - times[k - 1]);
    }
  }
  return std::nullopt;
}

ObservableReport make_report(const ValidatedNetwork& net, const InitialState& init, const TimeSeries& numbers,
                             const TimeSeries& amplitudes) {
  ObservableReport r;
  const std::size_t n = net->mode_count();
  const NumberTotal tot = total_number(numbers);
  r.n_total = tot.trace;
  r.max_positive_slope = tot.max_positive_slope;
  r.lifetime_1e = lifetime_1e(numbers.times(), r.n_total);

  if (amplitudes.channel_count() > 0) {
    for (std::size_t i = 0; i < n; ++i) r.e_fields.push_back(electric_field(amplitudes, i));
  }
  for (std::size_t i = 0; i < n; ++i) r.backflow_intervals.push_back(detect_backflow(numbers, i));

  const auto& t = numbers.times();
  if (!t.empty()) {
    r.subradiance_reference_time = std::min(t.back(), 1.0);
    const auto it = std::lower_bound(t.begin(), t.end(), r.subradiance_reference_time - 1e-12);
    const auto k = static_cast<std::size_t>(it - t.begin());
    const double tr = t[k];
    for (std::size_t i = 0; i < n; ++i) {
      const auto ni = numbers.real("N_" + std::to_string(i + 1));
      const double independent = ni[0] * std::exp(-net->total_rate(i) * tr);
      r.subradiance_flags.push_back(ni[k] > independent * (1.0 + 1e-9) + 1e-12);
    }
  }

  try {
    r.dark_plateau = dark_state_population(net, init);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDegenerate && e.code() != ErrorCode::NotApplicable) throw;
  }
  return r;
}

}  // namespace colldecay
