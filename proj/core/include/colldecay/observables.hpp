#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "colldecay/network.hpp"
#include "colldecay/time_series.hpp"

namespace colldecay {

struct Interval {
  double start = 0.0;
  double end = 0.0;
};

/// E_i(t) = 2 Re <c_i(t)>; i is 0-based. Throws MissingChannel.
std::vector<double> electric_field(const TimeSeries& series, std::size_t i);

struct NumberTotal {
  std::vector<double> trace;
  double max_positive_slope = 0.0;  ///< largest forward-difference slope, 0 if none
  bool non_increasing = true;       ///< max_positive_slope <= 1e-9
};

inline constexpr double kMonotoneSlope = 1e-9;
inline constexpr double kBackflowSlope = 1e-8;

/// Sums every N_i channel pointwise.
NumberTotal total_number(const TimeSeries& series);

/// Maximal intervals where the centered finite difference exceeds 1e-8
/// (one-sided differences at the ends).
std::vector<Interval> detect_backflow(const std::vector<double>& times, const std::vector<double>& values);
std::vector<Interval> detect_backflow(const TimeSeries& series, std::size_t i);

/// Population of the modes orthogonal to the bright combination
/// sum_i sqrt(gamma_i) c_i, conserved when all modes are degenerate. For two
/// modes this is (g2 N1 + g1 N2 - sqrt(g1 g2) O12) / (g1 + g2). Throws
/// NotDegenerate unless every pair is degenerate, NotApplicable for g != 0 or
/// more than one effective continuum.
double dark_state_population(const ValidatedNetwork& net, const InitialState& init);

/// First time f(t) <= f(0)/e on [0, t_max], located on a grid of `samples`
/// points and refined by bisection; nullopt if never reached or f(0) <= 0.
std::optional<double> lifetime_1e(const std::function<double(double)>& f, double t_max, std::size_t samples = 2001);
/// Same on sampled data with linear interpolation.
std::optional<double> lifetime_1e(const std::vector<double>& times, const std::vector<double>& values);

struct ObservableReport {
  std::vector<double> n_total;
  double max_positive_slope = 0.0;
  std::vector<std::vector<double>> e_fields;           ///< empty when no amplitude channels
  std::vector<std::vector<Interval>> backflow_intervals;
  double subradiance_reference_time = 0.0;
  std::vector<bool> subradiance_flags;
  std::optional<double> dark_plateau;
  std::optional<double> lifetime_1e;
};

/// Collects every observable for one run. `amplitudes` may be empty.
ObservableReport make_report(const ValidatedNetwork& net, const InitialState& init, const TimeSeries& numbers,
                             const TimeSeries& amplitudes);

}  // namespace colldecay
