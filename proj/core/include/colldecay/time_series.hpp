#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colldecay {

using cplx = std::complex<double>;

/// Uniform time grid t_k = k * dt, k = 0..size()-1, in units of 1/gamma_0.
struct TimeGrid {
  double t_max = 0.0;
  double dt = 0.0;

  std::size_t size() const;
  double at(std::size_t k) const { return static_cast<double>(k) * dt; }
  std::vector<double> points() const;
  void validate() const;
};

/// Sampled expectation-value traces on a time grid. Each channel is labelled
/// after the generator basis ("c_1", "N_2", "O_12", ...) and is either complex
/// (amplitudes) or real (number-sector observables; imaginary part zero).
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> times);

  void add_channel(std::string label, std::vector<cplx> values, bool complex_valued);
  void add_real_channel(std::string label, const std::vector<double>& values);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  std::size_t channel_count() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool has(std::string_view label) const { return index_of(label).has_value(); }
  std::optional<std::size_t> index_of(std::string_view label) const;
  bool is_complex(std::size_t channel) const { return complex_[channel]; }

  /// Throws MissingChannel when absent.
  const std::vector<cplx>& channel(std::string_view label) const;
  std::vector<double> real(std::string_view label) const;
  const std::vector<cplx>& channel(std::size_t index) const { return values_[index]; }

  /// Appends all channels of `other` (same time axis required).
  void append(const TimeSeries& other);

 private:
  std::vector<double> times_;
  std::vector<std::string> labels_;
  std::vector<bool> complex_;
  std::vector<std::vector<cplx>> values_;
};

/// CSV: `t_gamma0` first, then one column per real channel and a `re_`/`im_`
/// pair per complex channel; 15 significant digits.
void write_csv(std::ostream& out, const TimeSeries& series);

/// Relative sup-norm sup|a-b| / sup|b| of two equally sampled traces.
double relative_sup_error(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace colldecay
