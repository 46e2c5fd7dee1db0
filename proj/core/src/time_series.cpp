#include "colldecay/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "colldecay/errors.hpp"

namespace colldecay {

std::size_t TimeGrid::size() const {
  validate();
  return static_cast<std::size_t>(std::llround(t_max / dt)) + 1;
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k);
  return out;
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "time grid step must be positive and finite");
  }
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::InvalidArgument, "time grid t_max must be nonnegative and finite");
  }
}

TimeSeries::TimeSeries(std::vector<double> times) : times_(std::move(times)) {}

void TimeSeries::add_channel(std::string label, std::vector<cplx> values, bool complex_valued) {
  if (values.size() != times_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "channel " + label + " has " + std::to_string(values.size()) +
                                              " samples, grid has " + std::to_string(times_.size()));
  }
  labels_.push_back(std::move(label));
  complex_.push_back(complex_valued);
  values_.push_back(std::move(values));
}

void TimeSeries::add_real_channel(std::string label, const std::vector<double>& values) {
  std::vector<cplx> c(values.begin(), values.end());
  add_channel(std::move(label), std::move(c), false);
}

std::optional<std::size_t> TimeSeries::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

const std::vector<cplx>& TimeSeries::channel(std::string_view label) const {
  auto idx = index_of(label);
  if (!idx) throw Error(ErrorCode::MissingChannel, "no channel named " + std::string(label));
  return values_[*idx];
}

std::vector<double> TimeSeries::real(std::string_view label) const {
  const auto& c = channel(label);
  std::vector<double> out(c.size());
  std::transform(c.begin(), c.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

void TimeSeries::append(const TimeSeries& other) {
  if (other.times_.size() != times_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "cannot append series on a different grid");
  }
  for (std::size_t c = 0; c < other.channel_count(); ++c) {
    add_channel(other.labels_[c], other.values_[c], other.complex_[c]);
  }
}

void write_csv(std::ostream& out, const TimeSeries& series) {
  out << std::setprecision(15);
  out << "t_gamma0";
  for (std::size_t c = 0; c < series.channel_count(); ++c) {
    const auto& label = series.labels()[c];
    if (series.is_complex(c)) {
      out << ",re_" << label << ",im_" << label;
    } else {
      out << ',' << label;
    }
  }
  out << '\n';
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << series.times()[k];
    for (std::size_t c = 0; c < series.channel_count(); ++c) {
      const cplx v = series.channel(c)[k];
      if (series.is_complex(c)) {
        out << ',' << v.real() + 0.0 << ',' << v.imag() + 0.0;  // + 0.0 folds -0
      } else {
        out << ',' << v.real() + 0.0;
      }
    }
    out << '\n';
  }
}

double relative_sup_error(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "traces differ in length");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num = std::max(num, std::abs(a[k] - b[k]));
    den = std::max(den, std::abs(b[k]));
  }
  if (den == 0.0) return num;
  return num / den;
}

}  // namespace colldecay
