#include "colldecay/solve.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "colldecay/errors.hpp"

namespace colldecay {

namespace {

void check_step(double dt, double scale) {
  if (scale > 0.0 && dt > kStepSafety / scale) {
    std::ostringstream msg;
    msg << "step " << dt << " exceeds " << kStepSafety << "/rate_scale = " << kStepSafety / scale;
    throw Error(ErrorCode::StepTooLarge, msg.str());
  }
}

void check_finite_state(const Eigen::VectorXcd& x, double t) {
  if (!x.allFinite()) throw Error(ErrorCode::NonfiniteState, "state diverged at t = " + std::to_string(t));
}

std::vector<Eigen::VectorXcd> states_of(const TimeSeries& s) {
  std::vector<Eigen::VectorXcd> out(s.size(), Eigen::VectorXcd(static_cast<Eigen::Index>(s.channel_count())));
  for (std::size_t c = 0; c < s.channel_count(); ++c) {
    const auto& ch = s.channel(c);
    for (std::size_t k = 0; k < s.size(); ++k) out[k](static_cast<Eigen::Index>(c)) = ch[k];
  }
  return out;
}

}  // namespace

TimeSeries to_series(const std::vector<double>& times, const std::vector<Eigen::VectorXcd>& states,
                     const std::vector<std::string>& labels, Sector sector, std::size_t mode_count,
                     bool weak_field) {
  const std::size_t d = labels.size();
  std::vector<std::vector<cplx>> cols(d, std::vector<cplx>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::VectorXcd& x = states[k];
    for (std::size_t c = 0; c < d; ++c) {
      cplx v = x(static_cast<Eigen::Index>(c));
      if (sector == Sector::number) {
        v = v.real();
        if (c < mode_count) {
          if (v.real() < kPopulationFloor) {
            std::ostringstream msg;
            msg << labels[c] << " = " << v.real() << " at t = " << times[k];
            throw Error(ErrorCode::NegativePopulation, msg.str());
          }
          if (v.real() < 0.0) v = 0.0;
          if (weak_field && v.real() > kWeakFieldLimit) {
            std::ostringstream msg;
            msg << labels[c] << " = " << v.real() << " exceeds 1 at t = " << times[k];
            throw Error(ErrorCode::WeakFieldViolation, msg.str());
          }
        }
      } else if (weak_field && std::norm(v) > kWeakFieldLimit) {
        std::ostringstream msg;
        msg << "|" << labels[c] << "|^2 = " << std::norm(v) << " exceeds 1 at t = " << times[k];
        throw Error(ErrorCode::WeakFieldViolation, msg.str());
      }
      cols[c][k] = v;
    }
  }
  TimeSeries out(times);
  for (std::size_t c = 0; c < d; ++c) out.add_channel(labels[c], std::move(cols[c]), sector == Sector::amplitude);
  return out;
}

// ---------------------------------------------------------------------------

void ModalSolution::fit(const Eigen::VectorXcd& x0, const Eigen::VectorXcd& off) {
  if (x0.size() != eigenvectors.rows()) throw Error(ErrorCode::ShapeMismatch, "initial state has wrong dimension");
  offset = off.size() ? off : Eigen::VectorXcd::Zero(x0.size());
  coefficients = eigenvectors.fullPivLu().solve(x0 - offset);
  initial = x0;
}

Eigen::VectorXcd ModalSolution::state(double t) const {
  // V V^-1 x0 is only x0 up to rounding
  if (t == 0.0 && initial.size() == eigenvectors.rows()) return initial;
  const Eigen::VectorXcd growth = (eigenvalues * t).array().exp();
  return offset + eigenvectors * coefficients.cwiseProduct(growth);
}

ModalSolution eigensolve(const LinearGenerator& gen) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gen.matrix, true);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::DefectiveMatrix, "eigensolver did not converge");

  ModalSolution m;
  m.eigenvalues = es.eigenvalues();
  m.eigenvectors = es.eigenvectors();
  m.eigenvectors.colwise().normalize();
  const Eigen::VectorXd sv = m.eigenvectors.jacobiSvd().singularValues();
  const double smin = sv(sv.size() - 1);
  m.condition_number = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(m.condition_number <= kDefectiveCondition)) {
    std::ostringstream msg;
    msg << "eigenvector condition number " << m.condition_number << " exceeds " << kDefectiveCondition;
    throw Error(ErrorCode::DefectiveMatrix, msg.str());
  }
  m.sector = gen.sector;
  m.mode_count = gen.mode_count;
  m.basis_labels = gen.basis_labels;
  m.weak_field = gen.weak_field;
  m.coefficients = Eigen::VectorXcd::Zero(m.eigenvalues.size());
  m.offset = Eigen::VectorXcd::Zero(m.eigenvalues.size());
  return m;
}

TimeSeries evolve_closed_form(const ModalSolution& modal, const TimeGrid& grid) {
  const auto times = grid.points();
  std::vector<Eigen::VectorXcd> states;
  states.reserve(times.size());
  for (double t : times) states.push_back(modal.state(t));
  return to_series(times, states, modal.basis_labels, modal.sector, modal.mode_count, modal.weak_field);
}

namespace {

// Family returns the stage generator; a constant generator is passed by
// reference so nothing is copied per stage.
template <class Family>
TimeSeries rk4_impl(const Family& family, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                    const TimeGrid& grid) {
  const auto times = grid.points();
  const double h = grid.dt;
  const LinearGenerator& first = family(0.0);
  if (x0.size() != first.matrix.rows()) throw Error(ErrorCode::ShapeMismatch, "initial state has wrong dimension");
  const auto labels = first.basis_labels;
  const auto sector = first.sector;
  const auto modes = first.mode_count;
  const bool weak = first.weak_field;

  auto rhs = [&drive](const LinearGenerator& g, double t, const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return g.matrix * x + g.source(t, drive);
  };

  std::vector<Eigen::VectorXcd> states;
  states.reserve(times.size());
  Eigen::VectorXcd x = x0;
  states.push_back(x);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double t = times[k - 1];
    const LinearGenerator& g0 = family(t);
    check_step(h, g0.rate_scale);
    const Eigen::VectorXcd k1 = rhs(g0, t, x);
    const LinearGenerator& gm = family(t + h / 2);
    check_step(h, gm.rate_scale);
    const Eigen::VectorXcd k2 = rhs(gm, t + h / 2, x + (h / 2) * k1);
    const Eigen::VectorXcd k3 = rhs(gm, t + h / 2, x + (h / 2) * k2);
    const LinearGenerator& g1 = family(t + h);
    check_step(h, g1.rate_scale);
    const Eigen::VectorXcd k4 = rhs(g1, t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite_state(x, t + h);
    states.push_back(x);
  }
  return to_series(times, states, labels, sector, modes, weak);
}

}  // namespace

TimeSeries integrate_rk4(const LinearGenerator& gen, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                         const TimeGrid& grid) {
  return rk4_impl([&gen](double) -> const LinearGenerator& { return gen; }, x0, drive, grid);
}

TimeSeries integrate_rk4(const GeneratorFamily& family, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                         const TimeGrid& grid) {
  return rk4_impl(family, x0, drive, grid);
}

TimeSeries evolve_expm(const LinearGenerator& gen, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                       const TimeGrid& grid) {
  if (!gen.source_is_constant(drive)) {
    throw Error(ErrorCode::NotApplicable, "matrix-exponential stepping needs a time-independent source");
  }
  const auto d = gen.matrix.rows();
  if (x0.size() != d) throw Error(ErrorCode::ShapeMismatch, "initial state has wrong dimension");
  const auto times = grid.points();

  Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(d + 1, d + 1);
  aug.topLeftCorner(d, d) = gen.matrix * grid.dt;
  aug.topRightCorner(d, 1) = gen.source(0.0, drive) * grid.dt;
  const Eigen::MatrixXcd step = aug.exp();

  std::vector<Eigen::VectorXcd> states;
  states.reserve(times.size());
  Eigen::VectorXcd y(d + 1);
  y.head(d) = x0;
  y(d) = 1.0;
  states.push_back(x0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    y = step * y;
    check_finite_state(y, times[k]);
    states.push_back(y.head(d));
  }
  return to_series(times, states, gen.basis_labels, gen.sector, gen.mode_count, gen.weak_field);
}

Eigen::VectorXcd steady_state(const LinearGenerator& gen, const Eigen::VectorXcd& constant_source) {
  if (constant_source.size() != gen.matrix.rows()) throw Error(ErrorCode::ShapeMismatch, "source has wrong dimension");
  const Eigen::VectorXcd ev = gen.matrix.eigenvalues();
  const double tol = 1e-10 * std::max(1.0, gen.rate_scale);
  const double top = ev.real().maxCoeff();
  if (!(top < -tol)) {
    std::ostringstream msg;
    msg << "largest Re(lambda) = " << top << " is not strictly negative";
    throw Error(ErrorCode::NoUniqueSteadyState, msg.str());
  }
  return gen.matrix.fullPivLu().solve(-constant_source);
}

TimeSeries evolve(const LinearGenerator& gen, const Eigen::VectorXcd& x0, const DriveSpec& drive,
                  const TimeGrid& grid, Method method) {
  auto closed = [&]() {
    if (!gen.source_is_constant(drive)) {
      throw Error(ErrorCode::NotApplicable, "closed form needs a time-independent source");
    }
    ModalSolution modal = eigensolve(gen);
    const Eigen::VectorXcd s = gen.source(0.0, drive);
    Eigen::VectorXcd offset = Eigen::VectorXcd::Zero(s.size());
    if (s.cwiseAbs().maxCoeff() > 0.0) offset = steady_state(gen, s);
    modal.fit(x0, offset);
    return evolve_closed_form(modal, grid);
  };

  switch (method) {
    case Method::rk4: return integrate_rk4(gen, x0, drive, grid);
    case Method::expm: return evolve_expm(gen, x0, drive, grid);
    case Method::closed_form: return closed();
    case Method::automatic: break;
  }
  if (!gen.source_is_constant(drive)) return integrate_rk4(gen, x0, drive, grid);
  try {
    return closed();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DefectiveMatrix && e.code() != ErrorCode::NoUniqueSteadyState) throw;
  }
  return evolve_expm(gen, x0, drive, grid);
}

Trajectory simulate(const ValidatedNetwork& net, const InitialState& init, const DriveSpec& drive,
                    const TimeGrid& grid, Method method) {
  const std::size_t n = net->mode_count();
  if (init.mode_count() != n) {
    throw Error(ErrorCode::ShapeMismatch, "initial state lists " + std::to_string(init.mode_count()) +
                                              " modes, network has " + std::to_string(n));
  }
  drive.validate();

  const bool fermionic = net.all_fermionic();
  const LinearGenerator amp = fermionic ? build_fermion_weakfield_generator(net) : build_amplitude_generator(net);
  std::vector<double> n_th(net->continuum_count());
  for (std::size_t c = 0; c < n_th.size(); ++c) n_th[c] = drive.thermal(c);
  LinearGenerator num = build_number_generator(net, n_th);
  num.weak_field = fermionic;

  Trajectory out;
  out.amplitudes = evolve(amp, init.amplitudes(), drive, grid, method);

  const Eigen::MatrixXcd p0 = init.correlations();
  if (!drive.has_coherent_input()) {
    out.numbers = evolve(num, to_number_vector(p0), DriveSpec{}, grid, method);
    return out;
  }

  // Split c = <c> + fluctuation: the mean obeys the driven amplitude
  // equation, the fluctuation correlations the thermal number sector.
  const Eigen::VectorXcd a0 = init.amplitudes();
  const Eigen::MatrixXcd fl0 = p0 - a0.conjugate() * a0.transpose();
  LinearGenerator fl_gen = num;
  fl_gen.weak_field = false;
  const TimeSeries fl = evolve(fl_gen, to_number_vector(fl0), DriveSpec{}, grid, method);

  const auto amp_states = states_of(out.amplitudes);
  const auto fl_states = states_of(fl);
  std::vector<Eigen::VectorXcd> states;
  states.reserve(fl_states.size());
  for (std::size_t k = 0; k < fl_states.size(); ++k) {
    const Eigen::VectorXcd& a = amp_states[k];
    const Eigen::MatrixXcd p = from_number_vector(fl_states[k], n) + a.conjugate() * a.transpose();
    states.push_back(to_number_vector(p));
  }
  out.numbers = to_series(fl.times(), states, num.basis_labels, Sector::number, n, fermionic);
  return out;
}

}  // namespace colldecay
