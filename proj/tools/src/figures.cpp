#include "colldecay/cli/figures.hpp"

#include <cmath>
#include <sstream>

#include <colldecay/errors.hpp>
#include <colldecay/observables.hpp>
#include <colldecay/solve.hpp>
#include <colldecay/spectral.hpp>

namespace colldecay::cli {

namespace {

std::string number_tag(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

Scenario two_mode(double delta, double g1, double g2, const FigureDefaults& d) {
  Scenario s;
  s.network = ModeNetwork::shared({delta / 2.0, -delta / 2.0}, {g1, g2});
  s.grid = {d.t_max, d.dt};
  return s;
}

FigureScenario make(int id, const std::string& label, double delta, FigureObservable obs, InitialState init,
                    const FigureDefaults& d) {
  FigureScenario f;
  f.id = id;
  f.label = label;
  f.delta = delta;
  f.observable = obs;
  f.scenario = two_mode(delta, d.gamma_1, d.gamma_2, d);
  f.scenario.initial = std::move(init);
  return f;
}

void unknown(int id) { throw Error(ErrorCode::UnknownFigure, "no built-in figure " + std::to_string(id) + " (valid: 2-10)"); }

}  // namespace

std::vector<int> figure_ids() { return {2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<double> figure_detunings(int id) {
  if (id == 2) return {0.0, 1.0, 2.0, 5.0, 10.0};
  if (id == 5) return {1.0, 2.0, 5.0, 10.0, 20.0};
  unknown(id);
  return {};
}

std::vector<FigureScenario> figure_scenarios(int id, const FigureDefaults& d) {
  const cplx a = d.alpha_0;
  const auto fock11 = InitialState::fock({1, 1});
  switch (id) {
    case 3: return {make(3, "fig3", 10.0, FigureObservable::populations, fock11, d)};
    case 4: return {make(4, "fig4", 1.0, FigureObservable::populations, fock11, d)};
    case 5: {
      std::vector<FigureScenario> out;
      for (double delta : figure_detunings(5)) {
        out.push_back(make(5, "fig5_delta_" + number_tag(delta), delta, FigureObservable::total_population, fock11, d));
      }
      return out;
    }
    case 6: return {make(6, "fig6", 1.0, FigureObservable::populations, InitialState::fock({1, 0}), d)};
    case 7: return {make(7, "fig7", 2.0, FigureObservable::populations, InitialState::coherent({a, a}), d)};
    case 8: return {make(8, "fig8", 2.0, FigureObservable::populations, InitialState::coherent({a, -a}), d)};
    case 9: return {make(9, "fig9", 2.0, FigureObservable::fields, InitialState::coherent({a, a}), d)};
    case 10: return {make(10, "fig10", 2.0, FigureObservable::fields, InitialState::coherent({a, -a}), d)};
    default: unknown(id);
  }
  return {};
}

FigureTable figure_table(int id, const FigureDefaults& d) {
  FigureTable t;
  t.meta["figure"] = id;
  t.meta["rates_note"] =
      "mode rates default to gamma_1 = 4, gamma_2 = 6 (units of gamma_0) wherever the figure does not fix them";
  t.meta["frequency_convention"] = "omega_1 = +delta/2, omega_2 = -delta/2";

  if (id == 2) {
    const FrequencyGrid grid{-15.0, 15.0, 3001};
    t.headers.push_back("omega_rel");
    t.columns.push_back(grid.points());
    for (double delta : figure_detunings(2)) {
      ModeNetwork net;
      net.omegas = {delta / 2.0, -delta / 2.0};
      net.gammas = Eigen::MatrixXd::Ones(2, 2);
      net.couplings = Eigen::MatrixXd::Zero(2, 2);
      net.topology = {Topology::global, Topology::global};
      const auto resp = transmission(validate_network(net), grid);
      t.headers.push_back("T_delta_" + number_tag(delta));
      t.columns.push_back(*resp.transmitted);
      t.headers.push_back("R_delta_" + number_tag(delta));
      t.columns.push_back(*resp.reflected);
    }
    t.meta["description"] = "two-sided transmission and reflection for a detuning sweep";
    t.meta["parameters"] = {{"gamma_L", 1.0}, {"gamma_R", 1.0}, {"detunings", figure_detunings(2)},
                            {"omega_min", grid.min}, {"omega_max", grid.max}, {"n_points", grid.n_points}};
    t.meta["rates_note"] = "each mode couples to both continua at rate 1 (units of gamma_0)";
    return t;
  }

  const auto scenarios = figure_scenarios(id, d);
  const TimeGrid grid{d.t_max, d.dt};
  t.headers.push_back("t_gamma0");
  t.columns.push_back(grid.points());
  t.meta["parameters"] = {{"gamma_1", d.gamma_1}, {"gamma_2", d.gamma_2}, {"alpha_0", d.alpha_0},
                          {"t_max", d.t_max}, {"dt", d.dt}};

  if (id == 5) {
    for (const auto& f : scenarios) {
      const auto tr = simulate(f.scenario.validated(), f.scenario.initial, DriveSpec{}, grid);
      t.headers.push_back("delta_" + number_tag(f.delta));
      t.columns.push_back(total_number(tr.numbers).trace);
    }
    const auto base = scenarios.front().scenario;
    const auto local = validate_network(localize(base.network));
    const auto tr = simulate(local, base.initial, DriveSpec{}, grid);
    t.headers.push_back("local_baseline");
    t.columns.push_back(total_number(tr.numbers).trace);
    t.meta["description"] = "total population for a detuning sweep plus the independent-decay baseline";
    t.meta["parameters"]["detunings"] = figure_detunings(5);
    return t;
  }

  const FigureScenario& f = scenarios.front();
  const auto tr = simulate(f.scenario.validated(), f.scenario.initial, DriveSpec{}, grid);
  t.meta["parameters"]["delta"] = f.delta;
  if (f.observable == FigureObservable::fields) {
    for (std::size_t i = 0; i < 2; ++i) {
      t.headers.push_back("E_" + std::to_string(i + 1));
      t.columns.push_back(electric_field(tr.amplitudes, i));
    }
    t.meta["description"] = "electric field amplitude 2 Re<c_i> of both modes";
  } else {
    for (std::size_t i = 0; i < 2; ++i) {
      t.headers.push_back("N_" + std::to_string(i + 1));
      t.columns.push_back(tr.numbers.real("N_" + std::to_string(i + 1)));
    }
    t.meta["description"] = "mode populations <N_i>";
  }
  std::ostringstream init;
  for (std::size_t i = 0; i < f.scenario.initial.modes.size(); ++i) {
    if (i) init << ", ";
    if (const auto* fk = std::get_if<Fock>(&f.scenario.initial.modes[i])) {
      init << "fock " << fk->n;
    } else {
      init << "coherent " << std::get<Coherent>(f.scenario.initial.modes[i]).alpha.real();
    }
  }
  t.meta["initial_state"] = init.str();
  return t;
}

}  // namespace colldecay::cli
