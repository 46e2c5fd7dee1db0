#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "colldecay/cli/scenario.hpp"

namespace colldecay::cli {

/// Rates and amplitudes used where a figure leaves them unspecified.
struct FigureDefaults {
  double gamma_1 = 4.0;
  double gamma_2 = 6.0;
  double alpha_0 = 1.0;
  double t_max = 5.0;
  double dt = 0.005;
};

enum class FigureObservable { populations, total_population, fields, transmission };

/// A built-in two-mode scenario; mode 1 sits at +delta/2, mode 2 at -delta/2.
struct FigureScenario {
  int id = 0;
  std::string label;  ///< e.g. "fig5_delta_2"
  double delta = 0.0;
  FigureObservable observable = FigureObservable::populations;
  Scenario scenario;
};

std::vector<int> figure_ids();

/// Time-domain scenarios of figures 3-10; figure 5 yields one entry per
/// detuning. Throws Error(UnknownFigure) for other ids.
std::vector<FigureScenario> figure_scenarios(int id, const FigureDefaults& d = {});

/// Detunings plotted for figures 2 and 5.
std::vector<double> figure_detunings(int id);

/// Columnar result of one figure.
struct FigureTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;
  nlohmann::json meta;
};

FigureTable figure_table(int id, const FigureDefaults& d = {});

}  // namespace colldecay::cli
