#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <colldecay/generator.hpp>
#include <colldecay/observables.hpp>

#include "colldecay/cli/figures.hpp"
#include "colldecay/cli/scenario.hpp"

namespace colldecay::cli {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool dump_generator = false;
};

nlohmann::json report_json(const ObservableReport& r);
nlohmann::json generator_json(const LinearGenerator& g);

/// amplitudes.csv, numbers.csv, report.json (+ generator.json).
void run_simulate(const Scenario& s, const RunOptions& opt);
/// spectrum.csv and spectrum.json (correlation residual per pair).
void run_spectrum(const Scenario& s, const RunOptions& opt);
/// transmission.csv.
void run_transmission(const Scenario& s, const RunOptions& opt);
/// kernel.json and kernel_comparison.csv.
void run_kernel(const Scenario& s, const RunOptions& opt);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParam { detuning, gamma_ratio, n_th };

struct SweepSpec {
  Scenario base;
  SweepParam param = SweepParam::detuning;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const;
};

/// Keys: base (inline scenario) or base_config (path, relative to the spec
/// file), param, min, max, count.
SweepSpec load_sweep(const std::filesystem::path& path);
SweepSpec parse_sweep(const nlohmann::json& j, const std::filesystem::path& base_dir);

struct SweepRow {
  double value = 0.0;
  double lifetime_1e = 0.0;      ///< NaN when N_total never reaches 1/e
  double max_backflow = 0.0;     ///< largest population gain over any backflow interval
  double dark_plateau = 0.0;     ///< NaN unless all modes are degenerate
  double n_total_final = 0.0;
  double steady_n_total = 0.0;   ///< NaN without a unique fixed point
};

Scenario apply_sweep_value(const Scenario& base, SweepParam p, double v);
SweepRow sweep_point(const Scenario& s, double value);
/// Points run concurrently; rows come back in parameter order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// ---------------------------------------------------------------------------
// Figures and oracle validation

/// fig{n}.csv, fig{n}_meta.json, plot_fig{n}.py.
void reproduce_figure(int id, const RunOptions& opt);

struct OracleComparison {
  std::string label;
  double max_error = 0.0;        ///< relative sup-norm over the figure's observables
  double unitarity_error = 0.0;  ///< |excitation_total(t) - excitation_total(0)| sup
  double seconds = 0.0;
  bool pass = false;
};

inline constexpr double kOracleTolerance = 1e-2;
inline constexpr double kUnitarityTolerance = 1e-10;

/// One comparison per built-in time-domain figure (3-10); figure 5 reports
/// its worst detuning.
std::vector<OracleComparison> oracle_comparisons(std::size_t k = 2000, double bandwidth = 200.0);
/// Prints the table; returns true when every row passes.
bool run_oracle_check(const RunOptions& opt, std::ostream& table, std::size_t k = 2000, double bandwidth = 200.0);

}  // namespace colldecay::cli
