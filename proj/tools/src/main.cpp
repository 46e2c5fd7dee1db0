#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <colldecay/errors.hpp>

#include "colldecay/cli/commands.hpp"

namespace cli = colldecay::cli;

namespace {

enum Exit { ok = 0, failed = 1, config = 2, solver = 3, usage = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective decay of coupled modes: simulation, spectra, kernels and figures"};
  app.require_subcommand(1);

  cli::RunOptions opt;
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
  app.add_flag("--dump-generator", opt.dump_generator, "Also write generator.json (simulate)");

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Time evolution of amplitudes and number observables");
  auto* spectrum = app.add_subcommand("spectrum", "Stationary response to a monochromatic input");
  auto* transmission = app.add_subcommand("transmission", "Two-sided transmission and reflection");
  auto* kernel = app.add_subcommand("kernel", "Memory kernel of one mode and comparison with the full solution");
  for (auto* sub : {simulate, spectrum, transmission, kernel}) {
    sub->add_option("config", config_path, "Scenario JSON")->required();
  }

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep with summary statistics");
  sweep->add_option("spec", sweep_path, "Sweep JSON")->required();

  int fig = 0;
  auto* repro = app.add_subcommand("reproduce-fig", "Regenerate the data behind a built-in figure");
  repro->add_option("n", fig, "Figure number (2-10)")->required();

  std::size_t oracle_k = 2000;
  double oracle_w = 200.0;
  auto* oracle = app.add_subcommand("oracle-check", "Compare against the discretized-continuum oracle");
  oracle->add_option("--modes-per-continuum", oracle_k)->capture_default_str();
  oracle->add_option("--bandwidth", oracle_w)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }
  opt.out_dir = out_dir;

  try {
    if (*simulate) {
      cli::run_simulate(cli::load_scenario(config_path), opt);
    } else if (*spectrum) {
      cli::run_spectrum(cli::load_scenario(config_path), opt);
    } else if (*transmission) {
      cli::run_transmission(cli::load_scenario(config_path), opt);
    } else if (*kernel) {
      cli::run_kernel(cli::load_scenario(config_path), opt);
    } else if (*sweep) {
      const auto rows = cli::run_sweep(cli::load_sweep(sweep_path));
      std::filesystem::create_directories(opt.out_dir);
      std::ofstream out(opt.out_dir / "sweep.csv");
      cli::write_sweep_csv(out, rows);
    } else if (*repro) {
      cli::reproduce_figure(fig, opt);
    } else if (*oracle) {
      return cli::run_oracle_check(opt, std::cout, oracle_k, oracle_w) ? ok : failed;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config;
  } catch (const colldecay::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == colldecay::ErrorCode::UnknownFigure ? usage : solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return solver;
  }
  return ok;
}
