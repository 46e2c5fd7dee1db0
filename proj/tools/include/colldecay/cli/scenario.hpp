#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <colldecay/kernel.hpp>
#include <colldecay/network.hpp>
#include <colldecay/solve.hpp>
#include <colldecay/spectral.hpp>
#include <colldecay/time_series.hpp>

namespace colldecay::cli {

/// Bad or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoherentInput {
  std::size_t continuum = 0;  ///< 0-based
  cplx amplitude{1.0, 0.0};
  double omega = 0.0;
};

struct KernelSettings {
  std::size_t mode = 0;  ///< 0-based
  KernelForm form = KernelForm::elimination;
};

/// Everything one run needs. Indices are 1-based in the file and 0-based here.
struct Scenario {
  ModeNetwork network;
  InitialState initial;
  std::vector<double> n_th;  ///< per continuum
  std::vector<CoherentInput> coherent;
  TimeGrid grid{5.0, 0.005};
  FrequencyGrid frequencies{-15.0, 15.0, 301};
  Method solver = Method::automatic;
  KernelSettings kernel;
  std::size_t input_continuum = 0;

  DriveSpec drive() const;
  ValidatedNetwork validated() const;
};

/// Parses and validates; ConfigError messages name the offending key.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json dump_scenario(const Scenario& s);

std::string to_string(Method m);
std::string to_string(KernelForm f);

/// Reads a JSON file, raising ConfigError on I/O or syntax problems.
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace colldecay::cli
