#include "colldecay/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>

#include <colldecay/errors.hpp>
#include <colldecay/kernel.hpp>
#include <colldecay/oracle.hpp>
#include <colldecay/solve.hpp>
#include <colldecay/spectral.hpp>

namespace colldecay::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
  auto out = open_out(dir, name);
  out << j.dump(2) << '\n';
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<cplx> as_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace

json report_json(const ObservableReport& r) {
  json j;
  j["n_total"] = r.n_total;
  j["n_total_final"] = r.n_total.empty() ? 0.0 : r.n_total.back();
  j["max_positive_slope"] = r.max_positive_slope;
  j["n_total_non_increasing"] = r.max_positive_slope <= kMonotoneSlope;
  j["lifetime_1e"] = optional_number(r.lifetime_1e);
  j["e_fields"] = r.e_fields;
  j["backflow_intervals"] = json::array();
  for (const auto& mode : r.backflow_intervals) {
    json list = json::array();
    for (const auto& iv : mode) list.push_back({{"start", iv.start}, {"end", iv.end}});
    j["backflow_intervals"].push_back(list);
  }
  j["subradiance_reference_time"] = r.subradiance_reference_time;
  j["subradiance_flags"] = r.subradiance_flags;
  j["dark_plateau"] = optional_number(r.dark_plateau);
  return j;
}

json generator_json(const LinearGenerator& g) {
  json j;
  j["sector"] = g.sector == Sector::amplitude ? "amplitude" : "number";
  j["dimension"] = g.dimension();
  j["basis_labels"] = g.basis_labels;
  j["rate_scale"] = g.rate_scale;
  j["weak_field"] = g.weak_field;
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) {
      rr.push_back(g.matrix(r, c).real());
      ri.push_back(g.matrix(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  j["matrix_re"] = re;
  j["matrix_im"] = im;
  json src = json::array();
  for (Eigen::Index r = 0; r < g.constant_source.size(); ++r) src.push_back(g.constant_source(r).real());
  j["constant_source"] = src;
  return j;
}

void run_simulate(const Scenario& s, const RunOptions& opt) {
  const ValidatedNetwork net = s.validated();
  const DriveSpec drive = s.drive();
  const Trajectory tr = simulate(net, s.initial, drive, s.grid, s.solver);
  {
    auto out = open_out(opt.out_dir, "amplitudes.csv");
    write_csv(out, tr.amplitudes);
  }
  {
    auto out = open_out(opt.out_dir, "numbers.csv");
    write_csv(out, tr.numbers);
  }
  json report = report_json(make_report(net, s.initial, tr.numbers, tr.amplitudes));
  report["solver"] = to_string(s.solver);
  report["mode_count"] = net->mode_count();
  report["grid"] = {{"t_max", s.grid.t_max}, {"dt", s.grid.dt}};
  write_json(opt.out_dir, "report.json", report);

  if (opt.dump_generator) {
    const LinearGenerator amp =
        net.all_fermionic() ? build_fermion_weakfield_generator(net) : build_amplitude_generator(net);
    std::vector<double> n_th(net->continuum_count());
    for (std::size_t c = 0; c < n_th.size(); ++c) n_th[c] = drive.thermal(c);
    write_json(opt.out_dir, "generator.json",
               {{"amplitude", generator_json(amp)}, {"number", generator_json(build_number_generator(net, n_th))}});
  }
}

void run_spectrum(const Scenario& s, const RunOptions& opt) {
  const ValidatedNetwork net = s.validated();
  const SpectralResponse resp = spectral_response(net, s.frequencies, s.input_continuum);
  {
    auto out = open_out(opt.out_dir, "spectrum.csv");
    write_csv(out, resp);
  }
  json j;
  j["reference_frequency"] = resp.reference;
  std::size_t singular = 0;
  for (bool b : resp.singular) singular += b ? 1 : 0;
  j["singular_points"] = singular;
  j["correlation_residual"] = json::array();
  const std::size_t n = net->mode_count();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      json row = {{"i", a + 1}, {"j", b + 1}};
      try {
        row["max"] = max_finite(correlation_residual(resp, a, b));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable) throw;
        row["max"] = nullptr;
        row["note"] = e.what();
      }
      j["correlation_residual"].push_back(row);
    }
  }
  write_json(opt.out_dir, "spectrum.json", j);
}

void run_transmission(const Scenario& s, const RunOptions& opt) {
  const SpectralResponse resp = transmission(s.validated(), s.frequencies);
  auto out = open_out(opt.out_dir, "transmission.csv");
  write_csv(out, resp);
}

void run_kernel(const Scenario& s, const RunOptions& opt) {
  const ValidatedNetwork net = s.validated();
  const std::size_t i = s.kernel.mode;
  const auto* coh = std::get_if<Coherent>(&s.initial.modes.at(i));
  if (!coh) throw ConfigError("config key 'modes[" + std::to_string(i) + "]': kernel comparison needs a coherent amplitude");

  const MemoryKernel k = s.kernel.form == KernelForm::spectral ? spectral_memory_kernel(net, i) : memory_kernel(net, i);
  const TimeSeries kc = evolve_with_kernel(k, coh->alpha, s.grid);
  // The kernel equation carries no partner initial condition, so the
  // reference run starts the partners in vacuum and has no drive.
  std::vector<cplx> alpha(net->mode_count(), cplx{});
  alpha[i] = coh->alpha;
  const Trajectory full = simulate(net, InitialState::coherent(alpha), DriveSpec{}, s.grid, s.solver);
  const std::string label = "c_" + std::to_string(i + 1);
  const auto& a = kc.channel(label);
  const auto& b = full.amplitudes.channel(label);

  {
    auto out = open_out(opt.out_dir, "kernel_comparison.csv");
    out << std::setprecision(15) << "t_gamma0,kernel_abs,full_abs,error\n";
    for (std::size_t t = 0; t < a.size(); ++t) {
      out << kc.times()[t] << ',' << std::abs(a[t]) << ',' << std::abs(b[t]) << ',' << std::abs(a[t] - b[t]) << '\n';
    }
  }
  json j;
  j["mode"] = i + 1;
  j["form"] = to_string(k.form);
  j["carrier"] = k.carrier;
  j["instantaneous_rate"] = k.instantaneous_rate;
  j["causal"] = k.causal;
  j["oscillatory_terms"] = json::array();
  for (const auto& t : k.oscillatory_terms) {
    j["oscillatory_terms"].push_back({{"amplitude_re", t.amplitude.real()},
                                      {"amplitude_im", t.amplitude.imag()},
                                      {"frequency", t.frequency},
                                      {"damping", t.damping},
                                      {"detuning_factor", t.detuning_factor}});
  }
  j["relative_sup_error"] = relative_sup_error(a, b);
  j["reference"] = "full solution with partners in vacuum and no drive";
  write_json(opt.out_dir, "kernel.json", j);
}

// ---------------------------------------------------------------------------

std::vector<double> SweepSpec::values() const {
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k) {
    v[k] = count == 1 ? min : min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  return v;
}

SweepSpec parse_sweep(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("sweep spec must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key != "base" && key != "base_config" && key != "param" && key != "min" && key != "max" && key != "count") {
      throw ConfigError("config key '" + key + "': unknown key");
    }
  }
  SweepSpec s;
  if (j.contains("base") == j.contains("base_config")) {
    throw ConfigError("config key 'base': give exactly one of base or base_config");
  }
  if (j.contains("base")) {
    s.base = parse_scenario(j["base"]);
  } else {
    if (!j["base_config"].is_string()) throw ConfigError("config key 'base_config': expected a path");
    fs::path p = j["base_config"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    s.base = load_scenario(p);
  }
  const std::string param = j.value("param", std::string());
  if (param == "detuning") {
    s.param = SweepParam::detuning;
  } else if (param == "gamma_ratio") {
    s.param = SweepParam::gamma_ratio;
  } else if (param == "n_th") {
    s.param = SweepParam::n_th;
  } else {
    throw ConfigError("config key 'param': expected detuning, gamma_ratio or n_th");
  }
  for (const char* key : {"min", "max"}) {
    if (!j.contains(key) || !j[key].is_number() || !std::isfinite(j[key].get<double>())) {
      throw ConfigError(std::string("config key '") + key + "': expected a finite number");
    }
  }
  s.min = j["min"].get<double>();
  s.max = j["max"].get<double>();
  if (s.max < s.min) throw ConfigError("config key 'max': must be >= min");
  if (!j.contains("count") || !j["count"].is_number_integer() || j["count"].get<long long>() < 1) {
    throw ConfigError("config key 'count': expected a positive integer");
  }
  s.count = static_cast<std::size_t>(j["count"].get<long long>());
  if (s.param != SweepParam::n_th && s.base.network.mode_count() != 2) {
    throw ConfigError("config key 'param': detuning and gamma_ratio sweeps need a two-mode base");
  }
  if (s.param == SweepParam::gamma_ratio && s.min < 0.0) throw ConfigError("config key 'min': ratio must be >= 0");
  if (s.param == SweepParam::n_th && s.min < 0.0) throw ConfigError("config key 'min': n_th must be >= 0");
  return s;
}

SweepSpec load_sweep(const fs::path& path) { return parse_sweep(read_json(path), path.parent_path()); }

Scenario apply_sweep_value(const Scenario& base, SweepParam p, double v) {
  Scenario s = base;
  switch (p) {
    case SweepParam::detuning: {
      const double mid = 0.5 * (s.network.omegas[0] + s.network.omegas[1]);
      s.network.omegas = {mid + v / 2.0, mid - v / 2.0};
      break;
    }
    case SweepParam::gamma_ratio:
      s.network.gammas.row(1) = v * s.network.gammas.row(0);
      break;
    case SweepParam::n_th:
      s.n_th.assign(s.network.continuum_count(), v);
      break;
  }
  return s;
}

SweepRow sweep_point(const Scenario& s, double value) {
  SweepRow row;
  row.value = value;
  const ValidatedNetwork net = s.validated();
  const DriveSpec drive = s.drive();
  const Trajectory tr = simulate(net, s.initial, drive, s.grid, s.solver);
  const NumberTotal tot = total_number(tr.numbers);
  row.n_total_final = tot.trace.back();

  const LinearGenerator num = build_number_generator(net, drive.n_th);
  const Eigen::VectorXcd x0 = to_number_vector(s.initial.correlations());
  const std::size_t n = net->mode_count();
  std::optional<double> life;
  if (!drive.has_coherent_input()) {
    try {
      ModalSolution modal = eigensolve(num);
      Eigen::VectorXcd offset = Eigen::VectorXcd::Zero(x0.size());
      if (num.constant_source.cwiseAbs().maxCoeff() > 0.0) offset = steady_state(num, num.constant_source);
      modal.fit(x0, offset);
      life = lifetime_1e(
          [&](double t) {
            const Eigen::VectorXcd x = modal.state(t);
            return x.head(static_cast<Eigen::Index>(n)).real().sum();
          },
          s.grid.t_max);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DefectiveMatrix && e.code() != ErrorCode::NoUniqueSteadyState) throw;
      life = lifetime_1e(tr.numbers.times(), tot.trace);
    }
  } else {
    life = lifetime_1e(tr.numbers.times(), tot.trace);
  }
  row.lifetime_1e = life.value_or(kNaN);

  for (std::size_t i = 0; i < n; ++i) {
    const auto values = tr.numbers.real("N_" + std::to_string(i + 1));
    const auto& t = tr.numbers.times();
    for (const auto& iv : detect_backflow(t, values)) {
      const auto lo = static_cast<std::size_t>(std::lround(iv.start / s.grid.dt));
      const auto hi = static_cast<std::size_t>(std::lround(iv.end / s.grid.dt));
      row.max_backflow = std::max(row.max_backflow, values[std::min(hi, values.size() - 1)] - values[lo]);
    }
  }

  try {
    row.dark_plateau = dark_state_population(net, s.initial);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDegenerate && e.code() != ErrorCode::NotApplicable) throw;
    row.dark_plateau = kNaN;
  }

  row.steady_n_total = kNaN;
  if (!drive.has_coherent_input()) {
    try {
      const Eigen::VectorXcd ss = steady_state(num, num.constant_source);
      row.steady_n_total = ss.head(static_cast<Eigen::Index>(n)).real().sum();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoUniqueSteadyState) throw;
    }
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const auto values = spec.values();
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(values.size());
  for (double v : values) {
    jobs.push_back(std::async(std::launch::async, [&spec, v] {
      return sweep_point(apply_sweep_value(spec.base, spec.param, v), v);
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << std::setprecision(15) << "value,lifetime_1e,max_backflow,dark_plateau,n_total_final,steady_n_total\n";
  for (const auto& r : rows) {
    // + 0.0 folds -0 into 0
    out << r.value + 0.0 << ',' << r.lifetime_1e + 0.0 << ',' << r.max_backflow + 0.0 << ','
        << r.dark_plateau + 0.0 << ',' << r.n_total_final + 0.0 << ',' << r.steady_n_total + 0.0 << '\n';
  }
}

// ---------------------------------------------------------------------------

void reproduce_figure(int id, const RunOptions& opt) {
  const FigureTable t = figure_table(id);
  const std::string stem = "fig" + std::to_string(id);
  {
    auto out = open_out(opt.out_dir, stem + ".csv");
    out << std::setprecision(15);
    for (std::size_t c = 0; c < t.headers.size(); ++c) out << (c ? "," : "") << t.headers[c];
    out << '\n';
    for (std::size_t r = 0; r < t.columns.front().size(); ++r) {
      for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c][r] + 0.0;
      out << '\n';
    }
  }
  json meta = t.meta;
  meta["columns"] = t.headers;
  write_json(opt.out_dir, stem + "_meta.json", meta);

  auto py = open_out(opt.out_dir, "plot_" + stem + ".py");
  py << "import sys\n"
        "import pandas as pd\n"
        "import matplotlib.pyplot as plt\n\n"
     << "df = pd.read_csv('" << stem << ".csv')\n"
     << "x = df.columns[0]\n"
        "fig, ax = plt.subplots()\n"
        "for col in df.columns[1:]:\n"
        "    ax.plot(df[x], df[col], label=col)\n"
        "ax.set_xlabel(x)\n"
        "ax.legend()\n"
     << "fig.savefig(sys.argv[1] if len(sys.argv) > 1 else '" << stem << ".png', dpi=150)\n";
}

std::vector<OracleComparison> oracle_comparisons(std::size_t k, double bandwidth) {
  std::vector<OracleComparison> out;
  for (int id = 3; id <= 10; ++id) {
    OracleComparison row;
    row.label = "fig" + std::to_string(id);
    const auto start = std::chrono::steady_clock::now();
    for (const auto& f : figure_scenarios(id)) {
      const ValidatedNetwork net = f.scenario.validated();
      const DiscretizedSystem sys = discretize_continuum(net, k, bandwidth);
      const TimeSeries o = oracle_evolve(sys, f.scenario.initial, f.scenario.grid);
      const Trajectory m = simulate(net, f.scenario.initial, DriveSpec{}, f.scenario.grid);

      double err = 0.0;
      switch (f.observable) {
        case FigureObservable::total_population:
          err = relative_sup_error(as_complex(total_number(o).trace), as_complex(total_number(m.numbers).trace));
          break;
        case FigureObservable::fields:
          for (std::size_t i = 0; i < net->mode_count(); ++i) {
            err = std::max(err, relative_sup_error(as_complex(electric_field(o, i)),
                                                   as_complex(electric_field(m.amplitudes, i))));
          }
          break;
        default:
          for (std::size_t i = 0; i < net->mode_count(); ++i) {
            const std::string label = "N_" + std::to_string(i + 1);
            err = std::max(err, relative_sup_error(o.channel(label), m.numbers.channel(label)));
          }
      }
      row.max_error = std::max(row.max_error, err);
      const auto total = o.real("excitation_total");
      for (double v : total) row.unitarity_error = std::max(row.unitarity_error, std::abs(v - total.front()));
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.pass = row.max_error < kOracleTolerance && row.unitarity_error < kUnitarityTolerance;
    out.push_back(row);
  }
  return out;
}

bool run_oracle_check(const RunOptions& opt, std::ostream& table, std::size_t k, double bandwidth) {
  const auto rows = oracle_comparisons(k, bandwidth);
  bool all = true;
  table << std::left << std::setw(10) << "scenario" << std::setw(16) << "max_rel_error" << std::setw(16)
        << "unitarity" << std::setw(8) << "result" << '\n';
  auto csv = open_out(opt.out_dir, "oracle_check.csv");
  csv << std::setprecision(15) << "scenario,max_rel_error,unitarity_error,tolerance,pass\n";
  for (const auto& r : rows) {
    all = all && r.pass;
    table << std::left << std::setw(10) << r.label << std::setw(16) << std::setprecision(6) << r.max_error
          << std::setw(16) << r.unitarity_error << std::setw(8) << (r.pass ? "PASS" : "FAIL") << '\n';
    csv << r.label << ',' << r.max_error << ',' << r.unitarity_error << ',' << kOracleTolerance << ','
        << (r.pass ? 1 : 0) << '\n';
  }
  table << "K = " << k << ", W = " << bandwidth << ", tolerance " << kOracleTolerance << '\n';
  return all;
}

}  // namespace colldecay::cli
