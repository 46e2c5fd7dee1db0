#include "colldecay/cli/scenario.hpp"

#include <fstream>
#include <set>

#include <colldecay/errors.hpp>

namespace colldecay::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!ok.count(k)) fail(where.empty() ? k : where + "." + k, "unknown key");
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(where + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(where + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& where, double fallback) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::size_t index1(const json& obj, const std::string& key, const std::string& where, std::size_t limit) {
  if (!obj.contains(key)) fail(where + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(where + key, "expected a 1-based index");
  const auto i = static_cast<std::size_t>(v.get<long long>());
  if (i > limit) fail(where + key, "index " + std::to_string(i) + " out of range (1.." + std::to_string(limit) + ")");
  return i - 1;
}

Method parse_method(const std::string& s) {
  if (s == "auto" || s == "automatic") return Method::automatic;
  if (s == "closed_form") return Method::closed_form;
  if (s == "expm") return Method::expm;
  if (s == "rk4") return Method::rk4;
  fail("solver", "expected auto, closed_form, expm or rk4");
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::closed_form: return "closed_form";
    case Method::expm: return "expm";
    case Method::rk4: return "rk4";
  }
  return "auto";
}

std::string to_string(KernelForm f) { return f == KernelForm::spectral ? "spectral" : "elimination"; }

DriveSpec Scenario::drive() const {
  DriveSpec d;
  d.n_th = n_th;
  for (const auto& c : coherent) {
    if (d.b_in_mean.size() <= c.continuum) d.b_in_mean.resize(c.continuum + 1);
    auto prev = d.b_in_mean[c.continuum];
    const cplx a = c.amplitude;
    const double w = c.omega;
    d.b_in_mean[c.continuum] = [prev, a, w](double t) {
      cplx v = a * std::exp(cplx(0.0, -w * t));
      return prev ? prev(t) + v : v;
    };
  }
  return d;
}

ValidatedNetwork Scenario::validated() const { return validate_network(network); }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
}

Scenario parse_scenario(const json& j) {
  only_keys(j, "", {"modes", "continua", "g", "coherences", "drive", "grid", "solver", "kernel", "input_continuum"});
  Scenario s;

  if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty()) fail("modes", "expected a non-empty array");
  const std::size_t n = j["modes"].size();
  bool any_stats = false;
  std::vector<Statistics> stats;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "modes[" + std::to_string(i) + "].";
    const json& m = j["modes"][i];
    only_keys(m, "modes[" + std::to_string(i) + "]", {"omega", "fock", "alpha_re", "alpha_im", "statistics"});
    s.network.omegas.push_back(number(m, "omega", where));
    const bool has_alpha = m.contains("alpha_re") || m.contains("alpha_im");
    if (m.contains("fock") && has_alpha) fail(where + "fock", "give either fock or alpha_re/alpha_im, not both");
    if (has_alpha) {
      s.initial.modes.emplace_back(
          Coherent{cplx(number_or(m, "alpha_re", where, 0.0), number_or(m, "alpha_im", where, 0.0))});
    } else {
      unsigned occ = 0;
      if (m.contains("fock")) {
        const auto& f = m["fock"];
        if (!f.is_number_integer() || f.get<long long>() < 0) fail(where + "fock", "expected a nonnegative integer");
        occ = static_cast<unsigned>(f.get<long long>());
      }
      s.initial.modes.emplace_back(Fock{occ});
    }
    Statistics st = Statistics::boson;
    if (m.contains("statistics")) {
      any_stats = true;
      const auto& v = m["statistics"];
      if (v == "fermion") {
        st = Statistics::fermion;
      } else if (v != "boson") {
        fail(where + "statistics", "expected boson or fermion");
      }
    }
    stats.push_back(st);
  }
  if (any_stats) s.network.statistics = stats;

  if (!j.contains("continua") || !j["continua"].is_array()) fail("continua", "expected an array");
  const std::size_t c = j["continua"].size();
  s.network.gammas = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c));
  for (std::size_t k = 0; k < c; ++k) {
    const std::string base = "continua[" + std::to_string(k) + "]";
    const json& cj = j["continua"][k];
    only_keys(cj, base, {"gammas", "topology"});
    if (!cj.contains("gammas") || !cj["gammas"].is_array() || cj["gammas"].size() != n) {
      fail(base + ".gammas", "expected an array of " + std::to_string(n) + " rates");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!cj["gammas"][i].is_number()) fail(base + ".gammas[" + std::to_string(i) + "]", "expected a number");
      s.network.gammas(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cj["gammas"][i].get<double>();
    }
    const std::string topo = cj.value("topology", std::string("global"));
    if (topo == "global") {
      s.network.topology.push_back(Topology::global);
    } else if (topo == "local") {
      s.network.topology.push_back(Topology::local);
    } else {
      fail(base + ".topology", "expected global or local");
    }
  }

  s.network.couplings = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (j.contains("g")) {
    const json& g = j["g"];
    if (!g.is_array() || g.size() != n) fail("g", "expected an " + std::to_string(n) + "x" + std::to_string(n) + " array");
    for (std::size_t a = 0; a < n; ++a) {
      if (!g[a].is_array() || g[a].size() != n) fail("g[" + std::to_string(a) + "]", "expected " + std::to_string(n) + " entries");
      for (std::size_t b = 0; b < n; ++b) {
        if (!g[a][b].is_number()) fail("g[" + std::to_string(a) + "][" + std::to_string(b) + "]", "expected a number");
        s.network.couplings(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = g[a][b].get<double>();
      }
    }
  }

  if (j.contains("coherences")) {
    if (!j["coherences"].is_array()) fail("coherences", "expected an array");
    for (std::size_t k = 0; k < j["coherences"].size(); ++k) {
      const std::string where = "coherences[" + std::to_string(k) + "].";
      const json& cj = j["coherences"][k];
      only_keys(cj, "coherences[" + std::to_string(k) + "]", {"i", "j", "O", "Y"});
      std::size_t a = index1(cj, "i", where, n);
      std::size_t b = index1(cj, "j", where, n);
      if (a == b) fail(where + "j", "coherence needs two distinct modes");
      Coherence coh{number_or(cj, "O", where, 0.0), number_or(cj, "Y", where, 0.0)};
      if (a > b) {
        // <c_j^dag c_i> is the conjugate pair: O unchanged, Y flips sign.
        std::swap(a, b);
        coh.Y = -coh.Y;
      }
      s.initial.coherences[{a, b}] = coh;
    }
  }

  if (j.contains("drive")) {
    const json& d = j["drive"];
    only_keys(d, "drive", {"n_th", "coherent"});
    if (d.contains("n_th")) {
      const json& t = d["n_th"];
      if (t.is_number()) {
        s.n_th.assign(c, t.get<double>());
      } else if (t.is_array() && t.size() == c) {
        for (std::size_t k = 0; k < c; ++k) {
          if (!t[k].is_number()) fail("drive.n_th[" + std::to_string(k) + "]", "expected a number");
          s.n_th.push_back(t[k].get<double>());
        }
      } else {
        fail("drive.n_th", "expected a number or an array of " + std::to_string(c));
      }
      for (std::size_t k = 0; k < s.n_th.size(); ++k) {
        if (!(s.n_th[k] >= 0.0)) fail("drive.n_th", "occupancy must be >= 0");
      }
    }
    if (d.contains("coherent")) {
      if (!d["coherent"].is_array()) fail("drive.coherent", "expected an array");
      for (std::size_t k = 0; k < d["coherent"].size(); ++k) {
        const std::string base = "drive.coherent[" + std::to_string(k) + "]";
        const json& cj = d["coherent"][k];
        only_keys(cj, base, {"continuum", "amplitude_re", "amplitude_im", "omega"});
        CoherentInput in;
        in.continuum = index1(cj, "continuum", base + ".", c);
        in.amplitude = cplx(number_or(cj, "amplitude_re", base + ".", 1.0), number_or(cj, "amplitude_im", base + ".", 0.0));
        in.omega = number_or(cj, "omega", base + ".", 0.0);
        s.coherent.push_back(in);
      }
    }
  }

  if (j.contains("grid")) {
    const json& g = j["grid"];
    only_keys(g, "grid", {"t_max", "dt", "omega_min", "omega_max", "n_points"});
    s.grid.t_max = number_or(g, "t_max", "grid.", s.grid.t_max);
    s.grid.dt = number_or(g, "dt", "grid.", s.grid.dt);
    s.frequencies.min = number_or(g, "omega_min", "grid.", s.frequencies.min);
    s.frequencies.max = number_or(g, "omega_max", "grid.", s.frequencies.max);
    if (g.contains("n_points")) {
      if (!g["n_points"].is_number_integer() || g["n_points"].get<long long>() < 1) {
        fail("grid.n_points", "expected a positive integer");
      }
      s.frequencies.n_points = static_cast<std::size_t>(g["n_points"].get<long long>());
    }
    if (!(s.grid.dt > 0.0)) fail("grid.dt", "must be positive");
    if (!(s.grid.t_max >= 0.0)) fail("grid.t_max", "must be nonnegative");
    if (!(s.frequencies.max >= s.frequencies.min)) fail("grid.omega_max", "must be >= omega_min");
  }

  if (j.contains("solver")) {
    if (!j["solver"].is_string()) fail("solver", "expected a string");
    s.solver = parse_method(j["solver"].get<std::string>());
  }

  if (j.contains("kernel")) {
    const json& k = j["kernel"];
    only_keys(k, "kernel", {"mode", "form"});
    if (k.contains("mode")) s.kernel.mode = index1(k, "mode", "kernel.", n);
    if (k.contains("form")) {
      if (k["form"] == "spectral") {
        s.kernel.form = KernelForm::spectral;
      } else if (k["form"] != "elimination") {
        fail("kernel.form", "expected elimination or spectral");
      }
    }
  }

  if (j.contains("input_continuum")) s.input_continuum = index1(j, "input_continuum", "", std::max<std::size_t>(c, 1));

  try {
    (void)s.validated();
  } catch (const Error& e) {
    throw ConfigError(std::string("network: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_json(path)); }

json dump_scenario(const Scenario& s) {
  json j;
  const std::size_t n = s.network.mode_count();
  j["modes"] = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json m;
    m["omega"] = s.network.omegas[i];
    if (const auto* f = std::get_if<Fock>(&s.initial.modes[i])) {
      m["fock"] = f->n;
    } else {
      const cplx a = std::get<Coherent>(s.initial.modes[i]).alpha;
      m["alpha_re"] = a.real();
      m["alpha_im"] = a.imag();
    }
    if (!s.network.statistics.empty()) {
      m["statistics"] = s.network.statistics[i] == Statistics::fermion ? "fermion" : "boson";
    }
    j["modes"].push_back(m);
  }
  j["continua"] = json::array();
  for (std::size_t k = 0; k < s.network.continuum_count(); ++k) {
    json cj;
    cj["gammas"] = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      cj["gammas"].push_back(s.network.gammas(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
    cj["topology"] = s.network.topology[k] == Topology::local ? "local" : "global";
    j["continua"].push_back(cj);
  }
  j["g"] = json::array();
  for (std::size_t a = 0; a < n; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < n; ++b) row.push_back(s.network.couplings(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    j["g"].push_back(row);
  }
  j["coherences"] = json::array();
  for (const auto& [key, coh] : s.initial.coherences) {
    j["coherences"].push_back({{"i", key.first + 1}, {"j", key.second + 1}, {"O", coh.O}, {"Y", coh.Y}});
  }
  json d;
  d["n_th"] = s.n_th;
  d["coherent"] = json::array();
  for (const auto& c : s.coherent) {
    d["coherent"].push_back({{"continuum", c.continuum + 1},
                             {"amplitude_re", c.amplitude.real()},
                             {"amplitude_im", c.amplitude.imag()},
                             {"omega", c.omega}});
  }
  if (s.n_th.empty()) d.erase("n_th");
  j["drive"] = d;
  j["grid"] = {{"t_max", s.grid.t_max},
               {"dt", s.grid.dt},
               {"omega_min", s.frequencies.min},
               {"omega_max", s.frequencies.max},
               {"n_points", s.frequencies.n_points}};
  j["solver"] = to_string(s.solver);
  j["kernel"] = {{"mode", s.kernel.mode + 1}, {"form", to_string(s.kernel.form)}};
  j["input_continuum"] = s.input_continuum + 1;
  return j;
}

}  // namespace colldecay::cli
