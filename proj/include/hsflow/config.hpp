#pragma once

// JSON run configuration. A minimal config names the grid size, H0 and the
// initial modes; every stepper field has a default.
//
//   {
//     "grid": {"nx": 63, "ny": 63, "lx": 1.0, "ly": 1.0},
//     "h0": -1.0,
//     "initial_data": {"modes": [[1, 1, 1, 0, 0], [2, 1, 0, 1, 0]],
//                      "amplitude": 1.0,
//                      "criterion_margin": 1.25},
//     "stepper": {"dt0": 1e-5, "t_max": 1.0, ...},
//     "lambda1": "discrete",
//     "monitors": {"beta": ..., "sigma": ..., "t_horizon": ...},
//     "output_dir": "out",
//     "sweep": {"parameter": "amplitude", "values": [1, 2, 3]}
//   }

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsflow/functionals.hpp"
#include "hsflow/grid.hpp"
#include "hsflow/initial_data.hpp"
#include "hsflow/integrator.hpp"

namespace hsflow {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LocalizedSpec {
  int kmax = 8;
  double scale = 0.1;
  double cx = 0.5;
  double cy = 0.5;
};

struct InitialDataSpec {
  std::vector<ModeTerm> modes;
  std::optional<LocalizedSpec> localized;  // appended to `modes`
  double amplitude = 1.0;
  std::optional<double> criterion_margin;  // amplitude = margin * a*
};

struct MonitorOverrides {
  std::optional<double> beta;
  std::optional<double> sigma;
  std::optional<double> t_horizon;
};

struct SweepSpec {
  std::string parameter;  // "amplitude" or "h0"
  std::vector<double> values;
};

struct RunConfig {
  GridSpec grid{3, 3};
  double h0 = 0.0;
  InitialDataSpec initial;
  StepperConfig stepper;
  Lambda1Method lambda1 = Lambda1Method::discrete;
  MonitorOverrides monitors;
  std::string output_dir = ".";
  std::optional<SweepSpec> sweep;
  int threads = 0;  // 0: hardware concurrency
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError("missing required key '" + where + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("key '" + name + "' must be a number");
  return j.get<double>();
}

inline long integer(const json& j, const std::string& name) {
  if (!j.is_number_integer()) throw ConfigError("key '" + name + "' must be an integer");
  return j.get<long>();
}

template <typename T>
void read_opt_number(const json& obj, const std::string& key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  if constexpr (std::is_integral_v<T>)
    out = static_cast<T>(integer(obj.at(key), where + key));
  else
    out = number(obj.at(key), where + key);
}

inline Lambda1Method parse_lambda1(const std::string& s) {
  if (s == "discrete") return Lambda1Method::discrete;
  if (s == "continuum" || s == "analytic") return Lambda1Method::analytic;
  if (s == "power_iteration" || s == "power-iteration") return Lambda1Method::power_iteration;
  throw ConfigError("lambda1 must be 'discrete', 'continuum' or 'power_iteration' (got '" + s +
                    "')");
}

}  // namespace detail

inline Lambda1Method parse_lambda1_choice(const std::string& s) {
  return detail::parse_lambda1(s);
}

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::integer;
  using detail::number;
  using detail::require;
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  RunConfig cfg;

  const auto& g = require(j, "grid", "");
  const long nx = integer(require(g, "nx", "grid."), "grid.nx");
  const long ny = integer(require(g, "ny", "grid."), "grid.ny");
  double lx = 1.0, ly = 1.0;
  detail::read_opt_number(g, "lx", "grid.", lx);
  detail::read_opt_number(g, "ly", "grid.", ly);
  if (nx < 3 || ny < 3) throw ConfigError("grid.nx and grid.ny must be >= 3");
  try {
    cfg.grid = GridSpec(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), lx, ly);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  cfg.h0 = number(require(j, "h0", ""), "h0");
  if (cfg.h0 == 0.0) throw ConfigError("h0 must be nonzero (constant mean curvature H0 != 0)");

  const auto& init = require(j, "initial_data", "");
  if (!init.contains("modes") && !init.contains("localized"))
    throw ConfigError("missing required key 'initial_data.modes'");
  if (init.contains("modes")) {
    const auto& modes = init.at("modes");
    if (!modes.is_array()) throw ConfigError("initial_data.modes must be an array");
    for (const auto& m : modes) {
      if (!m.is_array() || m.size() != 5)
        throw ConfigError("each initial_data.modes entry must be [kx, ky, c1, c2, c3]");
      ModeTerm t;
      t.kx = static_cast<int>(integer(m[0], "initial_data.modes[].kx"));
      t.ky = static_cast<int>(integer(m[1], "initial_data.modes[].ky"));
      if (t.kx < 1 || t.ky < 1) throw ConfigError("initial_data.modes: kx, ky must be >= 1");
      t.coeff = {number(m[2], "initial_data.modes[].c1"), number(m[3], "initial_data.modes[].c2"),
                 number(m[4], "initial_data.modes[].c3")};
      cfg.initial.modes.push_back(t);
    }
  }
  if (init.contains("localized")) {
    const auto& loc = init.at("localized");
    LocalizedSpec ls;
    detail::read_opt_number(loc, "kmax", "initial_data.localized.", ls.kmax);
    detail::read_opt_number(loc, "scale", "initial_data.localized.", ls.scale);
    if (loc.contains("center")) {
      const auto& c = loc.at("center");
      if (!c.is_array() || c.size() != 2)
        throw ConfigError("initial_data.localized.center must be [x, y]");
      ls.cx = number(c[0], "initial_data.localized.center[0]");
      ls.cy = number(c[1], "initial_data.localized.center[1]");
    } else {
      ls.cx = 0.5 * lx;
      ls.cy = 0.5 * ly;
    }
    if (ls.kmax < 1 || !(ls.scale > 0.0))
      throw ConfigError("initial_data.localized: kmax >= 1 and scale > 0 required");
    cfg.initial.localized = ls;
  }
  detail::read_opt_number(init, "amplitude", "initial_data.", cfg.initial.amplitude);
  if (init.contains("criterion_margin")) {
    cfg.initial.criterion_margin = number(init.at("criterion_margin"), "initial_data.criterion_margin");
    if (!(*cfg.initial.criterion_margin > 1.0))
      throw ConfigError("initial_data.criterion_margin must be > 1");
  }

  if (j.contains("stepper")) {
    const auto& s = j.at("stepper");
    if (!s.is_object()) throw ConfigError("stepper must be an object");
    auto& sc = cfg.stepper;
    detail::read_opt_number(s, "dt0", "stepper.", sc.dt0);
    detail::read_opt_number(s, "dt_min", "stepper.", sc.dt_min);
    detail::read_opt_number(s, "supnorm_cap", "stepper.", sc.supnorm_cap);
    detail::read_opt_number(s, "t_max", "stepper.", sc.t_max);
    detail::read_opt_number(s, "cg_tol", "stepper.", sc.cg_tol);
    detail::read_opt_number(s, "cg_maxiter", "stepper.", sc.cg_maxiter);
    detail::read_opt_number(s, "record_every", "stepper.", sc.record_every);
    detail::read_opt_number(s, "growth_cut", "stepper.", sc.growth_cut);
    if (s.contains("nonlinear_form")) {
      const auto f = s.at("nonlinear_form").get<std::string>();
      if (f == "wedge")
        sc.form = NonlinearForm::wedge;
      else if (f == "variational")
        sc.form = NonlinearForm::variational;
      else
        throw ConfigError("stepper.nonlinear_form must be 'wedge' or 'variational'");
    }
    try {
      sc.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (j.contains("lambda1")) {
    if (!j.at("lambda1").is_string()) throw ConfigError("lambda1 must be a string");
    cfg.lambda1 = detail::parse_lambda1(j.at("lambda1").get<std::string>());
  }

  if (j.contains("monitors")) {
    const auto& m = j.at("monitors");
    auto read = [&](const char* key, std::optional<double>& out) {
      if (m.contains(key)) out = number(m.at(key), std::string("monitors.") + key);
    };
    read("beta", cfg.monitors.beta);
    read("sigma", cfg.monitors.sigma);
    read("t_horizon", cfg.monitors.t_horizon);
  }

  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  detail::read_opt_number(j, "threads", "", cfg.threads);

  if (j.contains("sweep")) {
    const auto& sw = j.at("sweep");
    SweepSpec spec;
    spec.parameter = require(sw, "parameter", "sweep.").get<std::string>();
    if (spec.parameter != "amplitude" && spec.parameter != "h0")
      throw ConfigError("sweep.parameter must be 'amplitude' or 'h0'");
    if (sw.contains("values")) {
      for (const auto& v : sw.at("values")) spec.values.push_back(number(v, "sweep.values[]"));
    } else {
      const double a = number(require(sw, "start", "sweep."), "sweep.start");
      const double b = number(require(sw, "stop", "sweep."), "sweep.stop");
      const long n = integer(require(sw, "count", "sweep."), "sweep.count");
      if (n < 0) throw ConfigError("sweep.count must be >= 0");
      for (long k = 0; k < n; ++k)
        spec.values.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(k) / (n - 1));
    }
    cfg.sweep = spec;
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
}

/// Modes of the configured initial data before amplitude scaling.
inline std::vector<ModeTerm> base_modes(const RunConfig& cfg) {
  std::vector<ModeTerm> modes = cfg.initial.modes;
  if (cfg.initial.localized) {
    const auto& l = *cfg.initial.localized;
    auto extra = localized_mode_coeffs(l.kmax, l.scale, l.cx, l.cy, cfg.grid.lx(), cfg.grid.ly());
    modes.insert(modes.end(), extra.begin(), extra.end());
  }
  return modes;
}

}  // namespace hsflow
