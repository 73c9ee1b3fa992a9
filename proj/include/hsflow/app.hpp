#pragma once

// Subcommand implementations behind the hsflow executable. Each returns a
// process exit code and writes human-readable output to `out`, errors to `err`.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "hsflow/concavity.hpp"
#include "hsflow/config.hpp"
#include "hsflow/criteria.hpp"
#include "hsflow/functionals.hpp"
#include "hsflow/initial_data.hpp"
#include "hsflow/integrator.hpp"
#include "hsflow/io.hpp"

namespace hsflow {

struct CommandOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<Lambda1Method> lambda1;
  std::optional<int> record_every;
};

struct PreparedRun {
  Field3 u0;
  double lambda1 = 0.0;
  std::optional<AmplitudeResult> amplitude;
};

struct SimulationOutcome {
  PreparedRun prepared;
  CriterionReport criterion;
  RunResult run;
  MonitorReport monitors;
};

inline void apply_overrides(RunConfig& cfg, const CommandOptions& opt) {
  if (opt.out_dir) cfg.output_dir = *opt.out_dir;
  if (opt.lambda1) cfg.lambda1 = *opt.lambda1;
  if (opt.record_every) {
    if (*opt.record_every < 1) throw ConfigError("--record-every must be >= 1");
    cfg.stepper.record_every = *opt.record_every;
  }
}

/// Builds u0 (applying the criterion-driven amplitude if requested).
inline PreparedRun prepare_run(const RunConfig& cfg) {
  PreparedRun p{Field3(cfg.grid), lambda1(cfg.grid, cfg.lambda1), std::nullopt};
  const auto modes = base_modes(cfg);
  Field3 phi = mode_field(cfg.grid, modes);
  double a = cfg.initial.amplitude;
  if (cfg.initial.criterion_margin) {
    p.amplitude = amplitude_for_criterion(phi, cfg.h0, p.lambda1, *cfg.initial.criterion_margin);
    a = p.amplitude->amplitude;
  }
  p.u0 = phi * a;
  return p;
}

inline SimulationOutcome simulate(const RunConfig& cfg) {
  PreparedRun prep = prepare_run(cfg);
  CriterionReport crit = check_criterion(prep.u0, cfg.h0, prep.lambda1);
  RunResult res = run(prep.u0, cfg.h0, cfg.stepper);

  std::optional<ConcavityParams> params;
  if (crit.li_satisfied) {
    ConcavityParams p = default_concavity_params(crit, res.trace.back().t);
    if (cfg.monitors.beta) {
      p.beta = *cfg.monitors.beta;
      if (!cfg.monitors.sigma) p.sigma = 2.0 * crit.l2sq0 / p.beta;
    }
    if (cfg.monitors.sigma) p.sigma = *cfg.monitors.sigma;
    if (cfg.monitors.t_horizon) p.t_horizon = *cfg.monitors.t_horizon;
    params = p;
  }
  MonitorReport mon = build_monitor_report(res.trace, crit, params);
  return {std::move(prep), crit, std::move(res), std::move(mon)};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << text;
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline void write_simulation_outputs(const std::filesystem::path& dir,
                                     const SimulationOutcome& o) {
  std::filesystem::create_directories(dir);
  std::ostringstream trace;
  write_trace_csv(trace, o.run.trace);
  write_text_file(dir / "trace.csv", trace.str());

  ordered_json cert = certificate_json(o.criterion, o.run.report, o.monitors);
  if (o.prepared.amplitude) {
    cert["initial_data"] = {{"a_star", o.prepared.amplitude->a_star},
                            {"amplitude", o.prepared.amplitude->amplitude}};
  }
  cert["run"] = {{"steps_accepted", o.run.trace.steps_accepted},
                 {"steps_rejected", o.run.trace.steps_rejected},
                 {"dissipation", o.run.trace.dissipation}};
  write_text_file(dir / "certificate.json", cert.dump(2) + "\n");
  write_text_file(dir / "monitors.json", to_json(o.monitors).dump(2) + "\n");
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string("none");
}

inline void print_criterion(std::ostream& out, const CriterionReport& c) {
  out << "lambda1_used      " << fmt_double(c.lambda1_used) << "\n"
      << "E(u0)             " << fmt_double(c.e0) << "\n"
      << "||u0||_2^2        " << fmt_double(c.l2sq0) << "\n"
      << "V(u0)             " << fmt_double(c.v0) << "\n"
      << "gap               " << fmt_double(c.gap) << "\n"
      << "li_satisfied      " << (c.li_satisfied ? "true" : "false") << "\n"
      << "t_bound           " << fmt_opt(c.t_bound) << "\n"
      << "huang_e_threshold " << fmt_double(c.huang_e_threshold) << "\n"
      << "huang_v_threshold " << fmt_double(c.huang_v_threshold) << "\n"
      << "huang_satisfied   " << (c.huang_satisfied ? "true" : "false") << "\n";
  if (!c.li_satisfied) {
    const double tiny = 1e-12 * std::max(1.0, std::abs(c.e0));
    if (c.degenerate)
      out << "reason            zero initial data\n";
    else if (std::abs(c.v0) <= tiny)
      out << "reason            Poincare: volume term vanishes, E(u0) >= (lambda1/2)||u0||^2\n";
    else
      out << "reason            gap <= 0\n";
  }
}

inline int cmd_simulate(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt);
    const SimulationOutcome o = simulate(cfg);
    write_simulation_outputs(cfg.output_dir, o);
    print_criterion(out, o.criterion);
    out << "detected          " << (o.run.report.detected ? "true" : "false") << "\n"
        << "t_detect          " << fmt_opt(o.run.report.t_detect) << "\n"
        << "reason            " << to_string(o.run.report.reason) << "\n"
        << "output            " << cfg.output_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return 1;
  }
}

inline int cmd_check_criterion(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt);
    const PreparedRun p = prepare_run(cfg);
    const CriterionReport c = check_criterion(p.u0, cfg.h0, p.lambda1);
    print_criterion(out, c);
    if (opt.out_dir) {
      std::filesystem::create_directories(*opt.out_dir);
      ordered_json j = to_json(c);
      j["schema"] = kCriterionSchema;
      write_text_file(std::filesystem::path(*opt.out_dir) / "criterion.json", j.dump(2) + "\n");
    }
    return 0;
  } catch (const std::exception& e) {
    err << "check-criterion: " << e.what() << "\n";
    return 1;
  }
}

struct SweepRow {
  double parameter = 0.0;
  bool ok = false;
  std::string status;
  bool li_satisfied = false;
  double gap = 0.0;
  std::optional<double> t_bound;
  bool detected = false;
  std::optional<double> t_detect;
};

/// Runs every sweep point (in parallel, each run sequential) and returns the
/// rows in parameter order. Per-point outputs go to <dir>/point_NNN/.
inline std::vector<SweepRow> run_sweep(const RunConfig& base, bool write_points = true) {
  if (!base.sweep) throw ConfigError("missing required key 'sweep'");
  const auto& values = base.sweep->values;
  std::vector<SweepRow> rows(values.size());
  if (values.empty()) return rows;

  unsigned nthreads = base.threads > 0 ? static_cast<unsigned>(base.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(values.size()));
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      SweepRow& row = rows[k];
      row.parameter = values[k];
      try {
        RunConfig cfg = base;
        cfg.sweep.reset();
        if (base.sweep->parameter == "amplitude") {
          cfg.initial.amplitude = values[k];
          cfg.initial.criterion_margin.reset();
        } else {
          if (values[k] == 0.0) throw ConfigError("h0 must be nonzero");
          cfg.h0 = values[k];
        }
        const SimulationOutcome o = simulate(cfg);
        if (write_points) {
          std::ostringstream name;
          name << "point_" << std::setw(3) << std::setfill('0') << k;
          write_simulation_outputs(std::filesystem::path(base.output_dir) / name.str(), o);
        }
        row.ok = true;
        row.status = "ok";
        row.li_satisfied = o.criterion.li_satisfied;
        row.gap = o.criterion.gap;
        row.t_bound = o.criterion.t_bound;
        row.detected = o.run.report.detected;
        row.t_detect = o.run.report.t_detect;
      } catch (const std::exception& e) {
        row.ok = false;
        row.status = std::string("error: ") + e.what();
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

inline void write_sweep_summary(std::ostream& os, const std::string& parameter,
                                const std::vector<SweepRow>& rows) {
  os << "# " << kSweepSchema << " parameter=" << parameter << "\n";
  os << "parameter,li_satisfied,gap,t_bound,detected,t_detect,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << fmt_double(r.parameter) << ',' << (r.li_satisfied ? 1 : 0) << ','
       << (r.ok ? fmt_double(r.gap) : "") << ',' << (r.t_bound ? fmt_double(*r.t_bound) : "")
       << ',' << (r.detected ? 1 : 0) << ',' << (r.t_detect ? fmt_double(*r.t_detect) : "")
       << ',' << status << '\n';
  }
}

inline int cmd_sweep(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt);
    if (!cfg.sweep) throw ConfigError("missing required key 'sweep'");
    const std::vector<SweepRow> rows = run_sweep(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    std::ostringstream summary;
    write_sweep_summary(summary, cfg.sweep->parameter, rows);
    write_text_file(std::filesystem::path(cfg.output_dir) / "sweep_summary.csv", summary.str());
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.ok ? 0 : 1;
    out << "points " << rows.size() << ", failed " << failed << ", summary "
        << (std::filesystem::path(cfg.output_dir) / "sweep_summary.csv").string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << "\n";
    return 1;
  }
}

inline int cmd_concavity(const std::string& csv_path, double theta, std::ostream& out,
                         std::ostream& err) {
  try {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open '" + csv_path + "'");
    const ConcavitySample s = read_concavity_csv(in, theta);
    const ConcavityResult r = check_concavity(s);
    out << to_json(r).dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "concavity-check: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hsflow
