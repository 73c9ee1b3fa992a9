#pragma once

// IMEX time stepping for u_t = laplacian(u) - 2 H0 u_x ^ u_y with zero
// Dirichlet data: the Laplacian is implicit, the wedge term explicit.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hsflow/functionals.hpp"
#include "hsflow/grid.hpp"
#include "hsflow/linear_solve.hpp"

namespace hsflow {

/// Discretization of the explicit nonlinear term.
///   wedge:       u_x ^ u_y with centered gradients.
///   variational: (1/3) of the exact gradient of the discrete volume V_h, so
///                the semi-discrete flow is the gradient flow of E_h.
enum class NonlinearForm { wedge, variational };

struct StepperConfig {
  double dt0 = 1e-5;
  double dt_min = 1e-12;
  double supnorm_cap = 1e6;
  double t_max = 1.0;
  double cg_tol = 1e-10;
  int cg_maxiter = 1000;
  int record_every = 1;
  double growth_cut = 1.5;
  NonlinearForm form = NonlinearForm::wedge;

  void validate() const {
    if (!(dt_min > 0.0)) throw std::invalid_argument("StepperConfig: dt_min must be > 0");
    if (!(dt0 >= dt_min)) throw std::invalid_argument("StepperConfig: dt0 must be >= dt_min");
    if (!(supnorm_cap > 0.0))
      throw std::invalid_argument("StepperConfig: supnorm_cap must be > 0");
    if (!(t_max >= 0.0) || !std::isfinite(t_max))
      throw std::invalid_argument("StepperConfig: t_max must be finite and >= 0");
    if (!(cg_tol > 0.0)) throw std::invalid_argument("StepperConfig: cg_tol must be > 0");
    if (cg_maxiter < 1) throw std::invalid_argument("StepperConfig: cg_maxiter must be >= 1");
    if (record_every < 1)
      throw std::invalid_argument("StepperConfig: record_every must be >= 1");
    if (!(growth_cut > 1.0))
      throw std::invalid_argument("StepperConfig: growth_cut must be > 1");
  }
};

/// A recorded snapshot together with the running dissipation and the step
/// size of the step that produced it (0 for the initial state).
struct TraceRecord {
  EnergySnapshot snapshot;
  double dissipation = 0.0;
  double dt = 0.0;
};

struct Trace {
  std::vector<TraceRecord> records;
  double dissipation = 0.0;  // cumulative over all accepted steps
  long steps_accepted = 0;
  long steps_rejected = 0;
  int record_every = 1;

  std::size_t size() const { return records.size(); }
  const EnergySnapshot& front() const { return records.front().snapshot; }
  const EnergySnapshot& back() const { return records.back().snapshot; }
};

enum class BlowupReason { supnorm_cap, dt_underflow, horizon_reached };

inline std::string_view to_string(BlowupReason r) {
  switch (r) {
    case BlowupReason::supnorm_cap:
      return "supnorm_cap";
    case BlowupReason::dt_underflow:
      return "dt_underflow";
    case BlowupReason::horizon_reached:
      return "horizon_reached";
  }
  return "unknown";
}

struct BlowupReport {
  bool detected = false;
  std::optional<double> t_detect;
  BlowupReason reason = BlowupReason::horizon_reached;
  double final_supnorm = 0.0;
};

struct RunResult {
  Trace trace;
  BlowupReport report;
  Field3 final_field;
};

/// Explicit part of the right-hand side (without the -2 H0 factor).
inline Field3 nonlinear_term(const Field3& u, NonlinearForm form) {
  auto [ux, uy] = gradient(u);
  Field3 w = wedge(ux, uy);
  if (form == NonlinearForm::wedge) return w;

  // d V_h / d u at node q, divided by hx*hy:
  //   u_x ^ u_y - D_x(u_y ^ u) - D_y(u ^ u_x)
  Field3 a = wedge(uy, u);
  Field3 b = wedge(u, ux);
  auto [ax, ay_unused] = gradient(a);
  auto [bx_unused, by] = gradient(b);
  Field3 out = w - ax - by;
  out *= 1.0 / 3.0;
  return out;
}

/// One IMEX step: (I - dt laplacian) u_new = u - 2 dt h0 N(u), solved per
/// component by CG. Throws SolverError if any component fails to converge.
inline Field3 step(const Field3& u, double dt, double h0, const StepperConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  Field3 rhs = u - nonlinear_term(u, cfg.form) * (2.0 * dt * h0);
  rhs.clear_boundary();
  const ShiftedLaplacian op{1.0, dt};
  Field3 out(u.grid());
  for (int c = 0; c < 3; ++c) {
    ScalarField b = component(rhs, c);
    ScalarField x = component(u, c);
    const CgResult r = conjugate_gradient(op, b, x, cfg.cg_tol, cfg.cg_maxiter);
    if (!r.converged)
      throw SolverError("step: CG did not converge (component " + std::to_string(c) +
                        ", residual " + std::to_string(r.residual_norm) + ")");
    set_component(out, c, x);
  }
  out.clear_boundary();
  return out;
}

/// ||(u_new - u_old)/dt||_2^2 * dt, the discrete dissipation over one step.
inline double dissipation_increment(const Field3& u_old, const Field3& u_new, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dissipation_increment: dt must be > 0");
  Field3 d = u_new - u_old;
  return l2_squared(d) / dt;
}

/// Runs the flow from u0 with sup-norm based step control until the sup-norm
/// exceeds the cap, dt collapses below dt_min, or t reaches t_max.
inline RunResult run(const Field3& u0, double h0, const StepperConfig& cfg) {
  cfg.validate();
  require_nonzero_h0(h0);
  if (!u0.all_finite()) throw std::invalid_argument("run: initial data is not finite");
  if (!u0.boundary_is_zero())
    throw std::invalid_argument("run: initial data must vanish on the boundary");

  RunResult res{Trace{}, BlowupReport{}, u0};
  Trace& trace = res.trace;
  trace.record_every = cfg.record_every;
  trace.records.push_back({take_snapshot(u0, h0, 0.0), 0.0, 0.0});

  Field3& u = res.final_field;
  double t = 0.0;
  double dt = cfg.dt0;
  double sup = sup_norm(u);
  const double mild = 1.0 + (cfg.growth_cut - 1.0) / 10.0;
  const double t_eps = 1e-12 * std::max(1.0, cfg.t_max);
  bool last_recorded = true;
  double last_dt = 0.0;

  auto record = [&](double step_dt) {
    trace.records.push_back({take_snapshot(u, h0, t), trace.dissipation, step_dt});
    last_recorded = true;
  };

  while (cfg.t_max - t > t_eps) {
    const double dt_try = std::min(dt, cfg.t_max - t);
    std::optional<Field3> next;
    std::optional<std::string> solver_failure;
    try {
      next = step(u, dt_try, h0, cfg);
    } catch (const SolverError& e) {
      solver_failure = e.what();
    }

    double sup_new = 0.0;
    bool accept = false;
    if (next && next->all_finite()) {
      sup_new = sup_norm(*next);
      accept = sup == 0.0 || sup_new <= cfg.growth_cut * sup;
    }

    if (!accept) {
      ++trace.steps_rejected;
      dt = 0.5 * dt_try;
      if (dt < cfg.dt_min) {
        if (solver_failure)
          throw SolverError("run: " + *solver_failure + " with dt below dt_min");
        res.report.detected = true;
        res.report.t_detect = t;
        res.report.reason = BlowupReason::dt_underflow;
        break;
      }
      continue;
    }

    trace.dissipation += dissipation_increment(u, *next, dt_try);
    u = std::move(*next);
    t += dt_try;
    last_dt = dt_try;
    ++trace.steps_accepted;
    last_recorded = false;
    if (trace.steps_accepted % cfg.record_every == 0) record(dt_try);

    const double growth = sup == 0.0 ? 1.0 : sup_new / sup;
    sup = sup_new;
    if (sup > cfg.supnorm_cap) {
      res.report.detected = true;
      res.report.t_detect = t;
      res.report.reason = BlowupReason::supnorm_cap;
      if (!last_recorded) record(dt_try);
      break;
    }
    if (growth <= mild) dt = std::min(cfg.dt0, 2.0 * dt);
  }

  if (!last_recorded) record(last_dt);
  res.report.final_supnorm = sup;
  return res;
}

}  // namespace hsflow
