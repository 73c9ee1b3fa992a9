#pragma once

// Blow-up criteria at t = 0 and the monitors that track each inequality of
// the blow-up argument along a recorded trace.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsflow/functionals.hpp"
#include "hsflow/integrator.hpp"

namespace hsflow {

struct CriterionReport {
  double h0 = 0.0;
  double lambda1_used = 0.0;
  double e0 = 0.0;
  double l2sq0 = 0.0;
  double gap = 0.0;  // lambda1 ||u0||^2 - 6 E(u0)
  bool li_satisfied = false;
  std::optional<double> t_bound;  // 16 ||u0||^2 / gap
  double v0 = 0.0;
  double huang_e_threshold = 0.0;  // 4 pi / (3 H0^2)
  double huang_v_threshold = 0.0;  // 4 pi / |H0|^3
  bool huang_satisfied = false;
  bool degenerate = false;  // u0 identically zero
};

/// 16 ||u0||^2 / gap with gap = lambda1 ||u0||^2 - 6 E(u0); empty when gap <= 0.
inline std::optional<double> blowup_time_bound(double l2sq0, double e0, double lambda1) {
  const double gap = lambda1 * l2sq0 - 6.0 * e0;
  if (!(gap > 0.0) || !(l2sq0 > 0.0)) return std::nullopt;
  return 16.0 * l2sq0 / gap;
}

inline CriterionReport check_criterion(const Field3& u0, double h0, double lambda1) {
  require_nonzero_h0(h0);
  if (!(lambda1 > 0.0)) throw std::invalid_argument("check_criterion: lambda1 must be > 0");
  const double pi = std::numbers::pi;
  const EnergySnapshot s = take_snapshot(u0, h0, 0.0);
  CriterionReport r;
  r.h0 = h0;
  r.lambda1_used = lambda1;
  r.e0 = s.e;
  r.l2sq0 = s.l2sq;
  r.v0 = s.v;
  r.degenerate = s.l2sq == 0.0;
  r.gap = r.degenerate ? 0.0 : lambda1 * s.l2sq - 6.0 * s.e;
  r.li_satisfied = r.gap > 0.0;
  if (r.li_satisfied) r.t_bound = blowup_time_bound(s.l2sq, s.e, lambda1);
  r.huang_e_threshold = 4.0 * pi / (3.0 * h0 * h0);
  r.huang_v_threshold = 4.0 * pi / std::pow(std::abs(h0), 3);
  r.huang_satisfied =
      (r.e0 < r.huang_e_threshold && std::abs(r.v0) > r.huang_v_threshold) || r.e0 < 0.0;
  return r;
}

/// d(t) = [l2sq - (6/lambda1) E](t) - [l2sq - (6/lambda1) E](0) e^{lambda1 t};
/// nonnegative for the exact flow under the criterion.
struct GronwallSeries {
  bool active = false;
  std::string status;
  std::vector<double> t, lhs, rhs, defect, normalized;
  double min_normalized = 0.0;
};

inline GronwallSeries gronwall_monitor(const Trace& trace, const CriterionReport& crit) {
  GronwallSeries out;
  if (!crit.li_satisfied) {
    out.status = "inactive: blow-up criterion not satisfied at t = 0";
    return out;
  }
  out.active = true;
  out.status = "active";
  const double lam = crit.lambda1_used;
  const double base = crit.l2sq0 - 6.0 / lam * crit.e0;
  out.min_normalized = std::numeric_limits<double>::infinity();
  for (const auto& rec : trace.records) {
    const auto& s = rec.snapshot;
    const double lhs = s.l2sq - 6.0 / lam * s.e;
    const double rhs = base * std::exp(lam * s.t);
    const double d = lhs - rhs;
    out.t.push_back(s.t);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.defect.push_back(d);
    const double nd = rhs != 0.0 ? d / std::abs(rhs) : d;
    out.normalized.push_back(nd);
    out.min_normalized = std::min(out.min_normalized, nd);
  }
  return out;
}

/// g(t) = ||u0|| + sqrt(E(u0) t) - ||u(t)||, reported while E stays >= 0.
struct GrowthSeries {
  bool active = false;
  std::string status;
  std::vector<double> t, lhs, rhs, defect, normalized;
  double min_normalized = 0.0;
};

inline GrowthSeries growth_monitor(const Trace& trace, double e0) {
  GrowthSeries out;
  if (trace.records.empty()) {
    out.status = "inactive: empty trace";
    return out;
  }
  const double l0 = std::sqrt(trace.front().l2sq);
  out.min_normalized = std::numeric_limits<double>::infinity();
  for (const auto& rec : trace.records) {
    const auto& s = rec.snapshot;
    if (s.e < 0.0) break;
    const double lhs = std::sqrt(s.l2sq);
    const double rhs = l0 + std::sqrt(std::max(e0, 0.0) * s.t);
    const double g = rhs - lhs;
    out.t.push_back(s.t);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.defect.push_back(g);
    const double ng = rhs > 0.0 ? g / rhs : g;
    out.normalized.push_back(ng);
    out.min_normalized = std::min(out.min_normalized, ng);
  }
  out.active = !out.t.empty();
  if (!out.active) {
    out.min_normalized = 0.0;
    out.status = "inactive: E(u0) < 0";
  } else if (out.t.size() < trace.size()) {
    out.status = "active until E turned negative at t = " +
                 std::to_string(trace.records[out.t.size()].snapshot.t);
  } else {
    out.status = "active";
  }
  return out;
}

struct ConcavityParams {
  double beta = 0.0;
  double sigma = 0.0;
  double t_horizon = 0.0;
};

/// beta = gap/4 and sigma = 2 ||u0||^2 / beta minimize the implied bound.
inline ConcavityParams default_concavity_params(const CriterionReport& crit, double t_horizon) {
  if (!crit.li_satisfied)
    throw std::invalid_argument("default_concavity_params: criterion not satisfied");
  ConcavityParams p;
  p.beta = crit.gap / 4.0;
  p.sigma = 2.0 * crit.l2sq0 / p.beta;
  p.t_horizon = t_horizon;
  return p;
}

/// Bound implied by the concavity argument on F with theta = 1/2, with
/// F(0) = T ||u0||^2 + beta sigma^2 and F'(0) = 2 beta sigma. The right-hand
/// side of T <= 2F(0)/F'(0) rearranged for T.
inline std::optional<double> concavity_time_bound(double l2sq0, double beta, double sigma) {
  const double denom = beta * sigma - l2sq0;
  if (!(denom > 0.0)) return std::nullopt;
  return beta * sigma * sigma / denom;
}

/// F, F', F'', the defect F F'' - (3/2) F'^2 and eta along a trace.
struct ConcavitySeries {
  bool active = false;
  std::string status;
  bool cadence_ok = true;  // requires a snapshot after every accepted step
  ConcavityParams params;
  std::vector<double> t, f, f_prime, f_second, defect, normalized, eta, eta_scale;
  double min_normalized = 0.0;
  double min_eta_ratio = 0.0;  // min of eta / eta_scale
  double min_eta = 0.0;
};

inline ConcavitySeries concavity_trajectory(const Trace& trace, const CriterionReport& crit,
                                            double t_horizon, double beta, double sigma) {
  ConcavitySeries out;
  if (!crit.li_satisfied) {
    out.status = "inactive: blow-up criterion not satisfied at t = 0";
    return out;
  }
  if (!(beta > 0.0) || beta > crit.gap / 4.0 * (1.0 + 1e-14))
    throw std::invalid_argument("concavity_trajectory: beta must lie in (0, gap/4]");
  if (!(sigma > 0.0)) throw std::invalid_argument("concavity_trajectory: sigma must be > 0");
  out.active = true;
  out.status = "active";
  out.cadence_ok = trace.record_every == 1;
  out.params = {beta, sigma, t_horizon};

  const double l0 = crit.l2sq0;
  double integral = 0.0;  // trapezoid of ||u||^2 over snapshot times
  out.min_normalized = std::numeric_limits<double>::infinity();
  out.min_eta_ratio = std::numeric_limits<double>::infinity();
  out.min_eta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& rec = trace.records[k];
    const auto& s = rec.snapshot;
    if (k > 0) {
      const auto& prev = trace.records[k - 1].snapshot;
      integral += 0.5 * (prev.l2sq + s.l2sq) * (s.t - prev.t);
    }
    const double ts = s.t + sigma;
    const double f = integral + (t_horizon - s.t) * l0 + beta * ts * ts;
    const double fp = s.l2sq - l0 + 2.0 * beta * ts;
    const double fpp = -2.0 * s.n + 2.0 * beta;
    const double c = f * fpp - 1.5 * fp * fp;

    const double a = integral + beta * ts * ts;
    const double b = rec.dissipation + beta;
    const double cross_term = 0.5 * (s.l2sq - l0) + beta * ts;
    const double eta = a * b - cross_term * cross_term;

    out.t.push_back(s.t);
    out.f.push_back(f);
    out.f_prime.push_back(fp);
    out.f_second.push_back(fpp);
    out.defect.push_back(c);
    out.normalized.push_back(c / (f * f));
    out.eta.push_back(eta);
    out.eta_scale.push_back(a * b);
    out.min_normalized = std::min(out.min_normalized, c / (f * f));
    out.min_eta = std::min(out.min_eta, eta);
    out.min_eta_ratio = std::min(out.min_eta_ratio, eta / (a * b));
  }
  if (!out.cadence_ok) out.status = "active (record_every > 1: eta and F are approximate)";
  return out;
}

/// All monitors of one run.
struct MonitorReport {
  GronwallSeries gronwall;
  GrowthSeries growth;
  ConcavitySeries concavity;
};

inline MonitorReport build_monitor_report(const Trace& trace, const CriterionReport& crit,
                                          std::optional<ConcavityParams> params = std::nullopt) {
  MonitorReport m;
  m.gronwall = gronwall_monitor(trace, crit);
  m.growth = growth_monitor(trace, crit.e0);
  if (crit.li_satisfied) {
    const ConcavityParams p =
        params ? *params : default_concavity_params(crit, trace.records.back().snapshot.t);
    m.concavity = concavity_trajectory(trace, crit, p.t_horizon, p.beta, p.sigma);
  } else {
    m.concavity.status = "inactive: blow-up criterion not satisfied at t = 0";
  }
  return m;
}

}  // namespace hsflow
