#pragma once

// Scalar functionals of a discrete map u: the volume term, potential energy,
// Nehari functional, norms, the first Dirichlet eigenvalue and the residual
// of the stationary H-surface equation.

#include <cmath>
#include <stdexcept>
#include <string>

#include "hsflow/grid.hpp"
#include "hsflow/linear_solve.hpp"

namespace hsflow {

/// Raised by diagnostics that fail to converge (eigenvalue iteration).
class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One time instant of the functionals. `gradsq` is the forward-difference
/// Dirichlet energy, so e and n are exact algebraic combinations of gradsq
/// and v.
struct EnergySnapshot {
  double t = 0.0;
  double e = 0.0;
  double n = 0.0;
  double v = 0.0;
  double l2sq = 0.0;
  double gradsq = 0.0;
  double supnorm = 0.0;
};

inline void require_nonzero_h0(double h0) {
  if (h0 == 0.0 || !std::isfinite(h0))
    throw std::invalid_argument("mean curvature H0 must be finite and nonzero");
}

/// V(u) = integral of u . (u_x ^ u_y), centered gradients.
inline double volume(const Field3& u) {
  auto [ux, uy] = gradient(u);
  const GridSpec& g = u.grid();
  double sum = 0.0;
  for (std::size_t i = 1; i <= g.nx(); ++i)
    for (std::size_t j = 1; j <= g.ny(); ++j) sum += dot(u(i, j), cross(ux(i, j), uy(i, j)));
  return sum * g.cell_area();
}

/// ||grad u||_2^2 in the form that satisfies summation by parts exactly.
inline double dirichlet_energy(const Field3& u) { return forward_gradient_energy(u); }

inline double energy_from_parts(double gradsq, double v, double h0) {
  return 0.5 * gradsq + (2.0 * h0 / 3.0) * v;
}
inline double nehari_from_parts(double gradsq, double v, double h0) {
  return gradsq + 2.0 * h0 * v;
}

inline double energy(const Field3& u, double h0) {
  require_nonzero_h0(h0);
  return energy_from_parts(dirichlet_energy(u), volume(u), h0);
}

inline double nehari(const Field3& u, double h0) {
  require_nonzero_h0(h0);
  return nehari_from_parts(dirichlet_energy(u), volume(u), h0);
}

inline EnergySnapshot take_snapshot(const Field3& u, double h0, double t) {
  require_nonzero_h0(h0);
  EnergySnapshot s;
  s.t = t;
  s.gradsq = dirichlet_energy(u);
  s.v = volume(u);
  s.e = energy_from_parts(s.gradsq, s.v, h0);
  s.n = nehari_from_parts(s.gradsq, s.v, h0);
  s.l2sq = l2_squared(u);
  s.supnorm = sup_norm(u);
  return s;
}

enum class Lambda1Method { analytic, discrete, power_iteration };

struct PowerIterationOptions {
  double tol = 1e-10;       // on relative eigenvalue increments
  int max_outer = 500;
  double inner_tol = 1e-13;
  int inner_max_iter = 20000;
};

/// Inverse iteration for the smallest eigenvalue of the five-point -Laplacian.
inline double lambda1_power_iteration(const GridSpec& g, const PowerIterationOptions& opt = {}) {
  const ShiftedLaplacian neg_lap{0.0, 1.0};
  ScalarField x(g);
  for (std::size_t i = 1; i <= g.nx(); ++i)
    for (std::size_t j = 1; j <= g.ny(); ++j) x(i, j) = 1.0;

  auto rayleigh = [&](const ScalarField& v) {
    ScalarField av(g);
    neg_lap.apply(v, av);
    return inner(v, av) / inner(v, v);
  };

  double mu = rayleigh(x);
  for (int k = 1; k <= opt.max_outer; ++k) {
    // Warm start: y ~ x / mu is the converged answer.
    ScalarField y = x * (1.0 / mu);
    const CgResult cg = conjugate_gradient(neg_lap, x, y, opt.inner_tol, opt.inner_max_iter);
    if (!cg.converged)
      throw DiagnosticsError("lambda1: inner CG solve failed at outer iteration " +
                             std::to_string(k));
    y *= 1.0 / std::sqrt(l2_squared(y));
    const double mu_new = rayleigh(y);
    x = std::move(y);
    if (std::abs(mu_new - mu) <= opt.tol * std::abs(mu_new)) return mu_new;
    mu = mu_new;
  }
  throw DiagnosticsError("lambda1: inverse iteration did not converge in " +
                         std::to_string(opt.max_outer) + " iterations");
}

inline double lambda1(const GridSpec& g, Lambda1Method method,
                      const PowerIterationOptions& opt = {}) {
  switch (method) {
    case Lambda1Method::analytic:
      return continuum_lambda1(g);
    case Lambda1Method::discrete:
      return discrete_lambda1(g);
    case Lambda1Method::power_iteration:
      return lambda1_power_iteration(g, opt);
  }
  throw std::invalid_argument("lambda1: unknown method");
}

/// ||laplacian(u) - 2 h0 u_x ^ u_y||_2; zero at discrete equilibria.
inline double hsurface_residual(const Field3& u, double h0) {
  auto [ux, uy] = gradient(u);
  Field3 r = laplacian(u) - wedge(ux, uy) * (2.0 * h0);
  return std::sqrt(l2_squared(r));
}

}  // namespace hsflow
