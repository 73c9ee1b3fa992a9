#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "hsflow/grid.hpp"

namespace hsflow {

/// Raised when an inner linear solve does not reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CgResult {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Applies (shift*I - scale*laplacian) to a zero-boundary scalar field.
/// shift = 1, scale = dt gives the implicit heat operator; shift = 0,
/// scale = 1 gives -laplacian.
struct ShiftedLaplacian {
  double shift = 1.0;
  double scale = 1.0;

  void apply(const ScalarField& x, ScalarField& out) const {
    const GridSpec& g = x.grid();
    const double ax = scale / (g.hx() * g.hx()), ay = scale / (g.hy() * g.hy());
    const double diag = shift + 2.0 * ax + 2.0 * ay;
    for (std::size_t i = 1; i <= g.nx(); ++i)
      for (std::size_t j = 1; j <= g.ny(); ++j)
        out(i, j) = diag * x(i, j) - ax * (x(i + 1, j) + x(i - 1, j)) -
                    ay * (x(i, j + 1) + x(i, j - 1));
  }
};

/// Conjugate gradient on the interior unknowns. `x` holds the initial guess
/// on entry and the solution on exit. Stops once the residual 2-norm drops
/// below rel_tol * ||rhs||_2.
template <typename Operator>
CgResult conjugate_gradient(const Operator& op, const ScalarField& rhs, ScalarField& x,
                            double rel_tol, int max_iter) {
  const GridSpec& g = rhs.grid();
  x.check_same_grid(rhs);
  x.clear_boundary();

  auto interior_dot = [&g](const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t i = 1; i <= g.nx(); ++i)
      for (std::size_t j = 1; j <= g.ny(); ++j) s += a(i, j) * b(i, j);
    return s;
  };

  const double rhs_norm = std::sqrt(interior_dot(rhs, rhs));
  CgResult result;
  if (rhs_norm == 0.0) {
    x = ScalarField(g);
    result.converged = true;
    return result;
  }
  const double target = rel_tol * rhs_norm;

  ScalarField r(g), p(g), ap(g);
  op.apply(x, ap);
  for (std::size_t i = 1; i <= g.nx(); ++i)
    for (std::size_t j = 1; j <= g.ny(); ++j) r(i, j) = rhs(i, j) - ap(i, j);
  p = r;
  double rr = interior_dot(r, r);
  result.residual_norm = std::sqrt(rr);
  if (result.residual_norm <= target) {
    result.converged = true;
    return result;
  }

  for (int it = 1; it <= max_iter; ++it) {
    op.apply(p, ap);
    const double pap = interior_dot(p, ap);
    if (!(pap > 0.0)) break;  // breakdown; operator must be SPD
    const double alpha = rr / pap;
    for (std::size_t i = 1; i <= g.nx(); ++i)
      for (std::size_t j = 1; j <= g.ny(); ++j) {
        x(i, j) += alpha * p(i, j);
        r(i, j) -= alpha * ap(i, j);
      }
    const double rr_new = interior_dot(r, r);
    result.iterations = it;
    result.residual_norm = std::sqrt(rr_new);
    if (result.residual_norm <= target) {
      result.converged = true;
      return result;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 1; i <= g.nx(); ++i)
      for (std::size_t j = 1; j <= g.ny(); ++j) p(i, j) = r(i, j) + beta * p(i, j);
  }
  return result;
}

}  // namespace hsflow
