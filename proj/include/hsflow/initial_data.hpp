#pragma once

// Initial fields built from sine modes, and the amplitude along a ray a*phi
// at which the blow-up criterion E(a phi) < (lambda1/6)||a phi||^2 switches on.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hsflow/functionals.hpp"
#include "hsflow/grid.hpp"

namespace hsflow {

struct ModeTerm {
  int kx = 1;
  int ky = 1;
  Vec3 coeff;
};

/// u(x,y) = sum_k c_k sin(kx pi x / lx) sin(ky pi y / ly).
inline Field3 mode_field(const GridSpec& g, const std::vector<ModeTerm>& modes) {
  for (const auto& m : modes)
    if (m.kx < 1 || m.ky < 1)
      throw std::invalid_argument("mode_field: mode indices must be >= 1");
  const double pi = std::numbers::pi;
  Field3 u(g);
  for (const auto& m : modes) {
    std::vector<double> sx(g.sx()), sy(g.sy());
    for (std::size_t i = 1; i <= g.nx(); ++i) sx[i] = std::sin(m.kx * pi * g.x(i) / g.lx());
    for (std::size_t j = 1; j <= g.ny(); ++j) sy[j] = std::sin(m.ky * pi * g.y(j) / g.ly());
    for (std::size_t i = 1; i <= g.nx(); ++i)
      for (std::size_t j = 1; j <= g.ny(); ++j) u(i, j) += m.coeff * (sx[i] * sy[j]);
  }
  return u;
}

inline std::vector<ModeTerm> scaled(std::vector<ModeTerm> modes, double a) {
  for (auto& m : modes) m.coeff *= a;
  return modes;
}

/// Three-mode field with a nonzero volume term, used throughout the tests.
inline std::vector<ModeTerm> three_mode_fixture() {
  return {{1, 1, {1.0, 0.0, 0.0}}, {2, 1, {0.0, 1.0, 0.0}}, {1, 2, {0.0, 0.0, 1.0}}};
}

/// Sine coefficients (kx, ky <= kmax) of a stereographic bubble of width
/// `scale` centred at (cx, cy), shifted to vanish at infinity and multiplied
/// by the first Dirichlet eigenfunction. Coefficients come from midpoint
/// quadrature with `quad_n` points per direction.
inline std::vector<ModeTerm> localized_mode_coeffs(int kmax, double scale, double cx, double cy,
                                                   double lx = 1.0, double ly = 1.0,
                                                   int quad_n = 256) {
  if (kmax < 1 || !(scale > 0.0) || quad_n < 2 * kmax)
    throw std::invalid_argument("localized_mode_coeffs: invalid parameters");
  const double pi = std::numbers::pi;
  const double dx = lx / quad_n, dy = ly / quad_n;
  std::vector<Vec3> profile(static_cast<std::size_t>(quad_n) * quad_n);
  for (int i = 0; i < quad_n; ++i) {
    const double x = (i + 0.5) * dx;
    for (int j = 0; j < quad_n; ++j) {
      const double y = (j + 0.5) * dy;
      const double zx = (x - cx) / scale, zy = (y - cy) / scale;
      const double cut = std::sin(pi * x / lx) * std::sin(pi * y / ly);
      const double w = 2.0 * cut / (1.0 + zx * zx + zy * zy);
      profile[static_cast<std::size_t>(i) * quad_n + j] = {w * zx, w * zy, -w};
    }
  }
  std::vector<ModeTerm> out;
  const double norm = 4.0 / (lx * ly) * dx * dy;
  for (int kx = 1; kx <= kmax; ++kx) {
    std::vector<double> sx(quad_n);
    for (int i = 0; i < quad_n; ++i) sx[i] = std::sin(kx * pi * (i + 0.5) * dx / lx);
    for (int ky = 1; ky <= kmax; ++ky) {
      Vec3 c;
      for (int j = 0; j < quad_n; ++j) {
        const double syj = std::sin(ky * pi * (j + 0.5) * dy / ly);
        for (int i = 0; i < quad_n; ++i)
          c += profile[static_cast<std::size_t>(i) * quad_n + j] * (sx[i] * syj);
      }
      out.push_back({kx, ky, c * norm});
    }
  }
  return out;
}

struct AmplitudeResult {
  double amplitude = 0.0;  // margin * a_star
  double a_star = 0.0;     // threshold amplitude
  bool holds_for_all_positive = false;
  double dirichlet = 0.0;  // ||grad phi||^2
  double l2sq = 0.0;       // ||phi||^2
  double volume = 0.0;     // V(phi)
};

/// Smallest amplitude a* such that a*phi satisfies the blow-up criterion for
/// every a > a*, scaled by `margin`. Requires h0 * V(phi) < 0.
inline AmplitudeResult amplitude_for_criterion(const Field3& phi, double h0, double lambda1,
                                               double margin = 1.25) {
  require_nonzero_h0(h0);
  if (!(margin > 1.0)) throw std::invalid_argument("amplitude_for_criterion: margin must be > 1");
  if (!(lambda1 > 0.0)) throw std::invalid_argument("amplitude_for_criterion: lambda1 must be > 0");
  AmplitudeResult r;
  r.dirichlet = dirichlet_energy(phi);
  r.l2sq = l2_squared(phi);
  r.volume = volume(phi);
  if (r.volume == 0.0 || h0 * r.volume >= 0.0)
    throw std::domain_error(
        "amplitude_for_criterion: no blow-up ray (need h0 * V(phi) < 0, got V = " +
        std::to_string(r.volume) + ")");
  const double numer = 3.0 * r.dirichlet - lambda1 * r.l2sq;
  r.a_star = numer / (-4.0 * h0 * r.volume);
  if (numer < 0.0) {
    r.holds_for_all_positive = true;
    r.amplitude = margin;
  } else {
    r.amplitude = margin * r.a_star;
  }
  return r;
}

}  // namespace hsflow
