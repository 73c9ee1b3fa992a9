#pragma once

// Sampled check of psi'' psi - (1 + theta) psi'^2 >= 0 and of the blow-up
// time bound psi(0) / (theta psi'(0)) it implies when psi(0), psi'(0) > 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hsflow {

struct ConcavitySample {
  std::vector<double> times;
  std::vector<double> psi;
  double theta = 1.0;

  void validate() const {
    if (times.size() != psi.size())
      throw std::invalid_argument("ConcavitySample: times and psi differ in length");
    if (times.size() < 3) throw std::invalid_argument("ConcavitySample: need at least 3 samples");
    if (!(theta > 0.0)) throw std::invalid_argument("ConcavitySample: theta must be > 0");
    for (std::size_t k = 0; k < psi.size(); ++k) {
      if (!(psi[k] > 0.0) || !std::isfinite(psi[k]))
        throw std::invalid_argument("ConcavitySample: psi must be positive and finite");
      if (k > 0 && !(times[k] > times[k - 1]))
        throw std::invalid_argument("ConcavitySample: times must be strictly increasing");
    }
  }
};

/// Finite-difference weights for derivatives 0..max_deriv at z on the given
/// nodes (Fornberg's recursion). weights[m][j] multiplies f(nodes[j]).
inline std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes,
                                                   int max_deriv) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(max_deriv + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

struct ConcavityResult {
  double min_defect = 0.0;           // min over judged samples of psi psi'' - (1+theta) psi'^2
  double min_relative_defect = 0.0;  // defect / (psi |psi''| + (1+theta) psi'^2)
  double psi_prime0 = 0.0;
  std::optional<double> bound;       // psi(0) / (theta psi'(0)) when psi'(0) > 0
  bool hypothesis_ok = false;
  std::size_t judged = 0;            // samples entering the minimum
};

struct ConcavityOptions {
  int stencil = 5;               // points per derivative stencil (odd, >= 3)
  double relative_tol = 1e-6;    // allowed relative defect before the hypothesis fails
};

inline ConcavityResult check_concavity(const ConcavitySample& s, const ConcavityOptions& opt = {}) {
  s.validate();
  if (opt.stencil < 3 || opt.stencil % 2 == 0)
    throw std::invalid_argument("check_concavity: stencil must be odd and >= 3");
  const std::size_t n = s.times.size();
  const std::size_t half = static_cast<std::size_t>(opt.stencil / 2);
  // Shrink the stencil on short samples; three points is the floor.
  const std::size_t h = std::max<std::size_t>(1, std::min(half, (n - 1) / 2));
  const std::size_t width = 2 * h + 1;

  ConcavityResult r;
  r.min_defect = std::numeric_limits<double>::infinity();
  r.min_relative_defect = std::numeric_limits<double>::infinity();
  for (std::size_t k = h; k + h < n; ++k) {
    std::span<const double> nodes(s.times.data() + (k - h), width);
    const auto w = fd_weights(s.times[k], nodes, 2);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      d1 += w[1][j] * s.psi[k - h + j];
      d2 += w[2][j] * s.psi[k - h + j];
    }
    const double a = s.psi[k] * d2;
    const double b = (1.0 + s.theta) * d1 * d1;
    const double defect = a - b;
    const double scale = std::abs(a) + b;
    r.min_defect = std::min(r.min_defect, defect);
    r.min_relative_defect = std::min(r.min_relative_defect, scale > 0.0 ? defect / scale : 0.0);
    ++r.judged;
  }

  const std::size_t w0 = std::min(n, width);
  const auto w = fd_weights(s.times[0], std::span<const double>(s.times.data(), w0), 1);
  for (std::size_t j = 0; j < w0; ++j) r.psi_prime0 += w[1][j] * s.psi[j];

  if (r.psi_prime0 > 0.0) r.bound = s.psi[0] / (s.theta * r.psi_prime0);
  r.hypothesis_ok = r.psi_prime0 > 0.0 && r.min_relative_defect >= -opt.relative_tol;
  return r;
}

}  // namespace hsflow
