#pragma once

// Uniform rectangular grid on (0,lx)x(0,ly) with an explicit boundary ring,
// node-valued fields, and the finite-difference operators used by the flow.

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hsflow/vec3.hpp"

namespace hsflow {

/// Geometry of the discretized rectangle. nx, ny count interior nodes only.
class GridSpec {
 public:
  GridSpec(std::size_t nx, std::size_t ny, double lx = 1.0, double ly = 1.0)
      : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 3 || ny < 3) {
      throw std::invalid_argument("GridSpec: nx and ny must be >= 3 (got " +
                                  std::to_string(nx) + "x" + std::to_string(ny) +
                                  ")");
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
      throw std::invalid_argument("GridSpec: side lengths must be positive and finite");
    }
    hx_ = lx_ / static_cast<double>(nx_ + 1);
    hy_ = ly_ / static_cast<double>(ny_ + 1);
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double cell_area() const { return hx_ * hy_; }

  /// Nodes per direction including the boundary ring.
  std::size_t sx() const { return nx_ + 2; }
  std::size_t sy() const { return ny_ + 2; }
  std::size_t node_count() const { return sx() * sy(); }

  double x(std::size_t i) const { return static_cast<double>(i) * hx_; }
  double y(std::size_t j) const { return static_cast<double>(j) * hy_; }

  bool is_boundary(std::size_t i, std::size_t j) const {
    return i == 0 || j == 0 || i == nx_ + 1 || j == ny_ + 1;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t nx_;
  std::size_t ny_;
  double lx_;
  double ly_;
  double hx_{};
  double hy_{};
};

/// Node values on the full (nx+2)x(ny+2) grid, stored row-major in (i, j)
/// with j (the y index) fastest.
template <typename T>
class GridField {
 public:
  using value_type = T;

  explicit GridField(const GridSpec& grid) : grid_(grid), values_(grid.node_count(), T{}) {}

  const GridSpec& grid() const { return grid_; }

  T& operator()(std::size_t i, std::size_t j) { return values_[i * grid_.sy() + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return values_[i * grid_.sy() + j];
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  /// Pins the boundary ring to zero.
  void clear_boundary() {
    const std::size_t sx = grid_.sx(), sy = grid_.sy();
    for (std::size_t i = 0; i < sx; ++i) {
      (*this)(i, 0) = T{};
      (*this)(i, sy - 1) = T{};
    }
    for (std::size_t j = 0; j < sy; ++j) {
      (*this)(0, j) = T{};
      (*this)(sx - 1, j) = T{};
    }
  }

  bool boundary_is_zero() const {
    const std::size_t sx = grid_.sx(), sy = grid_.sy();
    for (std::size_t i = 0; i < sx; ++i)
      for (std::size_t j = 0; j < sy; ++j)
        if (grid_.is_boundary(i, j) && !((*this)(i, j) == T{})) return false;
    return true;
  }

  bool all_finite() const {
    for (const T& v : values_)
      if (!is_finite(v)) return false;
    return true;
  }

  GridField& operator+=(const GridField& o) {
    check_same_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  GridField& operator-=(const GridField& o) {
    check_same_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  GridField& operator*=(double s) {
    for (T& v : values_) v *= s;
    return *this;
  }

  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(GridField a, double s) { return a *= s; }
  friend GridField operator*(double s, GridField a) { return a *= s; }

  void check_same_grid(const GridField& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("GridField: grid mismatch");
  }

 private:
  GridSpec grid_;
  std::vector<T> values_;
};

using Field3 = GridField<Vec3>;
using ScalarField = GridField<double>;

/// Fills a field from f(x, y) at interior nodes; the boundary ring stays zero.
template <typename T, typename Fn>
GridField<T> sample_interior(const GridSpec& grid, Fn&& f) {
  GridField<T> out(grid);
  for (std::size_t i = 1; i <= grid.nx(); ++i)
    for (std::size_t j = 1; j <= grid.ny(); ++j) out(i, j) = f(grid.x(i), grid.y(j));
  return out;
}

/// Fills every node, boundary ring included.
template <typename T, typename Fn>
GridField<T> sample_all(const GridSpec& grid, Fn&& f) {
  GridField<T> out(grid);
  for (std::size_t i = 0; i < grid.sx(); ++i)
    for (std::size_t j = 0; j < grid.sy(); ++j) out(i, j) = f(grid.x(i), grid.y(j));
  return out;
}

/// Centered differences at interior nodes; output boundary ring is zero.
template <typename T>
std::pair<GridField<T>, GridField<T>> gradient(const GridField<T>& u) {
  const GridSpec& g = u.grid();
  GridField<T> ux(g), uy(g);
  const double cx = 0.5 / g.hx(), cy = 0.5 / g.hy();
  for (std::size_t i = 1; i <= g.nx(); ++i) {
    for (std::size_t j = 1; j <= g.ny(); ++j) {
      ux(i, j) = (u(i + 1, j) - u(i - 1, j)) * cx;
      uy(i, j) = (u(i, j + 1) - u(i, j - 1)) * cy;
    }
  }
  return {std::move(ux), std::move(uy)};
}

/// Five-point Laplacian, componentwise; output boundary ring is zero.
template <typename T>
GridField<T> laplacian(const GridField<T>& u) {
  const GridSpec& g = u.grid();
  GridField<T> out(g);
  const double ax = 1.0 / (g.hx() * g.hx()), ay = 1.0 / (g.hy() * g.hy());
  for (std::size_t i = 1; i <= g.nx(); ++i) {
    for (std::size_t j = 1; j <= g.ny(); ++j) {
      const T c = u(i, j);
      out(i, j) = (u(i + 1, j) + u(i - 1, j) - 2.0 * c) * ax +
                  (u(i, j + 1) + u(i, j - 1) - 2.0 * c) * ay;
    }
  }
  return out;
}

/// Pointwise wedge product of two vector fields.
inline Field3 wedge(const Field3& a, const Field3& b) {
  a.check_same_grid(b);
  Field3 out(a.grid());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = cross(av[k], bv[k]);
  return out;
}

/// Composite trapezoid rule over the full grid. For integrands vanishing on
/// the boundary ring this is the interior node sum times hx*hy.
inline double integrate(const ScalarField& f) {
  const GridSpec& g = f.grid();
  const std::size_t sx = g.sx(), sy = g.sy();
  double sum = 0.0;
  for (std::size_t i = 0; i < sx; ++i) {
    const double wi = (i == 0 || i == sx - 1) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < sy; ++j) {
      const double wj = (j == 0 || j == sy - 1) ? 0.5 : 1.0;
      sum += wi * wj * f(i, j);
    }
  }
  return sum * g.cell_area();
}

/// Discrete L2 inner product (node sum times cell area).
template <typename T>
double inner(const GridField<T>& a, const GridField<T>& b) {
  a.check_same_grid(b);
  const GridSpec& g = a.grid();
  double sum = 0.0;
  for (std::size_t i = 1; i <= g.nx(); ++i)
    for (std::size_t j = 1; j <= g.ny(); ++j) sum += dot(a(i, j), b(i, j));
  return sum * g.cell_area();
}

template <typename T>
double l2_squared(const GridField<T>& u) {
  return inner(u, u);
}

/// Sum of |D+u|^2 hx hy over every grid edge. Equals -<laplacian(u), u>
/// exactly for zero-boundary fields.
template <typename T>
double forward_gradient_energy(const GridField<T>& u) {
  const GridSpec& g = u.grid();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i <= g.nx(); ++i)
    for (std::size_t j = 1; j <= g.ny(); ++j) {
      const T d = u(i + 1, j) - u(i, j);
      sx += dot(d, d);
    }
  for (std::size_t i = 1; i <= g.nx(); ++i)
    for (std::size_t j = 0; j <= g.ny(); ++j) {
      const T d = u(i, j + 1) - u(i, j);
      sy += dot(d, d);
    }
  return (sx / (g.hx() * g.hx()) + sy / (g.hy() * g.hy())) * g.cell_area();
}

/// ||grad u||_2^2 from centered differences at interior nodes. The boundary
/// strip is dropped, so it is only O(h) close to the forward form.
template <typename T>
double centered_gradient_energy(const GridField<T>& u) {
  auto [ux, uy] = gradient(u);
  return l2_squared(ux) + l2_squared(uy);
}

/// Max over nodes of the pointwise Euclidean norm.
template <typename T>
double sup_norm(const GridField<T>& u) {
  double m = 0.0;
  for (const T& v : u.values()) m = std::max(m, norm(v));
  return m;
}

/// Closed-form first eigenvalue of the five-point -Laplacian with Dirichlet data.
inline double discrete_lambda1(const GridSpec& g) {
  const double sx = std::sin(std::numbers::pi * g.hx() / (2.0 * g.lx()));
  const double sy = std::sin(std::numbers::pi * g.hy() / (2.0 * g.ly()));
  return 4.0 * sx * sx / (g.hx() * g.hx()) + 4.0 * sy * sy / (g.hy() * g.hy());
}

/// Continuum first Dirichlet eigenvalue of the rectangle.
inline double continuum_lambda1(const GridSpec& g) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  return pi2 * (1.0 / (g.lx() * g.lx()) + 1.0 / (g.ly() * g.ly()));
}

inline ScalarField component(const Field3& u, int c) {
  ScalarField out(u.grid());
  auto uv = u.values();
  auto ov = out.values();
  for (std::size_t k = 0; k < ov.size(); ++k)
    ov[k] = c == 0 ? uv[k].x : (c == 1 ? uv[k].y : uv[k].z);
  return out;
}

inline void set_component(Field3& u, int c, const ScalarField& s) {
  if (!(s.grid() == u.grid())) throw std::invalid_argument("set_component: grid mismatch");
  auto uv = u.values();
  auto sv = s.values();
  for (std::size_t k = 0; k < uv.size(); ++k) {
    if (c == 0)
      uv[k].x = sv[k];
    else if (c == 1)
      uv[k].y = sv[k];
    else
      uv[k].z = sv[k];
  }
}

}  // namespace hsflow
