#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hsflow/grid.hpp"
#include "test_support.hpp"

namespace hsflow {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(GridSpec, SpacingsAndValidation) {
  GridSpec g(63, 31, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(g.hx(), 2.0 / 64);
  EXPECT_DOUBLE_EQ(g.hy(), 1.0 / 32);
  EXPECT_EQ(g.hx() * 64, 2.0);
  EXPECT_EQ(g.node_count(), 65u * 33u);
  EXPECT_THROW(GridSpec(2, 5), std::invalid_argument);
  EXPECT_THROW(GridSpec(5, 5, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(GridSpec(5, 5, 1.0, -1.0), std::invalid_argument);
}

TEST(GridField, BoundaryRing) {
  GridSpec g(5, 4);
  Field3 u(g);
  EXPECT_TRUE(u.boundary_is_zero());
  u(0, 2) = {1, 0, 0};
  EXPECT_FALSE(u.boundary_is_zero());
  u.clear_boundary();
  EXPECT_TRUE(u.boundary_is_zero());
  u(3, 3) = {std::nan(""), 0, 0};
  EXPECT_FALSE(u.all_finite());
}

TEST(Gradient, ZeroField) {
  GridSpec g(7, 7);
  auto [ux, uy] = gradient(Field3(g));
  EXPECT_EQ(sup_norm(ux), 0.0);
  EXPECT_EQ(sup_norm(uy), 0.0);
}

TEST(Gradient, ExactOnBilinearAwayFromBoundary) {
  GridSpec g(15, 11);
  Field3 u = sample_interior<Vec3>(g, [](double x, double y) { return Vec3{x * y, 0, 0}; });
  auto [ux, uy] = gradient(u);
  for (std::size_t i = 2; i < g.nx(); ++i)
    for (std::size_t j = 2; j < g.ny(); ++j) {
      EXPECT_NEAR(ux(i, j).x, g.y(j), 1e-12);
      EXPECT_NEAR(uy(i, j).x, g.x(i), 1e-12);
      EXPECT_EQ(ux(i, j).y, 0.0);
    }
  EXPECT_TRUE(ux.boundary_is_zero());
}

double gradient_error(std::size_t n) {
  GridSpec g(n, n);
  Field3 u = sample_interior<Vec3>(
      g, [](double x, double y) { return Vec3{std::sin(kPi * x) * std::sin(kPi * y), 0, 0}; });
  auto [ux, uy] = gradient(u);
  double err = 0.0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      err = std::max(err, std::abs(ux(i, j).x - kPi * std::cos(kPi * g.x(i)) *
                                                   std::sin(kPi * g.y(j))));
  return err;
}

TEST(Gradient, SecondOrderConvergence) {
  const double e1 = gradient_error(127);
  const double e2 = gradient_error(255);
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

TEST(Laplacian, DiscreteEigenfunction) {
  for (auto [nx, ny, lx, ly] : {std::tuple{31, 31, 1.0, 1.0}, std::tuple{40, 17, 2.0, 1.0}}) {
    GridSpec g(nx, ny, lx, ly);
    Field3 u = sample_interior<Vec3>(g, [&](double x, double y) {
      return Vec3{std::sin(kPi * x / lx) * std::sin(kPi * y / ly), 0, 0};
    });
    const double mu = discrete_lambda1(g);
    Field3 r = laplacian(u) + u * mu;
    EXPECT_LT(sup_norm(r), 1e-9 * mu);
  }
  GridSpec unit(127, 127);
  const double h = unit.hx();
  EXPECT_NEAR(discrete_lambda1(unit), 8.0 / (h * h) * std::pow(std::sin(kPi * h / 2), 2), 1e-12);
}

TEST(Laplacian, ZeroAndBoundary) {
  GridSpec g(9, 9);
  EXPECT_EQ(sup_norm(laplacian(Field3(g))), 0.0);
  std::mt19937_64 rng(3);
  EXPECT_TRUE(laplacian(testing::random_field(g, rng)).boundary_is_zero());
}

// Property: self-adjoint, negative definite, and -<Lu,u> is the D+ energy.
TEST(Laplacian, SymmetryDefinitenessSummationByParts) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    GridSpec g(5 + trial % 7, 4 + (trial * 3) % 9, 0.5 + trial * 0.1, 1.3);
    Field3 u = testing::random_field(g, rng);
    Field3 v = testing::random_field(g, rng);
    const double luv = inner(laplacian(u), v);
    const double ulv = inner(u, laplacian(v));
    EXPECT_NEAR(luv, ulv, 1e-11 * std::abs(luv) + 1e-11);
    const double luu = inner(laplacian(u), u);
    EXPECT_LT(luu, 0.0);
    EXPECT_NEAR(-luu, forward_gradient_energy(u), 1e-11 * std::abs(luu));
  }
}

// The centered form skips the half-cell boundary strip: first order.
TEST(Laplacian, CenteredEnergyConvergesToForwardEnergy) {
  auto gap = [](std::size_t n) {
    GridSpec g(n, n);
    Field3 u = sample_interior<Vec3>(g, [](double x, double y) {
      return Vec3{std::sin(kPi * x) * std::sin(kPi * y), std::sin(2 * kPi * x) * std::sin(kPi * y),
                  0.0};
    });
    return std::abs(centered_gradient_energy(u) - forward_gradient_energy(u));
  };
  const double a = gap(63), b = gap(127);
  EXPECT_GT(a / b, 1.8);
  EXPECT_LT(a / b, 2.2);
}

TEST(Wedge, Examples) {
  EXPECT_EQ(cross({1, 0, 0}, {0, 1, 0}), (Vec3{0, 0, 1}));
  EXPECT_EQ(cross({1.5, -2, 3}, {1.5, -2, 3}), (Vec3{0, 0, 0}));
  EXPECT_EQ(cross({1, 2, 3}, {4, 5, 6}), (Vec3{-3, 6, -3}));
}

TEST(Wedge, BilinearAntisymmetricOrthogonal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2, 2);
  auto rv = [&] { return Vec3{d(rng), d(rng), d(rng)}; };
  for (int k = 0; k < 200; ++k) {
    const Vec3 a = rv(), b = rv(), c = rv();
    const double s = d(rng);
    const Vec3 lhs = cross(a * s + c, b);
    const Vec3 rhs = cross(a, b) * s + cross(c, b);
    EXPECT_NEAR(norm(lhs - rhs), 0.0, 1e-13);
    EXPECT_NEAR(norm(cross(a, b) + cross(b, a)), 0.0, 1e-15);
    EXPECT_NEAR(dot(a, cross(a, b)), 0.0, 1e-13);
  }
}

TEST(Wedge, Pointwise) {
  GridSpec g(4, 4);
  Field3 a(g), b(g);
  a(2, 2) = {1, 0, 0};
  b(2, 2) = {0, 1, 0};
  EXPECT_EQ(wedge(a, b)(2, 2), (Vec3{0, 0, 1}));
}

TEST(Integrate, Examples) {
  GridSpec g(63, 63);
  EXPECT_EQ(integrate(ScalarField(g)), 0.0);
  auto s2 = sample_all<double>(g, [](double x, double y) {
    return std::pow(std::sin(kPi * x) * std::sin(kPi * y), 2);
  });
  EXPECT_NEAR(integrate(s2), 0.25, 1e-10);

  // Boundary samples enter the rule: x*y is nonzero on two sides.
  auto err = [](std::size_t n) {
    GridSpec gg(n, n);
    return std::abs(integrate(sample_all<double>(gg, [](double x, double y) { return x * y; })) -
                    0.25);
  };
  EXPECT_LT(err(31), 1e-12);
  // A non-polynomial integrand to see the O(h^2) rate of the rule.
  auto err_exp = [](std::size_t n) {
    GridSpec gg(n, n);
    const double exact = std::pow(std::exp(1.0) - 1.0, 2);
    return std::abs(integrate(sample_all<double>(
                        gg, [](double x, double y) { return std::exp(x + y); })) -
                    exact);
  };
  EXPECT_NEAR(err_exp(31) / err_exp(63), 4.0, 0.1);
}

TEST(Norms, SupNormIsPointwiseEuclidean) {
  GridSpec g(4, 4);
  Field3 u(g);
  u(1, 1) = {3, 4, 0};
  u(2, 3) = {-1, -1, -1};
  EXPECT_DOUBLE_EQ(sup_norm(u), 5.0);
}

}  // namespace
}  // namespace hsflow
