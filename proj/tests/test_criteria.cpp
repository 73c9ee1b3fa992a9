#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hsflow/criteria.hpp"
#include "hsflow/initial_data.hpp"

namespace hsflow {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Criterion, ZeroDataIsDegenerate) {
  GridSpec g(15, 15);
  const CriterionReport r = check_criterion(Field3(g), 1.0, discrete_lambda1(g));
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.li_satisfied);
  EXPECT_FALSE(r.t_bound.has_value());
  EXPECT_FALSE(r.huang_satisfied);
}

TEST(Criterion, Thresholds) {
  GridSpec g(15, 15);
  const CriterionReport r = check_criterion(Field3(g), -2.0, 10.0);
  EXPECT_NEAR(r.huang_e_threshold, 4 * kPi / 12, 1e-15);
  EXPECT_NEAR(r.huang_v_threshold, 4 * kPi / 8, 1e-15);
  EXPECT_EQ(r.lambda1_used, 10.0);
  EXPECT_THROW(check_criterion(Field3(g), 0.0, 10.0), std::invalid_argument);
  EXPECT_THROW(check_criterion(Field3(g), 1.0, 0.0), std::invalid_argument);
}

// Without a volume term E >= (lambda1/2)||u||^2 > (lambda1/6)||u||^2.
TEST(Criterion, BoundAndThresholdHandValues) {
  EXPECT_NEAR(*blowup_time_bound(1.0, 0.0, 2 * kPi * kPi), 16 / (2 * kPi * kPi), 1e-15);
  EXPECT_NEAR(*blowup_time_bound(1.0, 0.0, 2 * kPi * kPi), 0.81057, 1e-5);
  EXPECT_FALSE(blowup_time_bound(1.0, 10.0, 2 * kPi * kPi).has_value());
  EXPECT_FALSE(blowup_time_bound(0.0, -1.0, 2 * kPi * kPi).has_value());
  GridSpec g(15, 15);
  const CriterionReport r = check_criterion(Field3(g), 2.0, 1.0);
  EXPECT_NEAR(r.huang_e_threshold, 1.04720, 1e-5);
  EXPECT_NEAR(r.huang_v_threshold, 1.57080, 1e-5);
}

TEST(Criterion, PoincareExcludesZeroVolumeData) {
  GridSpec g(31, 31);
  for (double a : {0.1, 1.0, 100.0}) {
    const CriterionReport r =
        check_criterion(mode_field(g, {{1, 1, {0.0, a, 0.0}}}), 1.0, discrete_lambda1(g));
    EXPECT_FALSE(r.li_satisfied);
    EXPECT_LT(r.gap, 0.0);
    EXPECT_NEAR(r.gap, -2 * discrete_lambda1(g) * r.l2sq0, 1e-9 * r.l2sq0 * discrete_lambda1(g));
  }
}

TEST(Criterion, BoundFormula) {
  GridSpec g(63, 63);
  Field3 phi = mode_field(g, three_mode_fixture());
  const double lam = discrete_lambda1(g);
  const AmplitudeResult a = amplitude_for_criterion(phi, -1.0, lam);
  const CriterionReport r = check_criterion(phi * a.amplitude, -1.0, lam);
  ASSERT_TRUE(r.li_satisfied);
  EXPECT_NEAR(*r.t_bound, 16 * r.l2sq0 / (lam * r.l2sq0 - 6 * r.e0), 1e-14);
  EXPECT_NEAR(r.e0, -10.72, 0.01);
  EXPECT_NEAR(r.l2sq0, 13.07, 0.01);
  EXPECT_NEAR(*r.t_bound, 0.6489, 1e-3);
}

struct Fixture {
  Field3 u;
  double h0;
};

Fixture li_not_huang() {
  GridSpec g(63, 63);
  return {mode_field(g, scaled(three_mode_fixture(), 3.5)), -1.0};
}

Fixture huang_not_li() {
  GridSpec g(63, 63);
  // V(bubble) < 0, so H0 > 0 points the flow towards blow-up.
  return {mode_field(g, localized_mode_coeffs(8, 0.1, 0.5, 0.5)) * 1.64, 1.0};
}

TEST(Criterion, IndependenceLiWithoutHuang) {
  const Fixture f = li_not_huang();
  const CriterionReport r = check_criterion(f.u, f.h0, discrete_lambda1(f.u.grid()));
  EXPECT_TRUE(r.li_satisfied);
  EXPECT_FALSE(r.huang_satisfied);
  EXPECT_GT(r.e0, r.huang_e_threshold);
}

TEST(Criterion, IndependenceHuangWithoutLi) {
  const Fixture f = huang_not_li();
  const CriterionReport r = check_criterion(f.u, f.h0, discrete_lambda1(f.u.grid()));
  EXPECT_FALSE(r.li_satisfied);
  EXPECT_TRUE(r.huang_satisfied);
  EXPECT_GT(r.e0, 0.0);
  EXPECT_GT(std::abs(r.v0), r.huang_v_threshold);
}

TEST(Criterion, BothAndNeither) {
  GridSpec g(63, 63);
  const double lam = discrete_lambda1(g);
  const CriterionReport both =
      check_criterion(mode_field(g, scaled(three_mode_fixture(), 6.0)), -1.0, lam);
  EXPECT_TRUE(both.li_satisfied);
  EXPECT_TRUE(both.huang_satisfied);
  EXPECT_LT(both.e0, 0.0);
  const CriterionReport neither =
      check_criterion(mode_field(g, scaled(three_mode_fixture(), 1.0)), -1.0, lam);
  EXPECT_FALSE(neither.li_satisfied);
  EXPECT_FALSE(neither.huang_satisfied);
}

Trace synthetic_trace(std::vector<EnergySnapshot> snaps, std::vector<double> diss) {
  Trace t;
  for (std::size_t k = 0; k < snaps.size(); ++k) t.records.push_back({snaps[k], diss[k], 0.1});
  t.dissipation = diss.back();
  return t;
}

TEST(Monitors, InactiveWithoutCriterion) {
  GridSpec g(15, 15);
  CriterionReport crit = check_criterion(mode_field(g, {{1, 1, {1.0, 0.0, 0.0}}}), 1.0,
                                         discrete_lambda1(g));
  Trace t = synthetic_trace({{0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 1.0}}, {0.0});
  const MonitorReport m = build_monitor_report(t, crit);
  EXPECT_FALSE(m.gronwall.active);
  EXPECT_TRUE(m.gronwall.t.empty());
  EXPECT_FALSE(m.concavity.active);
  EXPECT_NE(m.gronwall.status.find("not satisfied"), std::string::npos);
  EXPECT_TRUE(m.growth.active);
}

TEST(Monitors, GronwallHandValues) {
  CriterionReport crit;
  crit.li_satisfied = true;
  crit.lambda1_used = 2.0;
  crit.e0 = -1.0;
  crit.l2sq0 = 1.0;
  crit.gap = 8.0;
  // base = 1 + 3 = 4; at t = 0.5 rhs = 4 e
  Trace t = synthetic_trace({{0.0, -1.0, 0, 0, 1.0, 0, 0}, {0.5, -2.0, 0, 0, 5.0, 0, 0}},
                            {0.0, 1.0});
  const GronwallSeries s = gronwall_monitor(t, crit);
  ASSERT_EQ(s.t.size(), 2u);
  EXPECT_NEAR(s.defect[0], 0.0, 1e-15);
  EXPECT_NEAR(s.lhs[1], 11.0, 1e-15);
  EXPECT_NEAR(s.rhs[1], 4.0 * std::exp(1.0), 1e-14);
  EXPECT_NEAR(s.normalized[1], (11.0 - 4 * std::exp(1.0)) / (4 * std::exp(1.0)), 1e-14);
}

TEST(Monitors, GrowthStopsWhenEnergyTurnsNegative) {
  Trace t = synthetic_trace({{0.0, 4.0, 0, 0, 1.0, 0, 0},
                             {1.0, 1.0, 0, 0, 4.0, 0, 0},
                             {2.0, -1.0, 0, 0, 9.0, 0, 0}},
                            {0.0, 1.0, 2.0});
  const GrowthSeries s = growth_monitor(t, 4.0);
  EXPECT_TRUE(s.active);
  ASSERT_EQ(s.t.size(), 2u);
  EXPECT_NEAR(s.defect[1], 1.0 + 2.0 - 2.0, 1e-15);
  EXPECT_NE(s.status.find("negative"), std::string::npos);
  Trace neg = synthetic_trace({{0.0, -1.0, 0, 0, 1.0, 0, 0}}, {0.0});
  EXPECT_FALSE(growth_monitor(neg, -1.0).active);
}

TEST(Monitors, GrowthPositiveAlongLinearDecay) {
  GridSpec g(31, 31);
  Field3 u0 = mode_field(g, {{1, 1, {0.0, 0.0, 0.5}}});
  StepperConfig cfg;
  cfg.dt0 = 1e-3;
  cfg.t_max = 0.1;
  const RunResult r = run(u0, 1.0, cfg);
  const GrowthSeries s = growth_monitor(r.trace, r.trace.front().e);
  ASSERT_TRUE(s.active);
  EXPECT_EQ(s.t.size(), r.trace.size());
  EXPECT_EQ(s.defect.front(), 0.0);
  for (std::size_t k = 1; k < s.t.size(); ++k) EXPECT_GT(s.defect[k], 0.0);
}

TEST(Monitors, ConcavityHandValuesAndParameterChecks) {
  CriterionReport crit;
  crit.li_satisfied = true;
  crit.lambda1_used = 2.0;
  crit.l2sq0 = 1.0;
  crit.gap = 8.0;
  Trace t = synthetic_trace({{0.0, 0, -1.0, 0, 1.0, 0, 0}, {1.0, 0, -3.0, 0, 3.0, 0, 0}},
                            {0.0, 4.0});
  t.record_every = 1;
  const ConcavitySeries s = concavity_trajectory(t, crit, 2.0, 2.0, 1.0);
  ASSERT_EQ(s.t.size(), 2u);
  // t = 1: integral = 2, F = 2 + 1 + 2*4 = 11, F' = 2 + 8 = 10, F'' = 6 + 4 = 10
  EXPECT_NEAR(s.f[1], 11.0, 1e-14);
  EXPECT_NEAR(s.f_prime[1], 10.0, 1e-14);
  EXPECT_NEAR(s.f_second[1], 10.0, 1e-14);
  EXPECT_NEAR(s.defect[1], 110.0 - 150.0, 1e-12);
  // eta = (2 + 8)(4 + 2) - (1 + 4)^2
  EXPECT_NEAR(s.eta[1], 35.0, 1e-12);
  EXPECT_TRUE(s.cadence_ok);
  EXPECT_THROW(concavity_trajectory(t, crit, 2.0, 2.5, 1.0), std::invalid_argument);
  EXPECT_THROW(concavity_trajectory(t, crit, 2.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(concavity_trajectory(t, crit, 2.0, 1.0, 0.0), std::invalid_argument);
  t.record_every = 3;
  EXPECT_FALSE(concavity_trajectory(t, crit, 2.0, 2.0, 1.0).cadence_ok);
}

TEST(Monitors, DefaultParametersAndBound) {
  CriterionReport crit;
  crit.li_satisfied = true;
  crit.l2sq0 = 2.0;
  crit.gap = 8.0;
  const ConcavityParams p = default_concavity_params(crit, 1.5);
  EXPECT_EQ(p.beta, 2.0);
  EXPECT_EQ(p.sigma, 2.0);
  EXPECT_EQ(p.t_horizon, 1.5);
  // beta sigma^2 / (beta sigma - l2sq0) = 8 / 2, which is 16 l2sq0 / gap
  EXPECT_NEAR(*concavity_time_bound(2.0, p.beta, p.sigma), 16 * 2.0 / 8.0, 1e-15);
  EXPECT_FALSE(concavity_time_bound(2.0, 1.0, 1.0).has_value());
  crit.li_satisfied = false;
  EXPECT_THROW(default_concavity_params(crit, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace hsflow
