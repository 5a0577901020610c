#include "launchopt/ocp0.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "launchopt/error.hpp"
#include "launchopt/integrator.hpp"
#include "support/oracles.hpp"

namespace launchopt {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
using testing::Sampler;

Eigen::Vector3d terminal_velocity(const Ocp0Problem& prob, const Ocp0Solution& sol) {
  return prob.v0 + (prob.a * sol.e_star + prob.g) * sol.t_f;
}

TEST(SolveOcp0, AlreadyAligned) {
  Ocp0Problem prob;
  prob.v0 = {0, 0, 100};
  prob.a = 18.0;
  const Ocp0Solution sol = solve_ocp0(prob);
  EXPECT_EQ(sol.t_f, 0.0);
  EXPECT_EQ(sol.a2, 0.0);
  EXPECT_EQ(sol.a3, 0.0);
  EXPECT_NEAR(sol.e_star.norm(), 1.0, 1e-12);
}

TEST(SolveOcp0, PerpendicularCancellation) {
  Ocp0Problem prob;
  prob.v0 = {100, 0, 0};
  prob.a = 18.0;
  const Ocp0Solution sol = solve_ocp0(prob);
  EXPECT_DOUBLE_EQ(sol.a1, 324.0);
  EXPECT_DOUBLE_EQ(sol.a2, 0.0);
  EXPECT_DOUBLE_EQ(sol.a3, -1e4);
  EXPECT_NEAR(sol.t_f, 100.0 / 18.0, 1e-12);
  EXPECT_LT((sol.e_star - Eigen::Vector3d(-1, 0, 0)).norm(), 1e-12);
  EXPECT_FALSE(sol.reversed);
}

TEST(SolveOcp0, GravityCaseAgainstGridOracle) {
  Ocp0Problem prob;
  prob.v0 = {200, 0, 50};
  prob.a = 25.0;
  prob.g = {-kStandardGravity, 0, 0};
  const Ocp0Solution sol = solve_ocp0(prob);
  ASSERT_GT(sol.t_f, 0.0);
  const Eigen::Vector3d vf = terminal_velocity(prob, sol);
  EXPECT_LT(vf.cross(prob.w).norm(), 1e-8 * vf.norm());
  EXPECT_GT(vf.dot(prob.w), 0.0);

  const auto r = testing::ocp0_grid_oracle(prob, sol.t_f - 1e-3);
  EXPECT_LT(r.earliest, 0.0) << "reached at " << r.earliest;
  // Just past t_f the reachable set does contain the ray.
  EXPECT_LE(testing::min_ray_distance(prob, sol.t_f), 1e-6);
}

TEST(SolveOcp0, PvNormalization) {
  Ocp0Problem prob;
  prob.v0 = {200, 0, 50};
  prob.a = 25.0;
  prob.g = {-kStandardGravity, 0, 0};
  const Ocp0Solution sol = solve_ocp0(prob);
  EXPECT_NEAR(sol.p_v.dot(prob.a * sol.e_star + prob.g), 1.0, 1e-12);
  EXPECT_LT(sol.p_v.cross(sol.e_star).norm(), 1e-15);
}

TEST(SolveOcp0, RandomInstancesSatisfyPostconditions) {
  Sampler s(101);
  int feasible = 0;
  for (int trial = 0; feasible < 1000 && trial < 20000; ++trial) {
    const Ocp0Problem prob = testing::random_ocp0(s);
    Ocp0Solution sol;
    try {
      sol = solve_ocp0(prob);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Infeasible);
      continue;
    }
    ++feasible;
    const double t = sol.t_f;
    const double q = sol.a1 * t * t + sol.a2 * t + sol.a3;
    const double scale = std::max({std::abs(sol.a1 * t * t), std::abs(sol.a2 * t), std::abs(sol.a3), 1e-300});
    EXPECT_LT(std::abs(q) / scale, 1e-9);
    EXPECT_LT(std::abs(sol.e_star.norm() - 1.0), 1e-10);
    const Eigen::Vector3d vf = terminal_velocity(prob, sol);
    EXPECT_LE(vf.cross(prob.w).norm(), 1e-8 * std::max(1.0, vf.norm()));
    EXPECT_GE(vf.dot(prob.w), 0.0);
  }
  EXPECT_EQ(feasible, 1000);
}

TEST(SolveOcp0, NoEarlierReachOnRandomInstances) {
  Sampler s(103);
  int checked = 0;
  while (checked < 20) {
    const Ocp0Problem prob = testing::random_ocp0(s);
    Ocp0Solution sol;
    try {
      sol = solve_ocp0(prob);
    } catch (const Error&) {
      continue;
    }
    if (sol.t_f < 5e-3 || sol.t_f > 60.0) continue;
    ++checked;
    const auto r = testing::ocp0_grid_oracle(prob, sol.t_f - 2e-3);
    EXPECT_LT(r.earliest, 0.0) << "t_f " << sol.t_f << " reached at " << r.earliest;
  }
}

TEST(SolveOcp0, EitherOrientationFallsBackToAntiparallel) {
  // Gravity drags the velocity down faster than thrust can turn it up:
  // only v(t_f) along -w is reachable.
  Ocp0Problem prob;
  prob.v0 = {-300, 0, 10};
  prob.w = {1, 0, 0};
  prob.a = 12.0;
  prob.g = {-kStandardGravity, 0, 0};
  try {
    solve_ocp0(prob);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Infeasible);
  }
  prob.orientation = Orientation::Either;
  const Ocp0Solution sol = solve_ocp0(prob);
  EXPECT_TRUE(sol.reversed);
  const Eigen::Vector3d vf = terminal_velocity(prob, sol);
  EXPECT_LT(vf.cross(prob.w).norm(), 1e-8 * vf.norm());
  EXPECT_LT(vf.dot(prob.w), 0.0);
}

TEST(SolveOcp0, EitherMatchesForwardWhenForwardExists) {
  Sampler s(105);
  for (int i = 0; i < 200; ++i) {
    Ocp0Problem prob = testing::random_ocp0(s);
    Ocp0Solution fwd;
    try {
      fwd = solve_ocp0(prob);
    } catch (const Error&) {
      continue;
    }
    prob.orientation = Orientation::Either;
    const Ocp0Solution either = solve_ocp0(prob);
    EXPECT_FALSE(either.reversed);
    EXPECT_EQ(either.t_f, fwd.t_f);
  }
}

TEST(SolveOcp0, Errors) {
  Ocp0Problem prob;
  prob.v0 = {100, 0, 0};
  prob.a = 0.0;
  EXPECT_THROW(solve_ocp0(prob), Error);
  prob.a = kStandardGravity;
  prob.g = {-kStandardGravity, 0, 0};
  try {
    solve_ocp0(prob);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateThrust);
  }
}

TEST(ExtractEuler, Examples) {
  EulerAngles e = extract_euler({0, 0, 1}, 0.0, 0.0);
  EXPECT_NEAR(e.theta, 0.0, 1e-15);
  EXPECT_NEAR(e.psi, 0.0, 1e-15);
  e = extract_euler({1, 0, 0}, 0.0, 0.0);
  EXPECT_NEAR(e.theta, kPi / 2.0, 1e-15);
  EXPECT_NEAR(e.psi, 0.0, 1e-15);
}

TEST(ExtractEuler, AlternateBranchNearHighYaw) {
  const Eigen::Vector3d estar(0.0, -0.95, std::sqrt(1.0 - 0.95 * 0.95));
  const double psi = 100.0 * kDeg;
  const EulerAngles e = extract_euler(estar, psi, psi);

  // Both candidate branches, scored independently.
  const double principal = std::asin(0.95);
  const double alternate = kPi - principal;
  ASSERT_LT(2.0 * std::abs(psi - alternate), 2.0 * std::abs(psi - principal));
  EXPECT_NEAR(e.psi, alternate, 1e-12);
  EXPECT_NEAR(e.psi / kDeg, 108.2, 0.05);
  EXPECT_LT((body_axis(e.theta, e.psi) - estar).norm(), 1e-10);
}

TEST(ExtractEuler, BothBranchesReproduceAxis) {
  Sampler s(107);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d e = s.unit_vector();
    const double psi0 = s.uniform(-kPi, kPi);
    const double psif = s.uniform(-kPi, kPi);
    const EulerAngles got = extract_euler(e, psi0, psif);
    EXPECT_LT((body_axis(got.theta, got.psi) - e).norm(), 1e-10);
    const double principal = std::asin(-e.y());
    const double alternate = wrap_angle(kPi - principal);
    const double cost = std::abs(psi0 - got.psi) + std::abs(psif - got.psi);
    EXPECT_LE(cost, std::abs(psi0 - principal) + std::abs(psif - principal) + 1e-12);
    EXPECT_LE(cost, std::abs(psi0 - alternate) + std::abs(psif - alternate) + 1e-12);
  }
}

class EmbedTest : public ::testing::Test {
 protected:
  void SetUp() override {
    prob.v0 = {200, 0, 50};
    prob.a = 25.0;
    prob.g = {-kStandardGravity, 0, 0};
    vp.a = prob.a;
    vp.b_bar = 0.02;
    vp.gravity = prob.g;
    sol = solve_ocp0(prob);
    pt = embed_in_mtcp(prob, sol);
  }

  Ocp0Problem prob;
  VehicleParams vp;
  Ocp0Solution sol;
  PhasePoint pt;
};

TEST_F(EmbedTest, AttitudeCostateBlockIsZero) {
  EXPECT_TRUE(pt.p.values.tail<5>().isZero(0.0));
  EXPECT_EQ(pt.x.values.tail<2>(), Eigen::Vector2d::Zero());
  EXPECT_EQ(pt.x.velocity(), prob.v0);
  EXPECT_EQ(pt.p.velocity(), sol.p_v);
  EXPECT_LT((body_axis(pt.x.theta(), pt.x.psi()) - sol.e_star).norm(), 1e-12);
}

TEST_F(EmbedTest, StationaryAttitudeBlock) {
  const HomotopyState h;
  const Control u = control_law(pt.p, vp, h);
  EXPECT_EQ(u.u1, 0.0);
  EXPECT_EQ(u.u2, 0.0);
  const FieldPair f = extremal_field(pt.x, pt.p, u, vp, 0.0);
  EXPECT_LT(f.state_rate.tail<5>().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(f.costate_rate.tail<5>().cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(EmbedTest, HamiltonianVanishes) {
  const HomotopyState h;
  EXPECT_NEAR(hamiltonian(pt.x, pt.p, Control{}, vp, h), 0.0, 1e-12);
}

TEST_F(EmbedTest, PropagationReachesTarget) {
  const HomotopyState h;
  const ExtremalPoint end = propagate_terminal(pt.x, pt.p, sol.t_f, vp, h);
  const Eigen::Vector3d vf = end.x.velocity();
  EXPECT_LT(vf.cross(prob.w).norm(), 1e-6 * vf.norm());
}

}  // namespace
}  // namespace launchopt
