#include "launchopt/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "launchopt/error.hpp"

namespace launchopt {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string parse_error(const std::string& text) {
  try {
    parse_config_text(text, "test.cfg");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    return e.what();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return {};
}

TEST(LauncherPreset, TableValues) {
  const LauncherConfig l = launcher_preset("ariane-launch");
  EXPECT_EQ(l.vehicle.a, 18.0);
  EXPECT_EQ(l.vehicle.b_bar, 0.0138);
  EXPECT_FALSE(l.vehicle.has_aerodynamics());
  const LauncherConfig f = launcher_preset("ariane-flight");
  EXPECT_EQ(f.vehicle.a, 25.0);
  EXPECT_EQ(f.vehicle.b_bar, 0.0158);
  const LauncherConfig p = launcher_preset("pegasus");
  EXPECT_EQ(p.vehicle.a, 24.873);
  EXPECT_EQ(p.vehicle.b_bar, 0.0607);
  EXPECT_EQ(p.vehicle.cx, 5e-6);
  EXPECT_EQ(p.vehicle.cz, 5e-6);
  EXPECT_EQ(p.vehicle.gravity, Eigen::Vector3d(-kStandardGravity, 0, 0));
  EXPECT_THROW(launcher_preset("saturn"), Error);
}

TEST(MakeCase, DegreesToRadians) {
  CaseParameters p;
  p.v0 = 2000.0;
  p.theta_v0 = 38.0;
  p.theta0 = 38.0;
  p.theta_f = 40.0;
  p.omega_x0 = 2.0;
  const CaseSpec c = make_case(p);
  EXPECT_NEAR(c.initial.velocity().norm(), 2000.0, 1e-9);
  EXPECT_LT((c.initial.velocity().normalized() - body_axis(38.0 * kDeg, 0.0)).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(c.initial.theta(), 38.0 * kDeg);
  EXPECT_DOUBLE_EQ(c.initial.omega_x(), 2.0 * kDeg);
  EXPECT_DOUBLE_EQ(c.target.theta, 40.0 * kDeg);
  EXPECT_FALSE(c.natural.has_value());
}

TEST(ParseGrid, Forms) {
  EXPECT_EQ(parse_grid("1:3:1"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(parse_grid("0:60:7.5").size(), 9u);
  EXPECT_EQ(parse_grid("0:60:7.5").back(), 60.0);
  EXPECT_EQ(parse_grid("5, 7,9"), (std::vector<double>{5, 7, 9}));
  EXPECT_EQ(parse_grid("42"), (std::vector<double>{42}));
  EXPECT_THROW(parse_grid("1:3"), Error);
  EXPECT_THROW(parse_grid("3:1:1"), Error);
  EXPECT_THROW(parse_grid("1:3:0"), Error);
  EXPECT_THROW(parse_grid("a,b"), Error);
}

TEST(SweepPreset, PublishedCaseCounts) {
  EXPECT_EQ(sweep_preset("ariane-launch").generate().size(), 108u);
  EXPECT_EQ(sweep_preset("ariane-flight").generate().size(), 234u);
  EXPECT_EQ(sweep_preset("pegasus").generate().size(), 480u);
}

TEST(SweepPreset, ShippedConfigsMatchPresets) {
  const std::filesystem::path dir = LAUNCHOPT_SOURCE_DIR "/configs";
  for (const char* name : {"ariane-launch", "ariane-flight", "pegasus"}) {
    const Config cfg = parse_config(dir / (std::string("sweep-") + name + ".cfg"));
    ASSERT_TRUE(cfg.sweep.has_value()) << name;
    const auto a = cfg.sweep->generate();
    const auto b = sweep_preset(name).generate();
    ASSERT_EQ(a.size(), b.size()) << name;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].v0, b[i].v0);
      EXPECT_EQ(a[i].theta0, b[i].theta0);
      EXPECT_EQ(a[i].theta_v0, b[i].theta_v0);
      EXPECT_EQ(a[i].theta_f, b[i].theta_f);
      EXPECT_EQ(a[i].psi_f, b[i].psi_f);
      EXPECT_EQ(a[i].omega_x0, b[i].omega_x0);
    }
  }
}

TEST(SweepSpec, RestrictionsAndTie) {
  for (const auto& p : sweep_preset("ariane-flight").generate()) {
    EXPECT_EQ(p.theta_v0, p.theta0);
    EXPECT_LE(std::abs(p.theta_f - p.theta0), 20.0 + 1e-9);
  }
  for (const auto& p : sweep_preset("pegasus").generate()) {
    EXPECT_GE(p.theta_v0 - p.theta0, -10.0 - 1e-9);
    EXPECT_LE(p.theta_v0 - p.theta0, 1e-9);
    EXPECT_EQ(p.v0, 300.0);
  }
}

TEST(SweepSpec, DeterministicDistinctOrder) {
  const auto a = sweep_preset("pegasus").generate();
  const auto b = sweep_preset("pegasus").generate();
  ASSERT_EQ(a.size(), b.size());
  std::set<std::tuple<double, double, double, double, double>> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].theta0, b[i].theta0);
    EXPECT_EQ(a[i].omega_x0, b[i].omega_x0);
    seen.insert({a[i].theta_v0, a[i].theta0, a[i].theta_f, a[i].psi_f, a[i].omega_x0});
  }
  EXPECT_EQ(seen.size(), a.size());
  // Last grid variable varies fastest.
  EXPECT_NE(a[0].omega_x0, a[1].omega_x0);
  EXPECT_EQ(a[0].theta_f, a[1].theta_f);
}

TEST(ParseConfig, FullDocument) {
  const Config cfg = parse_config_text(R"(
# comment
[launcher]
preset = pegasus
a = 20   # trailing comment

[solver]
gamma = 2
steps = 256
tol = 1e-9
stop_lambda4 = 0.95
frame_change = false
first_axis = z
ocp0_orientation = forward

[case]
v0 = 300
theta_f = 60
)");
  ASSERT_TRUE(cfg.launcher.has_value());
  EXPECT_EQ(cfg.launcher->vehicle.a, 20.0);
  EXPECT_EQ(cfg.launcher->vehicle.b_bar, 0.0607);
  ASSERT_TRUE(cfg.solver.has_value());
  EXPECT_EQ(cfg.solver->gamma, 2.0);
  EXPECT_EQ(cfg.solver->n_steps, 256);
  EXPECT_EQ(cfg.solver->continuation.solver.tol, 1e-9);
  EXPECT_EQ(cfg.solver->stop_lambda4, 0.95);
  EXPECT_FALSE(cfg.solver->frame_change);
  EXPECT_EQ(cfg.solver->first_axis, Axis::Z);
  EXPECT_EQ(cfg.solver->ocp0_orientation, Orientation::Forward);
  EXPECT_EQ(cfg.launcher->solver.n_steps, 256);
  ASSERT_TRUE(cfg.case_params.has_value());
  EXPECT_EQ(cfg.case_params->v0, 300.0);
  EXPECT_EQ(cfg.case_params->theta_f, 60.0);
  EXPECT_FALSE(cfg.sweep.has_value());
}

TEST(ParseConfig, ShippedFilesParse) {
  const std::filesystem::path dir = LAUNCHOPT_SOURCE_DIR "/configs";
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    EXPECT_NO_THROW(parse_config(entry.path())) << entry.path();
  }
}

TEST(ParseConfig, ErrorsNameLineAndField) {
  std::string msg = parse_error("[solver]\ngamma = 1\nsteps = many\n");
  EXPECT_NE(msg.find("test.cfg:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("steps"), std::string::npos) << msg;

  msg = parse_error("[case]\nv0 = 1\nspeed = 2\n");
  EXPECT_NE(msg.find(":3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("speed"), std::string::npos) << msg;

  msg = parse_error("[rocket]\n");
  EXPECT_NE(msg.find("rocket"), std::string::npos) << msg;

  msg = parse_error("v0 = 1\n");
  EXPECT_NE(msg.find(":1"), std::string::npos) << msg;

  msg = parse_error("[solver]\n\nsteps = 8\n");
  EXPECT_NE(msg.find(":3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("steps"), std::string::npos) << msg;

  msg = parse_error("[solver]\nocp0_orientation = backward\n");
  EXPECT_NE(msg.find("ocp0_orientation"), std::string::npos) << msg;

  msg = parse_error("[sweep]\ntheta_f = 10:0:5\n");
  EXPECT_NE(msg.find("theta_f"), std::string::npos) << msg;

  msg = parse_error("[launcher]\npreset = saturn\n");
  EXPECT_NE(msg.find(":2"), std::string::npos) << msg;

  msg = parse_error("[solver]\ngamma\n");
  EXPECT_NE(msg.find(":2"), std::string::npos) << msg;

  EXPECT_THROW(parse_config("/nonexistent/file.cfg"), Error);
}

TEST(ParseConfig, SweepTieAndPreset) {
  Config cfg = parse_config_text("[sweep]\npreset = ariane-flight\nv0 = 2000\n");
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.sweep->generate().size(), 234u / 6u);
  cfg = parse_config_text("[sweep]\ntheta0 = 0,10\ntheta_v0 = theta0\n");
  const auto cases = cfg.sweep->generate();
  ASSERT_EQ(cases.size(), 2u);
  EXPECT_EQ(cases[1].theta_v0, 10.0);
}

class EnvOverride : public ::testing::Test {
 protected:
  void TearDown() override {
    for (const char* n : {"LAUNCHOPT_STEPS", "LAUNCHOPT_TOL", "LAUNCHOPT_GAMMA", "LAUNCHOPT_MIN_STEP",
                          "LAUNCHOPT_MAX_FRAME_ATTEMPTS", "LAUNCHOPT_DELTA_ALPHA_DEG"}) {
      unsetenv(n);
    }
  }
};

TEST_F(EnvOverride, AppliesAndValidates) {
  SolverOptions o;
  apply_env_overrides(o);
  EXPECT_EQ(o.n_steps, kDefaultSteps);
  setenv("LAUNCHOPT_STEPS", "1024", 1);
  setenv("LAUNCHOPT_TOL", "1e-10", 1);
  setenv("LAUNCHOPT_GAMMA", "5", 1);
  setenv("LAUNCHOPT_MIN_STEP", "1e-3", 1);
  setenv("LAUNCHOPT_MAX_FRAME_ATTEMPTS", "3", 1);
  setenv("LAUNCHOPT_DELTA_ALPHA_DEG", "5", 1);
  apply_env_overrides(o);
  EXPECT_EQ(o.n_steps, 1024);
  EXPECT_EQ(o.continuation.solver.tol, 1e-10);
  EXPECT_EQ(o.gamma, 5.0);
  EXPECT_EQ(o.continuation.min_step, 1e-3);
  EXPECT_EQ(o.max_frame_attempts, 3);
  EXPECT_NEAR(o.delta_alpha, 5.0 * kDeg, 1e-15);
  setenv("LAUNCHOPT_GAMMA", "fast", 1);
  try {
    apply_env_overrides(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("LAUNCHOPT_GAMMA"), std::string::npos);
  }
}

}  // namespace
}  // namespace launchopt
