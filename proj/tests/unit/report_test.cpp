#include "launchopt/report.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "launchopt/error.hpp"

namespace launchopt {
namespace {

constexpr double kPi = std::numbers::pi;

CaseRecord sample_record(std::size_t index, const std::string& status, double seconds) {
  CaseRecord r;
  r.index = index;
  r.params.v0 = 300.0 + index;
  r.params.theta_v0 = -5.0;
  r.params.theta0 = 5.0;
  r.params.theta_f = 70.0;
  r.params.psi_f = 30.0;
  r.params.omega_x0 = -10.0;
  r.status = status;
  r.t_f = 30.0 + 0.1 * index;
  r.lambda4 = status == "Optimal" ? 1.0 : 0.97;
  r.reached_lambda4 = status != "Failed";
  r.residual_norm = 1e-9;
  r.total_seconds = seconds;
  r.total_simulations = 1000 + index;
  r.stage_seconds = {0.1, 0.2, 0.3, seconds - 0.6};
  r.stage_simulations = {10, 20, 30, 940 + index};
  r.frame_attempts = static_cast<int>(index % 3);
  if (index % 2) {
    r.alpha_deg = 10.0;
    r.beta_deg = -3.25;
  }
  r.failed_stage = status == "Failed" ? "lambda2" : "";
  r.message = "note \"quoted\"";
  return r;
}

TEST(ControlAngle, Quadrants) {
  EXPECT_EQ(control_angle({0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(control_angle({1.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(control_angle({0.0, 1.0}), kPi / 2.0);
  EXPECT_DOUBLE_EQ(control_angle({-1.0, 0.0}), kPi);
  EXPECT_DOUBLE_EQ(control_angle({0.0, -0.5}), -kPi / 2.0);
}

TEST(CaseRecordJson, RoundTrip) {
  for (std::size_t i = 0; i < 4; ++i) {
    const CaseRecord a = sample_record(i, i == 3 ? "Failed" : "Optimal", 2.5 + i);
    const CaseRecord b = parse_json_line(to_json_line(a));
    EXPECT_EQ(b.index, a.index);
    EXPECT_EQ(b.params.v0, a.params.v0);
    EXPECT_EQ(b.params.theta_v0, a.params.theta_v0);
    EXPECT_EQ(b.params.psi_f, a.params.psi_f);
    EXPECT_EQ(b.params.omega_x0, a.params.omega_x0);
    EXPECT_EQ(b.status, a.status);
    EXPECT_EQ(b.t_f, a.t_f);
    EXPECT_EQ(b.lambda4, a.lambda4);
    EXPECT_EQ(b.reached_lambda4, a.reached_lambda4);
    EXPECT_EQ(b.residual_norm, a.residual_norm);
    EXPECT_EQ(b.total_seconds, a.total_seconds);
    EXPECT_EQ(b.total_simulations, a.total_simulations);
    EXPECT_EQ(b.stage_seconds, a.stage_seconds);
    EXPECT_EQ(b.stage_simulations, a.stage_simulations);
    EXPECT_EQ(b.frame_attempts, a.frame_attempts);
    EXPECT_EQ(b.alpha_deg, a.alpha_deg);
    EXPECT_EQ(b.beta_deg, a.beta_deg);
    EXPECT_EQ(b.failed_stage, a.failed_stage);
    EXPECT_EQ(b.message, a.message);
    EXPECT_EQ(to_json_line(b), to_json_line(a));
  }
}

TEST(CaseRecordJson, NonFiniteBecomesNull) {
  CaseRecord a = sample_record(0, "Failed", 1.0);
  a.residual_norm = std::numeric_limits<double>::infinity();
  const std::string line = to_json_line(a);
  EXPECT_NE(line.find("\"residual_norm\":null"), std::string::npos);
  EXPECT_FALSE(std::isfinite(parse_json_line(line).residual_norm));
}

TEST(CaseRecordJson, MalformedThrowsParseError) {
  for (const char* bad : {"", "{", "{\"index\": 1}", "[1,2]"}) {
    try {
      parse_json_line(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
  }
}

TEST(Summarize, RecomputesFromJsonLines) {
  std::vector<CaseRecord> records;
  const char* statuses[] = {"Optimal", "SubOptimal", "Failed", "Optimal", "Optimal"};
  for (std::size_t i = 0; i < 10; ++i) {
    records.push_back(sample_record(i, statuses[i % 5], i < 7 ? 10.0 + i : 60.0 + i));
  }
  std::vector<CaseRecord> parsed;
  for (const auto& r : records) parsed.push_back(parse_json_line(to_json_line(r)));
  const SweepSummary a = summarize(records);
  const SweepSummary b = summarize(parsed);
  EXPECT_EQ(summary_json(a), summary_json(b));
  EXPECT_EQ(format_summary(a, "t"), format_summary(b, "t"));

  // Independent recount.
  EXPECT_EQ(a.total, 10u);
  EXPECT_EQ(a.optimal, 6u);
  EXPECT_EQ(a.suboptimal, 2u);
  EXPECT_EQ(a.failed, 2u);
  EXPECT_EQ(a.reached_lambda4, 8u);
  EXPECT_EQ(a.easy, 7u);
  EXPECT_EQ(a.difficult, 3u);
  EXPECT_DOUBLE_EQ(a.success_rate, 60.0);
  EXPECT_DOUBLE_EQ(a.before_lambda4_rate, 80.0);
  double seconds = 0.0;
  int n = 0;
  for (const auto& r : records) {
    if (r.status == "Optimal") {
      seconds += r.total_seconds;
      ++n;
    }
  }
  EXPECT_NEAR(a.all.total_seconds, seconds / n, 1e-12);
  EXPECT_EQ(a.all.count, 6u);
  EXPECT_EQ(a.easy_cases.count + a.difficult_cases.count, 6u);
}

TEST(Summarize, Empty) {
  const SweepSummary s = summarize({});
  EXPECT_EQ(s.total, 0u);
  EXPECT_EQ(s.success_rate, 0.0);
  EXPECT_FALSE(format_summary(s, "empty").empty());
}

TEST(TrajectoryCsv, HeaderIsAscii) {
  const std::string h = kTrajectoryHeader;
  for (char ch : h) EXPECT_LT(static_cast<unsigned char>(ch), 128);
  EXPECT_EQ(std::count(h.begin(), h.end(), ','), 20);
}

class SolvedCase : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const LauncherConfig cfg = launcher_preset("ariane-flight");
    vp_ = cfg.vehicle;
    CaseParameters p;
    p.v0 = 2000.0;
    p.theta_v0 = 38.0;
    p.theta0 = 38.0;
    p.theta_f = 40.0;
    case_ = make_case(p);
    SolverOptions opts = cfg.solver;
    opts.stop_lambda4 = 0.5;
    outcome_ = solve_case(case_, vp_, opts);
  }

  static VehicleParams vp_;
  static CaseSpec case_;
  static RunOutcome outcome_;
};

VehicleParams SolvedCase::vp_;
CaseSpec SolvedCase::case_;
RunOutcome SolvedCase::outcome_;

TEST_F(SolvedCase, CsvRowsAndTerminalCheck) {
  ASSERT_EQ(outcome_.status, RunStatus::SubOptimal) << outcome_.message;
  std::ostringstream os;
  write_trajectory_csv(os, outcome_, case_, vp_);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kTrajectoryHeader);
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 20);
    last = line;
  }
  EXPECT_EQ(rows, outcome_.trajectory.nodes.size());
  EXPECT_EQ(std::stod(last.substr(0, last.find(','))), outcome_.t_f);
  EXPECT_LT(terminal_error(outcome_, case_, vp_), kCsvTerminalTolerance);
}

TEST_F(SolvedCase, CsvRefusesMissedTarget) {
  CaseSpec wrong = case_;
  wrong.target.theta += 0.01;
  std::ostringstream os;
  try {
    write_trajectory_csv(os, outcome_, wrong, vp_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  EXPECT_TRUE(os.str().empty());
}

TEST_F(SolvedCase, RunSummaryJson) {
  const std::string j = run_summary_json(outcome_);
  EXPECT_NE(j.find("\"status\": \"SubOptimal\""), std::string::npos);
  EXPECT_NE(j.find("\"lambda4_final\": 0.5"), std::string::npos);
  const CaseRecord rec = make_record(7, CaseParameters{}, outcome_);
  EXPECT_EQ(rec.index, 7u);
  EXPECT_EQ(rec.status, "SubOptimal");
  EXPECT_EQ(rec.t_f, outcome_.t_f);
  EXPECT_TRUE(rec.reached_lambda4);
  EXPECT_FALSE(rec.success());
}

}  // namespace
}  // namespace launchopt
