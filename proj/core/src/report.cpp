#include "launchopt/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "launchopt/error.hpp"

namespace launchopt {

namespace {

using nlohmann::json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

json params_json(const CaseParameters& p) {
  return {{"v0", p.v0},           {"theta_v0", p.theta_v0}, {"psi_v0", p.psi_v0},
          {"theta0", p.theta0},   {"psi0", p.psi0},         {"phi0", p.phi0},
          {"omega_x0", p.omega_x0}, {"omega_y0", p.omega_y0}, {"theta_f", p.theta_f},
          {"psi_f", p.psi_f},     {"phi_f", p.phi_f},       {"omega_xf", p.omega_xf},
          {"omega_yf", p.omega_yf}};
}

CaseParameters params_from_json(const json& j) {
  CaseParameters p;
  p.v0 = j.at("v0");
  p.theta_v0 = j.at("theta_v0");
  p.psi_v0 = j.at("psi_v0");
  p.theta0 = j.at("theta0");
  p.psi0 = j.at("psi0");
  p.phi0 = j.at("phi0");
  p.omega_x0 = j.at("omega_x0");
  p.omega_y0 = j.at("omega_y0");
  p.theta_f = j.at("theta_f");
  p.psi_f = j.at("psi_f");
  p.phi_f = j.at("phi_f");
  p.omega_xf = j.at("omega_xf");
  p.omega_yf = j.at("omega_yf");
  return p;
}

// JSON has no inf/nan; store them as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void accumulate(StageAverages& a, const CaseRecord& r) {
  ++a.count;
  a.total_seconds += r.total_seconds;
  double solve_seconds = 0.0;
  for (int s = 0; s < kStageCount; ++s) {
    a.stage_seconds[s] += r.stage_seconds[s];
    a.stage_simulations[s] += static_cast<double>(r.stage_simulations[s]);
    a.total_simulations += static_cast<double>(r.stage_simulations[s]);
    solve_seconds += r.stage_seconds[s];
  }
  a.solve_seconds += solve_seconds;
  a.frame_attempts += r.frame_attempts;
}

void finalize(StageAverages& a) {
  if (a.count == 0) return;
  const double n = static_cast<double>(a.count);
  a.total_seconds /= n;
  a.solve_seconds /= n;
  a.total_simulations /= n;
  a.frame_attempts /= n;
  for (int s = 0; s < kStageCount; ++s) {
    a.stage_seconds[s] /= n;
    a.stage_simulations[s] /= n;
  }
}

json averages_json(const StageAverages& a) {
  return {{"count", a.count},
          {"total_seconds", a.total_seconds},
          {"solve_seconds", a.solve_seconds},
          {"total_simulations", a.total_simulations},
          {"stage_seconds", a.stage_seconds},
          {"stage_simulations", a.stage_simulations},
          {"frame_attempts", a.frame_attempts}};
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

}  // namespace

double control_angle(const Control& u) {
  if (u.u1 == 0.0 && u.u2 == 0.0) return 0.0;
  return std::atan2(u.u2, u.u1);
}

double terminal_error(const RunOutcome& r, const CaseSpec& c, const VehicleParams& vp) {
  if (r.trajectory.nodes.empty()) return std::numeric_limits<double>::infinity();
  const Residual rows = terminal_conditions(terminal_point(r.trajectory), c, r.homotopy, vp);
  return rows.head<8>().cwiseAbs().maxCoeff();
}

void write_trajectory_csv(std::ostream& os, const RunOutcome& r, const CaseSpec& c,
                          const VehicleParams& vp) {
  const double err = terminal_error(r, c, vp);
  if (!(err < kCsvTerminalTolerance)) {
    throw Error(ErrorCode::InvalidArgument,
                "trajectory misses the terminal conditions by " + fmt("%.3e", err));
  }
  std::ostringstream out;
  out << std::setprecision(17);
  out << kTrajectoryHeader << '\n';
  const Trajectory& traj = r.trajectory;
  for (std::size_t i = 0; i < traj.nodes.size(); ++i) {
    const ExtremalPoint& n = traj.nodes[i];
    const Control& u = traj.controls[i];
    out << traj.time(i);
    for (int k = 0; k < 8; ++k) out << ',' << n.x.values[k];
    for (int k = 0; k < 8; ++k) out << ',' << n.p.values[k];
    out << ',' << u.u1 << ',' << u.u2 << ',' << u.norm() << ',' << control_angle(u) << '\n';
  }
  os << out.str();
}

std::string run_summary_json(const RunOutcome& r) {
  json stages = json::array();
  for (int s = 0; s < kStageCount; ++s) {
    const StageStats& st = r.stages[s];
    stages.push_back({{"name", to_string(static_cast<Stage>(s))},
                      {"run", st.run},
                      {"completed", st.completed},
                      {"final_lambda", st.final_lambda},
                      {"seconds", st.seconds},
                      {"simulations", st.simulations},
                      {"solves", st.solves}});
  }
  json j{{"status", to_string(r.status)},
         {"t_f", r.t_f},
         {"lambda4_final", r.homotopy.lambda4},
         {"gamma", r.homotopy.gamma},
         {"residual_norm", number_or_null(r.residual_norm)},
         {"ocp0_t_f", r.ocp0.t_f},
         {"stages", stages},
         {"total_seconds", r.total_seconds},
         {"total_simulations", r.total_simulations},
         {"frame_attempts", r.frame_attempts},
         {"alpha_deg", r.frame ? json(r.frame->alpha * kRadToDeg) : json(nullptr)},
         {"beta_deg", r.frame ? json(r.frame->beta * kRadToDeg) : json(nullptr)},
         {"switches", r.trajectory.switches},
         {"failed_stage", r.failed_stage},
         {"message", r.message}};
  return j.dump(2);
}

CaseRecord make_record(std::size_t index, const CaseParameters& params, const RunOutcome& r) {
  CaseRecord rec;
  rec.index = index;
  rec.params = params;
  rec.status = to_string(r.status);
  rec.t_f = r.t_f;
  rec.lambda4 = r.homotopy.lambda4;
  rec.reached_lambda4 = r.reached_lambda4;
  rec.residual_norm = r.residual_norm;
  rec.total_seconds = r.total_seconds;
  rec.total_simulations = r.total_simulations;
  for (int s = 0; s < kStageCount; ++s) {
    rec.stage_seconds[s] = r.stages[s].seconds;
    rec.stage_simulations[s] = r.stages[s].simulations;
  }
  rec.frame_attempts = r.frame_attempts;
  if (r.frame) {
    rec.alpha_deg = r.frame->alpha * kRadToDeg;
    rec.beta_deg = r.frame->beta * kRadToDeg;
  }
  rec.failed_stage = r.failed_stage;
  rec.message = r.message;
  return rec;
}

std::string to_json_line(const CaseRecord& rec) {
  json j{{"index", rec.index},
         {"params", params_json(rec.params)},
         {"status", rec.status},
         {"t_f", number_or_null(rec.t_f)},
         {"lambda4", rec.lambda4},
         {"reached_lambda4", rec.reached_lambda4},
         {"residual_norm", number_or_null(rec.residual_norm)},
         {"total_seconds", rec.total_seconds},
         {"total_simulations", rec.total_simulations},
         {"stage_seconds", rec.stage_seconds},
         {"stage_simulations", rec.stage_simulations},
         {"frame_attempts", rec.frame_attempts},
         {"alpha_deg", rec.alpha_deg ? json(*rec.alpha_deg) : json(nullptr)},
         {"beta_deg", rec.beta_deg ? json(*rec.beta_deg) : json(nullptr)},
         {"failed_stage", rec.failed_stage},
         {"message", rec.message}};
  return j.dump();
}

CaseRecord parse_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    CaseRecord rec;
    rec.index = j.at("index");
    rec.params = params_from_json(j.at("params"));
    rec.status = j.at("status");
    rec.t_f = number_from(j.at("t_f"));
    rec.lambda4 = j.at("lambda4");
    rec.reached_lambda4 = j.at("reached_lambda4");
    rec.residual_norm = number_from(j.at("residual_norm"));
    rec.total_seconds = j.at("total_seconds");
    rec.total_simulations = j.at("total_simulations");
    rec.stage_seconds = j.at("stage_seconds");
    rec.stage_simulations = j.at("stage_simulations");
    rec.frame_attempts = j.at("frame_attempts");
    if (!j.at("alpha_deg").is_null()) rec.alpha_deg = j.at("alpha_deg").get<double>();
    if (!j.at("beta_deg").is_null()) rec.beta_deg = j.at("beta_deg").get<double>();
    rec.failed_stage = j.at("failed_stage");
    rec.message = j.at("message");
    return rec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("case record: ") + e.what());
  }
}

SweepSummary summarize(const std::vector<CaseRecord>& records) {
  SweepSummary s;
  s.total = records.size();
  for (const CaseRecord& r : records) {
    if (r.status == "Optimal") {
      ++s.optimal;
    } else if (r.status == "SubOptimal") {
      ++s.suboptimal;
    } else {
      ++s.failed;
    }
    if (r.reached_lambda4) ++s.reached_lambda4;
    const bool easy = r.total_seconds < kEasyThresholdSeconds;
    if (easy) {
      ++s.easy;
    } else {
      ++s.difficult;
    }
    if (r.success()) {
      accumulate(s.all, r);
      accumulate(easy ? s.easy_cases : s.difficult_cases, r);
    }
  }
  finalize(s.all);
  finalize(s.easy_cases);
  finalize(s.difficult_cases);
  if (s.total > 0) {
    s.success_rate = 100.0 * static_cast<double>(s.optimal) / static_cast<double>(s.total);
    s.before_lambda4_rate =
        100.0 * static_cast<double>(s.reached_lambda4) / static_cast<double>(s.total);
  }
  return s;
}

std::string format_summary(const SweepSummary& s, const std::string& title) {
  std::ostringstream out;
  auto row = [&](const std::string& label, const std::string& all, const std::string& easy,
                 const std::string& diff) {
    out << std::left << std::setw(36) << label << std::right << std::setw(12) << all
        << std::setw(12) << easy << std::setw(12) << diff << '\n';
  };
  auto f2 = [](double v) { return fmt("%.2f", v); };
  auto f0 = [](double v) { return fmt("%.0f", v); };
  out << title << '\n';
  row("", "All", "Easy", "Diffi.");
  row("Number of cases", std::to_string(s.total), std::to_string(s.easy),
      std::to_string(s.difficult));
  row("Optimal / SubOptimal / Failed",
      std::to_string(s.optimal) + "/" + std::to_string(s.suboptimal) + "/" +
          std::to_string(s.failed),
      "", "");
  out << "Rate of success (%)\n";
  row("  - Total", fmt("%.1f", s.success_rate), "", "");
  row("  - Before lambda4-continuation", fmt("%.1f", s.before_lambda4_rate), "", "");
  out << "Average execution time (s), successful cases\n";
  row("  - Total", f2(s.all.total_seconds), f2(s.easy_cases.total_seconds),
      f2(s.difficult_cases.total_seconds));
  row("  - Final resolution", f2(s.all.solve_seconds), f2(s.easy_cases.solve_seconds),
      f2(s.difficult_cases.solve_seconds));
  for (int k = 0; k < kStageCount; ++k) {
    row("  - In lambda" + std::to_string(k + 1) + "-continuation", f2(s.all.stage_seconds[k]),
        f2(s.easy_cases.stage_seconds[k]), f2(s.difficult_cases.stage_seconds[k]));
  }
  out << "Average number of simulations\n";
  row("  - Total", f0(s.all.total_simulations), f0(s.easy_cases.total_simulations),
      f0(s.difficult_cases.total_simulations));
  for (int k = 0; k < kStageCount; ++k) {
    row("  - In lambda" + std::to_string(k + 1) + "-continuation",
        f0(s.all.stage_simulations[k]), f0(s.easy_cases.stage_simulations[k]),
        f0(s.difficult_cases.stage_simulations[k]));
  }
  row("Average times of change of frame", fmt("%.1f", s.all.frame_attempts),
      fmt("%.1f", s.easy_cases.frame_attempts), fmt("%.1f", s.difficult_cases.frame_attempts));
  return out.str();
}

std::string summary_json(const SweepSummary& s) {
  json j{{"total", s.total},
         {"optimal", s.optimal},
         {"suboptimal", s.suboptimal},
         {"failed", s.failed},
         {"reached_lambda4", s.reached_lambda4},
         {"easy", s.easy},
         {"difficult", s.difficult},
         {"success_rate", s.success_rate},
         {"before_lambda4_rate", s.before_lambda4_rate},
         {"all", averages_json(s.all)},
         {"easy_cases", averages_json(s.easy_cases)},
         {"difficult_cases", averages_json(s.difficult_cases)}};
  return j.dump(2);
}

}  // namespace launchopt
