#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "launchopt/config.hpp"
#include "launchopt/continuation.hpp"

namespace launchopt {

inline constexpr const char* kTrajectoryHeader =
    "t,v_x,v_y,v_z,theta,psi,phi,omega_x,omega_y,p_vx,p_vy,p_vz,p_theta,p_psi,p_phi,p_omegax,"
    "p_omegay,u1,u2,u_norm,zeta";

// Terminal rows checked when a trajectory is written.
inline constexpr double kCsvTerminalTolerance = 1e-6;

// Angle of the control in the (u1, u2) plane; 0 when u = 0.
double control_angle(const Control& u);

// Max |terminal condition| (attitude, rates, velocity, transversality) of the
// trajectory's last node; the Hamiltonian row is excluded.
double terminal_error(const RunOutcome& r, const CaseSpec& c, const VehicleParams& vp);

// Throws InvalidArgument, writing nothing, when terminal_error exceeds the tolerance.
void write_trajectory_csv(std::ostream& os, const RunOutcome& r, const CaseSpec& c,
                          const VehicleParams& vp);

std::string run_summary_json(const RunOutcome& r);

struct CaseRecord {
  std::size_t index = 0;
  CaseParameters params;
  std::string status;
  double t_f = 0.0;
  double lambda4 = 0.0;
  bool reached_lambda4 = false;
  double residual_norm = 0.0;
  double total_seconds = 0.0;
  std::size_t total_simulations = 0;
  std::array<double, kStageCount> stage_seconds{};
  std::array<std::size_t, kStageCount> stage_simulations{};
  int frame_attempts = 0;
  std::optional<double> alpha_deg;
  std::optional<double> beta_deg;
  std::string failed_stage;
  std::string message;

  bool success() const { return status == "Optimal"; }
};

CaseRecord make_record(std::size_t index, const CaseParameters& params, const RunOutcome& r);
std::string to_json_line(const CaseRecord& rec);
// Throws ParseError.
CaseRecord parse_json_line(const std::string& line);

struct StageAverages {
  std::size_t count = 0;
  double total_seconds = 0.0;           // includes the frame search
  double solve_seconds = 0.0;           // stages of the final resolution only
  double total_simulations = 0.0;       // final resolution only
  std::array<double, kStageCount> stage_seconds{};
  std::array<double, kStageCount> stage_simulations{};
  double frame_attempts = 0.0;
};

// Easy cases take less than this many seconds in total.
inline constexpr double kEasyThresholdSeconds = 50.0;

struct SweepSummary {
  std::size_t total = 0;
  std::size_t optimal = 0;
  std::size_t suboptimal = 0;
  std::size_t failed = 0;
  std::size_t reached_lambda4 = 0;
  std::size_t easy = 0;
  std::size_t difficult = 0;
  double success_rate = 0.0;          // percent Optimal
  double before_lambda4_rate = 0.0;   // percent reaching the lambda4 stage
  // Averages over successful cases.
  StageAverages all;
  StageAverages easy_cases;
  StageAverages difficult_cases;
};

SweepSummary summarize(const std::vector<CaseRecord>& records);
std::string format_summary(const SweepSummary& s, const std::string& title);
std::string summary_json(const SweepSummary& s);

}  // namespace launchopt
