#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "launchopt/frames.hpp"
#include "launchopt/integrator.hpp"
#include "launchopt/nlsolve.hpp"
#include "launchopt/ocp0.hpp"
#include "launchopt/shooting.hpp"

namespace launchopt {

enum class Stage { Lambda1 = 0, Lambda2, Lambda3, Lambda4 };
inline constexpr int kStageCount = 4;

const char* to_string(Stage stage);

struct ContinuationOptions {
  double initial_step = 0.1;
  double min_step = 1e-4;
  double max_step = 0.2;
  SolveOptions solver;
};

struct StagePlan {
  Stage stage = Stage::Lambda1;
  double lambda = 0.0;
  double target = 1.0;
  double step = 0.1;
  double min_step = 1e-4;
  double max_step = 0.2;
  // On a failed step, try the target directly once per base point.
  bool try_target_on_failure = false;
  std::vector<std::pair<double, ShootingPoint>> history;
  // Solve only these unknowns and residual rows (the others stay at the seed
  // values). Empty means all nine.
  std::vector<int> unknowns;
  std::vector<int> rows;

  static StagePlan make(Stage stage, const ContinuationOptions& opts, double target = 1.0);
};

struct StallInfo {
  double lambda = 0.0;
  ShootingPoint solution;
  // Not even the starting point converged.
  bool hard_failure = false;
  std::string reason;
};

struct StageResult {
  bool completed = false;
  double lambda = 0.0;
  ShootingPoint solution;
  double residual_norm = 0.0;
  int solves = 0;
  std::optional<StallInfo> stall;
};

using StageResidual = std::function<Residual(const ShootingPoint&, double lambda)>;

// Zeroth-order continuation in lambda from plan.lambda to plan.target.
// Steps halve on failure and double after two consecutive successes; a step
// below min_step declares a stall with the last converged point.
StageResult run_stage(StagePlan& plan, const StageResidual& residual, const ShootingPoint& seed,
                      const SolveOptions& solver);

enum class RunStatus { Optimal, SubOptimal, Failed };

const char* to_string(RunStatus status);

struct SolverOptions {
  double gamma = 3.0;
  int n_steps = kDefaultSteps;
  ContinuationOptions continuation;
  double stop_lambda4 = 1.0;
  double phi_star = 0.0;
  bool frame_change = true;
  double delta_alpha = 0.17453292519943295;  // 10 deg
  int max_frame_attempts = 13;
  Axis first_axis = Axis::Y;
  Orientation ocp0_orientation = Orientation::Either;
};

struct StageStats {
  bool run = false;
  bool completed = false;
  double final_lambda = 0.0;
  double seconds = 0.0;
  std::size_t simulations = 0;
  int solves = 0;
};

struct RunOutcome {
  RunStatus status = RunStatus::Failed;
  HomotopyState homotopy;
  double t_f = 0.0;
  ShootingPoint solution;
  Trajectory trajectory;
  std::array<StageStats, kStageCount> stages{};
  Ocp0Solution ocp0;
  // Max |terminal condition| in the frame of the returned trajectory.
  double residual_norm = 0.0;
  bool reached_lambda4 = false;
  int frame_attempts = 0;
  std::optional<FrameChange> frame;
  std::string failed_stage;
  double failed_lambda = 0.0;
  std::string message;
  double total_seconds = 0.0;
  std::size_t total_simulations = 0;

  double lambda4() const { return homotopy.lambda4; }
};

// OCP0 -> lambda1 -> natural endpoint -> lambda2 -> lambda3 (with aerodynamics)
// -> lambda4 up to opts.stop_lambda4.
RunOutcome solve_case(const CaseSpec& c, const VehicleParams& vp, const SolverOptions& opts);

// Retries in rotated frames (alpha = 0, +d, -d, +2d, ...; beta from
// choose_beta) until an Optimal outcome, keeping the best one, and maps the
// trajectory back to the original frame.
RunOutcome solve_with_frame_search(const CaseSpec& c, const VehicleParams& vp,
                                   const SolverOptions& opts);

// Case and vehicle expressed in the rotated frame.
CaseSpec transform_case(const FrameChange& fc, const CaseSpec& c);

// Trajectory nodes mapped from the rotated frame back to the original one.
Trajectory invert_trajectory(const FrameChange& fc, const Trajectory& traj);

}  // namespace launchopt
