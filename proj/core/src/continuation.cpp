#include "launchopt/continuation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "launchopt/error.hpp"

namespace launchopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SolveAttempt {
  bool ok = false;
  ShootingPoint solution;
  double residual_norm = 0.0;
};

SolveAttempt solve_at(const StageResidual& residual, double lambda, const ShootingPoint& start,
                      const SolveOptions& solver, const StagePlan& plan) {
  const Vector9 full = start.to_vector();
  const bool reduced = !plan.unknowns.empty();
  auto expand = [&](const Eigen::VectorXd& z) {
    if (!reduced) return Vector9(z);
    Vector9 out = full;
    for (std::size_t k = 0; k < plan.unknowns.size(); ++k) out[plan.unknowns[k]] = z[k];
    return out;
  };
  const ResidualMap f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const Residual r = residual(ShootingPoint::from_vector(expand(z)), lambda);
    if (!reduced) return r;
    Eigen::VectorXd out(plan.rows.size());
    for (std::size_t k = 0; k < plan.rows.size(); ++k) out[k] = r[plan.rows[k]];
    return out;
  };
  Eigen::VectorXd z0 = full;
  if (reduced) {
    z0.resize(plan.unknowns.size());
    for (std::size_t k = 0; k < plan.unknowns.size(); ++k) z0[k] = full[plan.unknowns[k]];
  }
  const SolveReport rep = solve(f, z0, solver);
  SolveAttempt out;
  out.solution = ShootingPoint::from_vector(expand(rep.solution));
  out.residual_norm = rep.residual_norm;
  out.ok = rep.converged() && out.solution.t_f > 0.0;
  return out;
}

double score(const RunOutcome& r) {
  switch (r.status) {
    case RunStatus::Optimal: return 3.0;
    case RunStatus::SubOptimal: return 1.0 + r.homotopy.lambda4;
    case RunStatus::Failed: return 0.0;
  }
  return 0.0;
}

ShootingSetup make_setup(const VehicleParams& vp, const EulerAngles& seed, const SolverOptions& o,
                         std::size_t* counter) {
  ShootingSetup setup;
  setup.vehicle = vp;
  setup.seed_attitude = seed;
  setup.n_steps = o.n_steps;
  setup.simulations = counter;
  return setup;
}

}  // namespace

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::Lambda1: return "lambda1";
    case Stage::Lambda2: return "lambda2";
    case Stage::Lambda3: return "lambda3";
    case Stage::Lambda4: return "lambda4";
  }
  return "unknown";
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Optimal: return "Optimal";
    case RunStatus::SubOptimal: return "SubOptimal";
    case RunStatus::Failed: return "Failed";
  }
  return "Unknown";
}

StagePlan StagePlan::make(Stage stage, const ContinuationOptions& opts, double target) {
  StagePlan plan;
  plan.stage = stage;
  plan.target = target;
  plan.step = opts.initial_step;
  plan.min_step = opts.min_step;
  plan.max_step = opts.max_step;
  return plan;
}

// TODO: pseudo-arclength predictor for lambda4; Pegasus paths fold near
// lambda4 = 0.998 and halving alone cannot pass the turning point.
StageResult run_stage(StagePlan& plan, const StageResidual& residual, const ShootingPoint& seed,
                      const SolveOptions& solver) {
  StageResult result;
  result.lambda = plan.lambda;

  SolveAttempt current = solve_at(residual, plan.lambda, seed, solver, plan);
  ++result.solves;
  if (!current.ok) {
    result.solution = seed;
    result.residual_norm = current.residual_norm;
    result.stall = StallInfo{plan.lambda, seed, true, "starting point did not converge"};
    return result;
  }
  plan.history.emplace_back(plan.lambda, current.solution);

  int successes = 0;
  bool target_tried = false;
  while (plan.lambda < plan.target) {
    const double next = std::min(plan.target, plan.lambda + plan.step);
    SolveAttempt trial = solve_at(residual, next, current.solution, solver, plan);
    ++result.solves;
    double reached = next;
    if (!trial.ok && plan.try_target_on_failure && !target_tried && next < plan.target) {
      target_tried = true;
      trial = solve_at(residual, plan.target, current.solution, solver, plan);
      ++result.solves;
      reached = plan.target;
    }
    if (trial.ok) {
      plan.lambda = reached;
      current = trial;
      plan.history.emplace_back(plan.lambda, current.solution);
      target_tried = false;
      if (++successes >= 2) {
        plan.step = std::min(plan.max_step, 2.0 * plan.step);
        successes = 0;
      }
      continue;
    }
    successes = 0;
    plan.step *= 0.5;
    if (plan.step < plan.min_step) {
      result.solution = current.solution;
      result.residual_norm = current.residual_norm;
      result.lambda = plan.lambda;
      result.stall = StallInfo{plan.lambda, current.solution, false, "step below minimum"};
      return result;
    }
  }
  result.completed = true;
  result.lambda = plan.lambda;
  result.solution = current.solution;
  result.residual_norm = current.residual_norm;
  return result;
}

RunOutcome solve_case(const CaseSpec& c, const VehicleParams& vp, const SolverOptions& opts) {
  const auto start = Clock::now();
  RunOutcome out;
  out.homotopy.gamma = opts.gamma;
  auto fail = [&](const char* stage, double lambda, const std::string& why) {
    out.status = RunStatus::Failed;
    out.failed_stage = stage;
    out.failed_lambda = lambda;
    out.message = why;
    out.total_seconds = seconds_since(start);
    for (const StageStats& s : out.stages) out.total_simulations += s.simulations;
    return out;
  };

  try {
    c.validate();
    vp.validate();
  } catch (const Error& e) {
    return fail("input", 0.0, e.what());
  }

  Ocp0Problem prob{c.initial.velocity(), c.target_direction(), vp.a, vp.gravity,
                   opts.ocp0_orientation};
  try {
    out.ocp0 = solve_ocp0(prob);
  } catch (const Error& e) {
    return fail("ocp0", 0.0, e.what());
  }
  const EulerAngles seed_angles = extract_euler(out.ocp0.e_star, c.initial.psi(), c.target.psi);
  out.ocp0.theta_star = seed_angles.theta;
  out.ocp0.psi_star = seed_angles.psi;
  out.ocp0.phi_star = opts.phi_star;
  if (!(out.ocp0.t_f > 0.0)) return fail("ocp0", 0.0, "velocity already along the target");
  const EulerAngles seed{seed_angles.theta, seed_angles.psi, opts.phi_star};

  ShootingPoint z;
  z.p0.values.head<3>() = out.ocp0.p_v;
  z.t_f = out.ocp0.t_f;

  HomotopyState h;
  h.gamma = opts.gamma;
  CaseSpec cs = c;
  const SolveOptions& solver = opts.continuation.solver;

  const bool planar = is_planar(c, vp, opts.phi_star);
  auto run = [&](Stage stage, double target, bool jump, const StageResidual& f) {
    StageStats& st = out.stages[static_cast<int>(stage)];
    st.run = true;
    const auto t0 = Clock::now();
    StagePlan plan = StagePlan::make(stage, opts.continuation, target);
    plan.try_target_on_failure = jump;
    if (planar) {
      plan.unknowns.assign(kPlanarUnknowns.begin(), kPlanarUnknowns.end());
      if (stage == Stage::Lambda1) {
        plan.rows.assign(kPlanarRowsS1.begin(), kPlanarRowsS1.end());
      } else {
        plan.rows.assign(kPlanarRowsS2.begin(), kPlanarRowsS2.end());
      }
    }
    StageResult r = run_stage(plan, f, z, solver);
    st.seconds = seconds_since(t0);
    st.completed = r.completed;
    st.final_lambda = r.lambda;
    st.solves = r.solves;
    return r;
  };

  try {
    // lambda1: initial attitude and rates move from the seed to the case values.
    std::size_t& sims1 = out.stages[0].simulations;
    const ShootingSetup setup1 = make_setup(vp, seed, opts, &sims1);
    StageResult r1 = run(Stage::Lambda1, 1.0, false, [&](const ShootingPoint& sp, double l) {
      HomotopyState hl = h;
      hl.lambda1 = l;
      return residual_s1(sp, cs, hl, setup1);
    });
    if (!r1.completed) return fail("lambda1", r1.lambda, r1.stall->reason);
    z = r1.solution;
    h.lambda1 = 1.0;
    cs = record_natural_endpoint(shoot(z, cs, h, setup1), cs);

    // lambda2: terminal attitude and rates move from the natural endpoint to the target.
    std::size_t& sims2 = out.stages[1].simulations;
    const ShootingSetup setup2 = make_setup(vp, seed, opts, &sims2);
    StageResult r2 = run(Stage::Lambda2, 1.0, false, [&](const ShootingPoint& sp, double l) {
      HomotopyState hl = h;
      hl.lambda2 = l;
      return residual_s2(sp, cs, hl, setup2);
    });
    if (!r2.completed) return fail("lambda2", r2.lambda, r2.stall->reason);
    z = r2.solution;
    h.lambda2 = 1.0;

    if (vp.has_aerodynamics()) {
      std::size_t& sims3 = out.stages[2].simulations;
      const ShootingSetup setup3 = make_setup(vp, seed, opts, &sims3);
      StageResult r3 = run(Stage::Lambda3, 1.0, false, [&](const ShootingPoint& sp, double l) {
        HomotopyState hl = h;
        hl.lambda3 = l;
        return residual_s2(sp, cs, hl, setup3);
      });
      if (!r3.completed) return fail("lambda3", r3.lambda, r3.stall->reason);
      z = r3.solution;
      h.lambda3 = 1.0;
    }

    out.reached_lambda4 = true;
    const double stop = std::clamp(opts.stop_lambda4, 0.0, 1.0);
    std::size_t& sims4 = out.stages[3].simulations;
    const ShootingSetup setup4 = make_setup(vp, seed, opts, &sims4);
    StageResult r4 = run(Stage::Lambda4, stop, stop == 1.0, [&](const ShootingPoint& sp, double l) {
      HomotopyState hl = h;
      hl.lambda4 = l;
      return residual_s2(sp, cs, hl, setup4);
    });
    if (r4.stall && r4.stall->hard_failure) {
      // The lambda4 = 0 point is the converged previous stage.
      r4.lambda = 0.0;
      r4.solution = z;
    }
    z = r4.solution;
    h.lambda4 = r4.lambda;
    out.status = (r4.completed && h.lambda4 == 1.0) ? RunStatus::Optimal : RunStatus::SubOptimal;
    if (r4.stall) out.message = "lambda4 " + r4.stall->reason;

    out.homotopy = h;
    out.solution = z;
    out.t_f = z.t_f;
    const ShootingSetup final_setup = make_setup(vp, seed, opts, &sims4);
    out.trajectory = shoot(z, cs, h, final_setup);
    out.residual_norm =
        terminal_conditions(terminal_point(out.trajectory), c, h, vp).cwiseAbs().maxCoeff();
  } catch (const Error& e) {
    return fail("propagation", 0.0, e.what());
  }
  out.total_seconds = seconds_since(start);
  for (const StageStats& s : out.stages) out.total_simulations += s.simulations;
  return out;
}

CaseSpec transform_case(const FrameChange& fc, const CaseSpec& c) {
  CaseSpec out = c;
  out.natural.reset();
  out.initial = apply_frame_change(fc, c.initial, Costate{}).x;
  const EulerAngles target = transform_attitude(
      fc, EulerAngles{c.target.theta, c.target.psi, c.target.phi});
  if (std::abs(std::cos(target.psi)) < std::sin(1e-6)) {
    throw Error(ErrorCode::GimbalLock, "transformed target yaw at the Euler singularity");
  }
  out.target.theta = target.theta;
  out.target.psi = target.psi;
  out.target.phi = target.phi;
  if (c.velocity_direction) out.velocity_direction = frame_matrix(fc) * *c.velocity_direction;
  return out;
}

Trajectory invert_trajectory(const FrameChange& fc, const Trajectory& traj) {
  Trajectory out = traj;
  for (ExtremalPoint& node : out.nodes) {
    const PhasePoint back = invert_frame_change(fc, node.x, node.p);
    node.x = back.x;
    node.p = back.p;
  }
  return out;
}

RunOutcome solve_with_frame_search(const CaseSpec& c, const VehicleParams& vp,
                                   const SolverOptions& opts) {
  const auto start = Clock::now();
  RunOutcome best = solve_case(c, vp, opts);
  std::size_t simulations = best.total_simulations;
  int attempts = 0;

  if (opts.frame_change && best.status != RunStatus::Optimal) {
    const EulerAngles initial{c.initial.theta(), c.initial.psi(), c.initial.phi()};
    const EulerAngles final_attitude{c.target.theta, c.target.psi, c.target.phi};
    for (int k = 0; attempts < opts.max_frame_attempts && k <= 2 * opts.max_frame_attempts; ++k) {
      // 0, +d, -d, +2d, -2d, ...
      const int mult = (k + 1) / 2;
      const double alpha = (k % 2 == 1 ? 1.0 : -1.0) * mult * opts.delta_alpha;
      FrameChange fc;
      fc.alpha = k == 0 ? 0.0 : alpha;
      fc.first_axis = opts.first_axis;
      try {
        fc.beta = choose_beta(fc.alpha, initial, final_attitude, opts.first_axis);
      } catch (const Error&) {
        continue;
      }
      if (std::abs(fc.alpha) < 1e-12 && std::abs(fc.beta) < 1e-12) continue;
      ++attempts;

      RunOutcome trial;
      try {
        const CaseSpec rotated = transform_case(fc, c);
        trial = solve_case(rotated, transform_vehicle(fc, vp), opts);
        simulations += trial.total_simulations;
        if (trial.status != RunStatus::Failed) {
          trial.trajectory = invert_trajectory(fc, trial.trajectory);
          const ExtremalPoint& first = trial.trajectory.nodes.front();
          trial.solution.p0 = first.p;
          trial.residual_norm =
              terminal_conditions(terminal_point(trial.trajectory), c, trial.homotopy, vp)
                  .cwiseAbs()
                  .maxCoeff();
        }
        trial.frame = fc;
      } catch (const Error&) {
        continue;
      }
      if (score(trial) > score(best)) best = std::move(trial);
      if (best.status == RunStatus::Optimal) break;
    }
  }
  best.frame_attempts = attempts;
  best.total_simulations = simulations;
  best.total_seconds = seconds_since(start);
  return best;
}

}  // namespace launchopt
