#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace launchopt {

enum class SolveStatus { Converged, Stalled, MaxIter, NonFinite };

const char* to_string(SolveStatus status);

struct SolveOptions {
  double tol = 1e-8;       // on max |F_i|
  int max_eval = 0;        // 0 selects 200 n
  double initial_radius_factor = 100.0;
  bool broyden = true;     // false recomputes the Jacobian after every accepted step
  bool keep_log = false;
};

struct IterationRecord {
  int iteration = 0;
  double residual_norm = 0.0;   // max norm at the current iterate, after the step
  double trust_radius = 0.0;    // radius the step was computed with
  double step_norm = 0.0;       // scaled norm |D p|
  double ratio = 0.0;           // actual / predicted reduction
  bool accepted = false;
  bool jacobian_refreshed = false;  // refreshed after this iteration
  bool broyden_update = false;
  double secant_error = 0.0;    // |J+ p - dF| / max(1, |dF|) after a Broyden update
};

struct SolveReport {
  Eigen::VectorXd solution;
  Eigen::VectorXd residual;
  double residual_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int jacobian_evaluations = 0;
  double condition = 0.0;  // 1-norm condition of the last Jacobian
  SolveStatus status = SolveStatus::Stalled;
  std::vector<IterationRecord> log;

  bool converged() const { return status == SolveStatus::Converged; }
};

using ResidualMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Powell hybrid method: scaled dogleg trust region, forward-difference
// Jacobian, rank-1 Broyden updates between refreshes. Never throws on
// numerical failure; non-finite trial points shrink the radius.
SolveReport solve(const ResidualMap& f, const Eigen::VectorXd& x0, const SolveOptions& opts = {});

struct ConditionEstimate {
  double value = 0.0;
  bool singular = false;
};

// |J|_1 |J^-1|_1; singular above 1e15.
ConditionEstimate condition_estimate(const Eigen::MatrixXd& j);

}  // namespace launchopt
