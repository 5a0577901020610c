#pragma once

#include <Eigen/Dense>

#include "launchopt/frames.hpp"
#include "launchopt/model.hpp"

namespace launchopt {

// Forward requires <v(t_f), w> > 0. Either also accepts the antiparallel
// root when no forward one exists (the full problem only asks v x e = 0).
enum class Orientation { Forward, Either };

// Constant-thrust-direction velocity steering: v' = a e + g, v(t_f) // w.
struct Ocp0Problem {
  Eigen::Vector3d v0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d w{0.0, 0.0, 1.0};
  double a = 0.0;
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  Orientation orientation = Orientation::Forward;
};

struct Ocp0Solution {
  Eigen::Vector3d e_star = Eigen::Vector3d::Zero();
  double t_f = 0.0;
  Eigen::Vector3d p_v = Eigen::Vector3d::Zero();
  double theta_star = 0.0;
  double psi_star = 0.0;
  double phi_star = 0.0;
  // Quadratic a1 t^2 + a2 t + a3 = 0 whose root is t_f.
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  // v(t_f) points along -w.
  bool reversed = false;
};

// Throws Infeasible or DegenerateThrust. Euler angles are left on the
// principal branch; use extract_euler to pick the branch.
Ocp0Solution solve_ocp0(const Ocp0Problem& prob);

// Both Euler branches reproduce e; picks the one minimizing
// |psi0 - psi*| + |psif - psi*| (ties go to the principal branch).
EulerAngles extract_euler(const Eigen::Vector3d& e, double psi0, double psif);

// Frozen-attitude extremal of the full problem at t = 0.
PhasePoint embed_in_mtcp(const Ocp0Problem& prob, const Ocp0Solution& sol);

}  // namespace launchopt
