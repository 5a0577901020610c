#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "launchopt/frames.hpp"
#include "launchopt/integrator.hpp"
#include "launchopt/model.hpp"

namespace launchopt {

using Vector9 = Eigen::Matrix<double, 9, 1>;
using Residual = Vector9;

// Shooting unknowns: p(0) and t_f.
struct ShootingPoint {
  Costate p0;
  double t_f = 0.0;

  Vector9 to_vector() const;
  static ShootingPoint from_vector(const Vector9& z);
};

struct TerminalAttitude {
  double theta = 0.0;
  double psi = 0.0;
  double phi = 0.0;
  double omega_x = 0.0;
  double omega_y = 0.0;
};

struct CaseSpec {
  // Velocity, attitude and rates at t = 0.
  State initial;
  TerminalAttitude target;
  // Free endpoint of the lambda1 = 1 solution; origin of the lambda2 blend.
  std::optional<TerminalAttitude> natural;
  // Unit target velocity direction. Defaults to the body axis at the target attitude.
  std::optional<Eigen::Vector3d> velocity_direction;

  Eigen::Vector3d target_direction() const;
  // (pitch, yaw) used in the velocity and transversality rows.
  EulerAngles direction_angles() const;
  double velocity_scale() const;
  void validate() const;
};

struct ShootingSetup {
  VehicleParams vehicle;
  EulerAngles seed_attitude;
  int n_steps = kDefaultSteps;
  // Incremented once per propagation when set.
  std::size_t* simulations = nullptr;
};

// Attitude and rates move linearly from the seed (rates 0) to the case values.
State blend_initial_state(const CaseSpec& c, double lambda1, const EulerAngles& seed);

Trajectory shoot(const ShootingPoint& sp, const CaseSpec& c, const HomotopyState& h,
                 const ShootingSetup& setup);

// Free terminal attitude: (p_wx, p_wy, p_theta, p_psi, p_phi, H, vel1, vel2, transversality).
Residual residual_s1(const ShootingPoint& sp, const CaseSpec& c, const HomotopyState& h,
                     const ShootingSetup& setup);
// Blended terminal attitude: (wx, wy, theta, psi, phi, vel1, vel2, transversality, H).
Residual residual_s2(const ShootingPoint& sp, const CaseSpec& c, const HomotopyState& h,
                     const ShootingSetup& setup);

Residual terminal_residual_s1(const ExtremalPoint& end, const CaseSpec& c,
                              const HomotopyState& h, const VehicleParams& vp);
Residual terminal_residual_s2(const ExtremalPoint& end, const CaseSpec& c,
                              const HomotopyState& h, const VehicleParams& vp);

// Final terminal conditions with angle errors wrapped to (-pi, pi]:
// (wx, wy, theta, psi, phi, vel1, vel2, transversality, H).
Residual terminal_conditions(const ExtremalPoint& end, const CaseSpec& c, const HomotopyState& h,
                             const VehicleParams& vp);

// True when the case is invariant under the reflection y -> -y of the launch
// frame. The extremal then stays in the x-z plane with p_vy = p_psi = p_phi =
// p_wx = 0, and only the in-plane unknowns and rows need solving.
bool is_planar(const CaseSpec& c, const VehicleParams& vp, double phi_star);

// In-plane unknowns (p_vx, p_vz, p_theta, p_wy, t_f) and the matching rows of S1 and S2.
inline constexpr std::array<int, 5> kPlanarUnknowns{kVx, kVz, kTheta, kOmegaY, 8};
inline constexpr std::array<int, 5> kPlanarRowsS1{1, 2, 5, 7, 8};
inline constexpr std::array<int, 5> kPlanarRowsS2{1, 2, 6, 7, 8};

// Copies the terminal attitude into c.natural and moves the target angles by
// multiples of 2 pi to the nearest representative.
CaseSpec record_natural_endpoint(const Trajectory& traj, const CaseSpec& c);

}  // namespace launchopt
