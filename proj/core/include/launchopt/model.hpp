#pragma once

#include <Eigen/Dense>

namespace launchopt {

using Vector8 = Eigen::Matrix<double, 8, 1>;

// Component order shared by State, Costate and their derivatives.
enum Index : int { kVx = 0, kVy, kVz, kTheta, kPsi, kPhi, kOmegaX, kOmegaY };

struct State {
  Vector8 values = Vector8::Zero();

  Eigen::Vector3d velocity() const { return values.head<3>(); }
  double theta() const { return values[kTheta]; }
  double psi() const { return values[kPsi]; }
  double phi() const { return values[kPhi]; }
  double omega_x() const { return values[kOmegaX]; }
  double omega_y() const { return values[kOmegaY]; }
};

// Adjoint vector. The abnormal multiplier is fixed: only normal extremals are computed.
struct Costate {
  static constexpr double p0 = -1.0;
  Vector8 values = Vector8::Zero();

  Eigen::Vector3d velocity() const { return values.head<3>(); }
  double theta() const { return values[kTheta]; }
  double psi() const { return values[kPsi]; }
  double phi() const { return values[kPhi]; }
  double omega_x() const { return values[kOmegaX]; }
  double omega_y() const { return values[kOmegaY]; }
};

inline constexpr double kStandardGravity = 9.80665;

struct VehicleParams {
  double a = 0.0;       // thrust acceleration, m/s^2
  double b_bar = 0.0;   // angular acceleration per unit control, rad/s^2
  double cx = 0.0;      // drag coefficient, 1/m
  double cz = 0.0;      // lift coefficient, 1/m
  Eigen::Vector3d gravity{-kStandardGravity, 0.0, 0.0};
  // Local vertical; the flight-path angle is measured from it.
  Eigen::Vector3d radial_axis{1.0, 0.0, 0.0};

  bool has_aerodynamics() const { return cx != 0.0 || cz != 0.0; }
  void validate() const;
};

struct Control {
  double u1 = 0.0;
  double u2 = 0.0;

  double norm() const;
};

struct HomotopyState {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  double gamma = 3.0;

  void validate() const;
};

// Switch to the Euler-singularity limit fields below this |cos psi|.
inline constexpr double kGimbalThreshold = 1e-4;

// Phi = (b p_wy, -b p_wx).
Eigen::Vector2d switching_function(const Costate& p, const VehicleParams& vp);

// Saturated extremal control of the lambda4 family: penalized law at
// lambda4 = 0, unit switching direction at lambda4 = 1.
// Throws SingularControl at lambda4 = 1 when Phi vanishes.
Control control_law(const Costate& p, const VehicleParams& vp, const HomotopyState& h);

// Same as control_law but returns u = 0 on the singular set.
Control control_law_or_zero(const Costate& p, const VehicleParams& vp,
                            const HomotopyState& h) noexcept;

// Aerodynamic acceleration (drag + lift), not scaled by lambda3.
Eigen::Vector3d aero_acceleration(const Eigen::Vector3d& v, const VehicleParams& vp);
// d(aero_acceleration)/dv.
Eigen::Matrix3d aero_jacobian(const Eigen::Vector3d& v, const VehicleParams& vp);

// State derivative. Throws NearGimbalLock when |cos psi| < kGimbalThreshold.
Vector8 dynamics(const State& x, const Control& u, const VehicleParams& vp, double lambda3);

// -dH/dx. Throws NearGimbalLock when |cos psi| < kGimbalThreshold.
Vector8 adjoint_dynamics(const State& x, const Costate& p, const Control& u,
                         const VehicleParams& vp, double lambda3);

// <p, f(x,u)> + p0 + p0 gamma (1 - lambda4) |u|^2.
double hamiltonian(const State& x, const Costate& p, const Control& u, const VehicleParams& vp,
                   const HomotopyState& h);

struct FieldPair {
  Vector8 state_rate = Vector8::Zero();
  Vector8 costate_rate = Vector8::Zero();
};

// Limit of the extremal field as cos psi -> 0.
FieldPair singular_limit_field(const State& x, const Costate& p, const Control& u,
                               const VehicleParams& vp, double lambda3);

// Regular field, or the limit field below the gimbal threshold.
FieldPair extremal_field(const State& x, const Costate& p, const Control& u,
                         const VehicleParams& vp, double lambda3);

}  // namespace launchopt
