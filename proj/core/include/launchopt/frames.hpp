#pragma once

#include <Eigen/Dense>

#include "launchopt/model.hpp"

namespace launchopt {

enum class Axis { X, Y, Z };

// Orthogonal 3x3 direction-cosine matrix with determinant +1.
class Rotation3 {
 public:
  Rotation3() : m_(Eigen::Matrix3d::Identity()) {}
  explicit Rotation3(const Eigen::Matrix3d& m) : m_(m) {}

  const Eigen::Matrix3d& matrix() const { return m_; }
  Rotation3 transpose() const { return Rotation3(m_.transpose()); }
  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }
  Rotation3 operator*(const Rotation3& other) const { return Rotation3(m_ * other.m_); }

  // max |R^T R - I|
  double orthogonality_error() const;

 private:
  Eigen::Matrix3d m_;
};

struct EulerAngles {
  double theta = 0.0;  // pitch
  double psi = 0.0;    // yaw
  double phi = 0.0;    // roll
};

// S_R -> R_y(alpha) -> R_x(beta) -> S_R'.
struct FrameChange {
  double alpha = 0.0;
  double beta = 0.0;
  // First rotation axis. The prose form (y) is the default; z reproduces the
  // displayed transfer-matrix variant.
  Axis first_axis = Axis::Y;

  bool is_identity() const { return alpha == 0.0 && beta == 0.0; }
};

struct VelocityAngles {
  double speed = 0.0;
  double theta_v = 0.0;  // velocity pitch
  double psi_v = 0.0;    // velocity yaw
  double xi = 0.0;       // flight-path angle from the radial axis
  double kappa = 0.0;    // bank angle
};

// Normalizes to (-pi, pi].
double wrap_angle(double angle);

// Passive (coordinate-transform) single-axis rotation.
Rotation3 axis_rotation(Axis axis, double angle);

// Transfer matrix from the launch frame to the body frame: R_z(phi) R_x(psi) R_y(theta).
Rotation3 attitude_matrix(const EulerAngles& e);

// Body symmetry axis z_b in launch-frame coordinates.
Eigen::Vector3d body_axis(const EulerAngles& e);
Eigen::Vector3d body_axis(double theta, double psi);

// Principal-branch extraction (cos psi >= 0) from a launch->body transfer matrix.
EulerAngles euler_from_matrix(const Rotation3& l_br);

VelocityAngles velocity_to_angles(const Eigen::Vector3d& v);
Eigen::Vector3d velocity_from_angles(double speed, double theta_v, double psi_v);

Rotation3 frame_matrix(const FrameChange& fc);

// Maps Euler angles measured from S_R to those measured from S_R'.
EulerAngles transform_attitude(const FrameChange& fc, const EulerAngles& e);
EulerAngles inverse_transform_attitude(const FrameChange& fc, const EulerAngles& e);

// Matrix E with omega_body = E * (theta_dot, psi_dot, phi_dot).
Eigen::Matrix3d euler_rate_matrix(const EulerAngles& e);

struct PhasePoint {
  State x;
  Costate p;
};

// Canonical state/costate transformation induced by a frame change. Velocity
// and p_v rotate, Euler angles map through the attitude change, attitude
// costates through the inverse-transpose Jacobian, rates and rate costates
// are untouched.
PhasePoint apply_frame_change(const FrameChange& fc, const State& x, const Costate& p);
PhasePoint invert_frame_change(const FrameChange& fc, const State& x, const Costate& p);

// Vehicle data expressed in the rotated frame (gravity and radial axis rotate).
VehicleParams transform_vehicle(const FrameChange& fc, const VehicleParams& vp);

// Beta such that the transformed yaws of the initial and final attitudes are
// opposite. Picks the root of smallest |beta|.
double choose_beta(double alpha, const EulerAngles& initial, const EulerAngles& final_attitude,
                   Axis first_axis = Axis::Y);

}  // namespace launchopt
