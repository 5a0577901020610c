#include "launchopt/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "launchopt/error.hpp"

namespace launchopt {

namespace {

constexpr double kPi = std::numbers::pi;

// Transformed psi' must stay this far from +-pi/2.
constexpr double kFrameGimbalMargin = 1e-6;

void require_invertible(double psi) {
  if (std::abs(std::cos(psi)) < std::sin(kFrameGimbalMargin)) {
    throw Error(ErrorCode::GimbalLock, "transformed yaw at the Euler singularity");
  }
}

EulerAngles attitude_of(const State& x) { return {x.theta(), x.psi(), x.phi()}; }

// p_att' = E(e')^T E(e)^-T p_att.
Eigen::Vector3d map_attitude_costate(const EulerAngles& from, const EulerAngles& to,
                                     const Eigen::Vector3d& p_att) {
  const Eigen::Matrix3d e_from = euler_rate_matrix(from);
  const Eigen::Matrix3d e_to = euler_rate_matrix(to);
  return e_to.transpose() * e_from.transpose().partialPivLu().solve(p_att);
}

PhasePoint map_phase_point(const Rotation3& l, const State& x, const Costate& p) {
  const EulerAngles from = attitude_of(x);
  const EulerAngles to = euler_from_matrix(attitude_matrix(from) * l.transpose());
  require_invertible(to.psi);

  PhasePoint out;
  out.x.values = x.values;
  out.p.values = p.values;
  out.x.values.head<3>() = l * x.velocity();
  out.x.values[kTheta] = to.theta;
  out.x.values[kPsi] = to.psi;
  out.x.values[kPhi] = to.phi;
  out.p.values.head<3>() = l * p.velocity();
  out.p.values.segment<3>(kTheta) =
      map_attitude_costate(from, to, p.values.segment<3>(kTheta));
  return out;
}

double transformed_yaw(const Rotation3& l, const EulerAngles& e) {
  const Eigen::Vector3d axis = l * body_axis(e);
  return std::asin(std::clamp(-axis.y(), -1.0, 1.0));
}

}  // namespace

double Rotation3::orthogonality_error() const {
  return (m_.transpose() * m_ - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

double wrap_angle(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Rotation3 axis_rotation(Axis axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d m;
  switch (axis) {
    case Axis::X:
      m << 1, 0, 0,
           0, c, s,
           0, -s, c;
      break;
    case Axis::Y:
      m << c, 0, -s,
           0, 1, 0,
           s, 0, c;
      break;
    case Axis::Z:
      m << c, s, 0,
           -s, c, 0,
           0, 0, 1;
      break;
  }
  return Rotation3(m);
}

Rotation3 attitude_matrix(const EulerAngles& e) {
  return axis_rotation(Axis::Z, e.phi) * axis_rotation(Axis::X, e.psi) *
         axis_rotation(Axis::Y, e.theta);
}

Eigen::Vector3d body_axis(double theta, double psi) {
  const double c_psi = std::cos(psi);
  return {std::sin(theta) * c_psi, -std::sin(psi), std::cos(theta) * c_psi};
}

Eigen::Vector3d body_axis(const EulerAngles& e) { return body_axis(e.theta, e.psi); }

EulerAngles euler_from_matrix(const Rotation3& l_br) {
  const Eigen::Matrix3d& m = l_br.matrix();
  EulerAngles e;
  e.psi = std::asin(std::clamp(-m(2, 1), -1.0, 1.0));
  const double c_psi = std::hypot(m(2, 0), m(2, 2));
  if (c_psi > 1e-12) {
    e.theta = std::atan2(m(2, 0), m(2, 2));
    e.phi = std::atan2(m(0, 1), m(1, 1));
  } else {
    // Only theta -+ phi is defined; put it all in theta.
    e.phi = 0.0;
    e.theta = std::atan2(-m(0, 2), m(0, 0));
  }
  e.theta = wrap_angle(e.theta);
  e.psi = wrap_angle(e.psi);
  e.phi = wrap_angle(e.phi);
  return e;
}

VelocityAngles velocity_to_angles(const Eigen::Vector3d& v) {
  const double speed = v.norm();
  if (speed == 0.0) throw Error(ErrorCode::ZeroVelocity, "velocity angles of a zero vector");
  VelocityAngles out;
  out.speed = speed;
  out.psi_v = std::asin(std::clamp(-v.y() / speed, -1.0, 1.0));
  out.theta_v = std::atan2(v.x(), v.z());
  out.xi = std::acos(std::clamp(v.x() / speed, -1.0, 1.0));
  out.kappa = (v.y() == 0.0 && v.z() == 0.0) ? 0.0 : std::atan2(v.y(), -v.z());
  return out;
}

Eigen::Vector3d velocity_from_angles(double speed, double theta_v, double psi_v) {
  return speed * body_axis(theta_v, psi_v);
}

Rotation3 frame_matrix(const FrameChange& fc) {
  return axis_rotation(Axis::X, fc.beta) * axis_rotation(fc.first_axis, fc.alpha);
}

EulerAngles transform_attitude(const FrameChange& fc, const EulerAngles& e) {
  return euler_from_matrix(attitude_matrix(e) * frame_matrix(fc).transpose());
}

EulerAngles inverse_transform_attitude(const FrameChange& fc, const EulerAngles& e) {
  return euler_from_matrix(attitude_matrix(e) * frame_matrix(fc));
}

Eigen::Matrix3d euler_rate_matrix(const EulerAngles& e) {
  const double s_psi = std::sin(e.psi), c_psi = std::cos(e.psi);
  const double s_phi = std::sin(e.phi), c_phi = std::cos(e.phi);
  Eigen::Matrix3d m;
  m << s_phi * c_psi, c_phi, 0,
       c_phi * c_psi, -s_phi, 0,
       -s_psi, 0, 1;
  return m;
}

PhasePoint apply_frame_change(const FrameChange& fc, const State& x, const Costate& p) {
  if (fc.is_identity()) return {x, p};
  return map_phase_point(frame_matrix(fc), x, p);
}

PhasePoint invert_frame_change(const FrameChange& fc, const State& x, const Costate& p) {
  if (fc.is_identity()) return {x, p};
  return map_phase_point(frame_matrix(fc).transpose(), x, p);
}

VehicleParams transform_vehicle(const FrameChange& fc, const VehicleParams& vp) {
  const Rotation3 l = frame_matrix(fc);
  VehicleParams out = vp;
  out.gravity = l * vp.gravity;
  out.radial_axis = l * vp.radial_axis;
  return out;
}

double choose_beta(double alpha, const EulerAngles& initial, const EulerAngles& final_attitude,
                   Axis first_axis) {
  auto residual = [&](double beta) {
    const Rotation3 l = frame_matrix({alpha, beta, first_axis});
    return transformed_yaw(l, initial) + transformed_yaw(l, final_attitude);
  };

  constexpr int kGrid = 720;
  std::vector<double> roots;
  double b_lo = -kPi;
  double f_lo = residual(b_lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double b_hi = -kPi + 2.0 * kPi * i / kGrid;
    const double f_hi = residual(b_hi);
    if (f_lo == 0.0) {
      roots.push_back(b_lo);
    } else if (f_lo * f_hi < 0.0) {
      double lo = b_lo, hi = b_hi, flo = f_lo;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    b_lo = b_hi;
    f_lo = f_hi;
  }
  if (f_lo == 0.0) roots.push_back(b_lo);
  if (roots.empty()) throw Error(ErrorCode::NoSolution, "no beta gives opposite yaws");

  double best = roots.front();
  for (double r : roots) {
    if (std::abs(wrap_angle(r)) < std::abs(wrap_angle(best))) best = r;
  }
  return wrap_angle(best);
}

}  // namespace launchopt
