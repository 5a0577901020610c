#include "launchopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "launchopt/error.hpp"

namespace launchopt {

namespace {

double saturate(double value) { return std::clamp(value, -1.0, 1.0); }

struct Trig {
  double s_theta, c_theta, s_psi, c_psi, s_phi, c_phi;

  explicit Trig(const State& x)
      : s_theta(std::sin(x.theta())),
        c_theta(std::cos(x.theta())),
        s_psi(std::sin(x.psi())),
        c_psi(std::cos(x.psi())),
        s_phi(std::sin(x.phi())),
        c_phi(std::cos(x.phi())) {}
};

void require_regular(double c_psi) {
  if (std::abs(c_psi) < kGimbalThreshold) {
    throw Error(ErrorCode::NearGimbalLock,
                "|cos psi| = " + std::to_string(std::abs(c_psi)) + " below threshold");
  }
}

Eigen::Vector3d velocity_rate(const State& x, const Trig& t, const VehicleParams& vp,
                              double lambda3) {
  Eigen::Vector3d rate(vp.a * t.s_theta * t.c_psi, -vp.a * t.s_psi, vp.a * t.c_theta * t.c_psi);
  rate += vp.gravity;
  if (lambda3 != 0.0 && vp.has_aerodynamics()) {
    rate += lambda3 * aero_acceleration(x.velocity(), vp);
  }
  return rate;
}

Eigen::Vector3d velocity_costate_rate(const State& x, const Costate& p, const VehicleParams& vp,
                                      double lambda3) {
  if (lambda3 == 0.0 || !vp.has_aerodynamics()) return Eigen::Vector3d::Zero();
  return -lambda3 * aero_jacobian(x.velocity(), vp).transpose() * p.velocity();
}

}  // namespace

void VehicleParams::validate() const {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "thrust acceleration a must be > 0");
  if (!(b_bar > 0.0)) throw Error(ErrorCode::InvalidArgument, "b_bar must be > 0");
  if (cx < 0.0 || cz < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "aerodynamic coefficients must be >= 0");
  }
  if (!gravity.allFinite()) throw Error(ErrorCode::InvalidArgument, "gravity must be finite");
  if (std::abs(radial_axis.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "radial axis must be a unit vector");
  }
}

double Control::norm() const { return std::hypot(u1, u2); }

void HomotopyState::validate() const {
  for (double l : {lambda1, lambda2, lambda3, lambda4}) {
    if (!(l >= 0.0 && l <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "continuation parameters must lie in [0, 1]");
    }
  }
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
}

Eigen::Vector2d switching_function(const Costate& p, const VehicleParams& vp) {
  return {vp.b_bar * p.omega_y(), -vp.b_bar * p.omega_x()};
}

Control control_law_or_zero(const Costate& p, const VehicleParams& vp,
                            const HomotopyState& h) noexcept {
  const Eigen::Vector2d phi = switching_function(p, vp);
  const double denom = 2.0 * h.gamma * (1.0 - h.lambda4) + h.lambda4 * phi.norm();
  if (denom == 0.0) return {};
  return {saturate(phi[0] / denom), saturate(phi[1] / denom)};
}

Control control_law(const Costate& p, const VehicleParams& vp, const HomotopyState& h) {
  if (h.lambda4 == 1.0 && p.omega_x() == 0.0 && p.omega_y() == 0.0) {
    throw Error(ErrorCode::SingularControl, "switching function vanishes at lambda4 = 1");
  }
  return control_law_or_zero(p, vp, h);
}

// Drag -c_x v v_vec. Lift c_z v^2 (cos 2xi r - cos xi v_hat) / sin xi, which is
// the launch-frame expression with the radial axis r kept explicit so it
// rotates with frame changes.
Eigen::Vector3d aero_acceleration(const Eigen::Vector3d& v, const VehicleParams& vp) {
  const double speed = v.norm();
  Eigen::Vector3d acc = -vp.cx * speed * v;
  if (vp.cz != 0.0) {
    const double q = v.dot(vp.radial_axis);
    const double rho = std::sqrt(std::max(0.0, speed * speed - q * q));
    if (rho > 1e-12 * speed) {
      acc += vp.cz * (speed / rho) * ((q * q - rho * rho) * vp.radial_axis - q * v);
    }
  }
  return acc;
}

Eigen::Matrix3d aero_jacobian(const Eigen::Vector3d& v, const VehicleParams& vp) {
  const double speed = v.norm();
  Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
  if (speed == 0.0) return jac;
  jac -= vp.cx * (speed * Eigen::Matrix3d::Identity() + v * v.transpose() / speed);
  if (vp.cz != 0.0) {
    const Eigen::Vector3d& r = vp.radial_axis;
    const double q = v.dot(r);
    const double rho = std::sqrt(std::max(0.0, speed * speed - q * q));
    if (rho > 1e-12 * speed) {
      const double s = speed / rho;
      const Eigen::Vector3d grad_s =
          v / (speed * rho) - speed * (v - q * r) / (rho * rho * rho);
      const Eigen::Vector3d w = (2.0 * q * q - speed * speed) * r - q * v;
      const Eigen::Matrix3d dw = r * (4.0 * q * r - 2.0 * v).transpose() - v * r.transpose() -
                                 q * Eigen::Matrix3d::Identity();
      jac += vp.cz * (w * grad_s.transpose() + s * dw);
    }
  }
  return jac;
}

Vector8 dynamics(const State& x, const Control& u, const VehicleParams& vp, double lambda3) {
  const Trig t(x);
  require_regular(t.c_psi);
  const double s = x.omega_x() * t.s_phi + x.omega_y() * t.c_phi;
  const double c = x.omega_x() * t.c_phi - x.omega_y() * t.s_phi;

  Vector8 rate;
  rate.head<3>() = velocity_rate(x, t, vp, lambda3);
  rate[kTheta] = s / t.c_psi;
  rate[kPsi] = c;
  rate[kPhi] = s * t.s_psi / t.c_psi;
  rate[kOmegaX] = -vp.b_bar * u.u2;
  rate[kOmegaY] = vp.b_bar * u.u1;
  return rate;
}

Vector8 adjoint_dynamics(const State& x, const Costate& p, const Control& /*u*/,
                         const VehicleParams& vp, double lambda3) {
  const Trig t(x);
  require_regular(t.c_psi);
  const double s = x.omega_x() * t.s_phi + x.omega_y() * t.c_phi;
  const double c = x.omega_x() * t.c_phi - x.omega_y() * t.s_phi;
  const double c2 = t.c_psi * t.c_psi;
  const double tan_psi = t.s_psi / t.c_psi;
  const double a = vp.a;
  const double p_vx = p.values[kVx], p_vy = p.values[kVy], p_vz = p.values[kVz];
  const double p_th = p.theta(), p_ps = p.psi(), p_ph = p.phi();

  Vector8 rate;
  rate.head<3>() = velocity_costate_rate(x, p, vp, lambda3);
  rate[kTheta] = -a * t.c_psi * (p_vx * t.c_theta - p_vz * t.s_theta);
  rate[kPsi] = a * (t.s_psi * t.s_theta * p_vx + t.c_psi * p_vy + t.c_theta * t.s_psi * p_vz) -
               t.s_psi * s / c2 * p_th - s / c2 * p_ph;
  rate[kPhi] = -c / t.c_psi * p_th + s * p_ps - tan_psi * c * p_ph;
  rate[kOmegaX] = -t.s_phi / t.c_psi * p_th - t.c_phi * p_ps - tan_psi * t.s_phi * p_ph;
  rate[kOmegaY] = -t.c_phi / t.c_psi * p_th + t.s_phi * p_ps - tan_psi * t.c_phi * p_ph;
  return rate;
}

FieldPair singular_limit_field(const State& x, const Costate& p, const Control& u,
                               const VehicleParams& vp, double lambda3) {
  const Trig t(x);
  const double c = x.omega_x() * t.c_phi - x.omega_y() * t.s_phi;

  FieldPair f;
  f.state_rate.head<3>() = velocity_rate(x, t, vp, lambda3);
  f.state_rate[kTheta] = 0.0;
  f.state_rate[kPsi] = c;
  f.state_rate[kPhi] = 0.0;
  f.state_rate[kOmegaX] = -vp.b_bar * u.u2;
  f.state_rate[kOmegaY] = vp.b_bar * u.u1;

  f.costate_rate.head<3>() = velocity_costate_rate(x, p, vp, lambda3);
  f.costate_rate[kTheta] = 0.0;
  f.costate_rate[kPsi] =
      vp.a * (t.s_psi * (t.s_theta * p.values[kVx] + t.c_theta * p.values[kVz]) +
              t.c_psi * p.values[kVy]);
  f.costate_rate[kPhi] = 0.0;
  f.costate_rate[kOmegaX] = -p.psi() * t.c_phi;
  f.costate_rate[kOmegaY] = p.psi() * t.s_phi;
  return f;
}

FieldPair extremal_field(const State& x, const Costate& p, const Control& u,
                         const VehicleParams& vp, double lambda3) {
  if (std::abs(std::cos(x.psi())) < kGimbalThreshold) {
    return singular_limit_field(x, p, u, vp, lambda3);
  }
  return {dynamics(x, u, vp, lambda3), adjoint_dynamics(x, p, u, vp, lambda3)};
}

double hamiltonian(const State& x, const Costate& p, const Control& u, const VehicleParams& vp,
                   const HomotopyState& h) {
  const Vector8 f = extremal_field(x, p, u, vp, h.lambda3).state_rate;
  const double u2 = u.u1 * u.u1 + u.u2 * u.u2;
  return p.values.dot(f) + Costate::p0 + Costate::p0 * h.gamma * u2 * (1.0 - h.lambda4);
}

}  // namespace launchopt
