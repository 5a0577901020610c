#include "launchopt/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "launchopt/error.hpp"

namespace launchopt {

namespace {

Residual invalid_residual() {
  return Residual::Constant(std::numeric_limits<double>::quiet_NaN());
}

double nearest_representative(double angle, double reference) {
  return reference + wrap_angle(angle - reference);
}

// Rows 6..8 of S1 / 5..7 of S2.
Eigen::Vector3d velocity_rows(const ExtremalPoint& end, const CaseSpec& c) {
  const EulerAngles d = c.direction_angles();
  const double st = std::sin(d.theta), ct = std::cos(d.theta);
  const double sp = std::sin(d.psi), cp = std::cos(d.psi);
  const Eigen::Vector3d v = end.x.velocity();
  const Eigen::Vector3d pv = end.p.velocity();
  const double scale = c.velocity_scale();
  return {(v.z() * sp + v.y() * ct * cp) / scale, (v.z() * st - v.x() * ct) / scale,
          pv.y() * sp - (pv.x() * st * cp + pv.z() * ct * cp)};
}

double terminal_hamiltonian(const ExtremalPoint& end, const HomotopyState& h,
                            const VehicleParams& vp) {
  const Control u = control_law_or_zero(end.p, vp, h);
  return hamiltonian(end.x, end.p, u, vp, h);
}

template <class Terminal>
Residual evaluate(const ShootingPoint& sp, const CaseSpec& c, const HomotopyState& h,
                  const ShootingSetup& setup, Terminal terminal) {
  if (!(sp.t_f > 0.0) || !sp.p0.values.allFinite() || !std::isfinite(sp.t_f)) {
    return invalid_residual();
  }
  if (setup.simulations) ++*setup.simulations;
  try {
    const State x0 = blend_initial_state(c, h.lambda1, setup.seed_attitude);
    const ExtremalPoint end =
        propagate_terminal(x0, sp.p0, sp.t_f, setup.vehicle, h, setup.n_steps);
    return terminal(end);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonFinite) return invalid_residual();
    throw;
  }
}

}  // namespace

Vector9 ShootingPoint::to_vector() const {
  Vector9 z;
  z.head<8>() = p0.values;
  z[8] = t_f;
  return z;
}

ShootingPoint ShootingPoint::from_vector(const Vector9& z) {
  ShootingPoint sp;
  sp.p0.values = z.head<8>();
  sp.t_f = z[8];
  return sp;
}

Eigen::Vector3d CaseSpec::target_direction() const {
  if (velocity_direction) return *velocity_direction;
  return body_axis(target.theta, target.psi);
}

EulerAngles CaseSpec::direction_angles() const {
  if (!velocity_direction) return {target.theta, target.psi, 0.0};
  const VelocityAngles va = velocity_to_angles(*velocity_direction);
  return {va.theta_v, va.psi_v, 0.0};
}

double CaseSpec::velocity_scale() const { return std::max(1.0, initial.velocity().norm()); }

void CaseSpec::validate() const {
  if (!initial.values.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "initial state must be finite");
  }
  if (initial.velocity().norm() == 0.0) {
    throw Error(ErrorCode::ZeroVelocity, "initial velocity must be nonzero");
  }
  if (velocity_direction && std::abs(velocity_direction->norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "velocity direction must be a unit vector");
  }
}

State blend_initial_state(const CaseSpec& c, double lambda1, const EulerAngles& seed) {
  State x = c.initial;
  const double l = lambda1;
  x.values[kTheta] = seed.theta * (1.0 - l) + c.initial.theta() * l;
  x.values[kPsi] = seed.psi * (1.0 - l) + c.initial.psi() * l;
  x.values[kPhi] = seed.phi * (1.0 - l) + c.initial.phi() * l;
  x.values[kOmegaX] = c.initial.omega_x() * l;
  x.values[kOmegaY] = c.initial.omega_y() * l;
  return x;
}

Trajectory shoot(const ShootingPoint& sp, const CaseSpec& c, const HomotopyState& h,
                 const ShootingSetup& setup) {
  if (setup.simulations) ++*setup.simulations;
  const State x0 = blend_initial_state(c, h.lambda1, setup.seed_attitude);
  return propagate(x0, sp.p0, sp.t_f, setup.vehicle, h, setup.n_steps);
}

Residual terminal_residual_s1(const ExtremalPoint& end, const CaseSpec& c,
                              const HomotopyState& h, const VehicleParams& vp) {
  Residual r;
  r[0] = end.p.omega_x();
  r[1] = end.p.omega_y();
  r[2] = end.p.theta();
  r[3] = end.p.psi();
  r[4] = end.p.phi();
  r[5] = terminal_hamiltonian(end, h, vp);
  r.tail<3>() = velocity_rows(end, c);
  return r;
}

Residual terminal_residual_s2(const ExtremalPoint& end, const CaseSpec& c,
                              const HomotopyState& h, const VehicleParams& vp) {
  if (!c.natural) {
    throw Error(ErrorCode::InvalidArgument, "natural endpoint not recorded");
  }
  const TerminalAttitude& e = *c.natural;
  const TerminalAttitude& f = c.target;
  const double l = h.lambda2;
  auto blend = [l](double natural, double target) { return (1.0 - l) * natural + l * target; };

  Residual r;
  r[0] = end.x.omega_x() - blend(e.omega_x, f.omega_x);
  r[1] = end.x.omega_y() - blend(e.omega_y, f.omega_y);
  r[2] = end.x.theta() - blend(e.theta, f.theta);
  r[3] = end.x.psi() - blend(e.psi, f.psi);
  r[4] = end.x.phi() - blend(e.phi, f.phi);
  r.segment<3>(5) = velocity_rows(end, c);
  r[8] = terminal_hamiltonian(end, h, vp);
  return r;
}

Residual terminal_conditions(const ExtremalPoint& end, const CaseSpec& c, const HomotopyState& h,
                             const VehicleParams& vp) {
  Residual r;
  r[0] = end.x.omega_x() - c.target.omega_x;
  r[1] = end.x.omega_y() - c.target.omega_y;
  r[2] = wrap_angle(end.x.theta() - c.target.theta);
  r[3] = wrap_angle(end.x.psi() - c.target.psi);
  r[4] = wrap_angle(end.x.phi() - c.target.phi);
  r.segment<3>(5) = velocity_rows(end, c);
  r[8] = terminal_hamiltonian(end, h, vp);
  return r;
}

Residual residual_s1(const ShootingPoint& sp, const CaseSpec& c, const HomotopyState& h,
                     const ShootingSetup& setup) {
  return evaluate(sp, c, h, setup, [&](const ExtremalPoint& end) {
    return terminal_residual_s1(end, c, h, setup.vehicle);
  });
}

Residual residual_s2(const ShootingPoint& sp, const CaseSpec& c, const HomotopyState& h,
                     const ShootingSetup& setup) {
  if (!c.natural) {
    throw Error(ErrorCode::InvalidArgument, "natural endpoint not recorded");
  }
  return evaluate(sp, c, h, setup, [&](const ExtremalPoint& end) {
    return terminal_residual_s2(end, c, h, setup.vehicle);
  });
}

bool is_planar(const CaseSpec& c, const VehicleParams& vp, double phi_star) {
  const State& x = c.initial;
  const bool initial = x.values[kVy] == 0.0 && x.psi() == 0.0 && x.phi() == 0.0 &&
                       x.omega_x() == 0.0;
  const bool target = c.target.psi == 0.0 && c.target.phi == 0.0 && c.target.omega_x == 0.0 &&
                      (!c.velocity_direction || c.velocity_direction->y() == 0.0);
  const bool vehicle = vp.gravity.y() == 0.0 && vp.radial_axis.y() == 0.0;
  return initial && target && vehicle && phi_star == 0.0;
}

CaseSpec record_natural_endpoint(const Trajectory& traj, const CaseSpec& c) {
  const ExtremalPoint& end = terminal_point(traj);
  CaseSpec out = c;
  TerminalAttitude natural;
  natural.theta = end.x.theta();
  natural.psi = end.x.psi();
  natural.phi = end.x.phi();
  natural.omega_x = end.x.omega_x();
  natural.omega_y = end.x.omega_y();
  out.natural = natural;
  out.target.theta = nearest_representative(c.target.theta, natural.theta);
  out.target.psi = nearest_representative(c.target.psi, natural.psi);
  out.target.phi = nearest_representative(c.target.phi, natural.phi);
  return out;
}

}  // namespace launchopt
