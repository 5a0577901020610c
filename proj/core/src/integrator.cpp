#include "launchopt/integrator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "launchopt/error.hpp"

namespace launchopt {

namespace {

using Vector16 = Eigen::Matrix<double, 16, 1>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

State state_of(const Vector16& y) { return State{y.head<8>()}; }
Costate costate_of(const Vector16& y) { return Costate{y.tail<8>()}; }

// Unit control along Phi, keeping the branch of ref across a zero of Phi.
Control bang_control(const Eigen::Vector2d& phi, const Eigen::Vector2d& ref) {
  const double n = phi.norm();
  const double rn = ref.norm();
  if (rn == 0.0) {
    if (n == 0.0) return {};
    return {phi[0] / n, phi[1] / n};
  }
  if (n <= 1e-9 * rn) return {ref[0] / rn, ref[1] / rn};
  const double sign = phi.dot(ref) < 0.0 ? -1.0 : 1.0;
  return {sign * phi[0] / n, sign * phi[1] / n};
}

class Marcher {
 public:
  Marcher(double t_f, const VehicleParams& vp, const HomotopyState& h)
      : t_f_(t_f), vp_(vp), h_(h), bang_(h.lambda4 == 1.0) {}

  bool bang() const { return bang_; }

  Eigen::Vector2d phi(const Vector16& y) const { return switching_function(costate_of(y), vp_); }

  Control control(const Vector16& y, const Eigen::Vector2d& ref) const {
    if (bang_) return bang_control(phi(y), ref);
    return control_law_or_zero(costate_of(y), vp_, h_);
  }

  Vector16 field(const Vector16& y, const Eigen::Vector2d& ref) const {
    const FieldPair f = extremal_field(state_of(y), costate_of(y), control(y, ref), vp_, h_.lambda3);
    Vector16 dy;
    dy.head<8>() = t_f_ * f.state_rate;
    dy.tail<8>() = t_f_ * f.costate_rate;
    return dy;
  }

  Vector16 rk4(const Vector16& y, double dt, const Eigen::Vector2d& ref) const {
    const Vector16 k1 = field(y, ref);
    const Vector16 k2 = field(y + 0.5 * dt * k1, ref);
    const Vector16 k3 = field(y + 0.5 * dt * k2, ref);
    const Vector16 k4 = field(y + dt * k3, ref);
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // One grid step; splits at a reversal of Phi when in bang mode.
  Vector16 step(const Vector16& y, double dt, int& switches) const {
    if (!bang_) return rk4(y, dt, {});
    const Eigen::Vector2d ref0 = phi(y);
    const Vector16 trial = rk4(y, dt, ref0);
    const Eigen::Vector2d ref1 = phi(trial);
    if (ref0.dot(ref1) >= 0.0 || ref0.squaredNorm() == 0.0 || !trial.allFinite()) return trial;
    const double s = locate_reversal(y, dt, ref0, ref1);
    ++switches;
    const Vector16 mid = rk4(y, s, ref0);
    return rk4(mid, dt - s, ref1);
  }

 private:
  // Root of <Phi(y(s)), ref0> on (0, dt), Newton safeguarded by bisection.
  double locate_reversal(const Vector16& y, double dt, const Eigen::Vector2d& ref0,
                         const Eigen::Vector2d& ref1) const {
    const double g0 = ref0.squaredNorm();
    const double g1 = ref1.dot(ref0);
    double lo = 0.0, hi = dt;
    double s = dt * g0 / (g0 - g1);
    for (int it = 0; it < 60; ++it) {
      const Vector16 ys = rk4(y, s, ref0);
      const double gs = phi(ys).dot(ref0);
      if (gs > 0.0) {
        lo = s;
      } else {
        hi = s;
      }
      if (hi - lo <= 4.0 * kEps * dt) break;
      const Vector16 dy = field(ys, ref0);
      const Eigen::Vector2d dphi(vp_.b_bar * dy[8 + kOmegaY], -vp_.b_bar * dy[8 + kOmegaX]);
      const double dg = dphi.dot(ref0);
      double next = dg != 0.0 ? s - gs / dg : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) <= 2.0 * kEps * dt) {
        s = next;
        break;
      }
      s = next;
    }
    return s;
  }

  double t_f_;
  const VehicleParams& vp_;
  const HomotopyState& h_;
  bool bang_;
};

Vector16 pack(const State& x, const Costate& p) {
  Vector16 y;
  y.head<8>() = x.values;
  y.tail<8>() = p.values;
  return y;
}

void check_inputs(double t_f, int n_steps) {
  if (!(t_f > 0.0) || !std::isfinite(t_f)) {
    throw Error(ErrorCode::InvalidArgument, "t_f must be positive and finite");
  }
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
}

void check_finite(const Vector16& y, double tau) {
  if (!y.allFinite()) {
    throw Error(ErrorCode::NonFinite, "extremal left the finite range at tau = " +
                                          std::to_string(tau));
  }
}

}  // namespace

Trajectory propagate(const State& x0, const Costate& p0, double t_f, const VehicleParams& vp,
                     const HomotopyState& h, int n_steps) {
  check_inputs(t_f, n_steps);
  const Marcher m(t_f, vp, h);
  const double dt = 1.0 / n_steps;

  Trajectory traj;
  traj.t_f = t_f;
  traj.nodes.reserve(n_steps + 1);
  traj.controls.reserve(n_steps + 1);

  Vector16 y = pack(x0, p0);
  check_finite(y, 0.0);
  auto record = [&](double tau) {
    traj.nodes.push_back({state_of(y), costate_of(y), tau});
    traj.controls.push_back(m.control(y, m.phi(y)));
  };
  record(0.0);
  for (int i = 0; i < n_steps; ++i) {
    y = m.step(y, dt, traj.switches);
    const double tau = i + 1 == n_steps ? 1.0 : (i + 1) * dt;
    check_finite(y, tau);
    record(tau);
  }
  return traj;
}

ExtremalPoint propagate_terminal(const State& x0, const Costate& p0, double t_f,
                                 const VehicleParams& vp, const HomotopyState& h, int n_steps) {
  check_inputs(t_f, n_steps);
  const Marcher m(t_f, vp, h);
  const double dt = 1.0 / n_steps;
  int switches = 0;
  Vector16 y = pack(x0, p0);
  check_finite(y, 0.0);
  for (int i = 0; i < n_steps; ++i) {
    y = m.step(y, dt, switches);
    check_finite(y, (i + 1) * dt);
  }
  return {state_of(y), costate_of(y), 1.0};
}

const ExtremalPoint& terminal_point(const Trajectory& traj) {
  if (traj.nodes.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  return traj.nodes.back();
}

}  // namespace launchopt
