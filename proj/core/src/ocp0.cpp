#include "launchopt/ocp0.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "launchopt/error.hpp"

namespace launchopt {

namespace {

struct Candidate {
  double t_f;
  double k;
};

}  // namespace

Ocp0Solution solve_ocp0(const Ocp0Problem& prob) {
  if (!(prob.a > 0.0)) throw Error(ErrorCode::InvalidArgument, "thrust acceleration must be > 0");
  if (std::abs(prob.w.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "target direction must be a unit vector");
  }
  const Eigen::Vector3d& w = prob.w;
  const Eigen::Vector3d& v0 = prob.v0;
  const Eigen::Vector3d& g = prob.g;
  const double a = prob.a;
  const double gw = g.dot(w);
  const double vw = v0.dot(w);

  Ocp0Solution sol;
  sol.a1 = a * a - (gw * w - g).squaredNorm();
  sol.a2 = 2.0 * (vw * gw - v0.dot(g));
  sol.a3 = -(vw * w - v0).squaredNorm();

  if (std::abs(sol.a1) <= 1e-12 * a * a) {
    throw Error(ErrorCode::DegenerateThrust, "thrust does not dominate transverse gravity");
  }
  double disc = sol.a2 * sol.a2 - 4.0 * sol.a1 * sol.a3;
  const double disc_scale = sol.a2 * sol.a2 + std::abs(4.0 * sol.a1 * sol.a3);
  if (disc < 0.0) {
    if (disc < -1e-14 * disc_scale) throw Error(ErrorCode::Infeasible, "negative discriminant");
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);

  std::vector<double> roots{(-sol.a2 + sq) / (2.0 * sol.a1)};
  if (sol.a1 < 0.0) roots.push_back((-sol.a2 - sq) / (2.0 * sol.a1));

  double best_t = std::numeric_limits<double>::infinity();
  double best_k = 0.0;
  double back_t = std::numeric_limits<double>::infinity();
  double back_k = 0.0;
  for (double t : roots) {
    if (!(t >= 0.0)) continue;
    const double k = vw + gw * t;
    // k = 0 means v(t_f) = 0, parallel to any direction.
    const bool oriented = t == 0.0 ? vw > 0.0 : k >= 0.0;
    if (oriented && t < best_t) {
      best_t = t;
      best_k = k;
    } else if (!oriented && t > 0.0 && k < 0.0 && t < back_t) {
      back_t = t;
      back_k = k;
    }
  }
  if (!std::isfinite(best_t) && prob.orientation == Orientation::Either &&
      std::isfinite(back_t)) {
    best_t = back_t;
    best_k = back_k;
    sol.reversed = true;
  }
  if (!std::isfinite(best_t)) {
    throw Error(ErrorCode::Infeasible, "no nonnegative root with v(t_f) along +w");
  }
  sol.t_f = best_t;

  if (sol.t_f > 0.0) {
    sol.e_star = ((best_k * w - v0) / sol.t_f - g) / a;
  } else {
    // Already aligned: any direction cancelling transverse gravity keeps v // w.
    Eigen::Vector3d d = gw * w - g;
    if (d.norm() == 0.0) d = w.unitOrthogonal();
    sol.e_star = d.normalized();
  }

  const double denom = a + sol.e_star.dot(g);
  if (std::abs(denom) <= 1e-12 * a) {
    throw Error(ErrorCode::DegenerateThrust, "a + <e*, g> vanishes");
  }
  sol.p_v = (-Costate::p0 / denom) * sol.e_star;

  const EulerAngles e = extract_euler(sol.e_star, 0.0, 0.0);
  sol.theta_star = e.theta;
  sol.psi_star = e.psi;
  return sol;
}

EulerAngles extract_euler(const Eigen::Vector3d& e, double psi0, double psif) {
  const double ey = std::clamp(e.y(), -1.0, 1.0);
  EulerAngles principal;
  principal.psi = std::asin(-ey);
  principal.theta = std::atan2(e.x(), e.z());

  EulerAngles alternate;
  alternate.psi = wrap_angle(std::numbers::pi - principal.psi);
  alternate.theta = std::atan2(-e.x(), -e.z());

  auto cost = [&](double psi) { return std::abs(psi0 - psi) + std::abs(psif - psi); };
  return cost(alternate.psi) < cost(principal.psi) ? alternate : principal;
}

PhasePoint embed_in_mtcp(const Ocp0Problem& prob, const Ocp0Solution& sol) {
  PhasePoint pt;
  pt.x.values.head<3>() = prob.v0;
  pt.x.values[kTheta] = sol.theta_star;
  pt.x.values[kPsi] = sol.psi_star;
  pt.x.values[kPhi] = sol.phi_star;
  pt.p.values.head<3>() = sol.p_v;
  return pt;
}

}  // namespace launchopt
