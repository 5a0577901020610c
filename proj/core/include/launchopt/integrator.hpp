#pragma once

#include <cstddef>
#include <vector>

#include "launchopt/model.hpp"

namespace launchopt {

inline constexpr int kDefaultSteps = 512;

struct ExtremalPoint {
  State x;
  Costate p;
  double tau = 0.0;
};

struct Trajectory {
  std::vector<ExtremalPoint> nodes;
  std::vector<Control> controls;
  double t_f = 0.0;
  // Bang-bang direction reversals located inside steps (lambda4 = 1 only).
  int switches = 0;

  double time(std::size_t i) const { return nodes[i].tau * t_f; }
};

// RK4 on tau in [0, 1] of the time-scaled extremal field t_f (f, -dH/dx) with
// the control recomputed at every stage. At lambda4 = 1 a step in which the
// switching function reverses is split at the reversal so the control stays
// smooth on each sub-step. Throws NonFinite with the tau of failure.
Trajectory propagate(const State& x0, const Costate& p0, double t_f, const VehicleParams& vp,
                     const HomotopyState& h, int n_steps = kDefaultSteps);

// Same march without storing the history.
ExtremalPoint propagate_terminal(const State& x0, const Costate& p0, double t_f,
                                 const VehicleParams& vp, const HomotopyState& h,
                                 int n_steps = kDefaultSteps);

const ExtremalPoint& terminal_point(const Trajectory& traj);

// Classical RK4 for y' = f(t, y) with n equal steps.
template <class Vec, class F>
Vec rk4_integrate(F&& f, Vec y, double t0, double t1, int n_steps) {
  const double dt = (t1 - t0) / n_steps;
  for (int i = 0; i < n_steps; ++i) {
    const double t = t0 + i * dt;
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * dt, Vec(y + 0.5 * dt * k1));
    const Vec k3 = f(t + 0.5 * dt, Vec(y + 0.5 * dt * k2));
    const Vec k4 = f(t + dt, Vec(y + dt * k3));
    y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace launchopt
