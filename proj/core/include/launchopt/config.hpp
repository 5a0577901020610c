#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "launchopt/continuation.hpp"
#include "launchopt/model.hpp"
#include "launchopt/shooting.hpp"

namespace launchopt {

// Case data as written in config files: m/s, degrees, degrees per second.
struct CaseParameters {
  double v0 = 0.0;
  double theta_v0 = 0.0;
  double psi_v0 = 0.0;
  double theta0 = 0.0;
  double psi0 = 0.0;
  double phi0 = 0.0;
  double omega_x0 = 0.0;
  double omega_y0 = 0.0;
  double theta_f = 0.0;
  double psi_f = 0.0;
  double phi_f = 0.0;
  double omega_xf = 0.0;
  double omega_yf = 0.0;
};

CaseSpec make_case(const CaseParameters& p);

struct LauncherConfig {
  std::string name;
  VehicleParams vehicle;
  SolverOptions solver;
};

// "ariane-launch", "ariane-flight", "pegasus". Throws InvalidArgument.
LauncherConfig launcher_preset(const std::string& name);

// Swept variables, in the order used for case generation (last varies fastest).
enum class SweepVariable { V0, ThetaV0, PsiV0, Theta0, Psi0, ThetaF, PsiF, OmegaX0, OmegaY0 };

const char* to_string(SweepVariable v);

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct SweepSpec {
  std::string name;
  CaseParameters base;
  std::map<SweepVariable, std::vector<double>> grids;
  // theta_v0 follows theta0 instead of being swept.
  bool tie_theta_v0 = false;
  std::optional<Bounds> theta_f_minus_theta0;
  std::optional<Bounds> theta_v0_minus_theta0;

  // Lexicographic over the grids, restrictions applied.
  std::vector<CaseParameters> generate() const;
};

SweepSpec sweep_preset(const std::string& name);

struct Config {
  std::optional<LauncherConfig> launcher;
  // Set when a [solver] section is present; also copied into launcher.
  std::optional<SolverOptions> solver;
  std::optional<CaseParameters> case_params;
  std::optional<SweepSpec> sweep;
};

// "a:b:s" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_grid(const std::string& text);

// Sectioned key = value text. Throws ParseError naming line and field.
Config parse_config_text(const std::string& text, const std::string& source = "<string>");
Config parse_config(const std::filesystem::path& path);

// LAUNCHOPT_STEPS, LAUNCHOPT_TOL, LAUNCHOPT_GAMMA, LAUNCHOPT_MIN_STEP,
// LAUNCHOPT_MAX_FRAME_ATTEMPTS, LAUNCHOPT_DELTA_ALPHA_DEG.
void apply_env_overrides(SolverOptions& opts);

}  // namespace launchopt
