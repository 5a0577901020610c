#include "launchopt/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <utility>

#include "launchopt/error.hpp"

namespace launchopt {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': not a number: '" + t + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& field) {
  const double v = parse_number(text, field);
  if (v != std::floor(v) || v < 0 || v > 1e9) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': expected a non-negative integer");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw Error(ErrorCode::ParseError, "field '" + field + "': expected a boolean");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

Eigen::Vector3d parse_vector3(const std::string& text, const std::string& field) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': expected three comma-separated values");
  }
  return {parse_number(parts[0], field), parse_number(parts[1], field),
          parse_number(parts[2], field)};
}

Bounds parse_bounds(const std::string& text, const std::string& field) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw Error(ErrorCode::ParseError, "field '" + field + "': expected lo:hi");
  Bounds b{parse_number(parts[0], field), parse_number(parts[1], field)};
  if (b.lo > b.hi) throw Error(ErrorCode::ParseError, "field '" + field + "': lo > hi");
  return b;
}

double* case_field(CaseParameters& p, const std::string& key) {
  static const std::map<std::string, double CaseParameters::*> fields{
      {"v0", &CaseParameters::v0},           {"theta_v0", &CaseParameters::theta_v0},
      {"psi_v0", &CaseParameters::psi_v0},   {"theta0", &CaseParameters::theta0},
      {"psi0", &CaseParameters::psi0},       {"phi0", &CaseParameters::phi0},
      {"omega_x0", &CaseParameters::omega_x0}, {"omega_y0", &CaseParameters::omega_y0},
      {"theta_f", &CaseParameters::theta_f}, {"psi_f", &CaseParameters::psi_f},
      {"phi_f", &CaseParameters::phi_f},     {"omega_xf", &CaseParameters::omega_xf},
      {"omega_yf", &CaseParameters::omega_yf}};
  const auto it = fields.find(key);
  return it == fields.end() ? nullptr : &(p.*(it->second));
}

std::optional<SweepVariable> sweep_variable(const std::string& key) {
  static const std::map<std::string, SweepVariable> vars{
      {"v0", SweepVariable::V0},         {"theta_v0", SweepVariable::ThetaV0},
      {"psi_v0", SweepVariable::PsiV0},  {"theta0", SweepVariable::Theta0},
      {"psi0", SweepVariable::Psi0},     {"theta_f", SweepVariable::ThetaF},
      {"psi_f", SweepVariable::PsiF},    {"omega_x0", SweepVariable::OmegaX0},
      {"omega_y0", SweepVariable::OmegaY0}};
  const auto it = vars.find(key);
  if (it == vars.end()) return std::nullopt;
  return it->second;
}

double& variable_ref(CaseParameters& p, SweepVariable v) {
  switch (v) {
    case SweepVariable::V0: return p.v0;
    case SweepVariable::ThetaV0: return p.theta_v0;
    case SweepVariable::PsiV0: return p.psi_v0;
    case SweepVariable::Theta0: return p.theta0;
    case SweepVariable::Psi0: return p.psi0;
    case SweepVariable::ThetaF: return p.theta_f;
    case SweepVariable::PsiF: return p.psi_f;
    case SweepVariable::OmegaX0: return p.omega_x0;
    case SweepVariable::OmegaY0: return p.omega_y0;
  }
  return p.v0;
}

bool within(double value, const std::optional<Bounds>& b) {
  constexpr double kSlack = 1e-9;
  return !b || (value >= b->lo - kSlack && value <= b->hi + kSlack);
}

struct Entry {
  std::string key;
  std::string value;
  int line;
};

using Sections = std::map<std::string, std::vector<Entry>>;

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

// Runs fn, prefixing ParseError / InvalidArgument messages with the location.
template <class Fn>
void located(const std::string& source, const Entry& e, Fn&& fn) {
  try {
    fn();
  } catch (const Error& err) {
    fail_at(source, e.line, err.what());
  }
}

const Entry* find_preset(const std::vector<Entry>& entries) {
  for (const Entry& e : entries) {
    if (e.key == "preset") return &e;
  }
  return nullptr;
}

LauncherConfig parse_launcher(const std::vector<Entry>& entries, const std::string& source) {
  LauncherConfig cfg;
  cfg.name = "custom";
  if (const Entry* p = find_preset(entries)) {
    located(source, *p, [&] { cfg = launcher_preset(trim(p->value)); });
  }
  for (const Entry& e : entries) {
    located(source, e, [&] {
      VehicleParams& v = cfg.vehicle;
      if (e.key == "preset") return;
      if (e.key == "name") {
        cfg.name = trim(e.value);
      } else if (e.key == "a") {
        v.a = parse_number(e.value, e.key);
      } else if (e.key == "b_bar" || e.key == "b") {
        v.b_bar = parse_number(e.value, e.key);
      } else if (e.key == "cx") {
        v.cx = parse_number(e.value, e.key);
      } else if (e.key == "cz") {
        v.cz = parse_number(e.value, e.key);
      } else if (e.key == "gravity") {
        v.gravity = parse_vector3(e.value, e.key);
      } else if (e.key == "radial_axis") {
        v.radial_axis = parse_vector3(e.value, e.key);
      } else {
        throw Error(ErrorCode::ParseError, "unknown key '" + e.key + "' in [launcher]");
      }
    });
  }
  try {
    cfg.vehicle.validate();
  } catch (const Error& err) {
    throw Error(ErrorCode::ParseError, source + ": [launcher]: " + err.what());
  }
  return cfg;
}

void parse_solver(const std::vector<Entry>& entries, const std::string& source,
                  SolverOptions& s) {
  for (const Entry& e : entries) {
    located(source, e, [&] {
      if (e.key == "gamma") {
        s.gamma = parse_number(e.value, e.key);
        if (!(s.gamma > 0.0)) throw Error(ErrorCode::ParseError, "field 'gamma' must be > 0");
      } else if (e.key == "steps") {
        s.n_steps = parse_int(e.value, e.key);
        if (s.n_steps < 16) throw Error(ErrorCode::ParseError, "field 'steps' must be >= 16");
      } else if (e.key == "tol") {
        s.continuation.solver.tol = parse_number(e.value, e.key);
      } else if (e.key == "max_eval") {
        s.continuation.solver.max_eval = parse_int(e.value, e.key);
      } else if (e.key == "initial_step") {
        s.continuation.initial_step = parse_number(e.value, e.key);
      } else if (e.key == "min_step") {
        s.continuation.min_step = parse_number(e.value, e.key);
      } else if (e.key == "max_step") {
        s.continuation.max_step = parse_number(e.value, e.key);
      } else if (e.key == "stop_lambda4") {
        s.stop_lambda4 = parse_number(e.value, e.key);
      } else if (e.key == "phi_star") {
        s.phi_star = parse_number(e.value, e.key) * kDeg;
      } else if (e.key == "frame_change") {
        s.frame_change = parse_bool(e.value, e.key);
      } else if (e.key == "delta_alpha") {
        s.delta_alpha = parse_number(e.value, e.key) * kDeg;
      } else if (e.key == "max_frame_attempts") {
        s.max_frame_attempts = parse_int(e.value, e.key);
      } else if (e.key == "first_axis") {
        const std::string axis = trim(e.value);
        if (axis == "y") {
          s.first_axis = Axis::Y;
        } else if (axis == "z") {
          s.first_axis = Axis::Z;
        } else {
          throw Error(ErrorCode::ParseError, "field 'first_axis': expected y or z");
        }
      } else if (e.key == "ocp0_orientation") {
        const std::string o = trim(e.value);
        if (o == "forward") {
          s.ocp0_orientation = Orientation::Forward;
        } else if (o == "either") {
          s.ocp0_orientation = Orientation::Either;
        } else {
          throw Error(ErrorCode::ParseError,
                      "field 'ocp0_orientation': expected forward or either");
        }
      } else {
        throw Error(ErrorCode::ParseError, "unknown key '" + e.key + "' in [solver]");
      }
    });
  }
}

CaseParameters parse_case(const std::vector<Entry>& entries, const std::string& source) {
  CaseParameters p;
  for (const Entry& e : entries) {
    located(source, e, [&] {
      double* field = case_field(p, e.key);
      if (!field) throw Error(ErrorCode::ParseError, "unknown key '" + e.key + "' in [case]");
      *field = parse_number(e.value, e.key);
    });
  }
  return p;
}

SweepSpec parse_sweep(const std::vector<Entry>& entries, const std::string& source) {
  SweepSpec spec;
  spec.name = "custom";
  if (const Entry* p = find_preset(entries)) {
    located(source, *p, [&] { spec = sweep_preset(trim(p->value)); });
  }
  for (const Entry& e : entries) {
    located(source, e, [&] {
      if (e.key == "preset") return;
      if (e.key == "name") {
        spec.name = trim(e.value);
      } else if (e.key == "restrict.theta_f_minus_theta0") {
        spec.theta_f_minus_theta0 = parse_bounds(e.value, e.key);
      } else if (e.key == "restrict.theta_v0_minus_theta0") {
        spec.theta_v0_minus_theta0 = parse_bounds(e.value, e.key);
      } else if (e.key == "theta_v0" && trim(e.value) == "theta0") {
        spec.tie_theta_v0 = true;
        spec.grids.erase(SweepVariable::ThetaV0);
      } else if (auto var = sweep_variable(e.key)) {
        std::vector<double> values;
        try {
          values = parse_grid(e.value);
        } catch (const Error& err) {
          throw Error(ErrorCode::ParseError, "field '" + e.key + "': " + err.what());
        }
        if (*var == SweepVariable::ThetaV0) spec.tie_theta_v0 = false;
        if (values.size() == 1) {
          spec.grids.erase(*var);
          variable_ref(spec.base, *var) = values.front();
        } else {
          spec.grids[*var] = values;
        }
      } else if (double* field = case_field(spec.base, e.key)) {
        *field = parse_number(e.value, e.key);
      } else {
        throw Error(ErrorCode::ParseError, "unknown key '" + e.key + "' in [sweep]");
      }
    });
  }
  return spec;
}

}  // namespace

CaseSpec make_case(const CaseParameters& p) {
  CaseSpec c;
  c.initial.values.head<3>() = velocity_from_angles(p.v0, p.theta_v0 * kDeg, p.psi_v0 * kDeg);
  c.initial.values[kTheta] = p.theta0 * kDeg;
  c.initial.values[kPsi] = p.psi0 * kDeg;
  c.initial.values[kPhi] = p.phi0 * kDeg;
  c.initial.values[kOmegaX] = p.omega_x0 * kDeg;
  c.initial.values[kOmegaY] = p.omega_y0 * kDeg;
  c.target.theta = p.theta_f * kDeg;
  c.target.psi = p.psi_f * kDeg;
  c.target.phi = p.phi_f * kDeg;
  c.target.omega_x = p.omega_xf * kDeg;
  c.target.omega_y = p.omega_yf * kDeg;
  return c;
}

LauncherConfig launcher_preset(const std::string& name) {
  LauncherConfig cfg;
  cfg.name = name;
  if (name == "ariane-launch") {
    cfg.vehicle.a = 18.0;
    cfg.vehicle.b_bar = 0.0138;
  } else if (name == "ariane-flight") {
    cfg.vehicle.a = 25.0;
    cfg.vehicle.b_bar = 0.0158;
  } else if (name == "pegasus") {
    cfg.vehicle.a = 24.873;
    cfg.vehicle.b_bar = 0.0607;
    cfg.vehicle.cx = 5e-6;
    cfg.vehicle.cz = 5e-6;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown launcher preset '" + name + "'");
  }
  return cfg;
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::V0: return "v0";
    case SweepVariable::ThetaV0: return "theta_v0";
    case SweepVariable::PsiV0: return "psi_v0";
    case SweepVariable::Theta0: return "theta0";
    case SweepVariable::Psi0: return "psi0";
    case SweepVariable::ThetaF: return "theta_f";
    case SweepVariable::PsiF: return "psi_f";
    case SweepVariable::OmegaX0: return "omega_x0";
    case SweepVariable::OmegaY0: return "omega_y0";
  }
  return "unknown";
}

std::vector<CaseParameters> SweepSpec::generate() const {
  std::vector<std::pair<SweepVariable, const std::vector<double>*>> axes;
  for (const auto& [var, values] : grids) {
    if (tie_theta_v0 && var == SweepVariable::ThetaV0) continue;
    axes.emplace_back(var, &values);
  }

  std::vector<CaseParameters> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (const auto& axis : axes) {
    if (axis.second->empty()) return out;
  }
  while (true) {
    CaseParameters p = base;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      variable_ref(p, axes[k].first) = (*axes[k].second)[idx[k]];
    }
    if (tie_theta_v0) p.theta_v0 = p.theta0;
    if (within(p.theta_f - p.theta0, theta_f_minus_theta0) &&
        within(p.theta_v0 - p.theta0, theta_v0_minus_theta0)) {
      out.push_back(p);
    }
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < axes[k].second->size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

SweepSpec sweep_preset(const std::string& name) {
  SweepSpec s;
  s.name = name;
  if (name == "ariane-launch") {
    s.base.theta_v0 = 90.0;
    s.base.theta0 = 90.0;
    s.grids[SweepVariable::V0] = parse_grid("50:475:25");
    s.grids[SweepVariable::ThetaF] = parse_grid("60:85:5");
  } else if (name == "ariane-flight") {
    s.grids[SweepVariable::V0] = parse_grid("2000:6000:800");
    s.grids[SweepVariable::Theta0] = parse_grid("0:60:7.5");
    s.grids[SweepVariable::ThetaF] = parse_grid("0:60:7.5");
    s.tie_theta_v0 = true;
    s.theta_f_minus_theta0 = Bounds{-20.0, 20.0};
  } else if (name == "pegasus") {
    s.base.v0 = 300.0;
    s.grids[SweepVariable::ThetaV0] = parse_grid("-10:0:5");
    s.grids[SweepVariable::Theta0] = parse_grid("0:50:5");
    s.grids[SweepVariable::ThetaF] = parse_grid("60:90:10");
    s.grids[SweepVariable::PsiF] = parse_grid("0:90:30");
    s.grids[SweepVariable::OmegaX0] = parse_grid("-10:10:5");
    s.theta_v0_minus_theta0 = Bounds{-10.0, 0.0};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown sweep preset '" + name + "'");
  }
  return s;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw Error(ErrorCode::ParseError, "range must be start:stop:step");
    const double start = parse_number(parts[0], "start");
    const double stop = parse_number(parts[1], "stop");
    const double step = parse_number(parts[2], "step");
    if (!(step > 0.0) || stop < start) {
      throw Error(ErrorCode::ParseError, "range needs step > 0 and stop >= start");
    }
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 100000) throw Error(ErrorCode::ParseError, "range has too many values");
    for (long i = 0; i < n; ++i) out.push_back(start + i * step);
  } else {
    for (const std::string& part : split(t, ',')) out.push_back(parse_number(part, "value"));
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty grid");
  return out;
}

Config parse_config_text(const std::string& text, const std::string& source) {
  Sections sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(source, line_no, "malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current != "launcher" && current != "solver" && current != "case" &&
          current != "sweep") {
        fail_at(source, line_no, "unknown section [" + current + "]");
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_at(source, line_no, "expected key = value");
    if (current.empty()) fail_at(source, line_no, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail_at(source, line_no, "empty key");
    sections[current].push_back({key, trim(line.substr(eq + 1)), line_no});
  }

  Config cfg;
  if (sections.count("launcher")) cfg.launcher = parse_launcher(sections["launcher"], source);
  if (sections.count("solver")) {
    SolverOptions s;
    parse_solver(sections["solver"], source, s);
    cfg.solver = s;
    if (cfg.launcher) cfg.launcher->solver = s;
  }
  if (sections.count("case")) cfg.case_params = parse_case(sections["case"], source);
  if (sections.count("sweep")) cfg.sweep = parse_sweep(sections["sweep"], source);
  return cfg;
}

Config parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

void apply_env_overrides(SolverOptions& opts) {
  auto read = [](const char* name, const std::function<void(const std::string&)>& set) {
    if (const char* v = std::getenv(name)) {
      try {
        set(v);
      } catch (const Error& err) {
        throw Error(ErrorCode::ParseError, std::string("environment ") + name + ": " + err.what());
      }
    }
  };
  read("LAUNCHOPT_STEPS", [&](const std::string& v) { opts.n_steps = parse_int(v, "steps"); });
  read("LAUNCHOPT_TOL",
       [&](const std::string& v) { opts.continuation.solver.tol = parse_number(v, "tol"); });
  read("LAUNCHOPT_GAMMA", [&](const std::string& v) { opts.gamma = parse_number(v, "gamma"); });
  read("LAUNCHOPT_MIN_STEP", [&](const std::string& v) {
    opts.continuation.min_step = parse_number(v, "min_step");
  });
  read("LAUNCHOPT_MAX_FRAME_ATTEMPTS", [&](const std::string& v) {
    opts.max_frame_attempts = parse_int(v, "max_frame_attempts");
  });
  read("LAUNCHOPT_DELTA_ALPHA_DEG", [&](const std::string& v) {
    opts.delta_alpha = parse_number(v, "delta_alpha") * kDeg;
  });
}

}  // namespace launchopt
