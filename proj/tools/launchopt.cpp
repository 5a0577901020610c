// Command-line driver: single-case solve, factorial sweep, and re-summary of
// a sweep's JSON-lines output.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "launchopt/config.hpp"
#include "launchopt/continuation.hpp"
#include "launchopt/error.hpp"
#include "launchopt/report.hpp"
#include "launchopt/sweep.hpp"

namespace fs = std::filesystem;
using namespace launchopt;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Loaded {
  LauncherConfig launcher;
  std::optional<CaseParameters> case_params;
  std::optional<SweepSpec> sweep;
};

// Later files override earlier ones section by section.
Loaded load(const std::vector<std::string>& paths) {
  Loaded out;
  bool have_launcher = false;
  std::optional<SolverOptions> solver;
  for (const std::string& p : paths) {
    Config c = parse_config(p);
    if (c.launcher) {
      out.launcher = *c.launcher;
      have_launcher = true;
    }
    if (c.solver) solver = c.solver;
    if (c.case_params) out.case_params = c.case_params;
    if (c.sweep) out.sweep = c.sweep;
  }
  if (!have_launcher) throw Error(ErrorCode::ParseError, "no [launcher] section in the given files");
  if (solver) out.launcher.solver = *solver;
  apply_env_overrides(out.launcher.solver);
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return os;
}

int run_solve(const std::vector<std::string>& files, bool no_frame_change,
              std::optional<double> stop_lambda4, const fs::path& out_dir) {
  Loaded cfg = load(files);
  if (!cfg.case_params) throw Error(ErrorCode::ParseError, "no [case] section in the given files");
  if (no_frame_change) cfg.launcher.solver.frame_change = false;
  if (stop_lambda4) cfg.launcher.solver.stop_lambda4 = *stop_lambda4;

  const CaseSpec c = make_case(*cfg.case_params);
  const RunOutcome r = solve_with_frame_search(c, cfg.launcher.vehicle, cfg.launcher.solver);

  fs::create_directories(out_dir);
  {
    std::ofstream js = open_out(out_dir / "summary.json");
    js << run_summary_json(r) << '\n';
  }
  std::printf("status %s  t_f %.4f s  lambda4 %.6g  residual %.2e  time %.2f s  simulations %zu\n",
              to_string(r.status), r.t_f, r.homotopy.lambda4, r.residual_norm, r.total_seconds,
              r.total_simulations);
  if (r.frame) {
    std::printf("frame alpha %.2f deg  beta %.4f deg  attempts %d\n", r.frame->alpha * 180 / std::numbers::pi,
                r.frame->beta * 180 / std::numbers::pi, r.frame_attempts);
  }
  if (r.status == RunStatus::Failed) {
    std::fprintf(stderr, "failed in %s: %s\n", r.failed_stage.c_str(), r.message.c_str());
    return kExitFailed;
  }
  std::ofstream csv = open_out(out_dir / "trajectory.csv");
  write_trajectory_csv(csv, r, c, cfg.launcher.vehicle);
  return 0;
}

int run_sweep_cmd(const std::vector<std::string>& files, const std::string& sweep_file,
                  bool no_frame_change, int jobs, std::size_t first, std::size_t stride,
                  std::optional<std::size_t> limit, const fs::path& out_dir) {
  std::vector<std::string> all = files;
  all.push_back(sweep_file);
  Loaded cfg = load(all);
  if (!cfg.sweep) throw Error(ErrorCode::ParseError, "no [sweep] section in " + sweep_file);
  if (no_frame_change) cfg.launcher.solver.frame_change = false;

  std::vector<CaseParameters> cases = thin_cases(cfg.sweep->generate(), first, stride);
  if (limit && *limit < cases.size()) cases.resize(*limit);
  std::printf("sweep %s: %zu cases, %d jobs, frame change %s\n", cfg.sweep->name.c_str(),
              cases.size(), jobs, cfg.launcher.solver.frame_change ? "on" : "off");

  fs::create_directories(out_dir);
  std::ofstream lines = open_out(out_dir / "cases.jsonl");
  std::size_t done = 0;
  SweepOptions opts;
  opts.jobs = jobs;
  opts.first_index = first;
  opts.stride = stride;
  opts.on_record = [&](const CaseRecord& rec) {
    lines << to_json_line(rec) << '\n';
    lines.flush();
    ++done;
    std::fprintf(stderr, "[%zu/%zu] case %zu %s t_f %.3f  %.1f s\n", done, cases.size(),
                 rec.index, rec.status.c_str(), rec.t_f, rec.total_seconds);
  };
  const std::vector<CaseRecord> records = run_sweep(cases, cfg.launcher, opts);

  const SweepSummary s = summarize(records);
  const std::string title = cfg.sweep->name + (cfg.launcher.solver.frame_change
                                                   ? " (with change of frame)"
                                                   : " (without change of frame)");
  const std::string table = format_summary(s, title);
  std::cout << table;
  open_out(out_dir / "summary.txt") << table;
  open_out(out_dir / "summary.json") << summary_json(s) << '\n';
  return 0;
}

int run_summarize(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::vector<CaseRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(parse_json_line(line));
  }
  std::cout << format_summary(summarize(records), path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-time attitude and velocity steering of launchers by indirect shooting"};
  app.require_subcommand(1);

  std::vector<std::string> config_files;
  std::string case_file;
  std::string sweep_file;
  std::string out_dir = ".";
  bool no_frame_change = false;
  double stop_lambda4 = 1.0;
  int jobs = 1;
  std::size_t limit = 0;
  std::size_t first = 0;
  std::size_t stride = 1;
  std::string jsonl;

  CLI::App* solve = app.add_subcommand("solve", "Solve one case");
  solve->add_option("--config", config_files, "Launcher/solver config file(s)")->required();
  solve->add_option("--case", case_file, "File with a [case] section");
  solve->add_flag("--no-frame-change", no_frame_change, "Disable the frame-change retries");
  CLI::Option* stop_opt = solve->add_option("--stop-lambda4", stop_lambda4,
                                            "Stop the last continuation at this value")
                              ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--out", out_dir, "Output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a factorial sweep");
  sweep->add_option("--config", config_files, "Launcher/solver config file(s)")->required();
  sweep->add_option("--sweep", sweep_file, "File with a [sweep] section")->required();
  sweep->add_flag("--no-frame-change", no_frame_change, "Disable the frame-change retries");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--first", first, "Index of the first case to run");
  sweep->add_option("--stride", stride, "Run every N-th case")->check(CLI::PositiveNumber);
  CLI::Option* limit_opt = sweep->add_option("--limit", limit, "Stop after N cases");
  sweep->add_option("--out", out_dir, "Output directory");

  CLI::App* summarize_cmd = app.add_subcommand("summarize", "Summarize a cases.jsonl file");
  summarize_cmd->add_option("file", jsonl, "JSON-lines file written by sweep")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      std::vector<std::string> files = config_files;
      if (!case_file.empty()) files.push_back(case_file);
      return run_solve(files, no_frame_change,
                       stop_opt->count() ? std::optional<double>(stop_lambda4) : std::nullopt,
                       out_dir);
    }
    if (sweep->parsed()) {
      return run_sweep_cmd(config_files, sweep_file, no_frame_change, jobs, first, stride,
                           limit_opt->count() ? std::optional<std::size_t>(limit) : std::nullopt,
                           out_dir);
    }
    return run_summarize(jsonl);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::ParseError ? kExitUsage : kExitFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
}
