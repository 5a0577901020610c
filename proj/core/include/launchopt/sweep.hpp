#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "launchopt/config.hpp"
#include "launchopt/report.hpp"

namespace launchopt {

struct SweepOptions {
  int jobs = 1;
  // Record index of cases[i] is first_index + i * stride, for thinned grids.
  std::size_t first_index = 0;
  std::size_t stride = 1;
  // Called under a lock as each case finishes, in completion order.
  std::function<void(const CaseRecord&)> on_record;
};

// Solves every case on a pool of worker threads. Results are returned in case
// order; per-case failures are recorded, never thrown.
// Every stride-th case starting at first.
std::vector<CaseParameters> thin_cases(const std::vector<CaseParameters>& cases,
                                       std::size_t first, std::size_t stride);

std::vector<CaseRecord> run_sweep(const std::vector<CaseParameters>& cases,
                                  const LauncherConfig& launcher, const SweepOptions& opts);

}  // namespace launchopt
