#include "launchopt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "launchopt/error.hpp"

namespace launchopt {

std::vector<CaseParameters> thin_cases(const std::vector<CaseParameters>& cases,
                                       std::size_t first, std::size_t stride) {
  if (stride == 0) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
  std::vector<CaseParameters> out;
  for (std::size_t i = first; i < cases.size(); i += stride) out.push_back(cases[i]);
  return out;
}

std::vector<CaseRecord> run_sweep(const std::vector<CaseParameters>& cases,
                                  const LauncherConfig& launcher, const SweepOptions& opts) {
  std::vector<CaseRecord> records(cases.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cases.size()) return;
      const std::size_t index = opts.first_index + i * opts.stride;
      CaseRecord rec;
      try {
        const RunOutcome r =
            solve_with_frame_search(make_case(cases[i]), launcher.vehicle, launcher.solver);
        rec = make_record(index, cases[i], r);
      } catch (const std::exception& e) {
        rec.index = index;
        rec.params = cases[i];
        rec.status = to_string(RunStatus::Failed);
        rec.failed_stage = "exception";
        rec.message = e.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      records[i] = rec;
      if (opts.on_record) opts.on_record(rec);
    }
  };

  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return records;
}

}  // namespace launchopt
