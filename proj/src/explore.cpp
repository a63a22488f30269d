#include <atomic>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ffpaxos/checker.hpp"

namespace ffpaxos {

namespace {

// Seeded acceptor partition: isolate a random minority for a window in the
// middle of the run.
PartitionWindow seeded_partition(std::uint64_t seed, int n,
                                 double horizon_ms) {
  StreamRng rng(seed ^ 0x7061727469746e00ULL);
  PartitionWindow w;
  w.start_ms = horizon_ms * 0.2;
  w.end_ms = horizon_ms * (0.3 + 0.2 * rng.u01());
  const int count = 1 + static_cast<int>(rng.next_u64() % (n / 2 > 0 ? n / 2 : 1));
  while (w.isolated.size() < count)
    w.isolated.add(static_cast<int>(rng.next_u64() % n));
  return w;
}

SimConfig seed_config(const SimConfig& base, std::uint64_t seed,
                      const ExploreOptions& options) {
  SimConfig cfg = base;
  cfg.seed = seed;
  if (options.adversarial) {
    cfg.link.drop = 0.1;
    cfg.link.dup = 0.05;
    cfg.link.delay.jitter = Jitter::exponential;
    cfg.link.delay.mean = 2.0 * cfg.link.delay.base_ms;
    cfg.partitions = {
        seeded_partition(seed, cfg.acceptors, options.horizon_ms)};
  }
  return cfg;
}

struct SeedResult {
  bool violated = false;
  std::vector<std::string> failed_invariants;
  int decisions = 0;
  int recoveries = 0;
};

}  // namespace

ExploreSummary explore(const SimConfig& base, const WorkloadSpec& workload,
                       const ExploreOptions& options) {
  ExploreSummary summary;
  if (options.seeds <= 0) return summary;

  std::vector<SeedResult> results(options.seeds);
  std::atomic<int> next{0};

  const auto worker = [&] {
    for (int i = next.fetch_add(1); i < options.seeds;
         i = next.fetch_add(1)) {
      const SimConfig cfg =
          seed_config(base, options.first_seed + i, options);
      const Trace trace =
          run_simulation(cfg, workload, options.horizon_ms, false);
      SeedResult& r = results[i];
      r.decisions = static_cast<int>(trace.decisions.size());
      for (const DecisionRecord& d : trace.decisions)
        if (d.round > RoundId(0)) ++r.recoveries;
      for (const MonitorVerdict& v : monitor(trace)) {
        if (v.pass) continue;
        r.violated = true;
        r.failed_invariants.push_back(to_string(v.id));
      }
    }
  };

  int jobs = options.jobs > 0
                 ? options.jobs
                 : static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, options.seeds);

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  summary.seeds_run = options.seeds;
  for (int i = 0; i < options.seeds; ++i) {
    const SeedResult& r = results[i];
    summary.total_decisions += r.decisions;
    summary.total_recoveries += r.recoveries;
    if (!r.violated) continue;
    ++summary.violations;
    if (!summary.first_failing_seed)
      summary.first_failing_seed = options.first_seed + i;
    for (const std::string& id : r.failed_invariants)
      ++summary.failures_by_invariant[id];
  }
  return summary;
}

std::string ExploreSummary::to_text() const {
  std::ostringstream os;
  os << "seeds=" << seeds_run << " violations=" << violations
     << " decisions=" << total_decisions
     << " recoveries=" << total_recoveries;
  if (first_failing_seed) os << " first_failing_seed=" << *first_failing_seed;
  for (const auto& [id, count] : failures_by_invariant)
    os << " " << id << "=" << count;
  return os.str();
}

std::string ExploreSummary::to_json() const {
  nlohmann::json j;
  j["seeds_run"] = seeds_run;
  j["violations"] = violations;
  j["decisions"] = total_decisions;
  j["recoveries"] = total_recoveries;
  if (first_failing_seed)
    j["first_failing_seed"] = *first_failing_seed;
  else
    j["first_failing_seed"] = nullptr;
  j["failures_by_invariant"] = failures_by_invariant;
  return j.dump();
}

}  // namespace ffpaxos
