#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffpaxos/simnet.hpp"
#include "ffpaxos/trace.hpp"

namespace ffpaxos {

enum class InvariantId {
  agreement,
  per_round_agreement,
  validity,
  acceptor_monotonicity,
  o4_uniqueness,
};

const char* to_string(InvariantId id);

struct MonitorVerdict {
  InvariantId id = InvariantId::agreement;
  bool pass = true;
  std::string counterexample;  // offending trace records, empty when passing
};

/// Evaluates every safety invariant over a complete trace. Traces with no
/// decisions pass vacuously.
std::vector<MonitorVerdict> monitor(const Trace& trace);

bool all_pass(const std::vector<MonitorVerdict>& verdicts);

struct ExploreOptions {
  int seeds = 1000;
  std::uint64_t first_seed = 0;
  int jobs = 0;             // 0 = hardware concurrency
  bool adversarial = true;  // drop/dup/jitter/partition overrides
  double horizon_ms = 5000.0;
};

struct ExploreSummary {
  int seeds_run = 0;
  int violations = 0;
  std::optional<std::uint64_t> first_failing_seed;
  std::map<std::string, int> failures_by_invariant;
  long long total_decisions = 0;
  long long total_recoveries = 0;  // decisions above round 0

  std::string to_text() const;
  std::string to_json() const;
};

/// Runs `seeds` independent simulations and monitors each trace. With
/// adversarial defaults every run gets drop=0.1, dup=0.05, exponential
/// jitter at twice the base delay, and a seeded acceptor partition window.
ExploreSummary explore(const SimConfig& base, const WorkloadSpec& workload,
                       const ExploreOptions& options);

/// Catalog of hand-scheduled histories on deliberately invalid quorum
/// systems; each produces two decided values for the monitors to flag.
std::vector<std::string> scenario_catalog();

Trace scripted_counterexample(const std::string& name);

/// Variant used to show the schedules are tied to their broken systems: a
/// quorum system that passes validation is refused.
Trace scripted_counterexample(const std::string& name,
                              const QuorumSystem& system);

}  // namespace ffpaxos
