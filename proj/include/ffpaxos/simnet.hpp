#pragma once

#include <cstdint>
#include <vector>

#include "ffpaxos/errors.hpp"
#include "ffpaxos/quorum.hpp"
#include "ffpaxos/round.hpp"
#include "ffpaxos/trace.hpp"

namespace ffpaxos {

enum class Jitter { constant, uniform, exponential };

/// Per-link one-way delay: base plus a jitter draw.
///   constant:    base
///   uniform:     base + U[lo, hi)
///   exponential: base + Exp(mean)
struct DelayModel {
  double base_ms = 5.0;
  Jitter jitter = Jitter::constant;
  double lo = 0.0;     // uniform lower bound
  double hi = 0.0;     // uniform upper bound
  double mean = 0.0;   // exponential mean

  double sample(double u) const;
};

struct LinkModel {
  DelayModel delay;
  double drop = 0.0;
  double dup = 0.0;
};

/// Acceptors listed in `isolated` cannot exchange messages with anyone
/// else while start <= send time < end.
struct PartitionWindow {
  double start_ms = 0;
  double end_ms = 0;
  NodeSet isolated;
};

struct SimConfig {
  std::uint64_t seed = 0;
  int acceptors = 0;
  int proposers = 1;
  int learners = 1;
  QuorumSystem quorums = QuorumSystem::cardinality(1, 1, 1, 1);
  RoundConfig rounds;
  LinkModel link;
  std::vector<PartitionWindow> partitions;
  double phase_timeout_ms = 150.0;     // per-round progress watchdog
  double conflict_timeout_ms = 150.0;  // fast-path watchdog after a submit
  bool allow_invalid = false;
  bool nacks = false;
};

struct WorkloadSpec {
  enum class Mode { open_loop, paired_races };

  Mode mode = Mode::open_loop;
  int clients = 1;
  double warmup_ms = 300.0;  // first submission; leaves room for round setup

  // open_loop: fixed-rate submissions with seeded jitter; a submission
  // shares its predecessor's instance with probability conflict_fraction.
  double rate_per_s = 0.0;
  double duration_s = 0.0;
  double conflict_fraction = 0.10;

  // paired_races: `races` pairs of submissions to the same instance,
  // race_interval_ms apart, pairs spaced race_spacing_ms.
  int races = 0;
  double race_interval_ms = 2.0;
  double race_spacing_ms = 50.0;
};

/// Deterministic counter-based random stream; draws depend only on the
/// key, so streams for different links and purposes never interfere.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) : key_(key) {}
  std::uint64_t next_u64();
  double u01();  // [0, 1)

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct DeliveryPlan {
  bool dropped = false;
  std::vector<double> offsets;  // delay of each delivered copy
};

/// One message's fate on a link: drop, deliver, or deliver twice, with
/// delays drawn from the link's model.
DeliveryPlan schedule_delivery(const LinkModel& link, StreamRng& drop_rng,
                               StreamRng& dup_rng, StreamRng& delay_rng);

std::uint64_t sim_config_hash(const SimConfig& cfg, const WorkloadSpec& wl);

/// Drives a full cluster from t=0 to the horizon. Refuses quorum systems
/// that fail validation unless cfg.allow_invalid is set.
Trace run_simulation(const SimConfig& cfg, const WorkloadSpec& wl,
                     double horizon_ms, bool capture_events = true);

}  // namespace ffpaxos
