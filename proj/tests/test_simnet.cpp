#include <doctest.h>

#include <algorithm>
#include <set>

#include "ffpaxos/simnet.hpp"

using namespace ffpaxos;

namespace {

SimConfig base_config(std::uint64_t seed) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.acceptors = 11;
  cfg.proposers = 1;
  cfg.learners = 1;
  cfg.quorums = QuorumSystem::cardinality(11, 9, 3, 7);
  cfg.rounds = RoundConfig{RoundConfig::Classification::even_fast, 1};
  cfg.link.delay.base_ms = 5.0;
  return cfg;
}

WorkloadSpec one_shot() {
  WorkloadSpec wl;
  wl.mode = WorkloadSpec::Mode::open_loop;
  wl.rate_per_s = 100.0;
  wl.duration_s = 0.01;  // exactly one submission
  wl.conflict_fraction = 0.0;
  wl.warmup_ms = 100.0;
  return wl;
}

int instances_decided(const Trace& trace) {
  std::set<int> decided;
  for (const DecisionRecord& d : trace.decisions) decided.insert(d.instance);
  return static_cast<int>(decided.size());
}

}  // namespace

TEST_CASE("delivery plans follow the link model") {
  StreamRng drop(1), dup(2), delay(3);

  SUBCASE("no faults, constant delay") {
    LinkModel link;
    link.delay.base_ms = 5.0;
    const auto plan = schedule_delivery(link, drop, dup, delay);
    CHECK(!plan.dropped);
    REQUIRE(plan.offsets.size() == 1);
    CHECK(plan.offsets[0] == doctest::Approx(5.0));
  }

  SUBCASE("drop probability one always drops") {
    LinkModel link;
    link.drop = 1.0;
    for (int i = 0; i < 50; ++i)
      CHECK(schedule_delivery(link, drop, dup, delay).dropped);
  }

  SUBCASE("duplication probability one delivers exactly twice") {
    LinkModel link;
    link.dup = 1.0;
    for (int i = 0; i < 50; ++i) {
      const auto plan = schedule_delivery(link, drop, dup, delay);
      CHECK(!plan.dropped);
      CHECK(plan.offsets.size() == 2);
    }
  }

  SUBCASE("jitter respects the model bounds") {
    LinkModel link;
    link.delay = {2.0, Jitter::uniform, 1.0, 3.0, 0.0};
    for (int i = 0; i < 200; ++i) {
      const auto plan = schedule_delivery(link, drop, dup, delay);
      CHECK(plan.offsets[0] >= 3.0);
      CHECK(plan.offsets[0] < 5.0);
    }
    link.delay = {2.0, Jitter::exponential, 0.0, 0.0, 4.0};
    for (int i = 0; i < 200; ++i)
      CHECK(schedule_delivery(link, drop, dup, delay).offsets[0] >= 2.0);
  }
}

TEST_CASE("random streams are deterministic and independent") {
  StreamRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double u = a.u01();
    CHECK(u == b.u01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  StreamRng a2(42);
  int same = 0;
  for (int i = 0; i < 100; ++i)
    if (a2.u01() == c.u01()) ++same;
  CHECK(same == 0);
}

TEST_CASE("failure-free run decides every submitted instance once") {
  const auto trace = run_simulation(base_config(1), one_shot(), 2000.0);
  REQUIRE(trace.submissions.size() == 1);
  REQUIRE(trace.decisions.size() == 1);
  CHECK(trace.decisions[0].round == RoundId(0));  // fast path
  CHECK(trace.decisions[0].value == trace.submissions[0].value);
  CHECK(trace.faults.empty());
}

TEST_CASE("identical config and seed reproduce the trace byte for byte") {
  const auto a = run_simulation(base_config(7), one_shot(), 2000.0);
  const auto b = run_simulation(base_config(7), one_shot(), 2000.0);
  CHECK(a.to_text() == b.to_text());
  CHECK(!a.to_text().empty());

  const auto c = run_simulation(base_config(8), one_shot(), 2000.0);
  CHECK(a.to_text() != c.to_text());
}

TEST_CASE("messages are never delivered before they are sent") {
  auto cfg = base_config(3);
  cfg.link.delay = {1.0, Jitter::exponential, 0.0, 0.0, 5.0};
  cfg.link.dup = 0.2;
  WorkloadSpec wl = one_shot();
  wl.rate_per_s = 500.0;
  wl.duration_s = 0.02;
  const auto trace = run_simulation(cfg, wl, 3000.0);
  double prev = 0.0;
  for (const TraceEvent& e : trace.events) {
    CHECK(e.time >= prev);  // dispatch order is virtual-time order
    prev = e.time;
  }
  for (const DecisionRecord& d : trace.decisions) {
    const auto submit =
        std::find_if(trace.submissions.begin(), trace.submissions.end(),
                     [&](const SubmitRecord& s) {
                       return s.instance == d.instance;
                     });
    REQUIRE(submit != trace.submissions.end());
    CHECK(d.time >= submit->time);
  }
}

TEST_CASE("liveness under quiescence") {
  // No faults, one proposer, generous timeouts: everything decides.
  auto cfg = base_config(11);
  WorkloadSpec wl;
  wl.rate_per_s = 200.0;
  wl.duration_s = 0.1;  // 20 submissions
  wl.conflict_fraction = 0.2;
  wl.clients = 3;
  wl.warmup_ms = 100.0;
  const auto trace = run_simulation(cfg, wl, 10000.0);
  int instances = 0;
  for (const SubmitRecord& s : trace.submissions)
    instances = std::max(instances, s.instance + 1);
  CHECK(instances_decided(trace) == instances);
  CHECK(trace.faults.empty());
}

TEST_CASE("partitioned acceptors are unreachable during the window") {
  auto cfg = base_config(5);
  // Cut off 5 acceptors for the whole run; 6 remain, below q1=9, so no
  // round ever completes phase-1 and nothing is decided.
  PartitionWindow w;
  w.start_ms = 0.0;
  w.end_ms = 1e9;
  for (int i = 0; i < 5; ++i) w.isolated.add(i);
  cfg.partitions.push_back(w);
  const auto trace = run_simulation(cfg, one_shot(), 1500.0);
  CHECK(trace.decisions.empty());
  for (const TraceEvent& e : trace.events) {
    if (e.kind != "deliver") continue;
    for (int i = 0; i < 5; ++i) {
      const std::string acc = "acc" + std::to_string(i);
      CHECK(e.node != acc);
      CHECK(!e.payload.ends_with("from " + acc));
    }
  }

  // A window that heals lets the run finish.
  cfg.partitions[0].end_ms = 400.0;
  const auto healed = run_simulation(cfg, one_shot(), 5000.0);
  CHECK(instances_decided(healed) == 1);
}

TEST_CASE("invalid quorum systems are refused unless allowed") {
  auto cfg = base_config(1);
  cfg.quorums = QuorumSystem::cardinality(11, 5, 3, 7);  // 5+14 <= 22
  CHECK_THROWS_AS(run_simulation(cfg, one_shot(), 100.0), ConfigError);
  cfg.allow_invalid = true;
  CHECK_NOTHROW(run_simulation(cfg, one_shot(), 100.0));
}

TEST_CASE("misconfigured simulations are rejected") {
  auto cfg = base_config(1);
  cfg.acceptors = 10;  // quorum system says 11
  CHECK_THROWS_AS(run_simulation(cfg, one_shot(), 100.0), ConfigError);

  cfg = base_config(1);
  cfg.link.drop = 1.5;
  CHECK_THROWS_AS(run_simulation(cfg, one_shot(), 100.0), ConfigError);

  cfg = base_config(1);
  cfg.partitions.push_back({10.0, 5.0, NodeSet{0}});
  CHECK_THROWS_AS(run_simulation(cfg, one_shot(), 100.0), ConfigError);

  // Even proposer counts starve the round-0 owner of classic rounds.
  cfg = base_config(1);
  cfg.proposers = 2;
  cfg.rounds.proposers = 2;
  CHECK_THROWS_AS(run_simulation(cfg, one_shot(), 100.0), ConfigError);
}

TEST_CASE("a racing fast round recovers into a classic round, one decision") {
  // Majority fast-paxos style system embedded into the engine: any 3/2
  // vote split leaves the 4-of-5 fast quorum unreachable.
  SimConfig cfg;
  cfg.acceptors = 5;
  cfg.proposers = 1;
  cfg.learners = 1;
  cfg.quorums = LegacyQuorumSystem::cardinality(5, 3, 4).to_quorum_system();
  cfg.rounds = RoundConfig{RoundConfig::Classification::even_fast, 1};
  cfg.link.delay = {5.0, Jitter::exponential, 0.0, 0.0, 5.0};

  WorkloadSpec wl;
  wl.mode = WorkloadSpec::Mode::paired_races;
  wl.races = 1;
  wl.race_interval_ms = 0.0;  // simultaneous proposals
  wl.clients = 2;
  wl.warmup_ms = 100.0;

  bool recovery_seen = false;
  for (std::uint64_t seed = 0; seed < 50 && !recovery_seen; ++seed) {
    cfg.seed = seed;
    const auto trace = run_simulation(cfg, wl, 5000.0);
    REQUIRE(instances_decided(trace) == 1);
    CHECK(trace.faults.empty());
    std::set<std::string> decided_values;
    for (const DecisionRecord& d : trace.decisions)
      decided_values.insert(d.value.token);
    REQUIRE(decided_values.size() == 1);
    if (trace.decisions[0].round > RoundId(0)) {
      recovery_seen = true;
      std::set<std::string> submitted;
      for (const SubmitRecord& s : trace.submissions)
        submitted.insert(s.value.token);
      CHECK(submitted.count(*decided_values.begin()) == 1);
    }
  }
  CHECK(recovery_seen);
}

TEST_CASE("zero-rate workloads produce an empty trace") {
  WorkloadSpec wl;
  wl.rate_per_s = 0.0;
  const auto trace = run_simulation(base_config(1), wl, 1000.0);
  CHECK(trace.submissions.empty());
  CHECK(trace.decisions.empty());
  CHECK(trace.events.empty());
}
