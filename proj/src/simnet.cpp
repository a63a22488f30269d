#include "ffpaxos/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>
#include <variant>

#include "ffpaxos/acceptor.hpp"
#include "ffpaxos/coordinator.hpp"
#include "ffpaxos/learner.hpp"

namespace ffpaxos {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a_str(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  return buf;
}

enum Purpose : int { kDrop = 0, kDup = 1, kDelay = 2 };

struct Submission {
  double time = 0;
  int instance = 0;
  int client = 0;
  Value value;
  bool race = false;
};

}  // namespace

std::uint64_t StreamRng::next_u64() {
  return splitmix64(key_ ^ splitmix64(counter_++));
}

double StreamRng::u01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DelayModel::sample(double u) const {
  switch (jitter) {
    case Jitter::constant: return base_ms;
    case Jitter::uniform: return base_ms + lo + u * (hi - lo);
    case Jitter::exponential: return base_ms - mean * std::log1p(-u);
  }
  return base_ms;
}

DeliveryPlan schedule_delivery(const LinkModel& link, StreamRng& drop_rng,
                               StreamRng& dup_rng, StreamRng& delay_rng) {
  DeliveryPlan plan;
  if (drop_rng.u01() < link.drop) {
    plan.dropped = true;
    return plan;
  }
  plan.offsets.push_back(link.delay.sample(delay_rng.u01()));
  if (dup_rng.u01() < link.dup)
    plan.offsets.push_back(link.delay.sample(delay_rng.u01()));
  return plan;
}

std::uint64_t sim_config_hash(const SimConfig& cfg, const WorkloadSpec& wl) {
  std::ostringstream os;
  os << cfg.acceptors << '|' << cfg.proposers << '|' << cfg.learners << '|'
     << cfg.quorums.describe() << '|';
  if (!cfg.quorums.is_cardinality()) {
    for (QuorumFamily f :
         {QuorumFamily::phase1, QuorumFamily::phase2_classic,
          QuorumFamily::phase2_fast})
      for (const NodeSet& s : cfg.quorums.declared(f)) os << s.bits() << ',';
  }
  os << static_cast<int>(cfg.rounds.classification) << '|'
     << cfg.rounds.proposers << '|' << cfg.link.delay.base_ms << '|'
     << static_cast<int>(cfg.link.delay.jitter) << '|' << cfg.link.delay.lo
     << '|' << cfg.link.delay.hi << '|' << cfg.link.delay.mean << '|'
     << cfg.link.drop << '|' << cfg.link.dup << '|';
  for (const PartitionWindow& p : cfg.partitions)
    os << p.start_ms << ':' << p.end_ms << ':' << p.isolated.bits() << ',';
  os << cfg.phase_timeout_ms << '|' << cfg.conflict_timeout_ms << '|'
     << cfg.allow_invalid << '|' << cfg.nacks << '|'
     << static_cast<int>(wl.mode) << '|' << wl.clients << '|' << wl.warmup_ms
     << '|' << wl.rate_per_s << '|' << wl.duration_s << '|'
     << wl.conflict_fraction << '|' << wl.races << '|' << wl.race_interval_ms
     << '|' << wl.race_spacing_ms;
  return fnv1a_str(0xcbf29ce484222325ULL, os.str());
}

std::string Trace::to_text() const {
  std::ostringstream os;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash));
  os << "# ffpaxos-trace v1\n# seed " << seed << "\n# config " << hash << "\n";
  for (const TraceEvent& e : events)
    os << format_time(e.time) << '\t' << e.node << '\t' << e.kind << '\t'
       << e.payload << '\n';
  return os.str();
}

namespace {

struct DeliverEvent {
  int instance;
  Message msg;  // concrete destination
};
struct TimerEvent {
  int instance;
  int proposer;
  RoundId round;  // round the coordinator was in when armed
};
struct SubmitEvent {
  int instance;
  int client;
  Value value;
  bool race;
};
struct NoticeEvent {  // learner-detected conflict forwarded to the owner
  int instance;
  int proposer;
  RoundId round;
};
struct StartEvent {
  int instance;
};

using EventBody =
    std::variant<DeliverEvent, TimerEvent, SubmitEvent, NoticeEvent, StartEvent>;

struct Event {
  double t;
  std::uint64_t seq;
  EventBody body;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    return a.t != b.t ? a.t > b.t : a.seq > b.seq;
  }
};

std::vector<Submission> build_schedule(const SimConfig& cfg,
                                       const WorkloadSpec& wl) {
  std::vector<Submission> out;
  StreamRng rng(splitmix64(cfg.seed) ^ 0x776f726b6c6f6164ULL);  // "workload"
  if (wl.mode == WorkloadSpec::Mode::open_loop) {
    if (wl.rate_per_s <= 0 || wl.duration_s <= 0) return out;
    const double gap_ms = 1000.0 / wl.rate_per_s;
    const int count = static_cast<int>(wl.rate_per_s * wl.duration_s);
    int next_instance = 0;
    int prev_instance = -1;
    for (int j = 0; j < count; ++j) {
      const double jitter = rng.u01() * gap_ms * 0.25;
      const bool race = rng.u01() < wl.conflict_fraction && prev_instance >= 0;
      Submission s;
      s.time = wl.warmup_ms + j * gap_ms + jitter;
      s.instance = race ? prev_instance : next_instance++;
      s.client = j % wl.clients;
      s.value = Value{"c" + std::to_string(s.client) + "-" + std::to_string(j)};
      s.race = race;
      prev_instance = s.instance;
      out.push_back(std::move(s));
    }
  } else {
    for (int k = 0; k < wl.races; ++k) {
      const double t0 = wl.warmup_ms + k * wl.race_spacing_ms;
      out.push_back({t0, k, 0, Value{"r" + std::to_string(k) + "-a"}, false});
      out.push_back({t0 + wl.race_interval_ms, k, std::min(1, wl.clients - 1),
                     Value{"r" + std::to_string(k) + "-b"}, true});
    }
  }
  return out;
}

class Simulation {
 public:
  Simulation(const SimConfig& cfg, const WorkloadSpec& wl)
      : cfg_(cfg), wl_(wl) {}

  Trace run(double horizon_ms, bool capture_events);

 private:
  struct InstanceNodes {
    std::vector<Acceptor> acceptors;
    std::vector<Coordinator> coordinators;
    std::vector<Learner> learners;
    bool watchdog_armed = false;
  };

  static RoundId initial_round() { return RoundId(0); }

  int manager() const { return cfg_.rounds.owner(initial_round()); }

  int gid(const Address& a) const {
    switch (a.role) {
      case Role::acceptor: return a.index;
      case Role::proposer: return cfg_.acceptors + a.index;
      case Role::learner: return cfg_.acceptors + cfg_.proposers + a.index;
      case Role::client:
        return cfg_.acceptors + cfg_.proposers + cfg_.learners + a.index;
    }
    return -1;
  }

  StreamRng& stream(int src, int dst, int purpose) {
    const auto key = std::make_tuple(src, dst, purpose);
    auto it = streams_.find(key);
    if (it == streams_.end()) {
      std::uint64_t k = splitmix64(cfg_.seed);
      k = splitmix64(k ^ static_cast<std::uint64_t>(src + 1));
      k = splitmix64(k ^ static_cast<std::uint64_t>(dst + 1));
      k = splitmix64(k ^ static_cast<std::uint64_t>(purpose + 1));
      it = streams_.emplace(key, StreamRng(k)).first;
    }
    return it->second;
  }

  bool isolated_at(double t, const Address& a) const {
    if (a.role != Role::acceptor) return false;
    for (const PartitionWindow& w : cfg_.partitions)
      if (t >= w.start_ms && t < w.end_ms && w.isolated.contains(a.index))
        return true;
    return false;
  }

  bool partitioned(double t, const Address& a, const Address& b) const {
    return isolated_at(t, a) != isolated_at(t, b);
  }

  InstanceNodes& instance(int id) {
    auto it = instances_.find(id);
    if (it != instances_.end()) return it->second;
    InstanceNodes nodes;
    nodes.acceptors.reserve(cfg_.acceptors);
    for (int i = 0; i < cfg_.acceptors; ++i)
      nodes.acceptors.emplace_back(i, cfg_.rounds, cfg_.nacks);
    for (int i = 0; i < cfg_.proposers; ++i)
      nodes.coordinators.emplace_back(i, &cfg_.quorums, cfg_.rounds);
    for (int i = 0; i < cfg_.learners; ++i)
      nodes.learners.emplace_back(i, &cfg_.quorums, cfg_.rounds);
    return instances_.emplace(id, std::move(nodes)).first->second;
  }

  void push(double t, EventBody body) {
    queue_.push(Event{t, next_seq_++, std::move(body)});
  }

  void record(double t, const std::string& node, const std::string& kind,
              std::string payload) {
    if (!capture_) return;
    trace_.events.push_back(
        TraceEvent{t, event_seq_++, node, kind, std::move(payload)});
  }

  std::string tag(int inst) const { return "i=" + std::to_string(inst) + " "; }

  void send_concrete(double t, int inst, const Message& msg) {
    const int src = gid(msg.from);
    const int dst = gid(msg.to);
    if (partitioned(t, msg.from, msg.to)) {
      record(t, "net", "drop",
             tag(inst) + to_string(msg.body) + " " + msg.from.to_string() +
                 ">" + msg.to.to_string() + " partitioned");
      return;
    }
    const DeliveryPlan plan =
        schedule_delivery(cfg_.link, stream(src, dst, kDrop),
                          stream(src, dst, kDup), stream(src, dst, kDelay));
    if (plan.dropped) {
      record(t, "net", "drop",
             tag(inst) + to_string(msg.body) + " " + msg.from.to_string() +
                 ">" + msg.to.to_string());
      return;
    }
    if (plan.offsets.size() > 1)
      record(t, "net", "dup",
             tag(inst) + to_string(msg.body) + " " + msg.from.to_string() +
                 ">" + msg.to.to_string());
    for (double offset : plan.offsets)
      push(t + offset, DeliverEvent{inst, msg});
  }

  void schedule_message(double t, int inst, const Message& msg) {
    if (!msg.to.is_broadcast()) {
      send_concrete(t, inst, msg);
      return;
    }
    int count = 0;
    switch (msg.to.role) {
      case Role::acceptor: count = cfg_.acceptors; break;
      case Role::proposer: count = cfg_.proposers; break;
      case Role::learner: count = cfg_.learners; break;
      case Role::client: count = 0; break;
    }
    for (int i = 0; i < count; ++i) {
      Message copy = msg;
      copy.to.index = i;
      send_concrete(t, inst, copy);
    }
  }

  void apply_effects(double t, int inst, const Address& self, Effects&& fx) {
    for (Message& m : fx.messages) schedule_message(t, inst, m);
    for (std::string& f : fx.faults) {
      record(t, self.to_string(), "fault", tag(inst) + f);
      trace_.faults.push_back({t, inst, self.to_string(), std::move(f)});
    }
    if (fx.decision) {
      record(t, self.to_string(), "decide",
             tag(inst) + "r=" + fx.decision->round.to_string() + " v=" +
                 fx.decision->value.token);
      trace_.decisions.push_back(
          {t, inst, self.index, fx.decision->round, fx.decision->value});
    }
    if (fx.conflict) {
      const int owner = cfg_.rounds.owner(*fx.conflict);
      push(t + cfg_.link.delay.base_ms, NoticeEvent{inst, owner, *fx.conflict});
    }
    if (fx.pick) {
      record(t, self.to_string(), "pick",
             tag(inst) + "r=" + fx.pick->round.to_string() + " k=" +
                 fx.pick->max_voted_round.to_string() + " candidates=" +
                 std::to_string(fx.pick->candidates) + " " +
                 (fx.pick->outcome.is_free()
                      ? std::string("free")
                      : "forced=" + fx.pick->outcome.forced->token));
      trace_.picks.push_back(
          {t, inst, self.index, fx.pick->round, fx.pick->max_voted_round,
           fx.pick->candidates, !fx.pick->outcome.is_free(),
           fx.pick->outcome.is_free() ? std::string()
                                      : fx.pick->outcome.forced->token});
    }
  }

  void rearm_watchdog(double t, int inst, const Coordinator& c) {
    if (c.decided()) return;
    push(t + cfg_.phase_timeout_ms, TimerEvent{inst, c.id(), c.round()});
  }

  void recover_guarded(double t, int inst, int proposer, RoundId round,
                       const char* reason) {
    Coordinator& c = instance(inst).coordinators[proposer];
    if (c.decided()) return;
    if (c.round() != round ||
        c.phase() == Coordinator::Phase::awaiting_value) {
      // Progress happened, or there is no value to decide yet; keep
      // watching without burning a round.
      rearm_watchdog(t, inst, c);
      return;
    }
    record(t, Address::proposer(proposer).to_string(), "recover",
           tag(inst) + "r=" + round.to_string() + " " + reason);
    apply_effects(t, inst, Address::proposer(proposer), c.recover(round));
    rearm_watchdog(t, inst, c);
  }

  void dispatch(const Event& e);

  SimConfig cfg_;
  WorkloadSpec wl_;
  bool capture_ = true;
  std::uint64_t next_seq_ = 0;
  std::uint64_t event_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::map<std::tuple<int, int, int>, StreamRng> streams_;
  std::map<int, InstanceNodes> instances_;
  Trace trace_;
};

void Simulation::dispatch(const Event& e) {
  if (const auto* start = std::get_if<StartEvent>(&e.body)) {
    InstanceNodes& nodes = instance(start->instance);
    Coordinator& c = nodes.coordinators[manager()];
    record(e.t, Address::proposer(manager()).to_string(), "start",
           tag(start->instance) + "r=" + initial_round().to_string());
    apply_effects(e.t, start->instance, Address::proposer(manager()),
                  c.start_round(initial_round()));
    return;
  }

  if (const auto* submit = std::get_if<SubmitEvent>(&e.body)) {
    const Address from = Address::client(submit->client);
    record(e.t, from.to_string(), "submit",
           tag(submit->instance) + "v=" + submit->value.token +
               (submit->race ? " race" : ""));
    trace_.submissions.push_back(
        {e.t, submit->instance, submit->client, submit->value, submit->race});
    schedule_message(e.t, submit->instance,
                     {from, Address::all_acceptors(),
                      ProposeMsg{submit->value}});
    schedule_message(e.t, submit->instance,
                     {from, Address::all_proposers(),
                      ProposeMsg{submit->value}});
    InstanceNodes& nodes = instance(submit->instance);
    if (!nodes.watchdog_armed) {
      nodes.watchdog_armed = true;
      push(e.t + cfg_.conflict_timeout_ms,
           TimerEvent{submit->instance, manager(),
                      nodes.coordinators[manager()].round()});
    }
    return;
  }

  if (const auto* timer = std::get_if<TimerEvent>(&e.body)) {
    record(e.t, Address::proposer(timer->proposer).to_string(), "timer",
           tag(timer->instance) + "r=" + timer->round.to_string());
    recover_guarded(e.t, timer->instance, timer->proposer, timer->round,
                    "timeout");
    return;
  }

  if (const auto* notice = std::get_if<NoticeEvent>(&e.body)) {
    record(e.t, Address::proposer(notice->proposer).to_string(), "notice",
           tag(notice->instance) + "r=" + notice->round.to_string());
    recover_guarded(e.t, notice->instance, notice->proposer, notice->round,
                    "conflict");
    return;
  }

  const auto& deliver = std::get<DeliverEvent>(e.body);
  const Message& msg = deliver.msg;
  record(e.t, msg.to.to_string(), "deliver",
         tag(deliver.instance) + to_string(msg.body) + " from " +
             msg.from.to_string());
  InstanceNodes& nodes = instance(deliver.instance);
  switch (msg.to.role) {
    case Role::acceptor: {
      Acceptor& a = nodes.acceptors[msg.to.index];
      const AcceptorState before = a.state();
      Effects fx = a.handle(msg);
      const AcceptorState& after = a.state();
      if (before.rnd != after.rnd || before.vrnd != after.vrnd ||
          before.open_any != after.open_any)
        trace_.acceptor_transitions.push_back(
            {e.t, e.seq, deliver.instance, a.id(), after.rnd, after.vrnd});
      apply_effects(e.t, deliver.instance, msg.to, std::move(fx));
      break;
    }
    case Role::proposer:
      apply_effects(e.t, deliver.instance, msg.to,
                    nodes.coordinators[msg.to.index].handle(msg));
      break;
    case Role::learner:
      apply_effects(e.t, deliver.instance, msg.to,
                    nodes.learners[msg.to.index].handle(msg));
      break;
    case Role::client:
      break;
  }
}

Trace Simulation::run(double horizon_ms, bool capture_events) {
  capture_ = capture_events;
  trace_ = Trace{};
  trace_.seed = cfg_.seed;
  trace_.config_hash = sim_config_hash(cfg_, wl_);
  trace_.events_captured = capture_events;

  const std::vector<Submission> schedule = build_schedule(cfg_, wl_);
  int instance_count = 0;
  for (const Submission& s : schedule)
    instance_count = std::max(instance_count, s.instance + 1);

  for (int i = 0; i < instance_count; ++i) push(0.0, StartEvent{i});
  for (const Submission& s : schedule)
    push(s.time, SubmitEvent{s.instance, s.client, s.value, s.race});

  while (!queue_.empty()) {
    const Event e = queue_.top();
    if (e.t > horizon_ms) break;
    queue_.pop();
    dispatch(e);
  }
  return std::move(trace_);
}

void validate_sim_config(const SimConfig& cfg, const WorkloadSpec& wl) {
  if (cfg.acceptors != cfg.quorums.n())
    throw ConfigError("acceptor count " + std::to_string(cfg.acceptors) +
                      " does not match the quorum system (n=" +
                      std::to_string(cfg.quorums.n()) + ")");
  if (cfg.proposers < 1 || cfg.learners < 1)
    throw ConfigError("at least one proposer and one learner are required");
  if (cfg.rounds.proposers != cfg.proposers)
    throw ConfigError("round config proposer count mismatch");
  if (cfg.link.drop < 0 || cfg.link.drop > 1 || cfg.link.dup < 0 ||
      cfg.link.dup > 1)
    throw ConfigError("drop and dup probabilities must lie in [0, 1]");
  if (cfg.link.delay.base_ms < 0 || cfg.link.delay.lo < 0 ||
      cfg.link.delay.hi < cfg.link.delay.lo || cfg.link.delay.mean < 0)
    throw ConfigError("delays must be non-negative");
  if (cfg.phase_timeout_ms <= 0 || cfg.conflict_timeout_ms <= 0)
    throw ConfigError("timeouts must be positive");
  double prev_start = -1;
  for (const PartitionWindow& w : cfg.partitions) {
    if (w.end_ms <= w.start_ms || w.start_ms < prev_start)
      throw ConfigError("partition windows must be well-ordered");
    prev_start = w.start_ms;
    if (!w.isolated.subset_of(NodeSet::full(cfg.acceptors)))
      throw ConfigError("partition references nodes outside the cluster");
  }
  if (wl.clients < 1) throw ConfigError("at least one client is required");
  if (wl.conflict_fraction < 0 || wl.conflict_fraction > 1)
    throw ConfigError("conflict_fraction must lie in [0, 1]");
  if (wl.rate_per_s < 0 || wl.duration_s < 0 || wl.races < 0 ||
      wl.race_interval_ms < 0 || wl.race_spacing_ms <= 0 || wl.warmup_ms < 0)
    throw ConfigError("workload parameters must be non-negative");

  const int mgr = cfg.rounds.owner(RoundId(0));
  if (cfg.rounds.next_owned_classic(mgr, RoundId(0)).is_none())
    throw ConfigError(
        "the coordinator of round 0 never owns a classic round; conflict "
        "recovery would be impossible");
}

}  // namespace

Trace run_simulation(const SimConfig& cfg, const WorkloadSpec& wl,
                     double horizon_ms, bool capture_events) {
  validate_sim_config(cfg, wl);
  if (!cfg.allow_invalid) {
    const ValidationReport report = validate_fast_flexible(cfg.quorums);
    if (!report.valid)
      throw ConfigError("quorum system fails validation: " +
                        report.violations[0].requirement + " (" +
                        report.violations[0].detail +
                        "); set allow_invalid to simulate anyway");
  }
  return Simulation(cfg, wl).run(horizon_ms, capture_events);
}

}  // namespace ffpaxos
