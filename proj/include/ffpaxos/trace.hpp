#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffpaxos/message.hpp"
#include "ffpaxos/round.hpp"

namespace ffpaxos {

struct TraceEvent {
  double time = 0;
  std::uint64_t seq = 0;
  std::string node;
  std::string kind;      // deliver|timer|submit|notice|drop|dup|fault|decide|pick
  std::string payload;
};

struct SubmitRecord {
  double time = 0;
  int instance = 0;
  int client = 0;
  Value value;
  bool race = false;     // shares its instance with the previous submission
};

struct DecisionRecord {
  double time = 0;
  int instance = 0;
  int learner = 0;
  RoundId round;
  Value value;
};

struct FaultRecord {
  double time = 0;
  int instance = 0;
  std::string node;
  std::string detail;
};

struct AcceptorTransition {
  double time = 0;
  std::uint64_t seq = 0;
  int instance = 0;
  int acceptor = 0;
  RoundId rnd;    // post-transition
  RoundId vrnd;   // post-transition
};

struct PickRecord {
  double time = 0;
  int instance = 0;
  int coordinator = 0;
  RoundId round;
  RoundId max_voted_round;
  int candidates = 0;
  bool forced = false;
  std::string value;     // forced value token, empty when free
};

/// Complete record of one simulated run. Replaying the same config, seed
/// and workload reproduces it byte for byte.
struct Trace {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  bool events_captured = true;

  std::vector<TraceEvent> events;
  std::vector<SubmitRecord> submissions;
  std::vector<DecisionRecord> decisions;
  std::vector<FaultRecord> faults;
  std::vector<AcceptorTransition> acceptor_transitions;
  std::vector<PickRecord> picks;

  /// Line-oriented text form: a header with seed and config hash, then one
  /// tab-separated record per event (time, node, kind, payload).
  std::string to_text() const;
};

}  // namespace ffpaxos
