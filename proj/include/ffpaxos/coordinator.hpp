#pragma once

#include <map>
#include <optional>

#include "ffpaxos/message.hpp"
#include "ffpaxos/nodeset.hpp"
#include "ffpaxos/pick.hpp"
#include "ffpaxos/quorum.hpp"
#include "ffpaxos/round.hpp"

namespace ffpaxos {

/// Coordinator (round owner) for one consensus instance. Runs phase-1 of
/// the rounds it owns, picks the phase-2 value from the replies, and falls
/// back to a fresh classic round when a fast round collides.
class Coordinator {
 public:
  enum class Phase { idle, gathering, awaiting_value, proposing };

  Coordinator(int id, const QuorumSystem* qs, RoundConfig rc)
      : id_(id), qs_(qs), rc_(rc) {}

  /// Begin phase-1 of round i. Throws std::invalid_argument if i is NONE
  /// or owned by a different proposer.
  Effects start_round(RoundId i);

  Effects on_p1b(const P1bMsg& m);

  /// Remember a client value; may complete a classic round that was
  /// waiting for one.
  Effects on_propose(const ProposeMsg& m);

  Effects on_decided(const DecidedMsg& m);

  /// Abandon fast round `failed` and run the next classic round this
  /// coordinator owns above it. Throws if the round config never gives
  /// this coordinator a classic round.
  Effects recover(RoundId failed);

  Effects handle(const Message& m);

  int id() const { return id_; }
  RoundId round() const { return round_; }
  Phase phase() const { return phase_; }
  bool decided() const { return decided_; }
  bool any_issued() const { return any_issued_; }
  int rounds_started() const { return rounds_started_; }

 private:
  Effects begin_phase2(const PickOutcome& outcome);
  Message p2a(RoundId round, std::optional<Value> value) const;

  int id_;
  const QuorumSystem* qs_;
  RoundConfig rc_;

  RoundId round_;
  Phase phase_ = Phase::idle;
  std::map<int, P1bMsg> replies_;
  NodeSet reply_set_;
  std::optional<Value> pending_;
  bool decided_ = false;
  bool any_issued_ = false;    // ANY sent for the current (fast) round
  int rounds_started_ = 0;
};

}  // namespace ffpaxos
