#pragma once

#include <map>
#include <optional>

#include "ffpaxos/message.hpp"
#include "ffpaxos/nodeset.hpp"
#include "ffpaxos/quorum.hpp"
#include "ffpaxos/round.hpp"

namespace ffpaxos {

/// Learner for one consensus instance: tallies phase-2 votes per round and
/// value, declares a decision once a phase-2 quorum of the round's kind
/// agrees, and re-announces idempotently. Two distinct decided values are
/// surfaced as a fault, never swallowed.
class Learner {
 public:
  Learner(int id, const QuorumSystem* qs, RoundConfig rc)
      : id_(id), qs_(qs), rc_(rc) {}

  Effects on_p2b(const P2bMsg& m);
  Effects handle(const Message& m);

  int id() const { return id_; }
  const std::optional<Decision>& decision() const { return first_decision_; }
  bool conflict_reported(RoundId r) const {
    return conflicts_reported_.count(r) != 0;
  }

 private:
  QuorumFamily family_for(RoundId r) const {
    return rc_.classify(r) == RoundKind::fast ? QuorumFamily::phase2_fast
                                              : QuorumFamily::phase2_classic;
  }

  /// True when no phase-2 fast quorum can still become unanimous for any
  /// value in fast round r, judged from the votes seen so far. Votes are
  /// immutable per round, so this is conclusive.
  bool unanimity_impossible(RoundId r) const;

  int id_;
  const QuorumSystem* qs_;
  RoundConfig rc_;

  std::map<RoundId, std::map<Value, NodeSet>> votes_;
  std::map<RoundId, Value> declared_;
  std::optional<Decision> first_decision_;
  std::map<RoundId, bool> conflicts_reported_;
};

}  // namespace ffpaxos
