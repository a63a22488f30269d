#pragma once

#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ffpaxos/round.hpp"

namespace ffpaxos {

/// Opaque comparable value token. The fast-round ANY marker is represented
/// as an absent optional in P2a, so a Value is always a real client value
/// and can never leak into votes or decisions.
struct Value {
  std::string token;

  auto operator<=>(const Value&) const = default;
  const std::string& to_string() const { return token; }
};

enum class Role { acceptor, proposer, learner, client };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::acceptor: return "acc";
    case Role::proposer: return "prop";
    case Role::learner: return "lrn";
    case Role::client: return "cli";
  }
  return "?";
}

/// A protocol endpoint: a role plus an index within that role.
/// index == kBroadcast addresses every node of the role.
struct Address {
  static constexpr int kBroadcast = -1;

  Role role = Role::acceptor;
  int index = 0;

  static Address acceptor(int i) { return {Role::acceptor, i}; }
  static Address proposer(int i) { return {Role::proposer, i}; }
  static Address learner(int i) { return {Role::learner, i}; }
  static Address client(int i) { return {Role::client, i}; }
  static Address all_acceptors() { return {Role::acceptor, kBroadcast}; }
  static Address all_proposers() { return {Role::proposer, kBroadcast}; }
  static Address all_learners() { return {Role::learner, kBroadcast}; }

  bool is_broadcast() const { return index == kBroadcast; }
  auto operator<=>(const Address&) const = default;

  std::string to_string() const {
    return std::string(ffpaxos::to_string(role)) +
           (is_broadcast() ? "*" : std::to_string(index));
  }
};

struct P1aMsg {
  RoundId round;
};

struct P1bMsg {
  RoundId round;                 // the round being promised
  RoundId vrnd;                  // highest round voted in, NONE if none
  std::optional<Value> vval;     // value voted for at vrnd
  int from = 0;                  // reporting acceptor
};

struct P2aMsg {
  RoundId round;
  std::optional<Value> value;    // nullopt is the fast-round ANY marker

  bool is_any() const { return !value.has_value(); }
};

struct ProposeMsg {
  Value value;
};

struct P2bMsg {
  RoundId round;
  Value value;
  int from = 0;
};

struct DecidedMsg {
  RoundId round;
  Value value;
};

using MessageBody =
    std::variant<P1aMsg, P1bMsg, P2aMsg, ProposeMsg, P2bMsg, DecidedMsg>;

struct Message {
  Address from;
  Address to;
  MessageBody body;
};

std::string to_string(const MessageBody& body);

struct Decision {
  RoundId round;
  Value value;
};

/// Result of picking a phase-2 value after phase-1: either some value is
/// forced (it may already be chosen in an earlier round) or the proposer
/// is free.
struct PickOutcome {
  std::optional<Value> forced;

  bool is_free() const { return !forced.has_value(); }
  static PickOutcome free() { return {}; }
  static PickOutcome force(Value v) { return {std::move(v)}; }
};

struct PickInfo {
  RoundId round;             // round the pick was made for
  RoundId max_voted_round;   // highest vrnd reported, NONE if none
  int candidates = 0;        // size of the safe-value set at a fast round
  PickOutcome outcome;
};

/// What a single state-machine transition produced. Transitions never throw
/// for remote misbehavior; they surface it as fault records instead.
struct Effects {
  std::vector<Message> messages;
  std::vector<std::string> faults;
  std::optional<Decision> decision;       // learner only
  std::optional<RoundId> conflict;        // learner: fast round that can no
                                          // longer reach a unanimous quorum
  std::optional<PickInfo> pick;           // coordinator phase-1 completion

  void merge(Effects&& other) {
    for (auto& m : other.messages) messages.push_back(std::move(m));
    for (auto& f : other.faults) faults.push_back(std::move(f));
    if (other.decision) decision = std::move(other.decision);
    if (other.conflict) conflict = other.conflict;
    if (other.pick) pick = std::move(other.pick);
  }
};

}  // namespace ffpaxos
