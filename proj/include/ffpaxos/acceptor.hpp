#pragma once

#include <optional>

#include "ffpaxos/message.hpp"
#include "ffpaxos/round.hpp"

namespace ffpaxos {

/// The acceptor's entire persistent state.
struct AcceptorState {
  RoundId rnd;                  // highest round joined or promised
  RoundId vrnd;                 // highest round voted in
  std::optional<Value> vval;    // value voted for at vrnd
  RoundId open_any;             // fast round with an accepted ANY, vote still
                                // pending; NONE otherwise

  bool well_formed() const {
    if (vrnd > rnd) return false;
    if (vval.has_value() != !vrnd.is_none()) return false;
    if (!open_any.is_none() && (open_any != rnd || vrnd >= open_any))
      return false;
    return true;
  }
};

/// Acceptor state machine. Handlers are deterministic: identical state and
/// message always produce identical state and output. Stale messages are
/// dropped silently unless nacks are enabled.
class Acceptor {
 public:
  Acceptor(int id, RoundConfig rc, bool nacks = false)
      : id_(id), rc_(rc), nacks_(nacks) {}

  Effects on_p1a(const P1aMsg& m, const Address& from);
  Effects on_p2a(const P2aMsg& m);
  Effects on_propose(const ProposeMsg& m);

  /// Dispatch a protocol message; non-acceptor messages are ignored.
  Effects handle(const Message& m);

  int id() const { return id_; }
  const AcceptorState& state() const { return st_; }

 private:
  Effects vote(RoundId round, const Value& v);
  Message promise_reply(RoundId round, const Address& to) const;

  int id_;
  RoundConfig rc_;
  bool nacks_;
  AcceptorState st_;
};

}  // namespace ffpaxos
