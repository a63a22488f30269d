#include "ffpaxos/acceptor.hpp"

namespace ffpaxos {

std::string to_string(const MessageBody& body) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, P1aMsg>) {
          return "p1a r=" + m.round.to_string();
        } else if constexpr (std::is_same_v<T, P1bMsg>) {
          return "p1b r=" + m.round.to_string() + " vrnd=" +
                 m.vrnd.to_string() + " vval=" +
                 (m.vval ? m.vval->token : "-") + " from=" +
                 std::to_string(m.from);
        } else if constexpr (std::is_same_v<T, P2aMsg>) {
          return "p2a r=" + m.round.to_string() + " v=" +
                 (m.value ? m.value->token : "ANY");
        } else if constexpr (std::is_same_v<T, ProposeMsg>) {
          return "propose v=" + m.value.token;
        } else if constexpr (std::is_same_v<T, P2bMsg>) {
          return "p2b r=" + m.round.to_string() + " v=" + m.value.token +
                 " from=" + std::to_string(m.from);
        } else {
          return "decided r=" + m.round.to_string() + " v=" + m.value.token;
        }
      },
      body);
}

Message Acceptor::promise_reply(RoundId round, const Address& to) const {
  return {Address::acceptor(id_), to,
          P1bMsg{round, st_.vrnd, st_.vval, id_}};
}

Effects Acceptor::vote(RoundId round, const Value& v) {
  Effects fx;
  st_.rnd = round;
  st_.vrnd = round;
  st_.vval = v;
  st_.open_any = RoundId::none();
  fx.messages.push_back(
      {Address::acceptor(id_), Address::all_learners(), P2bMsg{round, v, id_}});
  return fx;
}

Effects Acceptor::on_p1a(const P1aMsg& m, const Address& from) {
  Effects fx;
  if (m.round <= st_.rnd) {
    // Stale round. Optionally tell the sender where we already are so it
    // can abandon the round early.
    if (nacks_ && !st_.rnd.is_none())
      fx.messages.push_back(promise_reply(st_.rnd, from));
    return fx;
  }
  st_.rnd = m.round;
  st_.open_any = RoundId::none();
  fx.messages.push_back(
      promise_reply(m.round, Address::proposer(rc_.owner(m.round))));
  return fx;
}

Effects Acceptor::on_p2a(const P2aMsg& m) {
  Effects fx;
  if (m.round < st_.rnd || st_.vrnd >= m.round) return fx;
  if (m.is_any()) {
    if (rc_.classify(m.round) == RoundKind::classic) {
      fx.faults.push_back("acceptor " + std::to_string(id_) +
                          ": ANY proposal in classic round " +
                          m.round.to_string());
      return fx;
    }
    st_.rnd = m.round;
    st_.open_any = m.round;
    return fx;
  }
  return vote(m.round, *m.value);
}

Effects Acceptor::on_propose(const ProposeMsg& m) {
  if (st_.open_any.is_none() || st_.open_any != st_.rnd ||
      st_.vrnd >= st_.rnd)
    return {};
  return vote(st_.rnd, m.value);
}

Effects Acceptor::handle(const Message& m) {
  if (const auto* p1a = std::get_if<P1aMsg>(&m.body))
    return on_p1a(*p1a, m.from);
  if (const auto* p2a = std::get_if<P2aMsg>(&m.body)) return on_p2a(*p2a);
  if (const auto* prop = std::get_if<ProposeMsg>(&m.body))
    return on_propose(*prop);
  return {};
}

}  // namespace ffpaxos
