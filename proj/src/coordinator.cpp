#include "ffpaxos/coordinator.hpp"

#include <algorithm>

namespace ffpaxos {

Message Coordinator::p2a(RoundId round, std::optional<Value> value) const {
  return {Address::proposer(id_), Address::all_acceptors(),
          P2aMsg{round, std::move(value)}};
}

Effects Coordinator::start_round(RoundId i) {
  if (i.is_none()) throw std::invalid_argument("cannot start the NONE round");
  if (rc_.owner(i) != id_)
    throw std::invalid_argument("round " + i.to_string() + " is owned by proposer " +
                                std::to_string(rc_.owner(i)) + ", not " +
                                std::to_string(id_));
  round_ = i;
  phase_ = Phase::gathering;
  replies_.clear();
  reply_set_ = NodeSet{};
  any_issued_ = false;
  ++rounds_started_;

  Effects fx;
  fx.messages.push_back(
      {Address::proposer(id_), Address::all_acceptors(), P1aMsg{i}});
  return fx;
}

Effects Coordinator::begin_phase2(const PickOutcome& outcome) {
  Effects fx;
  const RoundKind kind = rc_.classify(round_);
  if (!outcome.is_free()) {
    phase_ = Phase::proposing;
    fx.messages.push_back(p2a(round_, *outcome.forced));
    return fx;
  }
  if (kind == RoundKind::fast) {
    phase_ = Phase::proposing;
    any_issued_ = true;
    fx.messages.push_back(p2a(round_, std::nullopt));
    return fx;
  }
  // Classic and free: propose our client value, or wait for one.
  if (pending_) {
    phase_ = Phase::proposing;
    fx.messages.push_back(p2a(round_, *pending_));
  } else {
    phase_ = Phase::awaiting_value;
  }
  return fx;
}

Effects Coordinator::on_p1b(const P1bMsg& m) {
  Effects fx;
  if (phase_ != Phase::gathering || m.round != round_) return fx;
  if (reply_set_.contains(m.from)) return fx;
  replies_.emplace(m.from, m);
  reply_set_.add(m.from);
  if (!qs_->is_quorum(QuorumFamily::phase1, reply_set_)) return fx;

  std::vector<P1bMsg> quorum_replies;
  quorum_replies.reserve(replies_.size());
  for (const auto& [id, reply] : replies_) quorum_replies.push_back(reply);

  const PickInfo info =
      pick_with_info(reply_set_, round_, quorum_replies, *qs_, rc_);
  fx.pick = info;
  fx.merge(begin_phase2(info.outcome));
  return fx;
}

Effects Coordinator::on_propose(const ProposeMsg& m) {
  Effects fx;
  if (!pending_) pending_ = m.value;
  if (phase_ == Phase::awaiting_value) {
    phase_ = Phase::proposing;
    fx.messages.push_back(p2a(round_, *pending_));
  }
  return fx;
}

Effects Coordinator::on_decided(const DecidedMsg&) {
  decided_ = true;
  return {};
}

Effects Coordinator::recover(RoundId failed) {
  const RoundId next = rc_.next_owned_classic(id_, failed);
  if (next.is_none())
    throw std::logic_error("proposer " + std::to_string(id_) +
                           " owns no classic round above " +
                           failed.to_string());
  return start_round(next);
}

Effects Coordinator::handle(const Message& m) {
  if (const auto* p1b = std::get_if<P1bMsg>(&m.body)) return on_p1b(*p1b);
  if (const auto* prop = std::get_if<ProposeMsg>(&m.body))
    return on_propose(*prop);
  if (const auto* dec = std::get_if<DecidedMsg>(&m.body))
    return on_decided(*dec);
  return {};
}

}  // namespace ffpaxos
