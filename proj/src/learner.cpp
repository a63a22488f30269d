#include "ffpaxos/learner.hpp"

namespace ffpaxos {

bool Learner::unanimity_impossible(RoundId r) const {
  const auto it = votes_.find(r);
  if (it == votes_.end()) return false;
  const auto& tally = it->second;
  if (tally.size() < 2) return false;

  NodeSet voted;
  for (const auto& [value, voters] : tally) voted = voted | voters;
  const int silent = qs_->n() - voted.size();

  if (qs_->is_cardinality()) {
    // A value can still reach a fast quorum iff its voters plus every
    // silent acceptor can fill one.
    const int q2f = qs_->threshold(QuorumFamily::phase2_fast);
    for (const auto& [value, voters] : tally)
      if (voters.size() + silent >= q2f) return false;
    return true;
  }
  const NodeSet unvoted = voted.complement_in(qs_->n());
  for (const NodeSet& quorum : qs_->declared(QuorumFamily::phase2_fast)) {
    for (const auto& [value, voters] : tally) {
      if (quorum.subset_of(voters | unvoted)) return false;
    }
  }
  return true;
}

Effects Learner::on_p2b(const P2bMsg& m) {
  Effects fx;
  NodeSet& voters = votes_[m.round][m.value];
  voters.add(m.from);

  if (!qs_->is_quorum(family_for(m.round), voters)) {
    if (rc_.classify(m.round) == RoundKind::fast &&
        declared_.find(m.round) == declared_.end() &&
        conflicts_reported_.find(m.round) == conflicts_reported_.end() &&
        unanimity_impossible(m.round)) {
      conflicts_reported_[m.round] = true;
      fx.conflict = m.round;
    }
    return fx;
  }

  const auto [it, fresh] = declared_.emplace(m.round, m.value);
  if (!fresh && it->second != m.value) {
    // Second value reached a quorum in the same round. Surface it; the
    // decision record must exist so trace monitors can see both.
    fx.faults.push_back("learner " + std::to_string(id_) +
                        ": two values decided in round " +
                        m.round.to_string() + ": " + it->second.token +
                        " and " + m.value.token);
    fx.decision = Decision{m.round, m.value};
  }
  if (fresh) {
    if (first_decision_ && first_decision_->value != m.value)
      fx.faults.push_back("learner " + std::to_string(id_) +
                          ": decided " + m.value.token + " in round " +
                          m.round.to_string() + " after deciding " +
                          first_decision_->value.token + " in round " +
                          first_decision_->round.to_string());
    if (!first_decision_) first_decision_ = Decision{m.round, m.value};
    fx.decision = Decision{m.round, m.value};
  }
  // Sticky: keep announcing the decision as the quorum grows.
  fx.messages.push_back({Address::learner(id_), Address::all_proposers(),
                         DecidedMsg{m.round, fresh ? m.value : it->second}});
  return fx;
}

Effects Learner::handle(const Message& m) {
  if (const auto* p2b = std::get_if<P2bMsg>(&m.body)) return on_p2b(*p2b);
  return {};
}

}  // namespace ffpaxos
