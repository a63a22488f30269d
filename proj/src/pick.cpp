#include "ffpaxos/pick.hpp"

#include <algorithm>
#include <map>

namespace ffpaxos {

namespace {

void check_replies(const NodeSet& q, RoundId i,
                   const std::vector<P1bMsg>& replies,
                   const QuorumSystem& qs) {
  if (!qs.is_quorum(QuorumFamily::phase1, q))
    throw std::invalid_argument("pick: " + q.to_string() +
                                " is not a phase-1 quorum");
  NodeSet seen;
  for (const P1bMsg& m : replies) {
    if (!q.contains(m.from))
      throw std::invalid_argument("pick: reply from node " +
                                  std::to_string(m.from) + " outside quorum");
    if (seen.contains(m.from))
      throw std::invalid_argument("pick: duplicate reply from node " +
                                  std::to_string(m.from));
    seen.add(m.from);
    if (m.round != i)
      throw std::invalid_argument("pick: reply for round " +
                                  m.round.to_string() + ", expected " +
                                  i.to_string());
    if (m.vrnd >= i)
      throw std::invalid_argument(
          "pick: reply reports a vote at round " + m.vrnd.to_string() +
          " >= " + i.to_string());
  }
  if (seen != q)
    throw std::invalid_argument("pick: replies do not cover the quorum " +
                                q.to_string());
}

}  // namespace

std::vector<Value> safe_value_candidates(const NodeSet& q, RoundId k,
                                         const std::vector<P1bMsg>& replies,
                                         const QuorumSystem& qs) {
  // Who in q reported voting for which value in round k.
  std::map<Value, NodeSet> voters;
  for (const P1bMsg& m : replies)
    if (m.vrnd == k && m.vval) voters[*m.vval].add(m.from);

  std::vector<Value> out;
  const int n = qs.n();
  for (const auto& [value, supporters] : voters) {
    bool qualifies = false;
    if (qs.is_cardinality()) {
      // A fast quorum R with q∩R ⊆ supporters exists iff the supporters
      // plus everything outside q can fill it.
      qualifies = supporters.size() + (n - q.size()) >=
                  qs.threshold(QuorumFamily::phase2_fast);
    } else {
      for (const NodeSet& r : qs.declared(QuorumFamily::phase2_fast)) {
        if ((q & r).subset_of(supporters)) {
          qualifies = true;
          break;
        }
      }
    }
    if (qualifies) out.push_back(value);
  }
  return out;  // std::map iteration keeps this sorted
}

PickInfo pick_with_info(const NodeSet& q, RoundId i,
                        const std::vector<P1bMsg>& replies,
                        const QuorumSystem& qs, const RoundConfig& rc) {
  check_replies(q, i, replies, qs);

  PickInfo info;
  info.round = i;

  RoundId k = RoundId::none();
  for (const P1bMsg& m : replies) k = std::max(k, m.vrnd);
  info.max_voted_round = k;

  if (k.is_none()) {
    info.outcome = PickOutcome::free();
    return info;
  }

  if (rc.classify(k) == RoundKind::classic) {
    // One proposer, one value per classic round; any reporter at k works.
    const Value* picked = nullptr;
    for (const P1bMsg& m : replies) {
      if (m.vrnd != k) continue;
      if (picked && *picked != *m.vval)
        throw std::invalid_argument(
            "pick: two values reported for classic round " + k.to_string());
      picked = &*m.vval;
    }
    info.candidates = 1;
    info.outcome = PickOutcome::force(*picked);
    return info;
  }

  const std::vector<Value> candidates = safe_value_candidates(q, k, replies, qs);
  info.candidates = static_cast<int>(candidates.size());
  if (candidates.empty()) {
    info.outcome = PickOutcome::free();
  } else {
    // Unique for valid quorum systems; the deterministic minimum keeps
    // invalid systems explorable without UB.
    info.outcome = PickOutcome::force(candidates.front());
  }
  return info;
}

PickOutcome pickable_values(const NodeSet& q, RoundId i,
                            const std::vector<P1bMsg>& replies,
                            const QuorumSystem& qs, const RoundConfig& rc) {
  return pick_with_info(q, i, replies, qs, rc).outcome;
}

}  // namespace ffpaxos
