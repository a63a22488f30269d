#pragma once

#include <vector>

#include "ffpaxos/message.hpp"
#include "ffpaxos/nodeset.hpp"
#include "ffpaxos/quorum.hpp"
#include "ffpaxos/round.hpp"

namespace ffpaxos {

/// Values that may already be chosen in round k, judged from the phase-1
/// replies of quorum q: value v qualifies iff some phase-2 fast quorum R
/// exists whose overlap with q unanimously reported voting v in k.
/// For any quorum system meeting the fast-pair intersection requirement the
/// result has at most one element; it is returned sorted for determinism.
std::vector<Value> safe_value_candidates(const NodeSet& q, RoundId k,
                                         const std::vector<P1bMsg>& replies,
                                         const QuorumSystem& qs);

/// The proposer's phase-2 value rule, evaluated over one phase-1 reply per
/// member of quorum q, all for round i. FREE when no reply reports a vote;
/// FORCED(v) when the highest voted round k pins v (directly for classic k,
/// via the fast-quorum overlap test for fast k); FREE when a fast k pins
/// nothing.
///
/// Throws std::invalid_argument when q is not a phase-1 quorum, a member of
/// q has no reply (or a duplicate), or a reply is not for round i or
/// reports a vote at or above i.
PickOutcome pickable_values(const NodeSet& q, RoundId i,
                            const std::vector<P1bMsg>& replies,
                            const QuorumSystem& qs, const RoundConfig& rc);

/// pickable_values plus the candidate-set size, for monitoring.
PickInfo pick_with_info(const NodeSet& q, RoundId i,
                        const std::vector<P1bMsg>& replies,
                        const QuorumSystem& qs, const RoundConfig& rc);

}  // namespace ffpaxos
