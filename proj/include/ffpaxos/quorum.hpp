#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffpaxos/nodeset.hpp"

namespace ffpaxos {

using NodeId = int;

/// The three quorum families a round interacts with: phase-1 (promise
/// gathering, fast or classic), phase-2 of classic rounds, and phase-2 of
/// fast rounds.
enum class QuorumFamily { phase1, phase2_classic, phase2_fast };

const char* to_string(QuorumFamily f);

/// A quorum system over n acceptors, either cardinality-based (all subsets
/// of size >= threshold are quorums) or explicit (declared sets plus all of
/// their supersets).
class QuorumSystem {
 public:
  static QuorumSystem cardinality(int n, int q1, int q2c, int q2f);
  static QuorumSystem explicit_sets(int n, std::vector<NodeSet> q1,
                                    std::vector<NodeSet> q2c,
                                    std::vector<NodeSet> q2f);

  int n() const { return n_; }
  bool is_cardinality() const { return cardinality_; }

  /// Threshold for a family; cardinality form only.
  int threshold(QuorumFamily f) const;

  /// Declared quorum sets for a family; explicit form only.
  const std::vector<NodeSet>& declared(QuorumFamily f) const;

  /// True iff s contains a quorum of the family (superset-closed).
  bool is_quorum(QuorumFamily f, const NodeSet& s) const;

  /// Smallest quorum cardinality in the family.
  int min_quorum_size(QuorumFamily f) const;

  /// All minimal quorums of the family: size-q subsets for the cardinality
  /// form, declared sets for the explicit form. Cardinality expansion is
  /// combinatorial; callers bound n before asking.
  std::vector<NodeSet> minimal_quorums(QuorumFamily f) const;

  std::string describe() const;

 private:
  QuorumSystem() = default;

  int n_ = 0;
  bool cardinality_ = true;
  int q1_ = 0, q2c_ = 0, q2f_ = 0;
  std::vector<NodeSet> sets_q1_, sets_q2c_, sets_q2f_;
};

/// Fast Paxos' original two-family system: one quorum family for classic
/// rounds, one for fast rounds, used in both phases.
class LegacyQuorumSystem {
 public:
  static LegacyQuorumSystem cardinality(int n, int qc, int qf);
  static LegacyQuorumSystem explicit_sets(int n, std::vector<NodeSet> qc,
                                          std::vector<NodeSet> qf);

  int n() const { return n_; }
  bool is_cardinality() const { return cardinality_; }
  int qc() const { return qc_; }
  int qf() const { return qf_; }
  const std::vector<NodeSet>& declared_classic() const { return sets_qc_; }
  const std::vector<NodeSet>& declared_fast() const { return sets_qf_; }
  std::vector<NodeSet> minimal_classic() const;
  std::vector<NodeSet> minimal_fast() const;
  int min_classic_size() const;
  int min_fast_size() const;

  /// Same protocol core, conservative embedding: phase-1 and classic
  /// phase-2 use the classic family, fast phase-2 the fast family.
  QuorumSystem to_quorum_system() const;

  std::string describe() const;

 private:
  LegacyQuorumSystem() = default;

  int n_ = 0;
  bool cardinality_ = true;
  int qc_ = 0, qf_ = 0;
  std::vector<NodeSet> sets_qc_, sets_qf_;
};

enum class Scheme { paxos, flexible, fast_paxos, fast_flexible };

const char* to_string(Scheme s);

/// One failed intersection requirement with a concrete witness where one
/// can be constructed.
struct Violation {
  std::string requirement;        // e.g. "p1-p2f-pair-intersection"
  std::string detail;             // failed inequality or witness description
  std::vector<NodeSet> witness;   // quorum tuple with empty intersection
};

struct ValidationReport {
  Scheme scheme = Scheme::fast_flexible;
  bool valid = false;
  std::vector<Violation> violations;
  // family label -> n minus smallest quorum size in that family
  std::map<std::string, int> fault_tolerance;

  std::string to_text() const;
  std::string to_json() const;
};

ValidationReport validate_paxos(int n, int q);
ValidationReport validate_flexible(int n, int q1, int q2);
ValidationReport validate_fast_paxos(const LegacyQuorumSystem& lqs);
ValidationReport validate_fast_flexible(const QuorumSystem& qs);

inline constexpr int kDefaultBruteForceBound = 12;

/// Literal enumeration of every quorum pair and triple named by the
/// intersection requirements. Oracle for validate_fast_flexible; refuses
/// clusters larger than the bound instead of sampling.
ValidationReport brute_force_check(const QuorumSystem& qs,
                                   int exhaustive_bound = kDefaultBruteForceBound);

}  // namespace ffpaxos
