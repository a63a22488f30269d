#include "ffpaxos/quorum.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace ffpaxos {

namespace {

void check_cluster_size(int n) {
  if (n < 1 || n > NodeSet::kMaxNodes)
    throw std::invalid_argument("cluster size must be in [1, 64], got " +
                                std::to_string(n));
}

void check_threshold(const char* name, int q, int n) {
  if (q < 1 || q > n)
    throw std::invalid_argument(std::string(name) + " must be in [1, n]: " +
                                std::to_string(q) + " with n=" +
                                std::to_string(n));
}

void check_sets(const char* name, const std::vector<NodeSet>& sets, int n) {
  if (sets.empty())
    throw std::invalid_argument(std::string(name) +
                                ": quorum family must be nonempty");
  const NodeSet all = NodeSet::full(n);
  for (const NodeSet& s : sets) {
    if (s.empty())
      throw std::invalid_argument(std::string(name) +
                                  ": empty quorum is malformed");
    if (!s.subset_of(all))
      throw std::invalid_argument(std::string(name) + ": quorum " +
                                  s.to_string() +
                                  " references nodes outside the cluster");
  }
}

int min_set_size(const std::vector<NodeSet>& sets) {
  int best = NodeSet::kMaxNodes + 1;
  for (const NodeSet& s : sets) best = std::min(best, s.size());
  return best;
}

std::string ineq(const std::string& lhs, long lhs_val, long rhs_val) {
  std::ostringstream os;
  os << lhs << " = " << lhs_val << " <= " << rhs_val;
  return os.str();
}

// Interval [lo, lo+len) within [0, n), as a node set.
NodeSet interval(int lo, int len) {
  NodeSet s;
  for (int i = lo; i < lo + len; ++i) s.add(i);
  return s;
}

// Two disjoint subsets of [0,n) with sizes a and b; requires a + b <= n.
std::pair<NodeSet, NodeSet> disjoint_pair(int n, int a, int b) {
  (void)n;
  return {interval(0, a), interval(a, b)};
}

// Three subsets of [0,n) with sizes a, b, c and empty common intersection;
// requires a + b + c <= 2n. The first set is covered by the complements of
// the other two.
std::array<NodeSet, 3> disjoint_triple(int n, int a, int b, int c) {
  const NodeSet s1 = interval(0, a);
  const int x = std::min(n - b, a);
  const NodeSet s2 = interval(x, b);
  // s3 avoids the part of s1 that s2 still covers, i.e. [x, a).
  NodeSet s3;
  int taken = 0;
  for (int i = 0; i < n && taken < c; ++i) {
    if (i >= x && i < a) continue;
    s3.add(i);
    ++taken;
  }
  return {s1, s2, s3};
}

}  // namespace

const char* to_string(QuorumFamily f) {
  switch (f) {
    case QuorumFamily::phase1: return "p1";
    case QuorumFamily::phase2_classic: return "p2c";
    case QuorumFamily::phase2_fast: return "p2f";
  }
  return "?";
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::paxos: return "paxos";
    case Scheme::flexible: return "flexible";
    case Scheme::fast_paxos: return "fast-paxos";
    case Scheme::fast_flexible: return "fast-flexible";
  }
  return "?";
}

QuorumSystem QuorumSystem::cardinality(int n, int q1, int q2c, int q2f) {
  check_cluster_size(n);
  check_threshold("q1", q1, n);
  check_threshold("q2c", q2c, n);
  check_threshold("q2f", q2f, n);
  QuorumSystem qs;
  qs.n_ = n;
  qs.cardinality_ = true;
  qs.q1_ = q1;
  qs.q2c_ = q2c;
  qs.q2f_ = q2f;
  return qs;
}

QuorumSystem QuorumSystem::explicit_sets(int n, std::vector<NodeSet> q1,
                                         std::vector<NodeSet> q2c,
                                         std::vector<NodeSet> q2f) {
  check_cluster_size(n);
  check_sets("q1", q1, n);
  check_sets("q2c", q2c, n);
  check_sets("q2f", q2f, n);
  QuorumSystem qs;
  qs.n_ = n;
  qs.cardinality_ = false;
  qs.sets_q1_ = std::move(q1);
  qs.sets_q2c_ = std::move(q2c);
  qs.sets_q2f_ = std::move(q2f);
  return qs;
}

int QuorumSystem::threshold(QuorumFamily f) const {
  if (!cardinality_)
    throw std::logic_error("threshold() on an explicit quorum system");
  switch (f) {
    case QuorumFamily::phase1: return q1_;
    case QuorumFamily::phase2_classic: return q2c_;
    case QuorumFamily::phase2_fast: return q2f_;
  }
  throw std::invalid_argument("unknown quorum family");
}

const std::vector<NodeSet>& QuorumSystem::declared(QuorumFamily f) const {
  if (cardinality_)
    throw std::logic_error("declared() on a cardinality quorum system");
  switch (f) {
    case QuorumFamily::phase1: return sets_q1_;
    case QuorumFamily::phase2_classic: return sets_q2c_;
    case QuorumFamily::phase2_fast: return sets_q2f_;
  }
  throw std::invalid_argument("unknown quorum family");
}

bool QuorumSystem::is_quorum(QuorumFamily f, const NodeSet& s) const {
  if (!s.subset_of(NodeSet::full(n_)))
    throw std::invalid_argument("set " + s.to_string() +
                                " is not a subset of the cluster");
  if (cardinality_) return s.size() >= threshold(f);
  for (const NodeSet& q : declared(f))
    if (q.subset_of(s)) return true;
  return false;
}

int QuorumSystem::min_quorum_size(QuorumFamily f) const {
  return cardinality_ ? threshold(f) : min_set_size(declared(f));
}

std::vector<NodeSet> QuorumSystem::minimal_quorums(QuorumFamily f) const {
  if (!cardinality_) return declared(f);
  std::vector<NodeSet> out;
  for_each_subset_of_size(n_, threshold(f),
                          [&](NodeSet s) { out.push_back(s); });
  return out;
}

std::string QuorumSystem::describe() const {
  std::ostringstream os;
  if (cardinality_) {
    os << "n=" << n_ << " q1=" << q1_ << " q2c=" << q2c_ << " q2f=" << q2f_;
  } else {
    os << "n=" << n_ << " explicit |q1|=" << sets_q1_.size()
       << " |q2c|=" << sets_q2c_.size() << " |q2f|=" << sets_q2f_.size();
  }
  return os.str();
}

LegacyQuorumSystem LegacyQuorumSystem::cardinality(int n, int qc, int qf) {
  check_cluster_size(n);
  check_threshold("qc", qc, n);
  check_threshold("qf", qf, n);
  LegacyQuorumSystem lqs;
  lqs.n_ = n;
  lqs.cardinality_ = true;
  lqs.qc_ = qc;
  lqs.qf_ = qf;
  return lqs;
}

LegacyQuorumSystem LegacyQuorumSystem::explicit_sets(int n,
                                                     std::vector<NodeSet> qc,
                                                     std::vector<NodeSet> qf) {
  check_cluster_size(n);
  check_sets("qc", qc, n);
  check_sets("qf", qf, n);
  LegacyQuorumSystem lqs;
  lqs.n_ = n;
  lqs.cardinality_ = false;
  lqs.sets_qc_ = std::move(qc);
  lqs.sets_qf_ = std::move(qf);
  return lqs;
}

std::vector<NodeSet> LegacyQuorumSystem::minimal_classic() const {
  if (!cardinality_) return sets_qc_;
  std::vector<NodeSet> out;
  for_each_subset_of_size(n_, qc_, [&](NodeSet s) { out.push_back(s); });
  return out;
}

std::vector<NodeSet> LegacyQuorumSystem::minimal_fast() const {
  if (!cardinality_) return sets_qf_;
  std::vector<NodeSet> out;
  for_each_subset_of_size(n_, qf_, [&](NodeSet s) { out.push_back(s); });
  return out;
}

int LegacyQuorumSystem::min_classic_size() const {
  return cardinality_ ? qc_ : min_set_size(sets_qc_);
}

int LegacyQuorumSystem::min_fast_size() const {
  return cardinality_ ? qf_ : min_set_size(sets_qf_);
}

QuorumSystem LegacyQuorumSystem::to_quorum_system() const {
  if (cardinality_) return QuorumSystem::cardinality(n_, qc_, qc_, qf_);
  return QuorumSystem::explicit_sets(n_, sets_qc_, sets_qc_, sets_qf_);
}

std::string LegacyQuorumSystem::describe() const {
  std::ostringstream os;
  if (cardinality_) {
    os << "n=" << n_ << " qc=" << qc_ << " qf=" << qf_;
  } else {
    os << "n=" << n_ << " explicit |qc|=" << sets_qc_.size()
       << " |qf|=" << sets_qf_.size();
  }
  return os.str();
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << to_string(scheme) << ": " << (valid ? "VALID" : "INVALID") << "\n";
  for (const Violation& v : violations) {
    os << "  violated " << v.requirement << ": " << v.detail;
    if (!v.witness.empty()) {
      os << " witness";
      for (const NodeSet& w : v.witness) os << " " << w.to_string();
    }
    os << "\n";
  }
  os << "  fault tolerance:";
  for (const auto& [family, f] : fault_tolerance)
    os << " " << family << "=" << f;
  os << "\n";
  return os.str();
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["scheme"] = to_string(scheme);
  j["verdict"] = valid ? "valid" : "invalid";
  j["violations"] = nlohmann::json::array();
  for (const Violation& v : violations) {
    nlohmann::json jv;
    jv["requirement"] = v.requirement;
    jv["detail"] = v.detail;
    jv["witness"] = nlohmann::json::array();
    for (const NodeSet& w : v.witness) jv["witness"].push_back(w.members());
    j["violations"].push_back(jv);
  }
  j["fault_tolerance"] = fault_tolerance;
  return j.dump();
}

ValidationReport validate_paxos(int n, int q) {
  check_cluster_size(n);
  check_threshold("q", q, n);
  ValidationReport r;
  r.scheme = Scheme::paxos;
  r.fault_tolerance["q"] = n - q;
  if (2 * q > n) {
    r.valid = true;
    return r;
  }
  auto [a, b] = disjoint_pair(n, q, q);
  r.violations.push_back(
      {"quorum-pair-intersection", ineq("2*q", 2L * q, n), {a, b}});
  return r;
}

ValidationReport validate_flexible(int n, int q1, int q2) {
  check_cluster_size(n);
  check_threshold("q1", q1, n);
  check_threshold("q2", q2, n);
  ValidationReport r;
  r.scheme = Scheme::flexible;
  r.fault_tolerance["p1"] = n - q1;
  r.fault_tolerance["p2"] = n - q2;
  if (q1 + q2 > n) {
    r.valid = true;
    return r;
  }
  auto [a, b] = disjoint_pair(n, q1, q2);
  r.violations.push_back(
      {"p1-p2-intersection", ineq("q1 + q2", q1 + q2, n), {a, b}});
  return r;
}

ValidationReport validate_fast_paxos(const LegacyQuorumSystem& lqs) {
  ValidationReport r;
  r.scheme = Scheme::fast_paxos;
  const int n = lqs.n();
  r.fault_tolerance["classic"] = n - lqs.min_classic_size();
  r.fault_tolerance["fast"] = n - lqs.min_fast_size();

  if (lqs.is_cardinality()) {
    const int qc = lqs.qc(), qf = lqs.qf();
    if (2 * qc <= n) {
      auto [a, b] = disjoint_pair(n, qc, qc);
      r.violations.push_back(
          {"classic-classic-intersection", ineq("2*qc", 2L * qc, n), {a, b}});
    }
    if (qc + 2 * qf <= 2 * n) {
      auto t = disjoint_triple(n, qc, qf, qf);
      r.violations.push_back({"fast-pair-classic-intersection",
                              ineq("qc + 2*qf", qc + 2L * qf, 2L * n),
                              {t[0], t[1], t[2]}});
    }
    if (3 * qf <= 2 * n) {
      auto t = disjoint_triple(n, qf, qf, qf);
      r.violations.push_back({"fast-triple-intersection",
                              ineq("3*qf", 3L * qf, 2L * n),
                              {t[0], t[1], t[2]}});
    }
  } else {
    const auto& qc = lqs.declared_classic();
    const auto& qf = lqs.declared_fast();
    for (const NodeSet& a : qc) {
      for (const NodeSet& b : qc) {
        if (!a.intersects(b)) {
          r.violations.push_back({"classic-classic-intersection",
                                  "disjoint classic quorums",
                                  {a, b}});
          goto classic_done;
        }
      }
    }
  classic_done:
    for (const NodeSet& a : qf) {
      for (const NodeSet& b : qf) {
        const NodeSet ab = a & b;
        for (const NodeSet& c : qc) {
          if ((ab & c).empty()) {
            r.violations.push_back({"fast-pair-classic-intersection",
                                    "empty fast/fast/classic intersection",
                                    {a, b, c}});
            goto pair_classic_done;
          }
        }
      }
    }
  pair_classic_done:
    for (const NodeSet& a : qf) {
      for (const NodeSet& b : qf) {
        const NodeSet ab = a & b;
        for (const NodeSet& c : qf) {
          if ((ab & c).empty()) {
            r.violations.push_back({"fast-triple-intersection",
                                    "empty fast quorum triple intersection",
                                    {a, b, c}});
            goto fast_triple_done;
          }
        }
      }
    }
  fast_triple_done:;
  }
  r.valid = r.violations.empty();
  return r;
}

ValidationReport validate_fast_flexible(const QuorumSystem& qs) {
  ValidationReport r;
  r.scheme = Scheme::fast_flexible;
  const int n = qs.n();
  r.fault_tolerance["p1"] = n - qs.min_quorum_size(QuorumFamily::phase1);
  r.fault_tolerance["p2c"] =
      n - qs.min_quorum_size(QuorumFamily::phase2_classic);
  r.fault_tolerance["p2f"] = n - qs.min_quorum_size(QuorumFamily::phase2_fast);

  if (qs.is_cardinality()) {
    const int q1 = qs.threshold(QuorumFamily::phase1);
    const int q2c = qs.threshold(QuorumFamily::phase2_classic);
    const int q2f = qs.threshold(QuorumFamily::phase2_fast);
    if (q1 + q2c <= n) {
      auto [a, b] = disjoint_pair(n, q1, q2c);
      r.violations.push_back(
          {"p1-p2c-intersection", ineq("q1 + q2c", q1 + q2c, n), {a, b}});
    }
    if (q1 + 2 * q2f <= 2 * n) {
      auto t = disjoint_triple(n, q1, q2f, q2f);
      r.violations.push_back({"p1-p2f-pair-intersection",
                              ineq("q1 + 2*q2f", q1 + 2L * q2f, 2L * n),
                              {t[0], t[1], t[2]}});
    }
  } else {
    const auto& q1 = qs.declared(QuorumFamily::phase1);
    const auto& q2c = qs.declared(QuorumFamily::phase2_classic);
    const auto& q2f = qs.declared(QuorumFamily::phase2_fast);
    for (const NodeSet& a : q1) {
      for (const NodeSet& b : q2c) {
        if (!a.intersects(b)) {
          r.violations.push_back({"p1-p2c-intersection",
                                  "disjoint phase-1/classic quorums",
                                  {a, b}});
          goto pair_done;
        }
      }
    }
  pair_done:
    for (const NodeSet& b : q2f) {
      for (const NodeSet& c : q2f) {
        const NodeSet bc = b & c;
        for (const NodeSet& a : q1) {
          if ((a & bc).empty()) {
            r.violations.push_back(
                {"p1-p2f-pair-intersection",
                 "empty phase-1/fast-pair intersection",
                 {a, b, c}});
            goto triple_done;
          }
        }
      }
    }
  triple_done:;
  }
  r.valid = r.violations.empty();
  return r;
}

ValidationReport brute_force_check(const QuorumSystem& qs,
                                   int exhaustive_bound) {
  if (qs.n() > exhaustive_bound)
    throw std::domain_error(
        "brute force check refused: n=" + std::to_string(qs.n()) +
        " exceeds the exhaustive bound " + std::to_string(exhaustive_bound));

  ValidationReport r;
  r.scheme = Scheme::fast_flexible;
  const int n = qs.n();
  r.fault_tolerance["p1"] = n - qs.min_quorum_size(QuorumFamily::phase1);
  r.fault_tolerance["p2c"] =
      n - qs.min_quorum_size(QuorumFamily::phase2_classic);
  r.fault_tolerance["p2f"] = n - qs.min_quorum_size(QuorumFamily::phase2_fast);

  const std::vector<NodeSet> q1 = qs.minimal_quorums(QuorumFamily::phase1);
  const std::vector<NodeSet> q2c =
      qs.minimal_quorums(QuorumFamily::phase2_classic);
  const std::vector<NodeSet> q2f =
      qs.minimal_quorums(QuorumFamily::phase2_fast);

  bool pair_violated = false;
  for (const NodeSet& a : q1) {
    for (const NodeSet& b : q2c) {
      if (!a.intersects(b)) {
        r.violations.push_back({"p1-p2c-intersection",
                                "disjoint phase-1/classic quorums",
                                {a, b}});
        pair_violated = true;
        break;
      }
    }
    if (pair_violated) break;
  }

  // Distinct pairwise intersections of fast quorums; for each, some phase-1
  // quorum must still meet it.
  std::map<std::uint64_t, std::pair<NodeSet, NodeSet>> pair_meets;
  for (std::size_t i = 0; i < q2f.size(); ++i)
    for (std::size_t j = i; j < q2f.size(); ++j)
      pair_meets.emplace((q2f[i] & q2f[j]).bits(),
                         std::make_pair(q2f[i], q2f[j]));

  for (const auto& [bits, pair] : pair_meets) {
    const NodeSet meet(bits);
    for (const NodeSet& a : q1) {
      if ((a & meet).empty()) {
        r.violations.push_back({"p1-p2f-pair-intersection",
                                "empty phase-1/fast-pair intersection",
                                {a, pair.first, pair.second}});
        goto done;
      }
    }
  }
done:
  r.valid = r.violations.empty();
  return r;
}

}  // namespace ffpaxos
