#include <doctest.h>

#include <random>

#include "ffpaxos/quorum.hpp"

using namespace ffpaxos;

namespace {

NodeSet intersect_all(const std::vector<NodeSet>& sets) {
  NodeSet out = sets.empty() ? NodeSet{} : sets[0];
  for (const NodeSet& s : sets) out = out & s;
  return out;
}

}  // namespace

TEST_CASE("node sets") {
  NodeSet s{0, 3, 5};
  CHECK(s.size() == 3);
  CHECK(s.contains(3));
  CHECK(!s.contains(1));
  CHECK(s.subset_of(NodeSet::full(6)));
  CHECK(!NodeSet::full(6).subset_of(s));
  CHECK(s.to_string() == "{0,3,5}");
  CHECK((s & NodeSet{3, 4}).size() == 1);
  CHECK_THROWS_AS(s.add(64), std::invalid_argument);

  int count = 0;
  for_each_subset_of_size(5, 3, [&](NodeSet sub) {
    CHECK(sub.size() == 3);
    ++count;
  });
  CHECK(count == 10);
}

TEST_CASE("is_quorum thresholds and explicit sets") {
  const auto qs = QuorumSystem::cardinality(11, 9, 3, 7);
  NodeSet nine;
  for (int i = 0; i < 9; ++i) nine.add(i);
  CHECK(qs.is_quorum(QuorumFamily::phase1, nine));
  nine.remove(0);
  CHECK(!qs.is_quorum(QuorumFamily::phase1, nine));

  const auto singleton = QuorumSystem::cardinality(1, 1, 1, 1);
  CHECK(singleton.is_quorum(QuorumFamily::phase1, NodeSet{0}));

  const auto ex = QuorumSystem::explicit_sets(
      3, {NodeSet{0, 1, 2}}, {NodeSet{0, 1, 2}}, {NodeSet{0, 1, 2}});
  CHECK(!ex.is_quorum(QuorumFamily::phase2_fast, NodeSet{0, 1}));
  CHECK(ex.is_quorum(QuorumFamily::phase2_fast, NodeSet{0, 1, 2}));

  CHECK_THROWS_AS(qs.is_quorum(QuorumFamily::phase1, NodeSet{11}),
                  std::invalid_argument);
}

TEST_CASE("is_quorum is monotone under supersets") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto qs = QuorumSystem::cardinality(
        n, 1 + static_cast<int>(rng() % n), 1 + static_cast<int>(rng() % n),
        1 + static_cast<int>(rng() % n));
    NodeSet small, big;
    for (int i = 0; i < n; ++i) {
      const auto bits = rng();
      if (bits & 1) small.add(i);
      if (bits & 3) big.add(i);
    }
    big = big | small;
    for (QuorumFamily f : {QuorumFamily::phase1, QuorumFamily::phase2_classic,
                           QuorumFamily::phase2_fast}) {
      if (qs.is_quorum(f, small)) CHECK(qs.is_quorum(f, big));
    }
  }
}

TEST_CASE("malformed quorum systems are rejected") {
  CHECK_THROWS_AS(QuorumSystem::cardinality(5, 0, 3, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuorumSystem::cardinality(5, 3, 6, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuorumSystem::cardinality(0, 1, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      QuorumSystem::explicit_sets(3, {NodeSet{0, 3}}, {NodeSet{1}},
                                  {NodeSet{2}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      QuorumSystem::explicit_sets(3, {NodeSet{}}, {NodeSet{1}}, {NodeSet{2}}),
      std::invalid_argument);
  CHECK_THROWS_AS(QuorumSystem::explicit_sets(3, {}, {NodeSet{1}},
                                              {NodeSet{2}}),
                  std::invalid_argument);
}

TEST_CASE("fast flexible validation of the 11-node configurations") {
  CHECK(validate_fast_flexible(QuorumSystem::cardinality(11, 9, 3, 7)).valid);
  CHECK(validate_fast_flexible(QuorumSystem::cardinality(11, 6, 6, 9)).valid);
  CHECK(validate_fast_flexible(QuorumSystem::cardinality(11, 11, 1, 6)).valid);

  const auto r = validate_fast_flexible(QuorumSystem::cardinality(5, 3, 3, 3));
  CHECK(!r.valid);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].requirement == "p1-p2f-pair-intersection");
  CHECK(r.violations[0].detail == "q1 + 2*q2f = 9 <= 10");
}

TEST_CASE("fast flexible report carries fault tolerance per family") {
  const auto r = validate_fast_flexible(QuorumSystem::cardinality(11, 9, 3, 7));
  CHECK(r.fault_tolerance.at("p1") == 2);
  CHECK(r.fault_tolerance.at("p2c") == 8);
  CHECK(r.fault_tolerance.at("p2f") == 4);
}

TEST_CASE("fast paxos validation") {
  CHECK(validate_fast_paxos(LegacyQuorumSystem::cardinality(11, 6, 9)).valid);
  CHECK(validate_fast_paxos(LegacyQuorumSystem::cardinality(4, 3, 3)).valid);

  const auto r =
      validate_fast_paxos(LegacyQuorumSystem::cardinality(11, 6, 7));
  CHECK(!r.valid);
  bool found = false;
  for (const auto& v : r.violations)
    if (v.detail == "qc + 2*qf = 20 <= 22") found = true;
  CHECK(found);
}

TEST_CASE("flexible and plain paxos validation") {
  CHECK(validate_flexible(11, 9, 3).valid);
  CHECK(validate_flexible(11, 6, 6).valid);
  CHECK(!validate_flexible(2, 1, 1).valid);
  CHECK(validate_paxos(11, 6).valid);
  CHECK(!validate_paxos(11, 5).valid);
  CHECK_THROWS_AS(validate_flexible(5, 0, 3), std::invalid_argument);
}

TEST_CASE("brute force agrees on the paper-scale configuration") {
  const auto qs = QuorumSystem::cardinality(11, 9, 3, 7);
  const auto fast = validate_fast_flexible(qs);
  const auto slow = brute_force_check(qs);
  CHECK(fast.valid);
  CHECK(slow.valid);
}

TEST_CASE("brute force on explicit systems") {
  // Every phase-1 quorum contains node 1, which is the classic quorum and
  // sits inside the only fast quorum, so all intersections are nonempty.
  const auto ok = QuorumSystem::explicit_sets(
      3, {NodeSet{0, 1}, NodeSet{1, 2}}, {NodeSet{1}}, {NodeSet{0, 1, 2}});
  CHECK(brute_force_check(ok).valid);
  CHECK(validate_fast_flexible(ok).valid);

  const auto bad = QuorumSystem::explicit_sets(2, {NodeSet{0}}, {NodeSet{1}},
                                               {NodeSet{0}});
  const auto r = brute_force_check(bad);
  CHECK(!r.valid);
  REQUIRE(!r.violations.empty());
  const auto& v = r.violations[0];
  CHECK(v.requirement == "p1-p2c-intersection");
  REQUIRE(v.witness.size() == 2);
  CHECK(v.witness[0] == NodeSet{0});
  CHECK(v.witness[1] == NodeSet{1});
}

TEST_CASE("brute force refuses clusters beyond the bound") {
  const auto qs = QuorumSystem::cardinality(13, 9, 5, 9);
  CHECK_THROWS_AS(brute_force_check(qs), std::domain_error);
  CHECK_THROWS_AS(brute_force_check(QuorumSystem::cardinality(11, 9, 3, 7), 8),
                  std::domain_error);
}

TEST_CASE("inequality form matches set form for small clusters") {
  // Full n <= 8 sweep runs in the acceptance suite; keep the unit test quick.
  for (int n = 1; n <= 6; ++n) {
    for (int q1 = 1; q1 <= n; ++q1) {
      for (int q2c = 1; q2c <= n; ++q2c) {
        for (int q2f = 1; q2f <= n; ++q2f) {
          const auto qs = QuorumSystem::cardinality(n, q1, q2c, q2f);
          CHECK(validate_fast_flexible(qs).valid == brute_force_check(qs).valid);
        }
      }
    }
  }
}

TEST_CASE("fast paxos systems stay legal under the relaxed rules") {
  for (int n = 1; n <= 8; ++n) {
    for (int qc = 1; qc <= n; ++qc) {
      for (int qf = 1; qf <= n; ++qf) {
        const auto lqs = LegacyQuorumSystem::cardinality(n, qc, qf);
        if (!validate_fast_paxos(lqs).valid) continue;
        CHECK(validate_fast_flexible(lqs.to_quorum_system()).valid);
      }
    }
  }
}

TEST_CASE("invalid verdicts carry witnesses that really fail to intersect") {
  int checked = 0;
  for (int n = 1; n <= 7; ++n) {
    for (int q1 = 1; q1 <= n; ++q1) {
      for (int q2c = 1; q2c <= n; ++q2c) {
        for (int q2f = 1; q2f <= n; ++q2f) {
          const auto r =
              validate_fast_flexible(QuorumSystem::cardinality(n, q1, q2c, q2f));
          for (const auto& v : r.violations) {
            REQUIRE(!v.witness.empty());
            CHECK(intersect_all(v.witness).empty());
            // Witness sets must be genuine quorums of their families.
            if (v.requirement == "p1-p2c-intersection") {
              CHECK(v.witness[0].size() == q1);
              CHECK(v.witness[1].size() == q2c);
            } else {
              CHECK(v.witness[0].size() == q1);
              CHECK(v.witness[1].size() == q2f);
              CHECK(v.witness[2].size() == q2f);
            }
            ++checked;
          }
          CHECK(r.valid == r.violations.empty());
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("fast paxos witnesses also fail to intersect") {
  for (int n = 1; n <= 7; ++n) {
    for (int qc = 1; qc <= n; ++qc) {
      for (int qf = 1; qf <= n; ++qf) {
        const auto r =
            validate_fast_paxos(LegacyQuorumSystem::cardinality(n, qc, qf));
        for (const auto& v : r.violations) {
          REQUIRE(!v.witness.empty());
          CHECK(intersect_all(v.witness).empty());
        }
      }
    }
  }
}

TEST_CASE("reports serialize to text and json") {
  const auto r = validate_fast_flexible(QuorumSystem::cardinality(5, 3, 3, 3));
  const std::string text = r.to_text();
  CHECK(text.find("INVALID") != std::string::npos);
  CHECK(text.find("q1 + 2*q2f") != std::string::npos);
  const std::string json = r.to_json();
  CHECK(json.find("\"verdict\":\"invalid\"") != std::string::npos);
  CHECK(json.find("\"fault_tolerance\"") != std::string::npos);
}
