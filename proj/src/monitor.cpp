#include "ffpaxos/checker.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ffpaxos {

const char* to_string(InvariantId id) {
  switch (id) {
    case InvariantId::agreement: return "agreement";
    case InvariantId::per_round_agreement: return "per-round-agreement";
    case InvariantId::validity: return "validity";
    case InvariantId::acceptor_monotonicity: return "acceptor-monotonicity";
    case InvariantId::o4_uniqueness: return "o4-uniqueness";
  }
  return "?";
}

bool all_pass(const std::vector<MonitorVerdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const MonitorVerdict& v) { return v.pass; });
}

namespace {

std::string describe(const DecisionRecord& d) {
  std::ostringstream os;
  os << "instance " << d.instance << " round " << d.round.to_string()
     << " value " << d.value.token << " at " << d.time << " (learner "
     << d.learner << ")";
  return os.str();
}

MonitorVerdict check_agreement(const Trace& trace) {
  MonitorVerdict v{InvariantId::agreement, true, {}};
  std::map<int, const DecisionRecord*> first;
  for (const DecisionRecord& d : trace.decisions) {
    const auto [it, fresh] = first.emplace(d.instance, &d);
    if (!fresh && it->second->value != d.value) {
      v.pass = false;
      v.counterexample = describe(*it->second) + " vs " + describe(d);
      return v;
    }
  }
  return v;
}

MonitorVerdict check_per_round(const Trace& trace) {
  MonitorVerdict v{InvariantId::per_round_agreement, true, {}};
  std::map<std::pair<int, RoundId>, const DecisionRecord*> first;
  for (const DecisionRecord& d : trace.decisions) {
    const auto [it, fresh] =
        first.emplace(std::make_pair(d.instance, d.round), &d);
    if (!fresh && it->second->value != d.value) {
      v.pass = false;
      v.counterexample = describe(*it->second) + " vs " + describe(d);
      return v;
    }
  }
  return v;
}

MonitorVerdict check_validity(const Trace& trace) {
  MonitorVerdict v{InvariantId::validity, true, {}};
  std::map<int, std::set<std::string>> submitted;
  for (const SubmitRecord& s : trace.submissions)
    submitted[s.instance].insert(s.value.token);
  for (const DecisionRecord& d : trace.decisions) {
    const auto it = submitted.find(d.instance);
    if (it == submitted.end() || it->second.count(d.value.token) == 0) {
      v.pass = false;
      v.counterexample = describe(d) + ": value was never submitted";
      return v;
    }
  }
  return v;
}

MonitorVerdict check_monotonicity(const Trace& trace) {
  MonitorVerdict v{InvariantId::acceptor_monotonicity, true, {}};
  struct Last {
    RoundId rnd, vrnd;
  };
  std::map<std::pair<int, int>, Last> last;
  for (const AcceptorTransition& t : trace.acceptor_transitions) {
    auto& prev = last[{t.instance, t.acceptor}];
    if (t.rnd < prev.rnd || t.vrnd < prev.vrnd) {
      v.pass = false;
      std::ostringstream os;
      os << "instance " << t.instance << " acceptor " << t.acceptor
         << " went from rnd=" << prev.rnd.to_string()
         << " vrnd=" << prev.vrnd.to_string()
         << " to rnd=" << t.rnd.to_string()
         << " vrnd=" << t.vrnd.to_string() << " at " << t.time;
      v.counterexample = os.str();
      return v;
    }
    prev = {t.rnd, t.vrnd};
  }
  return v;
}

MonitorVerdict check_o4(const Trace& trace) {
  MonitorVerdict v{InvariantId::o4_uniqueness, true, {}};
  for (const PickRecord& p : trace.picks) {
    if (p.candidates > 1) {
      v.pass = false;
      std::ostringstream os;
      os << "instance " << p.instance << " round " << p.round.to_string()
         << ": " << p.candidates << " values safe to pick at "
         << p.max_voted_round.to_string();
      v.counterexample = os.str();
      return v;
    }
  }
  return v;
}

}  // namespace

std::vector<MonitorVerdict> monitor(const Trace& trace) {
  return {check_agreement(trace), check_per_round(trace),
          check_validity(trace), check_monotonicity(trace), check_o4(trace)};
}

}  // namespace ffpaxos
