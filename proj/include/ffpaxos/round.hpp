#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffpaxos {

/// Totally ordered round identifier. The NONE sentinel sits below every
/// real round and means "never promised / never voted".
class RoundId {
 public:
  constexpr RoundId() : value_(kNone) {}
  constexpr explicit RoundId(std::int64_t value) : value_(value) {
    if (value < 0) throw std::invalid_argument("round numbers are >= 0");
  }

  static constexpr RoundId none() { return RoundId(kNoneTag{}); }

  bool is_none() const { return value_ == kNone; }
  std::int64_t number() const {
    if (is_none()) throw std::logic_error("NONE round has no number");
    return value_;
  }

  auto operator<=>(const RoundId&) const = default;

  std::string to_string() const {
    return is_none() ? "-" : std::to_string(value_);
  }

 private:
  struct kNoneTag {};
  constexpr explicit RoundId(kNoneTag) : value_(kNone) {}
  static constexpr std::int64_t kNone = -1;
  std::int64_t value_;
};

enum class RoundKind { classic, fast };

inline const char* to_string(RoundKind k) {
  return k == RoundKind::classic ? "classic" : "fast";
}

/// How rounds are classified and who coordinates them. Every node in a
/// cluster shares the same config, so classification and ownership are
/// pure functions of the round number.
struct RoundConfig {
  enum class Classification { even_fast, all_classic, all_fast };

  Classification classification = Classification::even_fast;
  int proposers = 1;

  RoundKind classify(RoundId r) const {
    if (r.is_none()) throw std::invalid_argument("cannot classify NONE round");
    switch (classification) {
      case Classification::all_classic: return RoundKind::classic;
      case Classification::all_fast: return RoundKind::fast;
      case Classification::even_fast:
        return r.number() % 2 == 0 ? RoundKind::fast : RoundKind::classic;
    }
    return RoundKind::classic;
  }

  int owner(RoundId r) const {
    if (r.is_none()) throw std::invalid_argument("NONE round has no owner");
    if (proposers < 1) throw std::logic_error("proposer count must be >= 1");
    return static_cast<int>(r.number() % proposers);
  }

  /// Smallest classic round strictly above `after` owned by `proposer`, or
  /// NONE if the classification/ownership pairing never gives it one.
  RoundId next_owned_classic(int proposer, RoundId after) const {
    const std::int64_t start = after.is_none() ? 0 : after.number() + 1;
    // Ownership cycles with period `proposers`, classification with 2.
    const std::int64_t window = 2LL * proposers + 2;
    for (std::int64_t r = start; r < start + window; ++r) {
      const RoundId round(r);
      if (owner(round) == proposer && classify(round) == RoundKind::classic)
        return round;
    }
    return RoundId::none();
  }
};

}  // namespace ffpaxos
