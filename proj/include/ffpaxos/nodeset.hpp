#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffpaxos {

/// Compact set of node indices backed by a 64-bit mask. Clusters are
/// capped at 64 nodes, far above anything the simulator runs.
class NodeSet {
 public:
  static constexpr int kMaxNodes = 64;

  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}

  NodeSet(std::initializer_list<int> ids) {
    for (int id : ids) add(id);
  }

  static NodeSet full(int n) {
    check_index(n - 1);
    return n == 64 ? NodeSet(~std::uint64_t{0})
                   : NodeSet((std::uint64_t{1} << n) - 1);
  }

  static NodeSet single(int id) {
    check_index(id);
    return NodeSet(std::uint64_t{1} << id);
  }

  void add(int id) {
    check_index(id);
    bits_ |= std::uint64_t{1} << id;
  }

  void remove(int id) {
    check_index(id);
    bits_ &= ~(std::uint64_t{1} << id);
  }

  bool contains(int id) const {
    return id >= 0 && id < kMaxNodes && (bits_ >> id & 1) != 0;
  }

  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }

  bool subset_of(const NodeSet& other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  bool intersects(const NodeSet& other) const {
    return (bits_ & other.bits_) != 0;
  }

  friend NodeSet operator&(NodeSet a, NodeSet b) {
    return NodeSet(a.bits_ & b.bits_);
  }
  friend NodeSet operator|(NodeSet a, NodeSet b) {
    return NodeSet(a.bits_ | b.bits_);
  }
  NodeSet complement_in(int n) const { return NodeSet(full(n).bits_ & ~bits_); }

  auto operator<=>(const NodeSet&) const = default;

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      out.push_back(std::countr_zero(b));
    return out;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      fn(std::countr_zero(b));
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for_each([&](int id) {
      if (!first) out += ",";
      out += std::to_string(id);
      first = false;
    });
    out += "}";
    return out;
  }

 private:
  static void check_index(int id) {
    if (id < 0 || id >= kMaxNodes)
      throw std::invalid_argument("node index out of range: " +
                                  std::to_string(id));
  }

  std::uint64_t bits_ = 0;
};

/// Calls fn(NodeSet) for every subset of {0..n-1} with exactly k elements.
template <typename Fn>
void for_each_subset_of_size(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    fn(NodeSet{});
    return;
  }
  // Gosper's hack: next-larger integer with the same popcount.
  std::uint64_t v = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = n == 64 ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << n) - 1;
  while (v <= limit) {
    fn(NodeSet(v));
    std::uint64_t c = v & -v;
    std::uint64_t r = v + c;
    if (r == 0) break;  // would wrap past 64 bits
    v = (((r ^ v) >> 2) / c) | r;
  }
}

}  // namespace ffpaxos
