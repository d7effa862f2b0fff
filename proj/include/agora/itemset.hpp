#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "agora/errors.hpp"

namespace agora {

// A subset of item indices 0..m-1, m <= 64, with exact bitset semantics.
class ItemSet {
 public:
  static constexpr int max_items = 64;

  constexpr ItemSet() = default;

  static constexpr ItemSet from_bits(std::uint64_t bits) { return ItemSet(bits); }

  static ItemSet single(int j) {
    check_index(j);
    return ItemSet(std::uint64_t{1} << j);
  }

  // {0, ..., m-1}
  static ItemSet all(int m) {
    if (m < 0 || m > max_items) throw InvariantError("item count out of range: " + std::to_string(m));
    if (m == 0) return ItemSet();
    return ItemSet(~std::uint64_t{0} >> (max_items - m));
  }

  static ItemSet of(std::initializer_list<int> items) {
    ItemSet s;
    for (int j : items) s = s.with(j);
    return s;
  }

  static ItemSet of(const std::vector<int>& items) {
    ItemSet s;
    for (int j : items) s = s.with(j);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const { return std::popcount(bits_); }

  constexpr bool contains(int j) const {
    return j >= 0 && j < max_items && (bits_ >> j & 1u) != 0;
  }

  ItemSet with(int j) const {
    check_index(j);
    return ItemSet(bits_ | (std::uint64_t{1} << j));
  }

  ItemSet without(int j) const {
    check_index(j);
    return ItemSet(bits_ & ~(std::uint64_t{1} << j));
  }

  constexpr bool subset_of(ItemSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(ItemSet other) const { return (bits_ & other.bits_) != 0; }

  friend constexpr ItemSet operator|(ItemSet a, ItemSet b) { return ItemSet(a.bits_ | b.bits_); }
  friend constexpr ItemSet operator&(ItemSet a, ItemSet b) { return ItemSet(a.bits_ & b.bits_); }
  friend constexpr ItemSet operator-(ItemSet a, ItemSet b) { return ItemSet(a.bits_ & ~b.bits_); }

  constexpr bool operator==(const ItemSet&) const = default;

  // Smallest member, or -1 when empty.
  constexpr int lowest() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }
  // Largest member, or -1 when empty.
  constexpr int highest() const { return bits_ == 0 ? -1 : 63 - std::countl_zero(bits_); }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  // Deterministic tie-break order: fewer items first, then the
  // lexicographically smaller ascending item sequence. For equal-size sets
  // the sequence order is decided by the smallest member of the symmetric
  // difference.
  static bool precedes(ItemSet a, ItemSet b) {
    if (a.bits_ == b.bits_) return false;
    int ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    ItemSet diff(a.bits_ ^ b.bits_);
    return a.contains(diff.lowest());
  }

  // Visits every subset of this set, including itself and the empty set.
  template <class F>
  void for_each_subset(F&& visit) const {
    std::uint64_t sub = bits_;
    while (true) {
      visit(ItemSet(sub));
      if (sub == 0) break;
      sub = (sub - 1) & bits_;
    }
  }

  // Iteration over members in ascending order.
  class iterator {
   public:
    explicit constexpr iterator(std::uint64_t bits) : bits_(bits) {}
    constexpr int operator*() const { return std::countr_zero(bits_); }
    constexpr iterator& operator++() {
      bits_ &= bits_ - 1;
      return *this;
    }
    constexpr bool operator!=(const iterator& o) const { return bits_ != o.bits_; }

   private:
    std::uint64_t bits_;
  };
  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (int j : *this) {
      if (!first) out += ",";
      out += std::to_string(j);
      first = false;
    }
    out += "}";
    return out;
  }

 private:
  explicit constexpr ItemSet(std::uint64_t bits) : bits_(bits) {}

  static void check_index(int j) {
    if (j < 0 || j >= max_items)
      throw InvariantError("item index out of range: " + std::to_string(j));
  }

  std::uint64_t bits_ = 0;
};

}  // namespace agora
