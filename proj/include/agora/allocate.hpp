#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "agora/caps.hpp"
#include "agora/errors.hpp"
#include "agora/itemset.hpp"
#include "agora/valuation.hpp"

namespace agora {

// Disjoint bundle assignment; items may remain unallocated.
struct Allocation {
  std::vector<ItemSet> bundles;

  ItemSet allocated_items() const {
    ItemSet s;
    for (ItemSet b : bundles) s = s | b;
    return s;
  }

  bool disjoint() const {
    ItemSet seen;
    for (ItemSet b : bundles) {
      if (b.intersects(seen)) return false;
      seen = seen | b;
    }
    return true;
  }

  bool operator==(const Allocation&) const = default;
};

template <class T>
void validate_allocation(const Profile<T>& profile, const Allocation& alloc) {
  if (alloc.bundles.size() != profile.size())
    throw InvariantError("allocation has " + std::to_string(alloc.bundles.size()) + " bundles for " +
                         std::to_string(profile.size()) + " buyers");
  if (!alloc.disjoint()) throw InvariantError("allocation bundles are not disjoint");
  int m = profile.empty() ? 0 : profile.front()->item_count();
  if (!alloc.allocated_items().subset_of(ItemSet::all(m)))
    throw InvariantError("allocation mentions an item >= " + std::to_string(m));
}

template <class T>
T allocation_welfare(const Profile<T>& profile, const Allocation& alloc) {
  T sum{};
  for (std::size_t i = 0; i < profile.size(); ++i) sum += profile[i]->value(alloc.bundles[i]);
  return sum;
}

// Welfare-maximizing allocation by exhaustive search: every item goes to one
// of the n buyers or to nobody, (n+1)^m assignments in total. Ties are broken
// by the lexicographically smallest assignment vector, with buyers ordered
// before the no-buyer option, so equal-welfare ties prefer allocating and
// prefer lower buyer indices.
template <class T>
Allocation solve_exact(const Profile<T>& profile, long long cap = caps::allocation_assignments) {
  const int n = static_cast<int>(profile.size());
  if (n == 0) return Allocation{};
  const int m = profile.front()->item_count();

  double assignments = std::pow(static_cast<double>(n) + 1.0, m);
  if (assignments > static_cast<double>(cap))
    throw CapacityError("exhaustive welfare search needs " + std::to_string(assignments) +
                        " assignments, above the cap of " + std::to_string(cap) +
                        "; use the greedy algorithm or shrink the instance");

  // Value tables make each assignment O(n + m) instead of full oracle calls.
  const bool tabulate = m <= 20 && static_cast<double>(n) * std::pow(2.0, m) <= 4e6;
  std::vector<std::vector<T>> table;
  if (tabulate) {
    table.resize(static_cast<std::size_t>(n));
    const std::uint64_t masks = std::uint64_t{1} << m;
    for (int i = 0; i < n; ++i) {
      table[static_cast<std::size_t>(i)].reserve(masks);
      for (std::uint64_t mask = 0; mask < masks; ++mask)
        table[static_cast<std::size_t>(i)].push_back(profile[static_cast<std::size_t>(i)]->value(ItemSet::from_bits(mask)));
    }
  }

  std::vector<int> assign(static_cast<std::size_t>(m), 0);  // 0..n-1 buyer, n = nobody
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(n));
  Allocation best;
  best.bundles.assign(static_cast<std::size_t>(n), ItemSet());
  bool have_best = false;
  T best_welfare{};

  while (true) {
    std::fill(masks.begin(), masks.end(), 0);
    for (int j = 0; j < m; ++j) {
      int who = assign[static_cast<std::size_t>(j)];
      if (who < n) masks[static_cast<std::size_t>(who)] |= std::uint64_t{1} << j;
    }
    T welfare{};
    for (int i = 0; i < n; ++i) {
      if (tabulate)
        welfare += table[static_cast<std::size_t>(i)][masks[static_cast<std::size_t>(i)]];
      else
        welfare += profile[static_cast<std::size_t>(i)]->value(ItemSet::from_bits(masks[static_cast<std::size_t>(i)]));
    }
    // Strict improvement keeps the first (lexicographically smallest)
    // maximizer, since assignments are visited in ascending order.
    if (!have_best || welfare > best_welfare) {
      best_welfare = welfare;
      for (int i = 0; i < n; ++i)
        best.bundles[static_cast<std::size_t>(i)] = ItemSet::from_bits(masks[static_cast<std::size_t>(i)]);
      have_best = true;
    }
    int pos = m;
    while (pos > 0) {
      --pos;
      if (++assign[static_cast<std::size_t>(pos)] <= n) break;
      assign[static_cast<std::size_t>(pos)] = 0;
      if (pos == 0) return best;
    }
    if (m == 0) return best;
  }
}

// Greedy marginal-value allocation: items in ascending index order each go
// to the buyer with the largest marginal value, skipped when every marginal
// is zero. Ties prefer the lower buyer index.
template <class T>
Allocation solve_greedy(const Profile<T>& profile) {
  const int n = static_cast<int>(profile.size());
  Allocation out;
  out.bundles.assign(static_cast<std::size_t>(n), ItemSet());
  if (n == 0) return out;
  const int m = profile.front()->item_count();
  std::vector<T> current(static_cast<std::size_t>(n), T{});
  for (int j = 0; j < m; ++j) {
    int pick = -1;
    T best_gain{};
    T pick_value{};
    for (int i = 0; i < n; ++i) {
      T with_item = profile[static_cast<std::size_t>(i)]->value(out.bundles[static_cast<std::size_t>(i)].with(j));
      T gain = with_item - current[static_cast<std::size_t>(i)];
      if (gain > best_gain) {
        best_gain = gain;
        pick = i;
        pick_value = with_item;
      }
    }
    if (pick >= 0) {
      out.bundles[static_cast<std::size_t>(pick)] = out.bundles[static_cast<std::size_t>(pick)].with(j);
      current[static_cast<std::size_t>(pick)] = pick_value;
    }
  }
  return out;
}

enum class AlgorithmKind { Exact, Greedy };

// Black-box welfare maximizer the pricing guarantees are measured against.
struct WelfareAlgorithm {
  AlgorithmKind kind = AlgorithmKind::Exact;
  long long assignment_cap = caps::allocation_assignments;

  template <class T>
  Allocation run(const Profile<T>& profile) const {
    return kind == AlgorithmKind::Exact ? solve_exact(profile, assignment_cap) : solve_greedy(profile);
  }

  const char* label() const { return kind == AlgorithmKind::Exact ? "exact" : "greedy"; }

  bool operator==(const WelfareAlgorithm&) const = default;
};

}  // namespace agora
