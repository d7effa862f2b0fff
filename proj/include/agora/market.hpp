#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agora/allocate.hpp"
#include "agora/caps.hpp"
#include "agora/errors.hpp"
#include "agora/prices.hpp"
#include "agora/prior.hpp"
#include "agora/rng.hpp"
#include "agora/valuation.hpp"

namespace agora {

enum class TieBreak { Canonical, AdversarialMin };

enum class PolicyKind { Fixed, UniformRandom, WorstCaseStatic, AdaptiveAdversary };

inline const char* policy_kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Fixed: return "fixed";
    case PolicyKind::UniformRandom: return "uniform_random";
    case PolicyKind::WorstCaseStatic: return "worst_case_static";
    case PolicyKind::AdaptiveAdversary: return "adaptive_adversary";
  }
  return "?";
}

// How the arrival order is chosen.
struct ArrivalPolicy {
  PolicyKind kind = PolicyKind::Fixed;
  std::vector<int> order;   // Fixed only: arrival sequence of buyer indices
  std::uint64_t seed = 0;   // UniformRandom only: extra stream salt

  static ArrivalPolicy fixed(std::vector<int> order) {
    return ArrivalPolicy{PolicyKind::Fixed, std::move(order), 0};
  }
  static ArrivalPolicy uniform_random(std::uint64_t seed = 0) {
    return ArrivalPolicy{PolicyKind::UniformRandom, {}, seed};
  }
  static ArrivalPolicy worst_case_static() { return ArrivalPolicy{PolicyKind::WorstCaseStatic, {}, 0}; }
  static ArrivalPolicy adaptive_adversary() { return ArrivalPolicy{PolicyKind::AdaptiveAdversary, {}, 0}; }

  void validate(int buyer_count) const {
    if (kind != PolicyKind::Fixed) return;
    if (static_cast<int>(order.size()) != buyer_count)
      throw InvariantError("fixed arrival order has " + std::to_string(order.size()) + " entries for " +
                           std::to_string(buyer_count) + " buyers");
    std::vector<bool> seen(order.size(), false);
    for (int b : order) {
      if (b < 0 || b >= buyer_count || seen[static_cast<std::size_t>(b)])
        throw InvariantError("fixed arrival order is not a permutation of the buyers");
      seen[static_cast<std::size_t>(b)] = true;
    }
  }

  bool operator==(const ArrivalPolicy&) const = default;
};

inline std::string order_label(const std::vector<int>& order) {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += "-";
    out += std::to_string(order[i]);
  }
  return out;
}

// Result of one consumption run.
template <class T>
struct MarketOutcome {
  Allocation purchases;
  std::vector<T> payments;
  std::vector<T> utilities;
  T revenue{};
  T welfare{};
  std::vector<std::pair<int, ItemSet>> sold_trace;  // (buyer, bundle) in arrival order
};

namespace detail {

template <class T>
MarketOutcome<T> assemble_outcome(const Profile<T>& profile, const PriceVector<T>& prices,
                                  const std::vector<int>& order, const std::vector<ItemSet>& bought) {
  MarketOutcome<T> out;
  out.purchases.bundles = bought;
  out.payments.assign(profile.size(), T{});
  out.utilities.assign(profile.size(), T{});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    T pay = prices.total(bought[i]);
    T val = profile[i]->value(bought[i]);
    out.payments[i] = pay;
    out.utilities[i] = val - pay;
    out.revenue += pay;
    out.welfare += val;
  }
  out.sold_trace.reserve(order.size());
  for (int buyer : order) out.sold_trace.emplace_back(buyer, bought[static_cast<std::size_t>(buyer)]);
  return out;
}

// Minimum achievable final welfare when every buyer's tie among
// utility-maximizing bundles is resolved against the market. Pure search over
// the (arrival position, remaining items) space.
template <class T>
ItemSet adversarial_choice(const Profile<T>& profile, const PriceVector<T>& prices,
                           const std::vector<int>& order, std::size_t pos, ItemSet remaining,
                           std::map<std::pair<std::size_t, std::uint64_t>, T>& memo, T* welfare_out) {
  if (pos == order.size()) {
    if (welfare_out) *welfare_out = T{};
    return ItemSet();
  }
  const Valuation<T>& v = *profile[static_cast<std::size_t>(order[pos])];
  std::vector<ItemSet> options = v.demand_correspondence(prices, remaining);
  ItemSet pick = options.front();
  T best{};
  bool first = true;
  for (ItemSet bundle : options) {
    ItemSet rest = remaining - bundle;
    auto key = std::make_pair(pos + 1, rest.bits());
    T tail;
    auto it = memo.find(key);
    if (it != memo.end()) {
      tail = it->second;
    } else {
      adversarial_choice(profile, prices, order, pos + 1, rest, memo, &tail);
      memo.emplace(key, tail);
    }
    T total = v.value(bundle) + tail;
    if (first || total < best) {
      best = total;
      pick = bundle;
      first = false;
    }
  }
  if (welfare_out) *welfare_out = best;
  return pick;
}

}  // namespace detail

// Sequential consumption: buyers arrive in the given order and each buys a
// demand-optimal bundle from the remaining items at the posted prices.
// With TieBreak::AdversarialMin, every tie in a buyer's demand correspondence
// is resolved toward the lowest final welfare (small markets only).
template <class T>
MarketOutcome<T> run_consumption(const Profile<T>& profile, const PriceVector<T>& prices,
                                 const std::vector<int>& order, TieBreak tie_break = TieBreak::Canonical,
                                 int demand_cap = caps::demand_exhaustive_items) {
  const int n = static_cast<int>(profile.size());
  const int m = n == 0 ? 0 : profile.front()->item_count();
  if (static_cast<int>(order.size()) != n) throw InvariantError("arrival order length mismatch");
  if (tie_break == TieBreak::AdversarialMin && m > caps::adversarial_tie_items)
    throw CapacityError("adversarial tie-breaking supports at most " +
                        std::to_string(caps::adversarial_tie_items) + " items, got " + std::to_string(m));

  std::vector<ItemSet> bought(static_cast<std::size_t>(n));
  ItemSet remaining = ItemSet::all(m);
  std::map<std::pair<std::size_t, std::uint64_t>, T> memo;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    int buyer = order[pos];
    ItemSet bundle = tie_break == TieBreak::Canonical
                         ? profile[static_cast<std::size_t>(buyer)]->demand(prices, remaining, demand_cap)
                         : detail::adversarial_choice(profile, prices, order, pos, remaining, memo,
                                                      static_cast<T*>(nullptr));
    bought[static_cast<std::size_t>(buyer)] = bundle;
    remaining = remaining - bundle;
  }
  return detail::assemble_outcome(profile, prices, order, bought);
}

// Aggregate result of a policy evaluation.
template <class T>
struct PolicyValue {
  T welfare{};
  T revenue{};
  T utility_total{};
  std::vector<int> order;       // meaningful for Fixed / WorstCaseStatic
  double std_error = 0;         // Monte-Carlo welfare standard error
  long long samples = 0;        // Monte-Carlo sample count, 0 for exact
};

struct EvalSpec {
  enum class Mode { Exact, MonteCarlo };
  Mode mode = Mode::Exact;
  long long samples = 10000;
};

namespace detail {

template <class T>
PolicyValue<T> exact_fixed_order(const std::vector<ProfileDraw<T>>& support, const PriceVector<T>& prices,
                                 const std::vector<int>& order, TieBreak tie_break) {
  PolicyValue<T> out;
  out.order = order;
  for (const auto& draw : support) {
    MarketOutcome<T> run = run_consumption(draw.profile, prices, order, tie_break);
    out.welfare += draw.probability * run.welfare;
    out.revenue += draw.probability * run.revenue;
  }
  out.utility_total = out.welfare - out.revenue;
  return out;
}

inline std::vector<std::vector<int>> all_orders(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// Value of the adaptive adversary who, knowing the prices and all past
// purchases and realizations, always sends next the buyer minimizing the
// expected final welfare. Valuations are independent across buyers, so the
// state collapses to (buyers still to arrive, items still unsold); welfare
// already accrued is sunk. Computed by memoized backward induction; tracks
// expected revenue of the minimizing strategy alongside.
template <class T>
std::pair<T, T> adaptive_value(const Prior<T>& prior, const PriceVector<T>& prices, TieBreak tie_break,
                               std::uint32_t remaining_buyers, ItemSet remaining_items,
                               std::map<std::pair<std::uint32_t, std::uint64_t>, std::pair<T, T>>& memo) {
  if (remaining_buyers == 0) return {T{}, T{}};
  auto key = std::make_pair(remaining_buyers, remaining_items.bits());
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  bool have_best = false;
  std::pair<T, T> best;
  for (int i = 0; i < prior.buyer_count(); ++i) {
    if (!(remaining_buyers >> i & 1u)) continue;
    T welfare{};
    T revenue{};
    for (const auto& atom : prior.buyers[static_cast<std::size_t>(i)].atoms) {
      const Valuation<T>& v = atom.valuation;
      std::pair<T, T> atom_best;
      bool atom_first = true;
      std::vector<ItemSet> options =
          tie_break == TieBreak::AdversarialMin
              ? v.demand_correspondence(prices, remaining_items)
              : std::vector<ItemSet>{v.demand(prices, remaining_items)};
      for (ItemSet bundle : options) {
        auto tail = adaptive_value(prior, prices, tie_break, remaining_buyers & ~(1u << i),
                                   remaining_items - bundle, memo);
        T w = v.value(bundle) + tail.first;
        T r = prices.total(bundle) + tail.second;
        if (atom_first || w < atom_best.first) {
          atom_best = {w, r};
          atom_first = false;
        }
      }
      welfare += atom.probability * atom_best.first;
      revenue += atom.probability * atom_best.second;
    }
    if (!have_best || welfare < best.first) {
      best = {welfare, revenue};
      have_best = true;
    }
  }
  memo.emplace(key, best);
  return best;
}

}  // namespace detail

// Expected welfare of the minimizing adaptive adversary.
template <class T>
PolicyValue<T> adaptive_adversary_welfare(const Prior<T>& prior, const PriceVector<T>& prices,
                                          TieBreak tie_break = TieBreak::Canonical) {
  if (prior.buyer_count() > caps::adaptive_buyers)
    throw CapacityError("adaptive adversary supports at most " + std::to_string(caps::adaptive_buyers) +
                        " buyers, got " + std::to_string(prior.buyer_count()));
  for (std::size_t i = 0; i < prior.buyers.size(); ++i)
    if (static_cast<int>(prior.buyers[i].atoms.size()) > caps::adaptive_atoms_per_buyer)
      throw CapacityError("adaptive adversary supports at most " +
                          std::to_string(caps::adaptive_atoms_per_buyer) + " atoms per buyer; buyer " +
                          std::to_string(i) + " has " + std::to_string(prior.buyers[i].atoms.size()));
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::pair<T, T>> memo;
  std::uint32_t everyone = (prior.buyer_count() >= 32) ? ~0u : ((1u << prior.buyer_count()) - 1u);
  auto [welfare, revenue] =
      detail::adaptive_value(prior, prices, tie_break, everyone, ItemSet::all(prior.items), memo);
  PolicyValue<T> out;
  out.welfare = welfare;
  out.revenue = revenue;
  out.utility_total = welfare - revenue;
  return out;
}

// Expected welfare (plus revenue and utility breakdown) of the posted-price
// mechanism under an arrival policy. Exact mode enumerates the support (and
// orders, for order-quantified policies); Monte-Carlo mode averages seeded
// samples and reports a standard error.
template <class T>
PolicyValue<T> expected_welfare(const Prior<T>& prior, const PriceVector<T>& prices,
                                const ArrivalPolicy& policy, const EvalSpec& eval, Rng& rng,
                                TieBreak tie_break = TieBreak::Canonical,
                                long long support_cap = caps::prior_support) {
  policy.validate(prior.buyer_count());
  const int n = prior.buyer_count();

  if (policy.kind == PolicyKind::AdaptiveAdversary) {
    // Always computed exactly by backward induction (its caps keep it small).
    return adaptive_adversary_welfare(prior, prices, tie_break);
  }

  const bool exact = eval.mode == EvalSpec::Mode::Exact;
  if (!exact) {
    if (eval.samples <= 0) throw InvariantError("sample count must be positive");
    if (policy.kind == PolicyKind::WorstCaseStatic) {
      // Common random numbers: one sample pool, minimized over all orders.
      if (n > caps::order_enumeration_buyers)
        throw CapacityError("worst-case order search supports at most " +
                            std::to_string(caps::order_enumeration_buyers) + " buyers, got " +
                            std::to_string(n));
      std::vector<ProfileDraw<T>> pool;
      pool.reserve(static_cast<std::size_t>(eval.samples));
      for (long long s = 0; s < eval.samples; ++s) pool.push_back(sample_profile(prior, rng));
      PolicyValue<T> best;
      bool first = true;
      double best_sum_w2 = 0;
      for (const auto& order : detail::all_orders(n)) {
        PolicyValue<T> one;
        one.order = order;
        double sum_w2 = 0;
        for (const auto& draw : pool) {
          MarketOutcome<T> run = run_consumption(draw.profile, prices, order, tie_break);
          one.welfare += run.welfare;
          one.revenue += run.revenue;
          double w = to_double(run.welfare);
          sum_w2 += w * w;
        }
        if (first || one.welfare < best.welfare) {
          best = one;
          best_sum_w2 = sum_w2;
          first = false;
        }
      }
      double ns = static_cast<double>(eval.samples);
      double mean = to_double(best.welfare) / ns;
      T count = T(static_cast<std::int64_t>(eval.samples));
      best.welfare = best.welfare / count;
      best.revenue = best.revenue / count;
      best.utility_total = best.welfare - best.revenue;
      best.samples = eval.samples;
      double var = std::max(0.0, (best_sum_w2 - ns * mean * mean) / std::max(1.0, ns - 1));
      best.std_error = std::sqrt(var / ns);
      return best;
    }
    PolicyValue<T> out;
    out.samples = eval.samples;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (policy.kind == PolicyKind::Fixed) {
      order = policy.order;
      out.order = order;
    }
    double sum_w = 0, sum_w2 = 0;
    for (long long s = 0; s < eval.samples; ++s) {
      ProfileDraw<T> draw = sample_profile(prior, rng);
      if (policy.kind == PolicyKind::UniformRandom) shuffle_vector(order, rng);
      MarketOutcome<T> run = run_consumption(draw.profile, prices, order, tie_break);
      out.welfare += run.welfare;
      out.revenue += run.revenue;
      double w = to_double(run.welfare);
      sum_w += w;
      sum_w2 += w * w;
    }
    T count = T(static_cast<std::int64_t>(eval.samples));
    out.welfare = out.welfare / count;
    out.revenue = out.revenue / count;
    out.utility_total = out.welfare - out.revenue;
    double ns = static_cast<double>(eval.samples);
    double var = std::max(0.0, (sum_w2 - sum_w * sum_w / ns) / std::max(1.0, ns - 1));
    out.std_error = std::sqrt(var / ns);
    return out;
  }

  std::vector<ProfileDraw<T>> support = enumerate_support(prior, support_cap);

  switch (policy.kind) {
    case PolicyKind::Fixed:
      return detail::exact_fixed_order(support, prices, policy.order, tie_break);
    case PolicyKind::UniformRandom: {
      if (n > caps::order_enumeration_buyers)
        throw CapacityError("exact order average supports at most " +
                            std::to_string(caps::order_enumeration_buyers) + " buyers, got " +
                            std::to_string(n) + "; use Monte-Carlo evaluation");
      auto orders = detail::all_orders(n);
      PolicyValue<T> out;
      for (const auto& order : orders) {
        PolicyValue<T> one = detail::exact_fixed_order(support, prices, order, tie_break);
        out.welfare += one.welfare;
        out.revenue += one.revenue;
      }
      T count = T(static_cast<std::int64_t>(orders.size()));
      out.welfare = out.welfare / count;
      out.revenue = out.revenue / count;
      out.utility_total = out.welfare - out.revenue;
      return out;
    }
    case PolicyKind::WorstCaseStatic: {
      if (n > caps::order_enumeration_buyers)
        throw CapacityError("worst-case order search supports at most " +
                            std::to_string(caps::order_enumeration_buyers) + " buyers, got " +
                            std::to_string(n));
      auto orders = detail::all_orders(n);
      PolicyValue<T> best;
      bool first = true;
      for (const auto& order : orders) {
        PolicyValue<T> one = detail::exact_fixed_order(support, prices, order, tie_break);
        if (first || one.welfare < best.welfare) {
          best = one;
          first = false;
        }
      }
      return best;
    }
    default:
      throw InvariantError("unreachable policy kind");
  }
}

// Per-profile worst fixed order, a harsher diagnostic than the worst static
// order (the adversary may pick a different order per realization).
template <class T>
T profilewise_worst_welfare(const Prior<T>& prior, const PriceVector<T>& prices,
                            TieBreak tie_break = TieBreak::Canonical,
                            long long support_cap = caps::prior_support) {
  if (prior.buyer_count() > caps::order_enumeration_buyers)
    throw CapacityError("order search supports at most " + std::to_string(caps::order_enumeration_buyers) +
                        " buyers");
  auto support = enumerate_support(prior, support_cap);
  auto orders = detail::all_orders(prior.buyer_count());
  T total{};
  for (const auto& draw : support) {
    T worst{};
    bool first = true;
    for (const auto& order : orders) {
      T w = run_consumption(draw.profile, prices, order, tie_break).welfare;
      if (first || w < worst) {
        worst = w;
        first = false;
      }
    }
    total += draw.probability * worst;
  }
  return total;
}

// True utility buyer `who` ends up with when the consumption phase is run
// with their demand decisions driven by `reported` while everyone else is
// truthful. The buyer's realized utility is always measured against their
// true valuation.
template <class T>
T misreport_true_utility(const Profile<T>& truth, int who, const Valuation<T>& reported,
                         const PriceVector<T>& prices, const std::vector<int>& order,
                         TieBreak tie_break = TieBreak::Canonical) {
  Profile<T> behavior = truth;
  behavior[static_cast<std::size_t>(who)] = &reported;
  MarketOutcome<T> run = run_consumption(behavior, prices, order, tie_break);
  ItemSet got = run.purchases.bundles[static_cast<std::size_t>(who)];
  return truth[static_cast<std::size_t>(who)]->value(got) - prices.total(got);
}

}  // namespace agora
