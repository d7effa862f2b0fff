#pragma once

#include <algorithm>
#include <bit>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "agora/caps.hpp"
#include "agora/errors.hpp"
#include "agora/itemset.hpp"
#include "agora/prices.hpp"

namespace agora {

// One additive function over the items; the building block of XOS valuations
// and the payload of the additive-representative query.
template <class T>
struct AdditiveClause {
  std::vector<T> weights;

  int item_count() const { return static_cast<int>(weights.size()); }

  T value(ItemSet s) const {
    T sum{};
    for (int j : s) sum += weights[static_cast<std::size_t>(j)];
    return sum;
  }

  const T& at(int j) const { return weights[static_cast<std::size_t>(j)]; }

  AdditiveClause restricted_to(ItemSet s) const {
    AdditiveClause out;
    out.weights.assign(weights.size(), T{});
    for (int j : s) out.weights[static_cast<std::size_t>(j)] = weights[static_cast<std::size_t>(j)];
    return out;
  }

  bool operator==(const AdditiveClause&) const = default;
};

template <class T>
struct Hyperedge {
  ItemSet items;
  T weight{};

  bool operator==(const Hyperedge&) const = default;
};

// Weighted hypergraph h; induced set function value(S) = sum of edge weights
// over edges fully contained in S.
template <class T>
struct Hypergraph {
  std::vector<Hyperedge<T>> edges;

  T value(ItemSet s) const {
    T sum{};
    for (const auto& e : edges)
      if (e.items.subset_of(s)) sum += e.weight;
    return sum;
  }

  // Largest edge cardinality; 0 for an edgeless graph.
  int rank() const {
    int r = 0;
    for (const auto& e : edges) r = std::max(r, e.items.count());
    return r;
  }

  Hypergraph restricted_to(ItemSet s) const {
    Hypergraph out;
    for (const auto& e : edges)
      if (e.items.subset_of(s)) out.edges.push_back(e);
    return out;
  }

  bool operator==(const Hypergraph&) const = default;
};

enum class ValuationKind { Additive, UnitDemand, SingleMinded, Coverage, Xos, Mph };

inline const char* valuation_kind_name(ValuationKind k) {
  switch (k) {
    case ValuationKind::Additive: return "additive";
    case ValuationKind::UnitDemand: return "unit_demand";
    case ValuationKind::SingleMinded: return "single_minded";
    case ValuationKind::Coverage: return "coverage";
    case ValuationKind::Xos: return "xos";
    case ValuationKind::Mph: return "mph";
  }
  return "?";
}

// One buyer's monotone set function. Immutable after construction; every
// query below is a pure function.
template <class T>
class Valuation {
 public:
  struct AdditiveRep {
    AdditiveClause<T> clause;
    bool operator==(const AdditiveRep&) const = default;
  };
  struct UnitDemandRep {
    std::vector<T> values;
    bool operator==(const UnitDemandRep&) const = default;
  };
  struct SingleMindedRep {
    ItemSet target;
    T value{};
    bool operator==(const SingleMindedRep&) const = default;
  };
  struct CoverageRep {
    std::vector<T> universe_weights;
    std::vector<std::uint64_t> covers;  // per item, bitmask over universe elements
    bool operator==(const CoverageRep&) const = default;
  };
  struct XosRep {
    std::vector<AdditiveClause<T>> clauses;
    bool operator==(const XosRep&) const = default;
  };
  struct MphRep {
    std::vector<Hypergraph<T>> candidates;
    bool operator==(const MphRep&) const = default;
  };

  static Valuation additive(std::vector<T> weights) {
    require_nonneg(weights, "additive weight");
    int m = static_cast<int>(weights.size());
    return Valuation(m, AdditiveRep{AdditiveClause<T>{std::move(weights)}});
  }

  static Valuation unit_demand(std::vector<T> values) {
    require_nonneg(values, "unit-demand value");
    int m = static_cast<int>(values.size());
    return Valuation(m, UnitDemandRep{std::move(values)});
  }

  static Valuation single_minded(int m, ItemSet target, T value) {
    if (!target.subset_of(ItemSet::all(m)))
      throw InvariantError("single-minded target mentions an item >= " + std::to_string(m));
    if (target.empty()) throw InvariantError("single-minded target must be nonempty");
    if (value < T{}) throw InvariantError("single-minded value must be nonnegative");
    return Valuation(m, SingleMindedRep{target, std::move(value)});
  }

  static Valuation coverage(std::vector<T> universe_weights, const std::vector<std::vector<int>>& covers) {
    require_nonneg(universe_weights, "coverage universe weight");
    int universe = static_cast<int>(universe_weights.size());
    if (universe > 64) throw InvariantError("coverage universe larger than 64 elements");
    CoverageRep rep;
    rep.universe_weights = std::move(universe_weights);
    rep.covers.reserve(covers.size());
    for (std::size_t j = 0; j < covers.size(); ++j) {
      std::uint64_t mask = 0;
      for (int e : covers[j]) {
        if (e < 0 || e >= universe)
          throw InvariantError("coverage: item " + std::to_string(j) + " covers unknown universe element " +
                               std::to_string(e));
        mask |= std::uint64_t{1} << e;
      }
      rep.covers.push_back(mask);
    }
    int m = static_cast<int>(covers.size());
    return Valuation(m, std::move(rep));
  }

  static Valuation xos(std::vector<AdditiveClause<T>> clauses) {
    if (clauses.empty()) throw InvariantError("xos valuation needs at least one clause");
    int m = clauses.front().item_count();
    for (const auto& c : clauses) {
      if (c.item_count() != m) throw InvariantError("xos clauses disagree on item count");
      require_nonneg(c.weights, "xos clause weight");
    }
    return Valuation(m, XosRep{std::move(clauses)});
  }

  static Valuation mph(int m, std::vector<Hypergraph<T>> candidates) {
    if (candidates.empty()) throw InvariantError("mph valuation needs at least one candidate");
    for (const auto& g : candidates) {
      for (const auto& e : g.edges) {
        if (e.items.empty()) throw InvariantError("mph hyperedge must be nonempty");
        if (!e.items.subset_of(ItemSet::all(m)))
          throw InvariantError("mph hyperedge mentions an item >= " + std::to_string(m));
        if (e.weight < T{}) throw InvariantError("mph hyperedge weight must be nonnegative");
      }
    }
    return Valuation(m, MphRep{std::move(candidates)});
  }

  ValuationKind kind() const { return static_cast<ValuationKind>(rep_.index()); }
  int item_count() const { return items_; }

  // Value query: v(S).
  T value(ItemSet s) const {
    check_items(s);
    return value_unchecked(s);
  }

  // Demand query: the utility-maximizing bundle among the available items at
  // the given prices. Ties are broken deterministically: smallest
  // cardinality first, then lexicographically smallest item sequence, so a
  // bundle of zero utility never beats the empty set. Additive, unit-demand
  // and single-minded valuations use closed forms; the rest are resolved by
  // exhaustive subset search, capped.
  ItemSet demand(const PriceVector<T>& prices, ItemSet available,
                 int exhaustive_cap = caps::demand_exhaustive_items) const {
    check_items(available);
    if (prices.size() != items_)
      throw InvariantError("price vector has " + std::to_string(prices.size()) + " entries, expected " +
                           std::to_string(items_));
    switch (kind()) {
      case ValuationKind::Additive: {
        const auto& w = std::get<AdditiveRep>(rep_).clause.weights;
        ItemSet out;
        for (int j : available)
          if (w[static_cast<std::size_t>(j)] > prices.at(j)) out = out.with(j);
        return out;
      }
      case ValuationKind::UnitDemand: {
        const auto& vals = std::get<UnitDemandRep>(rep_).values;
        int pick = -1;
        T best{};
        for (int j : available) {
          T u = vals[static_cast<std::size_t>(j)] - prices.at(j);
          if (u > best) {
            best = u;
            pick = j;
          }
        }
        return pick < 0 ? ItemSet() : ItemSet::single(pick);
      }
      case ValuationKind::SingleMinded: {
        const auto& rep = std::get<SingleMindedRep>(rep_);
        if (!rep.target.subset_of(available)) return ItemSet();
        T u = rep.value - prices.total(rep.target);
        return u > T{} ? rep.target : ItemSet();
      }
      default: {
        if (available.count() > exhaustive_cap)
          throw CapacityError("demand search over " + std::to_string(available.count()) +
                              " items exceeds the exhaustive cap of " + std::to_string(exhaustive_cap) +
                              "; reduce the market or raise the cap");
        ItemSet best;
        T best_utility{};
        available.for_each_subset([&](ItemSet sub) {
          T u = value_unchecked(sub) - prices.total(sub);
          if (u > best_utility || (u == best_utility && ItemSet::precedes(sub, best))) {
            best_utility = u;
            best = sub;
          }
        });
        return best;
      }
    }
  }

  // All utility-maximizing bundles, in deterministic tie-break order.
  // Always resolved by exhaustive search.
  std::vector<ItemSet> demand_correspondence(const PriceVector<T>& prices, ItemSet available,
                                             int exhaustive_cap = caps::adversarial_tie_items) const {
    check_items(available);
    if (prices.size() != items_) throw InvariantError("price vector length mismatch");
    if (available.count() > exhaustive_cap)
      throw CapacityError("demand correspondence over " + std::to_string(available.count()) +
                          " items exceeds the cap of " + std::to_string(exhaustive_cap));
    T best{};
    bool first = true;
    std::vector<ItemSet> maximizers;
    available.for_each_subset([&](ItemSet sub) {
      T u = value_unchecked(sub) - prices.total(sub);
      if (first || u > best) {
        best = u;
        maximizers.assign(1, sub);
        first = false;
      } else if (u == best) {
        maximizers.push_back(sub);
      }
    });
    std::sort(maximizers.begin(), maximizers.end(), ItemSet::precedes);
    return maximizers;
  }

  bool xos_liftable() const {
    switch (kind()) {
      case ValuationKind::Additive:
      case ValuationKind::UnitDemand:
      case ValuationKind::Coverage:
      case ValuationKind::Xos:
        return true;
      default:
        return false;
    }
  }

  // Additive-representative query for XOS-style valuations: a clause A with
  // A(S) = v(S) and A(S') <= v(S') everywhere. The returned clause is zeroed
  // outside S, which preserves both conditions.
  AdditiveClause<T> xos_clause(ItemSet s) const {
    check_items(s);
    switch (kind()) {
      case ValuationKind::Additive:
        return std::get<AdditiveRep>(rep_).clause.restricted_to(s);
      case ValuationKind::UnitDemand: {
        const auto& vals = std::get<UnitDemandRep>(rep_).values;
        int pick = -1;
        for (int j : s)
          if (pick < 0 || vals[static_cast<std::size_t>(j)] > vals[static_cast<std::size_t>(pick)]) pick = j;
        AdditiveClause<T> out;
        out.weights.assign(static_cast<std::size_t>(items_), T{});
        if (pick >= 0) out.weights[static_cast<std::size_t>(pick)] = vals[static_cast<std::size_t>(pick)];
        return out;
      }
      case ValuationKind::Coverage: {
        // Marginal ordering over S ascending: each universe element is
        // credited to the first item of S that covers it.
        const auto& rep = std::get<CoverageRep>(rep_);
        AdditiveClause<T> out;
        out.weights.assign(static_cast<std::size_t>(items_), T{});
        std::uint64_t covered = 0;
        for (int j : s) {
          std::uint64_t gained = rep.covers[static_cast<std::size_t>(j)] & ~covered;
          T w{};
          for (std::uint64_t b = gained; b != 0; b &= b - 1)
            w += rep.universe_weights[static_cast<std::size_t>(std::countr_zero(b))];
          out.weights[static_cast<std::size_t>(j)] = w;
          covered |= gained;
        }
        return out;
      }
      case ValuationKind::Xos: {
        const auto& clauses = std::get<XosRep>(rep_).clauses;
        std::size_t pick = 0;
        T best = clauses[0].value(s);
        for (std::size_t c = 1; c < clauses.size(); ++c) {
          T v = clauses[c].value(s);
          if (v > best) {
            best = v;
            pick = c;
          }
        }
        return clauses[pick].restricted_to(s);
      }
      default:
        throw WrongOracleError(std::string(valuation_kind_name(kind())) +
                               " valuation does not answer the additive-representative query");
    }
  }

  // Hypergraph-representative query: a nonnegative hypergraph g with
  // g(S) = v(S) and g(S') <= v(S') everywhere, rank bounded by mph_rank().
  // XOS-style valuations are answered at rank 1 via their additive clause.
  Hypergraph<T> mph_clause(ItemSet s) const {
    check_items(s);
    switch (kind()) {
      case ValuationKind::SingleMinded: {
        const auto& rep = std::get<SingleMindedRep>(rep_);
        Hypergraph<T> g;
        if (rep.target.subset_of(s) && rep.value > T{}) g.edges.push_back({rep.target, rep.value});
        return g;
      }
      case ValuationKind::Mph: {
        const auto& candidates = std::get<MphRep>(rep_).candidates;
        std::size_t pick = 0;
        T best = candidates[0].value(s);
        for (std::size_t c = 1; c < candidates.size(); ++c) {
          T v = candidates[c].value(s);
          if (v > best) {
            best = v;
            pick = c;
          }
        }
        return candidates[pick].restricted_to(s);
      }
      default: {
        AdditiveClause<T> clause = xos_clause(s);
        Hypergraph<T> g;
        for (int j : s) {
          const T& w = clause.at(j);
          if (!(w == T{})) g.edges.push_back({ItemSet::single(j), w});
        }
        return g;
      }
    }
  }

  // Hypergraph rank of the representation this valuation can be queried at.
  int mph_rank() const {
    switch (kind()) {
      case ValuationKind::SingleMinded:
        return std::get<SingleMindedRep>(rep_).target.count();
      case ValuationKind::Mph: {
        int r = 1;
        for (const auto& g : std::get<MphRep>(rep_).candidates) r = std::max(r, g.rank());
        return r;
      }
      default:
        return 1;
    }
  }

  // Same shape with every weight divided by the given positive factor.
  Valuation scaled_down(const T& divisor) const {
    Valuation out = *this;
    std::visit(
        [&](auto& rep) {
          using R = std::decay_t<decltype(rep)>;
          if constexpr (std::is_same_v<R, AdditiveRep>) {
            for (auto& w : rep.clause.weights) w = w / divisor;
          } else if constexpr (std::is_same_v<R, UnitDemandRep>) {
            for (auto& w : rep.values) w = w / divisor;
          } else if constexpr (std::is_same_v<R, SingleMindedRep>) {
            rep.value = rep.value / divisor;
          } else if constexpr (std::is_same_v<R, CoverageRep>) {
            for (auto& w : rep.universe_weights) w = w / divisor;
          } else if constexpr (std::is_same_v<R, XosRep>) {
            for (auto& c : rep.clauses)
              for (auto& w : c.weights) w = w / divisor;
          } else {
            for (auto& g : rep.candidates)
              for (auto& e : g.edges) e.weight = e.weight / divisor;
          }
        },
        out.rep_);
    return out;
  }

  const std::variant<AdditiveRep, UnitDemandRep, SingleMindedRep, CoverageRep, XosRep, MphRep>& rep() const {
    return rep_;
  }

  bool operator==(const Valuation&) const = default;

 private:
  template <class Rep>
  Valuation(int items, Rep rep) : items_(items), rep_(std::move(rep)) {
    if (items_ < 0 || items_ > ItemSet::max_items)
      throw InvariantError("item count out of range: " + std::to_string(items_));
  }

  void check_items(ItemSet s) const {
    if (!s.subset_of(ItemSet::all(items_)))
      throw InvariantError("query mentions an item >= " + std::to_string(items_));
  }

  T value_unchecked(ItemSet s) const {
    switch (kind()) {
      case ValuationKind::Additive:
        return std::get<AdditiveRep>(rep_).clause.value(s);
      case ValuationKind::UnitDemand: {
        const auto& vals = std::get<UnitDemandRep>(rep_).values;
        T best{};
        for (int j : s) {
          const T& v = vals[static_cast<std::size_t>(j)];
          if (v > best) best = v;
        }
        return best;
      }
      case ValuationKind::SingleMinded: {
        const auto& rep = std::get<SingleMindedRep>(rep_);
        return rep.target.subset_of(s) ? rep.value : T{};
      }
      case ValuationKind::Coverage: {
        const auto& rep = std::get<CoverageRep>(rep_);
        std::uint64_t mask = 0;
        for (int j : s) mask |= rep.covers[static_cast<std::size_t>(j)];
        T sum{};
        for (std::uint64_t b = mask; b != 0; b &= b - 1)
          sum += rep.universe_weights[static_cast<std::size_t>(std::countr_zero(b))];
        return sum;
      }
      case ValuationKind::Xos: {
        const auto& clauses = std::get<XosRep>(rep_).clauses;
        T best = clauses[0].value(s);
        for (std::size_t c = 1; c < clauses.size(); ++c) {
          T v = clauses[c].value(s);
          if (v > best) best = v;
        }
        return best;
      }
      case ValuationKind::Mph: {
        const auto& candidates = std::get<MphRep>(rep_).candidates;
        T best = candidates[0].value(s);
        for (std::size_t c = 1; c < candidates.size(); ++c) {
          T v = candidates[c].value(s);
          if (v > best) best = v;
        }
        return best;
      }
    }
    return T{};
  }

  static void require_nonneg(const std::vector<T>& values, const char* what) {
    for (std::size_t j = 0; j < values.size(); ++j)
      if (values[j] < T{})
        throw InvariantError(std::string(what) + " " + std::to_string(j) + " must be nonnegative");
  }

  int items_ = 0;
  std::variant<AdditiveRep, UnitDemandRep, SingleMindedRep, CoverageRep, XosRep, MphRep> rep_;
};

// A realized valuation profile: one valuation per buyer, owned elsewhere.
template <class T>
using Profile = std::vector<const Valuation<T>*>;

// Per-item welfare contributions of an allocation: for each buyer the
// additive representative of their bundle is queried, and item j owned by
// buyer i contributes that clause's weight at j. Unallocated items
// contribute zero; per buyer the contributions sum exactly to v_i(bundle).
template <class T>
std::vector<T> sw_contributions(const Profile<T>& profile, const std::vector<ItemSet>& bundles) {
  if (profile.size() != bundles.size())
    throw InvariantError("allocation has " + std::to_string(bundles.size()) + " bundles for " +
                         std::to_string(profile.size()) + " buyers");
  int m = profile.empty() ? 0 : profile.front()->item_count();
  ItemSet seen;
  std::vector<T> sw(static_cast<std::size_t>(m), T{});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (bundles[i].intersects(seen))
      throw InvariantError("allocation bundles are not disjoint at buyer " + std::to_string(i));
    seen = seen | bundles[i];
    if (bundles[i].empty()) continue;
    AdditiveClause<T> clause = profile[i]->xos_clause(bundles[i]);
    for (int j : bundles[i]) sw[static_cast<std::size_t>(j)] = clause.at(j);
  }
  return sw;
}

}  // namespace agora
