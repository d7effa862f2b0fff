#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "agora/caps.hpp"
#include "agora/errors.hpp"
#include "agora/rng.hpp"
#include "agora/valuation.hpp"

namespace agora {

// Finite-support marginal distribution of one buyer's valuation.
template <class T>
struct BuyerPrior {
  struct Atom {
    Valuation<T> valuation;
    T probability{};
    bool operator==(const Atom&) const = default;
  };

  std::vector<Atom> atoms;

  bool operator==(const BuyerPrior&) const = default;
};

// Product distribution over valuation profiles.
template <class T>
struct Prior {
  int items = 0;
  std::vector<BuyerPrior<T>> buyers;

  int buyer_count() const { return static_cast<int>(buyers.size()); }

  // Number of support points, clamped to avoid overflow.
  long long support_size() const {
    long long total = 1;
    for (const auto& b : buyers) {
      total *= static_cast<long long>(b.atoms.size());
      if (total > (1LL << 62) / 4) return 1LL << 62;
    }
    return total;
  }

  void validate() const {
    if (buyers.empty()) throw InvariantError("prior needs at least one buyer");
    if (items < 1 || items > ItemSet::max_items)
      throw InvariantError("item count out of range: " + std::to_string(items));
    for (std::size_t i = 0; i < buyers.size(); ++i) {
      const auto& b = buyers[i];
      if (b.atoms.empty())
        throw InvariantError("buyer " + std::to_string(i) + ": needs at least one atom");
      T sum{};
      for (std::size_t a = 0; a < b.atoms.size(); ++a) {
        const auto& atom = b.atoms[a];
        if (atom.probability < T{})
          throw InvariantError("buyer " + std::to_string(i) + ", atom " + std::to_string(a) +
                               ": negative probability");
        sum += atom.probability;
        if (atom.valuation.item_count() != items)
          throw InvariantError("buyer " + std::to_string(i) + ", atom " + std::to_string(a) +
                               ": valuation is over " + std::to_string(atom.valuation.item_count()) +
                               " items, expected " + std::to_string(items));
      }
      bool ok;
      if constexpr (is_exact_v<T>) {
        ok = sum == T(1);
      } else {
        ok = std::abs(sum - 1.0) <= 1e-12;
      }
      if (!ok)
        throw InvariantError("buyer " + std::to_string(i) + ": atom probabilities sum to " +
                             format_number(sum) + ", expected 1");
    }
  }

  bool operator==(const Prior&) const = default;
};

// One realization of the product distribution. The profile points into the
// prior's atoms, so it must not outlive the prior.
template <class T>
struct ProfileDraw {
  Profile<T> profile;
  std::vector<std::size_t> atom_indices;
  T probability{};
};

// Independent draw per buyer; reproducible for a fixed generator state.
// Buyer i consumes exactly one generator step.
template <class T>
ProfileDraw<T> sample_profile(const Prior<T>& prior, Rng& rng) {
  ProfileDraw<T> draw;
  draw.profile.reserve(prior.buyers.size());
  draw.atom_indices.reserve(prior.buyers.size());
  draw.probability = T(1);
  for (const auto& buyer : prior.buyers) {
    T u = uniform_unit_as<T>(rng);
    T cdf{};
    std::size_t pick = buyer.atoms.size() - 1;
    for (std::size_t a = 0; a < buyer.atoms.size(); ++a) {
      cdf += buyer.atoms[a].probability;
      if (u < cdf) {
        pick = a;
        break;
      }
    }
    draw.profile.push_back(&buyer.atoms[pick].valuation);
    draw.atom_indices.push_back(pick);
    draw.probability *= buyer.atoms[pick].probability;
  }
  return draw;
}

// Every support point with its exact product probability; probabilities sum
// to one. Fails when the support is larger than the cap, in which case
// sampling is the way to go.
template <class T>
std::vector<ProfileDraw<T>> enumerate_support(const Prior<T>& prior,
                                              long long cap = caps::prior_support) {
  long long size = prior.support_size();
  if (size > cap)
    throw CapacityError("prior support has " + std::to_string(size) + " profiles, above the cap of " +
                        std::to_string(cap) + "; use Monte-Carlo sampling instead");
  std::vector<ProfileDraw<T>> out;
  out.reserve(static_cast<std::size_t>(size));
  std::size_t n = prior.buyers.size();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    ProfileDraw<T> draw;
    draw.profile.reserve(n);
    draw.atom_indices = idx;
    draw.probability = T(1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& atom = prior.buyers[i].atoms[idx[i]];
      draw.profile.push_back(&atom.valuation);
      draw.probability *= atom.probability;
    }
    out.push_back(std::move(draw));
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < prior.buyers[pos].atoms.size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

// Largest grand-bundle value across the support.
template <class T>
T max_grand_bundle_value(const Prior<T>& prior) {
  T best{};
  ItemSet all = ItemSet::all(prior.items);
  for (const auto& buyer : prior.buyers)
    for (const auto& atom : buyer.atoms) {
      T v = atom.valuation.value(all);
      if (v > best) best = v;
    }
  return best;
}

// Divides every valuation by max_i v_i(M), returning the scaled prior and
// the factor used. A prior of all-zero valuations is returned unchanged.
template <class T>
std::pair<Prior<T>, T> normalize_prior(const Prior<T>& prior) {
  T scale = max_grand_bundle_value(prior);
  if (scale == T{} || scale == T(1)) return {prior, T(1)};
  Prior<T> out = prior;
  for (auto& buyer : out.buyers)
    for (auto& atom : buyer.atoms) atom.valuation = atom.valuation.scaled_down(scale);
  return {out, scale};
}

}  // namespace agora
