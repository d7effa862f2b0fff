#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "agora/errors.hpp"
#include "agora/itemset.hpp"
#include "agora/numeric.hpp"

namespace agora {

// Anonymous per-item prices.
template <class T>
struct PriceVector {
  std::vector<T> values;

  PriceVector() = default;
  explicit PriceVector(std::vector<T> v) : values(std::move(v)) {}
  explicit PriceVector(int m) : values(static_cast<std::size_t>(m), T{}) {}

  int size() const { return static_cast<int>(values.size()); }
  const T& at(int j) const { return values[static_cast<std::size_t>(j)]; }
  T& at(int j) { return values[static_cast<std::size_t>(j)]; }

  T total(ItemSet s) const {
    T sum{};
    for (int j : s) sum += values[static_cast<std::size_t>(j)];
    return sum;
  }

  void validate() const {
    for (std::size_t j = 0; j < values.size(); ++j) {
      bool bad = values[j] < T{};
      if constexpr (!is_exact_v<T>) bad = bad || !std::isfinite(values[j]);
      if (bad)
        throw InvariantError("price of item " + std::to_string(j) + " must be a finite nonnegative number");
    }
  }

  bool operator==(const PriceVector&) const = default;
};

}  // namespace agora
