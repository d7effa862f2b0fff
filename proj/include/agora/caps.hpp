#pragma once

// Default enumeration limits. Every exhaustive routine takes its cap as a
// parameter; these are the values used when the caller does not override.
namespace agora::caps {

inline constexpr int demand_exhaustive_items = 20;
inline constexpr long long allocation_assignments = 10'000'000;
inline constexpr long long prior_support = 1'000'000;
inline constexpr int order_enumeration_buyers = 8;
inline constexpr int adaptive_buyers = 5;
inline constexpr int adaptive_atoms_per_buyer = 4;
inline constexpr int adversarial_tie_items = 8;
inline constexpr int eager_validation_items = 12;

}  // namespace agora::caps
