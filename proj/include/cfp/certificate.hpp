#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfp/metric.hpp"

namespace cfp {

enum class Property {
  bl,
  mbl,
  mixed_monotone,
  mixed_monotone_multi,
  property_star,
  seed_edge,
  continuity,
  diagonal_decay,
};

inline const char* to_string(Property p) {
  switch (p) {
    case Property::bl: return "BL";
    case Property::mbl: return "MBL";
    case Property::mixed_monotone: return "mixed_monotone";
    case Property::mixed_monotone_multi: return "mixed_monotone_multi";
    case Property::property_star: return "property_star";
    case Property::seed_edge: return "seed_edge";
    case Property::continuity: return "continuity";
    case Property::diagonal_decay: return "diagonal_decay";
  }
  return "unknown";
}

/// A concrete input on which a checked inequality or edge condition failed.
/// `lhs` and `rhs` are the two sides of the failed comparison (edge checks
/// use 0/1 flags).
struct Witness {
  std::size_t sample_index = 0;
  std::vector<Point> points{};
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note{};
};

/// Outcome of a sampled hypothesis check. A check is a falsifier: `passed`
/// means "not falsified on these samples", never "proved".
struct Certificate {
  Property property = Property::bl;
  std::size_t samples_tested = 0;
  bool passed = true;
  /// Set when the check's premise did not hold, so the conclusion was not
  /// tested. An inapplicable certificate is never `passed`.
  bool inapplicable = false;
  std::optional<double> estimated_constant{};
  std::optional<double> declared_k{};
  std::optional<std::uint64_t> rng_seed{};
  std::size_t violation_count = 0;
  std::vector<Witness> violations{};
  std::string detail{};

  void record(Witness w, std::size_t max_witnesses) {
    ++violation_count;
    passed = false;
    if (violations.size() < std::max<std::size_t>(max_witnesses, 1)) violations.push_back(std::move(w));
  }
};

}  // namespace cfp
