#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cfp/error.hpp"

namespace cfp {

/// An element of the ground space: a real vector of the space's dimension.
using Point = std::vector<double>;

/// Immutable metric on R^n. The builtin metrics are Euclidean (which is the
/// absolute value when n = 1) and Chebyshev (max-norm); anything else can be
/// plugged in through a distance callback.
class MetricSpace {
 public:
  enum class Kind { euclidean, chebyshev, custom };
  using DistanceFn = std::function<double(const Point&, const Point&)>;

  static MetricSpace euclidean(std::size_t dimension) {
    return MetricSpace(Kind::euclidean, dimension, {});
  }

  static MetricSpace chebyshev(std::size_t dimension) {
    return MetricSpace(Kind::chebyshev, dimension, {});
  }

  /// The callback must itself satisfy the metric axioms; nothing here checks.
  static MetricSpace custom(std::size_t dimension, DistanceFn fn) {
    if (!fn) throw Error(ErrorCode::invalid_parameter, "custom metric requires a distance callback");
    return MetricSpace(Kind::custom, dimension, std::move(fn));
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }

  void require_point(const Point& p) const {
    if (p.size() != dimension_) {
      throw Error(ErrorCode::invalid_input,
                  "point has dimension " + std::to_string(p.size()) + ", space has dimension " +
                      std::to_string(dimension_));
    }
  }

  double distance(const Point& p, const Point& q) const {
    require_point(p);
    require_point(q);
    switch (kind_) {
      case Kind::euclidean: {
        if (dimension_ == 1) return std::abs(p[0] - q[0]);
        double sum = 0.0;
        for (std::size_t i = 0; i < dimension_; ++i) {
          const double diff = p[i] - q[i];
          sum += diff * diff;
        }
        return std::sqrt(sum);
      }
      case Kind::chebyshev: {
        double best = 0.0;
        for (std::size_t i = 0; i < dimension_; ++i) best = std::max(best, std::abs(p[i] - q[i]));
        return best;
      }
      case Kind::custom:
        return fn_(p, q);
    }
    return 0.0;
  }

  double operator()(const Point& p, const Point& q) const { return distance(p, q); }

 private:
  MetricSpace(Kind kind, std::size_t dimension, DistanceFn fn)
      : kind_(kind), dimension_(dimension), fn_(std::move(fn)) {
    if (dimension_ == 0) throw Error(ErrorCode::invalid_parameter, "dimension must be positive");
  }

  Kind kind_;
  std::size_t dimension_;
  DistanceFn fn_;
};

inline double distance(const MetricSpace& space, const Point& p, const Point& q) {
  return space.distance(p, q);
}

inline const char* to_string(MetricSpace::Kind kind) {
  switch (kind) {
    case MetricSpace::Kind::euclidean: return "euclidean";
    case MetricSpace::Kind::chebyshev: return "chebyshev";
    case MetricSpace::Kind::custom: return "custom";
  }
  return "unknown";
}

}  // namespace cfp
