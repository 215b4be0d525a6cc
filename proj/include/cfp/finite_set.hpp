#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "cfp/error.hpp"
#include "cfp/metric.hpp"

namespace cfp {

/// Nonempty finite subset of the ground space. Bitwise-equal points collapse
/// onto their first occurrence; the remaining order is preserved because
/// selection ties are broken by position.
class FiniteSet {
 public:
  explicit FiniteSet(std::vector<Point> points) {
    for (auto& p : points) {
      if (std::find(points_.begin(), points_.end(), p) == points_.end()) points_.push_back(std::move(p));
    }
    if (points_.empty()) throw Error(ErrorCode::invalid_input, "finite set must be nonempty");
    const auto dim = points_.front().size();
    for (const auto& p : points_) {
      if (p.size() != dim) throw Error(ErrorCode::invalid_input, "finite set mixes point dimensions");
    }
  }

  FiniteSet(std::initializer_list<Point> points) : FiniteSet(std::vector<Point>(points)) {}

  static FiniteSet singleton(Point p) { return FiniteSet(std::vector<Point>{std::move(p)}); }

  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

 private:
  std::vector<Point> points_;
};

/// Position of the point of `set` closest to `a`; lowest index on ties.
inline std::size_t nearest_index(const MetricSpace& space, const Point& a, const FiniteSet& set) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double d = space.distance(a, set[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

/// d(a, B) = min over b in B of d(a, b).
inline double dist_to_set(const MetricSpace& space, const Point& a, const FiniteSet& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : set) best = std::min(best, space.distance(a, b));
  return best;
}

/// Pompeiu-Hausdorff distance: the larger of the two one-sided excesses.
inline double hausdorff(const MetricSpace& space, const FiniteSet& a, const FiniteSet& b) {
  double excess_ab = 0.0;
  for (const auto& p : a) excess_ab = std::max(excess_ab, dist_to_set(space, p, b));
  double excess_ba = 0.0;
  for (const auto& q : b) excess_ba = std::max(excess_ba, dist_to_set(space, q, a));
  return std::max(excess_ab, excess_ba);
}

/// Picks b in B with d(a,b) <= H(A,B) + eps for a given a in A.
///
/// For finite sets the infimum is attained, so the nearest point already
/// satisfies d(a,b) = d(a,B) <= H(A,B) and `eps` only has to be positive.
/// Membership of `a` in A is tested up to 1e-12.
inline Point select_near(const MetricSpace& space, const FiniteSet& a_set, const FiniteSet& b_set,
                         const Point& a, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_parameter, "eps must be positive");
  if (dist_to_set(space, a, a_set) > 1e-12) throw Error(ErrorCode::invalid_input, "selection point is not in A");
  return b_set[nearest_index(space, a, b_set)];
}

}  // namespace cfp
