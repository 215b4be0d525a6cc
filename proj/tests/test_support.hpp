#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <vector>

#include "cfp/metric.hpp"

namespace cfp::test {

/// Plain generator for property-style loops.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Point point(std::size_t dim, double lo = -10.0, double hi = 10.0) {
    Point p(dim);
    for (auto& v : p) v = real(lo, hi);
    return p;
  }

  std::vector<Point> points(std::size_t n, std::size_t dim) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(point(dim));
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

inline double euclid(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Brute-force Pompeiu-Hausdorff distance on raw point lists, written
/// independently of the library's FiniteSet machinery.
inline double brute_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b,
                              double (*d)(const Point&, const Point&)) {
  double h = 0.0;
  for (const auto& p : a) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& q : b) m = std::min(m, d(p, q));
    h = std::max(h, m);
  }
  for (const auto& q : b) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : a) m = std::min(m, d(p, q));
    h = std::max(h, m);
  }
  return h;
}

/// Undirected BFS connectivity over an adjacency matrix.
inline bool bfs_connected(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> todo;
  todo.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!todo.empty()) {
    const auto v = todo.front();
    todo.pop();
    for (std::size_t w = 0; w < n; ++w) {
      if ((adj[v][w] || adj[w][v]) && !seen[w]) {
        seen[w] = true;
        ++count;
        todo.push(w);
      }
    }
  }
  return count == n;
}

}  // namespace cfp::test
