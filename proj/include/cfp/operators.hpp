#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>

#include "cfp/certificate.hpp"
#include "cfp/error.hpp"
#include "cfp/finite_set.hpp"
#include "cfp/graph.hpp"
#include "cfp/metric.hpp"
#include "cfp/sampling.hpp"

namespace cfp {

/// Single-valued coupled operator F : X x X -> X.
template <class F>
concept CoupledMapLike = std::invocable<const F&, const Point&, const Point&> &&
                         std::convertible_to<std::invoke_result_t<const F&, const Point&, const Point&>, Point>;

/// Multivalued coupled operator F : X x X -> finite nonempty subsets of X.
template <class F>
concept CoupledMultiMapLike =
    std::invocable<const F&, const Point&, const Point&> &&
    std::convertible_to<std::invoke_result_t<const F&, const Point&, const Point&>, FiniteSet>;

using CoupledMap = std::function<Point(const Point&, const Point&)>;
using CoupledMultiMap = std::function<FiniteSet(const Point&, const Point&)>;

/// Views a single-valued map as the multivalued map (x,y) -> {F(x,y)}.
template <CoupledMapLike F>
CoupledMultiMap as_multi(F map) {
  return [map = std::move(map)](const Point& x, const Point& y) { return FiniteSet::singleton(map(x, y)); };
}

/// Absolute slack applied to every sampled inequality.
inline constexpr double kCheckSlack = 1e-12;

namespace detail {

inline void require_k(double k) {
  if (!(k > 0.0 && k < 1.0)) throw Error(ErrorCode::invalid_parameter, "k must lie in (0,1)");
}

/// Draws (x, y, u, v) until ((x,y),(u,v)) is a product edge, calling
/// fn(index, x, y, u, v) for each accepted sample. Returns the number of
/// accepted samples.
template <class Fn>
std::size_t for_each_product_edge(const Digraph& graph, Sampler& sampler, Fn&& fn) {
  std::size_t accepted = 0;
  for (std::size_t attempt = 0; accepted < sampler.count() && attempt < sampler.budget(); ++attempt) {
    PairPoint a{sampler.draw(), sampler.draw()};
    PairPoint b{sampler.draw(), sampler.draw()};
    if (!product_edge(graph, a, b)) continue;
    fn(accepted, a.first, a.second, b.first, b.second);
    ++accepted;
  }
  return accepted;
}

/// Draws monotonicity triples, alternating between the first-argument clause
/// (x1, x2, y) with (x1,x2) in E(G) and the second-argument clause
/// (y1, y2, x) with (y1,y2) in E(G). Calls fn(index, first_clause, p1, p2, other).
template <class Fn>
std::size_t for_each_monotone_triple(const Digraph& graph, Sampler& sampler, Fn&& fn) {
  std::size_t accepted = 0;
  for (std::size_t attempt = 0; accepted < sampler.count() && attempt < sampler.budget(); ++attempt) {
    Point p1 = sampler.draw();
    Point p2 = sampler.draw();
    Point other = sampler.draw();
    if (!graph.has_edge(p1, p2)) continue;
    fn(accepted, accepted % 2 == 0, p1, p2, other);
    ++accepted;
  }
  return accepted;
}

inline void require_samples(std::size_t n, const char* what) {
  if (n == 0) throw Error(ErrorCode::insufficient_samples, std::string(what) + ": sampler produced no valid samples");
}

inline Certificate make_certificate(Property property, const SampleSpec& spec) {
  Certificate cert;
  cert.property = property;
  cert.rng_seed = spec.rng_seed;
  return cert;
}

}  // namespace detail

/// Samples the mixed G-monotone property: F preserves edges in its first
/// argument and reverses them in its second,
///   (x1,x2) in E  =>  (F(x1,y), F(x2,y)) in E,
///   (y1,y2) in E  =>  (F(x,y2), F(x,y1)) in E.
template <CoupledMapLike F>
Certificate check_mixed_monotone(const F& map, const Digraph& graph, const SampleSpec& spec,
                                 std::size_t dimension = 1) {
  Sampler sampler(spec, dimension);
  auto cert = detail::make_certificate(Property::mixed_monotone, spec);
  cert.samples_tested = detail::for_each_monotone_triple(
      graph, sampler, [&](std::size_t i, bool first_clause, const Point& p1, const Point& p2, const Point& other) {
        if (first_clause) {
          if (!graph.has_edge(map(p1, other), map(p2, other))) {
            cert.record({i, {p1, p2, other}, 0.0, 1.0, "first argument: (F(x1,y),F(x2,y)) is not an edge"},
                        spec.max_witnesses);
          }
        } else if (!graph.has_edge(map(other, p2), map(other, p1))) {
          cert.record({i, {p1, p2, other}, 0.0, 1.0, "second argument: (F(x,y2),F(x,y1)) is not an edge"},
                      spec.max_witnesses);
        }
      });
  detail::require_samples(cert.samples_tested, "check_mixed_monotone");
  return cert;
}

/// Multivalued version: for every u in the first image some v in the second
/// image must be joined to it, with the same argument reversal as above.
template <CoupledMultiMapLike F>
Certificate check_mixed_monotone_multi(const F& map, const Digraph& graph, const SampleSpec& spec,
                                       std::size_t dimension = 1) {
  Sampler sampler(spec, dimension);
  auto cert = detail::make_certificate(Property::mixed_monotone_multi, spec);
  auto covered = [&](const FiniteSet& from, const FiniteSet& to) -> const Point* {
    for (const auto& u : from) {
      const bool ok = std::any_of(to.begin(), to.end(), [&](const Point& v) { return graph.has_edge(u, v); });
      if (!ok) return &u;
    }
    return nullptr;
  };
  cert.samples_tested = detail::for_each_monotone_triple(
      graph, sampler, [&](std::size_t i, bool first_clause, const Point& p1, const Point& p2, const Point& other) {
        if (first_clause) {
          const FiniteSet from = map(p1, other);
          const FiniteSet to = map(p2, other);
          if (const Point* u = covered(from, to)) {
            cert.record({i, {p1, p2, other, *u}, 0.0, 1.0, "first argument: u in F(x1,y) has no successor in F(x2,y)"},
                        spec.max_witnesses);
          }
        } else {
          const FiniteSet from = map(other, p2);
          const FiniteSet to = map(other, p1);
          if (const Point* u = covered(from, to)) {
            cert.record({i, {p1, p2, other, *u}, 0.0, 1.0, "second argument: u in F(x,y2) has no successor in F(x,y1)"},
                        spec.max_witnesses);
          }
        }
      });
  detail::require_samples(cert.samples_tested, "check_mixed_monotone_multi");
  return cert;
}

/// Samples the graph-restricted contraction
///   d(F(x,y), F(u,v)) <= k/2 [d(x,u) + d(y,v)]   for ((x,y),(u,v)) in E.
template <CoupledMapLike F>
Certificate check_bl(const F& map, const MetricSpace& space, const Digraph& graph, double k, const SampleSpec& spec) {
  detail::require_k(k);
  Sampler sampler(spec, space.dimension());
  auto cert = detail::make_certificate(Property::bl, spec);
  cert.declared_k = k;
  cert.samples_tested = detail::for_each_product_edge(
      graph, sampler, [&](std::size_t i, const Point& x, const Point& y, const Point& u, const Point& v) {
        const double lhs = space.distance(map(x, y), map(u, v));
        const double rhs = 0.5 * k * (space.distance(x, u) + space.distance(y, v));
        if (lhs > rhs + kCheckSlack) cert.record({i, {x, y, u, v}, lhs, rhs, {}}, spec.max_witnesses);
      });
  detail::require_samples(cert.samples_tested, "check_BL");
  return cert;
}

/// Empirical supremum of 2 d(F(x,y),F(u,v)) / [d(x,u)+d(y,v)] over sampled
/// product edges with a positive denominator. This is a lower bound on the
/// smallest k for which the contraction holds.
template <CoupledMapLike F>
double estimate_k(const F& map, const MetricSpace& space, const Digraph& graph, const SampleSpec& spec) {
  Sampler sampler(spec, space.dimension());
  double best = 0.0;
  std::size_t usable = 0;
  detail::for_each_product_edge(graph, sampler,
                                [&](std::size_t, const Point& x, const Point& y, const Point& u, const Point& v) {
                                  const double denom = space.distance(x, u) + space.distance(y, v);
                                  if (!(denom > 0.0)) return;
                                  ++usable;
                                  best = std::max(best, 2.0 * space.distance(map(x, y), map(u, v)) / denom);
                                });
  detail::require_samples(usable, "estimate_k");
  return best;
}

/// Samples the multivalued contraction: every a in F(x,y) has some b in
/// F(u,v) within k/2 [d(x,u)+d(y,v)]. The existential is realized by the
/// nearest point, i.e. d(a, F(u,v)).
template <CoupledMultiMapLike F>
Certificate check_mbl(const F& map, const MetricSpace& space, const Digraph& graph, double k,
                      const SampleSpec& spec) {
  detail::require_k(k);
  Sampler sampler(spec, space.dimension());
  auto cert = detail::make_certificate(Property::mbl, spec);
  cert.declared_k = k;
  cert.samples_tested = detail::for_each_product_edge(
      graph, sampler, [&](std::size_t i, const Point& x, const Point& y, const Point& u, const Point& v) {
        const FiniteSet image = map(x, y);
        const FiniteSet target = map(u, v);
        const double rhs = 0.5 * k * (space.distance(x, u) + space.distance(y, v));
        for (const auto& a : image) {
          const double lhs = dist_to_set(space, a, target);
          if (lhs > rhs + kCheckSlack) {
            cert.record({i, {x, y, u, v, a}, lhs, rhs, {}}, spec.max_witnesses);
            break;
          }
        }
      });
  detail::require_samples(cert.samples_tested, "check_MBL");
  return cert;
}

/// Multivalued counterpart of estimate_k: supremum of 2 d(a, F(u,v)) / [d(x,u)+d(y,v)].
template <CoupledMultiMapLike F>
double estimate_k_multi(const F& map, const MetricSpace& space, const Digraph& graph, const SampleSpec& spec) {
  Sampler sampler(spec, space.dimension());
  double best = 0.0;
  std::size_t usable = 0;
  detail::for_each_product_edge(graph, sampler,
                                [&](std::size_t, const Point& x, const Point& y, const Point& u, const Point& v) {
                                  const double denom = space.distance(x, u) + space.distance(y, v);
                                  if (!(denom > 0.0)) return;
                                  ++usable;
                                  const FiniteSet target = map(u, v);
                                  for (const auto& a : map(x, y)) {
                                    best = std::max(best, 2.0 * dist_to_set(space, a, target) / denom);
                                  }
                                });
  detail::require_samples(usable, "estimate_k_multi");
  return best;
}

}  // namespace cfp
