#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfp/certificate.hpp"
#include "cfp/error.hpp"
#include "cfp/finite_set.hpp"
#include "cfp/graph.hpp"
#include "cfp/metric.hpp"
#include "cfp/operators.hpp"

namespace cfp {

/// `continuous` and `property_star` run the same recurrence; the mode only
/// records which hypothesis justifies convergence (continuity of F, or
/// property (*) of the graph).
enum class SolveMode { continuous, property_star };

inline const char* to_string(SolveMode m) { return m == SolveMode::continuous ? "continuous" : "property_star"; }

struct SolveConfig {
  double k = 0.5;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  SolveMode mode = SolveMode::continuous;
  /// Throw HypothesisViolation when a trace row exceeds its geometric bound.
  bool check_bounds = true;
  /// Throw HypothesisViolation when (x_n,x_{n+1}) or (y_{n+1},y_n) is not an edge.
  bool record_edges = false;

  void validate() const {
    if (!(k > 0.0 && k < 1.0)) throw Error(ErrorCode::invalid_parameter, "k must lie in (0,1)");
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_parameter, "tol must be positive");
    if (max_iter == 0) throw Error(ErrorCode::invalid_parameter, "max_iter must be positive");
  }

  friend bool operator==(const SolveConfig&, const SolveConfig&) = default;
};

/// Row n of a trace. The step distances look one iterate ahead:
/// step_x = d(x_n, x_{n+1}) and step_y = d(y_n, y_{n+1}).
struct TraceStep {
  std::size_t n = 0;
  Point x{};
  Point y{};
  double step_x = 0.0;
  double step_y = 0.0;
  /// Per-coordinate a priori bound (k^n / 2) * D0.
  double bound = 0.0;
  double diag = 0.0;
  bool edge_ok_x = false;
  bool edge_ok_y = false;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// The full iteration history. The last row holds the returned point; its
/// step distances are the residual evaluation and are not an iteration.
struct IterationTrace {
  std::vector<TraceStep> steps{};
  double k = 0.0;
  double D0 = 0.0;
  bool converged = false;
  double residual = 0.0;
  /// Number of map applications before the final residual evaluation.
  std::size_t iterations = 0;

  friend bool operator==(const IterationTrace&, const IterationTrace&) = default;
};

struct CoupledFixedPoint {
  Point x{};
  Point y{};
  bool is_diagonal = false;
};

struct SolveResult {
  CoupledFixedPoint point{};
  IterationTrace trace{};
};

/// (k^n / 2) * D0: bound on each of d(x_n,x_{n+1}) and d(y_n,y_{n+1}).
inline double step_bound(double k, double D0, std::size_t n) {
  if (!(k > 0.0 && k < 1.0)) throw Error(ErrorCode::invalid_parameter, "k must lie in (0,1)");
  return std::pow(k, static_cast<double>(n)) / 2.0 * D0;
}

/// Sum of step_bound over m >= n, i.e. k^n D0 / (2(1-k)): bound on d(x_n,x*)
/// and on d(y_n,y*).
inline double tail_bound(double k, double D0, std::size_t n) {
  if (!(k > 0.0 && k < 1.0)) throw Error(ErrorCode::invalid_parameter, "k must lie in (0,1)");
  return std::pow(k, static_cast<double>(n)) * D0 / (2.0 * (1.0 - k));
}

namespace detail {

inline bool edge_or_false(const Digraph& graph, const Point& p, const Point& q) {
  try {
    return graph.has_edge(p, q);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_a_vertex) return false;
    throw;
  }
}

/// Shared driver for both solvers. `advance(n, x, y)` returns the pair
/// (x_{n+1}, y_{n+1}); `residual(x, y)` measures the fixed-point defect of the
/// returned pair. When `per_step_bound` is set, rows n >= 1 are also checked
/// against the one-step contraction k/2 * (step_x(n-1) + step_y(n-1)).
template <class Advance, class Residual>
SolveResult iterate(const MetricSpace& space, const Digraph& graph, Point x, Point y, const SolveConfig& cfg,
                    Advance&& advance, Residual&& residual, bool per_step_bound) {
  SolveResult out;
  auto& trace = out.trace;
  trace.k = cfg.k;
  const double stop_factor = cfg.k / (1.0 - cfg.k);

  auto make_row = [&](std::size_t n, const Point& xn, const Point& yn, const Point& xnext, const Point& ynext) {
    TraceStep row;
    row.n = n;
    row.x = xn;
    row.y = yn;
    row.step_x = space.distance(xn, xnext);
    row.step_y = space.distance(yn, ynext);
    if (n == 0) trace.D0 = row.step_x + row.step_y;
    row.bound = step_bound(cfg.k, trace.D0, n);
    row.diag = space.distance(xn, yn);
    row.edge_ok_x = edge_or_false(graph, xn, xnext);
    row.edge_ok_y = edge_or_false(graph, ynext, yn);
    if (cfg.record_edges && !(row.edge_ok_x && row.edge_ok_y)) {
      throw HypothesisViolation(n, "step " + std::to_string(n) + ": iterates left the graph (" +
                                       (row.edge_ok_x ? "(y_{n+1},y_n)" : "(x_n,x_{n+1})") + " is not an edge)");
    }
    if (cfg.check_bounds) {
      const double sum = row.step_x + row.step_y;
      if (sum > 2.0 * row.bound + kCheckSlack) {
        throw HypothesisViolation(n, "step " + std::to_string(n) + ": step_x + step_y exceeds k^n * D0");
      }
      if (per_step_bound && n > 0) {
        const auto& prev = trace.steps.back();
        const double one_step = 0.5 * cfg.k * (prev.step_x + prev.step_y);
        if (row.step_x > one_step + kCheckSlack || row.step_y > one_step + kCheckSlack) {
          throw HypothesisViolation(n, "step " + std::to_string(n) + ": selected step exceeds k/2 times the previous steps");
        }
      }
    }
    trace.steps.push_back(std::move(row));
  };

  std::size_t n = 0;
  while (n < cfg.max_iter) {
    auto [xnext, ynext] = advance(n, x, y);
    make_row(n, x, y, xnext, ynext);
    x = std::move(xnext);
    y = std::move(ynext);
    ++n;
    const auto& row = trace.steps.back();
    if (stop_factor * (row.step_x + row.step_y) <= cfg.tol) {
      trace.converged = true;
      break;
    }
  }
  trace.iterations = n;
  {
    auto [xnext, ynext] = advance(n, x, y);
    make_row(n, x, y, xnext, ynext);
  }
  trace.residual = residual(x, y);
  out.point.is_diagonal = space.distance(x, y) <= cfg.tol;
  out.point.x = std::move(x);
  out.point.y = std::move(y);
  return out;
}

}  // namespace detail

/// Coupled Picard iteration x_{n+1} = F(x_n, y_n), y_{n+1} = F(y_n, x_n).
///
/// The seed must satisfy ((x0,y0), (F(x0,y0), F(y0,x0))) in E(G). Iteration
/// stops once k/(1-k) * (step_x + step_y) <= tol, which under the contraction
/// hypothesis puts the next iterate within tol of the limit (sum metric), or
/// after cfg.max_iter steps with trace.converged == false.
template <CoupledMapLike F>
SolveResult solve_coupled(const F& map, const MetricSpace& space, const Digraph& graph, const Point& x0,
                          const Point& y0, const SolveConfig& cfg) {
  cfg.validate();
  space.require_point(x0);
  space.require_point(y0);
  const PairPoint seed{x0, y0};
  const PairPoint image{map(x0, y0), map(y0, x0)};
  if (!product_edge(graph, seed, image)) {
    throw Error(ErrorCode::seed_edge, "seed pair is not joined to its image by a product-graph edge");
  }
  auto advance = [&](std::size_t, const Point& x, const Point& y) {
    Point xn = map(x, y);
    Point yn = map(y, x);
    return std::pair{std::move(xn), std::move(yn)};
  };
  auto residual = [&](const Point& x, const Point& y) {
    return space.distance(x, map(x, y)) + space.distance(y, map(y, x));
  };
  return detail::iterate(space, graph, x0, y0, cfg, advance, residual, false);
}

/// Multivalued coupled iteration seeded with x1 in F(x0,y0), y1 in F(y0,x0).
///
/// Each later step picks x_{n+1} in F(x_n,y_n) among the points b with
/// (x_n, b) in E(G), nearest to x_n, and y_{n+1} in F(y_n,x_n) among the
/// points b with (b, y_n) in E(G), nearest to y_n; ties go to the lowest
/// index. The residual is d(x*, F(x*,y*)) + d(y*, F(y*,x*)).
template <CoupledMultiMapLike F>
SolveResult solve_coupled_multi(const F& map, const MetricSpace& space, const Digraph& graph, const Point& x0,
                                const Point& y0, const Point& x1, const Point& y1, const SolveConfig& cfg) {
  cfg.validate();
  for (const auto* p : {&x0, &y0, &x1, &y1}) space.require_point(*p);
  if (dist_to_set(space, x1, map(x0, y0)) > kCheckSlack) {
    throw Error(ErrorCode::invalid_seed, "x1 is not in F(x0,y0)");
  }
  if (dist_to_set(space, y1, map(y0, x0)) > kCheckSlack) {
    throw Error(ErrorCode::invalid_seed, "y1 is not in F(y0,x0)");
  }
  if (!product_edge(graph, PairPoint{x0, y0}, PairPoint{x1, y1})) {
    throw Error(ErrorCode::seed_edge, "seed pair is not joined to (x1,y1) by a product-graph edge");
  }

  auto pick = [&](std::size_t n, const Point& from, const FiniteSet& image, bool forward) -> Point {
    std::optional<std::size_t> best;
    double best_d = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
      const bool ok = forward ? graph.has_edge(from, image[i]) : graph.has_edge(image[i], from);
      if (!ok) continue;
      const double d = space.distance(from, image[i]);
      if (!best || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    if (!best) {
      throw Error(ErrorCode::selection_failure,
                  "step " + std::to_string(n) + ": no point of the image is joined to the current " +
                      (forward ? "x" : "y") + " iterate");
    }
    return image[*best];
  };

  auto advance = [&](std::size_t n, const Point& x, const Point& y) {
    if (n == 0) return std::pair{x1, y1};
    Point xn = pick(n, x, map(x, y), true);
    Point yn = pick(n, y, map(y, x), false);
    return std::pair{std::move(xn), std::move(yn)};
  };
  auto residual = [&](const Point& x, const Point& y) {
    return dist_to_set(space, x, map(x, y)) + dist_to_set(space, y, map(y, x));
  };
  return detail::iterate(space, graph, x0, y0, cfg, advance, residual, true);
}

/// When (x0,y0) is itself an edge, d(x_n,y_n) <= k^n d(x0,y0) and the coupled
/// fixed point is diagonal. Checks that decay on every trace row.
inline Certificate diagonal_decay_check(const IterationTrace& trace, const Digraph& graph, double k) {
  if (!(k > 0.0 && k < 1.0)) throw Error(ErrorCode::invalid_parameter, "k must lie in (0,1)");
  if (trace.steps.empty()) throw Error(ErrorCode::invalid_input, "trace has no rows");
  const auto& first = trace.steps.front();
  if (!graph.has_edge(first.x, first.y)) {
    throw Error(ErrorCode::inapplicable_check, "diagonal decay needs (x0,y0) to be an edge");
  }
  Certificate cert;
  cert.property = Property::diagonal_decay;
  cert.declared_k = k;
  for (const auto& row : trace.steps) {
    const double rhs = std::pow(k, static_cast<double>(row.n)) * first.diag;
    if (row.diag > rhs + kCheckSlack) cert.record({row.n, {row.x, row.y}, row.diag, rhs, {}}, 16);
    ++cert.samples_tested;
  }
  return cert;
}

struct ProbeOutcome {
  PairPoint seed{};
  std::optional<SolveResult> result{};
  std::optional<ErrorCode> error{};
  std::string message{};
};

struct FixedPointCluster {
  PairPoint representative{};
  std::vector<std::size_t> members{};
  /// Largest d(p,p') + d(q,q') between members.
  double diameter = 0.0;
};

struct UniquenessReport {
  std::vector<ProbeOutcome> outcomes{};
  std::vector<FixedPointCluster> clusters{};
  /// Pairs of outcomes whose fixed points are joined by a product edge yet
  /// lie farther apart than 2 * tol.
  std::vector<std::pair<std::size_t, std::size_t>> conflicts{};

  bool single_cluster() const { return clusters.size() == 1 && conflicts.empty(); }
};

/// Solves from every seed and groups the converged fixed points. Points
/// within 2 * tol (sum metric) share a cluster. Solve errors are recorded
/// per seed and do not stop the probe. Nothing here asserts global
/// uniqueness; several clusters are a finding, not an error.
template <CoupledMapLike F>
UniquenessReport uniqueness_probe(const F& map, const MetricSpace& space, const Digraph& graph,
                                  const std::vector<PairPoint>& seeds, const SolveConfig& cfg) {
  UniquenessReport report;
  std::vector<std::size_t> solved;
  for (const auto& seed : seeds) {
    ProbeOutcome outcome;
    outcome.seed = seed;
    try {
      auto result = solve_coupled(map, space, graph, seed.first, seed.second, cfg);
      if (result.trace.converged) {
        solved.push_back(report.outcomes.size());
      } else {
        outcome.message = "did not converge within max_iter";
      }
      outcome.result = std::move(result);
    } catch (const Error& e) {
      outcome.error = e.code();
      outcome.message = e.what();
    }
    report.outcomes.push_back(std::move(outcome));
  }

  auto point_of = [&](std::size_t i) -> const CoupledFixedPoint& { return report.outcomes[i].result->point; };
  auto gap = [&](std::size_t i, std::size_t j) {
    return space.distance(point_of(i).x, point_of(j).x) + space.distance(point_of(i).y, point_of(j).y);
  };

  std::vector<std::size_t> parent(solved.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  const double join = 2.0 * cfg.tol;
  for (std::size_t a = 0; a < solved.size(); ++a) {
    for (std::size_t b = a + 1; b < solved.size(); ++b) {
      const double g = gap(solved[a], solved[b]);
      if (g <= join) {
        parent[find(a)] = find(b);
        continue;
      }
      const PairPoint pa{point_of(solved[a]).x, point_of(solved[a]).y};
      const PairPoint pb{point_of(solved[b]).x, point_of(solved[b]).y};
      if (detail::edge_or_false(graph, pa.first, pb.first) && detail::edge_or_false(graph, pb.second, pa.second)) {
        report.conflicts.emplace_back(solved[a], solved[b]);
      } else if (detail::edge_or_false(graph, pb.first, pa.first) &&
                 detail::edge_or_false(graph, pa.second, pb.second)) {
        report.conflicts.emplace_back(solved[a], solved[b]);
      }
    }
  }

  std::vector<std::optional<std::size_t>> cluster_of(solved.size());
  for (std::size_t a = 0; a < solved.size(); ++a) {
    const auto root = find(a);
    if (!cluster_of[root]) {
      cluster_of[root] = report.clusters.size();
      FixedPointCluster c;
      c.representative = {point_of(solved[a]).x, point_of(solved[a]).y};
      report.clusters.push_back(std::move(c));
    }
    report.clusters[*cluster_of[root]].members.push_back(solved[a]);
  }
  for (auto& c : report.clusters) {
    for (std::size_t a = 0; a < c.members.size(); ++a) {
      for (std::size_t b = a + 1; b < c.members.size(); ++b) {
        c.diameter = std::max(c.diameter, gap(c.members[a], c.members[b]));
      }
    }
  }
  return report;
}

}  // namespace cfp
