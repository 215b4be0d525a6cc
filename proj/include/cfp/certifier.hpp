#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cfp/certificate.hpp"
#include "cfp/error.hpp"
#include "cfp/finite_set.hpp"
#include "cfp/graph.hpp"
#include "cfp/metric.hpp"
#include "cfp/operators.hpp"
#include "cfp/sampling.hpp"
#include "cfp/solver.hpp"

namespace cfp {

enum class Direction { ascending, descending };

/// Checks property (*) of (X, d, G) on one convergent sequence.
///
/// ascending:  (x_n, x_{n+1}) in E for all n  =>  (x_n, limit) in E
/// descending: (x_{n+1}, x_n) in E for all n  =>  (limit, x_n) in E
///
/// If the consecutive-edge premise fails the certificate is marked
/// inapplicable and carries the offending index as a witness.
inline Certificate check_property_star(const Digraph& graph, std::span<const Point> sequence, const Point& limit,
                                       Direction direction) {
  if (sequence.empty()) throw Error(ErrorCode::invalid_input, "property (*) needs a nonempty sequence");
  Certificate cert;
  cert.property = Property::property_star;
  cert.detail = direction == Direction::ascending ? "ascending clause" : "descending clause";
  const bool up = direction == Direction::ascending;
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    const bool premise = up ? graph.has_edge(sequence[i], sequence[i + 1]) : graph.has_edge(sequence[i + 1], sequence[i]);
    if (!premise) {
      cert.inapplicable = true;
      cert.record({i, {sequence[i], sequence[i + 1]}, 0.0, 1.0, "premise-violated: consecutive terms are not an edge"},
                  16);
      return cert;
    }
  }
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const bool ok = up ? graph.has_edge(sequence[i], limit) : graph.has_edge(limit, sequence[i]);
    ++cert.samples_tested;
    if (!ok) cert.record({i, {sequence[i], limit}, 0.0, 1.0, "term is not joined to the limit"}, 16);
  }
  return cert;
}

/// Strongest convergence result whose sampled hypotheses all passed.
enum class Applicable {
  single_continuous,
  single_property_star,
  multi_continuous,
  multi_property_star,
  none,
};

inline const char* to_string(Applicable a) {
  switch (a) {
    case Applicable::single_continuous: return "single_continuous";
    case Applicable::single_property_star: return "single_property_star";
    case Applicable::multi_continuous: return "multi_continuous";
    case Applicable::multi_property_star: return "multi_property_star";
    case Applicable::none: return "none";
  }
  return "none";
}

/// Everything preflight needs to know about a problem.
struct ProblemInstance {
  std::string id{"instance"};
  MetricSpace space = MetricSpace::euclidean(1);
  Digraph graph = Digraph::order();
  std::variant<CoupledMap, CoupledMultiMap> map{};
  /// User assertion; finite sampling cannot establish continuity.
  bool continuous = true;
  double k = 0.5;
  Point x0{};
  Point y0{};
  std::optional<Point> x1{};
  std::optional<Point> y1{};
  /// tol/max_iter for the trial trace used by the property (*) check.
  SolveConfig solve{};

  bool is_multi() const { return std::holds_alternative<CoupledMultiMap>(map); }
};

struct HypothesisReport {
  std::string instance_id{};
  std::vector<Certificate> certificates{};
  Applicable applicable = Applicable::none;
  std::vector<std::string> notes{};
  std::uint64_t rng_seed = 0;

  bool passed() const { return applicable != Applicable::none; }

  const Certificate* find(Property p) const {
    for (const auto& c : certificates) {
      if (c.property == p) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline constexpr std::size_t kContinuitySequences = 16;
inline constexpr std::size_t kContinuityDepth = 30;
inline constexpr double kContinuityTol = 1e-8;
inline constexpr std::size_t kTrialIterations = 200;

/// Evaluates F along p_j = p + 2^-j * delta for a handful of random base
/// points and compares the last term against F at the limit.
template <class Eval, class Gap>
Certificate continuity_spot_check(const ProblemInstance& inst, const SampleSpec& spec, Eval&& eval, Gap&& gap) {
  Certificate cert;
  cert.property = Property::continuity;
  cert.rng_seed = spec.rng_seed;
  cert.detail = "user-asserted; spot-checked along convergent sequences";
  SampleSpec local = spec;
  local.rng_seed = spec.rng_seed ^ 0x9e3779b97f4a7c15ULL;
  Sampler sampler(local, inst.space.dimension());
  for (std::size_t s = 0; s < kContinuitySequences; ++s) {
    const Point p = sampler.draw();
    const Point q = sampler.draw();
    Point dp(p.size());
    Point dq(q.size());
    for (auto& v : dp) v = sampler.uniform(-1.0, 1.0);
    for (auto& v : dq) v = sampler.uniform(-1.0, 1.0);
    const double scale = std::ldexp(1.0, -static_cast<int>(kContinuityDepth));
    Point pj = p;
    Point qj = q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      pj[i] += scale * dp[i];
      qj[i] += scale * dq[i];
    }
    const double g = gap(eval(pj, qj), eval(p, q));
    ++cert.samples_tested;
    if (!(g <= kContinuityTol)) cert.record({s, {p, q, pj, qj}, g, kContinuityTol, {}}, spec.max_witnesses);
  }
  return cert;
}

inline Certificate failed_certificate(Property p, const std::string& why) {
  Certificate cert;
  cert.property = p;
  cert.passed = false;
  cert.violation_count = 1;
  cert.violations.push_back({0, {}, 0.0, 0.0, why});
  cert.detail = why;
  return cert;
}

template <class Fn>
Certificate guarded(Property p, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return failed_certificate(p, std::string("check aborted: ") + e.what());
  }
}

inline Certificate property_star_on_trace(const Digraph& graph, const IterationTrace& trace) {
  std::vector<Point> xs;
  std::vector<Point> ys;
  for (const auto& row : trace.steps) {
    xs.push_back(row.x);
    ys.push_back(row.y);
  }
  auto cx = check_property_star(graph, xs, xs.back(), Direction::ascending);
  auto cy = check_property_star(graph, ys, ys.back(), Direction::descending);
  Certificate cert;
  cert.property = Property::property_star;
  cert.samples_tested = cx.samples_tested + cy.samples_tested;
  cert.inapplicable = cx.inapplicable || cy.inapplicable;
  cert.passed = cx.passed && cy.passed;
  cert.violation_count = cx.violation_count + cy.violation_count;
  for (auto& w : cx.violations) {
    w.note = "x iterates, " + w.note;
    cert.violations.push_back(std::move(w));
  }
  for (auto& w : cy.violations) {
    w.note = "y iterates, " + w.note;
    cert.violations.push_back(std::move(w));
  }
  cert.detail = "trial trace: x iterates ascending, y iterates descending";
  return cert;
}

}  // namespace detail

/// Runs every sampled hypothesis check for an instance and decides which
/// convergence result applies. Check failures (including checks that throw)
/// are recorded in the report; this function does not throw for them.
inline HypothesisReport preflight(const ProblemInstance& inst, const SampleSpec& spec) {
  HypothesisReport report;
  report.instance_id = inst.id;
  report.rng_seed = spec.rng_seed;
  const auto dim = inst.space.dimension();
  const bool multi = inst.is_multi();

  if (!multi) {
    const auto& map = std::get<CoupledMap>(inst.map);
    report.certificates.push_back(detail::guarded(
        Property::mixed_monotone, [&] { return check_mixed_monotone(map, inst.graph, spec, dim); }));
    report.certificates.push_back(detail::guarded(Property::bl, [&] {
      auto cert = check_bl(map, inst.space, inst.graph, inst.k, spec);
      cert.estimated_constant = estimate_k(map, inst.space, inst.graph, spec);
      return cert;
    }));
    report.certificates.push_back(detail::guarded(Property::seed_edge, [&] {
      Certificate cert;
      cert.property = Property::seed_edge;
      cert.samples_tested = 1;
      const PairPoint image{map(inst.x0, inst.y0), map(inst.y0, inst.x0)};
      if (!product_edge(inst.graph, {inst.x0, inst.y0}, image)) {
        cert.record({0, {inst.x0, inst.y0, image.first, image.second}, 0.0, 1.0,
                     "((x0,y0),(F(x0,y0),F(y0,x0))) is not a product edge"},
                    spec.max_witnesses);
      }
      return cert;
    }));
  } else {
    const auto& map = std::get<CoupledMultiMap>(inst.map);
    report.certificates.push_back(detail::guarded(
        Property::mixed_monotone_multi, [&] { return check_mixed_monotone_multi(map, inst.graph, spec, dim); }));
    report.certificates.push_back(detail::guarded(Property::mbl, [&] {
      auto cert = check_mbl(map, inst.space, inst.graph, inst.k, spec);
      cert.estimated_constant = estimate_k_multi(map, inst.space, inst.graph, spec);
      return cert;
    }));
    report.certificates.push_back(detail::guarded(Property::seed_edge, [&] {
      Certificate cert;
      cert.property = Property::seed_edge;
      cert.samples_tested = 1;
      if (!inst.x1 || !inst.y1) {
        cert.record({0, {inst.x0, inst.y0}, 0.0, 1.0, "multivalued seed needs x1 and y1"}, spec.max_witnesses);
        return cert;
      }
      const double gx = dist_to_set(inst.space, *inst.x1, map(inst.x0, inst.y0));
      const double gy = dist_to_set(inst.space, *inst.y1, map(inst.y0, inst.x0));
      if (gx > kCheckSlack || gy > kCheckSlack) {
        cert.record({0, {inst.x0, inst.y0, *inst.x1, *inst.y1}, std::max(gx, gy), kCheckSlack,
                     "x1 or y1 is not in the image of the seed"},
                    spec.max_witnesses);
      } else if (!product_edge(inst.graph, {inst.x0, inst.y0}, {*inst.x1, *inst.y1})) {
        cert.record({0, {inst.x0, inst.y0, *inst.x1, *inst.y1}, 0.0, 1.0, "((x0,y0),(x1,y1)) is not a product edge"},
                    spec.max_witnesses);
      }
      return cert;
    }));
  }

  if (inst.continuous) {
    report.notes.push_back("continuity of F is asserted by the user; sampling can only spot-check it");
    report.certificates.push_back(detail::guarded(Property::continuity, [&] {
      const MetricSpace& space = inst.space;
      if (!multi) {
        const auto& map = std::get<CoupledMap>(inst.map);
        return detail::continuity_spot_check(
            inst, spec, [&](const Point& x, const Point& y) { return map(x, y); },
            [&](const Point& a, const Point& b) { return space.distance(a, b); });
      }
      const auto& map = std::get<CoupledMultiMap>(inst.map);
      return detail::continuity_spot_check(
          inst, spec, [&](const Point& x, const Point& y) { return map(x, y); },
          [&](const FiniteSet& a, const FiniteSet& b) { return hausdorff(space, a, b); });
    }));
  } else {
    report.notes.push_back("property (*) is checked only on the trial trace; a pass means not falsified");
    report.certificates.push_back(detail::guarded(Property::property_star, [&] {
      SolveConfig trial = inst.solve;
      trial.k = inst.k;
      trial.max_iter = std::min(trial.max_iter, detail::kTrialIterations);
      trial.check_bounds = false;
      trial.record_edges = false;
      const auto result = multi ? solve_coupled_multi(std::get<CoupledMultiMap>(inst.map), inst.space, inst.graph,
                                                      inst.x0, inst.y0, inst.x1.value_or(Point{}),
                                                      inst.y1.value_or(Point{}), trial)
                                : solve_coupled(std::get<CoupledMap>(inst.map), inst.space, inst.graph, inst.x0,
                                                inst.y0, trial);
      return detail::property_star_on_trace(inst.graph, result.trace);
    }));
  }

  auto ok = [&](Property p) {
    const auto* c = report.find(p);
    return c != nullptr && c->passed;
  };
  const bool core = multi ? ok(Property::mixed_monotone_multi) && ok(Property::mbl) && ok(Property::seed_edge)
                          : ok(Property::mixed_monotone) && ok(Property::bl) && ok(Property::seed_edge);
  if (core && inst.continuous && ok(Property::continuity)) {
    report.applicable = multi ? Applicable::multi_continuous : Applicable::single_continuous;
  } else if (core && !inst.continuous && ok(Property::property_star)) {
    report.applicable = multi ? Applicable::multi_property_star : Applicable::single_property_star;
  }
  for (auto& c : report.certificates) {
    c.rng_seed = spec.rng_seed;
    if (c.inapplicable) {
      report.notes.push_back(std::string(to_string(c.property)) + ": premise did not hold, conclusion not tested");
    } else if (!c.passed) {
      report.notes.push_back(std::string(to_string(c.property)) + ": falsified (" +
                             std::to_string(c.violation_count) + " violations)");
    }
  }
  return report;
}

}  // namespace cfp
