#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfp/certifier.hpp"
#include "cfp/error.hpp"
#include "cfp/expression.hpp"
#include "cfp/finite_set.hpp"
#include "cfp/graph.hpp"
#include "cfp/metric.hpp"
#include "cfp/operators.hpp"
#include "cfp/sampling.hpp"
#include "cfp/solver.hpp"

namespace cfp {

struct SpaceSpec {
  std::string kind = "euclidean";  // euclidean | chebyshev
  std::size_t dimension = 1;
  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

struct GraphSpec {
  std::string kind = "order";  // order | full | edge_list
  std::vector<Point> vertices{};
  std::vector<std::pair<Point, Point>> edges{};
  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

/// Either a builtin family with numeric parameters or explicit expressions.
/// `image` holds one entry for a single-valued map and one entry per set
/// member for a multivalued map; each entry lists one expression per
/// component, or a single expression applied componentwise.
struct MapSpec {
  enum class Kind { single, multi };
  Kind kind = Kind::single;
  std::string builtin{};
  std::map<std::string, double> params{};
  std::vector<std::vector<std::string>> image{};
  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

/// Validated problem description as read from a JSON document.
struct ProblemSpec {
  std::string id = "problem";
  std::string description{};
  SpaceSpec space{};
  GraphSpec graph{};
  MapSpec map{};
  bool continuous = true;
  /// Unset means "estimate from samples" (written as "k": "auto").
  std::optional<double> k{};
  Point x0{};
  Point y0{};
  std::optional<Point> x1{};
  std::optional<Point> y1{};
  SolveConfig solve{};
  SampleSpec sampler{};
  /// Whether the document fixed the RNG seed (otherwise the run falls back
  /// to the environment).
  bool sampler_seed_given = false;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void semantic(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::semantic_error, field + ": " + what);
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Point read_point(const json& j, std::size_t dim, const std::string& field) {
  Point p;
  if (j.is_number()) {
    p.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) semantic(field, "point coordinates must be numbers");
      p.push_back(v.get<double>());
    }
  } else {
    semantic(field, "expected a number or an array of numbers");
  }
  if (p.size() != dim) semantic(field, "point must have " + std::to_string(dim) + " coordinates");
  return p;
}

inline const json& require(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) semantic(field, std::string("missing field '") + key + "'");
  return obj.at(key);
}

template <class T>
T read_as(const json& j, const std::string& field, const char* type_name) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    semantic(field, std::string("expected ") + type_name);
  }
}

inline std::vector<std::string> read_components(const json& j, std::size_t dim, const std::string& field) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) semantic(field, "expected an expression string or an array of component expressions");
  std::vector<std::string> out;
  for (const auto& c : j) {
    if (!c.is_string()) semantic(field, "component expressions must be strings");
    out.push_back(c.get<std::string>());
  }
  if (out.size() != dim) semantic(field, "expected " + std::to_string(dim) + " component expressions");
  return out;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Expression strings of a builtin map family.
inline std::vector<std::vector<std::string>> builtin_image(const MapSpec& m) {
  auto param = [&](const char* name) {
    const auto it = m.params.find(name);
    if (it == m.params.end()) semantic("map.params", std::string("builtin '") + m.builtin + "' needs parameter '" + name + "'");
    return "(" + format_double(it->second) + ")";
  };
  if (m.builtin == "linear") {
    return {{param("a") + "*x + " + param("b") + "*y"}};
  }
  if (m.builtin == "constant") return {{param("c")}};
  if (m.builtin == "plus_minus_linear") {
    if (m.kind != MapSpec::Kind::multi) semantic("map.builtin", "'plus_minus_linear' is multivalued");
    const std::string e = param("a") + "*x + " + param("b") + "*y";
    return {{"-(" + e + ")"}, {e}};
  }
  semantic("map.builtin", "unknown builtin '" + m.builtin + "'");
}

inline std::vector<std::vector<Expression>> compile_image(const ProblemSpec& spec) {
  const auto& m = spec.map;
  const auto sources = m.builtin.empty() ? m.image : builtin_image(m);
  if (sources.empty()) semantic("map", "map has no image expressions");
  if (m.kind == MapSpec::Kind::single && sources.size() != 1) semantic("map", "single-valued map needs one image");
  std::vector<std::vector<Expression>> out;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string field = !m.builtin.empty()                ? std::string("map.builtin")
                              : m.kind == MapSpec::Kind::single ? std::string("map.expr")
                                                                : "map.exprs[" + std::to_string(i) + "]";
    std::vector<Expression> comps;
    for (const auto& src : sources[i]) {
      try {
        comps.push_back(Expression::parse(src));
      } catch (const ParseError& e) {
        semantic(field, "expression '" + src + "': " + e.what());
      }
      if (comps.back().max_index() > spec.space.dimension) {
        semantic(field, "expression '" + src + "' refers to a component beyond dimension " +
                            std::to_string(spec.space.dimension));
      }
    }
    out.push_back(std::move(comps));
  }
  return out;
}

inline Point eval_image(const std::vector<Expression>& comps, const Point& x, const Point& y) {
  Point out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = comps[comps.size() == 1 ? 0 : i].evaluate(x, y, i);
  return out;
}

inline json point_json(const Point& p) { return json(p); }

}  // namespace detail

/// Parses and validates a JSON problem document. Syntax errors carry the
/// line and column; semantic errors name the offending field.
inline ProblemSpec parse_spec(std::string_view text) {
  using detail::json;
  using detail::semantic;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(line, col, msg);
  }
  if (!doc.is_object()) semantic("document", "top level must be an object");

  ProblemSpec spec;
  if (doc.contains("id")) spec.id = detail::read_as<std::string>(doc["id"], "id", "a string");
  if (doc.contains("description")) spec.description = detail::read_as<std::string>(doc["description"], "description", "a string");

  const auto& space = detail::require(doc, "space", "space");
  spec.space.kind = detail::read_as<std::string>(detail::require(space, "kind", "space"), "space.kind", "a string");
  if (spec.space.kind != "euclidean" && spec.space.kind != "chebyshev") {
    semantic("space.kind", "unknown space '" + spec.space.kind + "' (expected euclidean or chebyshev)");
  }
  if (space.contains("dimension")) {
    const auto& d = space["dimension"];
    if (!d.is_number_integer() || d.get<long long>() <= 0) semantic("space.dimension", "must be a positive integer");
    spec.space.dimension = d.get<std::size_t>();
  }
  const std::size_t dim = spec.space.dimension;

  const auto& graph = detail::require(doc, "graph", "graph");
  spec.graph.kind = detail::read_as<std::string>(detail::require(graph, "kind", "graph"), "graph.kind", "a string");
  if (spec.graph.kind == "edge_list") {
    const auto& vs = detail::require(graph, "vertices", "graph");
    if (!vs.is_array() || vs.empty()) semantic("graph.vertices", "expected a nonempty array of points");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      spec.graph.vertices.push_back(detail::read_point(vs[i], dim, "graph.vertices[" + std::to_string(i) + "]"));
    }
    if (graph.contains("edges")) {
      const auto& es = graph["edges"];
      if (!es.is_array()) semantic("graph.edges", "expected an array of [from, to] pairs");
      for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string field = "graph.edges[" + std::to_string(i) + "]";
        if (!es[i].is_array() || es[i].size() != 2) semantic(field, "expected a [from, to] pair");
        spec.graph.edges.emplace_back(detail::read_point(es[i][0], dim, field), detail::read_point(es[i][1], dim, field));
      }
    }
    try {
      (void)Digraph::from_edges(spec.graph.vertices, spec.graph.edges);
    } catch (const Error& e) {
      semantic("graph.edges", e.what());
    }
  } else if (spec.graph.kind != "order" && spec.graph.kind != "full") {
    semantic("graph.kind", "unknown graph '" + spec.graph.kind + "' (expected order, full or edge_list)");
  }

  const auto& map = detail::require(doc, "map", "map");
  const auto kind = detail::read_as<std::string>(detail::require(map, "kind", "map"), "map.kind", "a string");
  if (kind == "single") {
    spec.map.kind = MapSpec::Kind::single;
  } else if (kind == "multi") {
    spec.map.kind = MapSpec::Kind::multi;
  } else {
    semantic("map.kind", "expected single or multi");
  }
  if (map.contains("builtin")) {
    spec.map.builtin = detail::read_as<std::string>(map["builtin"], "map.builtin", "a string");
    if (map.contains("params")) {
      if (!map["params"].is_object()) semantic("map.params", "expected an object of numbers");
      for (const auto& [key, value] : map["params"].items()) {
        if (!value.is_number()) semantic("map.params." + key, "expected a number");
        spec.map.params[key] = value.get<double>();
      }
    }
  } else if (spec.map.kind == MapSpec::Kind::single) {
    spec.map.image.push_back(detail::read_components(detail::require(map, "expr", "map"), dim, "map.expr"));
  } else {
    const auto& exprs = detail::require(map, "exprs", "map");
    if (exprs.is_string()) {
      const auto text = exprs.get<std::string>();
      try {
        for (const auto& e : parse_expression_set(text)) spec.map.image.push_back({e.source()});
      } catch (const ParseError& e) {
        semantic("map.exprs", e.what());
      }
    } else if (exprs.is_array() && !exprs.empty()) {
      for (std::size_t i = 0; i < exprs.size(); ++i) {
        spec.map.image.push_back(detail::read_components(exprs[i], dim, "map.exprs[" + std::to_string(i) + "]"));
      }
    } else {
      semantic("map.exprs", "expected a set literal \"{e1, e2}\" or a nonempty array");
    }
  }
  (void)detail::compile_image(spec);


  const auto& k = detail::require(doc, "k", "k");
  if (k.is_string()) {
    if (k.get<std::string>() != "auto") semantic("k", "expected a number in (0,1) or \"auto\"");
  } else if (k.is_number()) {
    const double kv = k.get<double>();
    if (!(kv > 0.0 && kv < 1.0)) semantic("k", "k must lie in (0,1)");
    spec.k = kv;
  } else {
    semantic("k", "expected a number in (0,1) or \"auto\"");
  }

  const auto& seed = detail::require(doc, "seed", "seed");
  spec.x0 = detail::read_point(detail::require(seed, "x0", "seed"), dim, "seed.x0");
  spec.y0 = detail::read_point(detail::require(seed, "y0", "seed"), dim, "seed.y0");
  if (seed.contains("x1")) spec.x1 = detail::read_point(seed["x1"], dim, "seed.x1");
  if (seed.contains("y1")) spec.y1 = detail::read_point(seed["y1"], dim, "seed.y1");
  if (spec.map.kind == MapSpec::Kind::multi && (!spec.x1 || !spec.y1)) {
    semantic("seed", "multivalued maps need seed.x1 and seed.y1");
  }

  if (doc.contains("solve")) {
    const auto& s = doc["solve"];
    if (!s.is_object()) semantic("solve", "expected an object");
    if (s.contains("tol")) spec.solve.tol = detail::read_as<double>(s["tol"], "solve.tol", "a number");
    if (s.contains("max_iter")) {
      if (!s["max_iter"].is_number_integer() || s["max_iter"].get<long long>() <= 0) {
        semantic("solve.max_iter", "must be a positive integer");
      }
      spec.solve.max_iter = s["max_iter"].get<std::size_t>();
    }
    if (s.contains("mode")) {
      const auto mode = detail::read_as<std::string>(s["mode"], "solve.mode", "a string");
      if (mode == "continuous") {
        spec.solve.mode = SolveMode::continuous;
      } else if (mode == "property_star") {
        spec.solve.mode = SolveMode::property_star;
      } else {
        semantic("solve.mode", "expected continuous or property_star");
      }
    }
    if (s.contains("check_bounds")) spec.solve.check_bounds = detail::read_as<bool>(s["check_bounds"], "solve.check_bounds", "a boolean");
    if (s.contains("record_edges")) spec.solve.record_edges = detail::read_as<bool>(s["record_edges"], "solve.record_edges", "a boolean");
  }
  if (!(spec.solve.tol > 0.0)) semantic("solve.tol", "must be positive");
  spec.continuous = spec.solve.mode == SolveMode::continuous;
  if (doc.contains("continuous")) spec.continuous = detail::read_as<bool>(doc["continuous"], "continuous", "a boolean");
  if (spec.solve.mode == SolveMode::continuous && !spec.continuous) {
    semantic("solve.mode", "continuous mode needs \"continuous\": true; use property_star for a non-continuous map");
  }
  spec.solve.k = spec.k.value_or(0.5);

  if (doc.contains("sampler")) {
    const auto& s = doc["sampler"];
    if (!s.is_object()) semantic("sampler", "expected an object");
    auto bound = [&](const char* key, std::vector<double>& out) {
      if (!s.contains(key)) return;
      const std::string field = std::string("sampler.") + key;
      if (s[key].is_number()) {
        out = {s[key].get<double>()};
      } else {
        out = detail::read_point(s[key], dim, field);
      }
    };
    bound("lo", spec.sampler.lo);
    bound("hi", spec.sampler.hi);
    if (s.contains("count")) {
      if (!s["count"].is_number_integer() || s["count"].get<long long>() <= 0) semantic("sampler.count", "must be a positive integer");
      spec.sampler.count = s["count"].get<std::size_t>();
    }
    if (s.contains("rng_seed")) {
      if (!s["rng_seed"].is_number_unsigned()) semantic("sampler.rng_seed", "must be a nonnegative integer");
      spec.sampler.rng_seed = s["rng_seed"].get<std::uint64_t>();
      spec.sampler_seed_given = true;
    }
    for (std::size_t i = 0; i < spec.sampler.lo.size() && i < spec.sampler.hi.size(); ++i) {
      if (!(spec.sampler.lo[i] <= spec.sampler.hi[i])) semantic("sampler", "lo must not exceed hi");
    }
  }
  if (spec.graph.kind == "edge_list") spec.sampler.points = spec.graph.vertices;
  return spec;
}

/// Canonical JSON form of a spec; parse_spec(serialize_spec(s)) == s.
inline std::string serialize_spec(const ProblemSpec& spec) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["id"] = spec.id;
  if (!spec.description.empty()) doc["description"] = spec.description;
  doc["space"] = {{"kind", spec.space.kind}, {"dimension", spec.space.dimension}};
  json graph = {{"kind", spec.graph.kind}};
  if (spec.graph.kind == "edge_list") {
    graph["vertices"] = spec.graph.vertices;
    json edges = json::array();
    for (const auto& [a, b] : spec.graph.edges) edges.push_back({a, b});
    graph["edges"] = edges;
  }
  doc["graph"] = graph;
  json map = {{"kind", spec.map.kind == MapSpec::Kind::single ? "single" : "multi"}};
  if (!spec.map.builtin.empty()) {
    map["builtin"] = spec.map.builtin;
    map["params"] = spec.map.params;
  } else if (spec.map.kind == MapSpec::Kind::single) {
    map["expr"] = spec.map.image.front().size() == 1 ? json(spec.map.image.front().front()) : json(spec.map.image.front());
  } else {
    json exprs = json::array();
    for (const auto& e : spec.map.image) exprs.push_back(e.size() == 1 ? json(e.front()) : json(e));
    map["exprs"] = exprs;
  }
  doc["map"] = map;
  doc["continuous"] = spec.continuous;
  doc["k"] = spec.k ? json(*spec.k) : json("auto");
  json seed = {{"x0", spec.x0}, {"y0", spec.y0}};
  if (spec.x1) seed["x1"] = *spec.x1;
  if (spec.y1) seed["y1"] = *spec.y1;
  doc["seed"] = seed;
  doc["solve"] = {{"tol", spec.solve.tol},
                  {"max_iter", spec.solve.max_iter},
                  {"mode", to_string(spec.solve.mode)},
                  {"check_bounds", spec.solve.check_bounds},
                  {"record_edges", spec.solve.record_edges}};
  auto bound = [](const std::vector<double>& b) { return b.size() == 1 ? json(b.front()) : json(b); };
  json sampler = {{"lo", bound(spec.sampler.lo)}, {"hi", bound(spec.sampler.hi)}, {"count", spec.sampler.count}};
  if (spec.sampler_seed_given) sampler["rng_seed"] = spec.sampler.rng_seed;
  doc["sampler"] = sampler;
  return doc.dump(2) + "\n";
}

inline MetricSpace make_space(const SpaceSpec& s) {
  return s.kind == "chebyshev" ? MetricSpace::chebyshev(s.dimension) : MetricSpace::euclidean(s.dimension);
}

inline Digraph make_graph(const GraphSpec& g) {
  if (g.kind == "full") return Digraph::full();
  if (g.kind == "edge_list") return Digraph::from_edges(g.vertices, g.edges);
  return Digraph::order();
}

/// Compiles the map of a validated spec into an evaluable operator.
inline std::variant<CoupledMap, CoupledMultiMap> make_map(const ProblemSpec& spec) {
  auto image = detail::compile_image(spec);
  if (spec.map.kind == MapSpec::Kind::single) {
    return CoupledMap([comps = std::move(image.front())](const Point& x, const Point& y) {
      return detail::eval_image(comps, x, y);
    });
  }
  return CoupledMultiMap([members = std::move(image)](const Point& x, const Point& y) {
    std::vector<Point> pts;
    pts.reserve(members.size());
    for (const auto& comps : members) pts.push_back(detail::eval_image(comps, x, y));
    return FiniteSet(std::move(pts));
  });
}

/// Builds the preflight instance; `k` must already be resolved.
inline ProblemInstance make_instance(const ProblemSpec& spec, double k) {
  ProblemInstance inst;
  inst.id = spec.id;
  inst.space = make_space(spec.space);
  inst.graph = make_graph(spec.graph);
  inst.map = make_map(spec);
  // The solve mode picks which hypothesis preflight demands.
  inst.continuous = spec.solve.mode == SolveMode::continuous;
  inst.k = k;
  inst.x0 = spec.x0;
  inst.y0 = spec.y0;
  inst.x1 = spec.x1;
  inst.y1 = spec.y1;
  inst.solve = spec.solve;
  inst.solve.k = k;
  return inst;
}

}  // namespace cfp
