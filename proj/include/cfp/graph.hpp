#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfp/error.hpp"
#include "cfp/metric.hpp"

namespace cfp {

/// A point of X x X.
struct PairPoint {
  Point first;
  Point second;

  friend bool operator==(const PairPoint&, const PairPoint&) = default;
};

/// Reflexive directed graph whose vertex set is (a subset of) the ground
/// space. Graphs are immutable handles; copies share the same structure.
///
/// Intensional graphs (order, full, predicate) treat every point as a vertex.
/// Extensional graphs carry an explicit vertex list, every listed vertex gets a
/// loop, and querying a point outside that list is an error. Points are
/// matched bitwise.
///
/// Edge predicates compare floats exactly; wrap your own slack into a
/// predicate graph if you need one.
class Digraph {
 public:
  enum class Mode { order, full, extensional, predicate, reversed, symmetrized };
  using EdgeFn = std::function<bool(const Point&, const Point&)>;
  using Edge = std::pair<Point, Point>;

  /// Edge iff p <= q componentwise.
  static Digraph order() { return Digraph(std::make_shared<const Node>(Node{Mode::order})); }

  static Digraph full() { return Digraph(std::make_shared<const Node>(Node{Mode::full})); }

  static Digraph from_predicate(EdgeFn fn) {
    if (!fn) throw Error(ErrorCode::invalid_parameter, "predicate graph requires an edge callback");
    Node node{Mode::predicate};
    node.fn = std::move(fn);
    return Digraph(std::make_shared<const Node>(std::move(node)));
  }

  /// Edges whose endpoints are missing from `vertices` are rejected.
  static Digraph from_edges(std::vector<Point> vertices, const std::vector<Edge>& edges) {
    Node node{Mode::extensional};
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      // Duplicate vertices collapse onto the first occurrence.
      if (node.index.emplace(vertices[i], node.vertices.size()).second) {
        node.vertices.push_back(vertices[i]);
      }
    }
    if (node.vertices.empty()) throw Error(ErrorCode::invalid_input, "edge-list graph needs at least one vertex");
    for (const auto& [from, to] : edges) {
      const auto a = node.index.find(from);
      const auto b = node.index.find(to);
      if (a == node.index.end() || b == node.index.end()) {
        throw Error(ErrorCode::not_a_vertex, "edge endpoint is not in the vertex list");
      }
      node.edges.emplace(a->second, b->second);
    }
    for (std::size_t i = 0; i < node.vertices.size(); ++i) node.edges.emplace(i, i);
    return Digraph(std::make_shared<const Node>(std::move(node)));
  }

  /// G^{-1}: every edge reversed.
  Digraph reversed() const {
    Node node{Mode::reversed};
    node.inner = node_;
    return Digraph(std::make_shared<const Node>(std::move(node)));
  }

  /// G~: E(G) union E(G^{-1}).
  Digraph symmetrized() const {
    Node node{Mode::symmetrized};
    node.inner = node_;
    return Digraph(std::make_shared<const Node>(std::move(node)));
  }

  Mode mode() const noexcept { return node_->mode; }

  /// True when the graph (or the graph it adapts) has a finite vertex list.
  bool is_extensional() const noexcept { return base().mode == Mode::extensional; }

  /// The vertex list of an extensional graph; empty for intensional graphs.
  std::span<const Point> vertices() const noexcept { return base().vertices; }

  bool has_edge(const Point& p, const Point& q) const { return edge(*node_, p, q); }

  /// Extensional graphs only: the stored edges (loops included) as vertex
  /// index pairs, before any reversal/symmetrization adapter.
  const std::set<std::pair<std::size_t, std::size_t>>& base_edges() const {
    if (!is_extensional()) throw Error(ErrorCode::unsupported_mode, "graph has no finite edge list");
    return base().edges;
  }

 private:
  struct Node {
    Mode mode;
    EdgeFn fn{};
    std::vector<Point> vertices{};
    std::map<Point, std::size_t> index{};
    std::set<std::pair<std::size_t, std::size_t>> edges{};
    std::shared_ptr<const Node> inner{};
  };

  explicit Digraph(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& base() const noexcept {
    const Node* n = node_.get();
    while (n->inner) n = n->inner.get();
    return *n;
  }

  static bool edge(const Node& node, const Point& p, const Point& q) {
    switch (node.mode) {
      case Mode::order: {
        if (p.size() != q.size()) throw Error(ErrorCode::invalid_input, "points differ in dimension");
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (!(p[i] <= q[i])) return false;
        }
        return true;
      }
      case Mode::full:
        if (p.size() != q.size()) throw Error(ErrorCode::invalid_input, "points differ in dimension");
        return true;
      case Mode::predicate:
        return p == q || node.fn(p, q);
      case Mode::extensional: {
        const auto a = node.index.find(p);
        const auto b = node.index.find(q);
        if (a == node.index.end() || b == node.index.end()) {
          throw Error(ErrorCode::not_a_vertex, "point is not a vertex of the edge-list graph");
        }
        return node.edges.contains({a->second, b->second});
      }
      case Mode::reversed:
        return edge(*node.inner, q, p);
      case Mode::symmetrized:
        return edge(*node.inner, p, q) || edge(*node.inner, q, p);
    }
    return false;
  }

  std::shared_ptr<const Node> node_;
};

inline const char* to_string(Digraph::Mode mode) {
  switch (mode) {
    case Digraph::Mode::order: return "order";
    case Digraph::Mode::full: return "full";
    case Digraph::Mode::extensional: return "edge_list";
    case Digraph::Mode::predicate: return "predicate";
    case Digraph::Mode::reversed: return "reversed";
    case Digraph::Mode::symmetrized: return "symmetrized";
  }
  return "unknown";
}

inline bool has_edge(const Digraph& graph, const Point& p, const Point& q) { return graph.has_edge(p, q); }

/// Edge of the induced graph on X x X: ((x,y),(u,v)) is an edge iff (x,u) and
/// (v,y) are edges of the base graph. Note the second coordinate is reversed.
inline bool product_edge(const Digraph& graph, const PairPoint& a, const PairPoint& b) {
  return graph.has_edge(a.first, b.first) && graph.has_edge(b.second, a.second);
}

/// True iff consecutive vertices are joined by edges. A single vertex is a
/// path of length zero.
inline bool is_path(const Digraph& graph, std::span<const Point> vertices) {
  if (vertices.empty()) throw Error(ErrorCode::invalid_input, "path query must contain at least one vertex");
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (!graph.has_edge(vertices[i - 1], vertices[i])) return false;
  }
  return true;
}

/// Connectivity of the symmetrized graph. Only defined for graphs with a
/// finite vertex list; reversal and symmetrization do not change the answer.
inline bool is_weakly_connected(const Digraph& graph) {
  if (!graph.is_extensional()) {
    throw Error(ErrorCode::unsupported_mode, "weak connectivity needs a finite vertex set");
  }
  const std::size_t n = graph.vertices().size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::size_t components = n;
  for (const auto& [a, b] : graph.base_edges()) {
    const auto ra = find(a);
    const auto rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components == 1;
}

}  // namespace cfp
