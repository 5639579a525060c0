#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "raag/errors.hpp"

namespace raag {

using Vertex = int;

/// Subset of the vertices of a defining graph, stored as a bitmask.
/// Iteration and all set-valued outputs follow the graph's vertex order.
class VertexSet {
 public:
  VertexSet() = default;
  static VertexSet single(Vertex v) { return VertexSet{std::uint64_t{1} << v}; }
  static VertexSet full(int n) {
    return VertexSet{n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
  }

  bool contains(Vertex v) const { return (bits_ >> v) & 1u; }
  void add(Vertex v) { bits_ |= std::uint64_t{1} << v; }
  void remove(Vertex v) { bits_ &= ~(std::uint64_t{1} << v); }
  bool empty() const { return bits_ == 0; }
  int count() const { return __builtin_popcountll(bits_); }
  bool subset_of(VertexSet other) const { return (bits_ & ~other.bits_) == 0; }
  VertexSet intersect(VertexSet o) const { return VertexSet{bits_ & o.bits_}; }
  VertexSet unite(VertexSet o) const { return VertexSet{bits_ | o.bits_}; }
  VertexSet minus(VertexSet o) const { return VertexSet{bits_ & ~o.bits_}; }
  bool operator==(const VertexSet&) const = default;
  auto operator<=>(const VertexSet&) const = default;

  /// Lowest member, or -1 when empty.
  Vertex first() const { return bits_ ? __builtin_ctzll(bits_) : -1; }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    for (std::uint64_t b = bits_; b;) {
      Vertex v = __builtin_ctzll(b);
      out.push_back(v);
      b &= b - 1;
    }
    return out;
  }

  std::uint64_t bits() const { return bits_; }

 private:
  explicit VertexSet(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

/// A finite simplicial graph: the defining graph of a right-angled Artin
/// group. Vertices are indexed in input order; all derived sets are reported
/// in that order. Immutable once built, safe for concurrent reads.
class DefiningGraph {
 public:
  static constexpr int kMaxVertices = 64;

  Vertex add_vertex(std::string_view name) {
    if (index_.count(std::string(name)))
      throw input_error("duplicate vertex '" + std::string(name) + "'");
    if (static_cast<int>(names_.size()) >= kMaxVertices)
      throw input_error("graph exceeds the 64-vertex limit");
    names_.emplace_back(name);
    adj_.push_back(0);
    index_[names_.back()] = static_cast<Vertex>(names_.size()) - 1;
    return static_cast<Vertex>(names_.size()) - 1;
  }

  void add_edge(Vertex a, Vertex b) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw input_error("loop edge at '" + names_[a] + "'");
    if (adjacent(a, b))
      throw input_error("duplicate edge {" + names_[a] + "," + names_[b] + "}");
    adj_[a] |= std::uint64_t{1} << b;
    adj_[b] |= std::uint64_t{1} << a;
  }

  void add_edge(std::string_view a, std::string_view b) {
    add_edge(require(a), require(b));
  }

  int vertex_count() const { return static_cast<int>(names_.size()); }
  const std::string& name(Vertex v) const { return names_[v]; }

  std::optional<Vertex> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Vertex require(std::string_view name) const {
    auto v = find(name);
    if (!v) throw input_error("unknown vertex '" + std::string(name) + "'");
    return *v;
  }

  bool adjacent(Vertex a, Vertex b) const { return (adj_[a] >> b) & 1u; }

  /// Letters of the same generator commute; distinct generators commute
  /// exactly when joined by an edge.
  bool commutes(Vertex a, Vertex b) const { return a == b || adjacent(a, b); }

  VertexSet link(Vertex v) const {
    check_vertex(v);
    VertexSet s;
    for (Vertex u = 0; u < vertex_count(); ++u)
      if (adjacent(v, u)) s.add(u);
    return s;
  }

  VertexSet star(Vertex v) const {
    VertexSet s = link(v);
    s.add(v);
    return s;
  }

  VertexSet vertices() const { return VertexSet::full(vertex_count()); }

  int degree(Vertex v) const { return __builtin_popcountll(adj_[v]); }

  /// Edges as ordered pairs (a, b) with a < b, in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex a = 0; a < vertex_count(); ++a)
      for (Vertex b = a + 1; b < vertex_count(); ++b)
        if (adjacent(a, b)) out.emplace_back(a, b);
    return out;
  }

  void check_subset(VertexSet s) const {
    if (!s.subset_of(vertices())) throw input_error("vertex set not a subset of the graph");
  }

 private:
  void check_vertex(Vertex v) const {
    if (v < 0 || v >= vertex_count()) throw input_error("vertex index out of range");
  }

  std::vector<std::string> names_;
  std::vector<std::uint64_t> adj_;
  std::map<std::string, Vertex> index_;
};

/// Witness that a vertex set sits inside a join: two disjoint nonempty sides
/// with every side_a vertex adjacent to every side_b vertex.
struct JoinCover {
  VertexSet side_a;
  VertexSet side_b;

  bool valid(const DefiningGraph& g) const {
    if (side_a.empty() || side_b.empty()) return false;
    if (!side_a.intersect(side_b).empty()) return false;
    if (!side_a.subset_of(g.vertices()) || !side_b.subset_of(g.vertices())) return false;
    for (Vertex a : side_a.to_vector())
      for (Vertex b : side_b.to_vector())
        if (!g.adjacent(a, b)) return false;
    return true;
  }

  bool covers(VertexSet s) const { return s.subset_of(side_a.unite(side_b)); }
  bool operator==(const JoinCover&) const = default;
};

struct ValidationReport {
  bool connected = false;
  bool anti_connected = false;
  int vertex_count = 0;
  std::vector<std::string> warnings;

  /// Hypotheses required by the loxodromic classifier and the deciders.
  bool classifier_hypotheses() const {
    return connected && anti_connected && vertex_count >= 2;
  }
};

/// Connected components of the complement of the induced subgraph on s,
/// each reported as a VertexSet, ordered by least member.
inline std::vector<VertexSet> induced_complement_components(const DefiningGraph& g,
                                                            VertexSet s) {
  g.check_subset(s);
  std::vector<VertexSet> comps;
  VertexSet left = s;
  while (!left.empty()) {
    VertexSet comp;
    std::vector<Vertex> stack{left.first()};
    left.remove(left.first());
    comp.add(stack.back());
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex u : left.to_vector()) {
        if (!g.adjacent(v, u)) {  // complement edge
          left.remove(u);
          comp.add(u);
          stack.push_back(u);
        }
      }
    }
    comps.push_back(comp);
  }
  std::sort(comps.begin(), comps.end(),
            [](const VertexSet& a, const VertexSet& b) { return a.first() < b.first(); });
  return comps;
}

inline bool graph_connected(const DefiningGraph& g) {
  int n = g.vertex_count();
  if (n <= 1) return true;
  VertexSet seen = VertexSet::single(0);
  std::vector<Vertex> stack{0};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u = 0; u < n; ++u)
      if (g.adjacent(v, u) && !seen.contains(u)) {
        seen.add(u);
        stack.push_back(u);
      }
  }
  return seen.count() == n;
}

inline ValidationReport validate_graph(const DefiningGraph& g) {
  ValidationReport r;
  r.vertex_count = g.vertex_count();
  r.connected = graph_connected(g);
  bool single_edge = g.vertex_count() == 2 && g.adjacent(0, 1);
  // A single edge only decomposes as the trivial join, so it counts as
  // anti-connected, with a warning: its group is free abelian of rank 2 and
  // has no loxodromic elements.
  r.anti_connected = g.vertex_count() <= 1 || single_edge ||
                     induced_complement_components(g, g.vertices()).size() == 1;
  if (single_edge)
    r.warnings.push_back(
        "degenerate graph: a single edge presents Z^2; every element is elliptic");
  if (!r.connected) r.warnings.push_back("graph is disconnected");
  if (!r.anti_connected) r.warnings.push_back("graph decomposes as a nontrivial join");
  if (r.vertex_count < 2) r.warnings.push_back("graph has fewer than two vertices");
  return r;
}

/// Finds two disjoint nonempty sides with full adjacency between them whose
/// union contains s, if any exist. Star containment is tried first (in vertex
/// order), then a split of s along the components of the complement of the
/// induced subgraph on s.
inline std::optional<JoinCover> join_cover(const DefiningGraph& g, VertexSet s) {
  g.check_subset(s);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!s.subset_of(g.star(v))) continue;
    if (!s.contains(v)) {
      if (!s.empty()) return JoinCover{VertexSet::single(v), s};
    } else if (s.count() >= 2) {
      return JoinCover{VertexSet::single(v), s.minus(VertexSet::single(v))};
    } else if (g.degree(v) > 0) {
      return JoinCover{VertexSet::single(v), VertexSet::single(g.link(v).first())};
    }
  }
  if (s.count() >= 2) {
    auto comps = induced_complement_components(g, s);
    if (comps.size() >= 2) return JoinCover{comps[0], s.minus(comps[0])};
  }
  if (s.empty()) {
    auto es = g.edges();
    if (!es.empty())
      return JoinCover{VertexSet::single(es[0].first), VertexSet::single(es[0].second)};
  }
  return std::nullopt;
}

}  // namespace raag
