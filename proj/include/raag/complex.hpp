#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "raag/word.hpp"

namespace raag {

/// Base-pointed labeled square complex mapping toward the Salvetti complex.
///
/// Undirected edge k carries a label and a positive orientation; directed
/// edge 2k traverses it positively (reads the label), 2k+1 traverses it
/// inversely (reads the inverse letter). Squares are boundary paths of four
/// directed edges reading u^a v^b u^-a v^-b for distinct commuting labels.
struct LabeledComplex {
  struct Edge {
    int from = 0;
    int to = 0;
    Vertex label = 0;
  };

  int vertex_count = 0;
  int basepoint = 0;
  std::vector<Edge> edges;
  std::vector<std::array<int, 4>> squares;

  int dedge_count() const { return 2 * static_cast<int>(edges.size()); }
  static int edge_of(int d) { return d / 2; }
  static int inverse_dedge(int d) { return d ^ 1; }
  bool positive(int d) const { return (d & 1) == 0; }
  int src(int d) const { return positive(d) ? edges[edge_of(d)].from : edges[edge_of(d)].to; }
  int dst(int d) const { return positive(d) ? edges[edge_of(d)].to : edges[edge_of(d)].from; }
  Letter letter(int d) const {
    return Letter{edges[edge_of(d)].label, positive(d) ? 1 : -1};
  }

  /// Directed edges leaving v, ascending.
  std::vector<int> out_dedges(int v) const {
    std::vector<int> out;
    for (int d = 0; d < dedge_count(); ++d)
      if (src(d) == v) out.push_back(d);
    return out;
  }

  Word path_label(const std::vector<int>& dedges) const {
    Word w;
    for (int d : dedges) w.push_back(letter(d));
    return w;
  }

  static std::array<int, 4> canonical_square(std::array<int, 4> s) {
    std::array<int, 4> best = s;
    std::array<int, 4> rev{inverse_dedge(s[3]), inverse_dedge(s[2]), inverse_dedge(s[1]),
                           inverse_dedge(s[0])};
    for (std::array<int, 4> base : {s, rev})
      for (int r = 0; r < 4; ++r) {
        std::array<int, 4> rot{base[r], base[(r + 1) % 4], base[(r + 2) % 4],
                               base[(r + 3) % 4]};
        if (rot < best) best = rot;
      }
    return best;
  }

  void add_square(std::array<int, 4> s) {
    s = canonical_square(s);
    if (std::find(squares.begin(), squares.end(), s) == squares.end()) squares.push_back(s);
  }
};

struct IsometryReport {
  struct Corner {
    int vertex = 0;
    Letter germ1, germ2;  // signed labels of the two outgoing edge-germs
  };
  bool folded = false;
  std::vector<Corner> missing_squares;
  std::vector<Corner> duplicate_squares;

  bool passes() const { return folded && missing_squares.empty() && duplicate_squares.empty(); }
};

// ---------------------------------------------------------------------------
// Construction

/// Wedge of labeled cycles at the basepoint, one per generator, each spelling
/// the generator's word. Not folded.
inline LabeledComplex rose(const DefiningGraph& g, const std::vector<Word>& gens) {
  if (gens.empty()) throw input_error("rose needs at least one generator");
  LabeledComplex c;
  c.vertex_count = 1;
  c.basepoint = 0;
  for (const Word& w : gens) {
    check_word(g, w);
    if (w.empty()) throw input_error("rose generators must be nonempty");
    int prev = c.basepoint;
    for (size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? c.basepoint : c.vertex_count++;
      if (w[i].sign > 0)
        c.edges.push_back({prev, next, w[i].v});
      else
        c.edges.push_back({next, prev, w[i].v});
      prev = next;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Folding

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Rebuilds the complex after a round of vertex identifications, merging
// coincident edges (same endpoints, label and orientation) and remapping
// squares. dedge_map reports where each old directed edge went.
inline LabeledComplex quotient(const LabeledComplex& c, UnionFind& uf,
                               std::vector<int>* dedge_map_out = nullptr) {
  std::vector<int> vertex_map(c.vertex_count, -1);
  int nv = 0;
  for (int v = 0; v < c.vertex_count; ++v)
    if (uf.find(v) == v) vertex_map[v] = nv++;
  for (int v = 0; v < c.vertex_count; ++v) vertex_map[v] = vertex_map[uf.find(v)];

  LabeledComplex out;
  out.vertex_count = nv;
  out.basepoint = vertex_map[c.basepoint];

  std::map<std::tuple<int, int, Vertex>, int> edge_index;
  std::vector<int> dedge_map(c.dedge_count(), -1);
  for (size_t e = 0; e < c.edges.size(); ++e) {
    int from = vertex_map[c.edges[e].from];
    int to = vertex_map[c.edges[e].to];
    Vertex label = c.edges[e].label;
    auto fwd = edge_index.find({from, to, label});
    if (fwd != edge_index.end()) {
      dedge_map[2 * e] = 2 * fwd->second;
      dedge_map[2 * e + 1] = 2 * fwd->second + 1;
      continue;
    }
    // Opposite-oriented parallel edges stay distinct: their germs differ,
    // and merging them would change the fundamental group.
    int idx = static_cast<int>(out.edges.size());
    out.edges.push_back({from, to, label});
    edge_index[{from, to, label}] = idx;
    dedge_map[2 * e] = 2 * idx;
    dedge_map[2 * e + 1] = 2 * idx + 1;
  }
  for (const auto& s : c.squares)
    out.add_square({dedge_map[s[0]], dedge_map[s[1]], dedge_map[s[2]], dedge_map[s[3]]});
  if (dedge_map_out) *dedge_map_out = dedge_map;
  return out;
}

// First vertex carrying two outgoing germs with the same signed label,
// by (vertex, dedge, dedge); nullopt when folded.
inline std::optional<std::pair<int, int>> fold_candidate(const LabeledComplex& c) {
  for (int v = 0; v < c.vertex_count; ++v) {
    std::map<std::pair<Vertex, int>, int> germs;
    for (int d = 0; d < c.dedge_count(); ++d) {
      if (c.src(d) != v) continue;
      Letter l = c.letter(d);
      auto key = std::make_pair(l.v, l.sign);
      auto it = germs.find(key);
      if (it != germs.end()) return std::make_pair(it->second, d);
      germs[key] = d;
    }
  }
  return std::nullopt;
}

// Performs one fold: the two germs (directed edges with a common source and
// equal signed labels) are identified, along with their target vertices.
inline LabeledComplex fold_step(const LabeledComplex& cur, std::pair<int, int> germs) {
  UnionFind uf(cur.vertex_count);
  uf.unite(cur.dst(germs.first), cur.dst(germs.second));
  LabeledComplex next = cur;
  int keep = LabeledComplex::edge_of(germs.first);
  int drop = LabeledComplex::edge_of(germs.second);
  if (keep != drop) {
    bool aligned = cur.positive(germs.first) == cur.positive(germs.second);
    for (auto& s : next.squares)
      for (int& d : s) {
        if (LabeledComplex::edge_of(d) != drop) continue;
        bool pos = (d & 1) == 0;
        d = 2 * keep + ((pos == aligned) ? 0 : 1);
      }
    next.edges.erase(next.edges.begin() + drop);
    for (auto& s : next.squares)
      for (int& d : s)
        if (LabeledComplex::edge_of(d) > drop) d -= 2;
  }
  return quotient(next, uf);
}

// Every foldable germ pair, in scan order.
inline std::vector<std::pair<int, int>> fold_candidates(const LabeledComplex& c) {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < c.vertex_count; ++v) {
    std::map<std::pair<Vertex, int>, std::vector<int>> germs;
    for (int d = 0; d < c.dedge_count(); ++d) {
      if (c.src(d) != v) continue;
      Letter l = c.letter(d);
      germs[{l.v, l.sign}].push_back(d);
    }
    for (const auto& [key, ds] : germs)
      for (size_t i = 0; i + 1 < ds.size(); ++i) out.emplace_back(ds[i], ds[i + 1]);
  }
  return out;
}

}  // namespace detail

inline bool is_folded(const LabeledComplex& c) {
  return !detail::fold_candidate(c).has_value();
}

/// Stallings folding: identifies targets of same-labeled germs until no
/// vertex has two outgoing edges with the same signed label. Preserves the
/// basepoint and the fundamental-group image. The folded complex is the same
/// whatever order the folds are applied in, up to label isomorphism.
inline LabeledComplex fold(const LabeledComplex& c) {
  LabeledComplex cur = c;
  for (;;) {
    auto cand = detail::fold_candidate(cur);
    if (!cand) return cur;
    cur = detail::fold_step(cur, *cand);
  }
}

// ---------------------------------------------------------------------------
// Local isometry at the square level

namespace detail {

// Corners a square fills: at each boundary vertex, the unordered pair of
// outgoing germs {inverse of the incoming side, the outgoing side}.
inline std::vector<std::tuple<int, int, int>> square_corners(const LabeledComplex& c,
                                                             const std::array<int, 4>& s) {
  std::vector<std::tuple<int, int, int>> out;
  for (int k = 0; k < 4; ++k) {
    int incoming = s[k];
    int outgoing = s[(k + 1) % 4];
    int v = c.dst(incoming);
    int g1 = LabeledComplex::inverse_dedge(incoming);
    int g2 = outgoing;
    out.emplace_back(v, std::min(g1, g2), std::max(g1, g2));
  }
  return out;
}

}  // namespace detail

/// Square-level link condition: folded 1-skeleton, and at every vertex each
/// unordered pair of outgoing germs with distinct commuting labels is filled
/// by exactly one square corner.
inline IsometryReport check_local_isometry(const DefiningGraph& g, const LabeledComplex& c) {
  IsometryReport report;
  report.folded = is_folded(c);

  std::map<std::tuple<int, int, int>, int> fill_count;
  for (const auto& s : c.squares)
    for (const auto& corner : detail::square_corners(c, s)) fill_count[corner]++;

  for (int v = 0; v < c.vertex_count; ++v) {
    std::vector<int> out = c.out_dedges(v);
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = i + 1; j < out.size(); ++j) {
        Letter l1 = c.letter(out[i]);
        Letter l2 = c.letter(out[j]);
        if (l1.v == l2.v || !g.adjacent(l1.v, l2.v)) continue;
        int filled = 0;
        if (auto it = fill_count.find({v, out[i], out[j]}); it != fill_count.end())
          filled = it->second;
        IsometryReport::Corner corner{v, l1, l2};
        if (filled == 0) report.missing_squares.push_back(corner);
        if (filled > 1) report.duplicate_squares.push_back(corner);
      }
  }
  return report;
}

/// Attaches one square at the least missing corner (by vertex, then germ
/// pair), reusing parallel edges where they already point the right way, and
/// refolds. No-op when nothing is missing. Preserves the pi_1-image: the new
/// boundary spells a commutator.
inline LabeledComplex complete_squares_step(const DefiningGraph& g, const LabeledComplex& c) {
  std::map<std::tuple<int, int, int>, int> fill_count;
  for (const auto& s : c.squares)
    for (const auto& corner : detail::square_corners(c, s)) fill_count[corner]++;

  std::optional<std::tuple<int, int, int>> target;
  for (int v = 0; v < c.vertex_count && !target; ++v) {
    std::vector<int> out = c.out_dedges(v);
    for (size_t i = 0; i < out.size() && !target; ++i)
      for (size_t j = i + 1; j < out.size(); ++j) {
        Letter l1 = c.letter(out[i]);
        Letter l2 = c.letter(out[j]);
        if (l1.v == l2.v || !g.adjacent(l1.v, l2.v)) continue;
        if (!fill_count.count({v, out[i], out[j]})) {
          target = {v, out[i], out[j]};
          break;
        }
      }
  }
  if (!target) return c;

  auto [w, d1, d2] = *target;
  LabeledComplex next = c;
  int p = next.dst(d1);
  int q = next.dst(d2);
  Letter l1 = next.letter(d1);
  Letter l2 = next.letter(d2);

  // Boundary from w: d1 (reads l1), p->r reading l2, r->q reading l1^-1,
  // then back along d2 inverted.
  auto find_germ = [&](int vertex, Letter l) -> std::optional<int> {
    for (int d = 0; d < next.dedge_count(); ++d)
      if (next.src(d) == vertex && next.letter(d) == l) return d;
    return std::nullopt;
  };
  auto make_edge = [&](int from, int to, Letter l) -> int {
    if (l.sign > 0)
      next.edges.push_back({from, to, l.v});
    else
      next.edges.push_back({to, from, l.v});
    return (next.dedge_count() - 2) + (l.sign > 0 ? 0 : 1);
  };

  int r;
  int side_b;  // p -> r reading l2
  if (auto existing = find_germ(p, l2)) {
    side_b = *existing;
    r = next.dst(*existing);
  } else {
    r = next.vertex_count++;
    side_b = make_edge(p, r, l2);
  }
  int side_c;  // r -> q reading l1^-1
  if (auto existing = find_germ(q, l1); existing && next.dst(*existing) == r) {
    side_c = LabeledComplex::inverse_dedge(*existing);
  } else {
    side_c = LabeledComplex::inverse_dedge(make_edge(q, r, l1));
  }
  next.add_square({d1, side_b, side_c, LabeledComplex::inverse_dedge(d2)});
  return fold(next);
}

enum class SaturationStatus { complete, budget_exhausted };

struct SaturationResult {
  LabeledComplex complex;
  SaturationStatus status = SaturationStatus::complete;
  int steps_used = 0;
};

/// Folds, then alternates corner filling and refolding until the square-level
/// link condition holds or the step budget runs out.
inline SaturationResult saturate(const DefiningGraph& g, const LabeledComplex& c,
                                 int budget) {
  SaturationResult out;
  out.complex = fold(c);
  while (true) {
    IsometryReport report = check_local_isometry(g, out.complex);
    if (report.passes()) {
      out.status = SaturationStatus::complete;
      return out;
    }
    if (out.steps_used >= budget) {
      out.status = SaturationStatus::budget_exhausted;
      return out;
    }
    out.complex = complete_squares_step(g, out.complex);
    ++out.steps_used;
  }
}

// ---------------------------------------------------------------------------
// Tracing

struct TracePath {
  std::vector<int> dedges;
  int end_vertex = 0;
  bool loop_at_basepoint = false;
};

/// Follows w's labels from the basepoint; deterministic on folded complexes.
/// Absence of a continuation is reported as nullopt, not an error.
inline std::optional<TracePath> trace_word(const LabeledComplex& c, const Word& w) {
  TracePath path;
  int at = c.basepoint;
  for (const Letter& l : w) {
    int found = -1;
    for (int d = 0; d < c.dedge_count(); ++d)
      if (c.src(d) == at && c.letter(d) == l) {
        found = d;
        break;
      }
    if (found < 0) return std::nullopt;
    path.dedges.push_back(found);
    at = c.dst(found);
  }
  path.end_vertex = at;
  path.loop_at_basepoint = at == c.basepoint;
  return path;
}

/// Membership side of tracing: some normal form of w traces a loop at the
/// basepoint. Sound on folded complexes; complete once the complex passes the
/// local-isometry check. Returns the member that traced.
inline std::optional<Word> trace_element(const DefiningGraph& g, const LabeledComplex& c,
                                         const Word& w,
                                         std::size_t shuffle_budget = 1u << 20) {
  for (const Word& member : shuffle_class(g, normalize(g, w), shuffle_budget)) {
    auto path = trace_word(c, member);
    if (path && path->loop_at_basepoint) return member;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Simple cycles

struct SimpleCycle {
  std::vector<int> dedges;
  VertexSet label_support;
};

/// All simple cycles of the 1-skeleton: closed edge-paths repeating no vertex
/// except the endpoint. Each undirected cycle is reported once (rotation and
/// inversion identified), anchored at its least vertex, in deterministic
/// order. Throws budget_error past max_cycles.
inline std::vector<SimpleCycle> simple_cycle_supports(const LabeledComplex& c,
                                                      std::size_t max_cycles = 1u << 17) {
  std::vector<SimpleCycle> out;
  std::set<std::vector<int>> seen;  // canonical edge-id sequences

  auto canonical = [](const std::vector<int>& edge_ids) {
    std::vector<int> best = edge_ids;
    size_t n = edge_ids.size();
    for (int dir = 0; dir < 2; ++dir) {
      std::vector<int> cur = edge_ids;
      if (dir) std::reverse(cur.begin(), cur.end());
      for (size_t r = 0; r < n; ++r) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
      }
    }
    return best;
  };

  auto emit = [&](const std::vector<int>& dedges) {
    std::vector<int> ids;
    for (int d : dedges) ids.push_back(LabeledComplex::edge_of(d));
    if (!seen.insert(canonical(ids)).second) return;
    if (seen.size() > max_cycles) throw budget_error("simple cycle enumeration exceeds budget");
    SimpleCycle cycle;
    cycle.dedges = dedges;
    cycle.label_support = support(c.path_label(dedges));
    out.push_back(cycle);
  };

  // Self-loops first.
  for (size_t e = 0; e < c.edges.size(); ++e)
    if (c.edges[e].from == c.edges[e].to) emit({static_cast<int>(2 * e)});

  // Cycles anchored at their least vertex s; interior vertices all exceed s.
  for (int s = 0; s < c.vertex_count; ++s) {
    std::vector<int> stack;
    std::vector<char> used(c.vertex_count, 0);
    auto dfs = [&](auto&& self, int at) -> void {
      for (int d = 0; d < c.dedge_count(); ++d) {
        if (c.src(d) != at) continue;
        int to = c.dst(d);
        if (to == s) {
          if (stack.size() >= 1) {
            // Length-2 closures must use two distinct undirected edges.
            if (stack.size() == 1 &&
                LabeledComplex::edge_of(stack[0]) == LabeledComplex::edge_of(d))
              continue;
            std::vector<int> cycle = stack;
            cycle.push_back(d);
            emit(cycle);
          }
          continue;
        }
        if (to <= s || used[to] || to == at) continue;
        used[to] = 1;
        stack.push_back(d);
        self(self, to);
        stack.pop_back();
        used[to] = 0;
      }
    };
    dfs(dfs, s);
  }
  return out;
}

struct LoxodromicScan {
  bool pure = false;
  int cycles_checked = 0;
  std::optional<SimpleCycle> witness;
  std::optional<JoinCover> witness_cover;
};

/// Looks for a simple cycle whose label is a nontrivial join word. On a
/// complex passing the local-isometry check with pi_1-image H, such a cycle
/// exists iff H contains a nontrivial non-loxodromic element. Cycles whose
/// label is trivial in the group (square boundaries and their kin) are not
/// witnesses and are skipped.
inline LoxodromicScan purely_loxodromic_scan(const DefiningGraph& g, const LabeledComplex& c,
                                             std::size_t max_cycles = 1u << 17) {
  LoxodromicScan scan;
  for (const SimpleCycle& cycle : simple_cycle_supports(c, max_cycles)) {
    ++scan.cycles_checked;
    auto cover = join_cover(g, cycle.label_support);
    if (!cover) continue;
    if (normalize(g, c.path_label(cycle.dedges)).empty()) continue;
    scan.witness = cycle;
    scan.witness_cover = cover;
    return scan;
  }
  scan.pure = true;
  return scan;
}

// ---------------------------------------------------------------------------
// Canonical form and serialization

/// Renames vertices by breadth-first discovery from the basepoint, exploring
/// germs in signed-label order, and sorts edges and squares. Two folded
/// complexes are label-isomorphic iff their canonical forms are identical.
inline LabeledComplex canonical_form(const LabeledComplex& c) {
  std::vector<int> order(c.vertex_count, -1);
  int next_id = 0;
  std::vector<int> queue{c.basepoint};
  order[c.basepoint] = next_id++;
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    std::vector<std::pair<Letter, int>> germs;
    for (int d = 0; d < c.dedge_count(); ++d)
      if (c.src(d) == v) germs.emplace_back(c.letter(d), c.dst(d));
    std::sort(germs.begin(), germs.end());
    for (auto& [l, to] : germs)
      if (order[to] < 0) {
        order[to] = next_id++;
        queue.push_back(to);
      }
  }
  for (int v = 0; v < c.vertex_count; ++v)
    if (order[v] < 0) order[v] = next_id++;  // unreachable vertices keep relative order

  LabeledComplex out;
  out.vertex_count = c.vertex_count;
  out.basepoint = order[c.basepoint];

  // Orientations are part of the structure; only vertices are renamed.
  std::vector<std::pair<LabeledComplex::Edge, int>> renamed;
  for (size_t e = 0; e < c.edges.size(); ++e)
    renamed.push_back(
        {{order[c.edges[e].from], order[c.edges[e].to], c.edges[e].label},
         static_cast<int>(e)});
  std::stable_sort(renamed.begin(), renamed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.from, a.first.to, a.first.label) <
           std::tie(b.first.from, b.first.to, b.first.label);
  });
  std::vector<int> dedge_map(c.dedge_count());
  for (size_t i = 0; i < renamed.size(); ++i) {
    out.edges.push_back(renamed[i].first);
    dedge_map[2 * renamed[i].second] = 2 * static_cast<int>(i);
    dedge_map[2 * renamed[i].second + 1] = 2 * static_cast<int>(i) + 1;
  }
  for (const auto& s : c.squares)
    out.add_square({dedge_map[s[0]], dedge_map[s[1]], dedge_map[s[2]], dedge_map[s[3]]});
  std::sort(out.squares.begin(), out.squares.end());
  return out;
}

inline bool label_isomorphic(const LabeledComplex& a, const LabeledComplex& b) {
  LabeledComplex ca = canonical_form(a);
  LabeledComplex cb = canonical_form(b);
  if (ca.vertex_count != cb.vertex_count || ca.basepoint != cb.basepoint) return false;
  if (ca.squares != cb.squares) return false;
  if (ca.edges.size() != cb.edges.size()) return false;
  for (size_t i = 0; i < ca.edges.size(); ++i)
    if (std::tie(ca.edges[i].from, ca.edges[i].to, ca.edges[i].label) !=
        std::tie(cb.edges[i].from, cb.edges[i].to, cb.edges[i].label))
      return false;
  return true;
}

/// Text form, sections: vertex, dedge, square, basepoint. Edge k's positive
/// direction is written `ek+`, its inverse `ek-`.
inline std::string complex_to_string(const DefiningGraph& g, const LabeledComplex& c) {
  std::ostringstream out;
  for (int v = 0; v < c.vertex_count; ++v) out << "vertex v" << v << "\n";
  for (const auto& e : c.edges)
    out << "dedge v" << e.from << " v" << e.to << " " << g.name(e.label) << "\n";
  for (const auto& s : c.squares) {
    out << "square";
    for (int d : s) out << " e" << LabeledComplex::edge_of(d) << (c.positive(d) ? "+" : "-");
    out << "\n";
  }
  out << "basepoint v" << c.basepoint << "\n";
  return out.str();
}

/// Structural invariants: edges in range, squares closed with distinct
/// commuting label pairs, everything connected to the basepoint.
inline void validate_complex(const DefiningGraph& g, const LabeledComplex& c);

inline LabeledComplex parse_complex(const DefiningGraph& g, const std::string& text) {
  LabeledComplex c;
  std::map<std::string, int> vertex_ids;
  std::istringstream in(text);
  std::string line;
  auto vertex_id = [&](const std::string& name) {
    auto it = vertex_ids.find(name);
    if (it == vertex_ids.end()) throw input_error("complex refers to unknown vertex " + name);
    return it->second;
  };
  bool saw_basepoint = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;
    if (kind == "vertex") {
      std::string name;
      if (!(fields >> name)) throw input_error("vertex line needs a name");
      if (!vertex_ids.emplace(name, c.vertex_count).second)
        throw input_error("duplicate complex vertex " + name);
      ++c.vertex_count;
    } else if (kind == "dedge") {
      std::string from, to, label;
      if (!(fields >> from >> to >> label)) throw input_error("dedge line needs 3 fields");
      c.edges.push_back({vertex_id(from), vertex_id(to), g.require(label)});
    } else if (kind == "square") {
      std::array<int, 4> s{};
      for (int k = 0; k < 4; ++k) {
        std::string token;
        if (!(fields >> token) || token.size() < 3 || token[0] != 'e')
          throw input_error("square line needs 4 directed edge tokens");
        char dir = token.back();
        int e;
        try {
          e = std::stoi(token.substr(1, token.size() - 2));
        } catch (const std::exception&) {
          throw input_error("bad edge token " + token);
        }
        if (e < 0 || 2 * e >= static_cast<int>(2 * c.edges.size()) ||
            (dir != '+' && dir != '-'))
          throw input_error("bad edge token " + token);
        s[k] = 2 * e + (dir == '-' ? 1 : 0);
      }
      c.squares.push_back(s);
    } else if (kind == "basepoint") {
      std::string name;
      if (!(fields >> name)) throw input_error("basepoint line needs a name");
      c.basepoint = vertex_id(name);
      saw_basepoint = true;
    } else {
      throw input_error("unknown complex line kind '" + kind + "'");
    }
  }
  if (!saw_basepoint) throw input_error("complex is missing a basepoint");
  validate_complex(g, c);
  return c;
}

inline void validate_complex(const DefiningGraph& g, const LabeledComplex& c) {
  if (c.basepoint < 0 || c.basepoint >= c.vertex_count)
    throw input_error("basepoint out of range");
  for (const auto& e : c.edges) {
    if (e.from < 0 || e.from >= c.vertex_count || e.to < 0 || e.to >= c.vertex_count)
      throw input_error("edge endpoint out of range");
    if (e.label < 0 || e.label >= g.vertex_count()) throw input_error("edge label unknown");
  }
  for (const auto& s : c.squares) {
    for (int k = 0; k < 4; ++k) {
      if (s[k] < 0 || s[k] >= c.dedge_count()) throw input_error("square edge out of range");
      if (c.dst(s[k]) != c.src(s[(k + 1) % 4])) throw input_error("square boundary not closed");
    }
    Letter a = c.letter(s[0]), b = c.letter(s[1]);
    if (!(c.letter(s[2]) == a.inverse()) || !(c.letter(s[3]) == b.inverse()))
      throw input_error("square boundary is not a commutator");
    if (a.v == b.v || !g.adjacent(a.v, b.v))
      throw input_error("square labels do not commute");
  }
  // Connectivity from the basepoint.
  std::vector<char> seen(c.vertex_count, 0);
  std::vector<int> stack{c.basepoint};
  seen[c.basepoint] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& e : c.edges)
      for (int u : {e.from, e.to})
        if ((e.from == v || e.to == v) && !seen[u]) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
  }
  if (reached != c.vertex_count) throw input_error("complex is not connected");
}

// ---------------------------------------------------------------------------
// Spanning tree and basis loops

/// Labels of the free basis of pi_1 of the 1-skeleton: one loop per non-tree
/// edge, through a breadth-first spanning tree from the basepoint.
/// Deterministic; ordered by edge index.
inline std::vector<std::pair<int, Word>> basis_loops(const LabeledComplex& c) {
  std::vector<int> parent_dedge(c.vertex_count, -1);
  std::vector<char> in_tree_edge(c.edges.size(), 0);
  std::vector<char> visited(c.vertex_count, 0);
  std::vector<int> queue{c.basepoint};
  visited[c.basepoint] = 1;
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int d = 0; d < c.dedge_count(); ++d) {
      if (c.src(d) != v || visited[c.dst(d)]) continue;
      visited[c.dst(d)] = 1;
      parent_dedge[c.dst(d)] = d;
      in_tree_edge[LabeledComplex::edge_of(d)] = 1;
      queue.push_back(c.dst(d));
    }
  }
  auto path_from_base = [&](int v) {
    std::vector<int> dedges;
    while (v != c.basepoint) {
      dedges.push_back(parent_dedge[v]);
      v = c.src(parent_dedge[v]);
    }
    std::reverse(dedges.begin(), dedges.end());
    return dedges;
  };
  std::vector<std::pair<int, Word>> out;
  for (size_t e = 0; e < c.edges.size(); ++e) {
    if (in_tree_edge[e]) continue;
    Word label;
    for (int d : path_from_base(c.edges[e].from)) label.push_back(c.letter(d));
    label.push_back(c.letter(static_cast<int>(2 * e)));
    Word back;
    for (int d : path_from_base(c.edges[e].to)) back.push_back(c.letter(d));
    Word back_inv = inverse(back);
    label.insert(label.end(), back_inv.begin(), back_inv.end());
    out.emplace_back(static_cast<int>(e), label);
  }
  return out;
}

}  // namespace raag
