#pragma once

#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "raag/word.hpp"

namespace raag {

enum class ElementKind { identity, elliptic, loxodromic };

/// Loxodromic/elliptic classification of a group element, with the cyclically
/// reduced form it was decided on and, for elliptic elements, a join cover of
/// the core's support.
struct ElementClass {
  ElementKind kind = ElementKind::identity;
  CyclicNormalForm reduced;
  std::optional<JoinCover> witness;  // present iff kind == elliptic
};

/// Decides whether w is loxodromic: nonempty cyclically reduced core whose
/// support fits in no join. Refuses graphs outside the hypotheses (connected,
/// anti-connected, at least two vertices) instead of guessing.
inline ElementClass classify(const DefiningGraph& g, const Word& w) {
  ValidationReport report = validate_graph(g);
  if (!report.classifier_hypotheses())
    throw hypothesis_error(
        "classification requires a connected, anti-connected graph with >= 2 vertices");
  ElementClass out;
  out.reduced = cyclic_reduce(g, w);
  if (out.reduced.core.empty()) {
    out.kind = ElementKind::identity;
    return out;
  }
  out.witness = join_cover(g, support(out.reduced.core));
  out.kind = out.witness ? ElementKind::elliptic : ElementKind::loxodromic;
  return out;
}

/// A star-geodesic decomposition: blocks[i] is a word whose letters all lie
/// in star(star_vertices[i]), and the concatenation equals the input element.
struct StarFactorization {
  std::vector<Word> blocks;
  std::vector<Vertex> star_vertices;
};

struct StarLengthResult {
  int length = 0;
  StarFactorization factorization;
};

namespace detail {

// Largest downward-closed set of occurrences of w whose letters all lie in
// star(v): occurrence j belongs iff its letter does and every non-commuting
// earlier occurrence belongs. Returns the kept flags.
inline std::vector<char> max_star_prefix(const DefiningGraph& g, const Word& w, Vertex v) {
  VertexSet st = g.star(v);
  std::vector<char> in(w.size(), 0);
  for (size_t j = 0; j < w.size(); ++j) {
    if (!st.contains(w[j].v)) continue;
    bool ok = true;
    for (size_t i = 0; i < j; ++i)
      if (!in[i] && !g.commutes(w[i].v, w[j].v)) {
        ok = false;
        break;
      }
    in[j] = ok;
  }
  return in;
}

inline std::uint64_t word_hash(const Word& w) {
  std::uint64_t h = 1469598103934665603ull;
  for (const Letter& l : w) {
    h = (h ^ static_cast<std::uint64_t>(l.v * 2 + (l.sign > 0))) * 1099511628211ull;
  }
  return h;
}

struct WordHash {
  std::uint64_t operator()(const Word& w) const { return word_hash(w); }
};

}  // namespace detail

/// Star length with a witnessing factorization.
///
/// Works on the commutation class of the normal form as a whole: from a
/// suffix state, one move removes the maximal prefix of occurrences lying in
/// one vertex star. Any minimal factorization of a normal form into star
/// blocks can be rewritten block by block to use maximal prefixes without
/// growing, so breadth-first search over these moves is exact. States are
/// keyed by canonical linearization.
inline StarLengthResult star_length(const DefiningGraph& g, const Word& w,
                                    std::size_t state_budget = 1u << 20) {
  Word start = canonical_word(g, normalize(g, w));
  StarLengthResult out;
  if (start.empty()) return out;

  struct Trail {
    Word state;
    int parent;
    Vertex star;
    Word block;
  };
  std::vector<Trail> trail;
  std::unordered_map<Word, int, detail::WordHash> seen;
  trail.push_back({start, -1, -1, {}});
  seen.emplace(start, 0);
  std::deque<int> queue{0};

  int final_index = -1;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    const Word state = trail[cur].state;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      std::vector<char> keep = detail::max_star_prefix(g, state, v);
      Word block, rest;
      for (size_t i = 0; i < state.size(); ++i)
        (keep[i] ? block : rest).push_back(state[i]);
      if (block.empty()) continue;
      Word next = canonical_word(g, rest);
      if (seen.count(next)) continue;
      if (seen.size() >= state_budget) throw budget_error("star length search exceeds budget");
      trail.push_back({next, cur, v, block});
      seen.emplace(next, static_cast<int>(trail.size()) - 1);
      if (next.empty()) {
        final_index = static_cast<int>(trail.size()) - 1;
        break;
      }
      queue.push_back(static_cast<int>(trail.size()) - 1);
    }
    if (final_index >= 0) break;
  }
  if (final_index < 0) throw budget_error("star length search did not converge");

  for (int i = final_index; trail[i].parent >= 0; i = trail[i].parent) {
    out.factorization.blocks.insert(out.factorization.blocks.begin(), trail[i].block);
    out.factorization.star_vertices.insert(out.factorization.star_vertices.begin(),
                                           trail[i].star);
  }
  out.length = static_cast<int>(out.factorization.blocks.size());
  return out;
}

/// Star distance d_*(u, v) = |u^-1 v|_*.
inline int star_distance(const DefiningGraph& g, const Word& u, const Word& v,
                         std::size_t state_budget = 1u << 20) {
  return star_length(g, concat(inverse(u), v), state_budget).length;
}

/// Star lengths of w^1 .. w^nmax. Loxodromic elements have unbounded growth,
/// elliptic ones bounded; useful as an independent check on classify.
inline std::vector<int> growth_probe(const DefiningGraph& g, const Word& w, int nmax,
                                     std::size_t state_budget = 1u << 20) {
  std::vector<int> out;
  for (int n = 1; n <= nmax; ++n)
    out.push_back(star_length(g, power(w, n), state_budget).length);
  return out;
}

}  // namespace raag
