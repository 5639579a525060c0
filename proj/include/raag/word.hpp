#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "raag/graph.hpp"

namespace raag {

/// One signed generator occurrence. Ordering is (vertex, sign) with the
/// inverse letter before the positive one; this fixes every lexicographic
/// tie-break in the library.
struct Letter {
  Vertex v = 0;
  int sign = 1;  // +1 or -1

  Letter inverse() const { return Letter{v, -sign}; }
  bool operator==(const Letter&) const = default;
  bool operator<(const Letter& o) const {
    if (v != o.v) return v < o.v;
    return sign < o.sign;
  }
};

using Word = std::vector<Letter>;

inline Word inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Word power(const Word& w, int n) {
  Word out;
  Word base = n >= 0 ? w : inverse(w);
  for (int i = 0; i < std::abs(n); ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

inline VertexSet support(const Word& w) {
  VertexSet s;
  for (const Letter& l : w) s.add(l.v);
  return s;
}

inline void check_word(const DefiningGraph& g, const Word& w) {
  for (const Letter& l : w) {
    if (l.v < 0 || l.v >= g.vertex_count()) throw input_error("letter outside the graph");
    if (l.sign != 1 && l.sign != -1) throw input_error("letter sign must be +1 or -1");
  }
}

inline bool word_less(const Word& a, const Word& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Letter& x, const Letter& y) { return x < y; });
}

// ---------------------------------------------------------------------------
// Normal form

/// Cancels adjacent inverse pairs until none remain.
inline Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const Letter& l : w) {
    if (!out.empty() && out.back().v == l.v && out.back().sign == -l.sign)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

namespace detail {

// Leftmost pair (i, j) with w[i] = x^e, w[j] = x^-e and every letter strictly
// between commuting with x; {-1,-1} when none. Removing such a pair keeps the
// group element (x slides through the interior) and shortens the word.
inline std::pair<int, int> removable_pair(const DefiningGraph& g, const Word& w) {
  int n = static_cast<int>(w.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (w[j].v == w[i].v && w[j].sign == -w[i].sign) return {i, j};
      if (!g.commutes(w[i].v, w[j].v)) break;
    }
  }
  return {-1, -1};
}

}  // namespace detail

/// Rewrites w into the normal form: freely reduced with no subword
/// x^e u x^-e where x commutes with every letter of u. Each step removes a
/// pair, so this terminates; the result represents the same group element.
inline Word normalize(const DefiningGraph& g, const Word& w) {
  check_word(g, w);
  Word cur = free_reduce(w);
  for (;;) {
    auto [i, j] = detail::removable_pair(g, cur);
    if (i < 0) return cur;
    cur.erase(cur.begin() + j);
    cur.erase(cur.begin() + i);
    cur = free_reduce(cur);
  }
}

inline bool is_freely_reduced(const Word& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].v == w[i + 1].v && w[i].sign == -w[i + 1].sign) return false;
  return true;
}

inline bool is_normal_form(const DefiningGraph& g, const Word& w) {
  return is_freely_reduced(w) && detail::removable_pair(g, w).first < 0;
}

inline bool are_equal(const DefiningGraph& g, const Word& u, const Word& v) {
  return normalize(g, concat(u, inverse(v))).empty();
}

// ---------------------------------------------------------------------------
// Shuffle classes

/// All normal forms of the element of nf: the closure of nf under swapping
/// adjacent commuting letters. Sorted lexicographically. Throws budget_error
/// if the class would exceed max_size.
inline std::vector<Word> shuffle_class(const DefiningGraph& g, const Word& nf,
                                       std::size_t max_size = 1u << 20) {
  check_word(g, nf);
  std::set<Word, bool (*)(const Word&, const Word&)> seen(word_less);
  std::vector<Word> queue{nf};
  seen.insert(nf);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Word cur = queue[head];
    for (size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i].v == cur[i + 1].v || !g.adjacent(cur[i].v, cur[i + 1].v)) continue;
      std::swap(cur[i], cur[i + 1]);
      if (seen.insert(cur).second) {
        if (seen.size() > max_size) throw budget_error("shuffle class exceeds budget");
        queue.push_back(cur);
      }
      std::swap(cur[i], cur[i + 1]);
    }
  }
  return {seen.begin(), seen.end()};
}

/// Lexicographically least linearization of the commutation class of w,
/// computed greedily without materializing the class. Used as the canonical
/// representative and as a memoization key.
inline Word canonical_word(const DefiningGraph& g, const Word& w) {
  Word rest = w;
  Word out;
  out.reserve(w.size());
  while (!rest.empty()) {
    int best = -1;
    for (int j = 0; j < static_cast<int>(rest.size()); ++j) {
      bool movable = true;
      for (int i = 0; i < j; ++i)
        if (!g.commutes(rest[i].v, rest[j].v)) {
          movable = false;
          break;
        }
      if (movable && (best < 0 || rest[j] < rest[best])) best = j;
    }
    out.push_back(rest[best]);
    rest.erase(rest.begin() + best);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cyclic reduction

struct CyclicNormalForm {
  Word core;        // every cyclic permutation is a normal form
  Word conjugator;  // conjugator * core * conjugator^-1 equals the input
};

inline Word rotate_left(const Word& w, size_t k) {
  Word out(w.begin() + k, w.end());
  out.insert(out.end(), w.begin(), w.begin() + k);
  return out;
}

inline bool is_cyclically_reduced(const DefiningGraph& g, const Word& w) {
  for (size_t k = 0; k < std::max<size_t>(w.size(), 1); ++k)
    if (!is_normal_form(g, rotate_left(w, k))) return false;
  return true;
}

/// Conjugates w down to a cyclically reduced normal form. While some rotation
/// of the running word admits a rewrite, that rotation is a conjugate by the
/// rotated-away prefix; normalizing it strictly shortens the word.
inline CyclicNormalForm cyclic_reduce(const DefiningGraph& g, const Word& w) {
  Word cur = normalize(g, w);
  Word conj;
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t k = 0; k < cur.size(); ++k) {
      Word rot = rotate_left(cur, k);
      if (!is_normal_form(g, rot)) {
        conj.insert(conj.end(), cur.begin(), cur.begin() + k);
        cur = normalize(g, rot);
        progress = true;
        break;
      }
    }
  }
  return CyclicNormalForm{cur, normalize(g, conj)};
}

// ---------------------------------------------------------------------------
// Text form: whitespace-separated tokens `name`, `name^-1`, `name^k`
// (exponents expand letterwise).

inline Word parse_word(const DefiningGraph& g, std::string_view text) {
  Word out;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  for (skip_ws(); pos < text.size(); skip_ws()) {
    size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view token = text.substr(pos, end - pos);
    pos = end;
    long exp = 1;
    std::string_view name = token;
    if (auto caret = token.find('^'); caret != std::string_view::npos) {
      name = token.substr(0, caret);
      std::string digits(token.substr(caret + 1));
      try {
        size_t used = 0;
        exp = std::stol(digits, &used);
        if (used != digits.size()) throw std::invalid_argument(digits);
      } catch (const std::exception&) {
        throw input_error("bad exponent in token '" + std::string(token) + "'");
      }
    }
    Vertex v = g.require(name);
    for (long i = 0; i < std::labs(exp); ++i) out.push_back(Letter{v, exp < 0 ? -1 : 1});
  }
  return out;
}

inline std::string word_to_string(const DefiningGraph& g, const Word& w) {
  std::string out;
  for (const Letter& l : w) {
    if (!out.empty()) out += ' ';
    out += g.name(l.v);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

}  // namespace raag
