#pragma once

#include <deque>
#include <string>
#include <vector>

#include "raag/word.hpp"

namespace raag {

/// One commutator relator v_i v_j v_i^-1 v_j^-1 per edge of the graph,
/// in edge order.
inline std::vector<Word> raag_relators(const DefiningGraph& g) {
  std::vector<Word> out;
  for (auto [a, b] : g.edges())
    out.push_back({Letter{a, 1}, Letter{b, 1}, Letter{a, -1}, Letter{b, -1}});
  return out;
}

/// Partial right-action table for the cosets of a subgroup. Columns are the
/// signed generators (2v for v, 2v+1 for v^-1); -1 marks undefined. Coset 0
/// is the subgroup itself (printed 1-based as coset 1). Dead cosets forward
/// to their survivor; enumeration state is kept so a run can resume.
struct CosetTable {
  enum class Status { in_progress, complete };

  int ngens = 0;
  std::vector<std::vector<int>> rows;
  std::vector<int> fwd;
  Status status = Status::in_progress;
  long long definitions = 0;  // budget unit: cosets defined so far

  // Cursor: next coset to process, and how far its processing got.
  int cursor_coset = 0;
  int cursor_stage = 0;  // 0 = subgroup generators, 1 = relators, 2 = row fill
  int cursor_item = 0;

  static int column(Letter l) { return 2 * l.v + (l.sign < 0 ? 1 : 0); }
  static int inverse_column(int col) { return col ^ 1; }

  int find(int c) const {
    while (fwd[c] != c) c = fwd[c];
    return c;
  }
  bool alive(int c) const { return fwd[c] == c; }
  int live_count() const {
    int n = 0;
    for (size_t c = 0; c < fwd.size(); ++c) n += alive(static_cast<int>(c));
    return n;
  }
  int entry(int c, int col) const {
    int e = rows[c][col];
    return e < 0 ? -1 : find(e);
  }

  /// Renumbers live cosets 0..n-1 in ascending survivor order.
  std::vector<int> compact_ids() const {
    std::vector<int> id(fwd.size(), -1);
    int next = 0;
    for (size_t c = 0; c < fwd.size(); ++c)
      if (alive(static_cast<int>(c))) id[c] = next++;
    return id;
  }
};

enum class EnumerationStatus { complete, budget_exhausted };

struct EnumerationResult {
  EnumerationStatus status = EnumerationStatus::budget_exhausted;
  int index = 0;  // meaningful when complete
  CosetTable table;
};

namespace detail {

// HLT-style enumerator: process cosets in order; at each, scan and fill every
// relator, then define images for any still-undefined generator columns.
// Coincidences are processed eagerly through a queue.
class CosetEnumerator {
 public:
  CosetEnumerator(const DefiningGraph& g, const std::vector<Word>& gens, CosetTable table)
      : table_(std::move(table)) {
    table_.ngens = g.vertex_count();
    if (table_.rows.empty()) {
      table_.rows.push_back(std::vector<int>(2 * table_.ngens, -1));
      table_.fwd.push_back(0);
    }
    for (const Word& w : gens) {
      check_word(g, w);
      gen_cols_.push_back(columns(w));
    }
    for (const Word& w : raag_relators(g)) rel_cols_.push_back(columns(w));
  }

  EnumerationStatus run(long long max_definitions) {
    budget_ = max_definitions;
    while (table_.cursor_coset < static_cast<int>(table_.rows.size())) {
      int c = table_.cursor_coset;
      if (!table_.alive(c)) {
        advance_cursor();
        continue;
      }
      if (table_.cursor_stage == 0) {
        if (c == 0) {
          while (table_.cursor_item < static_cast<int>(gen_cols_.size())) {
            if (!scan_and_fill(0, gen_cols_[table_.cursor_item]))
              return EnumerationStatus::budget_exhausted;
            ++table_.cursor_item;
          }
        }
        table_.cursor_stage = 1;
        table_.cursor_item = 0;
      }
      if (table_.cursor_stage == 1) {
        while (table_.cursor_item < static_cast<int>(rel_cols_.size())) {
          if (!table_.alive(c)) break;
          if (!scan_and_fill(table_.find(c), rel_cols_[table_.cursor_item]))
            return EnumerationStatus::budget_exhausted;
          ++table_.cursor_item;
        }
        table_.cursor_stage = 2;
        table_.cursor_item = 0;
      }
      while (table_.alive(c) && table_.cursor_item < 2 * table_.ngens) {
        int col = table_.cursor_item;
        if (table_.entry(table_.find(c), col) < 0) {
          if (!define(table_.find(c), col)) return EnumerationStatus::budget_exhausted;
        }
        ++table_.cursor_item;
      }
      advance_cursor();
    }
    table_.status = CosetTable::Status::complete;
    return EnumerationStatus::complete;
  }

  CosetTable take_table() { return std::move(table_); }

 private:
  void advance_cursor() {
    ++table_.cursor_coset;
    table_.cursor_stage = 0;
    table_.cursor_item = 0;
  }

  static std::vector<int> columns(const Word& w) {
    std::vector<int> cols;
    for (const Letter& l : w) cols.push_back(CosetTable::column(l));
    return cols;
  }

  bool define(int c, int col) {
    if (table_.definitions >= budget_) return false;
    ++table_.definitions;
    int d = static_cast<int>(table_.rows.size());
    table_.rows.push_back(std::vector<int>(2 * table_.ngens, -1));
    table_.fwd.push_back(d);
    set_entry(c, col, d);
    process_pending();
    return true;
  }

  // Records c.col = d and d.col^-1 = c, queueing any collision for merging.
  void set_entry(int c, int col, int d) {
    c = table_.find(c);
    d = table_.find(d);
    int& fwd_slot = table_.rows[c][col];
    if (fwd_slot >= 0 && table_.find(fwd_slot) != d)
      pending_.emplace_back(table_.find(fwd_slot), d);
    fwd_slot = d;
    int& rev_slot = table_.rows[d][CosetTable::inverse_column(col)];
    if (rev_slot >= 0 && table_.find(rev_slot) != c)
      pending_.emplace_back(table_.find(rev_slot), c);
    rev_slot = c;
  }

  void process_pending() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.front();
      pending_.pop_front();
      a = table_.find(a);
      b = table_.find(b);
      if (a == b) continue;
      int keep = std::min(a, b);
      int dead = std::max(a, b);
      table_.fwd[dead] = keep;
      for (int col = 0; col < 2 * table_.ngens; ++col) {
        int e = table_.rows[dead][col];
        if (e >= 0) set_entry(keep, col, table_.find(e));
      }
    }
  }

  // Walks word cols from coset a both ways, defining cosets across the gap,
  // and closes with a deduction or coincidence. False when out of budget.
  bool scan_and_fill(int a, const std::vector<int>& cols) {
    int i = 0;
    int j = static_cast<int>(cols.size()) - 1;
    int f = a;
    int b = a;
    for (;;) {
      while (i <= j) {
        int next = table_.entry(f, cols[i]);
        if (next < 0) break;
        f = next;
        ++i;
      }
      if (i > j) {
        if (f != b) {
          pending_.emplace_back(f, b);
          process_pending();
        }
        return true;
      }
      while (j >= i) {
        int next = table_.entry(b, CosetTable::inverse_column(cols[j]));
        if (next < 0) break;
        b = next;
        --j;
      }
      if (j < i) {
        if (f != b) {
          pending_.emplace_back(f, b);
          process_pending();
        }
        return true;
      }
      if (j == i) {
        set_entry(f, cols[i], b);
        process_pending();
        return true;
      }
      if (!define(f, cols[i])) return false;
      // The new coset extends the forward walk on the next pass of the loop.
    }
  }

  CosetTable table_;
  std::vector<std::vector<int>> gen_cols_;
  std::vector<std::vector<int>> rel_cols_;
  std::deque<std::pair<int, int>> pending_;
  long long budget_ = 0;
};

}  // namespace detail

/// Runs (or resumes, when a partial table is supplied) Todd-Coxeter coset
/// enumeration of <gens> in the group of g. Terminates exactly when the index
/// is finite and the definition budget suffices. The budget counts coset
/// definitions cumulatively across resumed runs.
inline EnumerationResult enumerate_cosets(const DefiningGraph& g, const std::vector<Word>& gens,
                                          long long budget,
                                          std::optional<CosetTable> resume_from = std::nullopt) {
  detail::CosetEnumerator enumerator(g, gens,
                                     resume_from ? std::move(*resume_from) : CosetTable{});
  EnumerationResult out;
  out.status = enumerator.run(budget);
  out.table = enumerator.take_table();
  if (out.status == EnumerationStatus::complete) out.index = out.table.live_count();
  return out;
}

/// Independent check of a completed table: total inverse-consistent action,
/// transitive from coset 0, relators close everywhere, subgroup generators
/// close at coset 0. Does not rerun the enumeration.
inline bool validate_table(const DefiningGraph& g, const std::vector<Word>& gens,
                           const CosetTable& table, std::string* why = nullptr) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (table.status != CosetTable::Status::complete) return fail("table not complete");
  std::vector<int> live;
  for (size_t c = 0; c < table.rows.size(); ++c)
    if (table.alive(static_cast<int>(c))) live.push_back(static_cast<int>(c));
  if (live.empty() || table.find(0) != live.front()) return fail("coset for the subgroup lost");
  for (int c : live)
    for (int col = 0; col < 2 * table.ngens; ++col) {
      int d = table.entry(c, col);
      if (d < 0) return fail("action not total");
      if (table.entry(d, CosetTable::inverse_column(col)) != c)
        return fail("action not inverse-consistent");
    }
  // Transitivity.
  std::vector<char> seen(table.rows.size(), 0);
  std::vector<int> stack{table.find(0)};
  seen[table.find(0)] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int col = 0; col < 2 * table.ngens; ++col) {
      int d = table.entry(c, col);
      if (!seen[d]) {
        seen[d] = 1;
        ++reached;
        stack.push_back(d);
      }
    }
  }
  if (reached != live.size()) return fail("action not transitive");
  auto walk = [&](int from, const Word& w) {
    int at = table.find(from);
    for (const Letter& l : w) at = table.entry(at, CosetTable::column(l));
    return at;
  };
  for (const Word& r : raag_relators(g))
    for (int c : live)
      if (walk(c, r) != c) return fail("relator does not close at some coset");
  for (const Word& h : gens)
    if (walk(0, h) != table.find(0)) return fail("subgroup generator does not fix coset 1");
  return true;
}

/// CSV audit dump: one line per (coset, signed generator), cosets renumbered
/// 1-based over live rows.
inline std::string table_to_csv(const DefiningGraph& g, const CosetTable& table) {
  std::string out = "coset,generator,image\n";
  std::vector<int> ids = table.compact_ids();
  for (size_t c = 0; c < table.rows.size(); ++c) {
    if (!table.alive(static_cast<int>(c))) continue;
    for (int v = 0; v < table.ngens; ++v)
      for (int sign : {1, -1}) {
        int d = table.entry(static_cast<int>(c), CosetTable::column(Letter{v, sign}));
        out += std::to_string(ids[c] + 1) + "," + g.name(v) + (sign < 0 ? "^-1" : "") + "," +
               (d < 0 ? std::string("-") : std::to_string(ids[d] + 1)) + "\n";
      }
  }
  return out;
}

}  // namespace raag
