#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "raag/certificates.hpp"

namespace raag {

namespace detail {

/// Length-lex enumeration of formal products over the signed generators:
/// digit 2i is generator i, digit 2i+1 its inverse. Starts at the empty
/// product. Shared by the deciders and the certificate verifier so searches
/// replay identically.
class ProductEnumerator {
 public:
  explicit ProductEnumerator(int gen_count) : base_(2 * gen_count) {}

  GensExpression current() const {
    GensExpression out;
    for (int d : digits_) out.emplace_back(d / 2, d % 2 ? -1 : 1);
    return out;
  }

  size_t length() const { return digits_.size(); }

  /// Advances to the next product; false when the alphabet is empty.
  bool next() {
    if (base_ == 0) return false;
    for (int i = static_cast<int>(digits_.size()) - 1; i >= 0; --i) {
      if (++digits_[i] < base_) return true;
      digits_[i] = 0;
    }
    digits_.assign(digits_.size() + 1, 0);
    return true;
  }

 private:
  int base_;
  std::vector<int> digits_;
};

}  // namespace detail

enum class DeciderStatus { decided, budget_exhausted };

struct StabilityOutcome {
  DeciderStatus status = DeciderStatus::budget_exhausted;
  std::optional<StabilityCertificate> certificate;
  long long units_used = 0;
};

/// Interleaved stability decision, resumable by budget slices.
///
/// Side A enumerates products of the generators in length-lex order and
/// classifies each (one unit per classification); the first nontrivial
/// elliptic product settles not_stable. Side B grows a square complex from
/// the rose on the generators by corner completion, then verifies it
/// (generators trace, 1-skeleton basis loops are products of generators) and
/// runs the simple-cycle join-word scan; a pure scan settles stable, a
/// witness cycle settles not_stable once expressed in the generators. The
/// schedule is a fixed round-robin: up to 1000 side-A classifications, then
/// one side-B step, each unit counted against the budget.
class StabilityRun {
 public:
  StabilityRun(const DefiningGraph& g, std::vector<Word> gens)
      : graph_(&g), gens_(std::move(gens)), products_(static_cast<int>(gens_.size())) {
    if (!validate_graph(g).classifier_hypotheses())
      throw hypothesis_error(
          "stability decision requires a connected, anti-connected graph with >= 2 vertices");
    for (const Word& w : gens_) check_word(g, w);
    std::vector<Word> rose_gens;
    for (const Word& w : gens_)
      if (!w.empty()) rose_gens.push_back(w);
    if (rose_gens.empty()) {
      // Trivial subgroup: a point complex certifies it stable outright.
      complex_.vertex_count = 1;
      complex_.basepoint = 0;
      finish_stable();
    } else {
      complex_ = fold(rose(g, rose_gens));
    }
  }

  /// Runs at most `units` further budget units; true once decided.
  bool advance(long long units) {
    long long stop = units_used_ + units;
    while (!certificate_ && units_used_ < stop) {
      long long quota = std::min<long long>(1000, stop - units_used_);
      if (side_a(quota)) break;
      if (units_used_ >= stop || certificate_) break;
      side_b();
    }
    return certificate_.has_value();
  }

  const std::optional<StabilityCertificate>& certificate() const { return certificate_; }
  long long units_used() const { return units_used_; }

 private:
  enum class Phase { saturating, tracing, expressing, scanning, witness, stuck, done };

  // Classifies up to `quota` products. True when a verdict landed.
  bool side_a(long long quota) {
    for (long long i = 0; i < quota; ++i) {
      if (!products_.next()) return false;
      if (products_.length() == 0 && !products_.next()) return false;
      ++units_used_;
      GensExpression expr = products_.current();
      Word word = expand_expression(gens_, expr);
      ElementClass cls = classify(*graph_, word);
      if (cls.kind == ElementKind::elliptic) {
        finish_not_stable(std::move(expr), std::move(word), std::move(cls));
        return true;
      }
    }
    return false;
  }

  // One unit of side-B work.
  void side_b() {
    ++units_used_;
    switch (phase_) {
      case Phase::saturating: {
        IsometryReport report = check_local_isometry(*graph_, complex_);
        if (report.passes()) {
          phase_ = Phase::tracing;
          return;
        }
        complex_ = complete_squares_step(*graph_, complex_);
        return;
      }
      case Phase::tracing: {
        if (trace_index_ >= gens_.size()) {
          basis_ = basis_loops(complex_);
          phase_ = Phase::expressing;
          return;
        }
        try {
          auto member = trace_element(*graph_, complex_, gens_[trace_index_]);
          if (!member) {
            phase_ = Phase::stuck;
            return;
          }
          traced_.push_back(*member);
          ++trace_index_;
        } catch (const budget_error&) {
          phase_ = Phase::stuck;
        }
        return;
      }
      case Phase::expressing: {
        if (basis_index_ >= basis_.size()) {
          phase_ = Phase::scanning;
          return;
        }
        const Word& target = basis_[basis_index_].second;
        for (int tries = 0; tries < kSearchBatch; ++tries) {
          GensExpression expr = search_.current();
          if (are_equal(*graph_, expand_expression(gens_, expr), target)) {
            basis_expressions_.emplace_back(basis_[basis_index_].first, std::move(expr));
            ++basis_index_;
            search_ = detail::ProductEnumerator(static_cast<int>(gens_.size()));
            return;
          }
          if (!search_.next()) {
            phase_ = Phase::stuck;
            return;
          }
        }
        return;
      }
      case Phase::scanning: {
        try {
          scan_ = purely_loxodromic_scan(*graph_, complex_);
        } catch (const budget_error&) {
          phase_ = Phase::stuck;
          return;
        }
        if (scan_->pure) {
          finish_stable();
          return;
        }
        // A witness cycle names a nontrivial elliptic element of the image;
        // express it in the generators, then report not_stable.
        witness_word_ = witness_element();
        search_ = detail::ProductEnumerator(static_cast<int>(gens_.size()));
        phase_ = Phase::witness;
        return;
      }
      case Phase::witness: {
        for (int tries = 0; tries < kSearchBatch; ++tries) {
          GensExpression expr = search_.current();
          Word word = expand_expression(gens_, expr);
          if (are_equal(*graph_, word, witness_word_)) {
            finish_not_stable(expr, word, classify(*graph_, word));
            return;
          }
          if (!search_.next()) {
            phase_ = Phase::stuck;
            return;
          }
        }
        return;
      }
      case Phase::stuck:
      case Phase::done:
        return;
    }
  }

  // Conjugates the scan's witness cycle to the basepoint along the spanning
  // tree used for basis loops.
  Word witness_element() const {
    int start = complex_.src(scan_->witness->dedges.front());
    // Breadth-first tree path from the basepoint, mirroring basis_loops.
    std::vector<int> parent_dedge(complex_.vertex_count, -1);
    std::vector<char> visited(complex_.vertex_count, 0);
    std::vector<int> queue{complex_.basepoint};
    visited[complex_.basepoint] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int d = 0; d < complex_.dedge_count(); ++d)
        if (complex_.src(d) == v && !visited[complex_.dst(d)]) {
          visited[complex_.dst(d)] = 1;
          parent_dedge[complex_.dst(d)] = d;
          queue.push_back(complex_.dst(d));
        }
    }
    std::vector<int> path;
    for (int v = start; v != complex_.basepoint; v = complex_.src(parent_dedge[v]))
      path.push_back(parent_dedge[v]);
    std::reverse(path.begin(), path.end());
    Word u = complex_.path_label(path);
    Word cycle = complex_.path_label(scan_->witness->dedges);
    return concat(concat(u, cycle), inverse(u));
  }

  void finish_not_stable(GensExpression expr, Word word, ElementClass cls) {
    EllipticWitness w;
    w.expression = std::move(expr);
    w.word = std::move(word);
    w.core = cls.reduced.core;
    w.conjugator = cls.reduced.conjugator;
    w.cover = *cls.witness;
    StabilityCertificate cert;
    cert.verdict = StabilityCertificate::Verdict::not_stable;
    cert.elliptic = std::move(w);
    certificate_ = std::move(cert);
    phase_ = Phase::done;
  }

  void finish_stable() {
    PureComplexEvidence e;
    e.complex = complex_;
    e.isometry = check_local_isometry(*graph_, complex_);
    if (traced_.size() < gens_.size()) {
      // Point-complex path: every generator is trivial and traces as the
      // empty loop.
      traced_.clear();
      for (size_t i = 0; i < gens_.size(); ++i) traced_.push_back(Word{});
    }
    e.traced = traced_;
    e.basis = basis_expressions_;
    e.cycles_checked = scan_ ? scan_->cycles_checked : 0;
    StabilityCertificate cert;
    cert.verdict = StabilityCertificate::Verdict::stable;
    cert.complex = std::move(e);
    certificate_ = std::move(cert);
    phase_ = Phase::done;
  }

  static constexpr int kSearchBatch = 64;

  const DefiningGraph* graph_;
  std::vector<Word> gens_;
  detail::ProductEnumerator products_;
  long long units_used_ = 0;

  LabeledComplex complex_;
  Phase phase_ = Phase::saturating;
  size_t trace_index_ = 0;
  std::vector<Word> traced_;
  std::vector<std::pair<int, Word>> basis_;
  size_t basis_index_ = 0;
  std::vector<std::pair<int, GensExpression>> basis_expressions_;
  detail::ProductEnumerator search_{0};
  std::optional<LoxodromicScan> scan_;
  Word witness_word_;

  std::optional<StabilityCertificate> certificate_;
};

inline StabilityOutcome decide_stability(const DefiningGraph& g, const std::vector<Word>& gens,
                                         long long budget) {
  StabilityRun run(g, gens);
  StabilityOutcome out;
  out.status = run.advance(budget) ? DeciderStatus::decided : DeciderStatus::budget_exhausted;
  out.certificate = run.certificate();
  out.units_used = run.units_used();
  return out;
}

struct MorseOutcome {
  DeciderStatus status = DeciderStatus::budget_exhausted;
  std::optional<MorseCertificate> certificate;
  long long units_used = 0;
};

/// Morse semi-decision: decide stability first; stable means Morse. If not
/// stable, keep running coset enumeration (one unit per coset definition);
/// completion means finite index, hence Morse. Runs out of budget on
/// subgroups that are neither, mirroring a procedure that would not halt.
class MorseRun {
 public:
  MorseRun(const DefiningGraph& g, std::vector<Word> gens)
      : graph_(&g), gens_(std::move(gens)), stability_(g, gens_) {}

  bool advance(long long units) {
    long long stop = units_used() + units;
    if (!stability_done_) {
      stability_.advance(stop - stability_.units_used());
      if (!stability_.certificate()) return false;
      stability_done_ = true;
      if (stability_.certificate()->verdict == StabilityCertificate::Verdict::stable) {
        MorseCertificate cert;
        cert.route = MorseCertificate::Route::via_stable;
        cert.stability = *stability_.certificate();
        certificate_ = std::move(cert);
        return true;
      }
    }
    if (certificate_) return true;
    long long remaining = stop - units_used();
    if (remaining <= 0) return false;
    long long target = (table_ ? table_->definitions : 0) + remaining;
    EnumerationResult result = enumerate_cosets(
        *graph_, gens_, target, table_ ? std::optional<CosetTable>(std::move(*table_)) : std::nullopt);
    table_ = std::move(result.table);
    if (result.status == EnumerationStatus::complete) {
      MorseCertificate cert;
      cert.route = MorseCertificate::Route::via_finite_index;
      cert.table = compact_table(*table_);
      cert.index = result.index;
      certificate_ = std::move(cert);
      return true;
    }
    return false;
  }

  const std::optional<MorseCertificate>& certificate() const { return certificate_; }
  long long units_used() const {
    return stability_.units_used() + (table_ ? table_->definitions : 0);
  }

 private:
  const DefiningGraph* graph_;
  std::vector<Word> gens_;
  StabilityRun stability_;
  bool stability_done_ = false;
  std::optional<CosetTable> table_;
  std::optional<MorseCertificate> certificate_;
};

inline MorseOutcome semidecide_morse(const DefiningGraph& g, const std::vector<Word>& gens,
                                     long long budget) {
  MorseRun run(g, gens);
  MorseOutcome out;
  out.status = run.advance(budget) ? DeciderStatus::decided : DeciderStatus::budget_exhausted;
  out.certificate = run.certificate();
  out.units_used = run.units_used();
  return out;
}

// ---------------------------------------------------------------------------
// Certificate verification: every claim is re-derived from the graph, word,
// complex and coset primitives; stored values must match the deterministic
// recomputation exactly.

struct VerifyResult {
  bool ok = false;
  std::string reason;  // first failing check when !ok
};

namespace detail {

inline VerifyResult verify_fail(const std::string& reason) { return {false, reason}; }

// Replays the deterministic product search: the expression must be exactly
// the first product (in length-lex order) equal to the target.
inline bool expression_is_first_match(const DefiningGraph& g, const std::vector<Word>& gens,
                                      const GensExpression& expr, const Word& target) {
  Word expansion;
  try {
    expansion = expand_expression(gens, expr);
  } catch (const input_error&) {
    return false;
  }
  if (!are_equal(g, expansion, target)) return false;
  ProductEnumerator search(static_cast<int>(gens.size()));
  for (;;) {
    GensExpression cur = search.current();
    if (cur == expr) return true;
    if (are_equal(g, expand_expression(gens, cur), target)) return false;
    if (!search.next()) return false;
  }
}

}  // namespace detail

inline VerifyResult verify_stability_certificate(const DefiningGraph& g,
                                                 const std::vector<Word>& gens,
                                                 const StabilityCertificate& cert) {
  using detail::verify_fail;
  if (!validate_graph(g).classifier_hypotheses())
    return verify_fail("graph fails the classifier hypotheses");
  if (cert.verdict == StabilityCertificate::Verdict::not_stable) {
    if (!cert.elliptic) return verify_fail("not_stable certificate lacks a witness");
    const EllipticWitness& w = *cert.elliptic;
    Word expansion;
    try {
      expansion = expand_expression(gens, w.expression);
    } catch (const input_error& e) {
      return verify_fail(e.what());
    }
    if (expansion != w.word) return verify_fail("witness word is not the stated product");
    CyclicNormalForm reduced = cyclic_reduce(g, w.word);
    if (reduced.core != w.core) return verify_fail("stated core mismatches cyclic reduction");
    if (reduced.conjugator != w.conjugator) return verify_fail("stated conjugator mismatches");
    if (w.core.empty()) return verify_fail("witness reduces to the identity");
    if (!is_cyclically_reduced(g, w.core)) return verify_fail("core is not cyclically reduced");
    if (!are_equal(g, concat(concat(w.conjugator, w.core), inverse(w.conjugator)), w.word))
      return verify_fail("conjugator does not carry the core back to the witness");
    if (!w.cover.valid(g)) return verify_fail("join cover violates its invariants");
    if (!w.cover.covers(support(w.core))) return verify_fail("join cover misses the support");
    auto recomputed = join_cover(g, support(w.core));
    if (!recomputed || !(*recomputed == w.cover))
      return verify_fail("join cover is not the canonical one");
    return {true, ""};
  }

  if (!cert.complex) return verify_fail("stable certificate lacks a complex");
  const PureComplexEvidence& e = *cert.complex;
  try {
    validate_complex(g, e.complex);
  } catch (const input_error& err) {
    return verify_fail(err.what());
  }
  IsometryReport report = check_local_isometry(g, e.complex);
  if (!report.passes()) return verify_fail("complex fails the local isometry check");
  if (e.isometry.folded != report.folded || !e.isometry.missing_squares.empty() ||
      !e.isometry.duplicate_squares.empty())
    return verify_fail("stored isometry report mismatches recomputation");
  if (e.traced.size() != gens.size())
    return verify_fail("tracing evidence does not cover every generator");
  for (size_t i = 0; i < gens.size(); ++i) {
    std::optional<Word> member;
    try {
      member = trace_element(g, e.complex, gens[i]);
    } catch (const budget_error& err) {
      return verify_fail(err.what());
    }
    if (!member) return verify_fail("generator does not trace a loop");
    if (*member != e.traced[i]) return verify_fail("traced word is not the canonical member");
  }
  std::vector<std::pair<int, Word>> basis = basis_loops(e.complex);
  if (basis.size() != e.basis.size())
    return verify_fail("basis loop evidence has the wrong count");
  for (size_t i = 0; i < basis.size(); ++i) {
    if (e.basis[i].first != basis[i].first)
      return verify_fail("basis loop evidence names the wrong edge");
    if (!detail::expression_is_first_match(g, gens, e.basis[i].second, basis[i].second))
      return verify_fail("basis loop expression fails to replay");
  }
  LoxodromicScan scan;
  try {
    scan = purely_loxodromic_scan(g, e.complex);
  } catch (const budget_error& err) {
    return verify_fail(err.what());
  }
  if (!scan.pure) return verify_fail("scan finds a join-word cycle");
  if (scan.cycles_checked != e.cycles_checked)
    return verify_fail("stored cycle count mismatches the scan");
  return {true, ""};
}

inline VerifyResult verify_morse_certificate(const DefiningGraph& g,
                                             const std::vector<Word>& gens,
                                             const MorseCertificate& cert) {
  using detail::verify_fail;
  if (cert.route == MorseCertificate::Route::via_stable) {
    if (!cert.stability) return verify_fail("via_stable route lacks a stability certificate");
    if (cert.stability->verdict != StabilityCertificate::Verdict::stable)
      return verify_fail("via_stable route carries a non-stable certificate");
    return verify_stability_certificate(g, gens, *cert.stability);
  }
  if (!cert.table) return verify_fail("via_finite_index route lacks a table");
  if (cert.table->ngens != g.vertex_count())
    return verify_fail("coset table generator count mismatches the graph");
  std::string why;
  if (!validate_table(g, gens, *cert.table, &why)) return verify_fail("coset table: " + why);
  if (cert.index != cert.table->live_count())
    return verify_fail("stated index mismatches the table");
  return {true, ""};
}

}  // namespace raag
