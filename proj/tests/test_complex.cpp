#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "oracles.hpp"
#include "raag/raag.hpp"

using namespace raag;

namespace {

const DefiningGraph& c5() {
  static DefiningGraph g = oracles::c5();
  return g;
}
Word W(const char* text) { return parse_word(c5(), text); }

std::vector<Word> gens(std::initializer_list<const char*> texts) {
  std::vector<Word> out;
  for (const char* t : texts) out.push_back(W(t));
  return out;
}

// Folding with the foldable pair chosen at random each round.
LabeledComplex fold_random(LabeledComplex c, std::mt19937& rng) {
  for (;;) {
    auto cands = detail::fold_candidates(c);
    if (cands.empty()) return c;
    std::uniform_int_distribution<size_t> pick(0, cands.size() - 1);
    c = detail::fold_step(c, cands[pick(rng)]);
  }
}

bool member_traces(const LabeledComplex& c, const Word& w) {
  return trace_element(c5(), c, w).has_value();
}

}  // namespace

TEST_CASE("rose construction") {
  LabeledComplex r = rose(c5(), gens({"a b c d"}));
  CHECK(r.vertex_count == 4);
  CHECK(r.edges.size() == 4);
  CHECK(r.squares.empty());
  validate_complex(c5(), r);
  CHECK(is_folded(r));

  LabeledComplex two = rose(c5(), gens({"a", "a"}));
  CHECK(two.edges.size() == 2);
  CHECK_FALSE(is_folded(two));

  CHECK_THROWS_AS(rose(c5(), {}), input_error);
  CHECK_THROWS_AS(rose(c5(), std::vector<Word>{Word{}}), input_error);
}

TEST_CASE("fold: doubled loop, shared prefix, idempotence") {
  LabeledComplex two = fold(rose(c5(), gens({"a", "a"})));
  CHECK(two.vertex_count == 1);
  CHECK(two.edges.size() == 1);
  CHECK(is_folded(two));

  // Stallings fold of [ab, ac]: the a-edges merge, then b and c branch.
  LabeledComplex br = fold(rose(c5(), gens({"a b", "a c"})));
  CHECK(is_folded(br));
  CHECK(br.vertex_count == 2);
  CHECK(br.edges.size() == 3);
  CHECK(member_traces(br, W("a b")));
  CHECK(member_traces(br, W("a c")));
  CHECK_FALSE(member_traces(br, W("a")));

  LabeledComplex again = fold(br);
  CHECK(label_isomorphic(br, again));
}

TEST_CASE("fold preserves membership answers") {
  LabeledComplex pre = rose(c5(), gens({"a b", "a b"}));
  LabeledComplex post = fold(pre);
  for (const char* probe : {"a b", "a b a b", "b"}) {
    auto traced = trace_element(c5(), post, W(probe));
    if (std::string(probe) == "b")
      CHECK_FALSE(traced.has_value());
    else
      CHECK(traced.has_value());
  }
}

TEST_CASE("fold order independence on random roses") {
  std::mt19937 rng(20240812);
  std::uniform_int_distribution<int> count(1, 4), len(1, 6), letter(0, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Word> ws;
    int k = count(rng);
    for (int i = 0; i < k; ++i) {
      Word w;
      int n = len(rng);
      for (int j = 0; j < n; ++j) {
        int d = letter(rng);
        w.push_back(Letter{d / 2, d % 2 ? -1 : 1});
      }
      ws.push_back(w);
    }
    LabeledComplex base = rose(c5(), ws);
    LabeledComplex a = fold(base);
    LabeledComplex b = fold_random(base, rng);
    CHECK(label_isomorphic(a, b));
  }
}

TEST_CASE("local isometry check: bare abcd cycle misses exactly a/b, b/c, c/d") {
  LabeledComplex cycle = fold(rose(c5(), gens({"a b c d"})));
  IsometryReport report = check_local_isometry(c5(), cycle);
  CHECK(report.folded);
  CHECK(report.duplicate_squares.empty());
  std::set<std::pair<Vertex, Vertex>> missing;
  for (const auto& corner : report.missing_squares)
    missing.insert({std::min(corner.germ1.v, corner.germ2.v),
                    std::max(corner.germ1.v, corner.germ2.v)});
  std::set<std::pair<Vertex, Vertex>> expected{
      {c5().require("a"), c5().require("b")},
      {c5().require("b"), c5().require("c")},
      {c5().require("c"), c5().require("d")}};
  CHECK(missing == expected);
  CHECK(report.missing_squares.size() == 3);
}

TEST_CASE("local isometry check: loops with no commuting pair pass") {
  CHECK(check_local_isometry(c5(), fold(rose(c5(), gens({"a"})))).passes());
  CHECK(check_local_isometry(c5(), fold(rose(c5(), gens({"a c"})))).passes());
}

TEST_CASE("square completion resolves the least missing corner") {
  LabeledComplex cycle = fold(rose(c5(), gens({"a b c d"})));
  IsometryReport before = check_local_isometry(c5(), cycle);
  REQUIRE_FALSE(before.missing_squares.empty());
  LabeledComplex once = complete_squares_step(c5(), cycle);
  validate_complex(c5(), once);
  CHECK(once.squares.size() == 1);
  // One fresh vertex and two fresh edges, then refolded with nothing to fold.
  CHECK(once.vertex_count == 5);
  CHECK(once.edges.size() == 6);

  // Membership is untouched.
  CHECK(member_traces(once, W("a b c d")));
  CHECK_FALSE(member_traces(once, W("a b")));

  // A complex with nothing missing is returned unchanged.
  LabeledComplex loop = fold(rose(c5(), gens({"a"})));
  CHECK(label_isomorphic(complete_squares_step(c5(), loop), loop));
}

TEST_CASE("saturate: easy cases complete") {
  auto [loop, status, steps] = saturate(c5(), rose(c5(), gens({"a"})), 10);
  CHECK(status == SaturationStatus::complete);
  CHECK(steps == 0);

  auto two = saturate(c5(), rose(c5(), gens({"a", "c"})), 10);
  CHECK(two.status == SaturationStatus::complete);

  auto squeezed = saturate(c5(), rose(c5(), gens({"a b c d"})), 1);
  CHECK(squeezed.status == SaturationStatus::budget_exhausted);
}

TEST_CASE("saturate the abcd cycle, preserving membership at every step") {
  LabeledComplex cur = fold(rose(c5(), gens({"a b c d"})));
  std::vector<const char*> members{"a b c d", "a b c d a b c d", "b a c d"};
  std::vector<const char*> non_members{"a", "a b", "a c", "d c b a"};
  int steps = 0;
  for (; steps < 200; ++steps) {
    if (check_local_isometry(c5(), cur).passes()) break;
    LabeledComplex next = complete_squares_step(c5(), cur);
    validate_complex(c5(), next);
    for (const char* m : members)
      if (member_traces(cur, W(m))) CHECK(member_traces(next, W(m)));
    for (const char* nm : non_members) CHECK_FALSE(member_traces(next, W(nm)));
    cur = next;
  }
  INFO("saturation took " << steps << " steps");
  CHECK(check_local_isometry(c5(), cur).passes());
  for (const char* m : members) CHECK(member_traces(cur, W(m)));
}

TEST_CASE("trace_word on the bare cycle") {
  LabeledComplex cycle = fold(rose(c5(), gens({"a b c d"})));
  auto loop = trace_word(cycle, W("a b c d"));
  REQUIRE(loop.has_value());
  CHECK(loop->loop_at_basepoint);

  auto path = trace_word(cycle, W("a b"));
  REQUIRE(path.has_value());
  CHECK_FALSE(path->loop_at_basepoint);

  // The shuffle b a c d does not trace on the bare cycle; membership must
  // consult the class.
  CHECK_FALSE(trace_word(cycle, W("b a c d")).has_value());
  CHECK(trace_element(c5(), cycle, W("b a c d")).has_value());

  CHECK_FALSE(trace_word(cycle, W("e")).has_value());
  auto empty = trace_word(cycle, Word{});
  REQUIRE(empty.has_value());
  CHECK(empty->loop_at_basepoint);
}

TEST_CASE("simple cycle enumeration") {
  LabeledComplex loop = fold(rose(c5(), gens({"a"})));
  auto cycles = simple_cycle_supports(loop);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].label_support == VertexSet::single(c5().require("a")));

  LabeledComplex cycle4 = fold(rose(c5(), gens({"a b c d"})));
  auto c4 = simple_cycle_supports(cycle4);
  REQUIRE(c4.size() == 1);
  CHECK(c4[0].label_support.count() == 4);
  CHECK(c4[0].dedges.size() == 4);

  // Theta graph: two parallel strands plus a chord -> 3 simple cycles.
  // Build as x --a--> m --b--> y, x --c--> y via two-edge path, plus chord.
  DefiningGraph g = c5();
  LabeledComplex theta;
  theta.vertex_count = 2;
  theta.basepoint = 0;
  theta.edges.push_back({0, 1, g.require("a")});
  theta.edges.push_back({0, 1, g.require("b")});
  theta.edges.push_back({0, 1, g.require("c")});
  auto tc = simple_cycle_supports(theta);
  CHECK(tc.size() == 3);  // each unordered pair of parallel edges

  // Budget error fires on dense complexes with a tiny cap.
  CHECK_THROWS_AS(simple_cycle_supports(theta, 2), budget_error);
}

TEST_CASE("purely loxodromic scan") {
  // A loop labeled by a single generator is elliptic: witness found.
  LoxodromicScan loop_scan = purely_loxodromic_scan(c5(), fold(rose(c5(), gens({"a"}))));
  CHECK_FALSE(loop_scan.pure);
  REQUIRE(loop_scan.witness_cover.has_value());
  CHECK(loop_scan.witness_cover->valid(c5()));

  // Loop labeled a c: covered by the star of b.
  LoxodromicScan ac_scan = purely_loxodromic_scan(c5(), fold(rose(c5(), gens({"a c"}))));
  CHECK_FALSE(ac_scan.pure);
  REQUIRE(ac_scan.witness_cover.has_value());
  CHECK(ac_scan.witness_cover->side_a == VertexSet::single(c5().require("b")));

  // The saturated abcd complex scans pure; square boundaries are trivial
  // words and do not count as witnesses.
  auto sat = saturate(c5(), rose(c5(), gens({"a b c d"})), 500);
  REQUIRE(sat.status == SaturationStatus::complete);
  LoxodromicScan pure_scan = purely_loxodromic_scan(c5(), sat.complex);
  CHECK(pure_scan.pure);
  CHECK(pure_scan.cycles_checked > 0);
}

TEST_CASE("serialization round trip") {
  auto sat = saturate(c5(), rose(c5(), gens({"a b", "a c"})), 100);
  std::string text = complex_to_string(c5(), sat.complex);
  LabeledComplex back = parse_complex(c5(), text);
  CHECK(complex_to_string(c5(), back) == text);
  CHECK(label_isomorphic(back, sat.complex));

  CHECK_THROWS_AS(parse_complex(c5(), "vertex v0\n"), input_error);  // no basepoint
  CHECK_THROWS_AS(parse_complex(c5(), "vertex v0\ndedge v0 v1 a\nbasepoint v0\n"), input_error);
  CHECK_THROWS_AS(parse_complex(c5(), "vertex v0\nbasepoint v0\nsquare e0+ e0- e0+ e0-\n"),
                  input_error);
}

TEST_CASE("basis loops of the folded abcd cycle") {
  LabeledComplex cycle = fold(rose(c5(), gens({"a b c d"})));
  auto basis = basis_loops(cycle);
  REQUIRE(basis.size() == 1);
  CHECK(are_equal(c5(), basis[0].second, W("a b c d")));

  // Wedge of two loops: two basis elements.
  LabeledComplex wedge = fold(rose(c5(), gens({"a", "c"})));
  CHECK(basis_loops(wedge).size() == 2);

  // A tree has no basis loops.
  LabeledComplex segment = fold(rose(c5(), gens({"a a^-1"})));
  CHECK(basis_loops(segment).empty());
}

TEST_CASE("validate_complex rejects a square with non-commuting labels") {
  LabeledComplex bad;
  bad.vertex_count = 1;
  bad.basepoint = 0;
  bad.edges.push_back({0, 0, c5().require("a")});
  bad.edges.push_back({0, 0, c5().require("c")});  // a, c do not commute
  bad.squares.push_back({0, 2, 1, 3});
  CHECK_THROWS_AS(validate_complex(c5(), bad), input_error);

  // The Salvetti square of a commuting pair is fine: torus on {a, b}.
  LabeledComplex torus;
  torus.vertex_count = 1;
  torus.basepoint = 0;
  torus.edges.push_back({0, 0, c5().require("a")});
  torus.edges.push_back({0, 0, c5().require("b")});
  torus.squares.push_back({0, 2, 1, 3});
  validate_complex(c5(), torus);
  CHECK(check_local_isometry(c5(), torus).passes());
}
