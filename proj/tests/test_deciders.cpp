#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "mutate.hpp"
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

std::vector<std::string> vertex_names(const DefiningGraph& g) {
  std::vector<std::string> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) out.push_back(g.name(v));
  return out;
}

constexpr long long kBudget = 1000000;

}  // namespace

TEST_CASE("curated suite: elliptic generators settle not_stable immediately") {
  for (auto texts : {gens({"a"}), gens({"a c"}), gens({"a", "b", "c", "d", "e"})}) {
    StabilityOutcome out = decide_stability(c5(), texts, kBudget);
    REQUIRE(out.status == DeciderStatus::decided);
    REQUIRE(out.certificate.has_value());
    CHECK(out.certificate->verdict == StabilityCertificate::Verdict::not_stable);
    VerifyResult v = verify_stability_certificate(c5(), texts, *out.certificate);
    INFO(v.reason);
    CHECK(v.ok);
  }
  // The first elliptic product is the first generator itself.
  StabilityOutcome whole = decide_stability(c5(), gens({"a", "b", "c", "d", "e"}), kBudget);
  CHECK(whole.certificate->elliptic->word == W("a"));
  CHECK(whole.units_used == 1);
}

TEST_CASE("curated suite: cyclic loxodromic subgroups settle stable") {
  StabilityOutcome out = decide_stability(c5(), gens({"a b c d"}), kBudget);
  REQUIRE(out.status == DeciderStatus::decided);
  CHECK(out.certificate->verdict == StabilityCertificate::Verdict::stable);
  VerifyResult v = verify_stability_certificate(c5(), gens({"a b c d"}), *out.certificate);
  INFO(v.reason);
  CHECK(v.ok);

  DefiningGraph p4 = oracles::p4();
  std::vector<Word> pqrs{parse_word(p4, "p q r s")};
  StabilityOutcome out2 = decide_stability(p4, pqrs, kBudget);
  REQUIRE(out2.status == DeciderStatus::decided);
  CHECK(out2.certificate->verdict == StabilityCertificate::Verdict::stable);
  CHECK(verify_stability_certificate(p4, pqrs, *out2.certificate).ok);
}

TEST_CASE("trivial subgroup is stable with a point-complex certificate") {
  for (auto texts : {std::vector<Word>{}, gens({"a a^-1"})}) {
    StabilityOutcome out = decide_stability(c5(), texts, kBudget);
    REQUIRE(out.status == DeciderStatus::decided);
    CHECK(out.certificate->verdict == StabilityCertificate::Verdict::stable);
    CHECK(verify_stability_certificate(c5(), texts, *out.certificate).ok);
  }
}

TEST_CASE("hypothesis errors are raised for bad graphs") {
  DefiningGraph p3;
  for (const char* n : {"p", "q", "r"}) p3.add_vertex(n);
  p3.add_edge("p", "q");
  p3.add_edge("q", "r");
  CHECK_THROWS_AS(decide_stability(p3, {parse_word(p3, "p")}, 100), hypothesis_error);
  CHECK_THROWS_AS(semidecide_morse(p3, {parse_word(p3, "p")}, 100), hypothesis_error);
}

TEST_CASE("deciders are deterministic") {
  for (auto texts : {gens({"a b c d"}), gens({"a c"})}) {
    StabilityOutcome a = decide_stability(c5(), texts, kBudget);
    StabilityOutcome b = decide_stability(c5(), texts, kBudget);
    CHECK(codec::stability_json(c5(), *a.certificate) ==
          codec::stability_json(c5(), *b.certificate));
    CHECK(a.units_used == b.units_used);
  }
}

TEST_CASE("resumed runs reach the same certificate as one large budget") {
  StabilityRun chunked(c5(), gens({"a b c d"}));
  while (!chunked.advance(500)) {
    REQUIRE(chunked.units_used() < kBudget);
  }
  StabilityOutcome fresh = decide_stability(c5(), gens({"a b c d"}), kBudget);
  CHECK(codec::stability_json(c5(), *chunked.certificate()) ==
        codec::stability_json(c5(), *fresh.certificate));
  CHECK(chunked.units_used() == fresh.units_used);
}

TEST_CASE("stability certificates survive a JSON round trip") {
  for (auto texts : {gens({"a"}), gens({"a b c d"})}) {
    StabilityOutcome out = decide_stability(c5(), texts, kBudget);
    nlohmann::json j = codec::stability_json(c5(), *out.certificate);
    StabilityCertificate back = codec::stability_from(c5(), nlohmann::json::parse(j.dump()));
    CHECK(codec::stability_json(c5(), back) == j);
    CHECK(verify_stability_certificate(c5(), texts, back).ok);
  }
}

TEST_CASE("spec'd verifier rejections") {
  StabilityOutcome out = decide_stability(c5(), gens({"a"}), kBudget);
  StabilityCertificate cert = *out.certificate;
  // Witness word replaced by a loxodromic word: rejected.
  cert.elliptic->word = W("a b c d");
  CHECK_FALSE(verify_stability_certificate(c5(), gens({"a"}), cert).ok);

  StabilityOutcome stable = decide_stability(c5(), gens({"a b c d"}), kBudget);
  StabilityCertificate pure = *stable.certificate;
  // One square deleted: the corner reopens.
  REQUIRE_FALSE(pure.complex->complex.squares.empty());
  pure.complex->complex.squares.pop_back();
  VerifyResult v = verify_stability_certificate(c5(), gens({"a b c d"}), pure);
  CHECK_FALSE(v.ok);
  CHECK(v.reason.find("isometry") != std::string::npos);
}

TEST_CASE("random single-field mutations are rejected (sample)") {
  std::mt19937 rng(20240813);
  for (auto texts : {gens({"a"}), gens({"a b c d"})}) {
    StabilityOutcome out = decide_stability(c5(), texts, kBudget);
    nlohmann::json j = codec::stability_json(c5(), *out.certificate);
    for (int trial = 0; trial < 25; ++trial) {
      nlohmann::json bad = mutate::mutate_certificate(j, vertex_names(c5()), rng);
      bool rejected = false;
      std::string last;
      try {
        StabilityCertificate cert = codec::stability_from(c5(), bad);
        VerifyResult v = verify_stability_certificate(c5(), texts, cert);
        rejected = !v.ok;
        last = v.reason;
      } catch (const input_error&) {
        rejected = true;
      } catch (const nlohmann::json::exception&) {
        rejected = true;
      }
      INFO("mutation " << trial << ": " << bad.dump());
      CHECK(rejected);
    }
  }
}

TEST_CASE("morse: finite index route over the single edge") {
  DefiningGraph g = oracles::single_edge();
  std::vector<Word> xs{parse_word(g, "x^2"), parse_word(g, "y")};
  MorseOutcome out = semidecide_morse(g, xs, kBudget);
  REQUIRE(out.status == DeciderStatus::decided);
  REQUIRE(out.certificate.has_value());
  CHECK(out.certificate->route == MorseCertificate::Route::via_finite_index);
  CHECK(out.certificate->index == 2);
  CHECK(verify_morse_certificate(g, xs, *out.certificate).ok);

  std::vector<Word> xy{parse_word(g, "x^2"), parse_word(g, "y^3")};
  MorseOutcome out6 = semidecide_morse(g, xy, kBudget);
  REQUIRE(out6.status == DeciderStatus::decided);
  CHECK(out6.certificate->index == 6);
  CHECK(verify_morse_certificate(g, xy, *out6.certificate).ok);
}

TEST_CASE("morse: stable route") {
  MorseOutcome out = semidecide_morse(c5(), gens({"a b c d"}), kBudget);
  REQUIRE(out.status == DeciderStatus::decided);
  CHECK(out.certificate->route == MorseCertificate::Route::via_stable);
  CHECK(verify_morse_certificate(c5(), gens({"a b c d"}), *out.certificate).ok);

  nlohmann::json j = codec::morse_json(c5(), *out.certificate);
  MorseCertificate back = codec::morse_from(c5(), nlohmann::json::parse(j.dump()));
  CHECK(codec::morse_json(c5(), back) == j);
}

TEST_CASE("morse: neither stable nor finite index exhausts the budget") {
  MorseOutcome out = semidecide_morse(c5(), gens({"a"}), 10000);
  CHECK(out.status == DeciderStatus::budget_exhausted);
  CHECK_FALSE(out.certificate.has_value());
  CHECK(out.units_used >= 10000);
}

TEST_CASE("morse certificate mutations are rejected (sample)") {
  DefiningGraph g = oracles::single_edge();
  std::vector<Word> xs{parse_word(g, "x^2"), parse_word(g, "y")};
  MorseOutcome out = semidecide_morse(g, xs, kBudget);
  nlohmann::json j = codec::morse_json(g, *out.certificate);
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    nlohmann::json bad = mutate::mutate_certificate(j, vertex_names(g), rng);
    bool rejected = false;
    try {
      MorseCertificate cert = codec::morse_from(g, bad);
      rejected = !verify_morse_certificate(g, xs, cert).ok;
    } catch (const input_error&) {
      rejected = true;
    } catch (const nlohmann::json::exception&) {
      rejected = true;
    }
    INFO("mutation " << bad.dump());
    CHECK(rejected);
  }
}

TEST_CASE("the two deciders never disagree on the curated suite") {
  for (auto texts : {gens({"a"}), gens({"a c"}), gens({"a b c d"})}) {
    StabilityOutcome s = decide_stability(c5(), texts, kBudget);
    MorseOutcome m = semidecide_morse(c5(), texts, 20000);
    if (s.certificate->verdict == StabilityCertificate::Verdict::stable) {
      REQUIRE(m.certificate.has_value());
      CHECK(m.certificate->route == MorseCertificate::Route::via_stable);
    } else if (m.status == DeciderStatus::decided) {
      // Not stable but Morse: must have gone through the index route.
      CHECK(m.certificate->route == MorseCertificate::Route::via_finite_index);
    }
  }
}
