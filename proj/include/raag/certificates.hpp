#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "raag/complex.hpp"
#include "raag/cosets.hpp"
#include "raag/element.hpp"
#include "raag/io.hpp"

namespace raag {

inline constexpr const char* kCertificateSchema = "raag-cert/1";

/// A product of the input generators: (generator index, +1/-1) factors.
using GensExpression = std::vector<std::pair<int, int>>;

inline Word expand_expression(const std::vector<Word>& gens, const GensExpression& expr) {
  Word out;
  for (auto [idx, sign] : expr) {
    if (idx < 0 || idx >= static_cast<int>(gens.size()))
      throw input_error("expression refers to a generator outside the input list");
    Word factor = sign < 0 ? inverse(gens[idx]) : gens[idx];
    out.insert(out.end(), factor.begin(), factor.end());
  }
  return out;
}

/// Evidence for a not_stable verdict: an explicit nontrivial elliptic element
/// of the subgroup, with its reduction and the join cover of its support.
struct EllipticWitness {
  GensExpression expression;  // the witness as a product of input generators
  Word word;                  // exact expansion of the expression
  Word core;                  // cyclically reduced normal form of word
  Word conjugator;
  JoinCover cover;  // join cover of support(core)
};

/// Evidence for a stable verdict: a complex passing the local-isometry check
/// whose pi_1-image is shown equal to the subgroup (generators trace; basis
/// loops of the 1-skeleton are products of generators) and whose simple
/// cycles carry no nontrivial join-word label.
struct PureComplexEvidence {
  LabeledComplex complex;
  IsometryReport isometry;
  std::vector<Word> traced;  // per input generator: the normal form that traced
  std::vector<std::pair<int, GensExpression>> basis;  // non-tree edge -> expression
  int cycles_checked = 0;
};

struct StabilityCertificate {
  enum class Verdict { stable, not_stable };
  Verdict verdict = Verdict::stable;
  std::optional<EllipticWitness> elliptic;       // set iff not_stable
  std::optional<PureComplexEvidence> complex;    // set iff stable
};

struct MorseCertificate {
  enum class Route { via_stable, via_finite_index };
  Route route = Route::via_stable;
  std::optional<StabilityCertificate> stability;  // via_stable
  std::optional<CosetTable> table;                // via_finite_index (compacted)
  int index = 0;                                  // via_finite_index
};

/// Live rows renumbered 0..n-1, cursors cleared; canonical form for
/// serialization.
inline CosetTable compact_table(const CosetTable& t) {
  std::vector<int> ids = t.compact_ids();
  CosetTable out;
  out.ngens = t.ngens;
  out.status = t.status;
  out.definitions = t.definitions;
  for (size_t c = 0; c < t.rows.size(); ++c) {
    if (!t.alive(static_cast<int>(c))) continue;
    std::vector<int> row(2 * t.ngens, -1);
    for (int col = 0; col < 2 * t.ngens; ++col) {
      int d = t.entry(static_cast<int>(c), col);
      row[col] = d < 0 ? -1 : ids[d];
    }
    out.rows.push_back(std::move(row));
    out.fwd.push_back(static_cast<int>(out.fwd.size()));
  }
  out.cursor_coset = static_cast<int>(out.rows.size());
  return out;
}

// ---------------------------------------------------------------------------
// JSON codec. Words serialize as their text form, complexes as their text
// serialization; both round-trip exactly.

namespace codec {

using nlohmann::json;

inline json word_json(const DefiningGraph& g, const Word& w) { return word_to_string(g, w); }

inline Word word_from(const DefiningGraph& g, const json& j) {
  if (!j.is_string()) throw input_error("expected a word string");
  return parse_word(g, j.get<std::string>());
}

inline json expression_json(const GensExpression& e) {
  json out = json::array();
  for (auto [idx, sign] : e) out.push_back(json::array({idx, sign}));
  return out;
}

inline GensExpression expression_from(const json& j) {
  if (!j.is_array()) throw input_error("expected an expression array");
  GensExpression out;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
        !item[1].is_number_integer())
      throw input_error("expression factors are [index, sign] pairs");
    int sign = item[1].get<int>();
    if (sign != 1 && sign != -1) throw input_error("expression sign must be +-1");
    out.emplace_back(item[0].get<int>(), sign);
  }
  return out;
}

inline json cover_json(const DefiningGraph& g, const JoinCover& c) {
  auto names = [&](VertexSet s) {
    json arr = json::array();
    for (Vertex v : s.to_vector()) arr.push_back(g.name(v));
    return arr;
  };
  return json{{"side_a", names(c.side_a)}, {"side_b", names(c.side_b)}};
}

inline JoinCover cover_from(const DefiningGraph& g, const json& j) {
  JoinCover out;
  for (auto [key, side] :
       {std::pair{"side_a", &out.side_a}, std::pair{"side_b", &out.side_b}}) {
    if (!j.contains(key) || !j[key].is_array()) throw input_error("join cover needs both sides");
    for (const auto& name : j[key]) side->add(g.require(name.get<std::string>()));
  }
  return out;
}

inline json table_json(const CosetTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) rows.push_back(row);
  return json{{"ngens", t.ngens}, {"rows", rows}};
}

inline CosetTable table_from(const json& j) {
  CosetTable out;
  if (!j.contains("ngens") || !j.contains("rows")) throw input_error("bad coset table");
  out.ngens = j["ngens"].get<int>();
  if (out.ngens <= 0) throw input_error("bad coset table");
  for (const auto& row : j["rows"]) {
    std::vector<int> r = row.get<std::vector<int>>();
    if (static_cast<int>(r.size()) != 2 * out.ngens)
      throw input_error("coset table row has wrong width");
    out.rows.push_back(std::move(r));
    out.fwd.push_back(static_cast<int>(out.fwd.size()));
  }
  for (const auto& row : out.rows)
    for (int e : row)
      if (e < -1 || e >= static_cast<int>(out.rows.size()))
        throw input_error("coset table entry out of range");
  out.status = CosetTable::Status::complete;
  out.cursor_coset = static_cast<int>(out.rows.size());
  return out;
}

/// Full enumeration state, for pausing and resuming a coset run.
inline json checkpoint_json(const CosetTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) rows.push_back(row);
  return json{{"schema", "raag-cosets/1"},
              {"ngens", t.ngens},
              {"rows", rows},
              {"fwd", t.fwd},
              {"complete", t.status == CosetTable::Status::complete},
              {"definitions", t.definitions},
              {"cursor_coset", t.cursor_coset},
              {"cursor_stage", t.cursor_stage},
              {"cursor_item", t.cursor_item}};
}

inline CosetTable checkpoint_from(const json& j) {
  if (!j.is_object() || j.value("schema", "") != "raag-cosets/1")
    throw input_error("not a raag-cosets/1 checkpoint");
  CosetTable out;
  out.ngens = j.at("ngens").get<int>();
  if (out.ngens <= 0) throw input_error("bad checkpoint");
  for (const auto& row : j.at("rows")) {
    std::vector<int> r = row.get<std::vector<int>>();
    if (static_cast<int>(r.size()) != 2 * out.ngens)
      throw input_error("checkpoint row has wrong width");
    out.rows.push_back(std::move(r));
  }
  out.fwd = j.at("fwd").get<std::vector<int>>();
  if (out.fwd.size() != out.rows.size()) throw input_error("bad checkpoint forwarding");
  int n = static_cast<int>(out.rows.size());
  for (const auto& row : out.rows)
    for (int e : row)
      if (e < -1 || e >= n) throw input_error("checkpoint entry out of range");
  for (int f : out.fwd)
    if (f < 0 || f >= n) throw input_error("checkpoint forwarding out of range");
  out.status = j.at("complete").get<bool>() ? CosetTable::Status::complete
                                            : CosetTable::Status::in_progress;
  out.definitions = j.at("definitions").get<long long>();
  out.cursor_coset = j.at("cursor_coset").get<int>();
  out.cursor_stage = j.at("cursor_stage").get<int>();
  out.cursor_item = j.at("cursor_item").get<int>();
  return out;
}

inline json stability_json(const DefiningGraph& g, const StabilityCertificate& cert) {
  json out{{"schema", kCertificateSchema}, {"kind", "stability"}};
  if (cert.verdict == StabilityCertificate::Verdict::not_stable) {
    const EllipticWitness& w = *cert.elliptic;
    out["verdict"] = "not_stable";
    out["evidence"] = json{{"type", "elliptic_witness"},
                           {"expression", expression_json(w.expression)},
                           {"word", word_json(g, w.word)},
                           {"core", word_json(g, w.core)},
                           {"conjugator", word_json(g, w.conjugator)},
                           {"join_cover", cover_json(g, w.cover)}};
  } else {
    const PureComplexEvidence& e = *cert.complex;
    json traced = json::array();
    for (const Word& w : e.traced) traced.push_back(word_json(g, w));
    json basis = json::array();
    for (const auto& [edge, expr] : e.basis)
      basis.push_back(json{{"edge", edge}, {"expression", expression_json(expr)}});
    out["verdict"] = "stable";
    out["evidence"] = json{{"type", "pure_complex"},
                           {"complex", complex_to_string(g, e.complex)},
                           {"folded", e.isometry.folded},
                           {"missing_corners", e.isometry.missing_squares.size()},
                           {"duplicate_corners", e.isometry.duplicate_squares.size()},
                           {"traced", traced},
                           {"basis_loops", basis},
                           {"scan_pure", true},
                           {"cycles_checked", e.cycles_checked}};
  }
  return out;
}

inline StabilityCertificate stability_from(const DefiningGraph& g, const json& j) {
  if (!j.is_object() || j.value("schema", "") != kCertificateSchema)
    throw input_error("not a raag-cert/1 certificate");
  if (j.value("kind", "") != "stability") throw input_error("not a stability certificate");
  if (!j.contains("evidence") || !j["evidence"].is_object())
    throw input_error("certificate lacks evidence");
  const json& ev = j["evidence"];
  std::string verdict = j.value("verdict", "");
  StabilityCertificate cert;
  if (verdict == "not_stable") {
    if (ev.value("type", "") != "elliptic_witness")
      throw input_error("verdict/evidence mismatch");
    EllipticWitness w;
    w.expression = expression_from(ev.at("expression"));
    w.word = word_from(g, ev.at("word"));
    w.core = word_from(g, ev.at("core"));
    w.conjugator = word_from(g, ev.at("conjugator"));
    w.cover = cover_from(g, ev.at("join_cover"));
    cert.verdict = StabilityCertificate::Verdict::not_stable;
    cert.elliptic = std::move(w);
  } else if (verdict == "stable") {
    if (ev.value("type", "") != "pure_complex") throw input_error("verdict/evidence mismatch");
    PureComplexEvidence e;
    e.complex = parse_complex(g, ev.at("complex").get<std::string>());
    e.isometry.folded = ev.at("folded").get<bool>();
    if (ev.at("missing_corners").get<int>() != 0 || ev.at("duplicate_corners").get<int>() != 0)
      throw input_error("stable evidence must report a clean isometry check");
    if (ev.at("scan_pure").get<bool>() != true)
      throw input_error("stable evidence must report a pure scan");
    for (const auto& t : ev.at("traced")) e.traced.push_back(word_from(g, t));
    for (const auto& b : ev.at("basis_loops"))
      e.basis.emplace_back(b.at("edge").get<int>(), expression_from(b.at("expression")));
    e.cycles_checked = ev.at("cycles_checked").get<int>();
    cert.verdict = StabilityCertificate::Verdict::stable;
    cert.complex = std::move(e);
  } else {
    throw input_error("unknown verdict '" + verdict + "'");
  }
  return cert;
}

inline json morse_json(const DefiningGraph& g, const MorseCertificate& cert) {
  json out{{"schema", kCertificateSchema}, {"kind", "morse"}, {"verdict", "morse"}};
  if (cert.route == MorseCertificate::Route::via_stable) {
    out["route"] = "via_stable";
    out["stability"] = stability_json(g, *cert.stability);
  } else {
    out["route"] = "via_finite_index";
    out["index"] = cert.index;
    out["table"] = table_json(*cert.table);
  }
  return out;
}

inline MorseCertificate morse_from(const DefiningGraph& g, const json& j) {
  if (!j.is_object() || j.value("schema", "") != kCertificateSchema)
    throw input_error("not a raag-cert/1 certificate");
  if (j.value("kind", "") != "morse") throw input_error("not a morse certificate");
  if (j.value("verdict", "") != "morse") throw input_error("morse certificates carry verdict=morse");
  MorseCertificate cert;
  std::string route = j.value("route", "");
  if (route == "via_stable") {
    cert.route = MorseCertificate::Route::via_stable;
    cert.stability = stability_from(g, j.at("stability"));
    if (cert.stability->verdict != StabilityCertificate::Verdict::stable)
      throw input_error("via_stable route needs a stable stability certificate");
  } else if (route == "via_finite_index") {
    cert.route = MorseCertificate::Route::via_finite_index;
    cert.table = table_from(j.at("table"));
    cert.index = j.at("index").get<int>();
  } else {
    throw input_error("unknown morse route '" + route + "'");
  }
  return cert;
}

}  // namespace codec

}  // namespace raag
