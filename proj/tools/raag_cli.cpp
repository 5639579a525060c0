// Command-line front end: parses graph/word/generator files, dispatches to
// the library, prints text or JSON reports. Exit codes: 0 decided/computed,
// 2 input or hypothesis error, 3 budget exhausted.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "raag/raag.hpp"

namespace {

using nlohmann::json;
using namespace raag;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct CommonArgs {
  std::string graph_path;
  std::vector<std::string> gen_words;
  std::string gens_path;
  bool as_json = false;
  long long budget = 1000000;
};

DefiningGraph load_graph(const CommonArgs& args) {
  return parse_graph(read_file(args.graph_path));
}

std::vector<Word> load_generators(const DefiningGraph& g, const CommonArgs& args) {
  std::vector<Word> gens;
  if (!args.gens_path.empty())
    for (Word& w : parse_generators(g, read_file(args.gens_path))) gens.push_back(std::move(w));
  for (const std::string& text : args.gen_words) gens.push_back(parse_word(g, text));
  if (gens.empty()) throw input_error("no generators given (use --gens FILE or --gen WORD)");
  return gens;
}

void emit(const CommonArgs& args, const json& report, const std::string& text) {
  if (args.as_json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_gens, bool with_budget) {
  cmd->add_option("--graph", args.graph_path, "graph file")->required();
  if (with_gens) {
    cmd->add_option("--gens", args.gens_path, "generator file, one word per line");
    cmd->add_option("--gen", args.gen_words, "generator word (repeatable)");
  }
  if (with_budget) cmd->add_option("--budget", args.budget, "budget in operation units");
  cmd->add_flag("--json", args.as_json, "emit JSON");
}

json word_report(const DefiningGraph& g, const Word& w) { return word_to_string(g, w); }

int cmd_check_graph(const CommonArgs& args) {
  DefiningGraph g = load_graph(args);
  ValidationReport report = validate_graph(g);
  json j{{"vertex_count", report.vertex_count},
         {"connected", report.connected},
         {"anti_connected", report.anti_connected},
         {"classifier_hypotheses", report.classifier_hypotheses()},
         {"warnings", report.warnings}};
  std::string text = "vertices: " + std::to_string(report.vertex_count) +
                     "\nconnected: " + (report.connected ? "yes" : "no") +
                     "\nanti-connected: " + (report.anti_connected ? "yes" : "no") + "\n";
  for (const auto& w : report.warnings) text += "warning: " + w + "\n";
  emit(args, j, text);
  return kExitOk;
}

int cmd_nf(const CommonArgs& args, const std::string& word_text) {
  DefiningGraph g = load_graph(args);
  Word w = parse_word(g, word_text);
  Word nf = normalize(g, w);
  CyclicNormalForm cyc = cyclic_reduce(g, w);
  json j{{"normal_form", word_report(g, nf)},
         {"cyclic_core", word_report(g, cyc.core)},
         {"conjugator", word_report(g, cyc.conjugator)},
         {"trivial", nf.empty()}};
  emit(args, j,
       "normal form: " + word_to_string(g, nf) + "\ncyclic core: " + word_to_string(g, cyc.core) +
           "\nconjugator: " + word_to_string(g, cyc.conjugator) + "\n");
  return kExitOk;
}

int cmd_classify(const CommonArgs& args, const std::string& word_text) {
  DefiningGraph g = load_graph(args);
  ElementClass cls = classify(g, parse_word(g, word_text));
  const char* kind = cls.kind == ElementKind::identity    ? "identity"
                     : cls.kind == ElementKind::elliptic ? "elliptic"
                                                         : "loxodromic";
  json j{{"kind", kind}, {"core", word_report(g, cls.reduced.core)}};
  std::string text = std::string("kind: ") + kind +
                     "\ncore: " + word_to_string(g, cls.reduced.core) + "\n";
  if (cls.witness) {
    j["join_cover"] = codec::cover_json(g, *cls.witness);
    text += "join cover: " + codec::cover_json(g, *cls.witness).dump() + "\n";
  }
  emit(args, j, text);
  return kExitOk;
}

int cmd_star_length(const CommonArgs& args, const std::string& word_text) {
  DefiningGraph g = load_graph(args);
  StarLengthResult r = star_length(g, parse_word(g, word_text));
  json blocks = json::array();
  for (size_t i = 0; i < r.factorization.blocks.size(); ++i)
    blocks.push_back(json{{"word", word_report(g, r.factorization.blocks[i])},
                          {"star_vertex", g.name(r.factorization.star_vertices[i])}});
  json j{{"star_length", r.length}, {"blocks", blocks}};
  std::string text = "star length: " + std::to_string(r.length) + "\n";
  for (size_t i = 0; i < r.factorization.blocks.size(); ++i)
    text += "block " + std::to_string(i + 1) + " (star of " +
            g.name(r.factorization.star_vertices[i]) +
            "): " + word_to_string(g, r.factorization.blocks[i]) + "\n";
  emit(args, j, text);
  return kExitOk;
}

int cmd_stability(const CommonArgs& args, const std::string& cert_path) {
  DefiningGraph g = load_graph(args);
  std::vector<Word> gens = load_generators(g, args);
  StabilityOutcome outcome = decide_stability(g, gens, args.budget);
  json j{{"units_used", outcome.units_used}};
  if (outcome.status == DeciderStatus::budget_exhausted) {
    j["status"] = "budget_exhausted";
    emit(args, j, "budget exhausted after " + std::to_string(outcome.units_used) + " units\n");
    return kExitBudget;
  }
  bool stable = outcome.certificate->verdict == StabilityCertificate::Verdict::stable;
  json cert = codec::stability_json(g, *outcome.certificate);
  j["status"] = "decided";
  j["verdict"] = stable ? "stable" : "not_stable";
  j["certificate"] = cert;
  if (!cert_path.empty()) write_file(cert_path, cert.dump(2) + "\n");
  emit(args, j,
       std::string("verdict: ") + (stable ? "stable" : "not_stable") + "\nunits used: " +
           std::to_string(outcome.units_used) +
           (cert_path.empty() ? "" : "\ncertificate written to " + cert_path) + "\n");
  return kExitOk;
}

int cmd_morse(const CommonArgs& args, const std::string& cert_path) {
  DefiningGraph g = load_graph(args);
  std::vector<Word> gens = load_generators(g, args);
  MorseOutcome outcome = semidecide_morse(g, gens, args.budget);
  json j{{"units_used", outcome.units_used}};
  if (outcome.status == DeciderStatus::budget_exhausted) {
    j["status"] = "budget_exhausted";
    emit(args, j, "budget exhausted after " + std::to_string(outcome.units_used) + " units\n");
    return kExitBudget;
  }
  json cert = codec::morse_json(g, *outcome.certificate);
  bool via_stable = outcome.certificate->route == MorseCertificate::Route::via_stable;
  j["status"] = "decided";
  j["verdict"] = "morse";
  j["route"] = via_stable ? "via_stable" : "via_finite_index";
  j["certificate"] = cert;
  if (!cert_path.empty()) write_file(cert_path, cert.dump(2) + "\n");
  std::string text = std::string("verdict: morse (") +
                     (via_stable ? "via_stable" : "via_finite_index") + ")\n";
  if (!via_stable) text += "index: " + std::to_string(outcome.certificate->index) + "\n";
  emit(args, j, text);
  return kExitOk;
}

int cmd_cosets(const CommonArgs& args, const std::string& table_path,
               const std::string& checkpoint_path, const std::string& resume_path) {
  DefiningGraph g = load_graph(args);
  std::vector<Word> gens = load_generators(g, args);
  std::optional<CosetTable> resume;
  if (!resume_path.empty())
    resume = codec::checkpoint_from(json::parse(read_file(resume_path), nullptr, true));
  EnumerationResult result = enumerate_cosets(g, gens, args.budget, std::move(resume));
  if (!checkpoint_path.empty())
    write_file(checkpoint_path, codec::checkpoint_json(result.table).dump() + "\n");
  if (result.status == EnumerationStatus::budget_exhausted) {
    json j{{"status", "budget_exhausted"}, {"definitions", result.table.definitions}};
    emit(args, j,
         "budget exhausted after " + std::to_string(result.table.definitions) +
             " coset definitions\n");
    return kExitBudget;
  }
  if (!table_path.empty()) write_file(table_path, table_to_csv(g, result.table));
  json j{{"status", "complete"},
         {"index", result.index},
         {"definitions", result.table.definitions}};
  emit(args, j, "index: " + std::to_string(result.index) + "\n");
  return kExitOk;
}

int cmd_complex(const CommonArgs& args, const std::string& in_path, bool do_saturate,
                const std::string& out_path, bool do_verify, const std::string& trace_text,
                bool do_scan) {
  DefiningGraph g = load_graph(args);
  LabeledComplex c;
  if (!in_path.empty()) {
    c = parse_complex(g, read_file(in_path));
  } else {
    std::vector<Word> gens = load_generators(g, args);
    c = fold(rose(g, gens));
  }
  json j;
  std::string text;
  int exit_code = kExitOk;
  if (do_saturate) {
    SaturationResult r = saturate(g, c, static_cast<int>(args.budget));
    c = r.complex;
    bool complete = r.status == SaturationStatus::complete;
    j["saturation"] = json{{"status", complete ? "complete" : "budget_exhausted"},
                           {"steps", r.steps_used}};
    text += std::string("saturation: ") + (complete ? "complete" : "budget exhausted") + " (" +
            std::to_string(r.steps_used) + " steps)\n";
    if (!complete) exit_code = kExitBudget;
  }
  if (do_verify) {
    IsometryReport report = check_local_isometry(g, c);
    j["local_isometry"] = json{{"folded", report.folded},
                               {"missing_corners", report.missing_squares.size()},
                               {"duplicate_corners", report.duplicate_squares.size()},
                               {"passes", report.passes()}};
    text += std::string("local isometry: ") + (report.passes() ? "passes" : "fails") + "\n";
    for (const auto& m : report.missing_squares)
      text += "  missing corner at v" + std::to_string(m.vertex) + ": " + g.name(m.germ1.v) +
              (m.germ1.sign < 0 ? "^-1" : "") + " / " + g.name(m.germ2.v) +
              (m.germ2.sign < 0 ? "^-1" : "") + "\n";
  }
  if (!trace_text.empty()) {
    Word w = parse_word(g, trace_text);
    auto member = trace_element(g, c, w);
    j["traces_loop"] = member.has_value();
    if (member) j["traced_member"] = word_report(g, *member);
    text += std::string("traces loop at basepoint: ") + (member ? "yes" : "no") + "\n";
  }
  if (do_scan) {
    LoxodromicScan scan = purely_loxodromic_scan(g, c);
    j["scan"] = json{{"pure", scan.pure}, {"cycles_checked", scan.cycles_checked}};
    text += std::string("join-word scan: ") + (scan.pure ? "pure" : "witness found") + " (" +
            std::to_string(scan.cycles_checked) + " cycles)\n";
    if (!scan.pure) {
      j["scan"]["witness_label"] = word_report(g, c.path_label(scan.witness->dedges));
      text += "  witness label: " + word_to_string(g, c.path_label(scan.witness->dedges)) + "\n";
    }
  }
  if (!out_path.empty()) {
    write_file(out_path, complex_to_string(g, c));
    text += "complex written to " + out_path + "\n";
  }
  j["vertices"] = c.vertex_count;
  j["edges"] = c.edges.size();
  j["squares"] = c.squares.size();
  text += "complex: " + std::to_string(c.vertex_count) + " vertices, " +
          std::to_string(c.edges.size()) + " edges, " + std::to_string(c.squares.size()) +
          " squares\n";
  emit(args, j, text);
  return exit_code;
}

int cmd_probe(const CommonArgs& args, int lambda_max, int epsilon_max, double delta) {
  DefiningGraph g = load_graph(args);
  std::vector<Word> gens = load_generators(g, args);
  StabilityProbeReport report =
      stability_probe(g, gens, lambda_max, epsilon_max, delta, args.budget);
  json pairs = json::array();
  std::string text = "heuristic probe (delta assumed " + std::to_string(delta) + ")\n";
  for (const auto& p : report.pairs) {
    const char* outcome = p.outcome == ProbePairResult::Outcome::passed   ? "passed"
                          : p.outcome == ProbePairResult::Outcome::failed ? "failed"
                                                                          : "budget_exhausted";
    pairs.push_back(json{{"lambda", p.lambda},
                         {"epsilon", p.epsilon},
                         {"window", p.constants.window},
                         {"lambda_out", p.constants.lambda_out},
                         {"epsilon_out", p.constants.epsilon_out},
                         {"outcome", outcome},
                         {"words_tested", p.words_tested},
                         {"failing_word", p.failing_word}});
    text += "  (lambda=" + std::to_string(static_cast<int>(p.lambda)) +
            ", epsilon=" + std::to_string(static_cast<int>(p.epsilon)) + "): " + outcome + "\n";
  }
  json j{{"heuristic", true}, {"delta_assumed", delta}, {"pairs", pairs}};
  if (report.first_passing) {
    j["first_passing"] = json::array({report.first_passing->first, report.first_passing->second});
    text += "first passing pair: lambda=" + std::to_string(report.first_passing->first) +
            " epsilon=" + std::to_string(report.first_passing->second) + "\n";
  }
  emit(args, j, text);
  return kExitOk;
}

int cmd_verify_cert(const CommonArgs& args, const std::string& cert_path) {
  DefiningGraph g = load_graph(args);
  std::vector<Word> gens = load_generators(g, args);
  json cert_json = json::parse(read_file(cert_path), nullptr, true);
  VerifyResult result;
  std::string kind = cert_json.is_object() ? cert_json.value("kind", "") : "";
  if (kind == "stability")
    result = verify_stability_certificate(g, gens, codec::stability_from(g, cert_json));
  else if (kind == "morse")
    result = verify_morse_certificate(g, gens, codec::morse_from(g, cert_json));
  else
    throw input_error("certificate kind must be stability or morse");
  json j{{"verified", result.ok}};
  if (!result.ok) j["reason"] = result.reason;
  emit(args, j,
       result.ok ? std::string("certificate verified\n")
                 : "certificate REJECTED: " + result.reason + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stability and Morseness of subgroups of right-angled Artin groups"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string word_text, cert_path, table_path, checkpoint_path, resume_path, in_path, out_path,
      trace_text;
  bool do_saturate = false, do_verify = false, do_scan = false;
  int lambda_max = 4, epsilon_max = 4;
  double delta = 2.0;

  CLI::App* check = app.add_subcommand("check-graph", "validate a defining graph");
  add_common(check, args, false, false);

  CLI::App* nf = app.add_subcommand("nf", "normal form and cyclic reduction of a word");
  add_common(nf, args, false, false);
  nf->add_option("--word", word_text, "word")->required();

  CLI::App* cls = app.add_subcommand("classify", "loxodromic/elliptic classification");
  add_common(cls, args, false, false);
  cls->add_option("--word", word_text, "word")->required();

  CLI::App* star = app.add_subcommand("star-length", "star length and a star-geodesic witness");
  add_common(star, args, false, false);
  star->add_option("--word", word_text, "word")->required();

  CLI::App* stab = app.add_subcommand("stability", "decide stability of a subgroup");
  add_common(stab, args, true, true);
  stab->add_option("--cert", cert_path, "write the certificate to this file");

  CLI::App* morse = app.add_subcommand("morse", "semi-decide Morseness of a subgroup");
  add_common(morse, args, true, true);
  morse->add_option("--cert", cert_path, "write the certificate to this file");

  CLI::App* cosets = app.add_subcommand("cosets", "Todd-Coxeter coset enumeration");
  add_common(cosets, args, true, true);
  cosets->add_option("--table", table_path, "write the completed table as CSV");
  cosets->add_option("--checkpoint", checkpoint_path, "write a resumable checkpoint");
  cosets->add_option("--resume", resume_path, "resume from a checkpoint");

  CLI::App* cx = app.add_subcommand("complex", "build, saturate and audit square complexes");
  add_common(cx, args, true, true);
  cx->add_option("--in", in_path, "read a serialized complex instead of building a rose");
  cx->add_flag("--saturate", do_saturate, "run square completion to the budget");
  cx->add_flag("--verify", do_verify, "report the local isometry check");
  cx->add_option("--trace", trace_text, "trace a word's shuffle class from the basepoint");
  cx->add_flag("--scan", do_scan, "run the simple-cycle join-word scan");
  cx->add_option("--out", out_path, "write the resulting complex");

  CLI::App* probe = app.add_subcommand("probe", "heuristic quasigeodesic probe (diagnostics)");
  add_common(probe, args, true, true);
  probe->add_option("--lambda-max", lambda_max, "largest lambda to try");
  probe->add_option("--epsilon-max", epsilon_max, "largest epsilon to try");
  probe->add_option("--delta", delta, "assumed hyperbolicity constant")->required();

  CLI::App* verify = app.add_subcommand("verify-cert", "re-check a certificate from scratch");
  add_common(verify, args, true, false);
  verify->add_option("--cert", cert_path, "certificate file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check_graph(args);
    if (nf->parsed()) return cmd_nf(args, word_text);
    if (cls->parsed()) return cmd_classify(args, word_text);
    if (star->parsed()) return cmd_star_length(args, word_text);
    if (stab->parsed()) return cmd_stability(args, cert_path);
    if (morse->parsed()) return cmd_morse(args, cert_path);
    if (cosets->parsed()) return cmd_cosets(args, table_path, checkpoint_path, resume_path);
    if (cx->parsed())
      return cmd_complex(args, in_path, do_saturate, out_path, do_verify, trace_text, do_scan);
    if (probe->parsed()) return cmd_probe(args, lambda_max, epsilon_max, delta);
    if (verify->parsed()) return cmd_verify_cert(args, cert_path);
  } catch (const budget_error& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const hypothesis_error& e) {
    std::cerr << "hypothesis error: " << e.what() << "\n";
    return kExitInput;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
