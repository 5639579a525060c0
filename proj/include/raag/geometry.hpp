#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "raag/element.hpp"

namespace raag {

/// Local-to-global constants for delta-hyperbolic spaces: every path whose
/// length-K subsegments are (lambda, epsilon)-quasigeodesics is globally a
/// (lambda_out, epsilon_out)-quasigeodesic.
struct L2GConstants {
  double delta = 0;
  double lambda = 1;
  double epsilon = 0;
  long long window = 1;  // K
  double lambda_out = 1;
  double epsilon_out = 0;
};

/// Conservative window and output constants in the shape of the classical
/// broken-geodesic chaining argument (cf. Bridson-Haefliger III.H.1.13 for
/// the local-geodesic case). Deterministic and monotone in each argument;
/// the tree-case acceptance checks validate the contract empirically rather
/// than trusting the formula.
inline L2GConstants l2g_constants(double delta, double lambda, double epsilon) {
  if (delta < 0 || lambda < 1 || epsilon < 0)
    throw input_error("need delta >= 0, lambda >= 1, epsilon >= 0");
  L2GConstants c;
  c.delta = delta;
  c.lambda = lambda;
  c.epsilon = epsilon;
  c.window = static_cast<long long>(std::ceil(lambda * (epsilon + 2 * delta + 2)));
  c.lambda_out = lambda * (1 + 2 * delta);
  c.epsilon_out = lambda * epsilon + 4 * delta * lambda * lambda + 8 * delta;
  return c;
}

struct QuasigeodesicCheck {
  bool ok = true;
  // First violated pair when !ok.
  int i = -1;
  int j = -1;
  int distance = 0;
};

/// Checks the discrete quasigeodesic inequalities for a path of group
/// elements in the star metric: for all i < j,
///   |i-j|/lambda - epsilon <= d_*(p_i, p_j) <= lambda |i-j| + epsilon.
/// Consecutive entries must differ by a single generator.
inline QuasigeodesicCheck is_quasigeodesic_star(const DefiningGraph& g,
                                                const std::vector<Word>& path, double lambda,
                                                double epsilon,
                                                std::size_t state_budget = 1u << 20) {
  for (size_t i = 0; i + 1 < path.size(); ++i)
    if (normalize(g, concat(inverse(path[i]), path[i + 1])).size() != 1)
      throw input_error("path entries must differ by one generator");
  QuasigeodesicCheck out;
  for (size_t i = 0; i + 1 < path.size(); ++i)
    for (size_t j = i + 1; j < path.size(); ++j) {
      int d = star_distance(g, path[i], path[j], state_budget);
      double gap = static_cast<double>(j - i);
      if (d < gap / lambda - epsilon || d > lambda * gap + epsilon) {
        out.ok = false;
        out.i = static_cast<int>(i);
        out.j = static_cast<int>(j);
        out.distance = d;
        return out;
      }
    }
  return out;
}

struct ProbePairResult {
  double lambda = 1;
  double epsilon = 0;
  L2GConstants constants;
  enum class Outcome { passed, failed, budget_exhausted } outcome = Outcome::failed;
  long long words_tested = 0;
  std::string failing_word;  // text form of the first failing witness
};

struct StabilityProbeReport {
  // Heuristic: sound only if delta_assumed really bounds the hyperbolicity
  // of the ambient star metric; never feeds the deciders.
  double delta_assumed = 0;
  std::vector<ProbePairResult> pairs;
  std::optional<std::pair<double, double>> first_passing;
};

/// Quasigeodesic probe over the subgroup's own Cayley paths: for each
/// (lambda, epsilon) up to the caps, computes (K, lambda', epsilon') and
/// tests every freely reduced generator word of length <= K as a path whose
/// prefixes should form a (lambda', epsilon')-quasigeodesic in d_*.
inline StabilityProbeReport stability_probe(const DefiningGraph& g,
                                            const std::vector<Word>& gens, int lambda_max,
                                            int epsilon_max, double delta_assumed,
                                            long long word_budget = 100000,
                                            std::size_t state_budget = 1u << 20) {
  for (const Word& w : gens) check_word(g, w);
  StabilityProbeReport report;
  report.delta_assumed = delta_assumed;
  int k = static_cast<int>(gens.size());
  for (int lambda = 1; lambda <= lambda_max; ++lambda)
    for (int epsilon = 0; epsilon <= epsilon_max; ++epsilon) {
      ProbePairResult pair;
      pair.lambda = lambda;
      pair.epsilon = epsilon;
      pair.constants = l2g_constants(delta_assumed, lambda, epsilon);
      pair.outcome = ProbePairResult::Outcome::passed;

      // Freely reduced words over the generator alphabet, length-lex.
      std::vector<std::vector<int>> stack{{}};
      while (!stack.empty()) {
        std::vector<int> digits = stack.back();
        stack.pop_back();
        if (pair.words_tested >= word_budget) {
          pair.outcome = ProbePairResult::Outcome::budget_exhausted;
          break;
        }
        if (!digits.empty()) {
          ++pair.words_tested;
          std::vector<Word> path{Word{}};
          for (int d : digits) {
            Word step = d % 2 ? inverse(gens[d / 2]) : gens[d / 2];
            path.push_back(concat(path.back(), step));
          }
          QuasigeodesicCheck check;
          try {
            check = is_quasigeodesic_star(g, path, pair.constants.lambda_out,
                                          pair.constants.epsilon_out, state_budget);
          } catch (const budget_error&) {
            pair.outcome = ProbePairResult::Outcome::budget_exhausted;
            break;
          } catch (const input_error&) {
            // A generator power collapses (e.g. a trivial generator); skip
            // the path, it is not a combinatorial edge-path.
            continue;
          }
          if (!check.ok) {
            pair.outcome = ProbePairResult::Outcome::failed;
            std::string text;
            for (int d : digits) {
              if (!text.empty()) text += ' ';
              text += "g" + std::to_string(d / 2) + (d % 2 ? "^-1" : "");
            }
            pair.failing_word = text;
            break;
          }
        }
        if (static_cast<long long>(digits.size()) < pair.constants.window) {
          for (int d = 2 * k - 1; d >= 0; --d) {
            if (!digits.empty() && (digits.back() ^ 1) == d) continue;  // freely reduced
            std::vector<int> next = digits;
            next.push_back(d);
            stack.push_back(std::move(next));
          }
        }
      }
      report.pairs.push_back(pair);
      if (pair.outcome == ProbePairResult::Outcome::passed && !report.first_passing)
        report.first_passing = {pair.lambda, pair.epsilon};
    }
  return report;
}

}  // namespace raag
