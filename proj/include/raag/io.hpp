#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "raag/word.hpp"

namespace raag {

/// Graph text format, one declaration per line:
///   vertex <name>
///   edge <name> <name>
/// `#` starts a comment. Names are ASCII identifiers; duplicates rejected.
inline DefiningGraph parse_graph(const std::string& text) {
  DefiningGraph g;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;
    std::string extra;
    if (kind == "vertex") {
      std::string name;
      if (!(fields >> name) || (fields >> extra))
        throw input_error("line " + std::to_string(lineno) + ": expected 'vertex <name>'");
      g.add_vertex(name);
    } else if (kind == "edge") {
      std::string a, b;
      if (!(fields >> a >> b) || (fields >> extra))
        throw input_error("line " + std::to_string(lineno) + ": expected 'edge <a> <b>'");
      g.add_edge(a, b);
    } else {
      throw input_error("line " + std::to_string(lineno) + ": unknown declaration '" + kind +
                        "'");
    }
  }
  return g;
}

inline std::string graph_to_string(const DefiningGraph& g) {
  std::string out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) out += "vertex " + g.name(v) + "\n";
  for (auto [a, b] : g.edges()) out += "edge " + g.name(a) + " " + g.name(b) + "\n";
  return out;
}

/// Generator files: one word per line, `#` comments, blank lines skipped.
inline std::vector<Word> parse_generators(const DefiningGraph& g, const std::string& text) {
  std::vector<Word> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    out.push_back(parse_word(g, line));
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write file: " + path);
  out << content;
}

}  // namespace raag
