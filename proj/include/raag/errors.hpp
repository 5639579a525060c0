#pragma once

#include <stdexcept>
#include <string>

namespace raag {

// Malformed input: unknown vertex names, bad file syntax, invalid certificates.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// The defining graph fails the hypotheses a classifier or decider needs
// (connected, anti-connected, at least two vertices).
class hypothesis_error : public std::runtime_error {
 public:
  explicit hypothesis_error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration outgrew its configured cap (shuffle classes, cycle lists,
// factorization searches). Distinct from the budget_exhausted *status* that
// semi-deciders return: budget_error means the requested computation itself
// was abandoned.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace raag
