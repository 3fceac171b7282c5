#pragma once

#include <stdexcept>
#include <string>

namespace l2approx {

// A per-query work budget ran out before the oracle could answer. This is a
// third answer, distinct from true/false; callers must not coerce it.
struct FuelExhausted : std::runtime_error {
  explicit FuelExhausted(const std::string& what) : std::runtime_error(what) {}
};

// A group-ring support grew past the configured term budget. Partial results
// computed before the throw remain valid.
struct TermBudgetExceeded : std::runtime_error {
  explicit TermBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A stream advertising a monotone mode emitted a pair violating it.
struct ModeViolation : std::logic_error {
  explicit ModeViolation(const std::string& what) : std::logic_error(what) {}
};

// No separating finite quotient was found within the cap. Says nothing about
// whether one exists beyond it.
struct QuotientCapExhausted : std::runtime_error {
  explicit QuotientCapExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Input file rejected; carries file and line for CLI reporting.
struct ParseError : std::runtime_error {
  ParseError(std::string file_, std::size_t line_, const std::string& what)
      : std::runtime_error(file_ + ":" + std::to_string(line_) + ": " + what),
        file(std::move(file_)),
        line(line_) {}
  std::string file;
  std::size_t line;
};

}  // namespace l2approx
