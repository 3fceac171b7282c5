#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "l2approx/rational.hpp"

namespace l2approx {

enum class StreamMode {
  MonotoneUpper,  // q_n non-increasing, converging to the target from above
  MonotoneLower,  // q_n non-decreasing, converging from below
  Effective,      // |target - q_n| <= 2^-n
  ErrorSeq,       // |target - q_n| <= eps_n with eps_n -> 0
  Unvalidated,
};

// A pull-based sequence of rationals converging to a real, tagged with the
// convergence contract the producer claims. Pulls are memoized, so a stream
// doubles as its own replay buffer and combinators stay deterministic.
// Monotone modes are checked on every consecutive pair and violations raise
// ModeViolation; effective and error-seq contracts are metadata carried to
// consumers.
//
// Copies share state. heuristic marks values produced by fuel-bounded
// searches that stand in for non-computable steps; it propagates through
// every combinator. A stream of a known rational carries it as exact_value,
// which lets digit extraction use long division instead of certificates.
class RealStream {
 public:
  using Producer = std::function<Rational(std::size_t)>;

  RealStream(StreamMode mode, Producer producer);
  RealStream(Producer producer, Producer error_producer);  // ErrorSeq

  static RealStream constant(const Rational& value);

  StreamMode mode() const;
  bool heuristic() const;
  void set_heuristic(bool flag);
  const std::optional<Rational>& exact_value() const;

  Rational at(std::size_t n);
  Rational error_at(std::size_t n);  // ErrorSeq only

 private:
  struct State;
  std::shared_ptr<State> state_;
};

// Squeeze a monotone bracket into an effective stream: the n-th value is the
// midpoint at the first index where the gap closes to 2^-n. Pulls advance a
// shared cursor; more than pull_budget pulls for one emission raises
// FuelExhausted, and a crossed bracket raises ModeViolation.
RealStream bracket_to_effective(RealStream lower, RealStream upper,
                                std::uint64_t pull_budget = 100000);

// Prefix of a binary expansion: value = integer_part + sum 2^-n over the
// positions n >= 1 whose digit is 1. digits holds one character per emitted
// position; a trailing '?' marks the first position whose digit certificate
// was not found within fuel.
struct BinaryExpansion {
  bool integer_resolved = false;
  Integer integer_part;
  std::string digits;
  bool unresolved = false;

  std::string to_string() const;  // "k=<int> <digits>" or "k=?"
};

// Digit extraction from an effective stream. A digit is emitted only with a
// one-sided certificate (q_l - 2^-l at or above the threshold for 1, or
// q_l + 2^-l strictly below it for 0) found within fuel pulls; an exact
// rational tag switches to long division, where dyadic values take the
// finite expansion.
BinaryExpansion to_binary_expansion(RealStream r, std::size_t digit_count, std::uint64_t fuel);

// Fuel-bounded stand-in for convergence acceleration: the m-th value is the
// first q_N whose 2^-m window survived a run of refutation checks. The
// caller asserts convergence; the result is heuristic unless the input
// already carried a modulus (effective, error-seq, or exact), in which case
// it is passed through certified.
RealStream extract_effective(RealStream q, std::uint64_t fuel);

// Diagonal of a double sequence with asserted inner limits: row i is
// accelerated with extract_effective, and the n-th output is row n's n-th
// value. Always heuristic.
RealStream diagonalize(std::function<Rational(std::size_t, std::size_t)> q, std::uint64_t fuel);

struct DivergenceReport {
  enum class Kind { Diverging, BoundedSoFar };
  Kind kind = Kind::BoundedSoFar;
  std::size_t index = 0;  // first index exceeding the threshold when Diverging
};

// One-sided divergence evidence: reports the first index with q_k > threshold
// or bounded-so-far once fuel is spent. Streams with a declared modulus
// converge by contract and report bounded-so-far without being pulled.
DivergenceReport detect_divergence(RealStream q, const Rational& threshold, std::uint64_t fuel);

enum class CutAnswer { XLess, XGreater, Undecided };

// Dedekind cut query for an effective stream: strict separations are decided
// once a window clears x; equality stays Undecided at every fuel.
CutAnswer dedekind_query(RealStream r, const Rational& x, std::uint64_t fuel);

}  // namespace l2approx
