#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "l2approx/groupring.hpp"
#include "l2approx/linalg.hpp"
#include "l2approx/oracles.hpp"
#include "l2approx/rational.hpp"

namespace l2approx {

// Non-identity words carrying a nonzero coefficient on some diagonal of
// A^0, ..., A^(k^2), deduplicated, in shortlex key order.
std::vector<Word> nontrivial_diagonal_elements(const GroupRingMatrix& a, std::size_t k,
                                               const Budget& budget = {});

// First finite quotient, in the oracle's deterministic enumeration order, in
// which every listed element survives. Uses the oracle's quotient provider
// when present, else a symmetric-group homomorphism search over its relators.
// cap bounds the quotient order for providers and the symmetric-group degree
// for the search. Throws QuotientCapExhausted when the cap runs out, which
// is not evidence that no quotient exists.
FiniteQuotient find_separating_quotient(const WordOracle& oracle,
                                        const std::vector<Word>& elements, std::uint32_t cap);

// The rational matrix of right multiplication by a on row vectors over the
// quotient: block (i,h) x (j, h*w) accumulates the coefficient of w in a_ij.
RatMatrix regular_rep(const GroupRingMatrix& a, const FiniteQuotient& h);

// Left multiplication x -> a*x on stacked column vectors; block rows (i,g),
// block cols (j, w^-1 g).
RatMatrix left_regular_rep(const GroupRingMatrix& a, const FiniteQuotient& h);

// dim_Q ker of the pushed-down matrix over the quotient, normalized by the
// quotient order: (rows(a) * |H| - rank) / |H|.
Rational finite_dimker(const GroupRingMatrix& a, const FiniteQuotient& h);

// Rational upper bound for n*(1 - 1/(k*d))^(k^2) + n*ln(d)/ln(k), with the
// logs replaced by outward dyadic enclosures. Requires d >= 1 and k >= 2;
// d == 1 makes the second term exactly zero.
Rational lueck_error_bound(std::size_t n, const Rational& d, unsigned long k);

struct AdaptedStep {
  std::size_t k = 0;
  FiniteQuotient quotient;  // gen_images is the homomorphism
  Rational value;
  std::optional<Rational> bound;  // attached for k >= 2
};

// Stream of kernel dimensions over quotients adapted to the powers of A:
// step k separates every non-trivial diagonal element of A^0..A^(k^2), so
// |value - dim_vN ker| obeys the attached bound. A non-square input is
// replaced by its gram matrix up front (same kernel). The stream ends when
// the quotient cap is exhausted; emitted steps stay valid.
class LueckStream {
 public:
  LueckStream(OracleRef oracle, const GroupRingMatrix& a, Budget budget = {},
              std::uint32_t quotient_cap = 512);

  std::optional<AdaptedStep> next();
  bool exhausted() const { return done_; }

 private:
  OracleRef oracle_;
  GroupRingMatrix square_;
  Budget budget_;
  std::uint32_t cap_;
  Rational d_;
  std::size_t k_ = 0;
  bool done_ = false;
  GroupRingMatrix power_;       // square_^j, extended as k advances
  std::size_t power_index_ = 0;
  GroupRingElement seen_;       // accumulated |coeff| union of diagonal supports
};

}  // namespace l2approx
