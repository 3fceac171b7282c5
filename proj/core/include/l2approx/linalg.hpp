#pragma once

#include <cstddef>
#include <vector>

#include "l2approx/rational.hpp"

namespace l2approx {

// Dense exact-rational matrix, row major. Used for finite-quotient kernel
// computations; sizes stay small enough that dense storage is the right
// trade.
using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix rat_matrix(std::size_t rows, std::size_t cols);

enum class PivotRule {
  FirstNonzero,
  LargestNumerator,  // among nonzero candidates, largest |numerator|; ties by row
};

// Exact rank. Clears denominators row-wise, then runs fraction-free
// (Bareiss) elimination over integers, so intermediate entries stay minors
// rather than exploding rationals.
std::size_t rank(const RatMatrix& a, PivotRule rule = PivotRule::FirstNonzero);

// Basis of the right kernel {v : a v = 0}, via rational RREF. Each basis
// vector has a unit in its free column; deterministic given the pivot order.
std::vector<std::vector<Rational>> nullspace(const RatMatrix& a);

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);
RatMatrix transpose(const RatMatrix& a);

}  // namespace l2approx
