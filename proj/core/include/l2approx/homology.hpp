#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "l2approx/groupring.hpp"
#include "l2approx/oracles.hpp"
#include "l2approx/spectral.hpp"

namespace l2approx {

// A finitely presented complex of length k over one group ring: ranks
// n_0..n_{k+1} and boundaries A_p in M_{n_p x n_{p-1}}, p = 1..k+1, with
// A_p * A_{p-1} = 0. Rows index the domain throughout.
struct FinPresComplex {
  std::size_t length = 0;
  std::vector<std::size_t> ranks;           // size length + 2
  std::vector<GroupRingMatrix> boundaries;  // boundaries[p-1] = A_p, size length + 1

  const OracleRef& oracle() const { return boundaries.at(0).oracle(); }
};

// Location of the first defect found by a validator: boundary index p and
// entry (i, j), with a short reason.
struct ComplexViolation {
  std::size_t p = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string reason;
};

// Shape bookkeeping plus exact verification that consecutive boundaries
// compose to zero. Returns the first violation, or nothing when valid.
std::optional<ComplexViolation> validate_complex(const FinPresComplex& c,
                                                 const Budget& budget = {});

// Inclusion of complexes: sub's ranks m_j <= sup's n_j, with each sup
// boundary carrying sub's boundary as its leading block and zeros right of
// it in those rows (the chain-map condition for the coordinate inclusion).
struct ComplexInclusion {
  FinPresComplex sub;
  FinPresComplex sup;
};

std::optional<ComplexViolation> validate_inclusion(const ComplexInclusion& inc,
                                                   const Budget& budget = {});

ComplexInclusion identity_inclusion(const FinPresComplex& c);

// Length-1 complex of a presentation: A_1 the augmentation column (s - 1)
// over the generators, A_2 the Fox-derivative Jacobian of the relators.
FinPresComplex fox_presentation_complex(const OracleRef& oracle, const Budget& budget = {});

// Fox derivative of a word with respect to generator index s.
GroupRingElement fox_derivative(const OracleRef& oracle, const Word& w, std::uint32_t s,
                                const Budget& budget = {});

struct ImHomologyResult {
  RatInterval value;
  BracketResult ker_sub;    // dim ker of sub's boundary at degree k
  BracketResult ker_sup;    // dim ker of sup's boundary at degree k+1
  BracketResult ker_stack;  // dim ker of the stacked matrix E_k
  BracketStatus status = BracketStatus::IterationsExhausted;  // worst of the three
};

// Bracket for dim im H_k of the inclusion: combines the three kernel
// brackets as ker A_k + ker B_{k+1} - ker E_k, where E_k stacks B_{k+1} on
// top of (I | 0), clamped to [0, m_k]. Degree 0 takes ker of the zero map
// exactly.
ImHomologyResult dim_im_homology(const ComplexInclusion& inc, std::size_t k,
                                 const BracketOptions& opts = {});

struct BettiCell {
  std::size_t i = 0;
  std::size_t j = 0;
  RatInterval value;
  BracketStatus status = BracketStatus::IterationsExhausted;
};

struct BettiBudgets {
  std::size_t stages = 1;                  // grid side: stages 0..stages-1
  std::uint64_t resolution_fuel = 200000;  // kernel-vector search budget per stage
  std::size_t max_new_rows = 2;            // kernel vectors adopted per extension
  BracketOptions bracket;
};

struct BettiEstimate {
  std::vector<FinPresComplex> stages;
  std::vector<BettiCell> cells;  // all computed (i, j), i <= j
  RatInterval sup_inf;           // sup over i of inf over computed j >= i
  bool stages_truncated = false; // stage enumeration stopped on fuel
  bool grid_truncated = false;   // some cell ended on a budget
};

// Budgeted estimator for the degree-k Betti number of the group: stage 0 is
// the Fox complex, later stages extend it by kernel vectors found within the
// resolution fuel, and each pair i <= j contributes a dim_im_homology cell
// for the inclusion of stage i into stage j. The sup-inf is taken over the
// computed grid only; the truncation flags say which limits were cut short.
BettiEstimate betti_estimate(const OracleRef& oracle, std::size_t k, const BettiBudgets& budgets);

}  // namespace l2approx
