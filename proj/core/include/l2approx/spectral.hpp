#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "l2approx/groupring.hpp"
#include "l2approx/rational.hpp"
#include "l2approx/reals.hpp"

namespace l2approx {

// The characteristic sequence c_p = tr((1 - K^-2 A A*)^p): exact, monotone
// non-increasing, c_0 = rows(A), and c_p converges down to the kernel
// dimension of right multiplication by A whenever K bounds the operator
// norm. Monotonicity and the [0, m] range are checked on every emission, so
// a too-small K surfaces as ModeViolation instead of silent nonsense.
//
// Powers are folded: with B = 1 - K^-2 A A* self-adjoint, c_{2s} is the sum
// of squared coefficients of B^s and c_{2s+1} the entrywise inner product of
// B^s with B^{s+1}. Index p therefore only ever forms supports of B^(p/2+1),
// at the cost of one multiplication every second index. Only a two-power
// window is retained; indices are intended to be consumed in order.
class CharSeq {
 public:
  CharSeq(const GroupRingMatrix& a, const Rational& k, Budget budget = {});

  Rational next();
  Rational at(std::size_t p);
  std::size_t emitted() const { return values_.size(); }
  const Rational& bound() const { return k_; }
  std::size_t gram_size() const { return m_; }

 private:
  const GroupRingMatrix& power(std::size_t s);

  Budget budget_;
  Rational k_;
  std::size_t m_;
  GroupRingMatrix b_;
  std::map<std::size_t, GroupRingMatrix> powers_;
  std::vector<Rational> values_;
};

// Monotone upper stream p -> c(A, K)_p with K = coeff_one_norm(A); every
// value is an upper bound for dim ker. Budget exhaustion ends the stream by
// throwing from the producer; values already emitted remain valid.
RealStream dimker_upper(const GroupRingMatrix& a, Budget budget = {});

// q >= 0 with the mass of log x on (0,1] under the spectral measure of the
// gram matrix bounded below by -q.
struct DetClassCertificate {
  Rational q;
};

// Certified lower bound q_k = c(A,K)_{k^2} - e_k - m*(1 - 1/(k*K^2))^(k^2)
// with e_k = 3q/(2*floor(log2 k)), k >= 2. Exact rational, always a true
// lower bound for dim ker when the certificate is valid.
Rational dimker_lower_term(CharSeq& seq, const DetClassCertificate& cert, unsigned long k);
Rational dimker_lower_term(const GroupRingMatrix& a, const Rational& k_bound,
                           const DetClassCertificate& cert, unsigned long k, Budget budget = {});

enum class BracketStatus {
  Exact,                // lo == hi, early certified value
  TargetMet,            // width reached the target
  IterationsExhausted,  // ran out of indices; bracket still valid
  BudgetExceeded,       // fuel or term budget hit; bracket still valid
};

struct BracketStep {
  std::size_t p = 0;
  Rational lo, hi;
};

struct BracketOptions {
  Rational target = Rational(1, 1024);
  std::size_t max_iters = 64;
  Budget budget;
  std::uint32_t quotient_cap = 512;
  std::optional<Rational> cert;  // det-class q; absent = derive (sofic default)
};

struct BracketResult {
  std::vector<BracketStep> steps;
  Rational lo, hi;
  BracketStatus status = BracketStatus::IterationsExhausted;
  Rational norm_bound;                // K in effect (after any integral rescale)
  std::optional<Rational> cert_used;  // certificate in effect, when any
};

// Two-sided certified bracket for dim ker of right multiplication by A.
// Upper bounds are the characteristic values; lower bounds combine the
// rank-nullity floor max(0, rows - cols), the certified lower terms at
// square indices when a determinant-class certificate is available, and the
// exact finite-quotient value when the oracle's quotient provider yields a
// faithful quotient. Without a user certificate, a matrix with fractional
// coefficients is rescaled by the common denominator first (the kernel is
// unchanged) so the sofic integral certificate applies.
BracketResult dimker_bracket(const GroupRingMatrix& a, const BracketOptions& opts = {});

// Paired monotone streams for the same bracket, combinable with
// bracket_to_effective: lower emits the running certified lower bound,
// upper the characteristic values.
struct DimkerStreams {
  RealStream lower;
  RealStream upper;
};
DimkerStreams dimker_streams(const GroupRingMatrix& a, const BracketOptions& opts = {});

// How the truncation tail of the log-determinant series is bounded.
struct TailSpec {
  enum class Kind {
    NovikovShubin,      // sum_{k>K} c_k/k <= C/K^alpha, asserted by the caller
    ObservedGeometric,  // extrapolates the last observed ratio; heuristic
    CertifiedRatio,     // rho is an asserted bound on sup spec(1 - Delta/M^2)
  };
  Kind kind = Kind::ObservedGeometric;
  Rational c;                        // NovikovShubin constant C > 0
  unsigned long alpha_num = 1;       // alpha = alpha_num/alpha_den > 0
  unsigned long alpha_den = 1;
  Rational rho;                      // CertifiedRatio bound, in [0, 1)
};

struct FkLogdetResult {
  RatInterval value;
  Rational tail;       // truncation allowance that widened the interval
  bool heuristic;      // true iff the tail was observed rather than asserted
  std::size_t terms;   // series terms consumed
};

// Certified interval for ln det of right multiplication by A, via
// m*ln(M) - (1/2) * sum_{k=1..K} c(A,M)_k / k and a tail allowance from
// spec. Requires M >= coeff_one_norm(A) (pass std::nullopt to use exactly
// that) and a trivial kernel, which is the caller's assertion; with a
// nonzero kernel the series diverges and no finite K gives a valid interval.
FkLogdetResult fk_logdet_partial(const GroupRingMatrix& a, const std::optional<Rational>& m_bound,
                                 std::size_t kmax, const TailSpec& spec, Budget budget = {});

// Chain complex data for the torsion alternating sum. boundaries[p-1] = A_p
// maps degree p to degree p-1, rows indexing degree p; adjacent shapes must
// chain (cols of A_{p+1} == rows of A_p).
struct TorsionInput {
  std::vector<GroupRingMatrix> boundaries;
  std::optional<Rational> norm_bound;  // per-degree coeff_one_norm when absent
  TailSpec tail;
};

struct TorsionResult {
  RatInterval value;
  bool heuristic;
  std::vector<FkLogdetResult> degrees;  // contribution of degrees 1..N in order
};

// Interval for the torsion sum_{p>=1} (-1)^(p+1) * p * ln det W_p where
// W_p = [A_p | A_{p+1}*], so W_p W_p* is the degree-p Laplacian. Assumes all
// Laplacian kernels vanish (the caller's acyclicity assertion).
TorsionResult torsion_estimate(const TorsionInput& input, std::size_t kmax, Budget budget = {});

}  // namespace l2approx
