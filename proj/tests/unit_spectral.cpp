#include "doctest.h"

#include <stdexcept>

#include "l2approx/errors.hpp"
#include "l2approx/oracles.hpp"
#include "l2approx/spectral.hpp"

using namespace l2approx;

namespace {

GroupRingMatrix circle_matrix(const OracleRef& z) {
  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(1), Budget{});
  a.at(0, 0).add_term(parse_word("t", z->alphabet()), Rational(-1), Budget{});
  return a;
}

Rational central_binomial_over_4p(unsigned long p) {
  return Rational(binomial(2 * p, p)) / pow_rational(Rational(4), p);
}

}  // namespace

TEST_CASE("characteristic sequence of 1 - t over the integers") {
  OracleRef z = oracle_free_abelian(1);
  CharSeq seq(circle_matrix(z), Rational(2));
  CHECK(seq.bound() == 2);
  CHECK(seq.gram_size() == 1);
  for (unsigned long p = 0; p <= 12; ++p) CHECK(seq.at(p) == central_binomial_over_4p(p));
  CHECK(seq.emitted() == 13);
}

TEST_CASE("characteristic values match the binomial moment expansion") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a = circle_matrix(z);
  CharSeq seq(a, Rational(2));
  SpectralMoments mom(gram(a), Budget{});
  for (unsigned long p = 0; p <= 6; ++p) {
    Rational sum = 0;
    for (unsigned long j = 0; j <= p; ++j) {
      Rational term = Rational(binomial(p, j)) * mom.at(j) /
                      pow_rational(Rational(4), j);
      sum += (j % 2 == 0) ? term : -term;
    }
    CHECK(seq.at(p) == sum);
  }
}

TEST_CASE("block diagonal doubles the sequence") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 2, 2);
  a.at(0, 0) = circle_matrix(z).at(0, 0);
  a.at(1, 1) = a.at(0, 0);
  CharSeq seq(a, Rational(2));
  CHECK(seq.gram_size() == 2);
  CHECK(seq.at(0) == 2);
  for (unsigned long p = 1; p <= 6; ++p)
    CHECK(seq.at(p) == Rational(2) * central_binomial_over_4p(p));
}

TEST_CASE("a norm bound that is too small is caught") {
  OracleRef z = oracle_free_abelian(1);
  CharSeq seq(circle_matrix(z), Rational(1));
  CHECK(seq.at(0) == 1);
  CHECK_THROWS_AS(seq.at(1), ModeViolation);
}

TEST_CASE("upper stream values") {
  OracleRef z = oracle_free_abelian(1);
  RealStream up = dimker_upper(circle_matrix(z));
  CHECK(up.mode() == StreamMode::MonotoneUpper);
  CHECK(up.at(0) == 1);
  CHECK(up.at(1) == Rational(1, 2));
  CHECK(up.at(8) == Rational(6435, 32768));
}

TEST_CASE("certified lower terms at frozen inputs") {
  // 1 + s over Z/2: c_{k^2} is exactly 1/2 for k >= 1, and with a zero
  // certificate the k = 2 term is 1/2 - (7/8)^4.
  std::vector<std::vector<std::uint32_t>> tbl = {{0, 1}, {1, 0}};
  OracleRef z2 = oracle_finite(FiniteQuotient::from_table(tbl, {1}, {}, true), Alphabet({"s"}));
  GroupRingMatrix a(z2, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(1), Budget{});
  a.at(0, 0).add_term(parse_word("s", z2->alphabet()), Rational(1), Budget{});
  CHECK(dimker_lower_term(a, Rational(2), DetClassCertificate{Rational(0)}, 2) ==
        Rational(-353, 4096));

  // Zero 1x1 matrix: every characteristic value is 1, so the k = 4 term with
  // zero certificate is 1 - (3/4)^16.
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix zero(z, 1, 1);
  CHECK(dimker_lower_term(zero, Rational(1), DetClassCertificate{Rational(0)}, 4) ==
        Rational(1) - pow_rational(Rational(3, 4), 16));
}

TEST_CASE("lower terms never exceed the kernel dimension") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a = circle_matrix(z);  // trivial kernel
  CharSeq seq(a, Rational(2));
  DetClassCertificate cert{Rational(3)};
  for (unsigned long k = 2; k <= 5; ++k) CHECK(dimker_lower_term(seq, cert, k) <= 0);
}

TEST_CASE("bracket over the integers runs out of indices") {
  OracleRef z = oracle_free_abelian(1);
  BracketOptions opts;
  opts.max_iters = 9;
  BracketResult r = dimker_bracket(circle_matrix(z), opts);
  CHECK(r.status == BracketStatus::IterationsExhausted);
  CHECK(r.steps.size() == 9);
  CHECK(r.steps.front().p == 0);
  CHECK(r.steps.front().hi == 1);
  CHECK(r.lo == 0);
  CHECK(r.hi == Rational(6435, 32768));
  CHECK(r.norm_bound == 2);
  for (std::size_t i = 1; i < r.steps.size(); ++i) {
    CHECK(r.steps[i].hi <= r.steps[i - 1].hi);
    CHECK(r.steps[i].lo >= r.steps[i - 1].lo);
    CHECK(r.steps[i].lo <= r.steps[i].hi);
  }
}

TEST_CASE("bracket collapses exactly for 2 over the integers") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(2), Budget{});
  BracketResult r = dimker_bracket(a);
  CHECK(r.status == BracketStatus::Exact);
  CHECK(r.lo == 0);
  CHECK(r.hi == 0);
}

TEST_CASE("faithful finite quotient gives the exact answer in one step") {
  std::vector<std::vector<std::uint32_t>> tbl = {{0, 1}, {1, 0}};
  OracleRef z2 = oracle_finite(FiniteQuotient::from_table(tbl, {1}, {}, true), Alphabet({"s"}));
  GroupRingMatrix a(z2, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(1), Budget{});
  a.at(0, 0).add_term(parse_word("s", z2->alphabet()), Rational(1), Budget{});
  BracketResult r = dimker_bracket(a);
  CHECK(r.status == BracketStatus::Exact);
  CHECK(r.lo == Rational(1, 2));
  CHECK(r.hi == Rational(1, 2));
  CHECK(r.steps.size() == 1);
  CHECK(r.steps[0].p == 0);
}

TEST_CASE("budget exhaustion leaves a valid bracket") {
  OracleRef z = oracle_free_abelian(1);
  BracketOptions opts;
  opts.budget.mem_terms = 2;
  BracketResult r = dimker_bracket(circle_matrix(z), opts);
  CHECK(r.status == BracketStatus::BudgetExceeded);
  CHECK(r.lo == 0);
  CHECK(r.hi == 1);
  CHECK(r.lo <= r.hi);
}

TEST_CASE("fractional coefficients are rescaled for the derived certificate") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(1, 2), Budget{});
  a.at(0, 0).add_term(parse_word("t", z->alphabet()), Rational(-1, 2), Budget{});
  BracketOptions opts;
  opts.max_iters = 5;
  BracketResult r = dimker_bracket(a, opts);
  // (1 - t)/2 has the same kernel as 1 - t; the derived certificate must
  // come from the integral rescale, with the norm bound rescaled along.
  CHECK(r.cert_used.has_value());
  CHECK(r.hi <= Rational(1, 2));
  CHECK(r.lo == 0);
}

TEST_CASE("paired streams agree with the bracket data") {
  OracleRef z = oracle_free_abelian(1);
  DimkerStreams s = dimker_streams(circle_matrix(z));
  CHECK(s.upper.mode() == StreamMode::MonotoneUpper);
  CHECK(s.lower.mode() == StreamMode::MonotoneLower);
  CHECK(s.upper.at(3) == Rational(5, 16));
  CHECK(s.lower.at(0) == 0);
  CHECK(s.lower.at(4) == 0);  // trivial kernel: certified floor stays at zero
}

TEST_CASE("log-determinant of 2 - t with a certified ratio") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(2), Budget{});
  a.at(0, 0).add_term(parse_word("t", z->alphabet()), Rational(-1), Budget{});
  TailSpec spec;
  spec.kind = TailSpec::Kind::CertifiedRatio;
  spec.rho = Rational(8, 9);
  FkLogdetResult r = fk_logdet_partial(a, Rational(3), 50, spec);
  CHECK(!r.heuristic);
  CHECK(r.terms == 50);
  // ln 2 bracketed to 18 decimal places
  Rational ln2_lo(Integer("693147180559945309"), Integer("1000000000000000000"));
  Rational ln2_hi(Integer("693147180559945310"), Integer("1000000000000000000"));
  CHECK(r.value.lo <= ln2_lo);
  CHECK(r.value.hi >= ln2_hi);
  CHECK(r.value.width() <= Rational(1, 1000));
}

TEST_CASE("log-determinant input validation") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(2), Budget{});
  a.at(0, 0).add_term(parse_word("t", z->alphabet()), Rational(-1), Budget{});
  TailSpec bad;
  bad.kind = TailSpec::Kind::CertifiedRatio;
  bad.rho = Rational(1);
  CHECK_THROWS_AS(fk_logdet_partial(a, Rational(3), 10, bad), std::invalid_argument);
  TailSpec ok;
  ok.kind = TailSpec::Kind::CertifiedRatio;
  ok.rho = Rational(1, 2);
  CHECK_THROWS_AS(fk_logdet_partial(a, Rational(2), 10, ok), std::invalid_argument);
}

TEST_CASE("log-determinant of the identity is exactly zero") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a = GroupRingMatrix::identity(z, 1);
  TailSpec spec;
  spec.kind = TailSpec::Kind::CertifiedRatio;
  spec.rho = Rational(1, 2);
  FkLogdetResult r = fk_logdet_partial(a, Rational(1), 8, spec);
  CHECK(r.value.lo == 0);
  CHECK(r.value.hi == 0);
  CHECK(!r.heuristic);
}

TEST_CASE("observed tails are flagged heuristic") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(2), Budget{});
  a.at(0, 0).add_term(parse_word("t", z->alphabet()), Rational(-1), Budget{});
  TailSpec spec;  // ObservedGeometric
  FkLogdetResult r = fk_logdet_partial(a, std::nullopt, 30, spec);
  CHECK(r.heuristic);
  CHECK(r.value.lo <= r.value.hi);
}

TEST_CASE("torsion of the circle complex brackets zero") {
  OracleRef z = oracle_free_abelian(1);
  TorsionInput in;
  in.boundaries.push_back(circle_matrix(z));
  in.tail.kind = TailSpec::Kind::NovikovShubin;
  in.tail.c = Rational(23, 10);
  in.tail.alpha_num = 1;
  in.tail.alpha_den = 2;
  TorsionResult r = torsion_estimate(in, 200);
  CHECK(!r.heuristic);
  CHECK(r.degrees.size() == 1);
  CHECK(r.value.contains(Rational(0)));
  CHECK(r.value.width() <= Rational(1, 10));
}

TEST_CASE("torsion rejects non-chaining shapes") {
  OracleRef z = oracle_free_abelian(1);
  TorsionInput in;
  in.boundaries.push_back(circle_matrix(z));       // 1x1 in degree 1
  in.boundaries.emplace_back(z, 3, 2);             // cols != rows below
  in.tail.kind = TailSpec::Kind::CertifiedRatio;
  in.tail.rho = Rational(1, 2);
  CHECK_THROWS_AS(torsion_estimate(in, 10), std::invalid_argument);
}
