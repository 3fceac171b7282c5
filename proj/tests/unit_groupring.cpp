#include "doctest.h"

#include "l2approx/errors.hpp"
#include "l2approx/groupring.hpp"
#include "l2approx/io.hpp"
#include "l2approx/oracles.hpp"
#include "l2approx/words.hpp"

using namespace l2approx;

namespace {

GroupRingElement elem(const char* text, const OracleRef& o) {
  return parse_ring_element(text, o);
}

}  // namespace

TEST_CASE("element arithmetic over the integers group") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingElement a = elem("1 - 1*t", z);        // 1 - t
  GroupRingElement b = elem("1 + 1*t", z);         // 1 + t
  GroupRingElement p = mul(a, b);                  // 1 - t^2
  CHECK(p.term_count() == 2);
  CHECK(p.coefficient_one() == 1);
  CHECK(p.coefficient(parse_word("t^2", z->alphabet())) == -1);
  CHECK(p.coefficient(parse_word("t", z->alphabet())) == 0);

  GroupRingElement s = sub(add(a, b), scalar_mul(Rational(2), GroupRingElement::one(z)));
  CHECK(s.is_zero());  // (1-t) + (1+t) - 2 = 0

  GroupRingElement adj = a.adjoint();              // 1 - t^-1
  CHECK(adj.coefficient(parse_word("t^-1", z->alphabet())) == -1);
  CHECK(adj.adjoint().coefficient(parse_word("t", z->alphabet())) == -1);
}

TEST_CASE("normalization merges words equal in the group") {
  OracleRef z2 = oracle_free_abelian(2);
  GroupRingElement e(z2);
  e.add_term(parse_word("a b", z2->alphabet()), Rational(1), Budget{});
  e.add_term(parse_word("b a", z2->alphabet()), Rational(2), Budget{});
  CHECK(e.term_count() == 1);
  CHECK(e.coeff_abs_sum() == 3);

  e.add_term(parse_word("a b", z2->alphabet()), Rational(-3), Budget{});
  CHECK(e.is_zero());
}

TEST_CASE("inner product matches the identity coefficient of x y*") {
  OracleRef f = oracle_free(Alphabet({"a", "b"}));
  GroupRingElement x = elem("2*a - 1*b + 1/3*a b", f);
  GroupRingElement y = elem("1*a + 5*b^-1 - 2*a b", f);
  CHECK(inner_product(x, y) == mul(x, y.adjoint()).coefficient_one());
  CHECK(inner_product(x, y) == inner_product(y, x));
  CHECK(inner_product(x, x) == x.coeff_square_sum());
  CHECK(x.coeff_square_sum() == Rational(4) + Rational(1) + Rational(1, 9));
  CHECK(x.coeff_abs_sum() == Rational(3) + Rational(1, 3));
}

TEST_CASE("term budget is enforced") {
  OracleRef f = oracle_free(Alphabet({"a"}));
  Budget tight;
  tight.mem_terms = 2;
  GroupRingElement e(f);
  e.add_term(parse_word("1", f->alphabet()), Rational(1), tight);
  e.add_term(parse_word("a", f->alphabet()), Rational(1), tight);
  CHECK_THROWS_AS(e.add_term(parse_word("a^2", f->alphabet()), Rational(1), tight),
                  TermBudgetExceeded);
}

TEST_CASE("matrix shapes and block assembly") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 2, 3);
  a.at(0, 0) = GroupRingElement::one(z);
  a.at(1, 2) = elem("t", z);
  GroupRingMatrix b = adjoint(a);
  CHECK(b.rows() == 3);
  CHECK(b.cols() == 2);
  CHECK(b.at(2, 1).coefficient(parse_word("t^-1", z->alphabet())) == 1);

  GroupRingMatrix h = hcat(a, a);
  CHECK(h.rows() == 2);
  CHECK(h.cols() == 6);
  GroupRingMatrix v = vstack(a, a);
  CHECK(v.rows() == 4);
  CHECK(v.cols() == 3);
  CHECK(v.at(3, 2).coefficient(parse_word("t", z->alphabet())) == 1);

  GroupRingMatrix g = gram(a, Budget{});
  CHECK(g.rows() == g.cols());
  Rational diag = trace(g, Budget{});
  Rational expect = 0;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) expect += a.at(i, j).coeff_square_sum();
  CHECK(diag == expect);
}

TEST_CASE("trace is cyclic") {
  OracleRef f = oracle_free(Alphabet({"a", "b"}));
  GroupRingMatrix a(f, 2, 2);
  a.at(0, 0) = elem("a", f);
  a.at(0, 1) = elem("1 - 1*b", f);
  a.at(1, 0) = elem("2*b a", f);
  a.at(1, 1) = elem("1/2", f);
  GroupRingMatrix b(f, 2, 2);
  b.at(0, 0) = elem("a^-1 + b", f);
  b.at(0, 1) = elem("3*a", f);
  b.at(1, 0) = elem("-1", f);
  b.at(1, 1) = elem("b^-1 a^-1", f);
  CHECK(trace(mat_mul(a, b, Budget{}), Budget{}) == trace(mat_mul(b, a, Budget{}), Budget{}));
}

TEST_CASE("coefficient one-norm lower clamp") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix zero(z, 2, 2);
  CHECK(coeff_one_norm(zero) == 1);

  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0) = elem("1 - 1*t", z);
  CHECK(coeff_one_norm(a) == 2);

  GroupRingMatrix l(z, 1, 1);
  l.at(0, 0) = elem("2 - 1*t - 1*t^-1", z);
  CHECK(coeff_one_norm(l) == 4);

  CHECK(coeff_one_norm(GroupRingMatrix::identity(z, 2)) == 2);
}

TEST_CASE("spectral moments of the circle Laplacian are central binomials") {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a(z, 1, 1);
  a.at(0, 0) = elem("1 - 1*t", z);
  SpectralMoments mom(gram(a, Budget{}), Budget{});
  CHECK(mom.at(0) == 1);
  CHECK(mom.at(1) == 2);
  CHECK(mom.at(2) == 6);
  CHECK(mom.at(3) == 20);
  CHECK(mom.at(4) == 70);
}
