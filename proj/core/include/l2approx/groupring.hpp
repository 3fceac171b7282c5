#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "l2approx/oracles.hpp"
#include "l2approx/rational.hpp"

namespace l2approx {

// Resource limits threaded through ring arithmetic. fuel is the per-query
// budget handed to oracle identity tests; mem_terms caps the number of stored
// terms a single matrix operation may produce before TermBudgetExceeded.
struct Budget {
  std::uint64_t fuel = WordOracle::kDefaultFuel;
  std::size_t mem_terms = 1000000;
};

// An element of the rational group ring, stored as a map from canonical key
// words to nonzero coefficients in shortlex key order.
//
// With a normal-form oracle the key is the normal form and lookups are exact.
// Without one, keys are freely reduced words kept pairwise non-identity by
// oracle queries on insert; an Unknown answer aborts with FuelExhausted since
// coefficient extraction would otherwise be silently wrong.
class GroupRingElement {
 public:
  explicit GroupRingElement(OracleRef oracle);

  static GroupRingElement one(OracleRef oracle);
  static GroupRingElement from_word(OracleRef oracle, const Word& w,
                                    const Rational& c = Rational(1), const Budget& budget = {});

  const OracleRef& oracle() const { return oracle_; }
  const std::map<Word, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Word& w, const Rational& c, const Budget& budget = {});
  Rational coefficient(const Word& w, const Budget& budget = {}) const;
  Rational coefficient_one(const Budget& budget = {}) const;

  GroupRingElement& add_in_place(const GroupRingElement& other, const Budget& budget = {});
  GroupRingElement& sub_in_place(const GroupRingElement& other, const Budget& budget = {});
  GroupRingElement& scale_in_place(const Rational& c);

  // Sum of c_w * w^{-1}; coefficients are rational, so no conjugation.
  GroupRingElement adjoint() const;

  Rational coeff_abs_sum() const;
  Rational coeff_square_sum() const;

  friend GroupRingElement mul(const GroupRingElement& a, const GroupRingElement& b,
                              const Budget& budget);

 private:
  Word canonical(const Word& w, const Budget& budget) const;

  OracleRef oracle_;
  std::map<Word, Rational> terms_;
};

GroupRingElement mul(const GroupRingElement& a, const GroupRingElement& b,
                     const Budget& budget = {});
GroupRingElement add(const GroupRingElement& a, const GroupRingElement& b,
                     const Budget& budget = {});
GroupRingElement sub(const GroupRingElement& a, const GroupRingElement& b,
                     const Budget& budget = {});
GroupRingElement scalar_mul(const Rational& c, const GroupRingElement& a);

// Sum over matching canonical keys of x_w * y_w. Equals the identity
// coefficient of x * adjoint(y) but never forms the product.
Rational inner_product(const GroupRingElement& x, const GroupRingElement& y,
                       const Budget& budget = {});

// Dense matrix over the group ring. All entries share one oracle; operations
// on matrices from different oracle instances are rejected.
class GroupRingMatrix {
 public:
  GroupRingMatrix(OracleRef oracle, std::size_t rows, std::size_t cols);

  static GroupRingMatrix identity(OracleRef oracle, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const OracleRef& oracle() const { return oracle_; }

  GroupRingElement& at(std::size_t i, std::size_t j);
  const GroupRingElement& at(std::size_t i, std::size_t j) const;

  std::size_t term_count() const;

 private:
  OracleRef oracle_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<GroupRingElement> entries_;
};

GroupRingMatrix mat_add(const GroupRingMatrix& a, const GroupRingMatrix& b,
                        const Budget& budget = {});
GroupRingMatrix mat_sub(const GroupRingMatrix& a, const GroupRingMatrix& b,
                        const Budget& budget = {});
GroupRingMatrix mat_scale(const GroupRingMatrix& a, const Rational& c);
GroupRingMatrix mat_mul(const GroupRingMatrix& a, const GroupRingMatrix& b,
                        const Budget& budget = {});
GroupRingMatrix adjoint(const GroupRingMatrix& a);

// a * adjoint(a); square and self-adjoint.
GroupRingMatrix gram(const GroupRingMatrix& a, const Budget& budget = {});

GroupRingMatrix hcat(const GroupRingMatrix& a, const GroupRingMatrix& b);
GroupRingMatrix vstack(const GroupRingMatrix& a, const GroupRingMatrix& b);

// Sum of identity coefficients down the diagonal (the unnormalized ring
// trace); requires a square matrix.
Rational trace(const GroupRingMatrix& a, const Budget& budget = {});

// max(1, sum over entries of the coefficient l1 norms); an upper bound for
// the operator norm of the matrix acting on l2 of the group.
Rational coeff_one_norm(const GroupRingMatrix& a);

// Lazily extended trace moments tr(delta^j) of a self-adjoint matrix,
// computed by plain repeated multiplication. Extension is compute-once per
// index and internally synchronized.
class SpectralMoments {
 public:
  explicit SpectralMoments(GroupRingMatrix delta, Budget budget = {});

  Rational at(std::size_t j);

 private:
  std::mutex mutex_;
  GroupRingMatrix delta_;
  GroupRingMatrix power_;
  std::vector<Rational> moments_;
  Budget budget_;
};

}  // namespace l2approx
