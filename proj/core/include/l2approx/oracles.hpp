#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "l2approx/rational.hpp"
#include "l2approx/words.hpp"

namespace l2approx {

enum class Ternary { False, True, Unknown };

// A finite group given by its multiplication table, together with where the
// ambient group's generators land. Index 0 is the identity.
struct FiniteQuotient {
  std::uint32_t order = 1;
  std::vector<std::vector<std::uint32_t>> mul;  // order x order
  std::vector<std::uint32_t> inverse;
  std::vector<std::uint32_t> gen_images;  // per alphabet generator
  std::vector<Word> element_words;        // canonical word per element
  bool faithful = false;  // the generator images define an isomorphism onto this table

  // validate_law additionally runs the full group-law check (identity row and
  // column, inverses, associativity) and requires the images to generate.
  static FiniteQuotient from_table(std::vector<std::vector<std::uint32_t>> mul,
                                   std::vector<std::uint32_t> gen_images,
                                   std::vector<Word> element_words, bool validate_law);

  std::uint32_t eval(const Word& w) const;
  void check_group_law() const;  // throws std::invalid_argument on violation
  bool generators_generate() const;
};

FiniteQuotient trivial_quotient(std::size_t generator_count);

// Word-problem oracle for one finitely generated group. is_identity is the
// defining capability; everything else is optional and discovered through
// the has_* probes. Implementations are internally synchronized where they
// cache, and a definite answer never changes across calls.
class WordOracle {
 public:
  static constexpr std::uint64_t kDefaultFuel = 200000;

  virtual ~WordOracle() = default;

  virtual const Alphabet& alphabet() const = 0;

  // Fuel bounds the work of one query. Decidable built-in oracles ignore it
  // and never answer Unknown.
  virtual Ternary is_identity(const Word& w, std::uint64_t fuel = kDefaultFuel) const = 0;

  virtual bool has_normal_form() const { return false; }
  // normal_form(u) == normal_form(v) iff u = v in the group.
  virtual Word normal_form(const Word& w) const;

  virtual bool has_relators() const { return false; }
  virtual std::vector<Word> relators() const;

  virtual bool sofic() const { return true; }

  // q such that the spectral measure of any m x m gram matrix over this
  // group's rational group ring with operator norm <= K^2 satisfies
  // integral over (0,1) of ln x >= -q. Derived from ln det >= 0 for sofic
  // groups; nullopt when the oracle cannot certify one.
  virtual std::optional<Rational> detclass_certificate(std::size_t m, const Rational& K) const;

  virtual bool has_quotient_provider() const { return false; }
  // First quotient in this oracle's deterministic enumeration order in which
  // every forbidden word maps to a non-identity element. cap bounds the
  // quotient order for structured providers and the symmetric-group degree
  // for enumeration-based ones. nullopt means the cap was exhausted, which
  // says nothing about existence.
  virtual std::optional<FiniteQuotient> find_quotient(const std::vector<Word>& forbidden,
                                                      std::uint32_t cap) const;

  // is_identity with Unknown turned into a FuelExhausted throw.
  bool require_identity(const Word& w, std::uint64_t fuel = kDefaultFuel) const;
};

using OracleRef = std::shared_ptr<const WordOracle>;

// Free group on the given alphabet; word problem by free reduction.
OracleRef oracle_free(Alphabet alphabet);

// Free abelian group of the given rank. Generator names: t for rank 1,
// a, b, c, ... otherwise. Relators are the pairwise commutators.
OracleRef oracle_free_abelian(unsigned rank);

// Finite group from an explicit table. The alphabet names the generators
// whose images are recorded in the table.
OracleRef oracle_finite(FiniteQuotient table, Alphabet alphabet);

// Wreath product of the order-2 group by the integers; generators a (lamp at
// the origin) and t (shift).
OracleRef oracle_lamplighter();

// Direct product; the alphabets must be disjoint and letters commute across
// factors.
OracleRef oracle_direct_product(OracleRef first, OracleRef second);

// Finitely presented group assumed residually finite. Queries accept via
// bounded relator-consequence search and reject via finite quotients; both
// searches share the per-query fuel, and exhaustion answers Unknown.
OracleRef oracle_fp_residually_finite(Alphabet alphabet, std::vector<Word> relators);

// Enumerates homomorphisms into symmetric groups S_p for p = 1..cap_degree,
// ordered by ascending p then lexicographically in the tuple of generator
// images, and returns the image subgroup of the first one under which every
// relator dies and every forbidden word survives. tuple_fuel bounds the
// number of tuples inspected.
std::optional<FiniteQuotient> sp_quotient_search(const Alphabet& alphabet,
                                                 const std::vector<Word>& relators,
                                                 const std::vector<Word>& forbidden,
                                                 std::uint32_t cap_degree,
                                                 std::uint64_t tuple_fuel = 20000000);

}  // namespace l2approx
