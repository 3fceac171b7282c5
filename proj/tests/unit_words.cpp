#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "l2approx/words.hpp"

using namespace l2approx;

namespace {
const Alphabet& ab2() {
  static Alphabet a({"a", "b"});
  return a;
}
}  // namespace

TEST_CASE("alphabet construction and lookup") {
  Alphabet a({"x", "y", "z"});
  CHECK(a.size() == 3);
  CHECK(a.index_of("y") == 1);
  CHECK(a.index_of("w") == Alphabet::npos);
  CHECK_THROWS_AS(Alphabet({}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet({"1"}), std::invalid_argument);
}

TEST_CASE("parse and serialize round trip") {
  for (const char* s : {"1", "a", "a^-1", "a b", "a^3 b^-2 a", "b^-1 a^-1"}) {
    Word w = parse_word(s, ab2());
    CHECK(serialize_word(w, ab2()) == s);
  }
  CHECK(parse_word("1", ab2()).empty());
  CHECK(parse_word("a^2", ab2()) == parse_word("a a", ab2()));
  CHECK(parse_word("a^-2", ab2()) == parse_word("a^-1 a^-1", ab2()));
  CHECK_THROWS_AS(parse_word("", ab2()), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("c", ab2()), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("a^0", ab2()), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("a^", ab2()), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("1 a", ab2()), std::invalid_argument);
}

TEST_CASE("free reduction") {
  CHECK(free_reduce(parse_word("a a^-1", ab2())).empty());
  CHECK(free_reduce(parse_word("a b b^-1 a^-1", ab2())).empty());
  CHECK(free_reduce(parse_word("a b b^-1 a", ab2())) == parse_word("a a", ab2()));
  // Reduction cascades through newly adjacent pairs.
  CHECK(free_reduce(parse_word("a b^-1 b a^-1 a", ab2())) == parse_word("a", ab2()));
  CHECK(free_reduce(parse_word("a b a^-1", ab2())) == parse_word("a b a^-1", ab2()));
}

TEST_CASE("invert and concat") {
  Word w = parse_word("a b^-1 a", ab2());
  CHECK(invert(w) == parse_word("a^-1 b a^-1", ab2()));
  CHECK(free_reduce(concat(w, invert(w))).empty());
  CHECK(invert(Word{}).empty());
  CHECK(concat(parse_word("a", ab2()), parse_word("b", ab2())) == parse_word("a b", ab2()));
}

TEST_CASE("word_pow") {
  CHECK(word_pow(parse_word("a b", ab2()), 0).empty());
  CHECK(word_pow(parse_word("a b", ab2()), 3) == parse_word("a b a b a b", ab2()));
}

TEST_CASE("shortlex order") {
  std::vector<Word> sorted = {
      parse_word("1", ab2()),   parse_word("a", ab2()),    parse_word("a^-1", ab2()),
      parse_word("b", ab2()),   parse_word("a a", ab2()),  parse_word("a b", ab2()),
  };
  // Length dominates.
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[i].size() < sorted[j].size()) CHECK(sorted[i] < sorted[j]);
    }
  CHECK(parse_word("a", ab2()) < parse_word("b", ab2()));
  CHECK(parse_word("b", ab2()) < parse_word("a a", ab2()));
  CHECK(!(parse_word("a", ab2()) < parse_word("a", ab2())));
}

TEST_CASE("letter encoding") {
  Word w = parse_word("a b^-1", ab2());
  CHECK(w.size() == 2);
  CHECK(w.letter(0).gen == 0);
  CHECK(w.letter(0).sign == 1);
  CHECK(w.letter(1).gen == 1);
  CHECK(w.letter(1).sign == -1);
  Word built = Word::from_letters({{0, 1}, {1, -1}});
  CHECK(built == w);
}
