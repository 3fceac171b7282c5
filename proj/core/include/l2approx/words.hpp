#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace l2approx {

// Ordered list of distinct generator names. Words refer to generators by
// index, so an alphabet is only consulted at parse/serialize boundaries and
// by oracles.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  // Index of a generator name, or npos if absent.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const std::string& name) const;

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
};

struct Letter {
  std::uint32_t gen;  // generator index
  std::int8_t sign;   // +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
};

// A word in the free monoid on the generators and their formal inverses.
// Letters are stored as signed indices: +(i+1) for generator i, -(i+1) for
// its inverse. Words are plain values; no reduction happens implicitly.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::int32_t> letters) : letters_(std::move(letters)) {}

  static Word from_letters(const std::vector<Letter>& ls);

  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }
  Letter letter(std::size_t i) const;
  const std::vector<std::int32_t>& raw() const { return letters_; }
  void push(Letter l);

  // Shortlex: by length first, then lexicographically on the raw encoding.
  // This is the canonical key order everywhere group-ring supports are stored.
  std::strong_ordering operator<=>(const Word& other) const;
  bool operator==(const Word& other) const { return letters_ == other.letters_; }

 private:
  std::vector<std::int32_t> letters_;
};

// Removes adjacent inverse pairs until none remain. The result is the unique
// reduced representative of the same free-group element.
Word free_reduce(const Word& w);

// Formal inverse: reversed letters with flipped signs.
Word invert(const Word& w);

// Concatenation, no reduction. Callers are responsible for only combining
// words over the same alphabet; mismatches surface where alphabets are known
// (parsing, oracles, group-ring operations).
Word concat(const Word& u, const Word& v);

// w repeated e times (e >= 0), no reduction.
Word word_pow(const Word& w, unsigned long e);

// Grammar:  word := "1" | token+ ;  token := name | name "^-1" | name "^" int
// with int != 0 meaning the letter repeated |int| times with sign(int).
// Tokens are whitespace-separated; "1" denotes the empty word.
// Throws std::invalid_argument with a position on malformed input or
// unknown generator names.
Word parse_word(const std::string& text, const Alphabet& alphabet);

// Inverse of parse_word on reduced words: runs of a letter print as name^k,
// the empty word prints as "1".
std::string serialize_word(const Word& w, const Alphabet& alphabet);

}  // namespace l2approx
