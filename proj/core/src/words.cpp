#include "l2approx/words.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace l2approx {

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw std::invalid_argument("alphabet: no generators");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const std::string& n = names_[i];
    if (!valid_name(n)) throw std::invalid_argument("alphabet: bad generator name '" + n + "'");
    if (n == "1") throw std::invalid_argument("alphabet: '1' is reserved");
    if (!index_.emplace(n, i).second) {
      throw std::invalid_argument("alphabet: duplicate generator '" + n + "'");
    }
  }
}

std::size_t Alphabet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? npos : it->second;
}

Word Word::from_letters(const std::vector<Letter>& ls) {
  std::vector<std::int32_t> raw;
  raw.reserve(ls.size());
  for (const Letter& l : ls) {
    raw.push_back(static_cast<std::int32_t>(l.gen + 1) * l.sign);
  }
  return Word(std::move(raw));
}

Letter Word::letter(std::size_t i) const {
  std::int32_t v = letters_.at(i);
  return Letter{static_cast<std::uint32_t>((v < 0 ? -v : v) - 1),
                static_cast<std::int8_t>(v < 0 ? -1 : 1)};
}

void Word::push(Letter l) {
  letters_.push_back(static_cast<std::int32_t>(l.gen + 1) * l.sign);
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (letters_.size() != other.letters_.size()) {
    return letters_.size() <=> other.letters_.size();
  }
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] != other.letters_[i]) return letters_[i] <=> other.letters_[i];
  }
  return std::strong_ordering::equal;
}

Word free_reduce(const Word& w) {
  std::vector<std::int32_t> out;
  out.reserve(w.size());
  for (std::int32_t v : w.raw()) {
    if (!out.empty() && out.back() == -v) {
      out.pop_back();
    } else {
      out.push_back(v);
    }
  }
  return Word(std::move(out));
}

Word invert(const Word& w) {
  std::vector<std::int32_t> out;
  out.reserve(w.size());
  for (auto it = w.raw().rbegin(); it != w.raw().rend(); ++it) out.push_back(-*it);
  return Word(std::move(out));
}

Word concat(const Word& u, const Word& v) {
  std::vector<std::int32_t> out;
  out.reserve(u.size() + v.size());
  out.insert(out.end(), u.raw().begin(), u.raw().end());
  out.insert(out.end(), v.raw().begin(), v.raw().end());
  return Word(std::move(out));
}

Word word_pow(const Word& w, unsigned long e) {
  std::vector<std::int32_t> out;
  out.reserve(w.size() * e);
  for (unsigned long i = 0; i < e; ++i) {
    out.insert(out.end(), w.raw().begin(), w.raw().end());
  }
  return Word(std::move(out));
}

namespace {

[[noreturn]] void parse_fail(std::size_t pos, const std::string& what) {
  throw std::invalid_argument("word parse error at offset " + std::to_string(pos) + ": " + what);
}

struct Token {
  std::size_t pos;
  std::string text;
};

std::vector<Token> split_tokens(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    tokens.push_back(Token{start, text.substr(start, i - start)});
  }
  return tokens;
}

}  // namespace

Word parse_word(const std::string& text, const Alphabet& alphabet) {
  std::vector<Token> tokens = split_tokens(text);
  if (tokens.empty()) parse_fail(0, "empty input");
  if (tokens.size() == 1 && tokens[0].text == "1") return Word();

  Word w;
  for (const Token& tok : tokens) {
    if (tok.text == "1") parse_fail(tok.pos, "'1' must stand alone");
    std::size_t caret = tok.text.find('^');
    std::string name = tok.text.substr(0, caret == std::string::npos ? tok.text.size() : caret);
    std::size_t gen = alphabet.index_of(name);
    if (gen == Alphabet::npos) parse_fail(tok.pos, "unknown generator '" + name + "'");

    long exp = 1;
    if (caret != std::string::npos) {
      std::string es = tok.text.substr(caret + 1);
      if (es.empty()) parse_fail(tok.pos, "missing exponent after '^'");
      std::size_t digits_at = es[0] == '-' ? 1 : 0;
      if (digits_at == es.size()) parse_fail(tok.pos, "missing exponent after '^'");
      for (std::size_t i = digits_at; i < es.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(es[i]))) {
          parse_fail(tok.pos, "bad exponent '" + es + "'");
        }
      }
      errno = 0;
      exp = std::strtol(es.c_str(), nullptr, 10);
      if (errno != 0) parse_fail(tok.pos, "exponent out of range '" + es + "'");
      if (exp == 0) parse_fail(tok.pos, "zero exponent");
    }

    Letter l{static_cast<std::uint32_t>(gen), static_cast<std::int8_t>(exp < 0 ? -1 : 1)};
    long count = exp < 0 ? -exp : exp;
    for (long i = 0; i < count; ++i) w.push(l);
  }
  return w;
}

std::string serialize_word(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    Letter l = w.letter(i);
    std::size_t run = 1;
    while (i + run < w.size() && w.letter(i + run) == l) ++run;
    if (!out.empty()) out += ' ';
    if (l.gen >= alphabet.size()) {
      throw std::invalid_argument("serialize_word: letter outside alphabet");
    }
    out += alphabet.name(l.gen);
    long e = static_cast<long>(run) * l.sign;
    if (e != 1) {
      out += '^';
      out += std::to_string(e);
    }
    i += run;
  }
  return out;
}

}  // namespace l2approx
