#include "l2approx/io.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// Whitespace split that keeps a double-quoted span as one token.
std::vector<std::string> split_quoted(const std::string& s, const std::string& path,
                                      std::size_t line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quotes = false;
  bool have = false;
  for (char c : s) {
    if (c == '"') {
      in_quotes = !in_quotes;
      have = true;
      continue;
    }
    if (!in_quotes && std::isspace(static_cast<unsigned char>(c))) {
      if (have || !cur.empty()) out.push_back(cur);
      cur.clear();
      have = false;
      continue;
    }
    cur += c;
  }
  if (in_quotes) throw ParseError(path, line, "unterminated quote");
  if (have || !cur.empty()) out.push_back(cur);
  return out;
}

bool is_rational_literal(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0) return false;
  if (i == s.size()) return true;
  if (s[i] != '/') return false;
  ++i;
  digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    ++i;
    ++digits;
  }
  return digits > 0 && i == s.size();
}

std::size_t parse_size(const std::string& s, const std::string& path, std::size_t line,
                       const char* what) {
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(path, line, std::string("expected a non-negative integer for ") + what);
  }
  if (s.empty()) throw ParseError(path, line, std::string("expected a value for ") + what);
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (const std::exception&) {
    throw ParseError(path, line, std::string("value out of range for ") + what);
  }
}

std::string resolve(const std::string& base_file, const std::string& ref) {
  std::filesystem::path p(ref);
  if (p.is_absolute()) return ref;
  return (std::filesystem::path(base_file).parent_path() / p).string();
}

// Skips blank and '#' lines, tracking physical line numbers for errors.
class LineReader {
 public:
  explicit LineReader(std::string path) : path_(std::move(path)), in_(path_) {
    if (!in_) throw ParseError(path_, 0, "cannot open file");
  }

  std::optional<std::pair<std::size_t, std::string>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      return std::make_pair(line_, t);
    }
    return std::nullopt;
  }

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

std::pair<std::size_t, std::string> require_line(LineReader& r, const char* what) {
  auto got = r.next();
  if (!got) throw ParseError(r.path(), r.line(), std::string("expected ") + what);
  return *got;
}

void require_end(LineReader& r) {
  if (auto extra = r.next())
    throw ParseError(r.path(), extra->first, "unexpected content after the last block");
}

GroupRingMatrix parse_matrix_block(LineReader& r, const OracleRef& oracle,
                                   const Budget& budget) {
  auto [hline, header] = require_line(r, "a matrix header");
  std::vector<std::string> toks = split_ws(header);
  if (toks.size() != 3 || toks[0] != "matrix")
    throw ParseError(r.path(), hline, "expected `matrix <rows> <cols>`");
  std::size_t m = parse_size(toks[1], r.path(), hline, "rows");
  std::size_t n = parse_size(toks[2], r.path(), hline, "cols");
  GroupRingMatrix out(oracle, m, n);
  if (n == 0) return out;
  for (std::size_t i = 0; i < m; ++i) {
    auto [rline, row] = require_line(r, "a matrix row");
    std::vector<std::string> entries = split_on(row, ';');
    if (entries.size() != n)
      throw ParseError(r.path(), rline,
                       "expected " + std::to_string(n) + " entries, got " +
                           std::to_string(entries.size()));
    for (std::size_t j = 0; j < n; ++j) {
      try {
        out.at(i, j) = parse_ring_element(entries[j], oracle, budget);
      } catch (const std::invalid_argument& e) {
        throw ParseError(r.path(), rline,
                         "entry " + std::to_string(j + 1) + ": " + e.what());
      }
    }
  }
  return out;
}

}  // namespace

GroupRingElement parse_ring_element(const std::string& text, const OracleRef& oracle,
                                    const Budget& budget) {
  std::vector<std::string> raw = split_ws(text);
  // Detach leading signs so `-1*t` and `- 1*t` read the same.
  std::vector<std::string> toks;
  for (const std::string& f : raw) {
    if (f.size() > 1 && (f[0] == '+' || f[0] == '-')) {
      toks.emplace_back(1, f[0]);
      toks.push_back(f.substr(1));
    } else {
      toks.push_back(f);
    }
  }
  if (toks.empty()) throw std::invalid_argument("empty entry");
  GroupRingElement out(oracle);
  std::size_t i = 0;
  bool first = true;
  while (i < toks.size()) {
    bool negate = false;
    if (toks[i] == "+" || toks[i] == "-") {
      negate = toks[i] == "-";
      ++i;
      if (i == toks.size()) throw std::invalid_argument("dangling sign");
    } else if (!first) {
      throw std::invalid_argument("terms must be separated by + or -");
    }
    std::vector<std::string> term;
    while (i < toks.size() && toks[i] != "+" && toks[i] != "-") {
      term.push_back(toks[i]);
      ++i;
    }
    if (term.empty()) throw std::invalid_argument("empty term");
    std::string joined = term[0];
    for (std::size_t t = 1; t < term.size(); ++t) joined += " " + term[t];
    Rational coeff(1);
    std::string wordpart;
    std::size_t star = joined.find('*');
    if (star != std::string::npos) {
      std::string rat = trim(joined.substr(0, star));
      if (!is_rational_literal(rat))
        throw std::invalid_argument("expected a rational before '*' in `" + joined + "`");
      coeff = rational_from_string(rat);
      wordpart = trim(joined.substr(star + 1));
      if (wordpart.empty()) throw std::invalid_argument("missing word after '*'");
    } else if (term.size() == 1 && is_rational_literal(term[0])) {
      coeff = rational_from_string(term[0]);
      wordpart = "1";
    } else {
      wordpart = joined;
    }
    Word w = parse_word(wordpart, oracle->alphabet());
    if (negate) coeff = -coeff;
    out.add_term(w, coeff, budget);
    first = false;
  }
  return out;
}

TableFile load_table(const std::string& path) {
  LineReader r(path);
  auto [hline, header] = require_line(r, "`order <N>`");
  std::vector<std::string> toks = split_ws(header);
  if (toks.size() != 2 || toks[0] != "order")
    throw ParseError(path, hline, "expected `order <N>`");
  std::size_t n = parse_size(toks[1], path, hline, "order");
  if (n == 0) throw ParseError(path, hline, "order must be positive");
  std::vector<std::vector<std::uint32_t>> mul(n);
  for (std::size_t g = 0; g < n; ++g) {
    auto [rline, row] = require_line(r, "a multiplication-table row");
    std::vector<std::string> cells = split_ws(row);
    if (cells.size() != n)
      throw ParseError(path, rline,
                       "expected " + std::to_string(n) + " indices, got " +
                           std::to_string(cells.size()));
    mul[g].reserve(n);
    for (const std::string& c : cells) {
      std::size_t v = parse_size(c, path, rline, "table index");
      if (v >= n) throw ParseError(path, rline, "table index out of range");
      mul[g].push_back(static_cast<std::uint32_t>(v));
    }
  }
  std::vector<std::string> names;
  std::vector<std::uint32_t> images;
  while (auto got = r.next()) {
    auto [gline, line] = *got;
    std::vector<std::string> parts = split_ws(line);
    if (parts.size() != 3 || parts[0] != "gen")
      throw ParseError(path, gline, "expected `gen <name> <index>`");
    std::size_t v = parse_size(parts[2], path, gline, "generator index");
    if (v >= n) throw ParseError(path, gline, "generator index out of range");
    names.push_back(parts[1]);
    images.push_back(static_cast<std::uint32_t>(v));
  }
  if (names.empty()) throw ParseError(path, r.line(), "expected at least one `gen` line");
  try {
    FiniteQuotient q = FiniteQuotient::from_table(std::move(mul), images, {}, true);
    return TableFile{std::move(q), Alphabet(std::move(names))};
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, hline, e.what());
  }
}

OracleRef load_group(const std::string& path) {
  LineReader r(path);
  auto [gline, line] = require_line(r, "a group line");
  std::vector<std::string> toks = split_quoted(line, path, gline);
  if (toks.size() < 2 || toks[0] != "group")
    throw ParseError(path, gline, "expected `group <kind> ...`");
  const std::string& kind = toks[1];
  try {
    if (kind == "free") {
      std::vector<std::string> names(toks.begin() + 2, toks.end());
      if (names.empty()) throw ParseError(path, gline, "free group needs generator names");
      return oracle_free(Alphabet(std::move(names)));
    }
    if (kind == "abelian") {
      if (toks.size() != 3) throw ParseError(path, gline, "expected `group abelian <rank>`");
      return oracle_free_abelian(parse_size(toks[2], path, gline, "rank"));
    }
    if (kind == "finite") {
      if (toks.size() != 3)
        throw ParseError(path, gline, "expected `group finite <table-file>`");
      TableFile t = load_table(resolve(path, toks[2]));
      return oracle_finite(std::move(t.quotient), std::move(t.alphabet));
    }
    if (kind == "lamplighter") {
      if (toks.size() != 2) throw ParseError(path, gline, "expected `group lamplighter`");
      return oracle_lamplighter();
    }
    if (kind == "product") {
      if (toks.size() != 4)
        throw ParseError(path, gline, "expected `group product <file> <file>`");
      OracleRef left = load_group(resolve(path, toks[2]));
      OracleRef right = load_group(resolve(path, toks[3]));
      return oracle_direct_product(std::move(left), std::move(right));
    }
    if (kind == "fp") {
      std::vector<std::string> names;
      std::vector<std::string> relator_text;
      bool past_bar = false;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (!past_bar && toks[i] == "|") {
          past_bar = true;
          continue;
        }
        (past_bar ? relator_text : names).push_back(toks[i]);
      }
      if (names.empty()) throw ParseError(path, gline, "fp group needs generator names");
      Alphabet ab(std::move(names));
      std::vector<Word> relators;
      relators.reserve(relator_text.size());
      for (const std::string& t : relator_text) relators.push_back(parse_word(t, ab));
      return oracle_fp_residually_finite(std::move(ab), std::move(relators));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, gline, e.what());
  }
  throw ParseError(path, gline, "unknown group kind `" + kind + "`");
}

GroupRingMatrix load_matrix(const std::string& path, const OracleRef& oracle,
                            const Budget& budget) {
  LineReader r(path);
  GroupRingMatrix out = parse_matrix_block(r, oracle, budget);
  require_end(r);
  return out;
}

FinPresComplex load_complex(const std::string& path, const OracleRef& oracle,
                            const Budget& budget) {
  LineReader r(path);
  auto [hline, header] = require_line(r, "`complex <k>`");
  std::vector<std::string> toks = split_ws(header);
  if (toks.size() != 2 || toks[0] != "complex")
    throw ParseError(path, hline, "expected `complex <k>`");
  std::size_t k = parse_size(toks[1], path, hline, "degree");
  auto [rline, rankline] = require_line(r, "`ranks n0 .. n_{k+1}`");
  std::vector<std::string> rtoks = split_ws(rankline);
  if (rtoks.size() != k + 3 || rtoks[0] != "ranks")
    throw ParseError(path, rline,
                     "expected `ranks` followed by " + std::to_string(k + 2) + " values");
  FinPresComplex c;
  c.length = k;
  c.ranks.reserve(k + 2);
  for (std::size_t i = 1; i < rtoks.size(); ++i)
    c.ranks.push_back(parse_size(rtoks[i], path, rline, "rank"));
  c.boundaries.reserve(k + 1);
  for (std::size_t p = 1; p <= k + 1; ++p) {
    GroupRingMatrix b = parse_matrix_block(r, oracle, budget);
    if (b.rows() != c.ranks[p] || b.cols() != c.ranks[p - 1])
      throw ParseError(path, r.line(),
                       "boundary " + std::to_string(p) + " shape disagrees with the ranks");
    c.boundaries.push_back(std::move(b));
  }
  require_end(r);
  return c;
}

}  // namespace l2approx
