#include "l2approx/oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "l2approx/errors.hpp"

namespace l2approx {

// ---------------------------------------------------------------------------
// FiniteQuotient

FiniteQuotient FiniteQuotient::from_table(std::vector<std::vector<std::uint32_t>> mul,
                                          std::vector<std::uint32_t> gen_images,
                                          std::vector<Word> element_words, bool validate_law) {
  FiniteQuotient q;
  q.order = static_cast<std::uint32_t>(mul.size());
  if (q.order == 0) throw std::invalid_argument("quotient: empty table");
  q.mul = std::move(mul);
  q.gen_images = std::move(gen_images);
  for (std::uint32_t g : q.gen_images) {
    if (g >= q.order) throw std::invalid_argument("quotient: generator image out of range");
  }
  for (const auto& row : q.mul) {
    if (row.size() != q.order) throw std::invalid_argument("quotient: ragged table");
    for (std::uint32_t v : row) {
      if (v >= q.order) throw std::invalid_argument("quotient: entry out of range");
    }
  }
  q.inverse.assign(q.order, q.order);
  for (std::uint32_t i = 0; i < q.order; ++i) {
    for (std::uint32_t j = 0; j < q.order; ++j) {
      if (q.mul[i][j] == 0) {
        q.inverse[i] = j;
        break;
      }
    }
    if (q.inverse[i] == q.order) throw std::invalid_argument("quotient: element with no inverse");
  }
  if (!element_words.empty() && element_words.size() != q.order) {
    throw std::invalid_argument("quotient: element word count mismatch");
  }
  q.element_words = std::move(element_words);
  if (validate_law) {
    q.check_group_law();
    if (!q.generators_generate()) {
      throw std::invalid_argument("quotient: generator images do not generate");
    }
  }
  if (q.element_words.empty()) {
    // Canonical words by breadth-first search from the identity, letters in
    // alphabet order, positive sign first.
    q.element_words.assign(q.order, Word());
    std::vector<bool> seen(q.order, false);
    seen[0] = true;
    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
      std::uint32_t cur = queue.front();
      queue.pop_front();
      for (std::size_t g = 0; g < q.gen_images.size(); ++g) {
        for (int sign : {+1, -1}) {
          std::uint32_t img = q.gen_images[g];
          std::uint32_t next = q.mul[cur][sign > 0 ? img : q.inverse[img]];
          if (seen[next]) continue;
          seen[next] = true;
          Word w = q.element_words[cur];
          w.push(Letter{static_cast<std::uint32_t>(g), static_cast<std::int8_t>(sign)});
          q.element_words[next] = std::move(w);
          queue.push_back(next);
        }
      }
    }
  }
  return q;
}

std::uint32_t FiniteQuotient::eval(const Word& w) const {
  std::uint32_t cur = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Letter l = w.letter(i);
    if (l.gen >= gen_images.size()) throw std::invalid_argument("quotient: letter outside alphabet");
    std::uint32_t img = gen_images[l.gen];
    cur = mul[cur][l.sign > 0 ? img : inverse[img]];
  }
  return cur;
}

void FiniteQuotient::check_group_law() const {
  for (std::uint32_t j = 0; j < order; ++j) {
    if (mul[0][j] != j) throw std::invalid_argument("quotient: index 0 is not a left identity");
    if (mul[j][0] != j) throw std::invalid_argument("quotient: index 0 is not a right identity");
  }
  for (std::uint32_t i = 0; i < order; ++i) {
    if (mul[i][inverse[i]] != 0 || mul[inverse[i]][i] != 0) {
      throw std::invalid_argument("quotient: inverse is one-sided");
    }
  }
  // Associativity is cubic; only run it at exhaustively checkable sizes.
  if (order <= 256) {
    for (std::uint32_t i = 0; i < order; ++i) {
      for (std::uint32_t j = 0; j < order; ++j) {
        for (std::uint32_t k = 0; k < order; ++k) {
          if (mul[mul[i][j]][k] != mul[i][mul[j][k]]) {
            throw std::invalid_argument("quotient: associativity fails");
          }
        }
      }
    }
  }
}

bool FiniteQuotient::generators_generate() const {
  std::vector<bool> seen(order, false);
  seen[0] = true;
  std::deque<std::uint32_t> queue{0};
  std::uint32_t reached = 1;
  while (!queue.empty()) {
    std::uint32_t cur = queue.front();
    queue.pop_front();
    for (std::uint32_t img : gen_images) {
      for (std::uint32_t next : {mul[cur][img], mul[cur][inverse[img]]}) {
        if (!seen[next]) {
          seen[next] = true;
          ++reached;
          queue.push_back(next);
        }
      }
    }
  }
  return reached == order;
}

FiniteQuotient trivial_quotient(std::size_t generator_count) {
  FiniteQuotient q;
  q.order = 1;
  q.mul = {{0}};
  q.inverse = {0};
  q.gen_images.assign(generator_count, 0);
  q.element_words = {Word()};
  q.faithful = false;
  return q;
}

// ---------------------------------------------------------------------------
// WordOracle defaults

Word WordOracle::normal_form(const Word&) const {
  throw std::logic_error("oracle: no normal form capability");
}

std::vector<Word> WordOracle::relators() const {
  throw std::logic_error("oracle: no relators capability");
}

std::optional<Rational> WordOracle::detclass_certificate(std::size_t m, const Rational& K) const {
  if (!sofic()) return std::nullopt;
  // Sofic groups have nonnegative log-determinants over the integral group
  // ring, so the negative part of the log integral is at most the positive
  // part, which is at most m * ln(K^2).
  Rational d = K * K;
  if (d < 1) d = 1;
  return Rational(Integer(m)) * Rational(ceil_ln(d)) + 1;
}

std::optional<FiniteQuotient> WordOracle::find_quotient(const std::vector<Word>&,
                                                        std::uint32_t) const {
  return std::nullopt;
}

bool WordOracle::require_identity(const Word& w, std::uint64_t fuel) const {
  switch (is_identity(w, fuel)) {
    case Ternary::True:
      return true;
    case Ternary::False:
      return false;
    default:
      throw FuelExhausted("oracle: identity query undecided within fuel");
  }
}

// ---------------------------------------------------------------------------
// Symmetric-group homomorphism search

namespace {

using Perm = std::vector<std::uint8_t>;

Perm perm_identity(std::uint32_t p) {
  Perm e(p);
  for (std::uint32_t i = 0; i < p; ++i) e[i] = static_cast<std::uint8_t>(i);
  return e;
}

// compose(s, t) applies s first, then t; matches left-to-right word products.
Perm perm_compose(const Perm& s, const Perm& t) {
  Perm r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r[i] = t[s[i]];
  return r;
}

Perm perm_invert(const Perm& s) {
  Perm r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r[s[i]] = static_cast<std::uint8_t>(i);
  return r;
}

bool perm_is_identity(const Perm& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != i) return false;
  }
  return true;
}

std::vector<Perm> all_perms(std::uint32_t p) {
  Perm base = perm_identity(p);
  std::vector<Perm> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

Perm eval_perm_word(const Word& w, const std::vector<Perm>& images) {
  std::uint32_t p = images.empty() ? 1 : static_cast<std::uint32_t>(images[0].size());
  Perm cur = perm_identity(p);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Letter l = w.letter(i);
    const Perm& g = images.at(l.gen);
    cur = perm_compose(cur, l.sign > 0 ? g : perm_invert(g));
  }
  return cur;
}

FiniteQuotient quotient_from_perm_images(const std::vector<Perm>& images, std::uint32_t p) {
  std::map<Perm, std::uint32_t> index;
  std::vector<Perm> elements;
  std::vector<Word> words;
  elements.push_back(perm_identity(p));
  words.emplace_back();
  index.emplace(elements[0], 0);
  std::deque<std::uint32_t> queue{0};
  while (!queue.empty()) {
    std::uint32_t cur = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < images.size(); ++g) {
      for (int sign : {+1, -1}) {
        Perm next = perm_compose(elements[cur], sign > 0 ? images[g] : perm_invert(images[g]));
        if (index.count(next)) continue;
        auto id = static_cast<std::uint32_t>(elements.size());
        index.emplace(next, id);
        elements.push_back(std::move(next));
        Word w = words[cur];
        w.push(Letter{static_cast<std::uint32_t>(g), static_cast<std::int8_t>(sign)});
        words.push_back(std::move(w));
        queue.push_back(id);
      }
    }
  }
  auto order = static_cast<std::uint32_t>(elements.size());
  std::vector<std::vector<std::uint32_t>> mul(order, std::vector<std::uint32_t>(order));
  for (std::uint32_t i = 0; i < order; ++i) {
    for (std::uint32_t j = 0; j < order; ++j) {
      mul[i][j] = index.at(perm_compose(elements[i], elements[j]));
    }
  }
  std::vector<std::uint32_t> gen_images;
  gen_images.reserve(images.size());
  for (const Perm& g : images) gen_images.push_back(index.at(g));
  return FiniteQuotient::from_table(std::move(mul), std::move(gen_images), std::move(words), false);
}

}  // namespace

std::optional<FiniteQuotient> sp_quotient_search(const Alphabet& alphabet,
                                                 const std::vector<Word>& relators,
                                                 const std::vector<Word>& forbidden,
                                                 std::uint32_t cap_degree,
                                                 std::uint64_t tuple_fuel) {
  std::vector<Word> rel, forb;
  for (const Word& r : relators) {
    Word rr = free_reduce(r);
    if (!rr.empty()) rel.push_back(std::move(rr));
  }
  for (const Word& w : forbidden) {
    Word wr = free_reduce(w);
    if (wr.empty()) return std::nullopt;  // the identity is never separable
    forb.push_back(std::move(wr));
  }
  if (cap_degree > 8) cap_degree = 8;
  std::size_t s = alphabet.size();
  for (std::uint32_t p = 1; p <= cap_degree; ++p) {
    std::vector<Perm> perms = all_perms(p);
    std::vector<std::size_t> odo(s, 0);
    std::vector<Perm> images(s);
    while (true) {
      if (tuple_fuel-- == 0) return std::nullopt;
      for (std::size_t g = 0; g < s; ++g) images[g] = perms[odo[g]];
      bool ok = true;
      for (const Word& r : rel) {
        if (!perm_is_identity(eval_perm_word(r, images))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (const Word& w : forb) {
          if (perm_is_identity(eval_perm_word(w, images))) {
            ok = false;
            break;
          }
        }
      }
      if (ok) return quotient_from_perm_images(images, p);
      // Lexicographic odometer, last generator fastest.
      std::size_t g = s;
      while (g > 0) {
        --g;
        if (++odo[g] < perms.size()) break;
        odo[g] = 0;
        if (g == 0) goto next_degree;
      }
    }
  next_degree:;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Free group

namespace {

class FreeOracle final : public WordOracle {
 public:
  explicit FreeOracle(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const override { return alphabet_; }

  Ternary is_identity(const Word& w, std::uint64_t) const override {
    return free_reduce(w).empty() ? Ternary::True : Ternary::False;
  }

  bool has_normal_form() const override { return true; }
  Word normal_form(const Word& w) const override { return free_reduce(w); }

  bool has_relators() const override { return true; }
  std::vector<Word> relators() const override { return {}; }

  bool has_quotient_provider() const override { return true; }
  std::optional<FiniteQuotient> find_quotient(const std::vector<Word>& forbidden,
                                              std::uint32_t cap) const override {
    return sp_quotient_search(alphabet_, {}, forbidden, cap);
  }

 private:
  Alphabet alphabet_;
};

}  // namespace

OracleRef oracle_free(Alphabet alphabet) {
  return std::make_shared<FreeOracle>(std::move(alphabet));
}

// ---------------------------------------------------------------------------
// Free abelian groups

namespace {

std::vector<long long> exponent_vector(const Word& w, std::size_t rank) {
  std::vector<long long> e(rank, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Letter l = w.letter(i);
    if (l.gen >= rank) throw std::invalid_argument("oracle: letter outside alphabet");
    e[l.gen] += l.sign;
  }
  return e;
}

class AbelianOracle final : public WordOracle {
 public:
  explicit AbelianOracle(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const override { return alphabet_; }

  Ternary is_identity(const Word& w, std::uint64_t) const override {
    for (long long e : exponent_vector(w, alphabet_.size())) {
      if (e != 0) return Ternary::False;
    }
    return Ternary::True;
  }

  bool has_normal_form() const override { return true; }
  Word normal_form(const Word& w) const override {
    auto e = exponent_vector(w, alphabet_.size());
    Word out;
    for (std::size_t g = 0; g < e.size(); ++g) {
      Letter l{static_cast<std::uint32_t>(g), static_cast<std::int8_t>(e[g] < 0 ? -1 : 1)};
      for (long long i = 0, n = e[g] < 0 ? -e[g] : e[g]; i < n; ++i) out.push(l);
    }
    return out;
  }

  bool has_relators() const override { return true; }
  std::vector<Word> relators() const override {
    std::vector<Word> rs;
    for (std::uint32_t i = 0; i < alphabet_.size(); ++i) {
      for (std::uint32_t j = i + 1; j < alphabet_.size(); ++j) {
        Word r;
        r.push(Letter{i, +1});
        r.push(Letter{j, +1});
        r.push(Letter{i, -1});
        r.push(Letter{j, -1});
        rs.push_back(std::move(r));
      }
    }
    return rs;
  }

  bool has_quotient_provider() const override { return true; }
  std::optional<FiniteQuotient> find_quotient(const std::vector<Word>& forbidden,
                                              std::uint32_t cap) const override {
    std::size_t r = alphabet_.size();
    std::vector<std::vector<long long>> exps;
    exps.reserve(forbidden.size());
    for (const Word& w : forbidden) exps.push_back(exponent_vector(w, r));
    for (std::uint32_t m = 1;; ++m) {
      // order m^r, overflow-safe cap test
      std::uint64_t order = 1;
      bool fits = true;
      for (std::size_t i = 0; i < r; ++i) {
        order *= m;
        if (order > cap) {
          fits = false;
          break;
        }
      }
      if (!fits) return std::nullopt;
      bool separates = true;
      for (const auto& e : exps) {
        bool nonzero = false;
        for (long long c : e) {
          if (c % m != 0) {
            nonzero = true;
            break;
          }
        }
        if (!nonzero) {
          separates = false;
          break;
        }
      }
      if (separates) return build(m, static_cast<std::uint32_t>(order));
    }
  }

 private:
  FiniteQuotient build(std::uint32_t m, std::uint32_t order) const {
    std::size_t r = alphabet_.size();
    auto decode = [&](std::uint32_t idx) {
      std::vector<std::uint32_t> e(r);
      for (std::size_t i = r; i-- > 0;) {
        e[i] = idx % m;
        idx /= m;
      }
      return e;
    };
    auto encode = [&](const std::vector<std::uint32_t>& e) {
      std::uint32_t idx = 0;
      for (std::size_t i = 0; i < r; ++i) idx = idx * m + e[i];
      return idx;
    };
    std::vector<std::vector<std::uint32_t>> mul(order, std::vector<std::uint32_t>(order));
    for (std::uint32_t i = 0; i < order; ++i) {
      auto ei = decode(i);
      for (std::uint32_t j = 0; j < order; ++j) {
        auto ej = decode(j);
        std::vector<std::uint32_t> e(r);
        for (std::size_t k = 0; k < r; ++k) e[k] = (ei[k] + ej[k]) % m;
        mul[i][j] = encode(e);
      }
    }
    std::vector<std::uint32_t> gens(r);
    for (std::size_t g = 0; g < r; ++g) {
      std::vector<std::uint32_t> e(r, 0);
      e[g] = m > 1 ? 1 : 0;
      gens[g] = encode(e);
    }
    std::vector<Word> words(order);
    for (std::uint32_t i = 0; i < order; ++i) {
      auto e = decode(i);
      Word w;
      for (std::size_t g = 0; g < r; ++g) {
        for (std::uint32_t c = 0; c < e[g]; ++c) {
          w.push(Letter{static_cast<std::uint32_t>(g), +1});
        }
      }
      words[i] = std::move(w);
    }
    return FiniteQuotient::from_table(std::move(mul), std::move(gens), std::move(words), false);
  }

  Alphabet alphabet_;
};

}  // namespace

OracleRef oracle_free_abelian(unsigned rank) {
  if (rank == 0) {
    // The word module requires a nonempty alphabet, so the trivial group is
    // hosted on one generator mapped to the identity.
    return oracle_finite(trivial_quotient(1), Alphabet({"x"}));
  }
  std::vector<std::string> names;
  if (rank == 1) {
    names = {"t"};
  } else {
    if (rank > 26) throw std::invalid_argument("oracle: abelian rank limited to 26");
    for (unsigned i = 0; i < rank; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  }
  return std::make_shared<AbelianOracle>(Alphabet(std::move(names)));
}

// ---------------------------------------------------------------------------
// Finite groups

namespace {

class FiniteOracle final : public WordOracle {
 public:
  FiniteOracle(FiniteQuotient table, Alphabet alphabet)
      : table_(std::move(table)), alphabet_(std::move(alphabet)) {
    if (table_.gen_images.size() != alphabet_.size()) {
      throw std::invalid_argument("oracle: table generator count mismatch");
    }
    table_.faithful = true;
  }

  const Alphabet& alphabet() const override { return alphabet_; }

  Ternary is_identity(const Word& w, std::uint64_t) const override {
    return table_.eval(w) == 0 ? Ternary::True : Ternary::False;
  }

  bool has_normal_form() const override { return true; }
  Word normal_form(const Word& w) const override { return table_.element_words[table_.eval(w)]; }

  bool has_quotient_provider() const override { return true; }
  std::optional<FiniteQuotient> find_quotient(const std::vector<Word>& forbidden,
                                              std::uint32_t cap) const override {
    if (table_.order > cap) return std::nullopt;
    for (const Word& w : forbidden) {
      if (table_.eval(w) == 0) return std::nullopt;
    }
    return table_;
  }

 private:
  FiniteQuotient table_;
  Alphabet alphabet_;
};

}  // namespace

OracleRef oracle_finite(FiniteQuotient table, Alphabet alphabet) {
  return std::make_shared<FiniteOracle>(std::move(table), std::move(alphabet));
}

// ---------------------------------------------------------------------------
// Lamplighter

namespace {

struct LampState {
  std::set<long long> lamps;
  long long shift = 0;
};

LampState lamp_eval(const Word& w) {
  LampState s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Letter l = w.letter(i);
    if (l.gen == 0) {
      // lamp toggle at the current position; self-inverse
      auto it = s.lamps.find(s.shift);
      if (it == s.lamps.end()) {
        s.lamps.insert(s.shift);
      } else {
        s.lamps.erase(it);
      }
    } else if (l.gen == 1) {
      s.shift += l.sign;
    } else {
      throw std::invalid_argument("oracle: letter outside alphabet");
    }
  }
  return s;
}

void push_shift(Word& w, long long k) {
  Letter l{1, static_cast<std::int8_t>(k < 0 ? -1 : 1)};
  for (long long i = 0, n = k < 0 ? -k : k; i < n; ++i) w.push(l);
}

class LamplighterOracle final : public WordOracle {
 public:
  LamplighterOracle() : alphabet_({"a", "t"}) {}

  const Alphabet& alphabet() const override { return alphabet_; }

  Ternary is_identity(const Word& w, std::uint64_t) const override {
    LampState s = lamp_eval(w);
    return (s.lamps.empty() && s.shift == 0) ? Ternary::True : Ternary::False;
  }

  bool has_normal_form() const override { return true; }
  Word normal_form(const Word& w) const override {
    LampState s = lamp_eval(w);
    Word out;
    long long cur = 0;
    for (long long p : s.lamps) {
      push_shift(out, p - cur);
      out.push(Letter{0, +1});
      cur = p;
    }
    push_shift(out, s.shift - cur);
    return out;
  }

  bool has_quotient_provider() const override { return true; }
  std::optional<FiniteQuotient> find_quotient(const std::vector<Word>& forbidden,
                                              std::uint32_t cap) const override {
    std::vector<LampState> states;
    states.reserve(forbidden.size());
    for (const Word& w : forbidden) states.push_back(lamp_eval(w));
    for (std::uint32_t m = 1;; ++m) {
      if (m > 20) return std::nullopt;
      std::uint64_t order = static_cast<std::uint64_t>(m) << m;
      if (order > cap) return std::nullopt;
      bool separates = true;
      for (const LampState& s : states) {
        if (fold_lamps(s, m) == 0 && s.shift % m == 0) {
          separates = false;
          break;
        }
      }
      if (separates) return build(m, static_cast<std::uint32_t>(order));
    }
  }

 private:
  static std::uint32_t fold_lamps(const LampState& s, std::uint32_t m) {
    std::uint32_t v = 0;
    for (long long p : s.lamps) {
      long long r = p % m;
      if (r < 0) r += m;
      v ^= (1u << r);
    }
    return v;
  }

  // Elements of the wreath product by Z/m are (shift r, lamp bits v),
  // indexed r * 2^m + v so the identity sits at 0.
  FiniteQuotient build(std::uint32_t m, std::uint32_t order) const {
    std::uint32_t lampN = 1u << m;
    auto rot = [&](std::uint32_t v, std::uint32_t by) {
      std::uint32_t out = 0;
      for (std::uint32_t i = 0; i < m; ++i) {
        if (v & (1u << i)) out |= 1u << ((i + by) % m);
      }
      return out;
    };
    std::vector<std::vector<std::uint32_t>> mul(order, std::vector<std::uint32_t>(order));
    for (std::uint32_t i = 0; i < order; ++i) {
      std::uint32_t r1 = i / lampN, v1 = i % lampN;
      for (std::uint32_t j = 0; j < order; ++j) {
        std::uint32_t r2 = j / lampN, v2 = j % lampN;
        mul[i][j] = ((r1 + r2) % m) * lampN + (v1 ^ rot(v2, r1));
      }
    }
    std::vector<std::uint32_t> gens = {0 * lampN + 1, (m > 1 ? 1u : 0u) * lampN + 0};
    std::vector<Word> words(order);
    for (std::uint32_t idx = 0; idx < order; ++idx) {
      std::uint32_t r = idx / lampN, v = idx % lampN;
      Word w;
      long long cur = 0;
      for (std::uint32_t p = 0; p < m; ++p) {
        if (v & (1u << p)) {
          push_shift(w, static_cast<long long>(p) - cur);
          w.push(Letter{0, +1});
          cur = p;
        }
      }
      push_shift(w, static_cast<long long>(r) - cur);
      words[idx] = std::move(w);
    }
    return FiniteQuotient::from_table(std::move(mul), std::move(gens), std::move(words), false);
  }

  Alphabet alphabet_;
};

}  // namespace

OracleRef oracle_lamplighter() { return std::make_shared<LamplighterOracle>(); }

// ---------------------------------------------------------------------------
// Direct products

namespace {

class ProductOracle final : public WordOracle {
 public:
  ProductOracle(OracleRef first, OracleRef second, Alphabet combined)
      : first_(std::move(first)), second_(std::move(second)), alphabet_(std::move(combined)) {}

  const Alphabet& alphabet() const override { return alphabet_; }

  Ternary is_identity(const Word& w, std::uint64_t fuel) const override {
    Ternary t1 = first_->is_identity(project(w, 0), fuel);
    if (t1 == Ternary::False) return Ternary::False;
    Ternary t2 = second_->is_identity(project(w, 1), fuel);
    if (t2 == Ternary::False) return Ternary::False;
    if (t1 == Ternary::True && t2 == Ternary::True) return Ternary::True;
    return Ternary::Unknown;
  }

  bool has_normal_form() const override {
    return first_->has_normal_form() && second_->has_normal_form();
  }
  Word normal_form(const Word& w) const override {
    Word nf1 = first_->normal_form(project(w, 0));
    Word nf2 = second_->normal_form(project(w, 1));
    return concat(nf1, shift_second(nf2));
  }

  bool has_relators() const override {
    return first_->has_relators() && second_->has_relators();
  }
  std::vector<Word> relators() const override {
    std::vector<Word> rs = first_->relators();
    for (const Word& r : second_->relators()) rs.push_back(shift_second(r));
    std::size_t n1 = first_->alphabet().size();
    std::size_t n2 = second_->alphabet().size();
    for (std::uint32_t i = 0; i < n1; ++i) {
      for (std::uint32_t j = 0; j < n2; ++j) {
        Word r;
        r.push(Letter{i, +1});
        r.push(Letter{static_cast<std::uint32_t>(n1 + j), +1});
        r.push(Letter{i, -1});
        r.push(Letter{static_cast<std::uint32_t>(n1 + j), -1});
        rs.push_back(std::move(r));
      }
    }
    return rs;
  }

  bool sofic() const override { return first_->sofic() && second_->sofic(); }

  bool has_quotient_provider() const override {
    return first_->has_quotient_provider() && second_->has_quotient_provider();
  }
  std::optional<FiniteQuotient> find_quotient(const std::vector<Word>& forbidden,
                                              std::uint32_t cap) const override {
    std::vector<Word> f1, f2;
    for (const Word& w : forbidden) {
      Word p1 = project(w, 0), p2 = project(w, 1);
      bool id1 = first_->require_identity(p1);
      bool id2 = second_->require_identity(p2);
      if (id1 && id2) throw std::invalid_argument("oracle: forbidden word is the identity");
      // A factor quotient separating every nontrivial projection separates
      // the product element.
      if (!id1) f1.push_back(std::move(p1));
      if (!id2) f2.push_back(std::move(p2));
    }
    auto q1 = first_->find_quotient(f1, cap);
    if (!q1) return std::nullopt;
    auto q2 = second_->find_quotient(f2, cap);
    if (!q2) return std::nullopt;
    if (static_cast<std::uint64_t>(q1->order) * q2->order > cap) return std::nullopt;
    return build_product(*q1, *q2);
  }

 private:
  Word project(const Word& w, int which) const {
    std::size_t n1 = first_->alphabet().size();
    Word out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Letter l = w.letter(i);
      if (which == 0 && l.gen < n1) out.push(l);
      if (which == 1 && l.gen >= n1) {
        out.push(Letter{static_cast<std::uint32_t>(l.gen - n1), l.sign});
      }
    }
    return out;
  }

  Word shift_second(const Word& w) const {
    std::size_t n1 = first_->alphabet().size();
    Word out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Letter l = w.letter(i);
      out.push(Letter{static_cast<std::uint32_t>(l.gen + n1), l.sign});
    }
    return out;
  }

  FiniteQuotient build_product(const FiniteQuotient& a, const FiniteQuotient& b) const {
    std::uint32_t order = a.order * b.order;
    std::vector<std::vector<std::uint32_t>> mul(order, std::vector<std::uint32_t>(order));
    for (std::uint32_t i = 0; i < order; ++i) {
      std::uint32_t i1 = i / b.order, i2 = i % b.order;
      for (std::uint32_t j = 0; j < order; ++j) {
        std::uint32_t j1 = j / b.order, j2 = j % b.order;
        mul[i][j] = a.mul[i1][j1] * b.order + b.mul[i2][j2];
      }
    }
    std::vector<std::uint32_t> gens;
    for (std::uint32_t g : a.gen_images) gens.push_back(g * b.order);
    for (std::uint32_t g : b.gen_images) gens.push_back(g);
    std::vector<Word> words(order);
    for (std::uint32_t i = 0; i < order; ++i) {
      words[i] = concat(a.element_words[i / b.order], shift_second(b.element_words[i % b.order]));
    }
    FiniteQuotient q =
        FiniteQuotient::from_table(std::move(mul), std::move(gens), std::move(words), false);
    q.faithful = a.faithful && b.faithful;
    return q;
  }

  OracleRef first_;
  OracleRef second_;
  Alphabet alphabet_;
};

}  // namespace

OracleRef oracle_direct_product(OracleRef first, OracleRef second) {
  std::vector<std::string> names = first->alphabet().names();
  for (const std::string& n : second->alphabet().names()) names.push_back(n);
  // Alphabet construction rejects duplicates across the factors.
  return std::make_shared<ProductOracle>(std::move(first), std::move(second),
                                         Alphabet(std::move(names)));
}

// ---------------------------------------------------------------------------
// Finitely presented, assumed residually finite

namespace {

class FpOracle final : public WordOracle {
 public:
  FpOracle(Alphabet alphabet, std::vector<Word> relators) : alphabet_(std::move(alphabet)) {
    for (const Word& r : relators) {
      Word rr = free_reduce(r);
      if (!rr.empty()) relators_.push_back(std::move(rr));
    }
    for (const Word& r : relators_) {
      max_rel_len_ = std::max(max_rel_len_, r.size());
      for (const Word& base : {r, invert(r)}) {
        for (std::size_t k = 0; k < base.size(); ++k) {
          std::vector<std::int32_t> rot;
          rot.insert(rot.end(), base.raw().begin() + k, base.raw().end());
          rot.insert(rot.end(), base.raw().begin(), base.raw().begin() + k);
          Word rw = free_reduce(Word(std::move(rot)));
          if (!rw.empty()) moves_.insert(rw);
        }
      }
    }
  }

  const Alphabet& alphabet() const override { return alphabet_; }

  Ternary is_identity(const Word& w, std::uint64_t fuel) const override {
    Word wr = free_reduce(w);
    if (wr.empty()) return Ternary::True;
    if (relators_.empty()) return Ternary::False;

    std::lock_guard<std::mutex> lock(mutex_);
    std::uint64_t budget = fuel;
    if (ball_.count(wr)) return Ternary::True;
    for (const auto& hom : homs_) {
      if (!perm_is_identity(eval_perm_word(wr, hom))) return Ternary::False;
    }
    while (budget > 0) {
      bool progressed = false;
      if (!hom_done_) {
        progressed = true;
        std::size_t before = homs_.size();
        advance_homs(budget);
        for (std::size_t i = before; i < homs_.size(); ++i) {
          if (!perm_is_identity(eval_perm_word(wr, homs_[i]))) return Ternary::False;
        }
      }
      if (budget > 0 && !ball_done_) {
        progressed = true;
        grow_ball(budget);
        if (ball_.count(wr)) return Ternary::True;
      }
      if (!progressed) break;
    }
    return Ternary::Unknown;
  }

  bool has_relators() const override { return true; }
  std::vector<Word> relators() const override { return relators_; }

 private:
  static constexpr std::uint32_t kBallCapMax = 14;
  static constexpr std::size_t kBallStateMax = 400000;
  static constexpr std::uint32_t kRejectDegreeCap = 5;

  // One breadth-first growth round of the shared identity-word ball: raise
  // the length cap by two and close under relator insertion. Positive
  // membership is sound at any point; only full exploration is tracked.
  void grow_ball(std::uint64_t& budget) const {
    if (pending_.empty()) {
      pending_target_ = ball_cap_ == 0 ? static_cast<std::uint32_t>(max_rel_len_) : ball_cap_ + 2;
      if (pending_target_ > kBallCapMax) {
        ball_done_ = true;
        return;
      }
      ball_.insert(Word());
      for (const Word& v : ball_) pending_.push_back(v);
    }
    while (!pending_.empty() && budget > 0) {
      Word cur = std::move(pending_.front());
      pending_.pop_front();
      --budget;
      for (const Word& mv : moves_) {
        for (std::size_t pos = 0; pos <= cur.size(); ++pos) {
          std::vector<std::int32_t> cand;
          cand.reserve(cur.size() + mv.size());
          cand.insert(cand.end(), cur.raw().begin(), cur.raw().begin() + pos);
          cand.insert(cand.end(), mv.raw().begin(), mv.raw().end());
          cand.insert(cand.end(), cur.raw().begin() + pos, cur.raw().end());
          Word next = free_reduce(Word(std::move(cand)));
          if (next.size() > pending_target_) continue;
          if (ball_.insert(next).second) pending_.push_back(std::move(next));
        }
      }
    }
    if (pending_.empty()) {
      ball_cap_ = pending_target_;
      if (ball_cap_ >= kBallCapMax || ball_.size() >= kBallStateMax) ball_done_ = true;
    }
  }

  // Advance the relator-killing homomorphism enumeration by a bounded chunk;
  // found homomorphisms are cached for every later query.
  void advance_homs(std::uint64_t& budget) const {
    std::size_t s = alphabet_.size();
    while (budget > 0) {
      if (hom_perms_.empty()) {
        if (hom_p_ > kRejectDegreeCap) {
          hom_done_ = true;
          return;
        }
        hom_perms_ = all_perms(hom_p_);
        hom_odo_.assign(s, 0);
      }
      --budget;
      std::vector<Perm> images(s);
      for (std::size_t g = 0; g < s; ++g) images[g] = hom_perms_[hom_odo_[g]];
      bool kills = true;
      for (const Word& r : relators_) {
        if (!perm_is_identity(eval_perm_word(r, images))) {
          kills = false;
          break;
        }
      }
      bool trivial = true;
      for (const Perm& g : images) {
        if (!perm_is_identity(g)) trivial = false;
      }
      if (kills && !trivial) homs_.push_back(std::move(images));
      std::size_t g = s;
      bool rolled = true;
      while (g > 0) {
        --g;
        if (++hom_odo_[g] < hom_perms_.size()) {
          rolled = false;
          break;
        }
        hom_odo_[g] = 0;
      }
      if (rolled) {
        hom_perms_.clear();
        ++hom_p_;
      }
    }
  }

  Alphabet alphabet_;
  std::vector<Word> relators_;
  std::set<Word> moves_;
  std::size_t max_rel_len_ = 0;

  mutable std::mutex mutex_;
  mutable std::set<Word> ball_;
  mutable std::deque<Word> pending_;
  mutable std::uint32_t pending_target_ = 0;
  mutable std::uint32_t ball_cap_ = 0;
  mutable bool ball_done_ = false;
  mutable std::vector<std::vector<Perm>> homs_;
  mutable std::uint32_t hom_p_ = 1;
  mutable std::vector<Perm> hom_perms_;
  mutable std::vector<std::size_t> hom_odo_;
  mutable bool hom_done_ = false;
};

}  // namespace

OracleRef oracle_fp_residually_finite(Alphabet alphabet, std::vector<Word> relators) {
  return std::make_shared<FpOracle>(std::move(alphabet), std::move(relators));
}

}  // namespace l2approx
