#include "l2approx/homology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "l2approx/errors.hpp"

namespace l2approx {

std::optional<ComplexViolation> validate_complex(const FinPresComplex& c, const Budget& budget) {
  if (c.ranks.size() != c.length + 2) {
    return ComplexViolation{0, 0, 0, "rank list must have length + 2 entries"};
  }
  if (c.boundaries.size() != c.length + 1) {
    return ComplexViolation{0, 0, 0, "boundary list must have length + 1 entries"};
  }
  for (std::size_t p = 1; p <= c.length + 1; ++p) {
    const GroupRingMatrix& b = c.boundaries[p - 1];
    if (b.rows() != c.ranks[p] || b.cols() != c.ranks[p - 1]) {
      return ComplexViolation{p, 0, 0, "boundary shape disagrees with the ranks"};
    }
    if (b.oracle() != c.boundaries[0].oracle()) {
      return ComplexViolation{p, 0, 0, "boundaries use different oracle instances"};
    }
  }
  for (std::size_t p = 2; p <= c.length + 1; ++p) {
    GroupRingMatrix prod = mat_mul(c.boundaries[p - 1], c.boundaries[p - 2], budget);
    for (std::size_t i = 0; i < prod.rows(); ++i) {
      for (std::size_t j = 0; j < prod.cols(); ++j) {
        if (!prod.at(i, j).is_zero()) {
          return ComplexViolation{p, i, j, "consecutive boundaries do not compose to zero"};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<ComplexViolation> validate_inclusion(const ComplexInclusion& inc,
                                                   const Budget& budget) {
  if (auto v = validate_complex(inc.sub, budget)) return v;
  if (auto v = validate_complex(inc.sup, budget)) return v;
  if (inc.sub.length != inc.sup.length) {
    return ComplexViolation{0, 0, 0, "included complex has a different length"};
  }
  if (inc.sub.oracle() != inc.sup.oracle()) {
    return ComplexViolation{0, 0, 0, "complexes use different oracle instances"};
  }
  for (std::size_t j = 0; j < inc.sub.ranks.size(); ++j) {
    if (inc.sub.ranks[j] > inc.sup.ranks[j]) {
      return ComplexViolation{j, 0, 0, "included rank exceeds the ambient rank"};
    }
  }
  for (std::size_t p = 1; p <= inc.sub.length + 1; ++p) {
    const GroupRingMatrix& a = inc.sub.boundaries[p - 1];
    const GroupRingMatrix& b = inc.sup.boundaries[p - 1];
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (j < a.cols()) {
          // canonical keys of equal elements may differ, so compare by
          // cancelling the difference instead of comparing term maps
          if (!sub(b.at(i, j), a.at(i, j), budget).is_zero()) {
            return ComplexViolation{p, i, j, "leading block disagrees with the included boundary"};
          }
        } else if (!b.at(i, j).is_zero()) {
          return ComplexViolation{p, i, j, "included rows must vanish past the leading block"};
        }
      }
    }
  }
  return std::nullopt;
}

ComplexInclusion identity_inclusion(const FinPresComplex& c) { return ComplexInclusion{c, c}; }

GroupRingElement fox_derivative(const OracleRef& oracle, const Word& w, std::uint32_t s,
                                const Budget& budget) {
  GroupRingElement d(oracle);
  Word pref;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter l = w.letter(i);
    if (l.sign > 0) {
      if (l.gen == s) d.add_term(pref, Rational(1), budget);
      pref.push(l);
    } else {
      pref.push(l);
      if (l.gen == s) d.add_term(pref, Rational(-1), budget);
    }
  }
  return d;
}

FinPresComplex fox_presentation_complex(const OracleRef& oracle, const Budget& budget) {
  if (!oracle->has_relators()) {
    throw std::invalid_argument("presentation complex needs an oracle with relators");
  }
  const Alphabet& ab = oracle->alphabet();
  const std::vector<Word> rel = oracle->relators();

  FinPresComplex c;
  c.length = 1;
  c.ranks = {1, ab.size(), rel.size()};

  GroupRingMatrix a1(oracle, ab.size(), 1);
  for (std::size_t s = 0; s < ab.size(); ++s) {
    GroupRingElement e(oracle);
    e.add_term(Word::from_letters({Letter{static_cast<std::uint32_t>(s), 1}}), Rational(1),
               budget);
    e.add_term(Word(), Rational(-1), budget);
    a1.at(s, 0) = std::move(e);
  }

  GroupRingMatrix a2(oracle, rel.size(), ab.size());
  for (std::size_t r = 0; r < rel.size(); ++r) {
    for (std::size_t s = 0; s < ab.size(); ++s) {
      a2.at(r, s) = fox_derivative(oracle, rel[r], static_cast<std::uint32_t>(s), budget);
    }
  }

  c.boundaries.push_back(std::move(a1));
  c.boundaries.push_back(std::move(a2));
  return c;
}

namespace {

BracketStatus worse(BracketStatus a, BracketStatus b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

BracketResult exact_bracket(const Rational& v) {
  BracketResult r;
  r.lo = r.hi = v;
  r.status = BracketStatus::Exact;
  r.norm_bound = 1;
  r.steps.push_back({0, v, v});
  return r;
}

}  // namespace

ImHomologyResult dim_im_homology(const ComplexInclusion& inc, std::size_t k,
                                 const BracketOptions& opts) {
  const FinPresComplex& sub = inc.sub;
  const FinPresComplex& sup = inc.sup;
  if (sub.length != sup.length) throw std::invalid_argument("homology: lengths differ");
  if (k > sub.length) throw std::invalid_argument("homology: degree exceeds the length");
  if (sub.ranks.size() != sub.length + 2 || sub.boundaries.size() != sub.length + 1 ||
      sup.ranks.size() != sup.length + 2 || sup.boundaries.size() != sup.length + 1) {
    throw std::invalid_argument("homology: malformed complex");
  }
  const std::size_t mk = sub.ranks[k];
  const std::size_t nk = sup.ranks[k];
  if (mk > nk) throw std::invalid_argument("homology: inclusion ranks out of order");

  ImHomologyResult res;
  // degree 0 boundary is the zero map, so its kernel is everything
  res.ker_sub = (k == 0) ? exact_bracket(Rational(Integer(mk)))
                         : dimker_bracket(sub.boundaries[k - 1], opts);
  res.ker_sup = dimker_bracket(sup.boundaries[k], opts);

  const OracleRef& oracle = sup.oracle();
  GroupRingMatrix emb(oracle, mk, nk);
  for (std::size_t i = 0; i < mk; ++i) emb.at(i, i) = GroupRingElement::one(oracle);
  res.ker_stack = dimker_bracket(vstack(sup.boundaries[k], emb), opts);

  Rational lo = res.ker_sub.lo + res.ker_sup.lo - res.ker_stack.hi;
  Rational hi = res.ker_sub.hi + res.ker_sup.hi - res.ker_stack.lo;
  if (lo < 0) lo = 0;
  const Rational cap = Rational(Integer(mk));
  if (hi > cap) hi = cap;
  if (hi < lo) {
    throw ModeViolation("homology bracket crossed; a kernel bracket was unsound");
  }
  res.value = {lo, hi};
  res.status = worse(res.ker_sub.status, worse(res.ker_sup.status, res.ker_stack.status));
  return res;
}

namespace {

// Free-reduced words up to the given length, in shortlex order.
std::vector<Word> short_words(const Alphabet& ab, std::size_t max_len) {
  std::set<Word> acc;
  std::vector<Word> frontier = {Word()};
  acc.insert(Word());
  for (std::size_t l = 0; l < max_len; ++l) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (std::uint32_t g = 0; g < ab.size(); ++g) {
        for (int sgn : {1, -1}) {
          Word e = w;
          e.push(Letter{g, static_cast<std::int8_t>(sgn)});
          Word red = free_reduce(e);
          if (red.size() != e.size()) continue;
          if (acc.insert(red).second) next.push_back(red);
        }
      }
    }
    frontier = std::move(next);
  }
  return std::vector<Word>(acc.begin(), acc.end());
}

bool all_zero(const std::vector<GroupRingElement>& v) {
  for (const GroupRingElement& e : v) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool in_row_kernel(const std::vector<GroupRingElement>& v, const GroupRingMatrix& top,
                   const Budget& budget) {
  for (std::size_t j = 0; j < top.cols(); ++j) {
    GroupRingElement acc(top.oracle());
    for (std::size_t e = 0; e < v.size(); ++e) {
      if (v[e].is_zero()) continue;
      acc.add_in_place(mul(v[e], top.at(e, j), budget), budget);
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

bool scalar_multiple(const std::vector<GroupRingElement>& v,
                     const std::vector<GroupRingElement>& u) {
  std::optional<Rational> ratio;
  for (std::size_t e = 0; e < v.size(); ++e) {
    if (v[e].term_count() != u[e].term_count()) return false;
    auto vi = v[e].terms().begin();
    auto ui = u[e].terms().begin();
    for (; vi != v[e].terms().end(); ++vi, ++ui) {
      if (!(vi->first == ui->first)) return false;
      Rational q = vi->second / ui->second;
      if (ratio && *ratio != q) return false;
      ratio = q;
    }
  }
  return ratio.has_value();
}

struct SearchLevel {
  std::size_t terms;
  std::size_t max_len;
};

// Bounded enumeration of row vectors killed by the top boundary, ordered by
// support size then word length: single words first, then two-term vectors
// over words of length <= 2, then three- and four-term vectors over single
// letters. The leading coefficient is normalized to 1 since scaling
// preserves kernel membership.
std::vector<std::vector<GroupRingElement>> kernel_vector_search(const GroupRingMatrix& top,
                                                                const BettiBudgets& budgets,
                                                                bool& fuel_hit) {
  const std::size_t r = top.rows();
  const OracleRef& oracle = top.oracle();
  const Budget& budget = budgets.bracket.budget;
  std::vector<std::vector<GroupRingElement>> found;
  if (r == 0 || budgets.max_new_rows == 0) return found;

  const std::vector<Word> w1 = short_words(oracle->alphabet(), 1);
  const std::vector<Word> w2 = short_words(oracle->alphabet(), 2);
  const SearchLevel levels[] = {{1, 2}, {2, 2}, {3, 1}, {4, 1}};
  const Rational palette[] = {Rational(1),  Rational(-1),    Rational(2),
                              Rational(-2), Rational(1, 2),  Rational(-1, 2)};
  const std::size_t palette_size = sizeof(palette) / sizeof(palette[0]);
  std::uint64_t fuel = budgets.resolution_fuel;

  for (const SearchLevel& level : levels) {
    const std::vector<Word>& words = (level.max_len >= 2) ? w2 : w1;
    const std::size_t slots = r * words.size();
    if (level.terms > slots) continue;

    std::vector<std::size_t> comb(level.terms);
    for (std::size_t i = 0; i < level.terms; ++i) comb[i] = i;
    bool more = true;
    while (more) {
      const std::size_t tail = level.terms - 1;
      std::vector<std::size_t> coef(tail, 0);
      bool cmore = true;
      while (cmore) {
        if (fuel == 0) {
          fuel_hit = true;
          return found;
        }
        --fuel;

        std::vector<GroupRingElement> v(r, GroupRingElement(oracle));
        v[comb[0] / words.size()].add_term(words[comb[0] % words.size()], Rational(1), budget);
        for (std::size_t t = 0; t < tail; ++t) {
          const std::size_t slot = comb[t + 1];
          v[slot / words.size()].add_term(words[slot % words.size()], palette[coef[t]], budget);
        }

        if (!all_zero(v) && in_row_kernel(v, top, budget)) {
          bool fresh = true;
          for (const auto& u : found) {
            if (scalar_multiple(v, u)) {
              fresh = false;
              break;
            }
          }
          if (fresh) {
            found.push_back(std::move(v));
            if (found.size() == budgets.max_new_rows) return found;
          }
        }

        // coefficient odometer, last position fastest
        cmore = false;
        for (std::size_t t = tail; t-- > 0;) {
          if (++coef[t] < palette_size) {
            cmore = true;
            break;
          }
          coef[t] = 0;
        }
      }

      // next ascending combination of slots
      more = false;
      for (std::size_t i = level.terms; i-- > 0;) {
        if (comb[i] != slots - level.terms + i) {
          ++comb[i];
          for (std::size_t j = i + 1; j < level.terms; ++j) comb[j] = comb[j - 1] + 1;
          more = true;
          break;
        }
      }
    }
  }
  return found;
}

FinPresComplex extend_once(const FinPresComplex& c, const BettiBudgets& budgets, bool& fuel_hit) {
  const GroupRingMatrix& top = c.boundaries.back();
  std::vector<std::vector<GroupRingElement>> rows;
  if (top.rows() > 0) rows = kernel_vector_search(top, budgets, fuel_hit);

  FinPresComplex out = c;
  GroupRingMatrix a(c.oracle(), rows.size(), top.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < top.rows(); ++j) a.at(i, j) = std::move(rows[i][j]);
  }
  out.ranks.push_back(rows.size());
  out.boundaries.push_back(std::move(a));
  ++out.length;
  return out;
}

FinPresComplex pad_to(const FinPresComplex& c, std::size_t length) {
  FinPresComplex out = c;
  while (out.length < length) {
    const std::size_t top = out.ranks.back();
    out.ranks.push_back(0);
    out.boundaries.push_back(GroupRingMatrix(out.oracle(), 0, top));
    ++out.length;
  }
  return out;
}

}  // namespace

BettiEstimate betti_estimate(const OracleRef& oracle, std::size_t k, const BettiBudgets& budgets) {
  BettiEstimate est;
  const std::size_t stage_count = (budgets.stages == 0) ? 1 : budgets.stages;
  est.stages.push_back(fox_presentation_complex(oracle, budgets.bracket.budget));
  for (std::size_t s = 1; s < stage_count; ++s) {
    bool hit = false;
    est.stages.push_back(extend_once(est.stages.back(), budgets, hit));
    est.stages_truncated = est.stages_truncated || hit;
  }

  for (std::size_t i = 0; i < est.stages.size(); ++i) {
    for (std::size_t j = i; j < est.stages.size(); ++j) {
      const std::size_t len = std::max(k, est.stages[j].length);
      ComplexInclusion inc{pad_to(est.stages[i], len), pad_to(est.stages[j], len)};
      ImHomologyResult cell = dim_im_homology(inc, k, budgets.bracket);
      est.cells.push_back({i, j, cell.value, cell.status});
      if (cell.status == BracketStatus::BudgetExceeded) est.grid_truncated = true;
    }
  }

  bool first_i = true;
  for (std::size_t i = 0; i < est.stages.size(); ++i) {
    Rational min_lo, min_hi;
    bool first_j = true;
    for (const BettiCell& cell : est.cells) {
      if (cell.i != i) continue;
      if (first_j || cell.value.lo < min_lo) min_lo = cell.value.lo;
      if (first_j || cell.value.hi < min_hi) min_hi = cell.value.hi;
      first_j = false;
    }
    if (first_i || min_lo > est.sup_inf.lo) est.sup_inf.lo = min_lo;
    if (first_i || min_hi > est.sup_inf.hi) est.sup_inf.hi = min_hi;
    first_i = false;
  }
  return est;
}

}  // namespace l2approx
