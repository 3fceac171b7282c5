#include "l2approx/lueck.hpp"

#include <set>
#include <stdexcept>
#include <utility>

#include "l2approx/errors.hpp"

namespace l2approx {

std::vector<Word> nontrivial_diagonal_elements(const GroupRingMatrix& a, std::size_t k,
                                               const Budget& budget) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("diagonal supports need a square matrix");
  }
  std::set<Word> acc;
  GroupRingMatrix power = GroupRingMatrix::identity(a.oracle(), a.rows());
  const std::size_t target = k * k;
  for (std::size_t j = 1; j <= target; ++j) {
    power = mat_mul(power, a, budget);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (const auto& [w, c] : power.at(i, i).terms()) {
        if (w.empty()) continue;
        if (a.oracle()->require_identity(w, budget.fuel)) continue;
        acc.insert(w);
      }
    }
  }
  return std::vector<Word>(acc.begin(), acc.end());
}

FiniteQuotient find_separating_quotient(const WordOracle& oracle,
                                        const std::vector<Word>& elements, std::uint32_t cap) {
  std::optional<FiniteQuotient> h;
  if (oracle.has_quotient_provider()) {
    h = oracle.find_quotient(elements, cap);
  } else if (oracle.has_relators()) {
    h = sp_quotient_search(oracle.alphabet(), oracle.relators(), elements, cap);
  } else {
    throw std::invalid_argument("separating quotients need a provider or relators");
  }
  if (!h) {
    throw QuotientCapExhausted("no separating quotient within the cap");
  }
  return *h;
}

RatMatrix regular_rep(const GroupRingMatrix& a, const FiniteQuotient& h) {
  const std::size_t n = h.order;
  RatMatrix m = rat_matrix(a.rows() * n, a.cols() * n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (const auto& [w, c] : a.at(i, j).terms()) {
        const std::uint32_t img = h.eval(w);
        for (std::uint32_t g = 0; g < n; ++g) {
          m[i * n + g][j * n + h.mul[g][img]] += c;
        }
      }
    }
  }
  return m;
}

RatMatrix left_regular_rep(const GroupRingMatrix& a, const FiniteQuotient& h) {
  const std::size_t n = h.order;
  RatMatrix m = rat_matrix(a.rows() * n, a.cols() * n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (const auto& [w, c] : a.at(i, j).terms()) {
        const std::uint32_t inv = h.inverse[h.eval(w)];
        for (std::uint32_t g = 0; g < n; ++g) {
          m[i * n + g][j * n + h.mul[inv][g]] += c;
        }
      }
    }
  }
  return m;
}

Rational finite_dimker(const GroupRingMatrix& a, const FiniteQuotient& h) {
  const std::size_t r = rank(regular_rep(a, h));
  Rational num = Rational(Integer(a.rows()) * Integer(h.order)) - Rational(Integer(r));
  return num / Rational(Integer(h.order));
}

Rational lueck_error_bound(std::size_t n, const Rational& d, unsigned long k) {
  if (k < 2) throw std::invalid_argument("error bound needs k >= 2");
  if (d < 1) throw std::invalid_argument("error bound needs d >= 1");
  const unsigned long e = k * k;
  Rational base = Rational(1) - Rational(1) / (Rational(k) * d);
  Rational first = Rational(Integer(n)) * pow_rational(base, e);
  if (d == 1) return first;
  // outward: numerator ln rounded up, denominator ln rounded down
  Rational lnd = ln_enclosure(d).hi;
  Rational lnk = ln_enclosure(Rational(k)).lo;
  return first + Rational(Integer(n)) * lnd / lnk;
}

namespace {

// Positive integer rescale clearing all denominators; kernel dimensions over
// every quotient are unchanged, and integrality is what the error bound's
// determinant argument needs.
GroupRingMatrix integral_square(const GroupRingMatrix& a, const Budget& budget) {
  GroupRingMatrix s = (a.rows() == a.cols()) ? a : gram(a, budget);
  Integer lam(1);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
      for (const auto& [w, c] : s.at(i, j).terms()) lam = lcm(lam, c.get_den());
    }
  }
  if (lam == 1) return s;
  return mat_scale(s, Rational(lam));
}

}  // namespace

LueckStream::LueckStream(OracleRef oracle, const GroupRingMatrix& a, Budget budget,
                         std::uint32_t quotient_cap)
    : oracle_(std::move(oracle)),
      square_(integral_square(a, budget)),
      budget_(budget),
      cap_(quotient_cap),
      d_(coeff_one_norm(square_)),
      power_(GroupRingMatrix::identity(square_.oracle(), square_.rows())),
      seen_(square_.oracle()) {
  if (a.oracle() != oracle_) {
    throw std::invalid_argument("adapted stream: matrix uses a different oracle");
  }
}

std::optional<AdaptedStep> LueckStream::next() {
  if (done_) return std::nullopt;
  const std::size_t k = k_ + 1;
  const std::size_t target = k * k;
  while (power_index_ < target) {
    power_ = mat_mul(power_, square_, budget_);
    ++power_index_;
    for (std::size_t i = 0; i < square_.rows(); ++i) {
      for (const auto& [w, c] : power_.at(i, i).terms()) {
        if (w.empty()) continue;
        seen_.add_term(w, Rational(1), budget_);
      }
    }
  }

  std::vector<Word> elements;
  for (const auto& [w, c] : seen_.terms()) {
    if (w.empty()) continue;
    if (oracle_->require_identity(w, budget_.fuel)) continue;
    elements.push_back(w);
  }

  FiniteQuotient h;
  try {
    h = find_separating_quotient(*oracle_, elements, cap_);
  } catch (const QuotientCapExhausted&) {
    done_ = true;
    return std::nullopt;
  }
  for (const Word& w : elements) {
    if (h.eval(w) == 0) throw std::logic_error("adapted quotient failed to separate");
  }

  AdaptedStep step;
  step.k = k;
  step.quotient = h;
  step.value = finite_dimker(square_, h);
  if (k >= 2) {
    step.bound = lueck_error_bound(square_.rows(), d_, static_cast<unsigned long>(k));
  }
  k_ = k;
  return step;
}

}  // namespace l2approx
