#include "l2approx/groupring.hpp"

#include <stdexcept>
#include <utility>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

void check_letters(const Word& w, const Alphabet& alphabet) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.letter(i).gen >= alphabet.size()) {
      throw std::invalid_argument("group ring: letter outside the oracle alphabet");
    }
  }
}

void check_same_ring(const OracleRef& a, const OracleRef& b) {
  if (a.get() != b.get()) {
    throw std::invalid_argument("group ring: operands belong to different oracle instances");
  }
}

}  // namespace

GroupRingElement::GroupRingElement(OracleRef oracle) : oracle_(std::move(oracle)) {
  if (!oracle_) throw std::invalid_argument("group ring: null oracle");
}

GroupRingElement GroupRingElement::one(OracleRef oracle) {
  GroupRingElement e(std::move(oracle));
  e.add_term(Word(), Rational(1));
  return e;
}

GroupRingElement GroupRingElement::from_word(OracleRef oracle, const Word& w, const Rational& c,
                                             const Budget& budget) {
  GroupRingElement e(std::move(oracle));
  e.add_term(w, c, budget);
  return e;
}

Word GroupRingElement::canonical(const Word& w, const Budget& budget) const {
  check_letters(w, oracle_->alphabet());
  if (oracle_->has_normal_form()) return oracle_->normal_form(w);
  Word wr = free_reduce(w);
  for (const auto& [key, coeff] : terms_) {
    switch (oracle_->is_identity(free_reduce(concat(wr, invert(key))), budget.fuel)) {
      case Ternary::True:
        return key;
      case Ternary::False:
        break;
      default:
        throw FuelExhausted("group ring: key comparison undecided within fuel");
    }
  }
  return wr;
}

void GroupRingElement::add_term(const Word& w, const Rational& c, const Budget& budget) {
  if (c == 0) return;
  Word key = canonical(w, budget);
  auto it = terms_.find(key);
  if (it != terms_.end()) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
    return;
  }
  if (terms_.size() >= budget.mem_terms) {
    throw TermBudgetExceeded("group ring: element exceeds the term budget");
  }
  terms_.emplace(std::move(key), c);
}

Rational GroupRingElement::coefficient(const Word& w, const Budget& budget) const {
  check_letters(w, oracle_->alphabet());
  if (oracle_->has_normal_form()) {
    auto it = terms_.find(oracle_->normal_form(w));
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Word wr = free_reduce(w);
  for (const auto& [key, coeff] : terms_) {
    switch (oracle_->is_identity(free_reduce(concat(wr, invert(key))), budget.fuel)) {
      case Ternary::True:
        return coeff;
      case Ternary::False:
        break;
      default:
        throw FuelExhausted("group ring: key comparison undecided within fuel");
    }
  }
  return Rational(0);
}

Rational GroupRingElement::coefficient_one(const Budget& budget) const {
  return coefficient(Word(), budget);
}

GroupRingElement& GroupRingElement::add_in_place(const GroupRingElement& other,
                                                 const Budget& budget) {
  check_same_ring(oracle_, other.oracle_);
  for (const auto& [w, c] : other.terms_) add_term(w, c, budget);
  return *this;
}

GroupRingElement& GroupRingElement::sub_in_place(const GroupRingElement& other,
                                                 const Budget& budget) {
  check_same_ring(oracle_, other.oracle_);
  for (const auto& [w, c] : other.terms_) add_term(w, -c, budget);
  return *this;
}

GroupRingElement& GroupRingElement::scale_in_place(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, coeff] : terms_) coeff *= c;
  return *this;
}

GroupRingElement GroupRingElement::adjoint() const {
  GroupRingElement out(oracle_);
  for (const auto& [w, c] : terms_) out.add_term(invert(w), c);
  return out;
}

Rational GroupRingElement::coeff_abs_sum() const {
  Rational s(0);
  for (const auto& [w, c] : terms_) s += abs(c);
  return s;
}

Rational GroupRingElement::coeff_square_sum() const {
  Rational s(0);
  for (const auto& [w, c] : terms_) s += c * c;
  return s;
}

GroupRingElement mul(const GroupRingElement& a, const GroupRingElement& b, const Budget& budget) {
  check_same_ring(a.oracle_, b.oracle_);
  GroupRingElement out(a.oracle_);
  for (const auto& [u, cu] : a.terms_) {
    for (const auto& [v, cv] : b.terms_) {
      out.add_term(concat(u, v), cu * cv, budget);
      if (out.terms_.size() > budget.mem_terms) {
        throw TermBudgetExceeded("group ring: product exceeds the term budget");
      }
    }
  }
  return out;
}

Rational inner_product(const GroupRingElement& x, const GroupRingElement& y,
                       const Budget& budget) {
  check_same_ring(x.oracle(), y.oracle());
  Rational s(0);
  if (x.oracle()->has_normal_form()) {
    // canonical keys agree, so a joint sweep matches them
    auto ix = x.terms().begin();
    auto iy = y.terms().begin();
    while (ix != x.terms().end() && iy != y.terms().end()) {
      if (ix->first < iy->first) {
        ++ix;
      } else if (iy->first < ix->first) {
        ++iy;
      } else {
        s += ix->second * iy->second;
        ++ix;
        ++iy;
      }
    }
    return s;
  }
  for (const auto& [u, cu] : x.terms()) {
    for (const auto& [v, cv] : y.terms()) {
      switch (x.oracle()->is_identity(free_reduce(concat(u, invert(v))), budget.fuel)) {
        case Ternary::True:
          s += cu * cv;
          break;
        case Ternary::False:
          break;
        default:
          throw FuelExhausted("group ring: key comparison undecided within fuel");
      }
    }
  }
  return s;
}

GroupRingMatrix::GroupRingMatrix(OracleRef oracle, std::size_t rows, std::size_t cols)
    : oracle_(std::move(oracle)), rows_(rows), cols_(cols) {
  if (!oracle_) throw std::invalid_argument("group ring: null oracle");
  entries_.assign(rows_ * cols_, GroupRingElement(oracle_));
}

GroupRingMatrix GroupRingMatrix::identity(OracleRef oracle, std::size_t n) {
  GroupRingMatrix m(std::move(oracle), n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i).add_term(Word(), Rational(1));
  return m;
}

GroupRingElement& GroupRingMatrix::at(std::size_t i, std::size_t j) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("group ring: matrix index");
  return entries_[i * cols_ + j];
}

const GroupRingElement& GroupRingMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("group ring: matrix index");
  return entries_[i * cols_ + j];
}

std::size_t GroupRingMatrix::term_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.term_count();
  return n;
}

GroupRingMatrix mat_add(const GroupRingMatrix& a, const GroupRingMatrix& b,
                        const Budget& budget) {
  check_same_ring(a.oracle(), b.oracle());
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("group ring: shape mismatch in add");
  }
  GroupRingMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j).add_in_place(b.at(i, j), budget);
  }
  return out;
}

GroupRingMatrix mat_sub(const GroupRingMatrix& a, const GroupRingMatrix& b,
                        const Budget& budget) {
  check_same_ring(a.oracle(), b.oracle());
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("group ring: shape mismatch in sub");
  }
  GroupRingMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j).sub_in_place(b.at(i, j), budget);
  }
  return out;
}

GroupRingMatrix mat_scale(const GroupRingMatrix& a, const Rational& c) {
  GroupRingMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j).scale_in_place(c);
  }
  return out;
}

GroupRingMatrix mat_mul(const GroupRingMatrix& a, const GroupRingMatrix& b,
                        const Budget& budget) {
  check_same_ring(a.oracle(), b.oracle());
  if (a.cols() != b.rows()) throw std::invalid_argument("group ring: shape mismatch in mul");
  GroupRingMatrix out(a.oracle(), a.rows(), b.cols());
  std::size_t running = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      GroupRingElement& acc = out.at(i, j);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const GroupRingElement& x = a.at(i, k);
        const GroupRingElement& y = b.at(k, j);
        if (x.is_zero() || y.is_zero()) continue;
        Budget entry_budget = budget;
        if (budget.mem_terms <= running) {
          throw TermBudgetExceeded("group ring: matrix product exceeds the term budget");
        }
        entry_budget.mem_terms = budget.mem_terms - running;
        acc.add_in_place(mul(x, y, entry_budget), entry_budget);
        if (running + acc.term_count() > budget.mem_terms) {
          throw TermBudgetExceeded("group ring: matrix product exceeds the term budget");
        }
      }
      running += acc.term_count();
    }
  }
  return out;
}

GroupRingMatrix adjoint(const GroupRingMatrix& a) {
  GroupRingMatrix out(a.oracle(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j).adjoint();
  }
  return out;
}

GroupRingMatrix gram(const GroupRingMatrix& a, const Budget& budget) {
  return mat_mul(a, adjoint(a), budget);
}

GroupRingMatrix hcat(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  check_same_ring(a.oracle(), b.oracle());
  if (a.rows() != b.rows()) throw std::invalid_argument("group ring: row mismatch in hcat");
  GroupRingMatrix out(a.oracle(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
  }
  return out;
}

GroupRingMatrix vstack(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  check_same_ring(a.oracle(), b.oracle());
  if (a.cols() != b.cols()) throw std::invalid_argument("group ring: column mismatch in vstack");
  GroupRingMatrix out(a.oracle(), a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
  }
  return out;
}

GroupRingElement add(const GroupRingElement& a, const GroupRingElement& b, const Budget& budget) {
  GroupRingElement out = a;
  out.add_in_place(b, budget);
  return out;
}

GroupRingElement sub(const GroupRingElement& a, const GroupRingElement& b, const Budget& budget) {
  GroupRingElement out = a;
  out.sub_in_place(b, budget);
  return out;
}

GroupRingElement scalar_mul(const Rational& c, const GroupRingElement& a) {
  GroupRingElement out = a;
  out.scale_in_place(c);
  return out;
}

Rational trace(const GroupRingMatrix& a, const Budget& budget) {
  if (a.rows() != a.cols()) throw std::invalid_argument("group ring: trace of nonsquare matrix");
  Rational s(0);
  for (std::size_t i = 0; i < a.rows(); ++i) s += a.at(i, i).coefficient_one(budget);
  return s;
}

Rational coeff_one_norm(const GroupRingMatrix& a) {
  Rational s(0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) s += a.at(i, j).coeff_abs_sum();
  }
  return s < 1 ? Rational(1) : s;
}

SpectralMoments::SpectralMoments(GroupRingMatrix delta, Budget budget)
    : delta_(std::move(delta)),
      power_(GroupRingMatrix::identity(delta_.oracle(), delta_.rows())),
      budget_(budget) {
  if (delta_.rows() != delta_.cols()) {
    throw std::invalid_argument("moments: matrix must be square");
  }
  moments_.emplace_back(static_cast<long>(delta_.rows()));
}

Rational SpectralMoments::at(std::size_t j) {
  std::lock_guard<std::mutex> lock(mutex_);
  while (moments_.size() <= j) {
    power_ = mat_mul(power_, delta_, budget_);
    moments_.push_back(trace(power_, budget_));
  }
  return moments_[j];
}

}  // namespace l2approx
