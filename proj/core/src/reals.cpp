#include "l2approx/reals.hpp"

#include <stdexcept>
#include <utility>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

Rational pow2_neg(std::size_t n) {
  Rational r(1);
  mpz_mul_2exp(r.get_den().get_mpz_t(), r.get_den().get_mpz_t(), n);
  r.canonicalize();
  return r;
}

}  // namespace

struct RealStream::State {
  StreamMode mode;
  Producer producer;
  Producer error_producer;
  bool heuristic = false;
  std::optional<Rational> exact;
  std::vector<Rational> cache;
  std::vector<Rational> error_cache;
};

RealStream::RealStream(StreamMode mode, Producer producer) : state_(std::make_shared<State>()) {
  if (!producer) throw std::invalid_argument("real stream: null producer");
  if (mode == StreamMode::ErrorSeq) {
    throw std::invalid_argument("real stream: error-seq mode needs an error producer");
  }
  state_->mode = mode;
  state_->producer = std::move(producer);
}

RealStream::RealStream(Producer producer, Producer error_producer)
    : state_(std::make_shared<State>()) {
  if (!producer || !error_producer) throw std::invalid_argument("real stream: null producer");
  state_->mode = StreamMode::ErrorSeq;
  state_->producer = std::move(producer);
  state_->error_producer = std::move(error_producer);
}

RealStream RealStream::constant(const Rational& value) {
  RealStream s(StreamMode::Effective, [value](std::size_t) { return value; });
  s.state_->exact = value;
  return s;
}

StreamMode RealStream::mode() const { return state_->mode; }
bool RealStream::heuristic() const { return state_->heuristic; }
void RealStream::set_heuristic(bool flag) { state_->heuristic = flag; }
const std::optional<Rational>& RealStream::exact_value() const { return state_->exact; }

Rational RealStream::at(std::size_t n) {
  auto& cache = state_->cache;
  while (cache.size() <= n) {
    std::size_t i = cache.size();
    Rational q = state_->producer(i);
    if (i > 0) {
      if (state_->mode == StreamMode::MonotoneUpper && q > cache[i - 1]) {
        throw ModeViolation("real stream: monotone-upper pair increased");
      }
      if (state_->mode == StreamMode::MonotoneLower && q < cache[i - 1]) {
        throw ModeViolation("real stream: monotone-lower pair decreased");
      }
    }
    cache.push_back(std::move(q));
  }
  return cache[n];
}

Rational RealStream::error_at(std::size_t n) {
  if (state_->mode != StreamMode::ErrorSeq) {
    throw std::logic_error("real stream: error_at on a stream without an error sequence");
  }
  auto& cache = state_->error_cache;
  while (cache.size() <= n) {
    Rational e = state_->error_producer(cache.size());
    if (e < 0) throw ModeViolation("real stream: negative error bound");
    cache.push_back(std::move(e));
  }
  return cache[n];
}

RealStream bracket_to_effective(RealStream lower, RealStream upper, std::uint64_t pull_budget) {
  if (lower.mode() != StreamMode::MonotoneLower || upper.mode() != StreamMode::MonotoneUpper) {
    throw std::invalid_argument("bracket: expected a monotone-lower, monotone-upper pair");
  }
  auto cursor = std::make_shared<std::size_t>(0);
  RealStream out(StreamMode::Effective,
                 [lower, upper, cursor, pull_budget](std::size_t n) mutable {
                   Rational eps = pow2_neg(n);
                   std::uint64_t pulls = 0;
                   for (std::size_t k = *cursor;; ++k) {
                     if (pulls++ >= pull_budget) {
                       throw FuelExhausted("bracket: gap did not close within the pull budget");
                     }
                     Rational lo = lower.at(k);
                     Rational hi = upper.at(k);
                     if (lo > hi) throw ModeViolation("bracket: lower bound crossed upper bound");
                     if (hi - lo <= eps) {
                       *cursor = k;
                       // named so the lambda deduces mpq_class, not a lazy
                       // gmp expression referencing dead locals
                       Rational mid = (hi + lo) / 2;
                       return mid;
                     }
                   }
                 });
  out.set_heuristic(lower.heuristic() || upper.heuristic());
  if (lower.exact_value() && upper.exact_value() &&
      *lower.exact_value() == *upper.exact_value()) {
    return RealStream::constant(*lower.exact_value());
  }
  return out;
}

std::string BinaryExpansion::to_string() const {
  if (!integer_resolved) return "k=?";
  std::string out = "k=" + integer_part.get_str();
  if (!digits.empty()) out += " " + digits;
  return out;
}

namespace {

BinaryExpansion expansion_by_division(const Rational& value, std::size_t digit_count) {
  BinaryExpansion out;
  out.integer_resolved = true;
  // floor division puts the fraction in [0,1)
  mpz_fdiv_q(out.integer_part.get_mpz_t(), value.get_num().get_mpz_t(),
             value.get_den().get_mpz_t());
  Rational frac = value - Rational(out.integer_part);
  for (std::size_t d = 0; d < digit_count; ++d) {
    frac *= 2;
    if (frac >= 1) {
      out.digits += '1';
      frac -= 1;
    } else {
      out.digits += '0';
    }
  }
  return out;
}

}  // namespace

BinaryExpansion to_binary_expansion(RealStream r, std::size_t digit_count, std::uint64_t fuel) {
  if (r.exact_value()) return expansion_by_division(*r.exact_value(), digit_count);
  if (r.mode() != StreamMode::Effective) {
    throw std::invalid_argument("binary expansion: stream must be effective");
  }
  BinaryExpansion out;
  // integer part: certified once a window fits inside [m, m+1)
  for (std::uint64_t l = 0; l <= fuel; ++l) {
    Rational q = r.at(static_cast<std::size_t>(l));
    Rational eps = pow2_neg(static_cast<std::size_t>(l));
    Integer m;
    Rational lo = q - eps;
    mpz_fdiv_q(m.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
    if (q + eps < Rational(m) + 1) {
      out.integer_resolved = true;
      out.integer_part = m;
      break;
    }
  }
  if (!out.integer_resolved) {
    out.unresolved = true;
    return out;
  }
  Rational base(out.integer_part);
  for (std::size_t d = 1; d <= digit_count; ++d) {
    Rational threshold = base + pow2_neg(d);
    bool decided = false;
    for (std::uint64_t l = 0; l <= fuel; ++l) {
      Rational q = r.at(static_cast<std::size_t>(l));
      Rational eps = pow2_neg(static_cast<std::size_t>(l));
      if (q - eps >= threshold) {
        out.digits += '1';
        base = threshold;
        decided = true;
        break;
      }
      if (q + eps < threshold) {
        out.digits += '0';
        decided = true;
        break;
      }
    }
    if (!decided) {
      out.digits += '?';
      out.unresolved = true;
      break;
    }
  }
  return out;
}

RealStream extract_effective(RealStream q, std::uint64_t fuel) {
  if (q.exact_value()) return RealStream::constant(*q.exact_value());
  if (q.mode() == StreamMode::Effective) return q;
  if (q.mode() == StreamMode::ErrorSeq) {
    RealStream out(StreamMode::Effective, [q, fuel](std::size_t m) mutable {
      Rational eps = pow2_neg(m);
      for (std::uint64_t n = 0; n <= fuel; ++n) {
        if (q.error_at(static_cast<std::size_t>(n)) <= eps) {
          return q.at(static_cast<std::size_t>(n));
        }
      }
      throw FuelExhausted("extract: error sequence did not reach the window within fuel");
    });
    out.set_heuristic(q.heuristic());
    return out;
  }
  // refutation search: a candidate q_N is emitted once a run of later values
  // stays inside its window; any escape moves the candidate forward
  constexpr std::uint64_t kWindowRun = 100;
  RealStream out(StreamMode::Effective, [q, fuel](std::size_t m) mutable {
    Rational eps = pow2_neg(m);
    std::uint64_t budget = fuel;
    std::size_t candidate = 0;
    std::uint64_t stable = 0;
    std::size_t probe = 1;
    while (budget-- > 0) {
      Rational gap = q.at(probe) - q.at(candidate);
      if (gap < 0) gap = -gap;
      if (gap > eps) {
        candidate = probe;
        stable = 0;
      } else if (++stable >= kWindowRun) {
        return q.at(candidate);
      }
      ++probe;
    }
    throw FuelExhausted("extract: no window survived refutation within fuel");
  });
  out.set_heuristic(true);
  return out;
}

RealStream diagonalize(std::function<Rational(std::size_t, std::size_t)> q, std::uint64_t fuel) {
  if (!q) throw std::invalid_argument("diagonalize: null producer");
  RealStream out(StreamMode::Effective, [q = std::move(q), fuel](std::size_t n) {
    RealStream row(StreamMode::Unvalidated, [q, n](std::size_t j) { return q(n, j); });
    return extract_effective(row, fuel).at(n);
  });
  out.set_heuristic(true);
  return out;
}

DivergenceReport detect_divergence(RealStream q, const Rational& threshold, std::uint64_t fuel) {
  DivergenceReport report;
  // a declared modulus means a finite limit; divergence is impossible
  if (q.mode() == StreamMode::Effective || q.mode() == StreamMode::ErrorSeq) return report;
  for (std::uint64_t k = 0; k < fuel; ++k) {
    if (q.at(static_cast<std::size_t>(k)) > threshold) {
      report.kind = DivergenceReport::Kind::Diverging;
      report.index = static_cast<std::size_t>(k);
      return report;
    }
  }
  return report;
}

CutAnswer dedekind_query(RealStream r, const Rational& x, std::uint64_t fuel) {
  if (r.exact_value()) {
    if (*r.exact_value() > x) return CutAnswer::XLess;
    if (*r.exact_value() < x) return CutAnswer::XGreater;
    return CutAnswer::Undecided;
  }
  if (r.mode() != StreamMode::Effective) {
    throw std::invalid_argument("dedekind: stream must be effective");
  }
  for (std::uint64_t l = 0; l <= fuel; ++l) {
    Rational q = r.at(static_cast<std::size_t>(l));
    Rational eps = pow2_neg(static_cast<std::size_t>(l));
    if (q - eps > x) return CutAnswer::XLess;
    if (q + eps < x) return CutAnswer::XGreater;
  }
  return CutAnswer::Undecided;
}

}  // namespace l2approx
