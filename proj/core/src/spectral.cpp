#include "l2approx/spectral.hpp"

#include <stdexcept>
#include <utility>

#include "l2approx/errors.hpp"
#include "l2approx/lueck.hpp"

namespace l2approx {

namespace {

GroupRingMatrix one_minus_scaled_gram(const GroupRingMatrix& a, const Rational& k,
                                      const Budget& budget) {
  if (k <= 0) throw std::invalid_argument("charseq: norm bound must be positive");
  GroupRingMatrix g = gram(a, budget);
  GroupRingMatrix id = GroupRingMatrix::identity(a.oracle(), a.rows());
  return mat_sub(id, mat_scale(g, Rational(1) / (k * k)), budget);
}

}  // namespace

CharSeq::CharSeq(const GroupRingMatrix& a, const Rational& k, Budget budget)
    : budget_(budget), k_(k), m_(a.rows()), b_(one_minus_scaled_gram(a, k, budget)) {
  powers_.emplace(0, GroupRingMatrix::identity(b_.oracle(), m_));
}

const GroupRingMatrix& CharSeq::power(std::size_t s) {
  auto it = powers_.find(s);
  if (it != powers_.end()) return it->second;
  auto prev = powers_.find(s - 1);
  if (s == 0 || prev == powers_.end()) {
    throw std::logic_error("charseq: power window advanced past request");
  }
  it = powers_.emplace(s, mat_mul(prev->second, b_, budget_)).first;
  while (powers_.size() > 2) powers_.erase(powers_.begin());
  return it->second;
}

Rational CharSeq::next() {
  const std::size_t p = values_.size();
  Rational val(0);
  if (p % 2 == 0) {
    const GroupRingMatrix& ps = power(p / 2);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) val += ps.at(i, j).coeff_square_sum();
    }
  } else {
    const GroupRingMatrix& ps1 = power(p / 2 + 1);
    const GroupRingMatrix& ps = powers_.at(p / 2);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        val += inner_product(ps.at(i, j), ps1.at(i, j), budget_);
      }
    }
  }
  if (val < 0 || val > Rational(Integer(m_))) {
    throw ModeViolation("characteristic value outside [0, rows]; norm bound too small?");
  }
  if (!values_.empty() && val > values_.back()) {
    throw ModeViolation("characteristic sequence increased; norm bound too small?");
  }
  values_.push_back(val);
  return val;
}

Rational CharSeq::at(std::size_t p) {
  while (values_.size() <= p) next();
  return values_[p];
}

RealStream dimker_upper(const GroupRingMatrix& a, Budget budget) {
  auto seq = std::make_shared<CharSeq>(a, coeff_one_norm(a), budget);
  return RealStream(StreamMode::MonotoneUpper, [seq](std::size_t n) { return seq->at(n); });
}

Rational dimker_lower_term(CharSeq& seq, const DetClassCertificate& cert, unsigned long k) {
  if (k < 2) throw std::invalid_argument("lower term: k must be at least 2");
  if (cert.q < 0) throw std::invalid_argument("lower term: certificate must be nonnegative");
  const unsigned long e = k * k;
  Rational d = seq.bound() * seq.bound();
  Rational eps = Rational(3) * cert.q / Rational(2u * floor_log2(Integer(k)));
  Rational base = Rational(1) - Rational(1) / (Rational(k) * d);
  Rational slack = Rational(Integer(seq.gram_size())) * pow_rational(base, e);
  return seq.at(e) - eps - slack;
}

Rational dimker_lower_term(const GroupRingMatrix& a, const Rational& k_bound,
                           const DetClassCertificate& cert, unsigned long k, Budget budget) {
  CharSeq seq(a, k_bound, budget);
  return dimker_lower_term(seq, cert, k);
}

namespace {

// Smallest positive integer multiple of a with integer coefficients; the
// kernel of right multiplication is unchanged by the rescale.
GroupRingMatrix integral_rescale(const GroupRingMatrix& a) {
  Integer lam(1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (const auto& [w, c] : a.at(i, j).terms()) lam = lcm(lam, c.get_den());
    }
  }
  if (lam == 1) return a;
  return mat_scale(a, Rational(lam));
}

std::optional<Rational> exact_dimker_via_faithful(const GroupRingMatrix& a,
                                                  std::uint32_t quotient_cap) {
  const OracleRef& oracle = a.oracle();
  if (!oracle->has_quotient_provider()) return std::nullopt;
  auto h = oracle->find_quotient({}, quotient_cap);
  if (!h || !h->faithful) return std::nullopt;
  return finite_dimker(a, *h);
}

}  // namespace

BracketResult dimker_bracket(const GroupRingMatrix& a, const BracketOptions& opts) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  BracketResult res;
  res.norm_bound = coeff_one_norm(a);
  res.cert_used = opts.cert;

  if (m == 0 || n == 0) {
    res.lo = res.hi = (m == 0) ? Rational(0) : Rational(Integer(m));
    res.status = BracketStatus::Exact;
    res.steps.push_back({0, res.lo, res.hi});
    return res;
  }

  if (auto exact = exact_dimker_via_faithful(a, opts.quotient_cap)) {
    res.lo = res.hi = *exact;
    res.status = BracketStatus::Exact;
    res.steps.push_back({0, res.lo, res.hi});
    return res;
  }

  GroupRingMatrix work = a;
  if (!res.cert_used) {
    work = integral_rescale(a);
    res.cert_used = a.oracle()->detclass_certificate(m, coeff_one_norm(work));
  }
  res.norm_bound = coeff_one_norm(work);

  Rational lo = (m > n) ? Rational(Integer(m - n)) : Rational(0);
  Rational hi = Rational(Integer(m));
  res.status = BracketStatus::IterationsExhausted;
  unsigned long k = 2;
  try {
    CharSeq seq(work, res.norm_bound, opts.budget);
    for (std::size_t p = 0; p < opts.max_iters; ++p) {
      hi = seq.at(p);
      if (res.cert_used && p == static_cast<std::size_t>(k) * k) {
        Rational q = dimker_lower_term(seq, DetClassCertificate{*res.cert_used}, k);
        if (q > lo) lo = q;
        ++k;
      }
      if (hi < lo) {
        throw ModeViolation("kernel bracket crossed; certificate or norm bound invalid");
      }
      res.steps.push_back({p, lo, hi});
      if (hi == lo) {
        res.status = BracketStatus::Exact;
        break;
      }
      if (hi - lo <= opts.target) {
        res.status = BracketStatus::TargetMet;
        break;
      }
    }
  } catch (const FuelExhausted&) {
    res.status = BracketStatus::BudgetExceeded;
  } catch (const TermBudgetExceeded&) {
    res.status = BracketStatus::BudgetExceeded;
  }
  res.lo = lo;
  res.hi = hi;
  return res;
}

DimkerStreams dimker_streams(const GroupRingMatrix& a, const BracketOptions& opts) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) {
    RealStream c = RealStream::constant((m == 0) ? Rational(0) : Rational(Integer(m)));
    return {c, c};
  }
  if (auto exact = exact_dimker_via_faithful(a, opts.quotient_cap)) {
    RealStream c = RealStream::constant(*exact);
    return {c, c};
  }

  std::optional<Rational> cert = opts.cert;
  GroupRingMatrix work = a;
  if (!cert) {
    work = integral_rescale(a);
    cert = a.oracle()->detclass_certificate(m, coeff_one_norm(work));
  }
  auto seq = std::make_shared<CharSeq>(work, coeff_one_norm(work), opts.budget);
  Rational fl = (m > n) ? Rational(Integer(m - n)) : Rational(0);

  RealStream upper(StreamMode::MonotoneUpper, [seq](std::size_t p) { return seq->at(p); });
  // Index p of the lower stream harvests every certified term with k <= p;
  // the running best is monotone even though individual terms are not.
  RealStream lower(StreamMode::MonotoneLower, [seq, fl, cert](std::size_t p) {
    Rational best = fl;
    if (cert) {
      for (unsigned long k = 2; k <= p; ++k) {
        Rational q = dimker_lower_term(*seq, DetClassCertificate{*cert}, k);
        if (q > best) best = q;
      }
    }
    return best;
  });
  return {std::move(lower), std::move(upper)};
}

FkLogdetResult fk_logdet_partial(const GroupRingMatrix& a, const std::optional<Rational>& m_bound,
                                 std::size_t kmax, const TailSpec& spec, Budget budget) {
  const std::size_t m = a.rows();
  FkLogdetResult res;
  res.heuristic = false;
  res.tail = Rational(0);
  res.terms = 0;
  if (m == 0 || a.cols() == 0) {
    res.value = {Rational(0), Rational(0)};
    return res;
  }
  if (kmax == 0) throw std::invalid_argument("logdet: need at least one series term");

  Rational norm = coeff_one_norm(a);
  Rational bound = m_bound ? *m_bound : norm;
  if (bound < norm) {
    throw std::invalid_argument("logdet: norm bound below the coefficient bound");
  }
  if (spec.kind == TailSpec::Kind::CertifiedRatio && (spec.rho < 0 || spec.rho >= 1)) {
    throw std::invalid_argument("logdet: ratio bound must sit in [0, 1)");
  }

  CharSeq seq(a, bound, budget);
  Rational sum(0);
  Rational prev = seq.at(0);
  Rational last = prev;
  for (std::size_t k = 1; k <= kmax; ++k) {
    last = seq.at(k);
    sum += last / Rational(static_cast<unsigned long>(k));
    if (spec.kind == TailSpec::Kind::CertifiedRatio && last > spec.rho * prev) {
      throw std::invalid_argument("logdet: ratio bound contradicted by a computed term");
    }
    if (k < kmax) prev = last;
  }
  res.terms = kmax;

  Rational t(0);
  if (last == 0) {
    // monotone and nonnegative, so every later term vanishes too
    t = 0;
  } else {
    switch (spec.kind) {
      case TailSpec::Kind::NovikovShubin: {
        if (spec.c <= 0 || spec.alpha_num == 0 || spec.alpha_den == 0) {
          throw std::invalid_argument("logdet: decay hypothesis needs C > 0 and alpha > 0");
        }
        Integer kp;
        mpz_pow_ui(kp.get_mpz_t(), Integer(static_cast<unsigned long>(kmax)).get_mpz_t(),
                   spec.alpha_num);
        Integer u;
        mpz_root(u.get_mpz_t(), kp.get_mpz_t(), spec.alpha_den);
        t = spec.c / (Rational(2) * Rational(u));
        break;
      }
      case TailSpec::Kind::ObservedGeometric: {
        Rational rho = last / prev;
        if (rho >= 1) {
          throw std::invalid_argument("logdet: observed tail ratio not below one");
        }
        t = last * rho /
            (Rational(2) * (Rational(1) - rho) * Rational(static_cast<unsigned long>(kmax)));
        res.heuristic = true;
        break;
      }
      case TailSpec::Kind::CertifiedRatio: {
        t = last * spec.rho / (Rational(2) * (Rational(1) - spec.rho) *
                               Rational(static_cast<unsigned long>(kmax + 1)));
        break;
      }
    }
  }
  res.tail = t;

  RatInterval lnb =
      (bound == 1) ? RatInterval{Rational(0), Rational(0)} : ln_enclosure(bound);
  Rational mm = Rational(Integer(m));
  res.value.lo = mm * lnb.lo - sum / 2 - t;
  res.value.hi = mm * lnb.hi - sum / 2;
  return res;
}

TorsionResult torsion_estimate(const TorsionInput& input, std::size_t kmax, Budget budget) {
  const auto& bd = input.boundaries;
  if (bd.empty()) throw std::invalid_argument("torsion: no boundaries given");
  for (std::size_t i = 1; i < bd.size(); ++i) {
    if (bd[i].cols() != bd[i - 1].rows()) {
      throw std::invalid_argument("torsion: boundary shapes do not chain");
    }
    if (bd[i].oracle() != bd[i - 1].oracle()) {
      throw std::invalid_argument("torsion: boundaries use different oracles");
    }
  }

  TorsionResult res;
  res.heuristic = false;
  Rational lo(0), hi(0);
  const std::size_t n = bd.size();
  for (std::size_t p = 1; p <= n; ++p) {
    GroupRingMatrix w = (p < n) ? hcat(bd[p - 1], adjoint(bd[p])) : bd[n - 1];
    FkLogdetResult r = fk_logdet_partial(w, input.norm_bound, kmax, input.tail, budget);
    Rational weight(static_cast<unsigned long>(p));
    if (p % 2 == 1) {
      lo += weight * r.value.lo;
      hi += weight * r.value.hi;
    } else {
      lo -= weight * r.value.hi;
      hi -= weight * r.value.lo;
    }
    res.heuristic = res.heuristic || r.heuristic;
    res.degrees.push_back(std::move(r));
  }
  res.value = {lo, hi};
  return res;
}

}  // namespace l2approx
