#include "l2approx/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace l2approx {

Rational pow_rational(const Rational& x, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), e);
  // num/den are coprime already when x is canonical, so no reduction needed;
  // canonicalize anyway to keep the invariant independent of the input.
  r.canonicalize();
  return r;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

unsigned floor_log2(const Integer& n) {
  if (n < 1) throw std::invalid_argument("floor_log2: argument must be >= 1");
  return static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2) - 1);
}

Rational rational_from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = text.find('/');
  auto check_int = [](const std::string& s, bool sign_ok) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (sign_ok && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  try {
    if (slash == std::string::npos) {
      if (!check_int(text, true))
        throw std::invalid_argument("malformed integer literal: " + text);
      return Rational(Integer(text));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!check_int(num, true) || !check_int(den, false))
      throw std::invalid_argument("malformed rational literal: " + text);
    Integer d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    Rational r(Integer(num), d);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational literal: " + text);
  }
}

std::string rational_to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

namespace {

// Enclosure of ln(y) for y in [1, 2], endpoints exact rationals.
RatInterval ln_series(const Rational& y, unsigned bits) {
  if (y == 1) return {Rational(0), Rational(0)};
  Rational u = (y - 1) / (y + 1);  // in (0, 1/3]
  Rational u2 = u * u;
  Rational term = u;  // u^(2i+1)
  Rational sum = 0;
  // Stop when the geometric remainder bound drops below 2^-(bits+2).
  Rational eps(1, 1);
  eps >>= (bits + 2);  // mpq 2^-(bits+2)
  unsigned long i = 0;
  Rational rem;
  for (;;) {
    sum += term / Rational(2 * i + 1);
    term *= u2;
    // Remaining tail: 2 * sum_{j>i} u^(2j+1)/(2j+1) <= 2*u^(2i+3)/((2i+3)(1-u^2)).
    rem = 2 * term / (Rational(2 * i + 3) * (1 - u2));
    if (rem <= eps) break;
    ++i;
  }
  Rational lo = 2 * sum;
  return {lo, lo + rem};
}

// Outward rounding to the grid of multiples of 2^-bits.
Rational round_down_dyadic(const Rational& x, unsigned bits) {
  Integer scaled;
  Rational shifted = x;
  shifted <<= bits;
  mpz_fdiv_q(scaled.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational r(scaled);
  r >>= bits;
  return r;
}

Rational round_up_dyadic(const Rational& x, unsigned bits) {
  Integer scaled;
  Rational shifted = x;
  shifted <<= bits;
  mpz_cdiv_q(scaled.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational r(scaled);
  r >>= bits;
  return r;
}

}  // namespace

RatInterval ln_enclosure(const Rational& x, unsigned bits) {
  if (x <= 0) throw std::invalid_argument("ln_enclosure: argument must be > 0");
  if (x < 1) {
    RatInterval inv = ln_enclosure(Rational(1) / x, bits);
    return {-inv.hi, -inv.lo};
  }
  // Reduce to y = x / 2^j in [1, 2).
  long j = 0;
  Rational y = x;
  while (y >= 2) {
    y >>= 1;
    ++j;
  }
  RatInterval lny = ln_series(y, bits);
  RatInterval result = lny;
  if (j > 0) {
    RatInterval ln2 = ln_series(Rational(2), bits + floor_log2(Integer(j)) + 1);
    result.lo += Rational(j) * ln2.lo;
    result.hi += Rational(j) * ln2.hi;
  }
  return {round_down_dyadic(result.lo, bits), round_up_dyadic(result.hi, bits)};
}

Integer ceil_ln(const Rational& x) {
  if (x == 1) return 0;
  RatInterval e = ln_enclosure(x, 40);
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), e.hi.get_num_mpz_t(), e.hi.get_den_mpz_t());
  return c;
}

}  // namespace l2approx
