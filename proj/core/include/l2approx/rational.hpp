#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

namespace l2approx {

// All arithmetic in the library is exact. Rational is GMP-backed; nothing in
// core ever rounds through floating point.
using Integer = mpz_class;
using Rational = mpq_class;

// x^e with e >= 0, exact.
Rational pow_rational(const Rational& x, unsigned long e);

// C(n, k) as an exact integer.
Integer binomial(unsigned long n, unsigned long k);

// floor(log2(n)) for n >= 1.
unsigned floor_log2(const Integer& n);

// Parses "p", "-p", or "p/q" (q > 0). Throws std::invalid_argument on
// malformed input or zero denominator.
Rational rational_from_string(const std::string& text);

// Canonical decimal-free form: "p" or "p/q", always reduced, q > 0.
std::string rational_to_string(const Rational& x);

// A closed interval [lo, hi] with rational endpoints, lo <= hi.
// Used for every quantity that is only known up to certified bounds.
struct RatInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

// Certified enclosure of ln(x) for rational x > 0.
//
// The enclosure is computed from the atanh series
//   ln y = 2 * sum u^(2i+1)/(2i+1),  u = (y-1)/(y+1)
// after reducing the argument to [1,2) by powers of two, with the series
// remainder bounded by its geometric majorant.  Endpoints are rounded
// outward to the dyadic grid 2^-bits, so the result is a true enclosure of
// width at most 2^-bits + 2^(1-bits).
RatInterval ln_enclosure(const Rational& x, unsigned bits = 40);

// Smallest integer c with c >= ln(x), computed from an enclosure. When ln(x)
// sits within the enclosure width of an integer the result may exceed the
// true ceiling by one; it is never too small.
Integer ceil_ln(const Rational& x);

}  // namespace l2approx
