#pragma once

#include <gmpxx.h>

#include <string>

namespace epn {

// Exact arithmetic lives on GMP.  mpq_class is kept canonical by GMP itself
// (gcd(num,den)=1, den>0), which is exactly the invariant we need.
using Integer  = mpz_class;
using Rational = mpq_class;

// Parses "3", "-5/7", "0.25", "1.5e-3".  Decimal forms become exact
// rationals (m / 10^k), so nothing is rounded.
Rational rational_from_string(const std::string& s);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

inline Integer pow_int(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational pow_rat(const Rational& base, unsigned long e) {
    Rational r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
    return r;
}

// 10^e as an exact rational (e may be negative).
Rational pow10_rat(long e);

} // namespace epn
