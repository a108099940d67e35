#pragma once

#include <mpfr.h>

#include <string>
#include <utility>
#include <vector>

#include "epn/errors.hpp"
#include "epn/rational.hpp"

namespace epn {

// Precision is denominated in decimal digits p; the backing MPFR precision
// is ceil(p*log2(10)) + 16 guard bits.
mpfr_prec_t prec_bits_for(long digits);

// Arbitrary-precision real.  Immutable in spirit: every operation returns a
// fresh value carrying the minimum of the operands' decimal precisions.
class PrecReal {
public:
    PrecReal() : PrecReal(kDefaultDigits) {}
    explicit PrecReal(long digits);
    PrecReal(double v, long digits);
    PrecReal(long v, long digits);
    PrecReal(const Rational& q, long digits);
    PrecReal(const Integer& z, long digits);

    PrecReal(const PrecReal& o);
    PrecReal(PrecReal&& o) noexcept;
    PrecReal& operator=(const PrecReal& o);
    PrecReal& operator=(PrecReal&& o) noexcept;
    ~PrecReal();

    static PrecReal from_string(const std::string& s, long digits);
    // 10^e at the given precision (exact while in range).
    static PrecReal pow10(long e, long digits);

    long digits() const { return digits_; }

    PrecReal operator-() const;
    PrecReal operator+(const PrecReal& o) const;
    PrecReal operator-(const PrecReal& o) const;
    PrecReal operator*(const PrecReal& o) const;
    PrecReal operator/(const PrecReal& o) const;

    PrecReal& operator+=(const PrecReal& o) { return *this = *this + o; }
    PrecReal& operator-=(const PrecReal& o) { return *this = *this - o; }
    PrecReal& operator*=(const PrecReal& o) { return *this = *this * o; }
    PrecReal& operator/=(const PrecReal& o) { return *this = *this / o; }

    PrecReal abs() const;
    // Square root of a nonnegative value; precondition_error otherwise.
    PrecReal sqrt() const;

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }

    int compare(const PrecReal& o) const { return mpfr_cmp(v_, o.v_); }
    bool operator<(const PrecReal& o) const { return compare(o) < 0; }
    bool operator>(const PrecReal& o) const { return compare(o) > 0; }
    bool operator<=(const PrecReal& o) const { return compare(o) <= 0; }
    bool operator>=(const PrecReal& o) const { return compare(o) >= 0; }
    bool operator==(const PrecReal& o) const { return compare(o) == 0; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // Exact dyadic value as a rational.
    Rational to_rational() const;
    // Decimal string with n significant digits (default: full precision).
    std::string str(long n = 0) const;

    // Rounds to a value stored at `digits` precision.
    PrecReal round_to(long digits) const;

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    static constexpr long kDefaultDigits = 18;

private:
    mpfr_t v_;
    long digits_;
};

PrecReal min(const PrecReal& a, const PrecReal& b);
PrecReal max(const PrecReal& a, const PrecReal& b);

// Complex value whose components share one precision.
class PrecComplex {
public:
    PrecComplex() = default;
    PrecComplex(PrecReal re, PrecReal im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit PrecComplex(const PrecReal& re) : re_(re), im_(PrecReal(0L, re.digits())) {}
    PrecComplex(double re, double im, long digits)
        : re_(re, digits), im_(im, digits) {}

    const PrecReal& re() const { return re_; }
    const PrecReal& im() const { return im_; }
    long digits() const { return std::min(re_.digits(), im_.digits()); }

    PrecComplex operator-() const { return {-re_, -im_}; }
    PrecComplex operator+(const PrecComplex& o) const { return {re_ + o.re_, im_ + o.im_}; }
    PrecComplex operator-(const PrecComplex& o) const { return {re_ - o.re_, im_ - o.im_}; }
    PrecComplex operator*(const PrecComplex& o) const;
    PrecComplex operator/(const PrecComplex& o) const;

    PrecComplex& operator+=(const PrecComplex& o) { return *this = *this + o; }
    PrecComplex& operator-=(const PrecComplex& o) { return *this = *this - o; }
    PrecComplex& operator*=(const PrecComplex& o) { return *this = *this * o; }
    PrecComplex& operator/=(const PrecComplex& o) { return *this = *this / o; }

    PrecComplex conj() const { return {re_, -im_}; }
    PrecReal norm2() const { return re_ * re_ + im_ * im_; }
    PrecReal abs() const { return norm2().sqrt(); }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    std::string str(long n = 0) const;

private:
    PrecReal re_;
    PrecReal im_;
};

// Principal square root with the convention used throughout: for x >= 0 the
// nonnegative real root, for x < 0 the value +i*sqrt(|x|).
PrecComplex sqrt_prec(const PrecReal& x, long digits);
inline PrecComplex sqrt_prec(const Rational& x, long digits) {
    return sqrt_prec(PrecReal(x, digits), digits);
}

// Conjugating inner product sum_k conj(u_k) * v_k.
PrecComplex conj_inner(const std::vector<PrecComplex>& u,
                       const std::vector<PrecComplex>& v);

// Scales v to unit Euclidean norm; degenerate_input_error on the zero vector.
std::vector<PrecComplex> normalize(const std::vector<PrecComplex>& v);

} // namespace epn
