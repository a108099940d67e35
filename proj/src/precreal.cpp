#include "epn/precreal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace epn {

Rational rational_from_string(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw structural_error("empty rational literal");

    // Fraction or plain integer: GMP parses these directly.
    if (t.find_first_of(".eE") == std::string::npos) {
        Rational q;
        if (mpq_set_str(q.get_mpq_t(), t.c_str(), 10) != 0)
            throw structural_error("bad rational literal: " + s);
        mpq_canonicalize(q.get_mpq_t());
        return q;
    }

    // Decimal / scientific form -> exact m / 10^k.
    long exp10 = 0;
    std::string mant = t;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = t.substr(0, epos);
        exp10 = std::strtol(t.c_str() + epos + 1, nullptr, 10);
    }
    std::string digits;
    bool neg = false;
    long frac_digits = 0;
    bool seen_dot = false;
    for (size_t i = 0; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '+' && i == 0) continue;
        if (c == '-' && i == 0) { neg = true; continue; }
        if (c == '.') {
            if (seen_dot) throw structural_error("bad rational literal: " + s);
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw structural_error("bad rational literal: " + s);
        digits.push_back(c);
        if (seen_dot) ++frac_digits;
    }
    if (digits.empty()) throw structural_error("bad rational literal: " + s);
    Integer num(digits, 10);
    if (neg) num = -num;
    Rational q(num);
    long net = exp10 - frac_digits;
    if (net > 0)
        q *= Rational(pow_int(Integer(10), static_cast<unsigned long>(net)));
    else if (net < 0)
        q /= Rational(pow_int(Integer(10), static_cast<unsigned long>(-net)));
    mpq_canonicalize(q.get_mpq_t());
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

Rational pow10_rat(long e) {
    Integer p = pow_int(Integer(10), static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? Rational(p) : Rational(1) / Rational(p);
}

mpfr_prec_t prec_bits_for(long digits) {
    if (digits < 1) throw precondition_error("precision must be >= 1 digit");
    return static_cast<mpfr_prec_t>(std::ceil(digits * std::log2(10.0))) + 16;
}

PrecReal::PrecReal(long digits) : digits_(digits) {
    mpfr_init2(v_, prec_bits_for(digits));
    mpfr_set_zero(v_, 1);
}

PrecReal::PrecReal(double v, long digits) : digits_(digits) {
    mpfr_init2(v_, prec_bits_for(digits));
    mpfr_set_d(v_, v, MPFR_RNDN);
}

PrecReal::PrecReal(long v, long digits) : digits_(digits) {
    mpfr_init2(v_, prec_bits_for(digits));
    mpfr_set_si(v_, v, MPFR_RNDN);
}

PrecReal::PrecReal(const Rational& q, long digits) : digits_(digits) {
    mpfr_init2(v_, prec_bits_for(digits));
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

PrecReal::PrecReal(const Integer& z, long digits) : digits_(digits) {
    mpfr_init2(v_, prec_bits_for(digits));
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
}

PrecReal::PrecReal(const PrecReal& o) : digits_(o.digits_) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

PrecReal::PrecReal(PrecReal&& o) noexcept : digits_(o.digits_) {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, MPFR_PREC_MIN);
}

PrecReal& PrecReal::operator=(const PrecReal& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
        digits_ = o.digits_;
    }
    return *this;
}

PrecReal& PrecReal::operator=(PrecReal&& o) noexcept {
    if (this != &o) {
        mpfr_swap(v_, o.v_);
        std::swap(digits_, o.digits_);
    }
    return *this;
}

PrecReal::~PrecReal() { mpfr_clear(v_); }

PrecReal PrecReal::from_string(const std::string& s, long digits) {
    PrecReal r(digits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw structural_error("bad real literal: " + s);
    return r;
}

PrecReal PrecReal::pow10(long e, long digits) {
    PrecReal r(digits);
    mpfr_ui_pow_ui(r.v_, 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
    if (e < 0) mpfr_ui_div(r.v_, 1, r.v_, MPFR_RNDN);
    return r;
}

namespace {
inline long combine(long a, long b) { return std::min(a, b); }
} // namespace

PrecReal PrecReal::operator-() const {
    PrecReal r(digits_);
    mpfr_neg(r.raw(), v_, MPFR_RNDN);
    return r;
}

PrecReal PrecReal::operator+(const PrecReal& o) const {
    PrecReal r(combine(digits_, o.digits_));
    mpfr_add(r.raw(), v_, o.v_, MPFR_RNDN);
    return r;
}

PrecReal PrecReal::operator-(const PrecReal& o) const {
    PrecReal r(combine(digits_, o.digits_));
    mpfr_sub(r.raw(), v_, o.v_, MPFR_RNDN);
    return r;
}

PrecReal PrecReal::operator*(const PrecReal& o) const {
    PrecReal r(combine(digits_, o.digits_));
    mpfr_mul(r.raw(), v_, o.v_, MPFR_RNDN);
    return r;
}

PrecReal PrecReal::operator/(const PrecReal& o) const {
    if (o.is_zero()) throw degenerate_input_error("division by zero");
    PrecReal r(combine(digits_, o.digits_));
    mpfr_div(r.raw(), v_, o.v_, MPFR_RNDN);
    return r;
}

PrecReal PrecReal::abs() const {
    PrecReal r(digits_);
    mpfr_abs(r.raw(), v_, MPFR_RNDN);
    return r;
}

PrecReal PrecReal::sqrt() const {
    if (sign() < 0) throw precondition_error("sqrt of negative PrecReal");
    PrecReal r(digits_);
    mpfr_sqrt(r.raw(), v_, MPFR_RNDN);
    return r;
}

Rational PrecReal::to_rational() const {
    if (is_zero()) return Rational(0);
    if (!mpfr_number_p(v_)) throw numerical_failure("non-finite value");
    Rational q;
    mpfr_exp_t e;
    Integer m;
    e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    q = Rational(m);
    if (e > 0) {
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e));
    } else if (e < 0) {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-e));
    }
    return q;
}

std::string PrecReal::str(long n) const {
    if (n <= 0) n = digits_;
    if (is_zero()) return "0";
    if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
    mpfr_exp_t e;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(n), v_, MPFR_RNDN);
    std::string mant(raw);
    mpfr_free_str(raw);
    bool neg = !mant.empty() && mant[0] == '-';
    std::string d = neg ? mant.substr(1) : mant;
    // Trim trailing zeros but keep at least one digit.
    size_t last = d.find_last_not_of('0');
    d = d.substr(0, std::max<size_t>(last + 1, 1));
    std::string out;
    if (e >= 1 && e <= static_cast<mpfr_exp_t>(d.size())) {
        out = d.substr(0, static_cast<size_t>(e));
        if (static_cast<size_t>(e) < d.size()) out += "." + d.substr(static_cast<size_t>(e));
    } else if (e <= 0 && e > -6) {
        out = "0." + std::string(static_cast<size_t>(-e), '0') + d;
    } else {
        out = d.substr(0, 1);
        if (d.size() > 1) out += "." + d.substr(1);
        out += "e" + std::to_string(static_cast<long>(e - 1));
    }
    return neg ? "-" + out : out;
}

PrecReal PrecReal::round_to(long digits) const {
    PrecReal r(digits);
    mpfr_set(r.raw(), v_, MPFR_RNDN);
    return r;
}

PrecReal min(const PrecReal& a, const PrecReal& b) { return a <= b ? a : b; }
PrecReal max(const PrecReal& a, const PrecReal& b) { return a >= b ? a : b; }

PrecComplex PrecComplex::operator*(const PrecComplex& o) const {
    return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
}

PrecComplex PrecComplex::operator/(const PrecComplex& o) const {
    PrecReal n = o.norm2();
    if (n.is_zero()) throw degenerate_input_error("complex division by zero");
    PrecComplex num = *this * o.conj();
    return {num.re() / n, num.im() / n};
}

std::string PrecComplex::str(long n) const {
    std::string r = re_.str(n);
    if (im_.is_zero()) return r;
    std::string i = im_.str(n);
    if (!i.empty() && i[0] == '-') return r + " - " + i.substr(1) + "i";
    return r + " + " + i + "i";
}

PrecComplex sqrt_prec(const PrecReal& x, long digits) {
    if (digits < 1) throw precondition_error("sqrt_prec: digits must be >= 1");
    PrecReal v = x.round_to(digits);
    PrecReal zero(0L, digits);
    if (v.sign() >= 0) return {v.sqrt(), zero};
    return {zero, (-v).sqrt()};
}

PrecComplex conj_inner(const std::vector<PrecComplex>& u,
                       const std::vector<PrecComplex>& v) {
    if (u.size() != v.size() || u.empty())
        throw dimension_error("conj_inner: vectors must have equal nonzero length");
    PrecComplex acc = u[0].conj() * v[0];
    for (size_t k = 1; k < u.size(); ++k) acc += u[k].conj() * v[k];
    return acc;
}

std::vector<PrecComplex> normalize(const std::vector<PrecComplex>& v) {
    if (v.empty()) throw dimension_error("normalize: empty vector");
    PrecReal n2 = conj_inner(v, v).re();
    if (n2.is_zero()) throw degenerate_input_error("normalize: zero vector");
    PrecReal inv = PrecReal(1L, n2.digits()) / n2.sqrt();
    std::vector<PrecComplex> out;
    out.reserve(v.size());
    PrecComplex s(inv, PrecReal(0L, inv.digits()));
    for (const auto& x : v) out.push_back(x * s);
    return out;
}

} // namespace epn
