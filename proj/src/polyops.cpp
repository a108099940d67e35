#include "epn/polyops.hpp"

#include <algorithm>

namespace epn {

MultiPoly arith(const MultiPoly& a, const MultiPoly& b, PolyOp op) {
    switch (op) {
        case PolyOp::add: return a + b;
        case PolyOp::sub: return a - b;
        case PolyOp::mul: return a * b;
    }
    throw structural_error("unknown polynomial operation");
}

std::vector<MultiPoly> coeffs_in(const MultiPoly& p, const std::string& var) {
    long d = std::max<long>(p.degree(var), 0);
    std::vector<MultiPoly> out;
    out.reserve(static_cast<size_t>(d) + 1);
    for (long k = 0; k <= d; ++k)
        out.push_back(p.coeff_of(var, static_cast<uint32_t>(k)));
    return out;
}

MultiPoly assemble_in(const std::vector<MultiPoly>& coeffs, const std::string& var) {
    if (coeffs.empty()) throw precondition_error("assemble_in: empty coefficient list");
    const VarSetPtr& vars = coeffs.front().vars();
    MultiPoly acc = MultiPoly::zero(vars);
    Expo e(vars->size(), 0);
    size_t vi = vars->index(var);
    for (size_t k = 0; k < coeffs.size(); ++k) {
        e[vi] = static_cast<uint32_t>(k);
        acc += coeffs[k].times_term(Rational(1), e);
    }
    return acc;
}

MultiPoly divexact(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) throw precondition_error("divexact: division by zero polynomial");
    if (a.is_zero()) return a;
    MultiPoly rem = a;
    MultiPoly quot = MultiPoly::zero(a.vars());
    const Expo& lb = b.leading_monomial();
    const Rational& cb = b.leading_coeff();
    while (!rem.is_zero()) {
        const Expo& la = rem.leading_monomial();
        Expo q(la.size());
        for (size_t i = 0; i < la.size(); ++i) {
            if (la[i] < lb[i]) throw invariant_violation("divexact: not divisible");
            q[i] = la[i] - lb[i];
        }
        Rational c = rem.leading_coeff() / cb;
        MultiPoly t = MultiPoly::from_terms(a.vars(), {{q, c}});
        quot += t;
        rem -= b.times_term(c, q);
    }
    return quot;
}

namespace {

long deg_in(const std::vector<MultiPoly>& c) {
    for (size_t k = c.size(); k-- > 0;)
        if (!c[k].is_zero()) return static_cast<long>(k);
    return -1;
}

void trim(std::vector<MultiPoly>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

// Pseudo-remainder on dense views: returns r with lc(b)^(da-db+1)*a = q*b + r.
std::vector<MultiPoly> prem_view(std::vector<MultiPoly> a,
                                 const std::vector<MultiPoly>& b) {
    long da = deg_in(a), db = deg_in(b);
    if (db < 0) throw precondition_error("prem: zero divisor");
    const MultiPoly& lb = b[static_cast<size_t>(db)];
    long steps = 0;
    while (deg_in(a) >= db && deg_in(a) >= 0) {
        long e = deg_in(a);
        MultiPoly la = a[static_cast<size_t>(e)];
        // a <- lb*a - la*x^(e-db)*b
        for (auto& c : a) c = lb * c;
        for (long k = 0; k <= db; ++k)
            a[static_cast<size_t>(e - db + k)] -= la * b[static_cast<size_t>(k)];
        trim(a);
        ++steps;
    }
    // Scale so the multiplier is exactly lc(b)^(da-db+1).
    long want = da - db + 1;
    for (long i = steps; i < want; ++i)
        for (auto& c : a) c = lb * c;
    return a;
}

MultiPoly pow_poly(const MultiPoly& p, long e) {
    MultiPoly r = MultiPoly::constant(p.vars(), Rational(1));
    MultiPoly b = p;
    while (e > 0) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

} // namespace

std::optional<MultiPoly> divide_exactly(const MultiPoly& a, const MultiPoly& b) {
    try {
        return divexact(a, b);
    } catch (const invariant_violation&) {
        return std::nullopt;
    }
}

MultiPoly prem(const MultiPoly& a, const MultiPoly& b, const std::string& var) {
    auto r = prem_view(coeffs_in(a, var), coeffs_in(b, var));
    if (r.empty()) return MultiPoly::zero(a.vars());
    return assemble_in(r, var);
}

// Subresultant PRS resultant (Cohen, Algorithm 3.3.7).
MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
    if (p.degree(var) < 1 || q.degree(var) < 1)
        throw precondition_error("resultant: both arguments need positive degree in " + var);

    auto A = coeffs_in(p, var);
    auto B = coeffs_in(q, var);
    trim(A);
    trim(B);
    int s = 1;
    if (deg_in(A) < deg_in(B)) {
        std::swap(A, B);
        if ((deg_in(A) & 1) && (deg_in(B) & 1)) s = -s;
    }
    const VarSetPtr& vars = p.vars();
    MultiPoly g = MultiPoly::constant(vars, Rational(1));
    MultiPoly h = g;
    for (;;) {
        long da = deg_in(A), db = deg_in(B);
        long delta = da - db;
        if ((da & 1) && (db & 1)) s = -s;
        auto R = prem_view(A, B);
        A = B;
        MultiPoly denom = g * pow_poly(h, delta);
        B = R;
        for (auto& c : B)
            if (!c.is_zero()) c = divexact(c, denom);
        trim(B);
        g = A[static_cast<size_t>(deg_in(A))];
        if (delta >= 1) h = divexact(pow_poly(g, delta), pow_poly(h, delta - 1));
        if (deg_in(B) < 0) {
            // Common factor in var: resultant vanishes identically.
            return MultiPoly::zero(vars);
        }
        if (deg_in(B) == 0) {
            long d = deg_in(A);
            MultiPoly res = divexact(pow_poly(B[0], d), pow_poly(h, d - 1));
            return s < 0 ? -res : res;
        }
    }
}

MultiPoly discriminant(const MultiPoly& p, const std::string& var) {
    long d = p.degree(var);
    if (d < 2) throw precondition_error("discriminant: degree in " + var + " must be >= 2");
    MultiPoly dp = p.derivative(var);
    MultiPoly res = resultant(p, dp, var);
    MultiPoly lc = p.coeff_of(var, static_cast<uint32_t>(d));
    MultiPoly disc = divexact(res, lc);
    return ((d * (d - 1) / 2) % 2) ? -disc : disc;
}

MultiPoly gcd_univariate(const MultiPoly& a, const MultiPoly& b, const std::string& var) {
    for (const auto& p : {a, b}) {
        for (size_t i = 0; i < p.vars()->size(); ++i)
            if (p.vars()->name(i) != var && p.degree(i) > 0)
                throw precondition_error("gcd_univariate: polynomial not univariate in " + var);
    }
    if (a.is_zero()) return b.is_zero() ? b : b.content_primitive().second;
    if (b.is_zero()) return a.content_primitive().second;
    MultiPoly f = a.content_primitive().second;
    MultiPoly g = b.content_primitive().second;
    if (f.degree(var) < g.degree(var)) std::swap(f, g);
    while (!g.is_zero()) {
        MultiPoly r = prem(f, g, var);
        f = g;
        g = r.is_zero() ? r : r.content_primitive().second;
    }
    return f.content_primitive().second;
}

MultiPoly squarefree_part(const MultiPoly& p, const std::string& var) {
    if (p.is_zero()) throw precondition_error("squarefree_part of zero polynomial");
    if (p.degree(var) < 1) return p.content_primitive().second;
    MultiPoly g = gcd_univariate(p, p.derivative(var), var);
    if (g.degree(var) < 1) return p.content_primitive().second;
    return divexact(p, g).content_primitive().second;
}

} // namespace epn
