#include "epn/realroots.hpp"

#include <algorithm>
#include <cmath>

#include "epn/polyops.hpp"

namespace epn {

namespace {

// Dense integer coefficients, ascending degree, content removed.
struct DensePoly {
    std::vector<Integer> c;

    long deg() const { return static_cast<long>(c.size()) - 1; }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    void make_primitive() {
        Integer g(0);
        for (const auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g > 1)
            for (auto& x : c) x /= g;
    }

    DensePoly derivative() const {
        DensePoly d;
        for (size_t k = 1; k < c.size(); ++k)
            d.c.push_back(c[k] * static_cast<long>(k));
        return d;
    }

    // Sign of p(a/b) with b > 0, via the homogenized integer Horner scheme.
    int sign_at(const Rational& x) const {
        if (c.empty()) return 0;
        const Integer& a = x.get_num();
        const Integer& b = x.get_den();
        Integer acc = c.back();
        Integer bp(1);
        for (size_t k = c.size() - 1; k-- > 0;) {
            bp *= b;
            acc = acc * a + c[k] * bp;
        }
        return sgn(acc);
    }

    int sign_at_inf(int dir) const {
        if (c.empty()) return 0;
        int s = sgn(c.back());
        if (dir < 0 && (deg() % 2 == 1)) s = -s;
        return s;
    }
};

DensePoly to_dense(const MultiPoly& p, const std::string& var) {
    auto coeffs = p.univariate_coeffs(var);
    Integer den_lcm(1);
    for (const auto& q : coeffs)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    DensePoly d;
    d.c.reserve(coeffs.size());
    for (const auto& q : coeffs) d.c.push_back(q.get_num() * (den_lcm / q.get_den()));
    d.trim();
    d.make_primitive();
    return d;
}

// Exact remainder of a by b over Q, primitivized with a POSITIVE scale only
// so Sturm sign information survives.
DensePoly rational_rem(const DensePoly& a, const DensePoly& b) {
    std::vector<Rational> r(a.c.size());
    for (size_t k = 0; k < a.c.size(); ++k) r[k] = Rational(a.c[k]);
    long db = b.deg();
    for (;;) {
        while (!r.empty() && r.back() == 0) r.pop_back();
        long dr = static_cast<long>(r.size()) - 1;
        if (dr < db) break;
        Rational f = r.back() / Rational(b.c.back());
        for (long k = 0; k <= db; ++k)
            r[static_cast<size_t>(dr - db + k)] -= f * Rational(b.c[static_cast<size_t>(k)]);
        r.pop_back();
    }
    DensePoly out;
    if (r.empty()) return out;
    Integer den_lcm(1);
    for (const auto& q : r)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    for (const auto& q : r) out.c.push_back(q.get_num() * (den_lcm / q.get_den()));
    out.trim();
    out.make_primitive();
    return out;
}

struct SturmChain {
    std::vector<DensePoly> seq;

    explicit SturmChain(const DensePoly& p) {
        seq.push_back(p);
        seq.push_back(p.derivative());
        seq.back().make_primitive();
        while (!seq.back().c.empty() && seq.back().deg() >= 1) {
            DensePoly r = rational_rem(seq[seq.size() - 2], seq.back());
            if (r.c.empty()) break;
            for (auto& x : r.c) x = -x;
            seq.push_back(std::move(r));
        }
    }

    long variations_at(const Rational& x) const {
        long v = 0;
        int prev = 0;
        for (const auto& p : seq) {
            int s = p.sign_at(x);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
        return v;
    }

    long variations_at_inf(int dir) const {
        long v = 0;
        int prev = 0;
        for (const auto& p : seq) {
            int s = p.sign_at_inf(dir);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
        return v;
    }

    // Number of roots in (lo, hi].
    long count(const Rational& lo, const Rational& hi) const {
        return variations_at(lo) - variations_at(hi);
    }
};

Rational cauchy_bound(const DensePoly& p) {
    Rational m(0);
    Integer lead = p.c.back();
    if (lead < 0) lead = -lead;
    for (size_t k = 0; k + 1 < p.c.size(); ++k) {
        Integer a = p.c[k];
        if (a < 0) a = -a;
        Rational q(a, lead);
        mpq_canonicalize(q.get_mpq_t());
        if (q > m) m = q;
    }
    Rational b = m + 2;
    Integer ceilb = b.get_num() / b.get_den() + 1;
    return Rational(ceilb);
}

struct Isolator {
    const DensePoly& p;
    const SturmChain& chain;
    std::vector<std::pair<Rational, Rational>> found;

    // Invariant on entry: p(lo) != 0, p(hi) != 0.
    void split(const Rational& lo, const Rational& hi, long nroots) {
        if (nroots <= 0) return;
        if (nroots == 1 && p.sign_at(lo) * p.sign_at(hi) < 0) {
            found.emplace_back(lo, hi);
            return;
        }
        Rational mid = (lo + hi) / 2;
        if (p.sign_at(mid) == 0) {
            // Exact root at the midpoint: carve a private interval around it.
            Rational h = (hi - lo) / 4;
            while (chain.count(mid - h, mid + h) != 1 ||
                   p.sign_at(mid - h) == 0 || p.sign_at(mid + h) == 0)
                h /= 2;
            found.emplace_back(mid - h, mid + h);
            split(lo, mid - h, chain.count(lo, mid - h));
            split(mid + h, hi, chain.count(mid + h, hi));
            return;
        }
        long left = chain.count(lo, mid);
        split(lo, mid, left);
        split(mid, hi, nroots - left);
    }
};

} // namespace

std::vector<IsolatingInterval> isolate(const MultiPoly& p, const std::string& var) {
    if (p.is_zero()) throw precondition_error("isolate: zero polynomial");
    MultiPoly sf = squarefree_part(p, var);
    if (sf.degree(var) < 1) return {};
    DensePoly d = to_dense(sf, var);
    SturmChain chain(d);
    Rational bound = cauchy_bound(d);
    long total = chain.count(-bound, bound);

    Isolator iso{d, chain, {}};
    iso.split(-bound, bound, total);
    std::sort(iso.found.begin(), iso.found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<IsolatingInterval> out;
    for (const auto& [lo, hi] : iso.found) {
        IsolatingInterval iv;
        iv.lower = lo;
        iv.upper = hi;
        iv.poly = sf;
        iv.var = var;
        iv.sign_lower = d.sign_at(lo);
        iv.sign_upper = d.sign_at(hi);
        out.push_back(std::move(iv));
    }
    if (static_cast<long>(out.size()) != total)
        throw invariant_violation("isolate: interval count disagrees with Sturm count");
    return out;
}

long count_real_roots(const MultiPoly& p, const std::string& var) {
    if (p.is_zero()) throw precondition_error("count_real_roots: zero polynomial");
    MultiPoly sf = squarefree_part(p, var);
    if (sf.degree(var) < 1) return 0;
    DensePoly d = to_dense(sf, var);
    SturmChain chain(d);
    return chain.variations_at_inf(-1) - chain.variations_at_inf(+1);
}

PrecReal refine(const IsolatingInterval& iv, long digits,
                std::pair<Rational, Rational>* enclosure_out) {
    if (digits < 1) throw precondition_error("refine: digits must be >= 1");
    DensePoly d = to_dense(iv.poly, iv.var);
    DensePoly dp = d.derivative();

    Rational lo = iv.lower, hi = iv.upper;
    int slo = d.sign_at(lo);
    if (slo == 0 || slo * d.sign_at(hi) >= 0)
        throw precondition_error("refine: invalid isolating interval");

    // The enclosure target is absolute, so large roots need extra digits.
    double mag = std::max(std::abs(lo.get_d()), std::abs(hi.get_d()));
    long extra = mag > 1 ? static_cast<long>(std::log10(mag)) + 2 : 0;
    long work = digits + extra + 12;

    Rational target = pow10_rat(-digits);

    auto eval_at = [&](const DensePoly& q, const PrecReal& x) {
        PrecReal acc(q.c.back(), work);
        for (size_t k = q.c.size() - 1; k-- > 0;)
            acc = acc * x + PrecReal(q.c[k], work);
        return acc;
    };

    // Exact sign-change checkpoint in a window around a numeric iterate.
    auto certify_point = [&](const PrecReal& x, Rational& out_lo, Rational& out_hi) {
        Rational xr = x.to_rational();
        Rational h = target / 4;
        for (int tries = 0; tries < 96; ++tries) {
            Rational a = xr - h, b = xr + h;
            if (a > lo && b < hi) {
                int sa = d.sign_at(a), sb = d.sign_at(b);
                if (sa != 0 && sb != 0 && sa * sb < 0) {
                    out_lo = a;
                    out_hi = b;
                    return true;
                }
            } else if (h > hi - lo) {
                break;
            }
            h *= 2;
        }
        return false;
    };

    // A few exact bisections to tighten the Newton start.
    for (int i = 0; i < 16 && hi - lo > target; ++i) {
        Rational mid = (lo + hi) / 2;
        int sm = d.sign_at(mid);
        if (sm == 0) {
            Rational h = (hi - lo) / 8;
            while (d.sign_at(mid - h) == 0 || d.sign_at(mid + h) == 0 ||
                   d.sign_at(mid - h) * d.sign_at(mid + h) > 0)
                h /= 2;
            lo = mid - h;
            hi = mid + h;
            break;
        }
        if (sm == slo) lo = mid;
        else hi = mid;
    }

    bool certified = hi - lo <= target * 2;
    PrecReal x((lo + hi) / 2, work);
    PrecReal tol = PrecReal::pow10(-(digits + 4), work);
    for (int step = 0; step < 240 && !certified; ++step) {
        PrecReal fx = eval_at(d, x);
        PrecReal dfx = eval_at(dp, x);
        if (dfx.is_zero()) break;
        PrecReal dxn = fx / dfx;
        PrecReal x2 = x - dxn;
        Rational x2r = x2.to_rational();
        if (x2r <= lo || x2r >= hi) break;  // left the bracket; bisect instead
        x = x2;
        bool small_step = dxn.abs() <= tol;
        if (small_step || (step % 8) == 7) {
            Rational a, b;
            if (certify_point(x, a, b)) {
                lo = a;
                hi = b;
                if (small_step) {
                    certified = true;
                    break;
                }
            }
        }
    }

    // Pure exact bisection fallback until the certificate width is reached.
    while (hi - lo > target * 2) {
        Rational mid = (lo + hi) / 2;
        int sm = d.sign_at(mid);
        if (sm == 0) {
            Rational h = target / 8;
            while (d.sign_at(mid - h) == 0 || d.sign_at(mid + h) == 0) h /= 2;
            lo = mid - h;
            hi = mid + h;
            break;
        }
        if (sm == slo) lo = mid;
        else hi = mid;
    }

    if (enclosure_out) *enclosure_out = {lo, hi};
    return PrecReal((lo + hi) / 2, digits + extra);
}

} // namespace epn
