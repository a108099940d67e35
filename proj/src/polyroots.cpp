#include "epn/polyroots.hpp"

#include <algorithm>

#include "epn/errors.hpp"

namespace epn {

PrecComplex eval_poly(const std::vector<PrecComplex>& coeffs, const PrecComplex& x) {
    if (coeffs.empty()) return PrecComplex(PrecReal(0L, x.digits()));
    PrecComplex acc = coeffs.back();
    for (size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

namespace {

std::vector<PrecComplex> initial_points(size_t n, const PrecReal& radius, long work) {
    std::vector<PrecComplex> pts;
    pts.reserve(n);
    mpfr_t pi, theta, c, s;
    mpfr_prec_t bits = prec_bits_for(work);
    mpfr_init2(pi, bits);
    mpfr_init2(theta, bits);
    mpfr_init2(c, bits);
    mpfr_init2(s, bits);
    mpfr_const_pi(pi, MPFR_RNDN);
    for (size_t j = 0; j < n; ++j) {
        // 2*pi*j/n + 0.7/n, an offset that avoids real-axis symmetry traps.
        mpfr_mul_ui(theta, pi, 2 * j, MPFR_RNDN);
        mpfr_div_ui(theta, theta, static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_add_d(theta, theta, 0.7 / static_cast<double>(n) + 0.35, MPFR_RNDN);
        mpfr_sin_cos(s, c, theta, MPFR_RNDN);
        PrecReal cr(work), sr(work);
        mpfr_set(cr.raw(), c, MPFR_RNDN);
        mpfr_set(sr.raw(), s, MPFR_RNDN);
        pts.emplace_back(cr * radius, sr * radius);
    }
    mpfr_clear(pi);
    mpfr_clear(theta);
    mpfr_clear(c);
    mpfr_clear(s);
    return pts;
}

} // namespace

std::vector<PrecComplex> all_roots(const std::vector<PrecComplex>& coeffs_in,
                                   long digits, long max_iter) {
    long work = digits + 10;
    std::vector<PrecComplex> coeffs;
    for (const auto& c : coeffs_in)
        coeffs.emplace_back(c.re().round_to(work), c.im().round_to(work));
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.size() <= 1)
        throw precondition_error("all_roots: polynomial must have positive degree");

    std::vector<PrecComplex> roots;
    // Exact zero roots split off first.
    size_t zero_roots = 0;
    while (zero_roots + 1 < coeffs.size() && coeffs[zero_roots].is_zero()) ++zero_roots;
    for (size_t k = 0; k < zero_roots; ++k)
        roots.emplace_back(PrecReal(0L, work));
    std::vector<PrecComplex> p(coeffs.begin() + static_cast<long>(zero_roots),
                               coeffs.end());

    size_t n = p.size() - 1;
    if (n == 0) return roots;

    // Monic normalization.
    PrecComplex lead = p.back();
    for (auto& c : p) c = c / lead;

    PrecReal radius(1L, work);
    for (size_t k = 0; k + 1 < p.size(); ++k) {
        PrecReal a = p[k].abs();
        if (a > radius) radius = a;
    }
    radius = radius + PrecReal(1L, work);

    auto z = initial_points(n, radius, work);

    PrecReal tol = PrecReal::pow10(-(digits + 2), work);
    PrecReal floor_tol = PrecReal::pow10(-std::max(6L, digits / 3), work);
    PrecReal one(1L, work);
    PrecReal best(1e300, work);
    long stagnant = 0;
    int consecutive_ok = 0;
    bool converged = false;

    for (long iter = 0; iter < max_iter; ++iter) {
        PrecReal max_rel(0L, work);
        for (size_t j = 0; j < n; ++j) {
            PrecComplex denom(one, PrecReal(0L, work));
            for (size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                PrecComplex d = z[j] - z[k];
                if (d.is_zero())
                    d = PrecComplex(tol * radius, PrecReal(0L, work));
                denom *= d;
            }
            PrecComplex num = eval_poly(p, z[j]);
            PrecComplex step = num / denom;
            z[j] -= step;
            PrecReal rel = step.abs() / max(one, z[j].abs());
            if (rel > max_rel) max_rel = rel;
        }
        if (max_rel <= tol) {
            if (++consecutive_ok >= 2) {
                converged = true;
                break;
            }
        } else {
            consecutive_ok = 0;
        }
        // Stagnation at the attainable accuracy floor (clustered roots).
        if (max_rel * PrecReal(2L, work) >= best) {
            if (++stagnant > 40 && max_rel <= floor_tol) {
                converged = true;
                break;
            }
        } else {
            stagnant = 0;
            best = max_rel;
        }
    }
    if (!converged) {
        // Accept whatever accuracy was reached if it is at least modest;
        // otherwise report failure so the caller can escalate precision.
        PrecReal resid(0L, work);
        for (size_t j = 0; j < n; ++j) {
            PrecReal a = eval_poly(p, z[j]).abs();
            if (a > resid) resid = a;
        }
        if (resid > floor_tol * radius)
            throw numerical_failure("all_roots: Weierstrass iteration did not converge");
    }

    // Per-root Newton polish (quadratic for simple roots).
    std::vector<PrecComplex> dp;
    for (size_t k = 1; k < p.size(); ++k)
        dp.push_back(p[k] * PrecComplex(PrecReal(static_cast<long>(k), work)));
    for (size_t j = 0; j < n; ++j) {
        for (int it = 0; it < 4; ++it) {
            PrecComplex f = eval_poly(p, z[j]);
            PrecComplex df = eval_poly(dp, z[j]);
            if (df.is_zero()) break;
            PrecComplex step = f / df;
            if (step.abs() > one) break;
            z[j] -= step;
        }
    }

    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

std::vector<PrecComplex> all_roots(const std::vector<PrecReal>& coeffs,
                                   long digits, long max_iter) {
    std::vector<PrecComplex> c;
    c.reserve(coeffs.size());
    for (const auto& x : coeffs) c.emplace_back(x, PrecReal(0L, x.digits()));
    return all_roots(c, digits, max_iter);
}

} // namespace epn
