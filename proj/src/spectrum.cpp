#include "epn/spectrum.hpp"

#include <algorithm>

#include "epn/polyops.hpp"
#include "epn/polyroots.hpp"
#include "epn/realroots.hpp"

namespace epn {

const char* to_string(EP2Boundary::Kind k) {
    switch (k) {
        case EP2Boundary::Kind::merge_and_complexify: return "merge";
        case EP2Boundary::Kind::unfolding: return "unfold";
        case EP2Boundary::Kind::real_crossing_zero: return "zero-cross";
        case EP2Boundary::Kind::epn: return "epn";
    }
    return "?";
}

char class_code(RootClass c) {
    switch (c) {
        case RootClass::real_positive: return 'P';
        case RootClass::real_negative: return 'N';
        case RootClass::complex_member: return 'C';
    }
    return '?';
}

SpectrumSample sample(const SecularSystem& sys,
                      const std::map<std::string, PrecReal>& values,
                      const PrecReal& z, long digits) {
    // Coefficient cancellation near an EPN shrinks roots like the cube root
    // of the evaluation error, so the working precision doubles `digits`.
    long work = 2 * digits + 10;
    std::map<std::string, PrecReal> assignment = values;
    assignment.emplace("z", z.round_to(work));

    int j = sys.model.half_size;
    std::vector<PrecReal> coeffs;
    coeffs.reserve(static_cast<size_t>(j) + 1);
    for (int k = 0; k <= j; ++k) {
        MultiPoly c = sys.secular.coeff_of("s", static_cast<uint32_t>(k));
        coeffs.push_back(c.eval_prec(assignment, work).re());
    }

    SpectrumSample out;
    out.z = z.round_to(digits);
    out.odd_zero_mode = sys.odd_zero_mode;
    auto roots = all_roots(coeffs, work);
    std::sort(roots.begin(), roots.end(), [](const PrecComplex& a, const PrecComplex& b) {
        if (!(a.re() == b.re())) return a.re() < b.re();
        return a.im() < b.im();
    });

    PrecReal base_thr = PrecReal::pow10(10 - digits, work);
    for (const auto& r : roots) {
        PrecReal scale = max(PrecReal(1L, work), r.abs());
        PrecReal thr = base_thr * scale;
        PrecReal aim = r.im().abs();
        bool is_complex = aim > thr;
        if (aim > thr / PrecReal(4L, work) && aim < thr * PrecReal(4L, work))
            out.ambiguous = true;
        RootClass cls;
        if (is_complex) {
            cls = RootClass::complex_member;
            out.complex_energies += 2;
        } else if (r.re().sign() >= 0) {
            cls = RootClass::real_positive;
            out.real_energies += 2;
        } else {
            cls = RootClass::real_negative;
            out.imaginary_energies += 2;
        }
        if (!is_complex && r.re().abs() < thr) out.ambiguous = true;
        out.roots.push_back(PrecComplex(r.re().round_to(digits), r.im().round_to(digits)));
        out.classes.push_back(cls);
    }
    if (out.odd_zero_mode) ++out.real_energies;
    return out;
}

namespace {

// Substitutes the tuple exactly (numeric values become dyadic rationals) and
// returns the secular polynomial as an exact bivariate in (s, z).
MultiPoly substituted_secular(const SecularSystem& sys,
                              const std::map<std::string, Rational>& values) {
    MultiPoly p = sys.secular;
    for (const auto& [k, v] : values) p = p.substitute(k, v);
    return p;
}

std::map<std::string, Rational> tuple_exact_values(const ParameterTuple& tuple,
                                                   const std::vector<MultiPoly>& constraints,
                                                   long digits, bool* exact) {
    *exact = true;
    for (const auto& [k, v] : tuple.values)
        if (v.kind != TupleValue::Kind::exact) *exact = false;
    std::map<std::string, Rational> out;
    if (*exact) {
        for (const auto& [k, v] : tuple.values) out.emplace(k, v.exact);
        return out;
    }
    for (const auto& [k, v] : values_at_digits(tuple, constraints, digits))
        out.emplace(k, v.to_rational());
    return out;
}

// Divides by (z - 1) while the remainder is negligible against the
// coefficient scale; exact tuples divide exactly.  Returns the number of
// factors removed.
int deflate_epn_root(MultiPoly& p, const std::string& var, long digits) {
    int removed = 0;
    for (;;) {
        if (p.degree(var) < 1) return removed;
        auto coeffs = p.univariate_coeffs(var);
        // Synthetic division by (var - 1): q_k = c_{k+1} + q_{k+1}, remainder = p(1).
        std::vector<Rational> q(coeffs.size() - 1, Rational(0));
        Rational carry(0);
        for (size_t k = coeffs.size(); k-- > 1;) {
            carry += coeffs[k];
            q[k - 1] = carry;
        }
        Rational rem = carry + coeffs[0];
        Rational scale(0);
        for (const auto& c : coeffs) {
            Rational a = c >= 0 ? c : Rational(-c);
            if (a > scale) scale = a;
        }
        Rational tol = scale * pow10_rat(-std::max<long>(digits / 2, 10));
        Rational arem = rem >= 0 ? rem : Rational(-rem);
        if (scale == 0 || arem > tol) return removed;
        MultiPoly::TermMap tm;
        size_t vi = p.vars()->index(var);
        for (size_t k = 0; k < q.size(); ++k) {
            if (q[k] == 0) continue;
            Expo e(p.vars()->size(), 0);
            e[vi] = static_cast<uint32_t>(k);
            tm.emplace(std::move(e), q[k]);
        }
        p = MultiPoly::from_terms(p.vars(), std::move(tm));
        ++removed;
    }
}

} // namespace

std::vector<EP2Boundary> ep2_boundaries(const SecularSystem& sys,
                                        const ParameterTuple& tuple,
                                        const std::vector<MultiPoly>& constraints,
                                        const Rational& zmin, const Rational& zmax,
                                        long digits) {
    if (!tuple.certified)
        throw precondition_error("ep2_boundaries: tuple is not certified");
    bool exact = false;
    auto values = tuple_exact_values(tuple, constraints, digits, &exact);
    MultiPoly biv = substituted_secular(sys, values);

    std::map<std::string, PrecReal> numeric_values;
    for (const auto& [k, v] : values) numeric_values.emplace(k, PrecReal(v, digits + 10));

    std::vector<EP2Boundary> out;
    auto probe_census = [&](const PrecReal& z) {
        auto s = sample(sys, numeric_values, z, digits);
        return s.complex_energies;
    };

    // EPN point: both families vanish at z = 1 for these tuples.
    MultiPoly disc = discriminant(biv, "s");
    MultiPoly pj = biv.coeff_of("s", 0);
    int epn_disc = deflate_epn_root(disc, "z", tuple.digits);
    int epn_pj = deflate_epn_root(pj, "z", tuple.digits);
    if ((epn_disc > 0 || epn_pj > 0) && Rational(1) >= zmin && Rational(1) <= zmax) {
        EP2Boundary b;
        b.z_star = PrecReal(1L, digits);
        b.s_star = PrecReal(0L, digits);
        b.kind = EP2Boundary::Kind::epn;
        b.certified = exact;
        out.push_back(b);
    }

    auto in_window = [&](const Rational& lo, const Rational& hi) {
        return hi >= zmin && lo <= zmax;
    };

    // Discriminant zeros: collision boundaries.
    if (disc.degree("z") >= 1) {
        for (const auto& iv : isolate(disc, "z")) {
            if (!in_window(iv.lower, iv.upper)) continue;
            PrecReal zs = refine(iv, digits + 5);
            // Kind from the census on both sides; the collision value from
            // the closest root pair at z*.
            PrecReal h = max(PrecReal(1e-5, digits), zs.abs() * PrecReal(1e-5, digits));
            int before = probe_census(zs - h);
            int after = probe_census(zs + h);
            auto at = sample(sys, numeric_values, zs, digits);
            PrecReal best_gap(1e300, digits);
            PrecReal sstar(0L, digits);
            for (size_t a = 0; a + 1 < at.roots.size(); ++a)
                for (size_t b2 = a + 1; b2 < at.roots.size(); ++b2) {
                    PrecReal gap = (at.roots[a] - at.roots[b2]).abs();
                    if (gap < best_gap) {
                        best_gap = gap;
                        PrecComplex mid = (at.roots[a] + at.roots[b2]) *
                                          PrecComplex(PrecReal(0.5, digits));
                        sstar = mid.re();
                    }
                }
            EP2Boundary b;
            b.z_star = zs.round_to(digits);
            b.s_star = sstar.round_to(digits);
            b.kind = after > before ? EP2Boundary::Kind::merge_and_complexify
                                    : EP2Boundary::Kind::unfolding;
            b.certified = exact;
            out.push_back(b);
        }
    }

    // Constant-term zeros: some s crosses zero (real <-> imaginary energies).
    if (pj.degree("z") >= 1) {
        for (const auto& iv : isolate(pj, "z")) {
            if (!in_window(iv.lower, iv.upper)) continue;
            PrecReal zs = refine(iv, digits + 5);
            EP2Boundary b;
            b.z_star = zs.round_to(digits);
            b.s_star = PrecReal(0L, digits);
            b.kind = EP2Boundary::Kind::real_crossing_zero;
            b.certified = exact;
            out.push_back(b);
        }
    }

    std::sort(out.begin(), out.end(), [](const EP2Boundary& a, const EP2Boundary& b) {
        return a.z_star < b.z_star;
    });
    // Merge duplicates (a boundary found by both families).
    std::vector<EP2Boundary> dedup;
    for (auto& b : out) {
        if (!dedup.empty()) {
            PrecReal gap = (b.z_star - dedup.back().z_star).abs();
            PrecReal tol = max(PrecReal(1L, digits), b.z_star.abs()) *
                           PrecReal::pow10(-std::max<long>(digits / 2, 8), digits);
            if (gap < tol) {
                if (dedup.back().kind != EP2Boundary::Kind::epn) dedup.back() = b;
                continue;
            }
        }
        dedup.push_back(b);
    }
    return dedup;
}

SweepResult sweep(const SecularSystem& sys, const ParameterTuple& tuple,
                  const std::vector<MultiPoly>& constraints,
                  const Rational& zmin, const Rational& zmax, int grid,
                  long digits) {
    if (grid < 2) throw precondition_error("sweep: grid must have at least 2 points");
    if (!(zmin < zmax)) throw precondition_error("sweep: need zmin < zmax");

    SweepResult res;
    res.boundaries = ep2_boundaries(sys, tuple, constraints, zmin, zmax, digits);

    bool exact = false;
    auto values = tuple_exact_values(tuple, constraints, digits, &exact);
    std::map<std::string, PrecReal> numeric_values;
    for (const auto& [k, v] : values) numeric_values.emplace(k, PrecReal(v, digits + 10));

    long work = digits;
    Rational span = zmax - zmin;
    Rational step = span / (grid - 1);
    std::vector<Rational> zs;
    for (int i = 0; i < grid; ++i) zs.push_back(zmin + step * i);
    // Densify around each boundary: extra samples within two grid steps.
    for (const auto& b : res.boundaries) {
        Rational zb = b.z_star.to_rational();
        for (int k = -8; k <= 8; ++k) {
            Rational z = zb + step * k / 4;
            if (z >= zmin && z <= zmax) zs.push_back(z);
        }
    }
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

    for (const auto& z : zs) {
        auto s = sample(sys, numeric_values, PrecReal(z, work + 10), work);
        if (s.ambiguous) {
            auto retry = sample(sys, numeric_values, PrecReal(z, 2 * work + 10), 2 * work);
            if (!retry.ambiguous) s = retry;
        }
        res.samples.push_back(std::move(s));
    }

    // Census per interval between consecutive boundaries.
    std::vector<Rational> cuts{zmin};
    for (const auto& b : res.boundaries) {
        Rational zb = b.z_star.to_rational();
        if (zb > cuts.back() && zb < zmax) cuts.push_back(zb);
        res.report.boundaries.push_back(b.z_star);
    }
    cuts.push_back(zmax);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        IntervalCensus cen;
        cen.lower = PrecReal(cuts[i], digits);
        cen.upper = PrecReal(cuts[i + 1], digits);
        Rational len = cuts[i + 1] - cuts[i];
        for (int q = 1; q <= 3; ++q) {
            Rational z = cuts[i] + len * q / 4;
            auto s = sample(sys, numeric_values, PrecReal(z, work + 10), work);
            if (q == 1) {
                cen.real_energies = s.real_energies;
                cen.imaginary_energies = s.imaginary_energies;
                cen.complex_energies = s.complex_energies;
            } else if (s.real_energies != cen.real_energies ||
                       s.imaginary_energies != cen.imaginary_energies ||
                       s.complex_energies != cen.complex_energies) {
                cen.consistent = false;
            }
        }
        res.report.intervals.push_back(cen);
    }
    return res;
}

} // namespace epn
