#include "epn/groebner.hpp"

#include <algorithm>
#include <set>

namespace epn {

namespace {

bool divides(const Expo& a, const Expo& b) {  // a | b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Expo mono_lcm(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

Expo mono_sub(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

long mono_deg(const Expo& a) {
    long d = 0;
    for (uint32_t x : a) d += x;
    return d;
}

size_t coeff_bits(const Rational& q) {
    return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
           mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

size_t max_coeff_bits(const MultiPoly& p) {
    size_t m = 0;
    for (const auto& [e, c] : p.terms()) m = std::max(m, coeff_bits(c));
    return m;
}

struct Pair {
    size_t i, j;
    Expo lcm;
    long deg;

    bool operator<(const Pair& o) const {
        // Normal strategy: smallest lcm in the term order first, degree as
        // the tie-break.
        MonoLess less;
        if (less(lcm, o.lcm)) return true;
        if (less(o.lcm, lcm)) return false;
        if (deg != o.deg) return deg < o.deg;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
};

// Fraction-free S-polynomial.
MultiPoly spoly(const MultiPoly& f, const MultiPoly& g) {
    const Expo& mf = f.leading_monomial();
    const Expo& mg = g.leading_monomial();
    Expo l = mono_lcm(mf, mg);
    const Rational& cf = f.leading_coeff();
    const Rational& cg = g.leading_coeff();
    Integer num_lcm;
    mpz_lcm(num_lcm.get_mpz_t(), cf.get_num().get_mpz_t(), cg.get_num().get_mpz_t());
    Rational sf = Rational(num_lcm) / cf;
    Rational sg = Rational(num_lcm) / cg;
    return f.times_term(sf, mono_sub(l, mf)) - g.times_term(sg, mono_sub(l, mg));
}

} // namespace

namespace {

// Top-reduction only: eliminates leading terms until the leading monomial is
// irreducible, primitivizing after every step to contain coefficient growth.
// The result equals the classical reduction up to a positive rational scale,
// which is all the Buchberger loop needs.  `work` meters coefficient-word
// operations so the caller can enforce a deterministic budget.
MultiPoly top_reduce(const MultiPoly& p, const std::vector<MultiPoly>& g,
                     size_t* work = nullptr) {
    MultiPoly h = p;
    for (;;) {
        if (h.is_zero()) return h;
        const Expo& m = h.leading_monomial();
        const MultiPoly* red = nullptr;
        for (const auto& cand : g) {
            if (!cand.is_zero() && divides(cand.leading_monomial(), m)) {
                red = &cand;
                break;
            }
        }
        if (!red) return h.content_primitive().second;
        Rational a = red->leading_coeff();
        Rational c = h.leading_coeff();
        if (work)
            *work += (h.term_count() + red->term_count()) *
                     (max_coeff_bits(h) / 64 + max_coeff_bits(*red) / 64 + 2);
        h = h.scaled(a) - red->times_term(c, mono_sub(m, red->leading_monomial()));
        if (!h.is_zero()) h = h.content_primitive().second;
    }
}

} // namespace

MultiPoly normal_form(const MultiPoly& p, const std::vector<MultiPoly>& g) {
    if (p.is_zero()) return p;
    MultiPoly h = p;
    MultiPoly out = MultiPoly::zero(p.vars());
    while (!h.is_zero()) {
        const Expo& m = h.leading_monomial();
        const MultiPoly* red = nullptr;
        for (const auto& cand : g) {
            if (!cand.is_zero() && divides(cand.leading_monomial(), m)) {
                red = &cand;
                break;
            }
        }
        if (!red) {
            MultiPoly t = MultiPoly::from_terms(p.vars(), {{m, h.leading_coeff()}});
            out += t;
            h -= t;
            continue;
        }
        // Fraction-free elimination of the leading term: scale both the
        // running remainder and the collected output by the same factor,
        // then strip the joint content to contain growth.
        Rational a = red->leading_coeff();
        Rational c = h.leading_coeff();
        Integer d;
        mpz_gcd(d.get_mpz_t(), a.get_num().get_mpz_t(), c.get_num().get_mpz_t());
        Rational scale = a / Rational(d);
        if (scale < 0) scale = -scale;
        Rational mult = (c / a) * scale;
        h = h.scaled(scale) - red->times_term(mult, mono_sub(m, red->leading_monomial()));
        if (!out.is_zero()) {
            out = out.scaled(scale);
            if (!h.is_zero()) {
                Rational ch = h.content_primitive().first;
                Rational co = out.content_primitive().first;
                if (ch < 0) ch = -ch;
                if (co < 0) co = -co;
                Integer gn;
                mpz_gcd(gn.get_mpz_t(), ch.get_num().get_mpz_t(), co.get_num().get_mpz_t());
                Integer gd;
                mpz_lcm(gd.get_mpz_t(), ch.get_den().get_mpz_t(), co.get_den().get_mpz_t());
                Rational joint(gn, gd);
                mpq_canonicalize(joint.get_mpq_t());
                if (joint != 0 && joint != 1) {
                    Rational inv = Rational(1) / joint;
                    h = h.scaled(inv);
                    out = out.scaled(inv);
                }
            }
        }
    }
    // Canonical up to a nonzero rational scale: primitive, positive leading
    // coefficient.  Membership tests and basis reduction only need that much.
    if (out.is_zero()) return out;
    return out.content_primitive().second;
}

std::vector<MultiPoly> groebner_lex(const std::vector<MultiPoly>& system,
                                    const VarSetPtr& order,
                                    const GroebnerOptions& opts,
                                    GroebnerStats* stats) {
    if (system.empty()) throw precondition_error("groebner_lex: empty system");

    std::vector<MultiPoly> basis;
    for (const auto& p : system) {
        MultiPoly q = p.convert(order);
        if (!q.is_zero()) basis.push_back(q.content_primitive().second);
    }
    if (basis.empty()) throw precondition_error("groebner_lex: all generators are zero");

    GroebnerStats local;
    GroebnerStats& st = stats ? *stats : local;

    std::set<Pair> queue;
    std::set<std::pair<size_t, size_t>> pending;
    auto push_pair = [&](size_t i, size_t j) {
        const Expo& mi = basis[i].leading_monomial();
        const Expo& mj = basis[j].leading_monomial();
        Expo l = mono_lcm(mi, mj);
        queue.insert(Pair{i, j, l, mono_deg(l)});
        pending.insert({i, j});
    };
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j) push_pair(i, j);

    auto budget_check = [&](const char* what) {
        if (st.pairs_reduced > opts.max_pair_reductions ||
            basis.size() > opts.max_basis_size)
            throw groebner_budget_exceeded(std::string("groebner budget exceeded: ") + what,
                                           basis);
    };

    while (!queue.empty()) {
        Pair pr = *queue.begin();
        queue.erase(queue.begin());
        pending.erase({pr.i, pr.j});
        ++st.pairs_considered;

        const MultiPoly& f = basis[pr.i];
        const MultiPoly& g = basis[pr.j];
        const Expo& mf = f.leading_monomial();
        const Expo& mg = g.leading_monomial();

        // Product criterion: coprime leading monomials reduce to zero.
        {
            bool coprime = true;
            for (size_t t = 0; t < mf.size(); ++t)
                if (mf[t] > 0 && mg[t] > 0) {
                    coprime = false;
                    break;
                }
            if (coprime) continue;
        }
        // Chain criterion: an already-settled third element divides the lcm.
        {
            bool skip = false;
            for (size_t k = 0; k < basis.size() && !skip; ++k) {
                if (k == pr.i || k == pr.j) continue;
                if (!divides(basis[k].leading_monomial(), pr.lcm)) continue;
                auto key1 = std::minmax(pr.i, k);
                auto key2 = std::minmax(pr.j, k);
                if (!pending.count({key1.first, key1.second}) &&
                    !pending.count({key2.first, key2.second}))
                    skip = true;
            }
            if (skip) continue;
        }

        MultiPoly s = spoly(f, g);
        MultiPoly r = top_reduce(s, basis, &st.reduction_work);
        ++st.pairs_reduced;
        if (st.reduction_work > opts.max_reduction_work)
            throw groebner_budget_exceeded("groebner budget exceeded: reduction work",
                                           basis);
        budget_check("pair reductions");
        if (r.is_zero()) {
            ++st.reductions_to_zero;
            continue;
        }
        if (r.leading_coeff() < 0) r = -r;
        if (max_coeff_bits(r) > opts.max_coeff_bits)
            throw groebner_budget_exceeded("groebner budget exceeded: coefficient growth",
                                           basis);
        basis.push_back(r);
        size_t newi = basis.size() - 1;
        for (size_t i = 0; i < newi; ++i) push_pair(i, newi);
        budget_check("basis size");
    }

    // Minimalize: drop elements whose leading monomial is divisible by
    // another element's leading monomial.
    std::vector<MultiPoly> minimal;
    for (size_t i = 0; i < basis.size(); ++i) {
        bool drop = false;
        for (size_t j = 0; j < basis.size() && !drop; ++j) {
            if (i == j) continue;
            const Expo& mi = basis[i].leading_monomial();
            const Expo& mj = basis[j].leading_monomial();
            if (divides(mj, mi) && (mi != mj || j < i)) drop = true;
        }
        if (!drop) minimal.push_back(basis[i]);
    }

    // Inter-reduce to the unique reduced basis.
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 50) {
        changed = false;
        for (size_t i = 0; i < minimal.size(); ++i) {
            std::vector<MultiPoly> rest;
            for (size_t j = 0; j < minimal.size(); ++j)
                if (j != i) rest.push_back(minimal[j]);
            MultiPoly r = normal_form(minimal[i], rest);
            if (r.is_zero())
                throw invariant_violation("groebner: minimal element reduced to zero");
            if (r.leading_coeff() < 0) r = -r;
            if (r != minimal[i]) {
                minimal[i] = r;
                changed = true;
            }
        }
    }

    std::sort(minimal.begin(), minimal.end(), [](const MultiPoly& a, const MultiPoly& b) {
        return MonoLess{}(a.leading_monomial(), b.leading_monomial());
    });
    return minimal;
}

} // namespace epn
