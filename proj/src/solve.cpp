#include "epn/solve.hpp"

#include <algorithm>
#include <sstream>

#include "epn/groebner.hpp"
#include "epn/polyops.hpp"
#include "epn/polyroots.hpp"
#include "epn/realroots.hpp"

namespace epn {

namespace {

PrecComplex to_complex(const PrecReal& x) {
    return PrecComplex(x, PrecReal(0L, x.digits()));
}

std::vector<std::string> support_vars(const MultiPoly& p) {
    std::vector<std::string> out;
    for (size_t i = 0; i < p.vars()->size(); ++i)
        if (p.degree(i) > 0) out.push_back(p.vars()->name(i));
    return out;
}

bool support_within(const MultiPoly& p, const std::vector<std::string>& allowed) {
    for (const auto& v : support_vars(p))
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) return false;
    return true;
}

// var = -(rest)/c when p is linear in var with a constant coefficient c.
std::optional<std::pair<MultiPoly, Rational>> linear_solution(const MultiPoly& p,
                                                              const std::string& var) {
    if (p.degree(var) != 1) return std::nullopt;
    MultiPoly c = p.coeff_of(var, 1);
    if (!c.is_constant() || c.is_zero()) return std::nullopt;
    MultiPoly rest = p.coeff_of(var, 0);
    return std::make_pair(-rest, c.constant_value());
}

} // namespace

std::map<std::string, PrecReal> ParameterTuple::real_values() const {
    std::map<std::string, PrecReal> out;
    for (const auto& [k, v] : values) {
        if (!v.real)
            throw precondition_error("tuple has a non-real component " + k);
        out.emplace(k, v.kind == TupleValue::Kind::exact ? PrecReal(v.exact, digits)
                                                         : v.approx.re());
    }
    return out;
}

std::map<std::string, PrecComplex> ParameterTuple::complex_values() const {
    std::map<std::string, PrecComplex> out;
    for (const auto& [k, v] : values)
        out.emplace(k, v.kind == TupleValue::Kind::exact
                           ? to_complex(PrecReal(v.exact, digits))
                           : v.approx);
    return out;
}

// ---------------------------------------------------------------------------
// Certification and Newton refinement.

ResidualReport certify_assignment(const std::map<std::string, PrecComplex>& assignment,
                                  const std::vector<MultiPoly>& system, long digits) {
    ResidualReport rep;
    rep.digits = digits;
    PrecReal worst(0L, digits);
    for (const auto& p : system) {
        PrecReal r = p.eval_prec(assignment, digits).abs();
        if (r > worst) worst = r;
    }
    rep.max_residual = worst;
    rep.pass = worst <= PrecReal::pow10(20 - digits, digits);
    return rep;
}

ResidualReport certify(const ParameterTuple& tuple,
                       const std::vector<MultiPoly>& system, long digits) {
    bool all_exact = true;
    for (const auto& [k, v] : tuple.values)
        if (v.kind != TupleValue::Kind::exact) all_exact = false;
    if (all_exact) {
        std::map<std::string, Rational> a;
        for (const auto& [k, v] : tuple.values) a.emplace(k, v.exact);
        bool zero = true;
        for (const auto& p : system)
            if (p.eval_exact(a) != 0) zero = false;
        if (zero) {
            ResidualReport rep;
            rep.digits = digits;
            rep.max_residual = PrecReal(0L, digits);
            rep.exact_zero = true;
            rep.pass = true;
            return rep;
        }
    }
    return certify_assignment(tuple.complex_values(), system, digits);
}

std::map<std::string, PrecReal> newton_refine(const std::vector<MultiPoly>& system,
                                              const std::vector<std::string>& unknowns,
                                              const std::map<std::string, PrecReal>& start,
                                              long digits) {
    if (system.size() != unknowns.size())
        throw precondition_error("newton_refine: system must be square");
    size_t n = unknowns.size();
    long work = digits + 15;

    std::vector<std::vector<MultiPoly>> jac(system.size());
    for (size_t m = 0; m < system.size(); ++m)
        for (const auto& v : unknowns) jac[m].push_back(system[m].derivative(v));

    std::map<std::string, PrecReal> x;
    for (const auto& v : unknowns) {
        auto it = start.find(v);
        if (it == start.end()) throw precondition_error("newton_refine: missing seed " + v);
        x.emplace(v, it->second.round_to(work));
    }

    auto residual_of = [&](const std::map<std::string, PrecReal>& pt) {
        PrecReal worst(0L, work);
        for (const auto& p : system) {
            PrecReal r = p.eval_prec(pt, work).abs();
            if (r > worst) worst = r;
        }
        return worst;
    };

    PrecReal res = residual_of(x);
    for (int iter = 0; iter < 80; ++iter) {
        if (res.is_zero()) break;
        CMatrix a(n, n, work);
        CVector rhs;
        rhs.reserve(n);
        for (size_t m = 0; m < n; ++m) {
            for (size_t k = 0; k < n; ++k)
                a.at(m, k) = jac[m][k].eval_prec(x, work);
            rhs.push_back(-system[m].eval_prec(x, work));
        }
        CVector delta;
        try {
            delta = lu_decompose(a).solve(rhs);
        } catch (const numerical_failure&) {
            break;  // singular Jacobian: keep the best point we have
        }
        // Damped update: halve the step while the residual worsens.
        PrecReal lambda(1L, work);
        std::map<std::string, PrecReal> best = x;
        PrecReal best_res = res;
        bool improved = false;
        for (int half = 0; half < 8; ++half) {
            std::map<std::string, PrecReal> trial = x;
            for (size_t k = 0; k < n; ++k)
                trial[unknowns[k]] += delta[k].re() * lambda;
            PrecReal tr = residual_of(trial);
            if (tr < best_res) {
                best = trial;
                best_res = tr;
                improved = true;
                break;
            }
            lambda = lambda / PrecReal(2L, work);
        }
        if (!improved) break;
        // Quadratic convergence stalls once the precision floor is reached.
        bool done = best_res >= res / PrecReal(4L, work);
        x = best;
        res = best_res;
        if (done && iter > 2) break;
    }
    return x;
}

std::map<std::string, PrecReal> values_at_digits(const ParameterTuple& tuple,
                                                 const std::vector<MultiPoly>& constraints,
                                                 long digits) {
    bool all_exact = true;
    for (const auto& [k, v] : tuple.values)
        if (v.kind != TupleValue::Kind::exact) all_exact = false;

    std::map<std::string, PrecReal> out;
    if (all_exact) {
        for (const auto& [k, v] : tuple.values) out.emplace(k, PrecReal(v.exact, digits));
        return out;
    }
    if (digits <= tuple.digits) {
        for (const auto& [k, v] : tuple.values) {
            if (!v.real) throw precondition_error("non-real tuple component " + k);
            out.emplace(k, v.kind == TupleValue::Kind::exact
                               ? PrecReal(v.exact, digits)
                               : v.approx.re().round_to(digits));
        }
        return out;
    }
    std::vector<std::string> unknowns;
    std::map<std::string, PrecReal> seed;
    for (const auto& [k, v] : tuple.values) {
        unknowns.push_back(k);
        seed.emplace(k, v.kind == TupleValue::Kind::exact ? PrecReal(v.exact, digits)
                                                          : v.approx.re());
    }
    auto refined = newton_refine(constraints, unknowns, seed, digits);
    for (auto& [k, v] : refined) out.emplace(k, v.round_to(digits));
    return out;
}

// ---------------------------------------------------------------------------
// Resultant-chain elimination.

namespace {

// One pass of iterated pairwise resultants along a fixed variable order.
// Fills lift data only when `record` is set.
MultiPoly resultant_chain_pass(const std::vector<MultiPoly>& system,
                               const std::vector<std::string>& elim_vars,
                               const std::string& keep,
                               EliminationResult* record) {
    std::vector<MultiPoly> polys;
    for (const auto& p : system)
        if (!p.is_zero()) polys.push_back(p.content_primitive().second);

    for (const auto& v : elim_vars) {
        std::vector<MultiPoly> with_v, without_v;
        for (const auto& p : polys)
            (p.degree(v) > 0 ? with_v : without_v).push_back(p);
        if (with_v.empty())
            throw degenerate_input_error("eliminate_by_resultants: no equation involves " + v);
        size_t piv = 0;
        for (size_t i = 1; i < with_v.size(); ++i)
            if (with_v[i].degree(v) < with_v[piv].degree(v)) piv = i;
        if (record) {
            record->lift_polys[v] = with_v;
            if (auto lin = linear_solution(with_v[piv], v)) record->closed_form[v] = *lin;
        }
        std::vector<MultiPoly> next = without_v;
        for (size_t i = 0; i < with_v.size(); ++i) {
            if (i == piv) continue;
            // Work estimate keeps beyond-desk-scale systems from hanging;
            // the caller maps this to the budget exit code.
            double cost = static_cast<double>(with_v[i].degree(v)) *
                          static_cast<double>(with_v[piv].degree(v)) *
                          static_cast<double>(with_v[i].term_count()) *
                          static_cast<double>(with_v[piv].term_count());
            if (cost > 1e8)
                throw budget_exceeded("resultant chain budget exceeded eliminating " + v);
            MultiPoly r = resultant(with_v[i], with_v[piv], v);
            if (r.is_zero()) {
                std::ostringstream os;
                os << "identically-zero resultant: common component between {"
                   << with_v[i].str() << "} and {" << with_v[piv].str() << "} in " << v;
                throw degenerate_input_error(os.str());
            }
            next.push_back(r.content_primitive().second);
        }
        polys = next;
    }

    std::vector<MultiPoly> univ;
    for (const auto& p : polys) {
        if (p.is_constant()) continue;
        if (!support_within(p, {keep}))
            throw invariant_violation("resultant chain left a multivariate polynomial");
        univ.push_back(p);
    }
    if (univ.empty())
        throw degenerate_input_error("eliminate_by_resultants: no univariate eliminant");
    MultiPoly elim = univ.front();
    for (size_t i = 1; i < univ.size(); ++i) elim = gcd_univariate(elim, univ[i], keep);
    return squarefree_part(elim, keep);
}

} // namespace

EliminationResult eliminate_by_resultants(const std::vector<MultiPoly>& system,
                                          const std::string& keep) {
    if (system.empty()) throw precondition_error("eliminate_by_resultants: empty system");
    const VarSetPtr& vars = system.front().vars();
    if (!vars->contains(keep))
        throw structural_error("eliminate_by_resultants: unknown variable " + keep);

    EliminationResult out;
    out.kept_var = keep;
    out.provenance = EliminationResult::Path::resultant_chain;

    std::vector<std::string> elim_vars;
    for (size_t i = 0; i < vars->size(); ++i) {
        const std::string& v = vars->name(i);
        if (v == keep) continue;
        bool occurs = false;
        for (const auto& p : system)
            if (p.degree(v) > 0) occurs = true;
        if (occurs) elim_vars.push_back(v);
    }

    // A single chain can pick up order-dependent spurious factors (vanishing
    // leading coefficients).  Intersecting the outputs of a few variable
    // orderings strips the factors that are not shared; extension checks
    // still vet whatever remains.
    MultiPoly elim = resultant_chain_pass(system, elim_vars, keep, &out);
    if (elim_vars.size() > 1) {
        std::vector<std::vector<std::string>> orders;
        std::vector<std::string> perm = elim_vars;
        std::reverse(perm.begin(), perm.end());
        orders.push_back(perm);
        if (elim_vars.size() > 2) {
            perm = elim_vars;
            std::rotate(perm.begin(), perm.begin() + 1, perm.end());
            orders.push_back(perm);
        }
        for (const auto& o : orders) {
            if (elim.degree(keep) <= 1) break;
            try {
                MultiPoly other = resultant_chain_pass(system, o, keep, nullptr);
                elim = gcd_univariate(elim, other, keep);
            } catch (const degenerate_input_error&) {
                // That ordering collapsed; the first chain already succeeded.
            } catch (const budget_exceeded&) {
                // Alternative ordering too expensive; keep what we have.
            }
        }
        elim = squarefree_part(elim, keep);
    }

    out.eliminant = elim;
    out.full_eliminant = elim;
    out.degree = elim.degree(keep);
    out.solve_order.push_back(keep);
    for (auto it = elim_vars.rbegin(); it != elim_vars.rend(); ++it)
        out.solve_order.push_back(*it);
    return out;
}


// ---------------------------------------------------------------------------
// Groebner-path elimination.

namespace {

EliminationResult eliminate_by_groebner(const std::vector<MultiPoly>& system,
                                        const std::string& keep,
                                        std::vector<std::string>* diagnostics) {
    const VarSetPtr& order = system.front().vars();
    GroebnerStats stats;
    auto basis = groebner_lex(system, order, {}, &stats);

    EliminationResult out;
    out.kept_var = keep;
    out.provenance = EliminationResult::Path::groebner;

    // Variables actually present, most-significant first.
    std::vector<std::string> present;
    for (size_t i = 0; i < order->size(); ++i) {
        const std::string& v = order->name(i);
        for (const auto& p : system)
            if (p.degree(v) > 0) {
                present.push_back(v);
                break;
            }
    }

    // The eliminant is the basis element living in Q[keep].
    std::vector<MultiPoly> univ;
    for (const auto& g : basis)
        if (g.degree(keep) > 0 && support_within(g, {keep})) univ.push_back(g);
    if (univ.empty())
        throw invariant_violation("groebner basis has no univariate element in " + keep);
    MultiPoly elim = univ.front();
    for (size_t i = 1; i < univ.size(); ++i)
        if (univ[i].degree(keep) < elim.degree(keep)) elim = univ[i];
    out.eliminant = squarefree_part(elim, keep);
    out.full_eliminant = out.eliminant;
    out.degree = out.eliminant.degree(keep);

    // Lifting data: for each variable above `keep`, the basis elements whose
    // support stays at or below it in the elimination order.
    out.solve_order.push_back(keep);
    std::vector<std::string> allowed{keep};
    for (auto it = present.rbegin(); it != present.rend(); ++it) {
        if (*it == keep) continue;
        allowed.push_back(*it);
        out.solve_order.push_back(*it);
        std::vector<MultiPoly> lifts;
        for (const auto& g : basis)
            if (g.degree(*it) > 0 && support_within(g, allowed)) lifts.push_back(g);
        out.lift_polys[*it] = lifts;
        for (const auto& g : lifts) {
            if (auto lin = linear_solution(g, *it)) {
                out.closed_form[*it] = *lin;
                break;
            }
        }
    }

    if (diagnostics) {
        std::ostringstream os;
        os << "groebner: " << stats.pairs_considered << " pairs considered, "
           << stats.pairs_reduced << " reduced, basis size " << basis.size();
        diagnostics->push_back(os.str());
    }
    return out;
}

// Numeric back-substitution: extends a kept-variable value to candidate
// assignments for every variable, branching on multi-root lifts and
// filtering against the full constraint system.
std::vector<std::map<std::string, PrecComplex>> lift_candidates(
    const EliminationResult& elim, const PrecComplex& kept_value, long digits,
    const std::vector<MultiPoly>& filter_system,
    std::vector<std::string>* failures) {
    std::vector<std::map<std::string, PrecComplex>> partials{
        {{elim.kept_var, kept_value}}};

    for (size_t si = 1; si < elim.solve_order.size(); ++si) {
        const std::string& var = elim.solve_order[si];
        std::vector<std::map<std::string, PrecComplex>> next;
        for (const auto& partial : partials) {
            auto cf = elim.closed_form.find(var);
            if (cf != elim.closed_form.end()) {
                PrecComplex num = cf->second.first.eval_prec(partial, digits);
                PrecComplex val = num / to_complex(PrecReal(cf->second.second, digits));
                auto ext = partial;
                ext.emplace(var, val);
                next.push_back(std::move(ext));
                continue;
            }
            auto lp = elim.lift_polys.find(var);
            if (lp == elim.lift_polys.end() || lp->second.empty()) {
                if (failures)
                    failures->push_back("no lifting polynomial for " + var);
                continue;
            }
            // Specialize every lift polynomial; root the best-conditioned
            // lowest-degree one and filter candidates with the others.
            std::vector<std::vector<PrecComplex>> specialized;
            for (const auto& p : lp->second) {
                auto cs = coeffs_in(p, var);
                std::vector<PrecComplex> num;
                for (const auto& c : cs) num.push_back(c.eval_prec(partial, digits));
                specialized.push_back(std::move(num));
            }
            size_t pick = specialized.size();
            long pick_deg = 0;
            for (size_t i = 0; i < specialized.size(); ++i) {
                auto& cs = specialized[i];
                PrecReal scale(0L, digits);
                for (const auto& c : cs)
                    if (c.abs() > scale) scale = c.abs();
                long deg = static_cast<long>(cs.size()) - 1;
                while (deg > 0 &&
                       cs[static_cast<size_t>(deg)].abs() <=
                           scale * PrecReal::pow10(-digits / 2, digits))
                    --deg;
                if (deg < 1) continue;
                if (pick == specialized.size() || deg < pick_deg) {
                    pick = i;
                    pick_deg = deg;
                }
            }
            if (pick == specialized.size()) {
                if (failures)
                    failures->push_back("all lift polynomials degenerate for " + var);
                continue;
            }
            auto cs = specialized[pick];
            cs.resize(static_cast<size_t>(pick_deg) + 1);
            std::vector<PrecComplex> roots;
            try {
                roots = all_roots(cs, digits);
            } catch (const numerical_failure&) {
                if (failures) failures->push_back("lift root-finding failed for " + var);
                continue;
            }
            for (const auto& r : roots) {
                auto ext = partial;
                ext.emplace(var, r);
                // Companion filter: the other specialized lifts must vanish.
                bool ok = true;
                for (size_t i = 0; i < specialized.size() && ok; ++i) {
                    if (i == pick) continue;
                    PrecReal scale(1L, digits);
                    for (const auto& c : specialized[i])
                        if (c.abs() > scale) scale = c.abs();
                    PrecReal val = eval_poly(specialized[i], r).abs();
                    if (val > scale * PrecReal::pow10(-std::max(6L, digits / 4), digits))
                        ok = false;
                }
                if (ok) next.push_back(std::move(ext));
            }
        }
        partials = std::move(next);
        if (partials.size() > 64) partials.resize(64);
    }

    std::stable_sort(partials.begin(), partials.end(),
                     [&](const auto& a, const auto& b) {
                         return certify_assignment(a, filter_system, digits)
                                    .max_residual <
                                certify_assignment(b, filter_system, digits)
                                    .max_residual;
                     });
    return partials;
}

// Nearby small rational (continued-fraction convergent) of a numeric value,
// to recognize tuples that are exact in disguise.
std::optional<Rational> snap_to_rational(const PrecReal& x, long digits) {
    Rational target = x.to_rational();
    Rational eps = pow10_rat(-(digits - 6));
    // Continued fraction of target, stopping at a small-denominator convergent.
    Rational rem = target;
    Integer h0(1), h1(0), k0(0), k1(1);  // convergents p/q
    for (int i = 0; i < 64; ++i) {
        Integer a = rem.get_num() / rem.get_den();
        if (rem < 0 && Rational(a) != rem) a -= 1;  // floor
        Integer h = a * h0 + h1;
        Integer k = a * k0 + k1;
        if (k > Integer(1000000)) break;
        Rational conv(h, k);
        mpq_canonicalize(conv.get_mpq_t());
        Rational diff = target - conv;
        if (diff < 0) diff = -diff;
        if (diff <= eps) return conv;
        Rational frac = rem - Rational(a);
        if (frac == 0) break;
        rem = Rational(1) / frac;
        h1 = h0; h0 = h;
        k1 = k0; k0 = k;
    }
    return std::nullopt;
}

ParameterTuple make_exact_tuple(const std::map<std::string, Rational>& values,
                                const std::vector<MultiPoly>& system, long digits,
                                const std::string& label) {
    ParameterTuple t;
    t.digits = digits;
    t.label = label;
    for (const auto& [k, v] : values) {
        TupleValue tv;
        tv.kind = TupleValue::Kind::exact;
        tv.exact = v;
        tv.approx = to_complex(PrecReal(v, digits));
        tv.real = true;
        t.values.emplace(k, tv);
    }
    auto rep = certify(t, system, digits);
    t.residual = rep.max_residual;
    t.residual_exact_zero = rep.exact_zero;
    t.certified = rep.pass;
    t.reality = ParameterTuple::Reality::all_real;
    return t;
}

void sort_and_label(int n, std::vector<ParameterTuple>& tuples,
                    const std::string& innermost, const std::string& kept) {
    std::stable_sort(tuples.begin(), tuples.end(),
                     [&](const ParameterTuple& a, const ParameterTuple& b) {
                         if ((a.label == "bh") != (b.label == "bh"))
                             return a.label == "bh";
                         if (a.is_real() != b.is_real()) return a.is_real();
                         const auto& va = a.values.at(innermost).approx;
                         const auto& vb = b.values.at(innermost).approx;
                         if (!(va.re() == vb.re())) return va.re() < vb.re();
                         return va.im() < vb.im();
                     });
    // Reference names for the dimensions with published tuples; positional
    // names otherwise.
    int treal = 0, tcplx = 0;
    std::vector<ParameterTuple*> real_nonbh;
    for (auto& t : tuples) {
        if (t.label == "bh") continue;
        if (t.is_real()) {
            real_nonbh.push_back(&t);
            t.label = "t" + std::to_string(++treal);
        } else {
            t.label = "c" + std::to_string(++tcplx);
        }
    }
    if (n == 6 && real_nonbh.size() == 2) {
        std::sort(real_nonbh.begin(), real_nonbh.end(),
                  [&](const ParameterTuple* a, const ParameterTuple* b) {
                      return a->values.at(kept).approx.re() <
                             b->values.at(kept).approx.re();
                  });
        real_nonbh[0]->label = "a";
        real_nonbh[1]->label = "b";
    }
    if (n == 7 && real_nonbh.size() == 4) {
        PrecReal m48(-48.0, 20);
        std::vector<ParameterTuple*> fam1, fam2;
        for (auto* t : real_nonbh) {
            PrecReal a = t->values.at("A").approx.re();
            ((a - m48).abs() < PrecReal(1e-6, 20) ? fam1 : fam2).push_back(t);
        }
        auto by_r = [&](ParameterTuple* x, ParameterTuple* y) {
            return x->values.at(kept).approx.re() > y->values.at(kept).approx.re();
        };
        if (fam1.size() == 2 && fam2.size() == 2) {
            std::sort(fam1.begin(), fam1.end(), by_r);
            std::sort(fam2.begin(), fam2.end(), by_r);
            fam1[0]->label = "alpha";
            fam1[1]->label = "beta";
            fam2[0]->label = "gamma";
            fam2[1]->label = "delta";
        }
    }
}

} // namespace

SolveOutcome solve_epn(int n, long digits, SolveMethod method) {
    if (n < 2) throw precondition_error("solve_epn: dimension must be >= 2");
    if (digits < 20) throw precondition_error("solve_epn: digits must be >= 20");

    SolveOutcome out;
    out.dimension = n;
    out.digits = digits;
    out.system = derive_secular(ModelSpec::for_dimension(n));
    const ModelSpec& model = out.system.model;

    VarSetPtr pvars = make_vars(model.params);
    for (const auto& p : constraints_at(out.system, Rational(1)))
        out.constraints.push_back(p.convert(pvars));
    const std::vector<MultiPoly>& system = out.constraints;
    const std::string kept = model.params.back();
    const std::string innermost = model.params.front();

    // Linear presolve: peel off leading variables with constant-coefficient
    // linear equations (always applies to P_1).
    std::vector<MultiPoly> reduced = system;
    std::vector<std::pair<std::string, std::pair<MultiPoly, Rational>>> presolved;
    for (const auto& var : model.params) {
        if (var == kept) break;
        bool found = false;
        for (size_t i = 0; i < reduced.size() && !found; ++i) {
            auto lin = linear_solution(reduced[i], var);
            if (!lin) continue;
            found = true;
            MultiPoly expr = lin->first.scaled(Rational(1) / lin->second);
            std::vector<MultiPoly> next;
            for (size_t j = 0; j < reduced.size(); ++j)
                if (j != i) next.push_back(reduced[j].substitute(var, expr));
            presolved.emplace_back(var, *lin);
            reduced = next;
        }
        if (!found) break;
    }

    // Elimination on the reduced system.
    EliminationResult elim;
    if (reduced.size() == 1) {
        elim.kept_var = kept;
        elim.provenance = method == SolveMethod::resultant_chain
                              ? EliminationResult::Path::resultant_chain
                              : EliminationResult::Path::groebner;
        elim.eliminant = squarefree_part(reduced.front(), kept);
        elim.full_eliminant = elim.eliminant;
        elim.solve_order.push_back(kept);
    } else if (method == SolveMethod::resultant_chain) {
        elim = eliminate_by_resultants(reduced, kept);
    } else {
        try {
            elim = eliminate_by_groebner(reduced, kept, &out.diagnostics);
        } catch (const groebner_budget_exceeded& e) {
            if (method == SolveMethod::groebner) throw;
            out.diagnostics.push_back(std::string("groebner budget exceeded (") +
                                      e.what() + "); falling back to resultants");
            elim = eliminate_by_resultants(reduced, kept);
        }
    }

    // Fold the presolved variables into the lifting chain.
    for (auto it = presolved.rbegin(); it != presolved.rend(); ++it) {
        elim.solve_order.push_back(it->first);
        elim.closed_form[it->first] = it->second;
    }

    // Bose-Hubbard processing: certify the exact tuple and strip its root
    // from the eliminant so the non-BH branch stands alone.
    auto bh = bh_tuple(n);
    elim.full_eliminant = elim.eliminant;
    MultiPoly bh_factor = MultiPoly::variable(pvars, kept) -
                          MultiPoly::constant(pvars, bh.at(kept));
    std::ostringstream note;
    note << "eliminant in " << kept << ": degree " << elim.full_eliminant.degree(kept)
         << " after square-free/primitive reduction";
    if (auto q = divide_exactly(elim.full_eliminant, bh_factor)) {
        elim.eliminant = q->content_primitive().second;
        elim.bh_root_removed = true;
        elim.bh_root_value = bh.at(kept);
        note << "; BH value " << kept << "=" << bh.at(kept).get_str()
             << " splits off as a linear factor; non-BH part has degree "
             << elim.eliminant.degree(kept);
    } else {
        note << "; BH value is NOT a root of the eliminant";
    }
    elim.degree = elim.eliminant.degree(kept);
    elim.structure_note = note.str();

    out.tuples.push_back(make_exact_tuple(bh, system, digits, "bh"));
    if (!out.tuples.back().residual_exact_zero)
        out.diagnostics.push_back("warning: BH tuple residual is not exactly zero");

    // Real branches: isolate, refine, lift, Newton-polish, certify.
    long lift_digits = digits + 10;
    auto intervals = isolate(elim.eliminant, kept);
    for (const auto& iv : intervals) {
        std::pair<Rational, Rational> enclosure;
        PrecReal root = refine(iv, digits + 10, &enclosure);
        auto cands = lift_candidates(elim, to_complex(root.round_to(lift_digits)),
                                     lift_digits, system, &elim.extension_failures);
        std::optional<std::map<std::string, PrecReal>> seed;
        for (const auto& cand : cands) {
            bool real = true;
            PrecReal scale(1L, lift_digits);
            for (const auto& [k, v] : cand)
                if (v.abs() > scale) scale = v.abs();
            for (const auto& [k, v] : cand)
                if (v.im().abs() > scale * PrecReal::pow10(-lift_digits / 3, lift_digits))
                    real = false;
            if (!real) continue;
            std::map<std::string, PrecReal> s;
            for (const auto& [k, v] : cand) s.emplace(k, v.re());
            seed = std::move(s);
            break;
        }
        if (!seed) {
            std::ostringstream os;
            os << "real root of eliminant near " << root.str(12)
               << " did not extend to a real tuple";
            elim.extension_failures.push_back(os.str());
            continue;
        }
        (*seed)[kept] = root;
        auto refined = newton_refine(system, model.params, *seed, digits);

        // An all-rational snap that satisfies the system exactly upgrades the
        // whole tuple to exact.
        std::map<std::string, Rational> snapped;
        bool all_snap = true;
        for (const auto& v : model.params) {
            auto s = snap_to_rational(refined.at(v), digits);
            if (!s) { all_snap = false; break; }
            snapped.emplace(v, *s);
        }
        if (all_snap) {
            bool zero = true;
            for (const auto& p : system)
                if (p.eval_exact(snapped) != 0) zero = false;
            if (zero) {
                out.tuples.push_back(make_exact_tuple(snapped, system, digits, ""));
                continue;
            }
        }

        ParameterTuple t;
        t.digits = digits;
        for (const auto& v : model.params) {
            TupleValue tv;
            tv.kind = TupleValue::Kind::numeric;
            tv.approx = to_complex(refined.at(v).round_to(digits));
            tv.real = true;
            if (v == kept) {
                tv.kind = TupleValue::Kind::algebraic;
                tv.algebraic = AlgebraicHandle{elim.eliminant, kept,
                                               enclosure.first, enclosure.second};
            }
            t.values.emplace(v, tv);
        }
        t.reality = ParameterTuple::Reality::all_real;
        auto rep = certify(t, system, digits);
        t.residual = rep.max_residual;
        t.certified = rep.pass;
        if (!t.certified) {
            std::ostringstream os;
            os << "tuple at " << kept << "=" << root.str(12)
               << " failed certification: residual " << rep.max_residual.str(3);
            out.diagnostics.push_back(os.str());
        }
        out.tuples.push_back(std::move(t));
    }

    // Complex branches: listed with coarse values, never refined.
    long ncomplex = elim.degree - static_cast<long>(intervals.size());
    if (ncomplex > 0) {
        auto coeffs = elim.eliminant.univariate_coeffs(kept);
        std::vector<PrecReal> rc;
        for (const auto& q : coeffs) rc.emplace_back(q, lift_digits);
        auto roots = all_roots(rc, lift_digits);
        std::sort(roots.begin(), roots.end(), [](const PrecComplex& a, const PrecComplex& b) {
            return a.im().abs() > b.im().abs();
        });
        roots.resize(static_cast<size_t>(ncomplex));
        for (const auto& r : roots) {
            auto cands = lift_candidates(elim, r, lift_digits, system, nullptr);
            if (cands.empty()) {
                elim.extension_failures.push_back("complex root did not extend");
                continue;
            }
            ParameterTuple t;
            t.digits = lift_digits;
            for (const auto& v : model.params) {
                TupleValue tv;
                tv.kind = TupleValue::Kind::numeric;
                tv.approx = cands.front().at(v);
                tv.real = false;
                t.values.emplace(v, tv);
            }
            t.reality = ParameterTuple::Reality::complex;
            t.residual = certify_assignment(cands.front(), system, lift_digits).max_residual;
            t.certified = false;
            out.tuples.push_back(std::move(t));
        }
    }

    sort_and_label(n, out.tuples, innermost, kept);
    out.elimination = std::move(elim);
    return out;
}

} // namespace epn
