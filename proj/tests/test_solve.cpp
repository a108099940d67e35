#include <doctest.h>

#include <random>

#include "epn/fixtures.hpp"
#include "epn/groebner.hpp"
#include "epn/polyops.hpp"
#include "epn/realroots.hpp"
#include "epn/solve.hpp"

using namespace epn;

namespace {

std::string fix(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

// Remainder of a univariate polynomial modulo another, over Q.
MultiPoly poly_mod(const MultiPoly& a, const MultiPoly& m, const std::string& var) {
    auto ac = a.univariate_coeffs(var);
    auto mc = m.univariate_coeffs(var);
    long dm = static_cast<long>(mc.size()) - 1;
    std::vector<Rational> r = ac;
    while (static_cast<long>(r.size()) - 1 >= dm) {
        while (!r.empty() && r.back() == 0) r.pop_back();
        long dr = static_cast<long>(r.size()) - 1;
        if (dr < dm) break;
        Rational f = r.back() / mc.back();
        for (long k = 0; k <= dm; ++k)
            r[static_cast<size_t>(dr - dm + k)] -= f * mc[static_cast<size_t>(k)];
        r.pop_back();
    }
    MultiPoly out = MultiPoly::zero(a.vars());
    Expo e(a.vars()->size(), 0);
    size_t vi = a.vars()->index(var);
    for (size_t k = 0; k < r.size(); ++k) {
        if (r[k] == 0) continue;
        e[vi] = static_cast<uint32_t>(k);
        out += MultiPoly::from_terms(a.vars(), {{e, r[k]}});
    }
    return out;
}

const ParameterTuple& by_label(const SolveOutcome& out, const std::string& label) {
    for (const auto& t : out.tuples)
        if (t.label == label) return t;
    throw std::runtime_error("missing tuple " + label);
}

bool near(const PrecComplex& v, double expect, double tol) {
    return std::abs(v.re().to_double() - expect) <= tol &&
           std::abs(v.im().to_double()) <= tol;
}

} // namespace

TEST_CASE("groebner_lex on tiny systems") {
    auto v = make_vars({"x", "y"});
    auto basis = groebner_lex({parse_poly("x + y - 2", v), parse_poly("x - y", v)}, v);
    REQUIRE(basis.size() == 2);
    CHECK(basis[0] == parse_poly("y - 1", v));
    CHECK(basis[1] == parse_poly("x - 1", v));

    auto basis2 = groebner_lex({parse_poly("x^2 - 1", v), parse_poly("x - 1", v)}, v);
    REQUIRE(basis2.size() == 1);
    CHECK(basis2[0] == parse_poly("x - 1", v));
}

TEST_CASE("groebner_lex is idempotent on its own output") {
    auto v = make_vars({"x", "y", "z"});
    std::vector<MultiPoly> sys{parse_poly("x^2 + y^2 + z^2 - 4", v),
                               parse_poly("x + y - z", v),
                               parse_poly("x*y - 1", v)};
    auto basis = groebner_lex(sys, v);
    auto again = groebner_lex(basis, v);
    REQUIRE(basis.size() == again.size());
    for (size_t i = 0; i < basis.size(); ++i) CHECK(basis[i] == again[i]);
}

TEST_CASE("groebner budget carries partial state") {
    auto v = make_vars({"x", "y", "z"});
    std::vector<MultiPoly> sys{parse_poly("x^2 + y^2 + z^2 - 4", v),
                               parse_poly("x*y + y*z + z*x - 1", v),
                               parse_poly("x*y*z - 1", v)};
    GroebnerOptions opts;
    opts.max_pair_reductions = 1;
    bool thrown = false;
    try {
        groebner_lex(sys, v, opts);
    } catch (const groebner_budget_exceeded& e) {
        thrown = true;
        CHECK(e.partial_basis.size() >= sys.size());
    }
    CHECK(thrown);
}

TEST_CASE("normal_form reduces ideal members to zero") {
    auto v = make_vars({"x", "y"});
    auto basis = groebner_lex({parse_poly("x^2 - y", v), parse_poly("y^2 - 1", v)}, v);
    MultiPoly member = parse_poly("(x^2 - y) * (x + 3) + (y^2 - 1) * y", v);
    CHECK(normal_form(member, basis).is_zero());
    CHECK(!normal_form(parse_poly("x + 1", v), basis).is_zero());
}

TEST_CASE("eliminate_by_resultants examples") {
    {
        auto v = make_vars({"r", "C"});
        auto res = eliminate_by_resultants(
            {parse_poly("r^2 + 118*r + 81", v), parse_poly("C - 6*r", v)}, "C");
        CHECK(res.eliminant == parse_poly("C^2 + 708*C + 2916", v));
        auto ivs = isolate(res.eliminant, "C");
        REQUIRE(ivs.size() == 2);
        CHECK(std::abs(refine(ivs[0], 20).to_double() - (-703.857113691)) < 1e-6);
        CHECK(std::abs(refine(ivs[1], 20).to_double() - (-4.14288630928)) < 1e-9);
        CHECK(res.closed_form.count("r"));  // r = C/6 recorded for lifting
    }
    {
        auto v = make_vars({"x", "y"});
        auto res = eliminate_by_resultants(
            {parse_poly("x^2 - 2", v), parse_poly("y - x", v)}, "y");
        CHECK(res.eliminant == parse_poly("y^2 - 2", v));
    }
}

TEST_CASE("eliminate_by_resultants reports common components") {
    auto v = make_vars({"x", "y"});
    MultiPoly common = parse_poly("x - y", v);
    CHECK_THROWS_AS(eliminate_by_resultants(
                        {common * parse_poly("x + 1", v), common * parse_poly("x + 2", v)},
                        "y"),
                    degenerate_input_error);
}

TEST_CASE("certify") {
    auto out = solve_epn(6, 40);
    // BH: exact zero residual.
    auto bh_rep = certify(by_label(out, "bh"), out.constraints, 40);
    CHECK(bh_rep.exact_zero);
    CHECK(bh_rep.pass);
    // Refined a-tuple at 40 digits.
    auto a_rep = certify(by_label(out, "a"), out.constraints, 40);
    CHECK(a_rep.pass);
    CHECK(a_rep.max_residual <= PrecReal::pow10(-20, 40));
    // A generic non-solution fails.
    ParameterTuple junk;
    junk.digits = 40;
    for (const auto& p : {"A", "B", "C"}) {
        TupleValue tv;
        tv.kind = TupleValue::Kind::exact;
        tv.exact = Rational(1);
        tv.approx = PrecComplex(PrecReal(1L, 40));
        junk.values.emplace(p, tv);
    }
    CHECK(!certify(junk, out.constraints, 40).pass);
}

TEST_CASE("solve N=4 and N=5 recover the known tuples exactly") {
    for (auto method : {SolveMethod::groebner, SolveMethod::resultant_chain}) {
        auto out4 = solve_epn(4, 30, method);
        REQUIRE(out4.tuples.size() == 2);
        const auto& bh4 = by_label(out4, "bh");
        CHECK(bh4.values.at("A").exact == Rational(4));
        CHECK(bh4.values.at("B").exact == Rational(3));
        const auto& t4 = by_label(out4, "t1");
        CHECK(t4.values.at("A").kind == TupleValue::Kind::exact);
        CHECK(t4.values.at("A").exact == Rational(64));
        CHECK(t4.values.at("B").exact == Rational(-27));
        CHECK(t4.residual_exact_zero);

        auto out5 = solve_epn(5, 30, method);
        const auto& t5 = by_label(out5, "t1");
        CHECK(t5.values.at("A").exact == Rational(-54));
        CHECK(t5.values.at("B").exact == Rational(64));
    }
}

TEST_CASE("solve N=6: quartic eliminant and printed tuples") {
    auto out = solve_epn(6, 40);
    REQUIRE(out.tuples.size() == 5);

    auto v = make_vars({"A", "B", "C"});
    auto quartic = load_poly_file(fix("n6_eliminant_quartic.txt"), make_vars({"C"})).at(0);
    CHECK(out.elimination.eliminant.convert(make_vars({"C"})) == quartic);
    CHECK(out.elimination.bh_root_removed);
    CHECK(out.elimination.bh_root_value == Rational(5));
    CHECK(out.elimination.degree == 4);

    const auto& a = by_label(out, "a");
    CHECK(near(a.values.at("A").approx, 673.7717872, 1e-7));
    CHECK(near(a.values.at("B").approx, -253.5822865, 1e-7));
    CHECK(near(a.values.at("C").approx, -65.80360706, 1e-8));
    CHECK(a.certified);
    const auto& b = by_label(out, "b");
    CHECK(near(b.values.at("A").approx, 107.5337579, 1e-7));
    CHECK(near(b.values.at("B").approx, -37.96027355, 1e-8));
    CHECK(near(b.values.at("C").approx, 1.693394621, 1e-9));

    // Two complex-flagged branches, neither certified nor refined.
    int complex_count = 0;
    for (const auto& t : out.tuples)
        if (!t.is_real()) {
            ++complex_count;
            CHECK(!t.certified);
        }
    CHECK(complex_count == 2);

    // Kept-variable algebraic handles point at the quartic.
    REQUIRE(a.values.at("C").algebraic.has_value());
    CHECK(a.values.at("C").algebraic->defining_poly.convert(make_vars({"C"})) == quartic);
    Rational lo = a.values.at("C").algebraic->lower;
    Rational hi = a.values.at("C").algebraic->upper;
    CHECK(lo < hi);
    // The stored approximation is rounded to 40 digits, the enclosure is
    // much tighter; they agree to the stored precision.
    Rational mid = (lo + hi) / 2;
    PrecReal gap = (a.values.at("C").approx.re() - PrecReal(mid, 60)).abs();
    CHECK(gap <= PrecReal(66L, 60) * PrecReal::pow10(-39, 60));
}

TEST_CASE("solve N=7: closed-form families recovered exactly") {
    auto out = solve_epn(7, 40);
    REQUIRE(out.tuples.size() == 5);
    const auto& bh = by_label(out, "bh");
    CHECK(bh.values.at("A").exact == Rational(12));
    CHECK(bh.values.at("B").exact == Rational(10));
    CHECK(bh.values.at("C").exact == Rational(6));

    auto cv = make_vars({"C"});
    MultiPoly q1 = parse_poly("C^2 + 708*C + 2916", cv);  // C = 6r, r^2+118r+81=0
    MultiPoly q2 = parse_poly("C^2 - 54*C - 972", cv);    // C = 18r, r^2-3r-3=0
    MultiPoly elim = out.elimination.eliminant.convert(cv);
    auto rest = divide_exactly(elim, q1);
    REQUIRE(rest.has_value());
    CHECK(rest->content_primitive().second == q2);

    // Exact back-substitution: compose the recorded closed forms into
    // polynomials in C alone, then reduce modulo each family's quadratic.
    const auto& e = out.elimination;
    REQUIRE(e.closed_form.count("B"));
    REQUIRE(e.closed_form.count("A"));
    const VarSetPtr& pv = out.constraints.front().vars();
    MultiPoly b_of_c = e.closed_form.at("B").first.scaled(
        Rational(1) / e.closed_form.at("B").second);
    MultiPoly a_expr = e.closed_form.at("A").first.scaled(
        Rational(1) / e.closed_form.at("A").second);
    MultiPoly a_of_c = a_expr.substitute("B", b_of_c);

    MultiPoly q1p = q1.convert(pv), q2p = q2.convert(pv);
    // Family 1: A = -48 and B = 76 - C.
    CHECK(poly_mod(a_of_c - MultiPoly::constant(pv, Rational(-48)), q1p, "C").is_zero());
    CHECK(poly_mod(b_of_c - parse_poly("76 - C", pv), q1p, "C").is_zero());
    // Family 2: A = 2C and B = 28 - 3C.
    CHECK(poly_mod(a_of_c - parse_poly("2*C", pv), q2p, "C").is_zero());
    CHECK(poly_mod(b_of_c - parse_poly("28 - 3*C", pv), q2p, "C").is_zero());

    // The auxiliary-root quadratics in r: substitute C = 6r resp. C = 18r.
    auto crv = make_vars({"C", "r"});
    MultiPoly in_r1 =
        q1.convert(crv).substitute("C", parse_poly("6*r", crv));
    CHECK(in_r1.content_primitive().second == parse_poly("r^2 + 118*r + 81", crv));
    MultiPoly in_r2 =
        q2.convert(crv).substitute("C", parse_poly("18*r", crv));
    CHECK(in_r2.content_primitive().second == parse_poly("r^2 - 3*r - 3", crv));

    // Numeric spot checks of the printed approximations.
    const auto& alpha = by_label(out, "alpha");
    CHECK(near(alpha.values.at("A").approx, -48.0, 1e-20));
    CHECK(std::abs(alpha.values.at("C").approx.re().to_double() / 6.0 - (-0.69048)) < 5e-6);
    const auto& gamma = by_label(out, "gamma");
    CHECK(std::abs(gamma.values.at("A").approx.re().to_double() / 36.0 - 3.7912878) < 5e-8);
}

TEST_CASE("solve paths agree on certified real tuples for N=4..9") {
    for (int n : {4, 5, 6, 7, 8, 9}) {
        auto ga = solve_epn(n, 40, SolveMethod::groebner);
        auto ra = solve_epn(n, 40, SolveMethod::resultant_chain);
        std::vector<const ParameterTuple*> gt, rt;
        for (const auto& t : ga.tuples)
            if (t.certified && t.is_real()) gt.push_back(&t);
        for (const auto& t : ra.tuples)
            if (t.certified && t.is_real()) rt.push_back(&t);
        REQUIRE(gt.size() == rt.size());
        for (size_t i = 0; i < gt.size(); ++i) {
            for (const auto& p : ga.system.model.params) {
                PrecReal d = (gt[i]->values.at(p).approx - rt[i]->values.at(p).approx).abs();
                PrecReal scale = max(PrecReal(1L, 40), gt[i]->values.at(p).approx.abs());
                CHECK(d <= scale * PrecReal::pow10(-30, 40));
            }
        }
    }
}

TEST_CASE("every returned tuple passes certify at its stated precision") {
    for (int n : {4, 5, 6, 7}) {
        auto out = solve_epn(n, 40);
        for (const auto& t : out.tuples) {
            if (!t.is_real()) continue;  // complex branches are listed, not certified
            auto rep = certify(t, out.constraints, t.digits);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("newton_refine sharpens a perturbed seed") {
    auto out = solve_epn(6, 40);
    const auto& a = by_label(out, "a");
    std::map<std::string, PrecReal> seed;
    for (const auto& [k, v] : a.values)
        seed.emplace(k, v.approx.re() + PrecReal(1e-12, 60));
    auto refined = newton_refine(out.constraints, {"A", "B", "C"}, seed, 60);
    std::map<std::string, PrecComplex> cv;
    for (auto& [k, v] : refined) cv.emplace(k, PrecComplex(v));
    CHECK(certify_assignment(cv, out.constraints, 60).max_residual <=
          PrecReal::pow10(-40, 60));
}

TEST_CASE("values_at_digits re-refines beyond the stored precision") {
    auto out = solve_epn(6, 40);
    const auto& b = by_label(out, "b");
    auto v80 = values_at_digits(b, out.constraints, 80);
    std::map<std::string, PrecComplex> cv;
    for (auto& [k, x] : v80) cv.emplace(k, PrecComplex(x));
    CHECK(certify_assignment(cv, out.constraints, 80).max_residual <=
          PrecReal::pow10(-60, 80));
}

TEST_CASE("solve_epn rejects out-of-contract arguments") {
    CHECK_THROWS_AS(solve_epn(1, 40), precondition_error);
    CHECK_THROWS_AS(solve_epn(6, 10), precondition_error);
}
