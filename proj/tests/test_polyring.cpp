#include <doctest.h>

#include <random>

#include "epn/fixtures.hpp"
#include "epn/multipoly.hpp"
#include "epn/polyops.hpp"

using namespace epn;

namespace {

MultiPoly rand_poly(const VarSetPtr& vars, std::mt19937_64& rng, int max_terms = 5,
                    int max_deg = 3, int coeff_range = 9) {
    std::uniform_int_distribution<int> nterms(1, max_terms), deg(0, max_deg),
        coeff(-coeff_range, coeff_range);
    MultiPoly p(vars);
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        Expo e(vars->size());
        for (auto& x : e) x = static_cast<uint32_t>(deg(rng));
        int c = coeff(rng);
        if (c == 0) c = 1;
        p += MultiPoly::from_terms(vars, {{e, Rational(c)}});
    }
    return p;
}

// Fraction-free Bareiss determinant over rationals: the independent oracle
// for resultants of univariate polynomials via the Sylvester matrix.
Rational sylvester_resultant(const std::vector<Rational>& p,
                             const std::vector<Rational>& q) {
    long dp = static_cast<long>(p.size()) - 1, dq = static_cast<long>(q.size()) - 1;
    long n = dp + dq;
    std::vector<std::vector<Rational>> m(static_cast<size_t>(n),
                                         std::vector<Rational>(static_cast<size_t>(n), Rational(0)));
    for (long r = 0; r < dq; ++r)
        for (long k = 0; k <= dp; ++k)
            m[static_cast<size_t>(r)][static_cast<size_t>(r + k)] =
                p[static_cast<size_t>(dp - k)];
    for (long r = 0; r < dp; ++r)
        for (long k = 0; k <= dq; ++k)
            m[static_cast<size_t>(dq + r)][static_cast<size_t>(r + k)] =
                q[static_cast<size_t>(dq - k)];
    Rational det(1);
    int sign = 1;
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long r = col; r < n; ++r)
            if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return Rational(0);
        if (piv != col) {
            std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(col)]);
            sign = -sign;
        }
        Rational pivot = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (long r = col + 1; r < n; ++r) {
            Rational f = m[static_cast<size_t>(r)][static_cast<size_t>(col)] / pivot;
            for (long k = col; k < n; ++k)
                m[static_cast<size_t>(r)][static_cast<size_t>(k)] -=
                    f * m[static_cast<size_t>(col)][static_cast<size_t>(k)];
        }
    }
    for (long k = 0; k < n; ++k) det *= m[static_cast<size_t>(k)][static_cast<size_t>(k)];
    return sign > 0 ? det : -det;
}

} // namespace

TEST_CASE("ring arithmetic basics") {
    auto vars = make_vars({"s", "z", "A", "B", "C"});
    MultiPoly s = MultiPoly::variable(vars, "s");
    MultiPoly one = MultiPoly::constant(vars, Rational(1));
    CHECK(arith(s + one, s - one, PolyOp::mul) == s * s - one);

    MultiPoly a = parse_poly("A + 2*z", vars);
    CHECK((a * MultiPoly::zero(vars)).is_zero());

    // Leading two blocks of the N=6 secular polynomial: s^2 plus the
    // coefficient of s^2 times s has five terms.
    MultiPoly lead = parse_poly("s^2", vars);
    MultiPoly block = parse_poly("(-A + 35*z - 2*C - 2*B) * s", vars);
    CHECK((lead + block).term_count() == 5);
}

TEST_CASE("varset mismatch is a structural error") {
    auto v1 = make_vars({"x"});
    auto v2 = make_vars({"y"});
    CHECK_THROWS_AS(MultiPoly::variable(v1, "x") + MultiPoly::variable(v2, "y"),
                    structural_error);
}

TEST_CASE("distributivity under fuzzing") {
    auto vars = make_vars({"x", "y"});
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        MultiPoly a = rand_poly(vars, rng), b = rand_poly(vars, rng), c = rand_poly(vars, rng);
        CHECK((a + b) * c == a * c + b * c);
    }
}

TEST_CASE("substitute") {
    auto vars = make_vars({"s", "z", "A", "B", "C"});
    MultiPoly p = parse_poly("s^2 - z", vars);
    CHECK(p.substitute("z", Rational(1)) == parse_poly("s^2 - 1", vars));

    MultiPoly p1 = parse_poly("-A + 35*z - 2*C - 2*B", vars);
    MultiPoly at = p1.substitute("z", Rational(1))
                       .substitute("A", Rational(9))
                       .substitute("B", Rational(8))
                       .substitute("C", Rational(5));
    CHECK(at.is_zero());

    CHECK_THROWS_AS(p.substitute("w", Rational(0)), structural_error);

    // Polynomial substitution: replace z by s^2 in s^2 - z.
    CHECK(p.substitute("z", parse_poly("s^2", vars)).is_zero());
}

TEST_CASE("substitute at a rational root gives zero") {
    auto vars = make_vars({"x"});
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> num(-20, 20), den(1, 7);
    for (int i = 0; i < 50; ++i) {
        Rational r(num(rng), den(rng));
        mpq_canonicalize(r.get_mpq_t());
        MultiPoly x = MultiPoly::variable(vars, "x");
        MultiPoly factor = x - MultiPoly::constant(vars, r);
        MultiPoly q = rand_poly(vars, rng);
        MultiPoly p = factor * q;
        CHECK(p.substitute("x", r).is_zero());
    }
}

TEST_CASE("resultant: linear examples and Sylvester oracle") {
    auto vars = make_vars({"s", "a", "b"});
    MultiPoly r = resultant(parse_poly("s - a", vars), parse_poly("s - b", vars), "s");
    bool ok = (r == parse_poly("b - a", vars)) || (r == parse_poly("a - b", vars));
    CHECK(ok);

    auto sv = make_vars({"s"});
    MultiPoly r2 = resultant(parse_poly("s^2 + 1", sv), parse_poly("s + 1", sv), "s");
    CHECK(r2 == MultiPoly::constant(sv, Rational(2)));

    CHECK_THROWS_AS(resultant(parse_poly("s", sv), MultiPoly::constant(sv, Rational(3)), "s"),
                    precondition_error);
}

TEST_CASE("resultant matches the Sylvester determinant under fuzzing") {
    auto vars = make_vars({"x"});
    std::mt19937_64 rng(23);
    int done = 0;
    while (done < 60) {
        MultiPoly p = rand_poly(vars, rng, 4, 5);
        MultiPoly q = rand_poly(vars, rng, 4, 5);
        if (p.degree("x") < 1 || q.degree("x") < 1) continue;
        ++done;
        Rational res = resultant(p, q, "x").constant_value();
        Rational oracle = sylvester_resultant(p.univariate_coeffs("x"),
                                              q.univariate_coeffs("x"));
        CHECK(res == oracle);
    }
}

TEST_CASE("resultant swap symmetry") {
    auto vars = make_vars({"x", "y"});
    std::mt19937_64 rng(29);
    int done = 0;
    while (done < 40) {
        MultiPoly p = rand_poly(vars, rng, 4, 3);
        MultiPoly q = rand_poly(vars, rng, 4, 3);
        long dp = p.degree("x"), dq = q.degree("x");
        if (dp < 1 || dq < 1) continue;
        ++done;
        MultiPoly lhs = resultant(p, q, "x");
        MultiPoly rhs = resultant(q, p, "x");
        if ((dp * dq) % 2 == 1) rhs = -rhs;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("resultant reconstructs the N=7 eliminant in C") {
    auto vars = make_vars({"r", "C"});
    MultiPoly q = resultant(parse_poly("r^2 + 118*r + 81", vars),
                            parse_poly("C - 6*r", vars), "r");
    // Quadratic with roots 6 r_{alpha,beta}: C^2 + 708 C + 2916 up to scale.
    MultiPoly prim = q.content_primitive().second;
    CHECK(prim == parse_poly("C^2 + 708*C + 2916", vars));
}

TEST_CASE("discriminant") {
    auto vars = make_vars({"s", "z", "b", "c"});
    CHECK(discriminant(parse_poly("s^2 - z", vars), "s") == parse_poly("4*z", vars));
    CHECK(discriminant(parse_poly("s^2 + b*s + c", vars), "s") ==
          parse_poly("b^2 - 4*c", vars));
    CHECK_THROWS_AS(discriminant(parse_poly("s + 1", vars), "s"), precondition_error);
}

TEST_CASE("discriminant of the N=6 secular cubic at the BH point") {
    auto vars = make_vars({"s", "z", "A", "B", "C"});
    auto fix = load_poly_file(std::string(FIXTURE_DIR) + "/n6_secular.txt", vars);
    MultiPoly sec = fix.at(0)
                        .substitute("A", Rational(9))
                        .substitute("B", Rational(8))
                        .substitute("C", Rational(5));
    MultiPoly disc = discriminant(sec, "s");
    // The sixfold collapse at z=1 forces a high-multiplicity root there.
    CHECK(disc.substitute("z", Rational(1)).is_zero());
    MultiPoly zminus1 = parse_poly("z - 1", vars);
    auto q1 = divide_exactly(disc, zminus1);
    REQUIRE(q1.has_value());
    auto q2 = divide_exactly(*q1, zminus1);
    REQUIRE(q2.has_value());
    auto q3 = divide_exactly(*q2, zminus1);
    CHECK(q3.has_value());
}

TEST_CASE("content_primitive") {
    auto vars = make_vars({"s"});
    auto [c1, p1] = parse_poly("2*s + 4", vars).content_primitive();
    CHECK(c1 == Rational(2));
    CHECK(p1 == parse_poly("s + 2", vars));

    auto [c2, p2] = parse_poly("s^2/3 - 2/3", vars).content_primitive();
    CHECK(c2 == Rational(1, 3));
    CHECK(p2 == parse_poly("s^2 - 2", vars));

    CHECK_THROWS_AS(MultiPoly::zero(vars).content_primitive(), precondition_error);
}

TEST_CASE("reference quartic fixture is primitive with positive lead") {
    auto vars = make_vars({"C"});
    auto fix = load_poly_file(std::string(FIXTURE_DIR) + "/n6_eliminant_quartic.txt", vars);
    auto [c, p] = fix.at(0).content_primitive();
    CHECK(c == Rational(1));
    CHECK(p == fix.at(0));
}

TEST_CASE("eval_prec") {
    auto vars = make_vars({"A", "B", "C", "D"});
    auto fix = load_poly_file(std::string(FIXTURE_DIR) + "/n8_constraints_z1.txt", vars);
    std::map<std::string, PrecComplex> bh{
        {"A", PrecComplex(PrecReal(16L, 40))},
        {"B", PrecComplex(PrecReal(15L, 40))},
        {"C", PrecComplex(PrecReal(12L, 40))},
        {"D", PrecComplex(PrecReal(7L, 40))}};
    CHECK(fix.at(0).eval_prec(bh, 40).abs().is_zero());

    auto xv = make_vars({"x"});
    MultiPoly p = parse_poly("x^2 + 1", xv);
    PrecComplex i(PrecReal(0L, 40), PrecReal(1L, 40));
    CHECK(p.eval_prec({{"x", i}}, 40).abs() < PrecReal::pow10(-35, 40));

    CHECK_THROWS_AS(p.eval_prec(std::map<std::string, PrecComplex>{}, 40),
                    structural_error);
}

TEST_CASE("eval_prec residual magnitude at a refined root") {
    // Looseness budget: |p(root)| <= 10^(cond - digits) with cond the log10
    // of the coefficient 1-norm, evaluated a few digits above the target.
    auto vars = make_vars({"C"});
    auto quartic =
        load_poly_file(std::string(FIXTURE_DIR) + "/n6_eliminant_quartic.txt", vars).at(0);
    Rational norm1(0);
    for (const auto& [e, c] : quartic.terms()) norm1 += c >= 0 ? c : Rational(-c);
    double cond = std::log10(norm1.get_d());
    long digits = 40;
    // Fixed reference root (the smaller real root of the quartic).
    PrecReal root = PrecReal::from_string(
        "-65.80360706245132477179785808904814860530", digits + 5);
    PrecReal val = quartic.eval_prec({{"C", root}}, digits).abs();
    CHECK(val <= PrecReal::pow10(static_cast<long>(cond) + 4 - digits, digits));
}

TEST_CASE("canonical serialization round trips") {
    auto vars = make_vars({"x", "y", "z"});
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        MultiPoly p = rand_poly(vars, rng, 6, 4);
        CHECK(parse_poly(p.str(), vars) == p);
    }
    CHECK(MultiPoly::zero(vars).str() == "0");
    CHECK(parse_poly("0", vars).is_zero());
    MultiPoly sample = parse_poly("3*x^2*y - z/2 + 1", vars);
    CHECK(sample.str() == "3 * x^2 * y + -1/2 * z + 1");
}

TEST_CASE("divexact and divide_exactly") {
    auto vars = make_vars({"x", "y"});
    MultiPoly a = parse_poly("x^2 - y^2", vars);
    MultiPoly b = parse_poly("x - y", vars);
    CHECK(divexact(a, b) == parse_poly("x + y", vars));
    CHECK(!divide_exactly(parse_poly("x^2 + 1", vars), b).has_value());
}
