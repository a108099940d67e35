#include <doctest.h>

#include <random>

#include "epn/epnverify.hpp"
#include "epn/fixtures.hpp"
#include "epn/polyroots.hpp"
#include "epn/secular.hpp"

using namespace epn;

namespace {

std::string fix(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

} // namespace

TEST_CASE("model spec geometry") {
    ModelSpec m = ModelSpec::for_dimension(6);
    CHECK(m.half_size == 3);
    CHECK(m.params == std::vector<std::string>{"A", "B", "C"});
    CHECK(m.coupling_param(1) == "C");  // outermost
    CHECK(m.coupling_param(3) == "A");  // center
    CHECK(m.coupling_param(5) == "C");
    ModelSpec m7 = ModelSpec::for_dimension(7);
    CHECK(m7.coupling_param(3) == "A");
    CHECK(m7.coupling_param(4) == "A");  // odd N: central pair shares A
    CHECK_THROWS_AS(ModelSpec::for_dimension(1), precondition_error);
}

TEST_CASE("bh_tuple values") {
    auto t6 = bh_tuple(6);
    CHECK(t6.at("A") == Rational(9));
    CHECK(t6.at("B") == Rational(8));
    CHECK(t6.at("C") == Rational(5));
    auto t7 = bh_tuple(7);
    CHECK(t7.at("A") == Rational(12));
    CHECK(t7.at("B") == Rational(10));
    CHECK(t7.at("C") == Rational(6));
    auto t8 = bh_tuple(8);
    CHECK(t8.at("A") == Rational(16));
    CHECK(t8.at("B") == Rational(15));
    CHECK(t8.at("C") == Rational(12));
    CHECK(t8.at("D") == Rational(7));
}

TEST_CASE("derive_secular N=2 closed form") {
    auto sys = derive_secular(ModelSpec::for_dimension(2));
    auto v = make_vars({"s", "z", "A"});
    CHECK(sys.secular.convert(v) == parse_poly("s + z - A", v));
}

TEST_CASE("derive_secular reproduces the reference N=6 polynomial exactly") {
    auto sys = derive_secular(ModelSpec::for_dimension(6));
    auto v = make_vars({"s", "z", "A", "B", "C"});
    auto ref = load_poly_file(fix("n6_secular.txt"), v).at(0);
    CHECK(sys.secular.convert(v) == ref);
}

TEST_CASE("derive_secular reproduces the reference z=1 systems exactly") {
    struct Case {
        int n;
        const char* file;
    } cases[] = {{7, "n7_constraints_z1.txt"},
                 {8, "n8_constraints_z1.txt"},
                 {9, "n9_constraints_z1.txt"}};
    for (const auto& c : cases) {
        auto sys = derive_secular(ModelSpec::for_dimension(c.n));
        auto pv = make_vars(sys.model.params);
        auto ref = load_poly_file(fix(c.file), pv);
        auto cons = constraints_at(sys, Rational(1));
        REQUIRE(cons.size() == ref.size());
        for (size_t m = 0; m < ref.size(); ++m) CHECK(cons[m].convert(pv) == ref[m]);
    }
}

TEST_CASE("BH tuples annihilate the z=1 constraints exactly for N=2..10") {
    for (int n = 2; n <= 10; ++n) {
        auto sys = derive_secular(ModelSpec::for_dimension(n));
        auto bh = bh_tuple(n);
        for (const auto& p : constraints_at(sys, Rational(1)))
            CHECK(p.eval_exact(bh) == 0);
    }
}

TEST_CASE("coefficients are weighted-homogeneous of degree m") {
    for (int n : {4, 5, 6, 7, 8, 9}) {
        auto sys = derive_secular(ModelSpec::for_dimension(n));
        for (size_t m = 0; m < sys.coeffs.size(); ++m) {
            for (const auto& [e, c] : sys.coeffs[m].terms()) {
                long w = 0;
                for (size_t i = 1; i < e.size(); ++i) w += e[i];  // z and all params
                CHECK(w == static_cast<long>(m) + 1);
            }
        }
    }
}

TEST_CASE("build_matrix structure and values") {
    long d = 40;
    // N=2 at z = gamma^2 with unit coupling.
    auto m2 = ModelSpec::for_dimension(2);
    CMatrix h2 = build_matrix(m2, {{"A", PrecReal(1L, d)}}, PrecReal(0.25, d), d);
    CHECK(h2.at(0, 0).re().is_zero());
    CHECK((h2.at(0, 0).im() + PrecReal(0.5, d)).abs() < PrecReal::pow10(-35, d));
    CHECK((h2.at(1, 1).im() - PrecReal(0.5, d)).abs() < PrecReal::pow10(-35, d));
    CHECK((h2.at(0, 1).re() - PrecReal(1L, d)).abs() < PrecReal::pow10(-35, d));
    CHECK(h2.equals_transpose());

    // N=6 BH at z=0: real symmetric with couplings (sqrt5, sqrt8, 3, sqrt8, sqrt5).
    auto m6 = ModelSpec::for_dimension(6);
    std::map<std::string, PrecReal> bh6{
        {"A", PrecReal(9L, d)}, {"B", PrecReal(8L, d)}, {"C", PrecReal(5L, d)}};
    CMatrix h6 = build_matrix(m6, bh6, PrecReal(0L, d), d);
    CHECK(h6.at(0, 0).is_zero());
    CHECK((h6.at(2, 3).re() - PrecReal(3L, d)).abs() < PrecReal::pow10(-35, d));
    CHECK((h6.at(0, 1).re() * h6.at(0, 1).re() - PrecReal(5L, d)).abs() <
          PrecReal::pow10(-34, d));

    // Its spectrum at z=0 is {-5,-3,-1,1,3,5}.
    auto eig = eig_prec(h6, d);
    std::vector<long> expect{-5, -3, -1, 1, 3, 5};
    for (size_t k = 0; k < 6; ++k) {
        CHECK((eig.eigenvalues[k].re() - PrecReal(expect[k], d)).abs() <
              PrecReal::pow10(-25, d));
        CHECK(eig.eigenvalues[k].im().abs() < PrecReal::pow10(-25, d));
    }

    // N=4 with the deformed tuple (64, -27) at z=1: the outer coupling is
    // imaginary, the inner one is 8, the diagonal is -3i,-i,i,3i.
    auto m4 = ModelSpec::for_dimension(4);
    std::map<std::string, PrecReal> t4{{"A", PrecReal(64L, d)}, {"B", PrecReal(-27L, d)}};
    CMatrix h4 = build_matrix(m4, t4, PrecReal(1L, d), d);
    CHECK(h4.at(0, 1).re().is_zero());
    CHECK((h4.at(0, 1).im() * h4.at(0, 1).im() - PrecReal(27L, d)).abs() <
          PrecReal::pow10(-34, d));
    CHECK((h4.at(1, 2).re() - PrecReal(8L, d)).abs() < PrecReal::pow10(-34, d));
    CHECK((h4.at(0, 0).im() + PrecReal(3L, d)).abs() < PrecReal::pow10(-34, d));
    CHECK(h4.equals_transpose());

    CHECK_THROWS_AS(build_matrix(m4, {{"A", PrecReal(1L, d)}}, PrecReal(1L, d), d),
                    structural_error);
}

TEST_CASE("negative z gives a real symmetric matrix") {
    long d = 30;
    auto m4 = ModelSpec::for_dimension(4);
    std::map<std::string, PrecReal> bh{{"A", PrecReal(4L, d)}, {"B", PrecReal(3L, d)}};
    CMatrix h = build_matrix(m4, bh, PrecReal(-2L, d), d);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) CHECK(h.at(i, j).im().is_zero());
}

TEST_CASE("secular roots match matrix eigenvalues under fuzzing") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> num(1, 40), znum(-30, 20);
    long d = 40;
    for (int n : {4, 5, 6, 7}) {
        auto sys = derive_secular(ModelSpec::for_dimension(n));
        for (int rep = 0; rep < 3; ++rep) {
            std::map<std::string, Rational> params;
            std::map<std::string, PrecReal> pv;
            for (const auto& p : sys.model.params) {
                Rational v(num(rng), 3);
                mpq_canonicalize(v.get_mpq_t());
                params[p] = v;
                pv.emplace(p, PrecReal(v, d));
            }
            Rational z(znum(rng), 16);
            mpq_canonicalize(z.get_mpq_t());
            // Secular roots in s, mapped to energies.
            std::map<std::string, PrecReal> assign = pv;
            assign.emplace("z", PrecReal(z, d));
            std::vector<PrecReal> coeffs;
            for (int k = 0; k <= sys.model.half_size; ++k)
                coeffs.push_back(
                    sys.secular.coeff_of("s", static_cast<uint32_t>(k)).eval_prec(assign, d).re());
            auto sroots = all_roots(coeffs, d);
            std::vector<PrecComplex> energies;
            PrecComplex zero(PrecReal(0L, d));
            if (sys.odd_zero_mode) energies.push_back(zero);
            auto clamped_sqrt = [&](const PrecReal& x) {
                return x.sign() < 0 ? PrecReal(0L, d) : x.sqrt();
            };
            for (const auto& s : sroots) {
                // complex square root, clamped against rounding underflow
                PrecReal r = s.abs();
                PrecReal re = clamped_sqrt((r + s.re()) / PrecReal(2L, d));
                PrecReal im = clamped_sqrt((r - s.re()) / PrecReal(2L, d));
                if (s.im().sign() < 0) im = -im;
                energies.emplace_back(re, im);
                energies.emplace_back(-re, -im);
            }
            auto h = build_matrix(sys.model, pv, PrecReal(z, d), d);
            auto eig = eig_prec(h, d);
            // Multiset match: greedy nearest pairing is robust against the
            // unstable ordering of near-tied complex values.
            std::vector<bool> used(eig.eigenvalues.size(), false);
            for (const auto& e : energies) {
                size_t best = 0;
                PrecReal bestd(1e300, d);
                for (size_t k = 0; k < eig.eigenvalues.size(); ++k) {
                    if (used[k]) continue;
                    PrecReal dd = (e - eig.eigenvalues[k]).abs();
                    if (dd < bestd) {
                        bestd = dd;
                        best = k;
                    }
                }
                used[best] = true;
                CHECK(bestd < PrecReal::pow10(-(d - 12), d));
            }
        }
    }
}

TEST_CASE("BH spectrum law at z < 1") {
    long d = 40;
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> znum(-512, 255);
    for (int n : {4, 6}) {
        auto sys = derive_secular(ModelSpec::for_dimension(n));
        std::map<std::string, PrecReal> pv;
        for (const auto& [k, v] : bh_tuple(n)) pv.emplace(k, PrecReal(v, d));
        for (int rep = 0; rep < 4; ++rep) {
            Rational z(znum(rng), 256);
            mpq_canonicalize(z.get_mpq_t());
            auto h = build_matrix(sys.model, pv, PrecReal(z, d), d);
            auto eig = eig_prec(h, d);
            PrecReal root = PrecReal(Rational(1) - z, d).sqrt();
            for (int k = 0; k < n; ++k) {
                PrecReal expect = PrecReal(static_cast<long>(1 - n + 2 * k), d) * root;
                CHECK((eig.eigenvalues[static_cast<size_t>(k)].re() - expect).abs() <
                      PrecReal::pow10(-25, d));
                CHECK(eig.eigenvalues[static_cast<size_t>(k)].im().abs() <
                      PrecReal::pow10(-25, d));
            }
        }
    }
}
