#include <doctest.h>

#include <cmath>

#include "epn/epnverify.hpp"
#include "epn/solve.hpp"

using namespace epn;

namespace {

HamiltonianFactory tuple_factory(const SolveOutcome& out, const std::string& label,
                                 long min_digits) {
    ParameterTuple t;
    for (const auto& cand : out.tuples)
        if (cand.label == label) t = cand;
    auto sys = out.system;
    auto cons = out.constraints;
    return [t, sys, cons, min_digits](int, long digits) {
        auto vals = values_at_digits(t, cons, std::max(digits, min_digits));
        std::map<std::string, PrecReal> at;
        for (auto& [k, v] : vals) at.emplace(k, v.round_to(digits));
        return build_matrix(sys.model, at, PrecReal(1L, digits), digits);
    };
}

} // namespace

TEST_CASE("eig_prec on the N=2 BH matrix at gamma = 0.6") {
    long d = 40;
    auto m = ModelSpec::for_dimension(2);
    CMatrix h = build_matrix(m, {{"A", PrecReal(1L, d)}},
                             PrecReal(Rational(9, 25), d), d);
    auto eig = eig_prec(h, d);
    PrecReal expect(Rational(4, 5), d);
    CHECK((eig.eigenvalues[0].re() + expect).abs() < PrecReal::pow10(-25, d));
    CHECK((eig.eigenvalues[1].re() - expect).abs() < PrecReal::pow10(-25, d));
    for (const auto& r : eig.residuals)
        CHECK(r <= PrecReal::pow10(12 - d, d) * h.frobenius_norm());
}

TEST_CASE("eig_prec on a diagonal matrix returns the standard basis") {
    long d = 30;
    CMatrix h(4, 4, d);
    for (size_t i = 0; i < 4; ++i)
        h.at(i, i) = PrecComplex(PrecReal(static_cast<long>(i + 1), d));
    auto eig = eig_prec(h, d);
    auto rho = nonoverlaps(eig.eigenvectors);
    for (size_t a = 0; a < 4; ++a)
        for (size_t b = 0; b < 4; ++b) {
            if (a == b) CHECK(rho[a][b].is_zero());
            else CHECK((rho[a][b] - PrecReal(1L, d)).abs() < PrecReal::pow10(-20, d));
        }
}

TEST_CASE("nonoverlaps basics") {
    long d = 30;
    PrecReal zero(0L, d), one(1L, d);
    std::vector<CVector> ortho{{PrecComplex(one, zero), PrecComplex(zero, zero)},
                               {PrecComplex(zero, zero), PrecComplex(one, zero)}};
    auto rho = nonoverlaps(ortho);
    CHECK((rho[0][1] - one).abs() < PrecReal::pow10(-25, d));

    std::vector<CVector> same{ortho[0], ortho[0]};
    CHECK(nonoverlaps(same)[0][1].abs() < PrecReal::pow10(-25, d));

    // Rotation by theta in a real plane: rho = 1 - cos(theta).
    double theta = 0.7;
    std::vector<CVector> rot{
        {PrecComplex(one, zero), PrecComplex(zero, zero)},
        {PrecComplex(PrecReal(std::cos(theta), d), zero),
         PrecComplex(PrecReal(std::sin(theta), d), zero)}};
    auto r2 = nonoverlaps(rot);
    CHECK((r2[0][1] - PrecReal(1.0 - std::cos(theta), d)).abs() < PrecReal::pow10(-14, d));

    std::vector<CVector> bad{{PrecComplex(PrecReal(2L, d), zero)},
                             {PrecComplex(one, zero)}};
    CHECK_THROWS_AS(nonoverlaps(bad), precondition_error);
}

TEST_CASE("perturbation respects structure and magnitude") {
    long d = 60;
    PerturbationSpec spec;
    spec.magnitude_exponent = 12;
    spec.seed = 5;
    CMatrix v = perturbation(6, spec, 0, d);
    PrecReal bound = PrecReal::pow10(-12, d);
    for (size_t i = 0; i < 6; ++i)
        for (size_t j = 0; j < 6; ++j) {
            CHECK(v.at(i, j).abs() <= bound);
            CHECK((v.at(i, j) - v.at(j, i)).is_zero());  // exact symmetry
        }
    // Reproducibility: same (seed, p, trial) gives the same matrix.
    CMatrix v2 = perturbation(6, spec, 0, d);
    for (size_t i = 0; i < 6; ++i)
        for (size_t j = 0; j < 6; ++j) CHECK((v.at(i, j) - v2.at(i, j)).is_zero());
    // Different trial gives a different draw.
    CMatrix v3 = perturbation(6, spec, 1, d);
    CHECK(!(v.at(0, 0) - v3.at(0, 0)).is_zero());

    spec.structure = PerturbationSpec::Structure::dense_unstructured;
    CMatrix w = perturbation(6, spec, 0, d);
    bool symmetric = true;
    for (size_t i = 0; i < 6; ++i)
        for (size_t j = 0; j < 6; ++j)
            if (!(w.at(i, j) - w.at(j, i)).is_zero()) symmetric = false;
    CHECK(!symmetric);
}

TEST_CASE("partition enumeration") {
    auto all = partitions_of(6);
    CHECK(all.size() == 11);
    auto multi = partitions_of(6, 2);
    CHECK(multi.size() == 10);
    for (const auto& p : multi) {
        int sum = 0;
        for (int x : p) {
            CHECK(x >= 1);
            sum += x;
        }
        CHECK(sum == 6);
        CHECK(p.size() >= 2);
    }
}

TEST_CASE("precision sweep: certified EPN tuples confluence monotonically") {
    // Ladder medians must decrease for BH and the first non-BH tuple of
    // N = 4, 5, 6 across five independent draws.
    std::vector<int> ladder{10, 20, 30, 40};
    for (int n : {4, 5, 6}) {
        auto out = solve_epn(n, 40);
        for (const char* label : {"bh", n == 6 ? "a" : "t1"}) {
            auto rep = precision_sweep(tuple_factory(out, label, 100),
                                       static_cast<size_t>(n), ladder, 5, 2024);
            INFO("N=" << n << " tuple=" << label);
            CHECK(rep.verdict == ConfluenceReport::Verdict::single_block);
            for (size_t i = 1; i < rep.rungs.size(); ++i)
                CHECK(rep.rungs[i].max_rho < rep.rungs[i - 1].max_rho);
        }
    }
}

TEST_CASE("scale sanity at the top rung") {
    auto out = solve_epn(6, 40);
    auto rep = precision_sweep(tuple_factory(out, "a", 100), 6, {10, 20, 30, 40}, 5, 77);
    // Reference scale is a few 1e-13; accept within three decades.
    CHECK(rep.rungs.back().max_rho <= PrecReal::pow10(-10, 40));
}

TEST_CASE("split-block counterexample is flagged for every ladder") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        auto rep = precision_sweep(
            [](int p, long digits) { return split_demo_matrix(6, p, digits); }, 6,
            {10, 20, 30}, 1, seed);
        CHECK(rep.verdict == ConfluenceReport::Verdict::suspected_split);
        CHECK(rep.suggested_partition == std::vector<int>{3, 3});
    }
}

TEST_CASE("jordan_exclusion") {
    auto out = solve_epn(6, 40);
    auto good = precision_sweep(tuple_factory(out, "a", 100), 6, {10, 20, 30}, 3, 9);
    auto jx = jordan_exclusion(good);
    CHECK(jx.verdict == ConfluenceReport::Verdict::single_block);
    CHECK(jx.excluded_partitions.size() == 10);

    auto split = precision_sweep(
        [](int p, long digits) { return split_demo_matrix(6, p, digits); }, 6,
        {10, 20, 30}, 1, 9);
    auto js = jordan_exclusion(split);
    CHECK(js.verdict == ConfluenceReport::Verdict::suspected_split);
    CHECK(js.suggested_partition == std::vector<int>{3, 3});

    ConfluenceReport tiny = good;
    tiny.rungs.resize(1);
    CHECK_THROWS_AS(jordan_exclusion(tiny), precondition_error);
}

TEST_CASE("precision_sweep validates its inputs") {
    auto factory = [](int, long digits) { return split_demo_matrix(4, 10, digits); };
    CHECK_THROWS_AS(precision_sweep(factory, 4, {}, 1, 1), precondition_error);
    CHECK_THROWS_AS(precision_sweep(factory, 4, {20, 10}, 1, 1), precondition_error);
    CHECK_THROWS_AS(precision_sweep(factory, 4, {10, 20}, 0, 1), precondition_error);
}
