#include "epn/epnverify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "epn/polyroots.hpp"

namespace epn {

const char* to_string(ConfluenceReport::Verdict v) {
    switch (v) {
        case ConfluenceReport::Verdict::single_block: return "single-block";
        case ConfluenceReport::Verdict::suspected_split: return "suspected-split";
        case ConfluenceReport::Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

CMatrix perturbation(size_t n, const PerturbationSpec& spec, int trial, long digits) {
    // Seeded per (seed, p, trial): reproducible regardless of scheduling.
    std::seed_seq seq{spec.seed, static_cast<uint64_t>(spec.magnitude_exponent),
                      static_cast<uint64_t>(trial)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PrecReal scale = PrecReal::pow10(-spec.magnitude_exponent, digits);

    CMatrix v(n, n, digits);
    auto draw = [&]() {
        double m = unit(rng);
        double phase = 2.0 * M_PI * unit(rng);
        return PrecComplex(PrecReal(m * std::cos(phase), digits) * scale,
                           PrecReal(m * std::sin(phase), digits) * scale);
    };
    if (spec.structure == PerturbationSpec::Structure::complex_symmetric) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j) {
                PrecComplex e = draw();
                v.at(i, j) = e;
                v.at(j, i) = e;
            }
    } else {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) v.at(i, j) = draw();
    }
    return v;
}

namespace {

// Characteristic polynomial det(lambda I - H), ascending coefficients.
std::vector<PrecComplex> charpoly_tridiagonal(const CMatrix& h, long digits) {
    size_t n = h.rows();
    PrecComplex zero(PrecReal(0L, digits));
    PrecComplex one(PrecReal(1L, digits));
    std::vector<PrecComplex> prev2{};          // D_{-1} = 0
    std::vector<PrecComplex> prev{one};        // D_0 = 1
    for (size_t k = 1; k <= n; ++k) {
        // D_k = (lambda - h_kk) D_{k-1} - h_{k-1,k} h_{k,k-1} D_{k-2}
        std::vector<PrecComplex> cur(prev.size() + 1, zero);
        for (size_t i = 0; i < prev.size(); ++i) {
            cur[i + 1] += prev[i];
            cur[i] -= h.at(k - 1, k - 1) * prev[i];
        }
        if (k >= 2) {
            PrecComplex c = h.at(k - 2, k - 1) * h.at(k - 1, k - 2);
            for (size_t i = 0; i < prev2.size(); ++i) cur[i] -= c * prev2[i];
        }
        prev2 = std::move(prev);
        prev = std::move(cur);
    }
    return prev;
}

std::vector<PrecComplex> charpoly_dense(const CMatrix& h, long digits) {
    size_t n = h.rows();
    size_t m = n + 1;
    PrecReal radius = h.frobenius_norm() + PrecReal(1L, digits);

    // Nodes R*exp(2*pi*i*j/m); the scaled inverse DFT is perfectly
    // conditioned for recovering the monic coefficients.
    mpfr_prec_t bits = prec_bits_for(digits);
    mpfr_t pi, theta, c, s;
    mpfr_init2(pi, bits);
    mpfr_init2(theta, bits);
    mpfr_init2(c, bits);
    mpfr_init2(s, bits);
    mpfr_const_pi(pi, MPFR_RNDN);
    std::vector<PrecComplex> nodes, dets;
    for (size_t j = 0; j < m; ++j) {
        mpfr_mul_ui(theta, pi, 2 * j, MPFR_RNDN);
        mpfr_div_ui(theta, theta, static_cast<unsigned long>(m), MPFR_RNDN);
        mpfr_sin_cos(s, c, theta, MPFR_RNDN);
        PrecReal cr(digits), sr(digits);
        mpfr_set(cr.raw(), c, MPFR_RNDN);
        mpfr_set(sr.raw(), s, MPFR_RNDN);
        nodes.emplace_back(cr * radius, sr * radius);
    }
    mpfr_clear(pi);
    mpfr_clear(theta);
    mpfr_clear(c);
    mpfr_clear(s);

    for (size_t j = 0; j < m; ++j) {
        CMatrix a(n, n, digits);
        for (size_t r = 0; r < n; ++r)
            for (size_t q = 0; q < n; ++q) a.at(r, q) = -h.at(r, q);
        for (size_t r = 0; r < n; ++r) a.at(r, r) += nodes[j];
        dets.push_back(lu_decompose(a).determinant());
    }

    // c_k = (1/m) sum_j det_j conj(w^jk) / R^k with w the m-th root of unity.
    std::vector<PrecComplex> coeffs;
    PrecComplex invm(PrecReal(1L, digits) / PrecReal(static_cast<long>(m), digits));
    PrecReal rpow(1L, digits);
    for (size_t k = 0; k < m; ++k) {
        PrecComplex acc(PrecReal(0L, digits));
        for (size_t j = 0; j < m; ++j) {
            size_t idx = (j * k) % m;
            // conj of node^k / R^k = conj(unit node at angle jk)
            PrecComplex unit = nodes[idx] * PrecComplex(PrecReal(1L, digits) / radius,
                                                        PrecReal(0L, digits));
            acc += dets[j] * unit.conj();
        }
        coeffs.push_back(acc * invm *
                         PrecComplex(PrecReal(1L, digits) / rpow, PrecReal(0L, digits)));
        rpow = rpow * radius;
    }
    return coeffs;
}

EigResult eig_attempt(const CMatrix& h, long digits) {
    size_t n = h.rows();
    CMatrix hw(n, n, digits);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            hw.at(i, j) = PrecComplex(h.at(i, j).re().round_to(digits),
                                      h.at(i, j).im().round_to(digits));

    auto coeffs = hw.is_tridiagonal() ? charpoly_tridiagonal(hw, digits)
                                      : charpoly_dense(hw, digits);
    auto lambdas = all_roots(coeffs, digits);
    std::sort(lambdas.begin(), lambdas.end(),
              [](const PrecComplex& a, const PrecComplex& b) {
                  if (!(a.re() == b.re())) return a.re() < b.re();
                  return a.im() < b.im();
              });

    PrecReal hnorm = hw.frobenius_norm();
    PrecReal tol = PrecReal::pow10(12 - digits, digits) * max(PrecReal(1L, digits), hnorm);

    EigResult out;
    for (const auto& lambda : lambdas) {
        CVector v = inverse_iteration(hw, lambda, digits, 2);
        // Rayleigh quotient (least-squares eigenvalue for this vector).
        CVector hv = hw.apply(v);
        PrecComplex rq = conj_inner(v, hv);
        CVector r = hv;
        for (size_t i = 0; i < n; ++i) r[i] -= rq * v[i];
        PrecReal rn = conj_inner(r, r).re().sqrt();
        if (rn > tol) throw numerical_failure("eig_prec: residual target unreachable");
        out.eigenvalues.push_back(rq);
        out.eigenvectors.push_back(std::move(v));
        out.residuals.push_back(rn);
    }
    return out;
}

PrecReal median(std::vector<PrecReal> xs) {
    if (xs.empty()) throw precondition_error("median of empty sample");
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return (xs[n / 2 - 1] + xs[n / 2]) / PrecReal(2L, xs.front().digits());
}

} // namespace

EigResult eig_prec(const CMatrix& h, long digits) {
    if (!h.is_square()) throw dimension_error("eig_prec: matrix must be square");
    if (h.rows() > 32) throw precondition_error("eig_prec: dimension capped at 32");
    try {
        return eig_attempt(h, digits);
    } catch (const numerical_failure&) {
        return eig_attempt(h, 2 * digits);  // one escalation, then give up
    }
}

std::vector<std::vector<PrecReal>> nonoverlaps(const std::vector<CVector>& vectors) {
    if (vectors.empty()) throw precondition_error("nonoverlaps: no vectors");
    long digits = vectors.front().front().digits();
    PrecReal one(1L, digits);
    PrecReal tol = PrecReal::pow10(-digits / 2, digits);
    for (const auto& v : vectors) {
        PrecReal norm = conj_inner(v, v).re().sqrt();
        if ((norm - one).abs() > tol)
            throw precondition_error("nonoverlaps: vectors must be normalized");
    }
    size_t n = vectors.size();
    std::vector<std::vector<PrecReal>> rho(n, std::vector<PrecReal>(n, PrecReal(0L, digits)));
    for (size_t m = 0; m < n; ++m)
        for (size_t k = m + 1; k < n; ++k) {
            PrecReal r = one - conj_inner(vectors[m], vectors[k]).abs();
            rho[m][k] = r;
            rho[k][m] = r;
        }
    return rho;
}

ConfluenceReport precision_sweep(const HamiltonianFactory& hamiltonian,
                                 size_t n, const std::vector<int>& ladder,
                                 int trials, uint64_t seed,
                                 PerturbationSpec::Structure structure) {
    if (ladder.empty()) throw precondition_error("precision_sweep: empty ladder");
    for (size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1])
            throw precondition_error("precision_sweep: ladder must be ascending");
    if (trials < 1) throw precondition_error("precision_sweep: trials must be >= 1");

    ConfluenceReport rep;
    rep.dimension = n;
    rep.ladder = ladder;
    rep.trials = trials;
    rep.seed = seed;
    rep.structure = structure;

    size_t npairs = n * (n - 1) / 2;
    for (int p : ladder) {
        long digits = 2 * static_cast<long>(p) + 20;
        CMatrix base = hamiltonian(p, digits);
        ConfluenceRung rung;
        rung.p = p;
        std::vector<PrecReal> maxs, mins;
        std::vector<std::vector<PrecReal>> per_pair(npairs);
        for (int t = 0; t < trials; ++t) {
            PerturbationSpec spec;
            spec.magnitude_exponent = p;
            spec.structure = structure;
            spec.seed = seed;
            CMatrix v = perturbation(n, spec, t, digits);
            try {
                auto eig = eig_prec(base + v, digits);
                auto rho = nonoverlaps(eig.eigenvectors);
                PrecReal mn = rho[0][1], mx = rho[0][1];
                size_t idx = 0;
                for (size_t a = 0; a < n; ++a)
                    for (size_t b = a + 1; b < n; ++b) {
                        if (rho[a][b] < mn) mn = rho[a][b];
                        if (rho[a][b] > mx) mx = rho[a][b];
                        per_pair[idx++].push_back(rho[a][b]);
                    }
                mins.push_back(mn);
                maxs.push_back(mx);
            } catch (const numerical_failure&) {
                ++rung.dropped_trials;
            }
        }
        if (maxs.empty())
            throw numerical_failure("precision_sweep: every trial failed at p=" +
                                    std::to_string(p));
        rung.trial_min = mins;
        rung.trial_max = maxs;
        rung.min_rho = median(mins);
        rung.max_rho = median(maxs);
        for (auto& ps : per_pair) rung.pair_median.push_back(median(ps));
        rep.rungs.push_back(std::move(rung));
    }

    // Verdict: medians of max rho strictly decreasing and small at the top.
    bool decreasing = true;
    for (size_t i = 1; i < rep.rungs.size(); ++i)
        if (!(rep.rungs[i].max_rho < rep.rungs[i - 1].max_rho)) decreasing = false;
    int top = ladder.back();
    PrecReal top_gate = PrecReal::pow10(-((top + 3) / 4), 2 * top + 20);
    if (decreasing && rep.rungs.back().max_rho <= top_gate) {
        rep.verdict = ConfluenceReport::Verdict::single_block;
    } else if (rep.rungs.size() >= 3) {
        auto jx = jordan_exclusion(rep);
        rep.verdict = jx.verdict;
        rep.suggested_partition = jx.suggested_partition;
    }
    return rep;
}

std::vector<std::vector<int>> partitions_of(int n, int min_parts) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
        if (rest == 0) {
            if (static_cast<int>(cur.size()) >= min_parts) out.push_back(cur);
            return;
        }
        for (int k = std::min(rest, maxpart); k >= 1; --k) {
            cur.push_back(k);
            rec(rest - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

JordanExclusion jordan_exclusion(const ConfluenceReport& report) {
    if (report.rungs.size() < 3)
        throw precondition_error("jordan_exclusion: need at least 3 ladder rungs");

    size_t n = report.dimension;
    size_t npairs = n * (n - 1) / 2;
    const auto& top = report.rungs.back();
    long digits = 2 * static_cast<long>(top.p) + 20;
    PrecReal shrink_gate = PrecReal::pow10(-((top.p + 3) / 4), digits);
    PrecReal stall_gate = PrecReal(0.01, digits);

    std::vector<int> state(npairs);  // 1 shrink, -1 stall, 0 neither
    bool all_shrink = true, any_neither = false;
    for (size_t i = 0; i < npairs; ++i) {
        const PrecReal& r = top.pair_median[i];
        if (r <= shrink_gate) state[i] = 1;
        else if (r >= stall_gate) state[i] = -1, all_shrink = false;
        else state[i] = 0, all_shrink = false, any_neither = true;
    }

    JordanExclusion out;
    if (all_shrink) {
        out.verdict = ConfluenceReport::Verdict::single_block;
        out.excluded_partitions = partitions_of(static_cast<int>(n), 2);
        return out;
    }
    if (any_neither) {
        out.verdict = ConfluenceReport::Verdict::inconclusive;
        return out;
    }
    // Union of shrinking pairs: vectors that stay parallel share a block.
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    size_t idx = 0;
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b, ++idx)
            if (state[idx] == 1) parent[find(a)] = find(b);
    std::map<size_t, int> sizes;
    for (size_t i = 0; i < n; ++i) ++sizes[find(i)];
    for (auto& [root, sz] : sizes) out.suggested_partition.push_back(sz);
    std::sort(out.suggested_partition.rbegin(), out.suggested_partition.rend());
    out.verdict = ConfluenceReport::Verdict::suspected_split;
    return out;
}

CMatrix split_demo_matrix(size_t n, int p, long digits) {
    if (n < 2) throw precondition_error("split_demo_matrix: need n >= 2");
    size_t n1 = (n + 1) / 2;
    CMatrix h(n, n, digits);
    PrecComplex one(PrecReal(1L, digits));
    for (size_t i = 0; i + 1 < n1; ++i) h.at(i, i + 1) = one;
    for (size_t i = n1; i + 1 < n; ++i) h.at(i, i + 1) = one;
    // Second block sits at a level offset of the same order as the noise.
    PrecComplex offset(PrecReal::pow10(-p, digits) * PrecReal(0.5, digits),
                       PrecReal(0L, digits));
    for (size_t i = n1; i < n; ++i) h.at(i, i) = offset;
    return h;
}

} // namespace epn
