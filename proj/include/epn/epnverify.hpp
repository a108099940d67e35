#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "epn/linalg.hpp"

namespace epn {

struct PerturbationSpec {
    int magnitude_exponent = 10;  // p: every entry of V has modulus <= 10^-p
    enum class Structure { complex_symmetric, dense_unstructured };
    Structure structure = Structure::complex_symmetric;
    uint64_t seed = 1;
};

// Random perturbation matrix: independent entries with uniform modulus in
// [0, 10^-p) and uniform phase; the complex-symmetric structure mirrors the
// upper triangle so H + V stays equal to its transpose exactly.
CMatrix perturbation(size_t n, const PerturbationSpec& spec, int trial, long digits);

struct EigResult {
    std::vector<PrecComplex> eigenvalues;     // sorted by (Re, Im)
    std::vector<CVector> eigenvectors;        // normalized, same order
    std::vector<PrecReal> residuals;          // ||(H - lambda) psi||
};

// Dense eigenpairs: characteristic polynomial (three-term recurrence for
// tridiagonal input, determinant interpolation on a scaled unit circle
// otherwise), simultaneous root iteration, inverse iteration, and a
// Rayleigh-quotient polish.  Residual contract per pair:
// ||(H - lambda) psi|| <= 10^(12-digits) * ||H||_F, with one automatic
// precision doubling before numerical_failure.
EigResult eig_prec(const CMatrix& h, long digits);

// rho_mn = 1 - |<psi_m|psi_n>| for normalized vectors; diagonal is zero.
std::vector<std::vector<PrecReal>> nonoverlaps(const std::vector<CVector>& vectors);

struct ConfluenceRung {
    int p = 0;
    PrecReal min_rho;   // median over trials of the per-trial minima
    PrecReal max_rho;   // median over trials of the per-trial maxima
    std::vector<PrecReal> trial_min;    // per-trial extrema, trial order
    std::vector<PrecReal> trial_max;
    std::vector<PrecReal> pair_median;  // median rho per (m<n) pair
    int dropped_trials = 0;
};

struct ConfluenceReport {
    size_t dimension = 0;
    std::vector<int> ladder;
    int trials = 0;
    uint64_t seed = 0;
    PerturbationSpec::Structure structure =
        PerturbationSpec::Structure::complex_symmetric;
    std::vector<ConfluenceRung> rungs;
    enum class Verdict { single_block, suspected_split, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    std::vector<int> suggested_partition;  // nonempty for suspected_split
};

const char* to_string(ConfluenceReport::Verdict v);

// Runs the precision ladder: for each rung p, perturbs the Hamiltonian at
// scale 10^-p, diagonalizes at 2p+20 working digits, and aggregates the
// pairwise non-overlaps.  `hamiltonian` must produce the unperturbed matrix
// at any requested precision; rung-dependent constructions (the split demo)
// also receive the rung's p.
using HamiltonianFactory = std::function<CMatrix(int p, long digits)>;
ConfluenceReport precision_sweep(const HamiltonianFactory& hamiltonian,
                                 size_t n, const std::vector<int>& ladder,
                                 int trials, uint64_t seed,
                                 PerturbationSpec::Structure structure =
                                     PerturbationSpec::Structure::complex_symmetric);

struct JordanExclusion {
    ConfluenceReport::Verdict verdict = ConfluenceReport::Verdict::inconclusive;
    // Every partition of N with >= 2 parts, when all pairs shrink.
    std::vector<std::vector<int>> excluded_partitions;
    std::vector<int> suggested_partition;
};

// Interprets a ladder report: if every pairwise rho shrinks with p, all
// multi-block Jordan structures are excluded; stalled pair-clusters instead
// suggest a block partition.  Requires >= 3 rungs.
JordanExclusion jordan_exclusion(const ConfluenceReport& report);

// All partitions of n into at least `min_parts` positive parts, descending.
std::vector<std::vector<int>> partitions_of(int n, int min_parts = 1);

// Built-in counterexample: J(n1)(0) + J(n2)(offset*10^-p) block diagonal,
// n1 = ceil(n/2).  Eigenvectors of distinct blocks stay near-orthogonal, so
// the sweep must flag it suspected-split.
CMatrix split_demo_matrix(size_t n, int p, long digits);

} // namespace epn
