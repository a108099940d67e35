#pragma once

#include <map>
#include <string>
#include <vector>

#include "epn/linalg.hpp"
#include "epn/multipoly.hpp"

namespace epn {

// Tridiagonal complex-symmetric model family.  Row k carries the diagonal
// entry (2k - N + 1) * i*sqrt(z); the coupling between rows j-1 and j is
// sqrt of the parameter at edge distance min(j, N-j).  Parameters are named
// innermost-first (A at the center), so the matrix is symmetric about both
// diagonals and, for odd N, the central pair of couplings shares A.
struct ModelSpec {
    int dimension = 0;                // N
    int half_size = 0;                // J = floor(N/2)
    std::vector<std::string> params;  // innermost-first

    static ModelSpec for_dimension(int n);

    // Parameter name carried by the coupling between rows j-1 and j.
    const std::string& coupling_param(int j) const;
};

// Secular polynomial s^J + P_1 s^(J-1) + ... + P_J with s = E^2, plus the
// coefficient list.  For odd N the zero eigenvalue is factored out first.
struct SecularSystem {
    ModelSpec model;
    VarSetPtr vars;                  // [s, z, params...]
    MultiPoly secular;               // monic of degree J in s
    std::vector<MultiPoly> coeffs;   // P_1..P_J (no s dependence)
    bool odd_zero_mode = false;
};

// Exact derivation via the three-term determinant recurrence, carried out in
// a ring extended by a symbol w with the rewrite w^2 -> -z (w plays i*sqrt z).
// Any surviving odd power of w signals a bug and raises invariant_violation.
SecularSystem derive_secular(const ModelSpec& model);

// [P_1(z=z0), ..., P_J(z=z0)], each a polynomial in the parameters only.
std::vector<MultiPoly> constraints_at(const SecularSystem& system, const Rational& z0);

// The Bose-Hubbard assignment: the coupling at edge distance d gets d*(N-d),
// so the outermost coupling is 1*(N-1).
std::map<std::string, Rational> bh_tuple(int n);

// Numeric N x N matrix of the model at the given parameter assignment.
CMatrix build_matrix(const ModelSpec& model,
                     const std::map<std::string, PrecReal>& tuple,
                     const PrecReal& z, long digits);

} // namespace epn
