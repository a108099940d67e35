#pragma once

#include <vector>

#include "epn/precreal.hpp"

namespace epn {

using CVector = std::vector<PrecComplex>;

// Dense row-major complex matrix at uniform working precision.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(size_t rows, size_t cols, long digits)
        : rows_(rows), cols_(cols),
          data_(rows * cols, PrecComplex(PrecReal(0L, digits))) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    PrecComplex& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const PrecComplex& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    bool is_square() const { return rows_ == cols_; }
    // True when all entries off the three central diagonals vanish.
    bool is_tridiagonal() const;
    // Plain (non-conjugating) transpose equality.
    bool equals_transpose() const;

    PrecReal frobenius_norm() const;

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CVector apply(const CVector& v) const;

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<PrecComplex> data_;
};

// PA = LU with partial pivoting by modulus.  Throws numerical_failure when a
// pivot column is exactly zero (matrix singular at working precision).
struct LUDecomposition {
    CMatrix lu;                // combined L (unit lower) and U
    std::vector<size_t> perm;  // row permutation
    int sign = 1;

    PrecComplex determinant() const;
    CVector solve(const CVector& b) const;
};

LUDecomposition lu_decompose(const CMatrix& a);

// Minimal-eigendirection estimate: inverse iteration for (A - lambda*I).
// Returns a normalized vector; iterations controls the number of solves.
CVector inverse_iteration(const CMatrix& a, const PrecComplex& lambda,
                          long digits, int iterations = 3);

} // namespace epn
