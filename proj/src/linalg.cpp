#include "epn/linalg.hpp"

#include "epn/errors.hpp"

namespace epn {

bool CMatrix::is_tridiagonal() const {
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) {
            size_t gap = i > j ? i - j : j - i;
            if (gap > 1 && !at(i, j).is_zero()) return false;
        }
    return true;
}

bool CMatrix::equals_transpose() const {
    if (!is_square()) return false;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = i + 1; j < cols_; ++j) {
            if (!(at(i, j) - at(j, i)).is_zero()) return false;
        }
    return true;
}

PrecReal CMatrix::frobenius_norm() const {
    if (data_.empty()) return PrecReal(0L, PrecReal::kDefaultDigits);
    PrecReal acc(0L, data_.front().digits());
    for (const auto& x : data_) acc += x.norm2();
    return acc.sqrt();
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw dimension_error("matrix addition: shape mismatch");
    CMatrix r = *this;
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw dimension_error("matrix subtraction: shape mismatch");
    CMatrix r = *this;
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
}

CVector CMatrix::apply(const CVector& v) const {
    if (v.size() != cols_) throw dimension_error("matrix apply: shape mismatch");
    CVector out;
    out.reserve(rows_);
    for (size_t i = 0; i < rows_; ++i) {
        PrecComplex acc = at(i, 0) * v[0];
        for (size_t j = 1; j < cols_; ++j) acc += at(i, j) * v[j];
        out.push_back(acc);
    }
    return out;
}

LUDecomposition lu_decompose(const CMatrix& a) {
    if (!a.is_square()) throw dimension_error("LU: matrix must be square");
    size_t n = a.rows();
    LUDecomposition d;
    d.lu = a;
    d.perm.resize(n);
    for (size_t i = 0; i < n; ++i) d.perm[i] = i;

    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        PrecReal best = d.lu.at(k, k).norm2();
        for (size_t i = k + 1; i < n; ++i) {
            PrecReal m = d.lu.at(i, k).norm2();
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best.is_zero())
            throw numerical_failure("LU: zero pivot (singular at working precision)");
        if (piv != k) {
            for (size_t j = 0; j < n; ++j) std::swap(d.lu.at(piv, j), d.lu.at(k, j));
            std::swap(d.perm[piv], d.perm[k]);
            d.sign = -d.sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            PrecComplex f = d.lu.at(i, k) / d.lu.at(k, k);
            d.lu.at(i, k) = f;
            for (size_t j = k + 1; j < n; ++j)
                d.lu.at(i, j) -= f * d.lu.at(k, j);
        }
    }
    return d;
}

PrecComplex LUDecomposition::determinant() const {
    size_t n = lu.rows();
    PrecComplex det = lu.at(0, 0);
    for (size_t k = 1; k < n; ++k) det *= lu.at(k, k);
    if (sign < 0) det = -det;
    return det;
}

CVector LUDecomposition::solve(const CVector& b) const {
    size_t n = lu.rows();
    if (b.size() != n) throw dimension_error("LU solve: shape mismatch");
    CVector y;
    y.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        PrecComplex acc = b[perm[i]];
        for (size_t j = 0; j < i; ++j) acc -= lu.at(i, j) * y[j];
        y.push_back(acc);
    }
    CVector x(n, PrecComplex(PrecReal(0L, b.front().digits())));
    for (size_t i = n; i-- > 0;) {
        PrecComplex acc = y[i];
        for (size_t j = i + 1; j < n; ++j) acc -= lu.at(i, j) * x[j];
        x[i] = acc / lu.at(i, i);
    }
    return x;
}

CVector inverse_iteration(const CMatrix& a, const PrecComplex& lambda,
                          long digits, int iterations) {
    size_t n = a.rows();
    CMatrix shifted = a;
    for (size_t i = 0; i < n; ++i) shifted.at(i, i) -= lambda;

    // A shift that matches an eigenvalue too well can produce exact zero
    // pivots; nudge the diagonal just above the representation floor and
    // escalate until the factorization goes through.
    LUDecomposition lu = [&]() {
        PrecReal scale = max(PrecReal(1L, digits), a.frobenius_norm());
        PrecReal eps = scale * PrecReal::pow10(-(digits - 5), digits);
        CMatrix work = shifted;
        for (int attempt = 0;; ++attempt) {
            try {
                return lu_decompose(work);
            } catch (const numerical_failure&) {
                if (attempt >= 3) throw;
                for (size_t i = 0; i < n; ++i)
                    work.at(i, i) = shifted.at(i, i) - PrecComplex(eps, PrecReal(0L, digits));
                eps = eps * PrecReal(100000L, digits);
            }
        }
    }();

    CVector v(n, PrecComplex(PrecReal(0L, digits)));
    // Deterministic, mildly irregular start vector.
    for (size_t i = 0; i < n; ++i)
        v[i] = PrecComplex(PrecReal(static_cast<long>(2 * i + 3), digits) /
                               PrecReal(static_cast<long>(n + i + 2), digits),
                           PrecReal(static_cast<long>(i + 1), digits) /
                               PrecReal(static_cast<long>(3 * n + 1), digits));
    v = normalize(v);
    for (int it = 0; it < iterations; ++it) v = normalize(lu.solve(v));
    return v;
}

} // namespace epn
