#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epn/multipoly.hpp"

namespace epn {

enum class PolyOp { add, sub, mul };

// Exact ring arithmetic behind a single dispatch point.
MultiPoly arith(const MultiPoly& a, const MultiPoly& b, PolyOp op);

// Dense view of p in one variable: c[k] is the coefficient of var^k as a
// polynomial in the remaining variables (over the same VarSet).
std::vector<MultiPoly> coeffs_in(const MultiPoly& p, const std::string& var);
MultiPoly assemble_in(const std::vector<MultiPoly>& coeffs, const std::string& var);

// Exact multivariate division; invariant_violation if b does not divide a.
MultiPoly divexact(const MultiPoly& a, const MultiPoly& b);

// Division test: the quotient when b divides a exactly, nullopt otherwise.
std::optional<MultiPoly> divide_exactly(const MultiPoly& a, const MultiPoly& b);

// Pseudo-remainder of a by b with respect to var:
// lc_var(b)^(deg a - deg b + 1) * a = q*b + r.  Requires deg_var b >= 0, b != 0.
MultiPoly prem(const MultiPoly& a, const MultiPoly& b, const std::string& var);

// Resultant of p and q with respect to var, computed by the subresultant
// polynomial-remainder sequence.  Both inputs need positive degree in var.
MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var);

// Discriminant with the standard sign normalization
// (-1)^(d(d-1)/2) * resultant(p, dp/dvar) / lc_var(p); requires deg >= 2.
MultiPoly discriminant(const MultiPoly& p, const std::string& var);

// GCD of univariate polynomials over Q (primitive PRS); the result is a
// primitive integer polynomial with positive leading coefficient.
MultiPoly gcd_univariate(const MultiPoly& a, const MultiPoly& b, const std::string& var);

// p / gcd(p, p'), primitive with positive leading coefficient.
MultiPoly squarefree_part(const MultiPoly& p, const std::string& var);

} // namespace epn
