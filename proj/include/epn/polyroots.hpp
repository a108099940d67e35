#pragma once

#include <vector>

#include "epn/precreal.hpp"

namespace epn {

// All complex roots of sum_k coeffs[k] x^k by simultaneous Weierstrass
// iteration plus per-root Newton polish.  Coefficients ascending; the
// leading coefficient must be nonzero.  Results are unordered and
// UNCERTIFIED: accuracy is limited by root conditioning at the working
// precision.  Exact zero leading coefficients are trimmed; exact zero
// constant coefficients yield exact zero roots.
std::vector<PrecComplex> all_roots(const std::vector<PrecComplex>& coeffs,
                                   long digits, long max_iter = 6000);

std::vector<PrecComplex> all_roots(const std::vector<PrecReal>& coeffs,
                                   long digits, long max_iter = 6000);

// Horner evaluation.
PrecComplex eval_poly(const std::vector<PrecComplex>& coeffs, const PrecComplex& x);

} // namespace epn
