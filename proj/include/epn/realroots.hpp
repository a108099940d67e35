#pragma once

#include <string>
#include <vector>

#include "epn/multipoly.hpp"

namespace epn {

// Certified enclosure of a single real root of a square-free polynomial.
struct IsolatingInterval {
    Rational lower;
    Rational upper;
    MultiPoly poly;   // square-free primitive integer polynomial
    std::string var;
    int sign_lower = 0;  // sign of poly at the endpoints (the certificate)
    int sign_upper = 0;
};

// Replaces p by its square-free part and returns disjoint isolating
// intervals covering every real root exactly once; completeness is proved
// by the Sturm count over (-inf, inf).
std::vector<IsolatingInterval> isolate(const MultiPoly& p, const std::string& var);

// Number of distinct real roots (Sturm count of the square-free part).
long count_real_roots(const MultiPoly& p, const std::string& var);

// Root value with |error| <= 10^(-digits); bisection into Newton's basin,
// then Newton with exact sign-change checkpoints.  `enclosure_out`, when
// given, receives the final certified rational enclosure.
PrecReal refine(const IsolatingInterval& iv, long digits,
                std::pair<Rational, Rational>* enclosure_out = nullptr);

} // namespace epn
