#pragma once

#include <vector>

#include "epn/secular.hpp"
#include "epn/solve.hpp"

namespace epn {

enum class RootClass { real_positive, real_negative, complex_member };

// Roots of the secular polynomial at one z, with their energy census.
struct SpectrumSample {
    PrecReal z;
    std::vector<PrecComplex> roots;   // s_1..s_J sorted by real part
    std::vector<RootClass> classes;
    bool odd_zero_mode = false;
    bool ambiguous = false;           // a root sat too close to a class border
    int real_energies = 0;            // census; totals N
    int imaginary_energies = 0;
    int complex_energies = 0;
};

struct EP2Boundary {
    enum class Kind { merge_and_complexify, unfolding, real_crossing_zero, epn };
    PrecReal z_star;
    PrecReal s_star;   // colliding root value (0 for zero crossings)
    Kind kind;
    bool certified = false;  // exact tuple coefficients vs rounded numeric ones
};

struct IntervalCensus {
    PrecReal lower, upper;
    int real_energies = 0;
    int imaginary_energies = 0;
    int complex_energies = 0;
    bool consistent = true;  // the three probe points agreed
};

struct IntervalReport {
    std::vector<PrecReal> boundaries;
    std::vector<IntervalCensus> intervals;
};

struct SweepResult {
    std::vector<SpectrumSample> samples;
    std::vector<EP2Boundary> boundaries;
    IntervalReport report;
};

const char* to_string(EP2Boundary::Kind k);
char class_code(RootClass c);

// Secular roots at numeric z; classification thresholds are precision
// relative, and a root within a factor 4 of the threshold marks the sample
// ambiguous (re-sample at higher digits).
SpectrumSample sample(const SecularSystem& sys,
                      const std::map<std::string, PrecReal>& values,
                      const PrecReal& z, long digits);

// Boundary scan over [zmin, zmax]: discriminant zeros (root collisions) and
// constant-term zeros (s = 0 crossings), via exact Sturm isolation on the
// substituted secular polynomial.  Numeric tuples are rounded to dyadic
// rationals first, so their boundaries carry certified=false.
std::vector<EP2Boundary> ep2_boundaries(const SecularSystem& sys,
                                        const ParameterTuple& tuple,
                                        const std::vector<MultiPoly>& constraints,
                                        const Rational& zmin, const Rational& zmax,
                                        long digits);

// Grid sweep with adaptive densification near boundaries and a per-interval
// energy census between consecutive boundaries.
SweepResult sweep(const SecularSystem& sys, const ParameterTuple& tuple,
                  const std::vector<MultiPoly>& constraints,
                  const Rational& zmin, const Rational& zmax, int grid,
                  long digits);

} // namespace epn
