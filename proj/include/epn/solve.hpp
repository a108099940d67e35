#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epn/multipoly.hpp"
#include "epn/secular.hpp"

namespace epn {

// Real algebraic number: square-free defining polynomial plus an isolating
// interval (minimal once the defining polynomial is irreducible).
struct AlgebraicHandle {
    MultiPoly defining_poly;
    std::string var;
    Rational lower;
    Rational upper;
};

struct TupleValue {
    enum class Kind { exact, algebraic, numeric };
    Kind kind = Kind::numeric;
    Rational exact;                            // Kind::exact
    std::optional<AlgebraicHandle> algebraic;  // Kind::algebraic
    PrecComplex approx;                        // always present
    bool real = true;
};

// One candidate parameter assignment with its residual certificate.
struct ParameterTuple {
    std::map<std::string, TupleValue> values;
    long digits = 0;        // stated precision of `approx` values
    PrecReal residual;      // max |P_m| over the constraint system
    bool residual_exact_zero = false;
    enum class Reality { all_real, complex } reality = Reality::all_real;
    bool certified = false;
    std::string label;

    bool is_real() const { return reality == Reality::all_real; }
    std::map<std::string, PrecReal> real_values() const;
    std::map<std::string, PrecComplex> complex_values() const;
};

struct EliminationResult {
    enum class Path { groebner, resultant_chain };

    std::string kept_var;
    // Square-free primitive eliminant with the exact Bose-Hubbard root
    // divided out (when present); its roots parameterize the non-BH branch.
    MultiPoly eliminant;
    long degree = 0;
    // Before BH-root removal (already square-free and primitive).
    MultiPoly full_eliminant;
    bool bh_root_removed = false;
    Rational bh_root_value;
    Path provenance = Path::groebner;

    // Lifting data.  solve_order starts at the kept variable and walks back
    // up the elimination order; lift_polys[v] are polynomials involving v
    // and already-solved variables only; closed_form[v] (when present)
    // expresses v exactly as num(poly in solved vars) / den.
    std::vector<std::string> solve_order;
    std::map<std::string, std::vector<MultiPoly>> lift_polys;
    std::map<std::string, std::pair<MultiPoly, Rational>> closed_form;

    std::string structure_note;
    std::vector<std::string> extension_failures;
};

struct ResidualReport {
    PrecReal max_residual;
    bool exact_zero = false;
    bool pass = false;
    long digits = 0;
};

enum class SolveMethod { automatic, groebner, resultant_chain };

struct SolveOutcome {
    int dimension = 0;
    long digits = 0;
    SecularSystem system;                 // symbolic, z kept
    std::vector<MultiPoly> constraints;   // P_m at z = 1
    EliminationResult elimination;
    std::vector<ParameterTuple> tuples;
    std::vector<std::string> diagnostics;
};

// Iterated pairwise resultants eliminating every variable of the system's
// VarSet except `keep` (in VarSet order).  The output eliminant is
// square-free and primitive; spurious factors are left for extension checks.
EliminationResult eliminate_by_resultants(const std::vector<MultiPoly>& system,
                                          const std::string& keep);

// Residual certificate: max_m |P_m(assignment)| at the given precision.
// Pass threshold is 10^(20-digits).
ResidualReport certify(const ParameterTuple& tuple,
                       const std::vector<MultiPoly>& system, long digits);
ResidualReport certify_assignment(const std::map<std::string, PrecComplex>& assignment,
                                  const std::vector<MultiPoly>& system, long digits);

// Multivariate Newton with exact symbolic Jacobian and residual-damped
// steps; refines `start` until the residual reaches the precision floor.
std::map<std::string, PrecReal> newton_refine(const std::vector<MultiPoly>& system,
                                              const std::vector<std::string>& unknowns,
                                              const std::map<std::string, PrecReal>& start,
                                              long digits);

// Parameter values of a tuple re-refined to `digits` decimal digits against
// the given constraint system (identity for exact tuples).
std::map<std::string, PrecReal> values_at_digits(const ParameterTuple& tuple,
                                                 const std::vector<MultiPoly>& constraints,
                                                 long digits);

// Full pipeline at z = 1: derive constraints, eliminate (Groebner with a
// resultant-chain fallback), isolate and refine real roots, back-substitute,
// Newton-polish, certify.  The BH tuple is always present and exact;
// complex eliminant branches are listed but never refined.
SolveOutcome solve_epn(int n, long digits, SolveMethod method = SolveMethod::automatic);

} // namespace epn
