#pragma once

#include <vector>

#include "epn/multipoly.hpp"

namespace epn {

struct GroebnerOptions {
    size_t max_pair_reductions = 20000;
    size_t max_basis_size = 2000;
    // Cap on the bit size of any single coefficient during the run.  The
    // desk-scale systems peak around a megabit transiently; runaway bases
    // trip the cap so the caller can switch strategies.
    size_t max_coeff_bits = 1u << 24;
    // Cap on total reduction work (coefficient-word operations).
    size_t max_reduction_work = 200ull << 20;
};

struct GroebnerStats {
    size_t pairs_considered = 0;
    size_t pairs_reduced = 0;
    size_t reductions_to_zero = 0;
    // Coefficient-word operations spent in reduction (the budget meter).
    size_t reduction_work = 0;
};

// Thrown when the run exceeds its budget; carries the partial basis so the
// caller can switch to the resultant chain.
struct groebner_budget_exceeded : budget_exceeded {
    explicit groebner_budget_exceeded(const std::string& what,
                                      std::vector<MultiPoly> partial)
        : budget_exceeded(what), partial_basis(std::move(partial)) {}
    std::vector<MultiPoly> partial_basis;
};

// Reduced Groebner basis under lex order for the given variable order
// (vars[0] is the most significant, i.e. eliminated first).  Elements are
// primitive integer polynomials with positive leading coefficients, sorted
// by leading monomial; this makes the reduced basis canonical.
std::vector<MultiPoly> groebner_lex(const std::vector<MultiPoly>& system,
                                    const VarSetPtr& order,
                                    const GroebnerOptions& opts = {},
                                    GroebnerStats* stats = nullptr);

// Full normal form of p modulo the (not necessarily Groebner) set G.
MultiPoly normal_form(const MultiPoly& p, const std::vector<MultiPoly>& g);

} // namespace epn
