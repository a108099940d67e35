#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "epn/errors.hpp"
#include "epn/precreal.hpp"
#include "epn/rational.hpp"

namespace epn {

// Ordered variable alphabet.  The order is load-bearing: monomial
// comparisons are lexicographic with position 0 most significant, and
// elimination orders are realized by reordering the set.
class VarSet {
public:
    explicit VarSet(std::vector<std::string> names);

    size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(size_t i) const { return names_.at(i); }
    size_t index(const std::string& name) const;
    bool contains(const std::string& name) const;

    bool operator==(const VarSet& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_vars(std::vector<std::string> names);

using Expo = std::vector<uint32_t>;

// Lexicographic monomial order, position 0 most significant.
struct MonoLess {
    bool operator()(const Expo& a, const Expo& b) const {
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    }
};

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept normalized: no zero coefficients are stored.
class MultiPoly {
public:
    using TermMap = std::map<Expo, Rational, MonoLess>;

    MultiPoly() = default;
    explicit MultiPoly(VarSetPtr vars) : vars_(std::move(vars)) {}

    static MultiPoly zero(VarSetPtr vars) { return MultiPoly(std::move(vars)); }
    static MultiPoly constant(VarSetPtr vars, const Rational& c);
    static MultiPoly variable(VarSetPtr vars, const std::string& name, uint32_t power = 1);
    static MultiPoly from_terms(VarSetPtr vars, TermMap terms);

    const VarSetPtr& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Value of a constant polynomial (zero poly -> 0).
    Rational constant_value() const;

    long degree(const std::string& var) const;
    long degree(size_t var_index) const;
    long total_degree() const;

    // Leading term under the VarSet lex order; precondition: nonzero.
    const Expo& leading_monomial() const;
    const Rational& leading_coeff() const;

    MultiPoly operator-() const;
    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly scaled(const Rational& c) const;
    // Multiplies by c * monomial(e).
    MultiPoly times_term(const Rational& c, const Expo& e) const;

    bool operator==(const MultiPoly& o) const;
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    // Coefficient of var^k, as a polynomial with the same VarSet.
    MultiPoly coeff_of(const std::string& var, uint32_t k) const;

    MultiPoly substitute(const std::string& var, const Rational& value) const;
    MultiPoly substitute(const std::string& var, const MultiPoly& value) const;

    MultiPoly derivative(const std::string& var) const;

    // p = content * primitive, primitive having coprime integer coefficients
    // and positive leading coefficient.  Precondition: p != 0.
    std::pair<Rational, MultiPoly> content_primitive() const;

    // Horner-style evaluation at the requested precision; the assignment
    // must cover every variable that actually occurs.
    PrecComplex eval_prec(const std::map<std::string, PrecComplex>& assignment,
                          long digits) const;
    PrecComplex eval_prec(const std::map<std::string, PrecReal>& assignment,
                          long digits) const;
    // Exact rational evaluation.
    Rational eval_exact(const std::map<std::string, Rational>& assignment) const;

    // Re-expresses the polynomial over another VarSet, which must contain
    // every variable occurring with positive degree.
    MultiPoly convert(const VarSetPtr& newvars) const;

    // Dense rational coefficients (ascending degree) of a polynomial that
    // involves no variable other than `var`.
    std::vector<Rational> univariate_coeffs(const std::string& var) const;

    // Canonical text form: lex-descending terms joined by " + ", each term
    // "coeff * v^e * ...".  Bit-exact across runs; used in golden files.
    std::string str() const;

private:
    void check_same_vars(const MultiPoly& o) const;
    void add_term(const Expo& e, const Rational& c);

    VarSetPtr vars_;
    TermMap terms_;
};

// Parses an arithmetic expression (+, -, *, /, ^, parentheses, integer and
// rational literals, variable names from `vars`) into a MultiPoly.
// Accepts the canonical form emitted by MultiPoly::str as a subset.
MultiPoly parse_poly(const std::string& text, const VarSetPtr& vars);

} // namespace epn
