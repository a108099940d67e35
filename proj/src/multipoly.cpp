#include "epn/multipoly.hpp"

#include <algorithm>
#include <sstream>

namespace epn {

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (size_t i = 0; i < names_.size(); ++i)
        for (size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j])
                throw structural_error("duplicate variable name: " + names_[i]);
}

size_t VarSet::index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    throw structural_error("unknown variable: " + name);
}

bool VarSet::contains(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

VarSetPtr make_vars(std::vector<std::string> names) {
    return std::make_shared<const VarSet>(std::move(names));
}

MultiPoly MultiPoly::constant(VarSetPtr vars, const Rational& c) {
    MultiPoly p(std::move(vars));
    if (c != 0) p.terms_.emplace(Expo(p.vars_->size(), 0), c);
    return p;
}

MultiPoly MultiPoly::variable(VarSetPtr vars, const std::string& name, uint32_t power) {
    MultiPoly p(std::move(vars));
    Expo e(p.vars_->size(), 0);
    e[p.vars_->index(name)] = power;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

MultiPoly MultiPoly::from_terms(VarSetPtr vars, TermMap terms) {
    MultiPoly p(std::move(vars));
    for (auto& [e, c] : terms) {
        if (e.size() != p.vars_->size())
            throw structural_error("exponent vector length mismatch");
        if (c != 0) p.terms_.emplace(e, c);
    }
    return p;
}

bool MultiPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Expo& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](uint32_t x) { return x == 0; });
}

Rational MultiPoly::constant_value() const {
    if (!is_constant()) throw precondition_error("polynomial is not constant");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

long MultiPoly::degree(const std::string& var) const {
    return degree(vars_->index(var));
}

long MultiPoly::degree(size_t var_index) const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max<long>(d, e[var_index]);
    return d;
}

long MultiPoly::total_degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) {
        long t = 0;
        for (uint32_t x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

const Expo& MultiPoly::leading_monomial() const {
    if (terms_.empty()) throw precondition_error("leading term of zero polynomial");
    return terms_.rbegin()->first;
}

const Rational& MultiPoly::leading_coeff() const {
    if (terms_.empty()) throw precondition_error("leading term of zero polynomial");
    return terms_.rbegin()->second;
}

void MultiPoly::check_same_vars(const MultiPoly& o) const {
    if (!vars_ || !o.vars_ || !(*vars_ == *o.vars_))
        throw structural_error("operands use different variable sets");
}

void MultiPoly::add_term(const Expo& e, const Rational& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    check_same_vars(o);
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    check_same_vars(o);
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    check_same_vars(o);
    MultiPoly r(vars_);
    Expo sum(vars_->size(), 0);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (size_t i = 0; i < sum.size(); ++i) sum[i] = ea[i] + eb[i];
            r.add_term(sum, ca * cb);
        }
    }
    return r;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r(vars_);
    if (c == 0) return r;
    for (const auto& [e, q] : terms_) r.terms_.emplace(e, q * c);
    return r;
}

MultiPoly MultiPoly::times_term(const Rational& c, const Expo& e) const {
    MultiPoly r(vars_);
    if (c == 0) return r;
    Expo sum(vars_->size(), 0);
    for (const auto& [ea, ca] : terms_) {
        for (size_t i = 0; i < sum.size(); ++i) sum[i] = ea[i] + e[i];
        r.terms_.emplace(sum, ca * c);
    }
    return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    if (!vars_ || !o.vars_) return is_zero() && o.is_zero();
    if (!(*vars_ == *o.vars_)) return false;
    return terms_ == o.terms_;
}

MultiPoly MultiPoly::coeff_of(const std::string& var, uint32_t k) const {
    size_t vi = vars_->index(var);
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[vi] != k) continue;
        Expo e2 = e;
        e2[vi] = 0;
        r.terms_.emplace(std::move(e2), c);
    }
    return r;
}

MultiPoly MultiPoly::substitute(const std::string& var, const Rational& value) const {
    size_t vi = vars_->index(var);
    MultiPoly r(vars_);
    std::vector<Rational> powers{Rational(1)};
    for (const auto& [e, c] : terms_) {
        while (powers.size() <= e[vi]) powers.push_back(powers.back() * value);
        Expo e2 = e;
        e2[vi] = 0;
        r.add_term(e2, c * powers[e[vi]]);
    }
    return r;
}

MultiPoly MultiPoly::substitute(const std::string& var, const MultiPoly& value) const {
    check_same_vars(value);
    size_t vi = vars_->index(var);
    long d = degree(vi);
    if (d <= 0) return *this;
    // Horner in var with polynomial coefficients.
    std::vector<MultiPoly> coeffs(static_cast<size_t>(d) + 1, MultiPoly(vars_));
    for (const auto& [e, c] : terms_) {
        Expo e2 = e;
        e2[vi] = 0;
        coeffs[e[vi]].add_term(e2, c);
    }
    MultiPoly acc = coeffs.back();
    for (long k = d - 1; k >= 0; --k) acc = acc * value + coeffs[static_cast<size_t>(k)];
    return acc;
}

MultiPoly MultiPoly::derivative(const std::string& var) const {
    size_t vi = vars_->index(var);
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[vi] == 0) continue;
        Expo e2 = e;
        e2[vi] -= 1;
        r.terms_.emplace(std::move(e2), c * Rational(e[vi]));
    }
    return r;
}

std::pair<Rational, MultiPoly> MultiPoly::content_primitive() const {
    if (is_zero()) throw precondition_error("content of zero polynomial");
    Integer den_lcm(1);
    for (const auto& [e, c] : terms_)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    Integer num_gcd(0);
    for (const auto& [e, c] : terms_) {
        Integer scaled = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    Rational content(num_gcd, den_lcm);
    mpq_canonicalize(content.get_mpq_t());
    if (sign(leading_coeff()) < 0) content = -content;
    MultiPoly prim(vars_);
    Rational inv = Rational(1) / content;
    for (const auto& [e, c] : terms_) prim.terms_.emplace(e, c * inv);
    return {content, prim};
}

namespace {

// Dense view in one variable; index = degree.  Shared by evaluation here
// and by the elimination algebra in polyops.
std::vector<MultiPoly> coeff_vector(const MultiPoly& p, size_t vi) {
    long d = p.degree(vi);
    std::vector<MultiPoly> out(static_cast<size_t>(std::max<long>(d, 0)) + 1,
                               MultiPoly(p.vars()));
    for (const auto& [e, c] : p.terms()) {
        Expo e2 = e;
        e2[vi] = 0;
        out[e[vi]] += MultiPoly::from_terms(p.vars(), {{e2, c}});
    }
    return out;
}

PrecComplex eval_rec(const MultiPoly& p,
                     const std::vector<PrecComplex>& values,
                     size_t from, long digits) {
    const auto& vars = *p.vars();
    size_t vi = vars.size();
    for (size_t i = from; i < vars.size(); ++i) {
        if (p.degree(i) > 0) { vi = i; break; }
    }
    if (vi == vars.size())
        return PrecComplex(PrecReal(p.is_zero() ? Rational(0) : p.constant_value(), digits));
    auto coeffs = coeff_vector(p, vi);
    PrecComplex acc = eval_rec(coeffs.back(), values, vi + 1, digits);
    for (size_t k = coeffs.size() - 1; k-- > 0;) {
        acc = acc * values[vi] + eval_rec(coeffs[k], values, vi + 1, digits);
    }
    return acc;
}

} // namespace

PrecComplex MultiPoly::eval_prec(const std::map<std::string, PrecComplex>& assignment,
                                 long digits) const {
    std::vector<PrecComplex> values(vars_->size(), PrecComplex(PrecReal(0L, digits)));
    for (size_t i = 0; i < vars_->size(); ++i) {
        auto it = assignment.find(vars_->name(i));
        if (it == assignment.end()) {
            if (degree(i) > 0)
                throw structural_error("eval_prec: missing variable " + vars_->name(i));
            continue;
        }
        values[i] = PrecComplex(it->second.re().round_to(digits),
                                it->second.im().round_to(digits));
    }
    return eval_rec(*this, values, 0, digits);
}

PrecComplex MultiPoly::eval_prec(const std::map<std::string, PrecReal>& assignment,
                                 long digits) const {
    std::map<std::string, PrecComplex> cplx;
    for (const auto& [k, v] : assignment)
        cplx.emplace(k, PrecComplex(v, PrecReal(0L, digits)));
    return eval_prec(cplx, digits);
}

Rational MultiPoly::eval_exact(const std::map<std::string, Rational>& assignment) const {
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = assignment.find(vars_->name(i));
            if (it == assignment.end())
                throw structural_error("eval_exact: missing variable " + vars_->name(i));
            t *= pow_rat(it->second, e[i]);
        }
        acc += t;
    }
    return acc;
}

MultiPoly MultiPoly::convert(const VarSetPtr& newvars) const {
    std::vector<long> map_idx(vars_ ? vars_->size() : 0, -1);
    if (vars_) {
        for (size_t i = 0; i < vars_->size(); ++i) {
            if (newvars->contains(vars_->name(i)))
                map_idx[i] = static_cast<long>(newvars->index(vars_->name(i)));
            else if (degree(i) > 0)
                throw structural_error("convert: variable " + vars_->name(i) +
                                       " not present in target set");
        }
    }
    MultiPoly r(newvars);
    for (const auto& [e, c] : terms_) {
        Expo e2(newvars->size(), 0);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) e2[static_cast<size_t>(map_idx[i])] = e[i];
        r.add_term(e2, c);
    }
    return r;
}

std::vector<Rational> MultiPoly::univariate_coeffs(const std::string& var) const {
    size_t vi = vars_->index(var);
    long d = degree(vi);
    std::vector<Rational> out(static_cast<size_t>(std::max<long>(d, 0)) + 1, Rational(0));
    for (const auto& [e, c] : terms_) {
        for (size_t i = 0; i < e.size(); ++i)
            if (i != vi && e[i] != 0)
                throw precondition_error("polynomial is not univariate in " + var);
        out[e[vi]] = c;
    }
    return out;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << it->second.get_str();
        for (size_t i = 0; i < it->first.size(); ++i) {
            uint32_t e = it->first[i];
            if (e == 0) continue;
            os << " * " << vars_->name(i);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Expression parser.

namespace {

struct Parser {
    const std::string& text;
    size_t pos = 0;
    const VarSetPtr& vars;

    explicit Parser(const std::string& t, const VarSetPtr& v) : text(t), vars(v) {}

    void skip_ws() {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& what) {
        throw structural_error("parse error at offset " + std::to_string(pos) +
                               ": " + what);
    }

    MultiPoly parse_expr() {
        MultiPoly acc = parse_term();
        for (;;) {
            if (eat('+')) acc += parse_term();
            else if (eat('-')) acc -= parse_term();
            else return acc;
        }
    }

    MultiPoly parse_term() {
        MultiPoly acc = parse_factor();
        for (;;) {
            if (eat('*')) {
                acc *= parse_factor();
            } else if (eat('/')) {
                MultiPoly d = parse_factor();
                if (!d.is_constant() || d.is_zero())
                    fail("division only by nonzero constants");
                acc = acc.scaled(Rational(1) / d.constant_value());
            } else {
                return acc;
            }
        }
    }

    MultiPoly parse_factor() {
        int neg = 0;
        for (;;) {
            if (eat('-')) ++neg;
            else if (eat('+')) continue;
            else break;
        }
        MultiPoly base = parse_atom();
        if (eat('^')) {
            skip_ws();
            long e = parse_uint();
            MultiPoly r = MultiPoly::constant(vars, Rational(1));
            MultiPoly b = base;
            while (e > 0) {
                if (e & 1) r *= b;
                e >>= 1;
                if (e) b *= b;
            }
            base = r;
        }
        return (neg % 2) ? -base : base;
    }

    long parse_uint() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == start) fail("expected integer exponent");
        return std::stol(text.substr(start, pos - start));
    }

    MultiPoly parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            MultiPoly inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            return MultiPoly::constant(vars, Rational(text.substr(start, pos - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                    text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            if (!vars->contains(name)) fail("unknown variable '" + name + "'");
            return MultiPoly::variable(vars, name);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

MultiPoly parse_poly(const std::string& text, const VarSetPtr& vars) {
    Parser p(text, vars);
    MultiPoly r = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw structural_error("trailing characters in polynomial expression");
    return r;
}

} // namespace epn
