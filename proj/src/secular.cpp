#include "epn/secular.hpp"

#include <algorithm>

namespace epn {

ModelSpec ModelSpec::for_dimension(int n) {
    if (n < 2) throw precondition_error("model dimension must be >= 2");
    ModelSpec m;
    m.dimension = n;
    m.half_size = n / 2;
    for (int i = 0; i < m.half_size; ++i)
        m.params.push_back(std::string(1, static_cast<char>('A' + i)));
    if (m.half_size > 26)
        throw precondition_error("dimension too large for the parameter alphabet");
    return m;
}

const std::string& ModelSpec::coupling_param(int j) const {
    int dist = std::min(j, dimension - j);  // edge distance, 1..J
    return params.at(static_cast<size_t>(half_size - dist));
}

namespace {

// Applies the rewrite w^2 -> -z to every term.
MultiPoly reduce_w(const MultiPoly& p, size_t wi, size_t zi) {
    MultiPoly::TermMap out;
    for (const auto& [e, c] : p.terms()) {
        if (e[wi] < 2) {
            auto it = out.find(e);
            if (it == out.end()) out.emplace(e, c);
            else it->second += c;
            continue;
        }
        Expo e2 = e;
        uint32_t half = e2[wi] / 2;
        e2[wi] %= 2;
        e2[zi] += half;
        Rational c2 = (half % 2) ? -c : c;
        auto it = out.find(e2);
        if (it == out.end()) out.emplace(std::move(e2), c2);
        else it->second += c2;
    }
    return MultiPoly::from_terms(p.vars(), std::move(out));
}

} // namespace

SecularSystem derive_secular(const ModelSpec& model) {
    int n = model.dimension;
    int j = model.half_size;

    // Internal symbols carry a prefix so they cannot collide with the
    // parameter alphabet (N >= 10 owns "E").
    std::vector<std::string> work_names{"_E", "_w", "z"};
    work_names.insert(work_names.end(), model.params.begin(), model.params.end());
    VarSetPtr wvars = make_vars(work_names);
    size_t wi = wvars->index("_w");
    size_t zi = wvars->index("z");

    MultiPoly e = MultiPoly::variable(wvars, "_E");
    MultiPoly w = MultiPoly::variable(wvars, "_w");

    // Leading principal minors of (E*I - H).
    MultiPoly prev = MultiPoly::constant(wvars, Rational(1));  // D_0
    MultiPoly prev2 = MultiPoly::zero(wvars);                  // D_-1
    for (int k = 1; k <= n; ++k) {
        MultiPoly diag = w.scaled(Rational(2 * (k - 1) - n + 1));
        MultiPoly cur = reduce_w((e - diag) * prev, wi, zi);
        if (k >= 2) {
            MultiPoly csq = MultiPoly::variable(wvars, model.coupling_param(k - 1));
            cur -= reduce_w(csq * prev2, wi, zi);
        }
        prev2 = prev;
        prev = cur;
    }

    for (const auto& [expo, c] : prev.terms())
        if (expo[wi] != 0)
            throw invariant_violation("secular derivation: odd power of w survived");

    size_t ei = wvars->index("_E");
    bool odd = (n % 2) != 0;
    MultiPoly::TermMap reduced;
    for (const auto& [expo, c] : prev.terms()) {
        Expo e2 = expo;
        if (odd) {
            if (e2[ei] == 0)
                throw invariant_violation("secular derivation: zero mode missing at odd N");
            e2[ei] -= 1;
        }
        if (e2[ei] % 2 != 0)
            throw invariant_violation("secular derivation: odd power of E survived");
        reduced.emplace(std::move(e2), c);
    }

    std::vector<std::string> out_names{"s", "z"};
    out_names.insert(out_names.end(), model.params.begin(), model.params.end());
    VarSetPtr svars = make_vars(out_names);

    MultiPoly::TermMap sterms;
    for (const auto& [expo, c] : reduced) {
        Expo e2(svars->size(), 0);
        e2[0] = expo[ei] / 2;       // s
        e2[1] = expo[zi];           // z
        for (size_t t = 0; t < model.params.size(); ++t)
            e2[2 + t] = expo[3 + t];
        sterms.emplace(std::move(e2), c);
    }

    SecularSystem sys;
    sys.model = model;
    sys.vars = svars;
    sys.secular = MultiPoly::from_terms(svars, std::move(sterms));
    sys.odd_zero_mode = odd;

    if (sys.secular.degree("s") != j ||
        sys.secular.coeff_of("s", static_cast<uint32_t>(j)).constant_value() != 1)
        throw invariant_violation("secular polynomial is not monic of degree J in s");

    for (int m = 1; m <= j; ++m)
        sys.coeffs.push_back(sys.secular.coeff_of("s", static_cast<uint32_t>(j - m)));
    return sys;
}

std::vector<MultiPoly> constraints_at(const SecularSystem& system, const Rational& z0) {
    std::vector<MultiPoly> out;
    out.reserve(system.coeffs.size());
    for (const auto& p : system.coeffs) out.push_back(p.substitute("z", z0));
    return out;
}

std::map<std::string, Rational> bh_tuple(int n) {
    ModelSpec m = ModelSpec::for_dimension(n);
    std::map<std::string, Rational> out;
    for (int i = 0; i < m.half_size; ++i) {
        long d = m.half_size - i;  // edge distance of this parameter
        out[m.params[static_cast<size_t>(i)]] = Rational(d * (n - d));
    }
    return out;
}

CMatrix build_matrix(const ModelSpec& model,
                     const std::map<std::string, PrecReal>& tuple,
                     const PrecReal& z, long digits) {
    if (digits < 1) throw precondition_error("build_matrix: digits must be >= 1");
    int n = model.dimension;
    for (const auto& p : model.params)
        if (!tuple.count(p))
            throw structural_error("build_matrix: missing parameter " + p);

    CMatrix h(static_cast<size_t>(n), static_cast<size_t>(n), digits);
    PrecComplex sq = sqrt_prec(z, digits);
    PrecComplex i_sq(-sq.im(), sq.re());  // i * sqrt(z)
    for (int k = 0; k < n; ++k) {
        PrecComplex scale(PrecReal(static_cast<long>(2 * k - n + 1), digits),
                          PrecReal(0L, digits));
        h.at(static_cast<size_t>(k), static_cast<size_t>(k)) = scale * i_sq;
    }
    for (int j = 1; j <= n - 1; ++j) {
        PrecComplex c = sqrt_prec(tuple.at(model.coupling_param(j)), digits);
        h.at(static_cast<size_t>(j - 1), static_cast<size_t>(j)) = c;
        h.at(static_cast<size_t>(j), static_cast<size_t>(j - 1)) = c;
    }
    return h;
}

} // namespace epn
