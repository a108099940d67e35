#include "epn/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace epn {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fnv1a64_hex(const std::string& data) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string cache_path(const std::string& dir, const std::string& kind,
                       const json& key) {
    std::string stem = kind;
    for (auto it = key.begin(); it != key.end(); ++it) {
        stem += "_" + it.key() + "-";
        if (it->is_string()) stem += it->get<std::string>();
        else stem += it->dump();
    }
    for (auto& c : stem)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
            c = '_';
    return (fs::path(dir) / (stem + ".json")).string();
}

void cache_store(const std::string& dir, const CacheEntry& entry) {
    fs::create_directories(dir);
    json doc;
    doc["version"] = 1;
    doc["tool_version"] = entry.tool_version;
    doc["kind"] = entry.kind;
    doc["key"] = entry.key;
    doc["payload"] = entry.payload;
    doc["hash"] = fnv1a64_hex(entry.payload.dump());

    std::string path = cache_path(dir, entry.kind, entry.key);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw structural_error("cannot write cache file " + tmp);
        out << doc.dump(1) << "\n";
    }
    fs::rename(tmp, path);
}

std::optional<CacheEntry> cache_load(const std::string& dir, const std::string& kind,
                                     const json& key) {
    std::string path = cache_path(dir, kind, key);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw structural_error("corrupt cache file " + path + ": " + e.what());
    }
    CacheEntry entry;
    entry.kind = doc.at("kind").get<std::string>();
    entry.key = doc.at("key");
    entry.payload = doc.at("payload");
    entry.hash = doc.at("hash").get<std::string>();
    entry.tool_version = doc.at("tool_version").get<std::string>();
    if (entry.hash != fnv1a64_hex(entry.payload.dump()))
        throw structural_error("cache hash mismatch in " + path);
    return entry;
}

// ---------------------------------------------------------------------------

namespace {

std::string rat_str(const Rational& q) { return q.get_str(); }

Rational rat_parse(const std::string& s) { return rational_from_string(s); }

json precreal_json(const PrecReal& x) {
    json j;
    j["value"] = rat_str(x.to_rational());
    j["digits"] = x.digits();
    return j;
}

PrecReal precreal_parse(const json& j) {
    return PrecReal(rat_parse(j.at("value").get<std::string>()),
                    j.at("digits").get<long>());
}

json cplx_json(const PrecComplex& x) {
    json j;
    j["re"] = rat_str(x.re().to_rational());
    j["im"] = rat_str(x.im().to_rational());
    j["digits"] = x.digits();
    return j;
}

PrecComplex cplx_parse(const json& j) {
    long d = j.at("digits").get<long>();
    return {PrecReal(rat_parse(j.at("re").get<std::string>()), d),
            PrecReal(rat_parse(j.at("im").get<std::string>()), d)};
}

json vars_json(const VarSetPtr& v) {
    json out = json::array();
    for (const auto& n : v->names()) out.push_back(n);
    return out;
}

VarSetPtr vars_parse(const json& j) {
    std::vector<std::string> names;
    for (const auto& n : j) names.push_back(n.get<std::string>());
    return make_vars(std::move(names));
}

} // namespace

json to_json(const SecularSystem& sys) {
    json j;
    j["dimension"] = sys.model.dimension;
    j["vars"] = vars_json(sys.vars);
    j["secular"] = sys.secular.str();
    json coeffs = json::array();
    for (const auto& p : sys.coeffs) coeffs.push_back(p.str());
    j["coeffs"] = coeffs;
    j["odd_zero_mode"] = sys.odd_zero_mode;
    return j;
}

SecularSystem secular_from_json(const json& j) {
    SecularSystem sys;
    sys.model = ModelSpec::for_dimension(j.at("dimension").get<int>());
    sys.vars = vars_parse(j.at("vars"));
    sys.secular = parse_poly(j.at("secular").get<std::string>(), sys.vars);
    for (const auto& c : j.at("coeffs"))
        sys.coeffs.push_back(parse_poly(c.get<std::string>(), sys.vars));
    sys.odd_zero_mode = j.at("odd_zero_mode").get<bool>();
    return sys;
}

json to_json(const SolveOutcome& outcome) {
    json j;
    j["dimension"] = outcome.dimension;
    j["digits"] = outcome.digits;
    j["system"] = to_json(outcome.system);
    json cons = json::array();
    for (const auto& p : outcome.constraints) cons.push_back(p.str());
    j["constraint_vars"] = vars_json(outcome.constraints.front().vars());
    j["constraints"] = cons;

    const auto& e = outcome.elimination;
    json ej;
    ej["kept_var"] = e.kept_var;
    ej["eliminant"] = e.eliminant.str();
    ej["degree"] = e.degree;
    ej["full_eliminant"] = e.full_eliminant.str();
    ej["bh_root_removed"] = e.bh_root_removed;
    ej["bh_root_value"] = rat_str(e.bh_root_value);
    ej["provenance"] =
        e.provenance == EliminationResult::Path::groebner ? "groebner" : "resultant-chain";
    ej["solve_order"] = e.solve_order;
    json lifts;
    for (const auto& [var, polys] : e.lift_polys) {
        json arr = json::array();
        for (const auto& p : polys) arr.push_back(p.str());
        lifts[var] = arr;
    }
    ej["lift_polys"] = lifts;
    json closed;
    for (const auto& [var, expr] : e.closed_form) {
        json c;
        c["num"] = expr.first.str();
        c["den"] = rat_str(expr.second);
        closed[var] = c;
    }
    ej["closed_form"] = closed;
    ej["structure_note"] = e.structure_note;
    ej["extension_failures"] = e.extension_failures;
    j["elimination"] = ej;

    json tuples = json::array();
    for (const auto& t : outcome.tuples) {
        json tj;
        tj["label"] = t.label;
        tj["digits"] = t.digits;
        tj["residual"] = precreal_json(t.residual);
        tj["residual_exact_zero"] = t.residual_exact_zero;
        tj["reality"] = t.is_real() ? "all-real" : "complex";
        tj["certified"] = t.certified;
        json vals;
        for (const auto& [k, v] : t.values) {
            json vj;
            switch (v.kind) {
                case TupleValue::Kind::exact: vj["kind"] = "exact"; break;
                case TupleValue::Kind::algebraic: vj["kind"] = "algebraic"; break;
                case TupleValue::Kind::numeric: vj["kind"] = "numeric"; break;
            }
            vj["approx"] = cplx_json(v.approx);
            vj["real"] = v.real;
            if (v.kind == TupleValue::Kind::exact) vj["exact"] = rat_str(v.exact);
            if (v.kind == TupleValue::Kind::algebraic && v.algebraic) {
                vj["defining_poly"] = v.algebraic->defining_poly.str();
                vj["defining_var"] = v.algebraic->var;
                vj["lower"] = rat_str(v.algebraic->lower);
                vj["upper"] = rat_str(v.algebraic->upper);
            }
            vals[k] = vj;
        }
        tj["values"] = vals;
        tuples.push_back(tj);
    }
    j["tuples"] = tuples;
    j["diagnostics"] = outcome.diagnostics;
    return j;
}

SolveOutcome solve_from_json(const json& j) {
    SolveOutcome out;
    out.dimension = j.at("dimension").get<int>();
    out.digits = j.at("digits").get<long>();
    out.system = secular_from_json(j.at("system"));
    VarSetPtr cvars = vars_parse(j.at("constraint_vars"));
    for (const auto& c : j.at("constraints"))
        out.constraints.push_back(parse_poly(c.get<std::string>(), cvars));

    const json& ej = j.at("elimination");
    EliminationResult e;
    e.kept_var = ej.at("kept_var").get<std::string>();
    e.eliminant = parse_poly(ej.at("eliminant").get<std::string>(), cvars);
    e.degree = ej.at("degree").get<long>();
    e.full_eliminant = parse_poly(ej.at("full_eliminant").get<std::string>(), cvars);
    e.bh_root_removed = ej.at("bh_root_removed").get<bool>();
    e.bh_root_value = rat_parse(ej.at("bh_root_value").get<std::string>());
    e.provenance = ej.at("provenance").get<std::string>() == "groebner"
                       ? EliminationResult::Path::groebner
                       : EliminationResult::Path::resultant_chain;
    e.solve_order = ej.at("solve_order").get<std::vector<std::string>>();
    for (auto it = ej.at("lift_polys").begin(); it != ej.at("lift_polys").end(); ++it) {
        std::vector<MultiPoly> polys;
        for (const auto& p : it.value()) polys.push_back(parse_poly(p.get<std::string>(), cvars));
        e.lift_polys[it.key()] = polys;
    }
    for (auto it = ej.at("closed_form").begin(); it != ej.at("closed_form").end(); ++it) {
        e.closed_form[it.key()] = {parse_poly(it.value().at("num").get<std::string>(), cvars),
                                   rat_parse(it.value().at("den").get<std::string>())};
    }
    e.structure_note = ej.at("structure_note").get<std::string>();
    e.extension_failures = ej.at("extension_failures").get<std::vector<std::string>>();
    out.elimination = std::move(e);

    for (const auto& tj : j.at("tuples")) {
        ParameterTuple t;
        t.label = tj.at("label").get<std::string>();
        t.digits = tj.at("digits").get<long>();
        t.residual = precreal_parse(tj.at("residual"));
        t.residual_exact_zero = tj.at("residual_exact_zero").get<bool>();
        t.reality = tj.at("reality").get<std::string>() == "all-real"
                        ? ParameterTuple::Reality::all_real
                        : ParameterTuple::Reality::complex;
        t.certified = tj.at("certified").get<bool>();
        for (auto it = tj.at("values").begin(); it != tj.at("values").end(); ++it) {
            const json& vj = it.value();
            TupleValue v;
            std::string kind = vj.at("kind").get<std::string>();
            v.approx = cplx_parse(vj.at("approx"));
            v.real = vj.at("real").get<bool>();
            if (kind == "exact") {
                v.kind = TupleValue::Kind::exact;
                v.exact = rat_parse(vj.at("exact").get<std::string>());
            } else if (kind == "algebraic") {
                v.kind = TupleValue::Kind::algebraic;
                AlgebraicHandle h;
                h.defining_poly = parse_poly(vj.at("defining_poly").get<std::string>(), cvars);
                h.var = vj.at("defining_var").get<std::string>();
                h.lower = rat_parse(vj.at("lower").get<std::string>());
                h.upper = rat_parse(vj.at("upper").get<std::string>());
                v.algebraic = std::move(h);
            } else {
                v.kind = TupleValue::Kind::numeric;
            }
            t.values.emplace(it.key(), std::move(v));
        }
        out.tuples.push_back(std::move(t));
    }
    out.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return out;
}

json to_json(const ConfluenceReport& report) {
    json j;
    j["dimension"] = report.dimension;
    j["ladder"] = report.ladder;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["structure"] = report.structure == PerturbationSpec::Structure::complex_symmetric
                         ? "complex-symmetric"
                         : "dense-unstructured";
    json rungs = json::array();
    for (const auto& r : report.rungs) {
        json rj;
        rj["p"] = r.p;
        rj["min_rho"] = precreal_json(r.min_rho);
        rj["max_rho"] = precreal_json(r.max_rho);
        json tmin = json::array(), tmax = json::array(), pm = json::array();
        for (const auto& x : r.trial_min) tmin.push_back(precreal_json(x));
        for (const auto& x : r.trial_max) tmax.push_back(precreal_json(x));
        for (const auto& x : r.pair_median) pm.push_back(precreal_json(x));
        rj["trial_min"] = tmin;
        rj["trial_max"] = tmax;
        rj["pair_median"] = pm;
        rj["dropped_trials"] = r.dropped_trials;
        rungs.push_back(rj);
    }
    j["rungs"] = rungs;
    j["verdict"] = to_string(report.verdict);
    j["suggested_partition"] = report.suggested_partition;
    return j;
}

ConfluenceReport confluence_from_json(const json& j) {
    ConfluenceReport rep;
    rep.dimension = j.at("dimension").get<size_t>();
    rep.ladder = j.at("ladder").get<std::vector<int>>();
    rep.trials = j.at("trials").get<int>();
    rep.seed = j.at("seed").get<uint64_t>();
    rep.structure = j.at("structure").get<std::string>() == "complex-symmetric"
                        ? PerturbationSpec::Structure::complex_symmetric
                        : PerturbationSpec::Structure::dense_unstructured;
    for (const auto& rj : j.at("rungs")) {
        ConfluenceRung r;
        r.p = rj.at("p").get<int>();
        r.min_rho = precreal_parse(rj.at("min_rho"));
        r.max_rho = precreal_parse(rj.at("max_rho"));
        for (const auto& x : rj.at("trial_min")) r.trial_min.push_back(precreal_parse(x));
        for (const auto& x : rj.at("trial_max")) r.trial_max.push_back(precreal_parse(x));
        for (const auto& x : rj.at("pair_median")) r.pair_median.push_back(precreal_parse(x));
        r.dropped_trials = rj.at("dropped_trials").get<int>();
        rep.rungs.push_back(std::move(r));
    }
    std::string v = j.at("verdict").get<std::string>();
    rep.verdict = v == "single-block" ? ConfluenceReport::Verdict::single_block
                  : v == "suspected-split" ? ConfluenceReport::Verdict::suspected_split
                                           : ConfluenceReport::Verdict::inconclusive;
    rep.suggested_partition = j.at("suggested_partition").get<std::vector<int>>();
    return rep;
}

} // namespace epn
