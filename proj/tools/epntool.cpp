// Command-line front end: derive secular systems, solve for EPN-compatible
// parameter tuples, verify degeneracy completeness, and map spectra.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "epn/cache.hpp"
#include "epn/groebner.hpp"
#include "epn/epnverify.hpp"
#include "epn/spectrum.hpp"

using namespace epn;

namespace {

struct GlobalOpts {
    std::string cache_dir;
    bool no_cache = false;
};

std::string default_cache_dir() {
    if (const char* env = std::getenv("EPNTOOL_CACHE_DIR")) return env;
    return ".epn-cache";
}

SecularSystem obtain_secular(int n, const GlobalOpts& g) {
    nlohmann::json key{{"N", n}, {"z0", "symbolic"}};
    if (!g.no_cache) {
        if (auto hit = cache_load(g.cache_dir, "secular", key))
            return secular_from_json(hit->payload);
    }
    SecularSystem sys = derive_secular(ModelSpec::for_dimension(n));
    if (!g.no_cache) {
        CacheEntry e;
        e.kind = "secular";
        e.key = key;
        e.payload = to_json(sys);
        cache_store(g.cache_dir, e);
    }
    return sys;
}

SolveOutcome obtain_solution(int n, long digits, SolveMethod method, const GlobalOpts& g) {
    const char* mname = method == SolveMethod::automatic ? "auto"
                        : method == SolveMethod::groebner ? "groebner"
                                                          : "resultant";
    nlohmann::json key{{"N", n}, {"digits", digits}, {"method", mname}, {"z0", "1"}};
    if (!g.no_cache) {
        if (auto hit = cache_load(g.cache_dir, "solutions", key))
            return solve_from_json(hit->payload);
    }
    SolveOutcome out = solve_epn(n, digits, method);
    if (!g.no_cache) {
        CacheEntry e;
        e.kind = "solutions";
        e.key = key;
        e.payload = to_json(out);
        cache_store(g.cache_dir, e);
    }
    return out;
}

ParameterTuple parse_inline_tuple(const std::string& text,
                                  const std::vector<MultiPoly>& constraints,
                                  const ModelSpec& model, long digits) {
    ParameterTuple t;
    t.digits = digits;
    std::stringstream ss(text);
    std::string item;
    std::map<std::string, Rational> vals;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw precondition_error("inline tuple must look like A=...,B=...");
        std::string name = item.substr(0, eq);
        name.erase(remove_if(name.begin(), name.end(), ::isspace), name.end());
        vals[name] = rational_from_string(item.substr(eq + 1));
    }
    for (const auto& p : model.params) {
        if (!vals.count(p)) throw precondition_error("inline tuple missing parameter " + p);
        TupleValue v;
        v.kind = TupleValue::Kind::exact;
        v.exact = vals[p];
        v.approx = PrecComplex(PrecReal(vals[p], digits));
        t.values.emplace(p, v);
    }
    auto rep = certify(t, constraints, digits);
    t.residual = rep.max_residual;
    t.residual_exact_zero = rep.exact_zero;
    t.certified = rep.pass;
    t.label = "inline";
    return t;
}

ParameterTuple resolve_tuple(const SolveOutcome& out, const std::string& id, long digits) {
    if (id.find('=') != std::string::npos)
        return parse_inline_tuple(id, out.constraints, out.system.model, digits);
    for (const auto& t : out.tuples)
        if (t.label == id) return t;
    throw precondition_error("unknown tuple id '" + id + "' for N=" +
                             std::to_string(out.dimension));
}

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::trunc);
    if (!file) throw structural_error("cannot open output file " + path);
    return file;
}

void write_sweep_svg(const std::string& path, const SweepResult& res, int j) {
    const double W = 960, H = 640, ml = 70, mr = 20, mt = 20, mb = 50;
    double zmin = 1e300, zmax = -1e300, smin = 1e300, smax = -1e300;
    for (const auto& s : res.samples) {
        double z = s.z.to_double();
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
        for (const auto& r : s.roots) {
            double v = r.re().to_double();
            smin = std::min(smin, v);
            smax = std::max(smax, v);
        }
    }
    if (!(zmax > zmin)) zmax = zmin + 1;
    if (!(smax > smin)) smax = smin + 1;
    double zpad = 0.03 * (zmax - zmin), spad = 0.05 * (smax - smin);
    zmin -= zpad; zmax += zpad; smin -= spad; smax += spad;
    auto X = [&](double z) { return ml + (z - zmin) / (zmax - zmin) * (W - ml - mr); };
    auto Y = [&](double s) { return H - mb - (s - smin) / (smax - smin) * (H - mt - mb); };

    std::ofstream f(path, std::ios::trunc);
    if (!f) throw structural_error("cannot open plot file " + path);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' viewBox='0 0 " << W << " " << H << "'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    f << "<g stroke='black' stroke-width='1'>\n";
    f << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='"
      << H - mb << "'/>\n";
    f << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
      << "'/>\n</g>\n";
    f << "<g font-size='12' font-family='sans-serif'>\n";
    for (int t = 0; t <= 5; ++t) {
        double z = zmin + (zmax - zmin) * t / 5;
        double s = smin + (smax - smin) * t / 5;
        f << "<text x='" << X(z) - 15 << "' y='" << H - mb + 18 << "'>" << z << "</text>\n";
        f << "<text x='4' y='" << Y(s) + 4 << "'>" << s << "</text>\n";
        f << "<line x1='" << X(z) << "' y1='" << H - mb << "' x2='" << X(z) << "' y2='"
          << H - mb + 4 << "' stroke='black'/>\n";
        f << "<line x1='" << ml - 4 << "' y1='" << Y(s) << "' x2='" << ml << "' y2='"
          << Y(s) << "' stroke='black'/>\n";
    }
    f << "<text x='" << (W / 2) << "' y='" << H - 12 << "'>z</text>\n";
    f << "<text x='10' y='" << mt + 2 << "'>Re s</text>\n</g>\n";

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    for (int k = 0; k < j; ++k) {
        // Segments of constant class, so complex stretches render dashed.
        std::string seg;
        bool seg_complex = false;
        bool open = false;
        auto flush = [&]() {
            if (!open || seg.empty()) { seg.clear(); open = false; return; }
            f << "<polyline fill='none' stroke='" << palette[k % 6] << "' stroke-width='1.4'"
              << (seg_complex ? " stroke-dasharray='5,4' opacity='0.55'" : "")
              << " points='" << seg << "'/>\n";
            seg.clear();
            open = false;
        };
        for (const auto& s : res.samples) {
            bool cplx = s.classes[static_cast<size_t>(k)] == RootClass::complex_member;
            if (open && cplx != seg_complex) flush();
            seg_complex = cplx;
            open = true;
            std::ostringstream pt;
            pt << X(s.z.to_double()) << ","
               << Y(s.roots[static_cast<size_t>(k)].re().to_double()) << " ";
            seg += pt.str();
        }
        flush();
    }
    for (const auto& b : res.boundaries) {
        double x = X(b.z_star.to_double());
        f << "<line x1='" << x << "' y1='" << mt << "' x2='" << x << "' y2='" << H - mb
          << "' stroke='#888888' stroke-dasharray='2,3'/>\n";
    }
    f << "</svg>\n";
}

int run(int argc, char** argv) {
    CLI::App app{"EPN toolkit: exceptional-point degeneracies of generalized "
                 "Bose-Hubbard matrices"};
    app.require_subcommand(1);
    GlobalOpts g;
    g.cache_dir = default_cache_dir();
    app.add_option("--cache-dir", g.cache_dir, "cache directory");
    app.add_flag("--no-cache", g.no_cache, "bypass the on-disk cache");

    // derive -----------------------------------------------------------
    auto* derive = app.add_subcommand("derive", "derive the secular system");
    int d_n = 0;
    std::string d_z, d_out;
    derive->add_option("N", d_n, "matrix dimension")->required();
    derive->add_option("--z", d_z, "substitute an exact rational value for z");
    derive->add_option("--out", d_out, "also write the serialized system to this file");
    derive->callback([&]() {
        if (d_n < 2) throw precondition_error("N must be >= 2");
        SecularSystem sys = obtain_secular(d_n, g);
        std::vector<MultiPoly> ps = sys.coeffs;
        if (!d_z.empty()) {
            Rational z0 = rational_from_string(d_z);
            ps = constraints_at(sys, z0);
        }
        std::cout << "secular system N=" << d_n << " (J=" << sys.model.half_size
                  << (sys.odd_zero_mode ? ", zero mode factored out" : "") << ")\n";
        for (size_t m = 0; m < ps.size(); ++m)
            std::cout << "P_" << (m + 1) << " = " << ps[m].str() << "\n";
        if (!d_out.empty()) {
            std::ofstream f(d_out, std::ios::trunc);
            if (!f) throw structural_error("cannot open " + d_out);
            f << to_json(sys).dump(1) << "\n";
        }
    });

    // solve ------------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "solve the EPN constraint system at z=1");
    int s_n = 0;
    long s_digits = 40;
    std::string s_method = "auto";
    solve->add_option("N", s_n, "matrix dimension")->required();
    solve->add_option("--digits", s_digits, "working decimal digits (>= 20)");
    solve->add_option("--method", s_method, "groebner|resultant|auto")
        ->check(CLI::IsMember({"groebner", "resultant", "auto"}));
    solve->callback([&]() {
        SolveMethod m = s_method == "groebner" ? SolveMethod::groebner
                        : s_method == "resultant" ? SolveMethod::resultant_chain
                                                  : SolveMethod::automatic;
        SolveOutcome out;
        try {
            out = obtain_solution(s_n, s_digits, m, g);
        } catch (const groebner_budget_exceeded& e) {
            // Keep the partial basis around for diagnosis before exiting 3.
            if (!g.no_cache) {
                CacheEntry pe;
                pe.kind = "partial";
                pe.key = {{"N", s_n}, {"digits", s_digits}, {"method", s_method}};
                nlohmann::json basis = nlohmann::json::array();
                for (const auto& p : e.partial_basis) basis.push_back(p.str());
                pe.payload = {{"what", e.what()}, {"partial_basis", basis}};
                cache_store(g.cache_dir, pe);
            }
            throw;
        }
        std::cout << "N=" << out.dimension << "  digits=" << out.digits << "  path="
                  << (out.elimination.provenance == EliminationResult::Path::groebner
                          ? "groebner"
                          : "resultant-chain")
                  << "\n";
        std::cout << out.elimination.structure_note << "\n";
        for (const auto& note : out.diagnostics) std::cout << "note: " << note << "\n";
        long show = std::min<long>(out.digits, 25);
        for (const auto& t : out.tuples) {
            std::cout << "[" << t.label << "]";
            for (const auto& p : out.system.model.params) {
                const auto& v = t.values.at(p);
                std::cout << "  " << p << " = "
                          << (v.kind == TupleValue::Kind::exact ? v.exact.get_str()
                                                                : v.approx.str(show));
            }
            std::cout << "\n      residual "
                      << (t.residual_exact_zero ? "0 (exact)" : t.residual.str(3))
                      << "  " << (t.is_real() ? "all-real" : "complex")
                      << (t.certified ? "  certified" : "  uncertified") << "\n";
        }
    });

    // verify -----------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "eigenvector-confluence precision sweep");
    int v_n = 0;
    std::string v_tuple = "bh", v_ladder = "10,20,30,40", v_csv, v_structure = "sym";
    int v_trials = 5;
    uint64_t v_seed = 1;
    verify->add_option("N", v_n, "matrix dimension")->required();
    verify->add_option("--tuple", v_tuple, "tuple id, inline A=..., or split-demo");
    verify->add_option("--ladder", v_ladder, "comma-separated precision ladder");
    verify->add_option("--trials", v_trials, "perturbation draws per rung");
    verify->add_option("--seed", v_seed, "random seed");
    verify->add_option("--csv", v_csv, "write per-trial CSV here ('-' = stdout)");
    verify->add_option("--structure", v_structure, "sym|dense perturbation structure")
        ->check(CLI::IsMember({"sym", "dense"}));
    verify->callback([&]() {
        std::vector<int> ladder;
        std::stringstream ss(v_ladder);
        std::string item;
        while (std::getline(ss, item, ',')) ladder.push_back(std::stoi(item));
        if (ladder.empty()) throw precondition_error("empty ladder");
        auto structure = v_structure == "dense"
                             ? PerturbationSpec::Structure::dense_unstructured
                             : PerturbationSpec::Structure::complex_symmetric;

        nlohmann::json key{{"N", v_n},           {"tuple", v_tuple},
                           {"ladder", v_ladder}, {"trials", v_trials},
                           {"seed", v_seed},     {"structure", v_structure}};
        ConfluenceReport rep;
        bool have = false;
        if (!g.no_cache) {
            if (auto hit = cache_load(g.cache_dir, "confluence", key)) {
                rep = confluence_from_json(hit->payload);
                have = true;
            }
        }
        if (!have) {
            HamiltonianFactory factory;
            if (v_tuple == "split-demo") {
                int n = v_n;
                factory = [n](int p, long digits) {
                    return split_demo_matrix(static_cast<size_t>(n), p, digits);
                };
            } else {
                long need = 2L * ladder.back() + 20;
                SolveOutcome out = obtain_solution(v_n, 40, SolveMethod::automatic, g);
                ParameterTuple t = resolve_tuple(out, v_tuple, out.digits);
                if (!t.certified)
                    throw precondition_error("tuple '" + v_tuple + "' is not certified");
                auto sys = out.system;
                auto cons = out.constraints;
                factory = [t, sys, cons, need](int, long digits) {
                    auto vals = values_at_digits(t, cons, std::max(digits, need));
                    std::map<std::string, PrecReal> at;
                    for (auto& [k2, v2] : vals) at.emplace(k2, v2.round_to(digits));
                    return build_matrix(sys.model, at, PrecReal(1L, digits), digits);
                };
            }
            rep = precision_sweep(factory, static_cast<size_t>(v_n), ladder, v_trials,
                                  v_seed, structure);
            if (!g.no_cache) {
                CacheEntry e;
                e.kind = "confluence";
                e.key = key;
                e.payload = to_json(rep);
                cache_store(g.cache_dir, e);
            }
        }

        std::ofstream file;
        std::ostream& os = open_sink(file, v_csv.empty() ? "-" : v_csv);
        os << "p,trial,min_rho,max_rho\n";
        for (const auto& r : rep.rungs)
            for (size_t t = 0; t < r.trial_max.size(); ++t)
                os << r.p << "," << t << "," << r.trial_min[t].str(6) << ","
                   << r.trial_max[t].str(6) << "\n";
        std::cout << "median max_rho per rung:";
        for (const auto& r : rep.rungs)
            std::cout << "  p=" << r.p << ": " << r.max_rho.str(3);
        std::cout << "\nverdict: " << to_string(rep.verdict);
        if (!rep.suggested_partition.empty()) {
            std::cout << "(";
            for (size_t i = 0; i < rep.suggested_partition.size(); ++i)
                std::cout << (i ? "," : "") << rep.suggested_partition[i];
            std::cout << ")";
        }
        std::cout << "\n";
    });

    // sweep --------------------------------------------------------------
    auto* sw = app.add_subcommand("sweep", "spectrum sweep over a z range");
    int w_n = 0, w_grid = 201;
    long w_digits = 30;
    std::string w_tuple = "bh", w_zmin, w_zmax, w_csv, w_plot;
    sw->add_option("N", w_n, "matrix dimension")->required();
    sw->add_option("--tuple", w_tuple, "tuple id or inline A=...");
    sw->add_option("--zmin", w_zmin, "lower z bound (exact rational)")->required();
    sw->add_option("--zmax", w_zmax, "upper z bound (exact rational)")->required();
    sw->add_option("--grid", w_grid, "number of base grid points");
    sw->add_option("--digits", w_digits, "working decimal digits");
    sw->add_option("--csv", w_csv, "CSV output path ('-' = stdout)");
    sw->add_option("--plot", w_plot, "SVG plot output path");
    sw->callback([&]() {
        Rational zmin = rational_from_string(w_zmin);
        Rational zmax = rational_from_string(w_zmax);
        if (!(zmin < zmax)) throw precondition_error("need zmin < zmax");
        SolveOutcome out = obtain_solution(w_n, std::max(w_digits + 10, 40L),
                                           SolveMethod::automatic, g);
        ParameterTuple t = resolve_tuple(out, w_tuple, out.digits);
        if (!t.certified) throw precondition_error("tuple is not certified");
        auto res = sweep(out.system, t, out.constraints, zmin, zmax, w_grid, w_digits);

        std::ofstream file;
        std::ostream& os = open_sink(file, w_csv.empty() ? "-" : w_csv);
        int j = out.system.model.half_size;
        os << "z";
        for (int k = 1; k <= j; ++k) os << ",re_s_" << k << ",im_s_" << k;
        for (int k = 1; k <= j; ++k) os << ",class_" << k;
        os << ",ambiguous\n";
        bool any_ambiguous = false;
        for (const auto& s : res.samples) {
            os << s.z.str(w_digits);
            for (const auto& r : s.roots)
                os << "," << r.re().str(w_digits) << "," << r.im().str(w_digits);
            for (auto c : s.classes) os << "," << class_code(c);
            os << "," << (s.ambiguous ? 1 : 0) << "\n";
            any_ambiguous = any_ambiguous || s.ambiguous;
        }
        std::cerr << "intervals (censuses real/imaginary/complex):\n";
        for (const auto& c : res.report.intervals)
            std::cerr << "  [" << c.lower.str(8) << ", " << c.upper.str(8) << "]  "
                      << c.real_energies << "/" << c.imaginary_energies << "/"
                      << c.complex_energies << (c.consistent ? "" : "  (inconsistent)")
                      << "\n";
        if (!w_plot.empty()) write_sweep_svg(w_plot, res, j);
        if (any_ambiguous)
            throw numerical_failure("ambiguous samples remain after escalation "
                                    "(rows flagged in the CSV)");
    });

    // boundaries ---------------------------------------------------------
    auto* bd = app.add_subcommand("boundaries", "EP2 boundary scan in z");
    int b_n = 0;
    long b_digits = 40;
    std::string b_tuple = "bh", b_window;
    bd->add_option("N", b_n, "matrix dimension")->required();
    bd->add_option("--tuple", b_tuple, "tuple id or inline A=...");
    bd->add_option("--window", b_window, "z window as lo..hi")->required();
    bd->add_option("--digits", b_digits, "working decimal digits");
    bd->callback([&]() {
        auto sep = b_window.find("..");
        if (sep == std::string::npos)
            throw precondition_error("--window must look like lo..hi");
        Rational lo = rational_from_string(b_window.substr(0, sep));
        Rational hi = rational_from_string(b_window.substr(sep + 2));
        if (!(lo < hi)) throw precondition_error("empty window");
        SolveOutcome out = obtain_solution(b_n, std::max(b_digits + 10, 40L),
                                           SolveMethod::automatic, g);
        ParameterTuple t = resolve_tuple(out, b_tuple, out.digits);
        if (!t.certified) throw precondition_error("tuple is not certified");
        auto bounds = ep2_boundaries(out.system, t, out.constraints, lo, hi, b_digits);
        std::cout << "z_star,kind,s_star,certified\n";
        for (const auto& b : bounds)
            std::cout << b.z_star.str(std::min(b_digits, 20L)) << "," << to_string(b.kind)
                      << "," << b.s_star.str(10) << "," << (b.certified ? 1 : 0) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage/input error contract
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const budget_exceeded& e) {
        std::cerr << "error (budget): " << e.what() << "\n";
        return 3;
    } catch (const numerical_failure& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
