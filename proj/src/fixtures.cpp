#include "epn/fixtures.hpp"

#include <fstream>

namespace epn {

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

std::vector<MultiPoly> load_poly_file(const std::string& path, const VarSetPtr& vars) {
    std::ifstream in(path);
    if (!in) throw structural_error("cannot open fixture file: " + path);
    std::vector<MultiPoly> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        out.push_back(parse_poly(t, vars));
    }
    return out;
}

std::map<std::string, std::string> load_reference_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw structural_error("cannot open fixture file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = strip(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw structural_error("bad reference line in " + path + ": " + t);
        out[strip(t.substr(0, eq))] = strip(t.substr(eq + 1));
    }
    return out;
}

} // namespace epn
