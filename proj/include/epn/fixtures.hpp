#pragma once

#include <map>
#include <string>
#include <vector>

#include "epn/multipoly.hpp"

namespace epn {

// Loads one polynomial expression per non-comment line.
std::vector<MultiPoly> load_poly_file(const std::string& path, const VarSetPtr& vars);

// Loads `key = value` lines; values stay strings (numbers parsed by callers
// at whatever precision they need).
std::map<std::string, std::string> load_reference_values(const std::string& path);

} // namespace epn
