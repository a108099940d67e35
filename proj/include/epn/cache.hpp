#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "epn/epnverify.hpp"
#include "epn/secular.hpp"
#include "epn/solve.hpp"

namespace epn {

inline constexpr const char* kToolVersion = "1.0.0";

// Versioned, hash-stamped UTF-8 cache entries.  All numeric payload fields
// are strings (exact rationals or canonical polynomial text), so a payload
// round-trips bit-exactly through parse/dump.
struct CacheEntry {
    std::string kind;
    nlohmann::json key;
    nlohmann::json payload;
    std::string hash;          // fnv1a64 of the payload dump
    std::string tool_version = kToolVersion;
};

std::string fnv1a64_hex(const std::string& data);

// File name under `dir` for a (kind, key) pair.
std::string cache_path(const std::string& dir, const std::string& kind,
                       const nlohmann::json& key);

// Atomic write (temp file + rename).
void cache_store(const std::string& dir, const CacheEntry& entry);

// Load + hash check; nullopt when absent, structural_error on a bad file.
std::optional<CacheEntry> cache_load(const std::string& dir, const std::string& kind,
                                     const nlohmann::json& key);

// Domain serialization (exact: rationals as "num/den", polynomials in
// canonical text, PrecReal values as exact dyadic rationals plus digits).
nlohmann::json to_json(const SecularSystem& sys);
SecularSystem secular_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolveOutcome& outcome);
SolveOutcome solve_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConfluenceReport& report);
ConfluenceReport confluence_from_json(const nlohmann::json& j);

} // namespace epn
