#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace x0p {

struct NewformOrbitRecord {
    long level = 0;
    std::string label;
    int dimension = 0;
    std::map<long, int> ap_minpoly_degree;  // p -> degree of the minimal polynomial of a_p
};

std::vector<NewformOrbitRecord> parse_newform_orbits(long level, const nlohmann::json& j);

struct FetchOptions {
    std::string endpoint;      // base URL, http only; empty disables the network
    std::string cache_dir;     // raw responses stored as <cache_dir>/<level>.json
    std::string fixtures_dir;  // offline fallback, same layout
    bool offline = false;
    int timeout_seconds = 5;
};

// Base URL from X0PLUS_NEWFORM_URL, or empty.
std::string default_newform_endpoint();
std::string default_newform_fixtures();

std::vector<NewformOrbitRecord> fetch_newform_orbits(long level, const FetchOptions& opt);

// True iff the dimensions sum to the genus and every orbit has a_p of full degree.
// Missing orbits or primes raise InsufficientData.
bool hecke_generation_check(long level, int genus, long p, const std::vector<NewformOrbitRecord>& records);

}  // namespace x0p
