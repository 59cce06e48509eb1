#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "x0p/model.hpp"

namespace x0p {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct CheckResult {
    std::string name;
    Status status = Status::Pass;
    std::string detail;
    nlohmann::json data;  // check-specific payload, may be null
};

struct RunReport {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<CheckResult> checks;
    nlohmann::json data;  // command output (tables, point lists), may be null
    double seconds = 0;

    void add(std::string name, Status s, std::string detail = {}, nlohmann::json data = nullptr);
    void add(std::string name, bool ok, std::string detail = {}, nlohmann::json data = nullptr);
    // Fail if any check failed, else Inconclusive if any was, else Pass.
    Status overall() const;
    int exit_code() const { return overall() == Status::Pass ? 0 : 1; }

    nlohmann::json to_json(bool with_timing = true) const;
    std::string to_text() const;
};

struct RunOptions {
    unsigned jobs = 1;
    bool offline = false;
    std::string fixtures = fixture_dir();
    std::string newform_cache;  // empty: no cache
};

RunReport cmd_genus(long max_genus, bool check, const RunOptions& opt = {});
RunReport cmd_verify(long level, const RunOptions& opt = {});
RunReport cmd_verify_all(const RunOptions& opt = {}, const std::vector<long>& levels = known_levels());
RunReport cmd_disks(long level, std::uint32_t p, const std::vector<int>& patches, const RunOptions& opt = {});
RunReport cmd_primes(long level, std::uint32_t p_min, std::uint32_t p_max, const std::vector<int>& patches,
                     const RunOptions& opt = {});
RunReport cmd_points_fp(long level, std::uint32_t p, const RunOptions& opt = {});
RunReport cmd_points_search(long level, long height, const RunOptions& opt = {});
RunReport cmd_points_cm(long level, long D, const RunOptions& opt = {});

}  // namespace x0p
