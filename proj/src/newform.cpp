#include "x0p/newform.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "x0p/error.hpp"

namespace x0p {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<NewformOrbitRecord> parse_newform_orbits(long level, const json& j) {
    auto bad = [&](const std::string& s) { throw Error(Errc::Parse, "newform data for " + std::to_string(level) + ": " + s); };
    if (!j.is_array()) bad("expected an array of orbits");
    std::vector<NewformOrbitRecord> out;
    for (auto& o : j) {
        if (!o.is_object() || !o.contains("label") || !o.contains("dimension") || !o.contains("ap_minpoly_degree"))
            bad("orbit record needs label, dimension and ap_minpoly_degree");
        NewformOrbitRecord r;
        r.level = level;
        if (!o["label"].is_string() || !o["dimension"].is_number_integer() || !o["ap_minpoly_degree"].is_object())
            bad("orbit record has fields of the wrong type");
        r.label = o["label"].get<std::string>();
        r.dimension = o["dimension"].get<int>();
        if (r.dimension < 1) bad("orbit " + r.label + " has dimension below 1");
        for (auto& [k, v] : o["ap_minpoly_degree"].items()) {
            long p = 0;
            try {
                size_t pos = 0;
                p = std::stol(k, &pos);
                if (pos != k.size()) throw std::invalid_argument(k);
            } catch (const std::exception&) {
                bad("prime key '" + k + "' is not an integer");
            }
            if (!v.is_number_integer()) bad("degree for p = " + k + " is not an integer");
            int d = v.get<int>();
            if (d < 1 || d > r.dimension) bad("degree for p = " + k + " is outside 1..dimension");
            r.ap_minpoly_degree[p] = d;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string default_newform_endpoint() {
    const char* e = std::getenv("X0PLUS_NEWFORM_URL");
    return e ? e : "";
}

std::string default_newform_fixtures() {
#ifdef X0P_FIXTURE_DIR
    return std::string(X0P_FIXTURE_DIR) + "/newforms";
#else
    return "fixtures/newforms";
#endif
}

namespace {

std::optional<std::string> read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Last writer wins; readers never see a partial file.
void write_atomic(const fs::path& p, const std::string& body) {
    fs::create_directories(p.parent_path());
    std::ostringstream tag;
    tag << ".tmp." << std::this_thread::get_id();
    fs::path tmp = p;
    tmp += tag.str();
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(Errc::Fetch, "cannot write cache file " + tmp.string());
        out << body;
    }
    fs::rename(tmp, p);
}

std::vector<NewformOrbitRecord> parse_text(long level, const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, "newform data for " + std::to_string(level) + " is not JSON: " + e.what());
    }
    return parse_newform_orbits(level, j);
}

std::optional<std::string> http_get(const std::string& base, long level, int timeout, std::string& why) {
    auto sep = base.find("://");
    if (sep == std::string::npos || base.substr(0, sep) != "http") {
        why = "only http:// endpoints are supported";
        return std::nullopt;
    }
    auto slash = base.find('/', sep + 3);
    std::string host = base.substr(0, slash);
    std::string prefix = slash == std::string::npos ? "" : base.substr(slash);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    httplib::Client cli(host);
    cli.set_connection_timeout(timeout, 0);
    cli.set_read_timeout(timeout, 0);
    auto res = cli.Get(prefix + "/newforms/" + std::to_string(level));
    if (!res) {
        why = httplib::to_string(res.error());
        return std::nullopt;
    }
    if (res->status != 200) {
        why = "HTTP status " + std::to_string(res->status);
        return std::nullopt;
    }
    return res->body;
}

}  // namespace

std::vector<NewformOrbitRecord> fetch_newform_orbits(long level, const FetchOptions& opt) {
    const std::string name = std::to_string(level) + ".json";
    fs::path cached = opt.cache_dir.empty() ? fs::path() : fs::path(opt.cache_dir) / name;
    std::string why = "no endpoint configured";
    if (!opt.offline && !opt.endpoint.empty()) {
        if (auto body = http_get(opt.endpoint, level, opt.timeout_seconds, why)) {
            auto recs = parse_text(level, *body);  // malformed responses are not cached
            if (!cached.empty()) write_atomic(cached, *body);
            return recs;
        }
    }
    if (!cached.empty())
        if (auto body = read_file(cached)) return parse_text(level, *body);
    if (opt.offline && !opt.fixtures_dir.empty())
        if (auto body = read_file(fs::path(opt.fixtures_dir) / name)) return parse_text(level, *body);
    throw Error(Errc::Fetch, "newform data for " + std::to_string(level) + " unavailable: " +
                                 (opt.offline ? std::string("offline and not cached") : why));
}

bool hecke_generation_check(long level, int genus, long p, const std::vector<NewformOrbitRecord>& records) {
    int total = 0;
    for (auto& r : records) {
        if (r.level != level) throw Error(Errc::InsufficientData, "record " + r.label + " is for another level");
        total += r.dimension;
    }
    if (records.empty()) throw Error(Errc::InsufficientData, "no newform orbits for " + std::to_string(level));
    for (auto& r : records)
        if (!r.ap_minpoly_degree.count(p))
            throw Error(Errc::InsufficientData, "orbit " + r.label + " has no data at p = " + std::to_string(p));
    if (total != genus) return false;
    for (auto& r : records)
        if (r.ap_minpoly_degree.at(p) != r.dimension) return false;
    return true;
}

}  // namespace x0p
