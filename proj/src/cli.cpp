#include "x0p/cli.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>

#include "x0p/disks.hpp"
#include "x0p/genus.hpp"

namespace x0p {

using nlohmann::json;

void RunReport::add(std::string name, Status s, std::string detail, json d) {
    checks.push_back({std::move(name), s, std::move(detail), std::move(d)});
}

void RunReport::add(std::string name, bool ok, std::string detail, json d) {
    add(std::move(name), ok ? Status::Pass : Status::Fail, std::move(detail), std::move(d));
}

Status RunReport::overall() const {
    bool inconclusive = false;
    for (auto& c : checks) {
        if (c.status == Status::Fail) return Status::Fail;
        inconclusive = inconclusive || c.status == Status::Inconclusive;
    }
    return inconclusive ? Status::Inconclusive : Status::Pass;
}

json RunReport::to_json(bool with_timing) const {
    json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["artifact_version"] = kArtifactVersion;
    j["schema_version"] = kSchemaVersion;
    j["status"] = status_name(overall());
    j["checks"] = json::array();
    for (auto& c : checks) {
        json r{{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}};
        if (!c.data.is_null()) r["data"] = c.data;
        j["checks"].push_back(r);
    }
    if (!data.is_null()) j["data"] = data;
    if (with_timing) j["seconds"] = seconds;
    return j;
}

std::string RunReport::to_text() const {
    std::ostringstream o;
    o << command << " " << parameters.dump() << "\n";
    for (auto& c : checks) {
        o << "  [" << status_name(c.status) << "] " << c.name;
        if (!c.detail.empty()) o << ": " << c.detail;
        o << "\n";
    }
    o << "status: " << status_name(overall()) << "\n";
    return o.str();
}

namespace {

template <class Fn>
RunReport timed(const std::string& command, json params, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport r;
    r.command = command;
    r.parameters = std::move(params);
    fn(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

CanonicalModel load_level(long level, const RunOptions& opt) {
    auto path = fixture_path(level, opt.fixtures);
    if (!std::filesystem::exists(path))
        throw Error(Errc::NotFound, "no fixture for level " + std::to_string(level) + " (" + path + ")");
    return load_model(path);
}

json point_json(const std::vector<Fp::E>& v) {
    json a = json::array();
    for (auto x : v) a.push_back(x);
    return a;
}

json plane_json(const FpPlanePoint& P) {
    return json::array({P.x, P.y, P.infinite ? 0 : 1});
}

json table_json(const std::map<long, std::vector<long>>& t) {
    json j = json::object();
    for (auto& [g, v] : t) j[std::to_string(g)] = v;
    return j;
}

std::string join(const std::vector<long>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
}

std::vector<int> all_patches(const CanonicalModel& m) {
    std::vector<int> v;
    for (auto& p : m.patches) v.push_back(p.index);
    return v;
}

json coverage_json(const CoverageReport& c) {
    json rows = json::array();
    for (auto& r : c.rows) {
        json cls = json::array(), imgs = json::array();
        for (size_t j = 0; j < r.classes.size(); ++j) {
            cls.push_back(disk_class_name(r.classes[j]));
            imgs.push_back(r.images[j] ? plane_json(*r.images[j]) : json(nullptr));
        }
        rows.push_back({{"point", point_json(r.point)}, {"classes", cls}, {"images", imgs}});
    }
    json pats = json::array();
    for (auto& s : c.patches)
        pats.push_back({{"patch", s.patch_index},
                        {"rbar_roots", s.rbar_roots},
                        {"infinite_images", s.infinite_images},
                        {"strict_clean", s.strict_clean()}});
    json unc = json::array();
    for (auto& u : c.uncovered) unc.push_back(point_json(u));
    return {{"p", c.p},        {"patches", c.patch_indices}, {"covered", c.covered},
            {"strict_covered", c.strict_covered}, {"uncovered", unc}, {"per_patch", pats},
            {"rows", rows}};
}

}  // namespace

RunReport cmd_genus(long max_genus, bool check, const RunOptions& opt) {
    return timed("genus", {{"max", max_genus}, {"check", check}}, [&](RunReport& r) {
        auto t = enumerate_levels(max_genus, opt.jobs);
        r.data = {{"cutoff", t.cutoff}, {"prime", table_json(t.prime)}, {"composite", table_json(t.composite)}};
        const auto& ref = reference_levels();
        r.parameters["checked"] = check && max_genus == ref.max_genus;
        if (!r.parameters["checked"].get<bool>()) return;
        for (long g = 0; g <= max_genus; ++g) {
            auto get = [&](const std::map<long, std::vector<long>>& m) {
                auto it = m.find(g);
                return it == m.end() ? std::vector<long>{} : it->second;
            };
            auto a = get(t.prime), b = get(ref.prime);
            r.add("prime genus " + std::to_string(g), a == b, a == b ? "" : "got " + join(a));
            a = get(t.composite), b = get(ref.composite);
            r.add("composite genus " + std::to_string(g), a == b, a == b ? "" : "got " + join(a));
        }
    });
}

RunReport cmd_verify(long level, const RunOptions& opt) {
    return timed("verify", {{"level", level}}, [&](RunReport& r) {
        auto m = load_level(level, opt);
        auto kp = verify_known_points(m);
        r.add("known points", kp.ok(), std::to_string(kp.rows.size()) + " points");
        auto qr = verify_qexp(m);
        {
            Status s = Status::Pass;
            json rows = json::array();
            for (auto& row : qr.rows) {
                if (row.status == Status::Fail) s = Status::Fail;
                if (row.status == Status::Inconclusive && s == Status::Pass) s = Status::Inconclusive;
                rows.push_back({{"equation", row.index}, {"status", status_name(row.status)},
                                {"verified_through", row.verified_through}});
            }
            r.add("q-expansions", s, std::to_string(qr.rows.size()) + " equations", rows);
        }
        if (m.galbraith) {
            auto g = crosscheck_alt_model(m, *m.galbraith);
            r.add("alternative model", g.ok, g.failures.empty() ? "" : g.failures.front());
        }
        const std::uint32_t p = m.patches.front().prime;
        auto pts = enumerate_fp_points(m, p, opt.jobs);
        for (auto& patch : m.patches) {
            const auto& Q = m.plane_model(patch.index).Q;
            std::string tag = "patch " + std::to_string(patch.index);
            auto d = disk_data(Q);
            bool lf = linear_factor_screen(d);
            r.add(tag + " no linear factor", lf, "deg r = " + std::to_string(d.r.deg()));
            auto s = verify_plane_model_series(m, patch, Q);
            r.add(tag + " series", s.check.status,
                  "verified below q^" + std::to_string(s.check.verified_through) + ", terms start at q^" +
                      std::to_string(s.check.min_term_valuation));
            auto f = verify_plane_model_fp(m, patch, Q, pts);
            r.add(tag + " F_p points", f.ok(),
                  std::to_string(f.finite) + " finite, " + std::to_string(f.infinite) + " infinite, " +
                      std::to_string(f.undefined) + " undefined of " + std::to_string(f.points));
            r.add(tag + " degree in y", Q.degree_in(1) == patch.dx, "dx = " + std::to_string(patch.dx));
            r.add(tag + " reduction screen", good_reduction_screen(m, d, Q, patch.prime), "p = " + std::to_string(patch.prime));
        }
        CoverageOptions co;
        co.jobs = opt.jobs;
        auto cov = coverage_check(m, all_patches(m), pts, co);
        r.add("coverage", cov.covered,
              "p = " + std::to_string(p) + ", " + std::to_string(cov.uncovered.size()) + " uncovered of " +
                  std::to_string(pts.points.size()));
    });
}

RunReport cmd_verify_all(const RunOptions& opt, const std::vector<long>& levels) {
    return timed("verify-all", json::object(), [&](RunReport& r) {
        json matrix = json::object();
        for (long N : levels) {
            try {
                auto sub = cmd_verify(N, opt);
                std::string first_fail;
                for (auto& c : sub.checks)
                    if (c.status != Status::Pass && first_fail.empty()) first_fail = c.name;
                r.add(std::to_string(N), sub.overall(), first_fail.empty() ? "" : "first problem: " + first_fail);
                json row = json::object();
                for (auto& c : sub.checks) row[c.name] = status_name(c.status);
                matrix[std::to_string(N)] = row;
            } catch (const Error& e) {
                r.add(std::to_string(N), Status::Fail, e.code() == Errc::NotFound ? "missing fixture" : e.what());
                matrix[std::to_string(N)] = nullptr;
            }
        }
        r.data = matrix;
    });
}

RunReport cmd_disks(long level, std::uint32_t p, const std::vector<int>& patches, const RunOptions& opt) {
    return timed("disks", {{"level", level}, {"prime", p}, {"patches", patches}}, [&](RunReport& r) {
        auto m = load_level(level, opt);
        auto idx = patches.empty() ? all_patches(m) : patches;
        r.parameters["patches"] = idx;
        CoverageOptions co;
        co.jobs = opt.jobs;
        auto cov = coverage_check(m, idx, p, co);
        r.data = coverage_json(cov);
        r.add("coverage", cov.covered, std::to_string(cov.uncovered.size()) + " uncovered");
    });
}

RunReport cmd_primes(long level, std::uint32_t p_min, std::uint32_t p_max, const std::vector<int>& patches,
                     const RunOptions& opt) {
    return timed("primes", {{"level", level}, {"min", p_min}, {"max", p_max}}, [&](RunReport& r) {
        auto m = load_level(level, opt);
        auto idx = patches.empty() ? all_patches(m) : patches;
        r.parameters["patches"] = idx;
        std::optional<std::vector<NewformOrbitRecord>> nf;
        FetchOptions fo;
        fo.endpoint = default_newform_endpoint();
        fo.cache_dir = opt.newform_cache;
        fo.fixtures_dir = opt.fixtures + "/newforms";
        fo.offline = opt.offline || fo.endpoint.empty();
        std::string nf_note;
        try {
            nf = fetch_newform_orbits(level, fo);
        } catch (const Error& e) {
            nf_note = e.what();
        }
        auto rows = find_primes(m, idx, p_min, p_max, nf ? &*nf : nullptr, opt.jobs);
        json out = json::array();
        for (auto& c : rows)
            out.push_back({{"p", c.p},
                           {"covered", c.covered},
                           {"strict_covered", c.strict_covered},
                           {"hecke", advisory_name(c.hecke)},
                           {"note", c.note}});
        r.data = {{"primes", out}, {"newform_data", nf ? "available" : nf_note}};
    });
}

RunReport cmd_points_fp(long level, std::uint32_t p, const RunOptions& opt) {
    return timed("points fp", {{"level", level}, {"prime", p}}, [&](RunReport& r) {
        auto m = load_level(level, opt);
        auto pts = enumerate_fp_points(m, p, opt.jobs);
        json a = json::array();
        for (auto& P : pts.points) a.push_back(point_json(P));
        double bound = 2.0 * m.genus * std::sqrt(static_cast<double>(p));
        long dev = static_cast<long>(pts.points.size()) - static_cast<long>(p) - 1;
        bool smooth = good_model_prime(m, p, pts);
        r.data = {{"count", pts.points.size()}, {"points", a}, {"nonsingular", smooth}};
        if (smooth)
            r.add("Weil bound", std::fabs(static_cast<double>(dev)) <= bound,
                  "#X = " + std::to_string(pts.points.size()) + ", |#X - p - 1| = " + std::to_string(std::labs(dev)));
        else
            r.add("Weil bound", Status::Inconclusive, "model has singular points mod p");
    });
}

RunReport cmd_points_search(long level, long height, const RunOptions& opt) {
    return timed("points search", {{"level", level}, {"height", height}}, [&](RunReport& r) {
        auto m = load_level(level, opt);
        auto found = search_rational_points(m, height, opt.jobs);
        std::vector<std::vector<long>> known;
        for (auto& k : m.known_points) {
            long h = 0;
            for (long c : k.coords) h = std::max(h, std::labs(c));
            if (h <= height) known.push_back(k.coords);
        }
        std::sort(known.begin(), known.end());
        std::vector<std::vector<long>> extra, missing;
        std::set_difference(found.begin(), found.end(), known.begin(), known.end(), std::back_inserter(extra));
        std::set_difference(known.begin(), known.end(), found.begin(), found.end(), std::back_inserter(missing));
        r.data = {{"points", found}, {"extra", extra}, {"missing", missing}};
        r.add("matches known points", extra.empty() && missing.empty(),
              std::to_string(found.size()) + " found, " + std::to_string(extra.size()) + " new, " +
                  std::to_string(missing.size()) + " missing");
    });
}

RunReport cmd_points_cm(long level, long D, const RunOptions& opt) {
    return timed("points cm", {{"level", level}, {"disc", D}}, [&](RunReport& r) {
        auto m = load_level(level, opt);
        auto describe = [](const CmEvaluation& e) {
            json approx = json::array();
            for (auto& z : e.approx_coords) approx.push_back({z.real(), z.imag()});
            json j{{"form", {e.form.a, e.form.b, e.form.c}},
                   {"q_abs", e.q_abs},
                   {"approx", approx},
                   {"derivative_fallback", e.used_derivative_fallback},
                   {"residual", e.residual}};
            j["reconstructed"] = e.reconstructed ? json(*e.reconstructed) : json(nullptr);
            j["matched"] = e.matched_point ? json(e.matched_point->coords) : json(nullptr);
            return j;
        };
        try {
            auto e = evaluate_cm_point(m, D);
            r.data = describe(e);
            r.add("identified", e.matched_point ? Status::Pass : Status::Inconclusive,
                  e.matched_point ? "residual " + std::to_string(e.residual) : "no consistent reconstruction");
        } catch (const NonConvergent& e) {
            r.data = describe(e.partial());
            r.add("identified", Status::Inconclusive, e.what());
        }
    });
}

}  // namespace x0p
