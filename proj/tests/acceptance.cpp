// One PASS/FAIL line per acceptance criterion. Exit status is 0 iff the set of failing
// criteria equals the --expect-fail set (empty by default).
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "x0p/disks.hpp"
#include "x0p/exact.hpp"
#include "x0p/genus.hpp"
#include "x0p/model.hpp"
#include "x0p/planemap.hpp"
#include "x0p/points.hpp"

using namespace x0p;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::map<long, CanonicalModel>& models() {
    static std::map<long, CanonicalModel> cache;
    return cache;
}

const CanonicalModel& model(long N) {
    auto& c = models();
    auto it = c.find(N);
    if (it == c.end()) it = c.emplace(N, load_model(fixture_path(N))).first;
    return it->second;
}

std::vector<long> sign_normal(std::vector<long> c) {
    for (long v : c)
        if (v) {
            if (v < 0)
                for (auto& w : c) w = -w;
            break;
        }
    return c;
}

unsigned jobs = 1;

Outcome level_tables() {
    auto t = enumerate_levels(6, jobs);
    const auto& ref = reference_levels();
    int rows = 0, bad = 0;
    for (long g = 0; g <= 6; ++g) {
        for (auto kind : {&LevelTable::prime, &LevelTable::composite}) {
            ++rows;
            auto a = (t.*kind).count(g) ? (t.*kind).at(g) : std::vector<long>{};
            bad += a != (ref.*kind).at(g);
        }
    }
    std::ostringstream s;
    s << rows - bad << "/" << rows << " rows match, scanned to " << t.cutoff;
    return {bad == 0 && rows == 14, s.str()};
}

Outcome bounds() {
    long hv = 0, gv = 0, nd = 0;
    for (long a = 3; a <= 100000; ++a) {
        long D = -a;
        if (!(a % 4 == 0 || a % 4 == 3)) continue;
        ++nd;
        long h = class_number(D);
        hv += h < 1 || h > class_number_upper_bound(D);
    }
    const long top = scan_bound(6);
    for (long N = 1; N <= top; ++N) gv += genus_lower_bound(N) > genus_X0_plus(N) + 1e-9;
    std::ostringstream s;
    s << nd << " discriminants, " << hv << " class number violations; N <= " << top << ", " << gv
      << " genus bound violations";
    return {hv == 0 && gv == 0, s.str()};
}

Outcome known_points() {
    int ok = 0;
    size_t pts = 0;
    for (long N : known_levels()) {
        auto r = verify_known_points(model(N));
        ok += r.ok();
        pts += r.rows.size();
    }
    std::ostringstream s;
    s << ok << "/16 levels, " << pts << " points";
    return {ok == 16, s.str()};
}

bool detected(const CanonicalModel& m) {
    if (!verify_known_points(m).ok()) return true;
    for (auto& r : verify_qexp(m).rows)
        if (r.status == Status::Fail) return true;
    return false;
}

Outcome qexp() {
    int ok = 0;
    for (long N : known_levels()) ok += verify_qexp(model(N)).ok();
    std::mt19937_64 rng(7);
    auto pick = [&](long n) { return static_cast<long>(rng() % static_cast<std::uint64_t>(n)); };
    const auto& L = known_levels();
    int tried = 0, caught = 0;
    for (int t = 0; t < 64; ++t) {
        auto m = model(L[t % L.size()]);
        long delta = (1 + pick(3)) * (pick(2) ? 1 : -1);
        if (t % 2 == 0) {
            auto& eq = m.equations[pick(m.equations.size())];
            auto it = eq.terms.begin();
            std::advance(it, pick(eq.terms.size()));
            it->second += delta;
            if (it->second == 0) eq.terms.erase(it);
        } else {
            m.qexp[pick(m.qexp.size())][pick(m.precision - 1)] += delta;
        }
        ++tried;
        caught += detected(m);
    }
    std::ostringstream s;
    s << ok << "/16 levels vanish, " << caught << "/" << tried << " mutations detected";
    return {ok == 16 && caught == tried && tried >= 50, s.str()};
}

Outcome plane_fp() {
    int patches = 0, clean = 0;
    size_t fails = 0;
    double worst = 0;
    for (long N : known_levels()) {
        const auto& m = model(N);
        for (auto& pm : m.plane_models) {
            const auto& patch = m.patch(pm.patch_index);
            auto t0 = std::chrono::steady_clock::now();
            auto r = verify_plane_model_fp(m, patch, pm.Q, patch.prime, 1);
            worst = std::max(worst, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            ++patches;
            clean += r.ok();
            fails += r.failures.size();
        }
    }
    std::ostringstream s;
    s << clean << "/" << patches << " patches, " << fails << " failures, slowest " << std::fixed
      << std::setprecision(1) << worst << " s";
    return {patches == 20 && clean == 20 && worst < 300, s.str()};
}

Outcome linear_factor() {
    int clean = 0, patches = 0;
    std::string bad;
    for (long N : known_levels())
        for (auto& pm : model(N).plane_models) {
            ++patches;
            auto roots = rational_roots(disk_data(pm.Q).r);
            if (roots.empty()) {
                ++clean;
                continue;
            }
            bad += " " + std::to_string(N) + "/" + std::to_string(pm.patch_index) + " has r(" +
                   roots.front().get_str() + ") = 0;";
        }
    std::ostringstream s;
    s << clean << "/" << patches << " patches free of rational roots;" << bad;
    return {clean == 20 && patches == 20, s.str()};
}

Outcome coverage() {
    int ok = 0, total = 0;
    std::string bad;
    for (long N : known_levels()) {
        const auto& m = model(N);
        std::vector<int> idx;
        for (auto& pm : m.plane_models) idx.push_back(pm.patch_index);
        ++total;
        auto r = coverage_check(m, idx, m.patch(idx.front()).prime, {true, jobs});
        if (r.covered)
            ++ok;
        else
            bad += " " + std::to_string(N);
    }
    bool single_fails = !coverage_check(model(197), {1}, 23, {true, jobs}).covered;
    std::ostringstream s;
    s << ok << "/" << total << " covered" << (bad.empty() ? "" : " (not:" + bad + ")") << "; 197 patch 1 alone at 23 "
      << (single_fails ? "not covered" : "covered");
    return {ok == 16 && single_fails, s.str()};
}

Outcome cross_211() {
    const auto& m = model(211);
    const auto& patch = m.patch(2);
    const std::uint32_t p = 31;
    Fp k(p);
    auto pl = [&](long x, long y, bool inf = false) { return FpPlanePoint{inf, k.from_int(x), k.from_int(y)}; };
    const std::set<FpPlanePoint> listed = {pl(-1, 1), pl(15, 0), pl(1, -2), pl(-2, 3),
                                           pl(-1, 2), pl(0, -1), pl(1, -3, true), pl(1, 0, true)};
    std::set<FpPlanePoint> images;
    size_t undefined = 0;
    for (auto& P : enumerate_fp_points(m, p, jobs).points) {
        auto r = eval_patch(m, patch, P, p);
        if (r.defined())
            images.insert(*r.point);
        else
            ++undefined;
    }
    std::set<FpPlanePoint> rational;
    for (auto& kp : m.known_points) rational.insert(resolved_image(m, patch, *reduce_point(kp.coords, p), p));
    std::ostringstream s;
    s << images.size() << " distinct images plus " << undefined << " undefined points against " << listed.size()
      << " listed; reductions of the rational points give " << (rational == listed ? "exactly" : "not")
      << " the listed set";
    return {images == listed, s.str()};
}

Outcome search() {
    struct Case {
        long N, H;
        size_t n;
    };
    std::ostringstream s;
    bool all = true;
    for (auto c : {Case{137, 19, 9}, Case{199, 5, 8}, Case{251, 16, 6}}) {
        const auto& m = model(c.N);
        std::set<std::vector<long>> want;
        for (auto& kp : m.known_points) want.insert(sign_normal(kp.coords));
        auto t0 = std::chrono::steady_clock::now();
        auto a = search_rational_points(m, c.H, jobs);
        auto b = search_rational_points(m, 2 * c.H, jobs);
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = std::set<std::vector<long>>(a.begin(), a.end()) == want &&
                  std::set<std::vector<long>>(b.begin(), b.end()) == want && a.size() == c.n && sec < 240;
        all = all && ok;
        s << c.N << ": " << a.size() << " at H=" << c.H << ", " << b.size() << " at H=" << 2 * c.H << "; ";
    }
    return {all, s.str()};
}

Outcome weil() {
    int checked = 0, skipped = 0, viol = 0;
    for (long N : known_levels()) {
        const auto& m = model(N);
        for (std::uint32_t p = 2; p <= 31; ++p) {
            if (!is_prime(p) || N % p == 0) continue;
            FpPointSet pts;
            try {
                pts = enumerate_fp_points(m, p, jobs);
            } catch (const Error& e) {
                if (e.code() != Errc::NotPIntegral) throw;
                ++skipped;
                continue;
            }
            if (!good_model_prime(m, p, pts)) {
                ++skipped;
                continue;
            }
            ++checked;
            double dev = std::fabs(static_cast<double>(pts.points.size()) - (p + 1.0));
            viol += dev > 2.0 * m.genus * std::sqrt(static_cast<double>(p));
        }
    }
    std::ostringstream s;
    s << checked << " (level, prime) pairs, " << viol << " violations, " << skipped << " bad pairs skipped";
    return {viol == 0 && checked > 0, s.str()};
}

Outcome cm() {
    std::ostringstream s;
    bool match = false, fallback = false, honest = true;
    s << std::setprecision(6);
    try {
        auto ev = evaluate_cm_point(model(137), -7);
        match = ev.matched_point && sign_normal(ev.matched_point->coords) == std::vector<long>{2, -1, -2, 1} &&
                ev.residual < 1e-3;
        s << "137/-7 residual " << ev.residual;
    } catch (const NonConvergent& e) {
        s << "137/-7 non-convergent (|q| = " << e.partial().q_abs << ")";
    }
    try {
        auto ev = evaluate_cm_point(model(157), -3);
        fallback = ev.used_derivative_fallback;
        s << "; 157/-3 fallback " << (fallback ? "used" : "not used");
    } catch (const NonConvergent& e) {
        fallback = e.partial().used_derivative_fallback;
        s << "; 157/-3 fallback " << (fallback ? "used" : "not used") << ", then non-convergent (|q| = "
          << e.partial().q_abs << ")";
    }
    // a non-convergent evaluation must never come back with a match
    for (long N : known_levels())
        for (long D : {-3L, -4L, -7L, -8L, -11L, -19L, -43L, -67L, -163L}) {
            try {
                auto ev = evaluate_cm_point(model(N), D);
                honest = honest && ev.q_abs <= CmOptions{}.convergence_threshold;
            } catch (const NonConvergent&) {
            } catch (const Error& e) {
                if (e.code() != Errc::NoHeegnerForm) throw;
            }
        }
    s << "; non-convergent cases " << (honest ? "raise" : "do not raise");
    return {match && fallback && honest, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> expect;
    app.add_option("--expect-fail", expect, "criteria known to fail")->delimiter(',');
    app.add_option("--jobs", jobs)->check(CLI::Range(1u, 64u));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"genus tables up to genus 6", level_tables},
        {"class number and genus bounds", bounds},
        {"known rational points", known_points},
        {"q-expansion relations and mutation detection", qexp},
        {"plane models against F_p points", plane_fp},
        {"no rational root of r", linear_factor},
        {"residue disk coverage", coverage},
        {"211 mod 31 patch 2 image", cross_211},
        {"bounded height search", search},
        {"Weil bound", weil},
        {"CM point identification", cm},
    };
    std::set<int> failed;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) failed.insert(static_cast<int>(i + 1));
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail
                  << " [" << std::fixed << std::setprecision(1) << sec << " s]" << std::defaultfloat << std::endl;
    }
    std::set<int> want(expect.begin(), expect.end());
    std::cout << failed.size() << " of " << criteria.size() << " criteria failed";
    if (!want.empty()) std::cout << (failed == want ? " (as expected)" : " (expected set differs)");
    std::cout << "\n";
    return failed == want ? 0 : 1;
}
