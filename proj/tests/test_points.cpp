#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "support.hpp"
#include "x0p/disks.hpp"
#include "x0p/genus.hpp"
#include "x0p/points.hpp"

using namespace x0p;
using namespace testing;

namespace {

std::set<std::vector<long>> known_set(const CanonicalModel& m) {
    std::set<std::vector<long>> s;
    for (auto& k : m.known_points) {
        auto c = k.coords;
        for (long v : c)
            if (v) {
                if (v < 0)
                    for (auto& w : c) w = -w;
                break;
            }
        s.insert(c);
    }
    return s;
}

long height(const std::vector<long>& v) {
    long h = 0;
    for (long c : v) h = std::max(h, std::labs(c));
    return h;
}

// Smallest a = N k admitting a primitive form (a, b, c) of discriminant D, by direct search.
long min_heegner_a(long N, long D) {
    for (long a = N; a <= 64 * N; a += N)
        for (long b = -a; b <= a; ++b)
            if ((b * b - D) % (4 * a) == 0) {
                long c = (b * b - D) / (4 * a);
                if (std::gcd(std::gcd(a, std::labs(b)), c) == 1) return a;
            }
    return 0;
}

const FpPointSet& cached_points(long N, std::uint32_t p) {
    static std::map<std::pair<long, std::uint32_t>, FpPointSet> cache;
    auto key = std::make_pair(N, p);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, enumerate_fp_points(model(N), p, 2)).first;
    return it->second;
}

FpPlanePoint plane(std::uint32_t p, long x, long y, bool inf = false) {
    Fp k(p);
    return {inf, k.from_int(x), k.from_int(y)};
}

}  // namespace

TEST_CASE("F_p point counts match the reference enumeration") {
    std::ifstream in(std::string(X0P_TEST_DATA) + "/fp_counts.json");
    REQUIRE(in);
    auto ref = nlohmann::json::parse(in);
    int compared = 0;
    for (long N : levels()) {
        const auto& m = model(N);
        for (auto& [ps, cnt] : ref.at(std::to_string(N)).items()) {
            auto p = static_cast<std::uint32_t>(std::stoul(ps));
            const auto& pts = cached_points(N, p);
            CHECK_MESSAGE(pts.points.size() == cnt.get<size_t>(), N << " mod " << p);
            ++compared;
        }
    }
    CHECK(compared > 150);
    auto p137 = enumerate_fp_points(model(137), 5);
    CHECK(p137.points.size() == 8);
    CHECK(p137.points.size() <= 23);
}

TEST_CASE("enumerated points are normalized, distinct and on the model") {
    for (long N : {137L, 163L, 263L}) {
        const auto& m = model(N);
        for (std::uint32_t p : {5u, 7u, 11u}) {
            std::vector<MultiPolyFp> eqs;
            try {
                for (auto& e : m.equations) eqs.push_back(reduce_mod_p(e, p));
            } catch (const Error&) {
                continue;
            }
            auto pts = enumerate_fp_points(m, p);
            CHECK(std::is_sorted(pts.points.begin(), pts.points.end()));
            CHECK(std::adjacent_find(pts.points.begin(), pts.points.end()) == pts.points.end());
            for (auto& P : pts.points) {
                auto lead = std::find_if(P.begin(), P.end(), [](Fp::E c) { return c != 0; });
                REQUIRE(lead != P.end());
                CHECK(*lead == 1);
                for (auto& e : eqs) CHECK(e.eval(P) == 0);
            }
        }
    }
    CHECK(normalize(Fp(7), {0, 3, 6}) == FpPoint{0, 1, 2});
    CHECK(reduce_point({5, 10, 0}, 5) == std::nullopt);
    CHECK(reduce_point({-1, 2, 3}, 5) == FpPoint{1, 3, 2});
}

TEST_CASE("Weil bound at good primes") {
    int checked = 0, violations = 0;
    for (long N : levels()) {
        const auto& m = model(N);
        for (std::uint32_t p = 2; p <= 31; ++p) {
            if (!is_prime(p) || N % p == 0) continue;
            FpPointSet pts;
            try {
                pts = cached_points(N, p);
            } catch (const Error& e) {
                REQUIRE(e.code() == Errc::NotPIntegral);
                continue;
            }
            if (!good_model_prime(m, p, pts)) continue;
            ++checked;
            double dev = std::fabs(static_cast<double>(pts.points.size()) - (p + 1.0));
            violations += dev > 2.0 * m.genus * std::sqrt(static_cast<double>(p));
        }
    }
    CHECK(checked > 100);
    CHECK(violations == 0);
}

TEST_CASE("enumeration rejects primes dividing the level") {
    try {
        enumerate_fp_points(model(137), 137);
        FAIL("p = N accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadPrime);
    }
}

TEST_CASE("known points reduce into the F_p points") {
    for (long N : levels()) {
        const auto& m = model(N);
        for (std::uint32_t p : {5u, 13u}) {
            FpPointSet pts;
            try {
                pts = enumerate_fp_points(m, p);
            } catch (const Error&) {
                continue;
            }
            for (auto& k : m.known_points) {
                auto P = reduce_point(k.coords, p);
                REQUIRE(P);
                CHECK_MESSAGE(std::binary_search(pts.points.begin(), pts.points.end(), *P), N << " " << k.label);
            }
        }
    }
}

TEST_CASE("enumeration does not depend on the worker count") {
    for (long N : {163L, 271L}) {
        auto a = enumerate_fp_points(model(N), 13, 1), b = enumerate_fp_points(model(N), 13, 4);
        CHECK(a.points == b.points);
    }
}

TEST_CASE("F_31 points of X0+(211) through patch 2") {
    const auto& m = model(211);
    const auto& patch = m.patch(2);
    const std::uint32_t p = 31;
    auto pts = enumerate_fp_points(m, p);
    std::set<FpPlanePoint> images;
    size_t undefined = 0;
    for (auto& P : pts.points) {
        auto r = eval_patch(m, patch, P, p);
        if (r.defined())
            images.insert(*r.point);
        else
            ++undefined;
    }
    // images of the reductions of the rational points, resolved where the map is undefined
    std::set<FpPlanePoint> rational;
    for (auto& k : m.known_points) rational.insert(resolved_image(m, patch, *reduce_point(k.coords, p), p));
    const std::set<FpPlanePoint> listed = {
        plane(p, -1, 1), plane(p, 15, 0) /* -1/2 */, plane(p, 1, -2), plane(p, -2, 3),
        plane(p, -1, 2), plane(p, 0, -1), plane(p, 1, -3, true), plane(p, 1, 0, true),
    };
    CHECK(rational == listed);
    for (auto& P : listed)
        if (P != plane(p, 0, -1)) CHECK(images.count(P) == 1);
    // The full F_31 image is strictly larger than the listed set.
    CHECK(images.size() == 27);
    CHECK(undefined == 7);
}

TEST_CASE("bounded height search") {
    struct Case {
        long N, H;
    };
    for (auto [N, H] : {Case{137, 19}, Case{199, 5}, Case{251, 16}}) {
        const auto& m = model(N);
        auto want = known_set(m);
        long hmax = 0;
        for (auto& v : want) hmax = std::max(hmax, height(v));
        CHECK(hmax == H);
        for (long h : {H, 2 * H}) {
            auto got = search_rational_points(m, h);
            CHECK_MESSAGE(std::set<std::vector<long>>(got.begin(), got.end()) == want, N << " H=" << h);
        }
    }
    CHECK(search_rational_points(model(137), 19).size() == 9);
    CHECK(search_rational_points(model(199), 5).size() == 8);
    CHECK(search_rational_points(model(251), 16).size() == 6);
    auto partial = search_rational_points(model(251), 15);
    CHECK(partial.size() == 5);
    CHECK(std::find(partial.begin(), partial.end(), std::vector<long>{16, -3, -6, 1}) == partial.end());
}

TEST_CASE("search results are exact and independent of workers") {
    const auto& m = model(163);
    auto a = search_rational_points(m, 6, 1), b = search_rational_points(m, 6, 3);
    CHECK(a == b);
    for (auto& v : a) {
        CHECK(std::accumulate(v.begin(), v.end(), 0L, [](long g, long c) { return std::gcd(g, c); }) == 1);
        for (auto& e : m.equations) CHECK(e.eval(to_rat(v)) == 0);
    }
}

TEST_CASE("Heegner forms") {
    auto f = heegner_form(163, -163);
    CHECK(f.a == 163);
    CHECK(f.b * f.b - 4 * f.a * f.c == -163);
    auto g = heegner_form(173, -163);
    CHECK(g.a == 173);
    CHECK(g.b == 23);
    CHECK(g.c == 1);
    for (long N : levels())
        for (long D : {-3L, -4L, -7L, -8L, -11L, -19L, -43L, -67L, -163L, -N, -4 * N}) {
            long want = min_heegner_a(N, D);
            if (want == 0) {
                CHECK_THROWS_AS(heegner_form(N, D), Error);
                continue;
            }
            auto h = heegner_form(N, D);
            CHECK(h.a == want);
            CHECK(h.a % N == 0);
            CHECK(h.a > 0);
            CHECK(h.b * h.b - 4 * h.a * h.c == D);
            CHECK(((h.b * h.b - D) % (4 * N)) == 0);
        }
    try {
        heegner_form(137, -3);
        FAIL("no form expected");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoHeegnerForm);
    }
    try {
        heegner_form(137, -5);
        FAIL("-5 accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidDiscriminant);
    }
}

TEST_CASE("structural vanishing") {
    CHECK(forced_vanishing(157, -3));
    CHECK(forced_vanishing(157, -4));
    CHECK(forced_vanishing(163, -163));
    CHECK(forced_vanishing(137, -548));
    CHECK_FALSE(forced_vanishing(137, -7));
}

TEST_CASE("CM evaluation") {
    // Im tau = sqrt|D| / (2N) keeps |q| close to 1 for small |D|.
    try {
        evaluate_cm_point(model(137), -7);
        FAIL("expected non-convergence");
    } catch (const NonConvergent& e) {
        CHECK(e.code() == Errc::NonConvergent);
        CHECK(e.partial().q_abs == doctest::Approx(std::exp(-M_PI * std::sqrt(7.0) / 137)).epsilon(1e-12));
        CHECK(e.partial().q_abs == doctest::Approx(0.941133).epsilon(1e-5));
        CHECK(e.partial().form.a == 137);
        CHECK_FALSE(e.partial().used_derivative_fallback);
    }
    try {
        evaluate_cm_point(model(157), -3);
        FAIL("expected non-convergence");
    } catch (const NonConvergent& e) {
        CHECK(e.partial().used_derivative_fallback);
    }
    CHECK_THROWS_AS(evaluate_cm_point(model(137), -5), Error);

    // Convergent case: compare with a direct evaluation of the series.
    const auto& m = model(173);
    auto ev = evaluate_cm_point(m, -163);
    CHECK(ev.q_abs < 0.85);
    auto h = heegner_form(173, -163);
    std::complex<double> tau(-static_cast<double>(h.b) / (2.0 * h.a), std::sqrt(163.0) / (2.0 * h.a));
    std::complex<double> q = std::exp(std::complex<double>(0, 2 * M_PI) * tau);
    std::vector<std::complex<double>> v;
    for (auto& s : m.qexp) {
        std::complex<double> acc = 0;
        for (int n = 19; n >= 1; --n) acc = (acc + static_cast<double>(s[n - 1])) * q;
        v.push_back(acc);
    }
    auto big = *std::max_element(v.begin(), v.end(), [](auto a, auto b) { return std::abs(a) < std::abs(b); });
    REQUIRE(ev.approx_coords.size() == v.size());
    for (size_t i = 0; i < v.size(); ++i) CHECK(std::abs(ev.approx_coords[i] - v[i] / big) < 1e-9);
    // the truncation error is of order |q|^20, so the nearest known point is within a few |q|^20
    double tail = std::pow(ev.q_abs, 20) / (1 - ev.q_abs);
    CHECK(ev.residual < 10 * tail);
    CHECK_FALSE(ev.matched_point.has_value());
}
