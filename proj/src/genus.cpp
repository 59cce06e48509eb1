#include "x0p/genus.hpp"

#include <cmath>
#include <numeric>
#include <thread>

#include "x0p/error.hpp"

namespace x0p {

namespace {

std::vector<std::pair<long, int>> factor(long n) {
    std::vector<std::pair<long, int>> f;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

long euler_phi(long n) {
    long r = n;
    for (auto [p, e] : factor(n)) r = r / p * (p - 1);
    return r;
}

// Kronecker-style symbols needed for elliptic point counts.
int legendre_minus1(long p) {
    if (p == 2) return 0;
    return p % 4 == 1 ? 1 : -1;
}
int legendre_minus3(long p) {
    if (p == 3) return 0;
    if (p == 2) return -1;
    return p % 3 == 1 ? 1 : -1;
}

bool is_prime_level(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

void check_discriminant(long D) {
    long r = ((D % 4) + 4) % 4;
    if (D >= 0 || (r != 0 && r != 1))
        throw Error(Errc::InvalidDiscriminant, std::to_string(D) + " is not a negative discriminant");
}

long class_number(long D) {
    check_discriminant(D);
    long h = 0;
    const long absD = -D;
    for (long b = absD % 2; 3 * b * b <= absD; b += 2) {
        long ac = (b * b + absD) / 4;  // a*c
        for (long a = std::max(b, 1L); a * a <= ac; ++a) {
            if (ac % a) continue;
            long c = ac / a;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            h += (b == 0 || a == b || a == c) ? 1 : 2;
        }
    }
    return h;
}

double class_number_upper_bound(long D) {
    check_discriminant(D);
    double a = std::fabs(static_cast<double>(D));
    return std::sqrt(a) / M_PI * (std::log(4.0 * a) + 2.0);
}

long nu(long N) {
    if (N < 5) throw Error(Errc::OutOfDomain, "fixed-point formula needs N >= 5");
    long h = class_number(-4 * N);
    if (N % 4 == 3) h += class_number(-N);
    return h;
}

long genus_X0(long N) {
    if (N < 1) throw Error(Errc::OutOfDomain, "level must be positive");
    auto f = factor(N);
    long mu = N;
    for (auto [p, e] : f) mu = mu / p * (p + 1);
    long nu2 = 0, nu3 = 0;
    if (N % 4 != 0) {
        nu2 = 1;
        for (auto [p, e] : f) nu2 *= 1 + legendre_minus1(p);
    }
    if (N % 9 != 0) {
        nu3 = 1;
        for (auto [p, e] : f) nu3 *= 1 + legendre_minus3(p);
    }
    long cusps = 0;
    for (long d = 1; d <= N; ++d)
        if (N % d == 0) cusps += euler_phi(std::gcd(d, N / d));
    long twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    if (twelve_g % 12 || twelve_g < 0)
        throw Error(Errc::Internal, "non-integral genus for N = " + std::to_string(N));
    return twelve_g / 12;
}

long genus_X0_plus(long N) {
    if (N < 5) return 0;  // X0(N) itself has genus 0
    long g0 = genus_X0(N);
    long num = 2 * g0 - 2 - nu(N) + 4;
    if (num % 4 || num < 0) throw Error(Errc::Internal, "non-integral quotient genus for N = " + std::to_string(N));
    return num / 4;
}

GenusRecord genus_record(long N) {
    GenusRecord r;
    r.N = N;
    r.g0 = genus_X0(N);
    if (N < 5) {
        // Every X0(N) with N < 5 has genus 0, so the quotient does too and
        // Riemann-Hurwitz forces two fixed points of the involution.
        r.g0plus = 0;
        r.nu = 2 * r.g0 + 2;
        return r;
    }
    r.nu = nu(N);
    r.g0plus = genus_X0_plus(N);
    return r;
}

double genus_lower_bound(long N) {
    double n = static_cast<double>(N), s = std::sqrt(n);
    return (n - 5.0 * s + 4.0) / 24.0 - s / M_PI * (std::log(16.0 * n) + 2.0);
}

long level_cutoff(long max_genus) {
    const double eps = 1e-6;
    long last = 0;
    for (long N = 1;; ++N) {
        double b = genus_lower_bound(N);
        if (b <= max_genus + eps) last = N;
        // The bound is eventually increasing; stop well past the last failure.
        if (N > 2 * last + 1000 && b > genus_lower_bound(N - 1)) break;
    }
    return last;
}

long scan_bound(long max_genus) {
    long c = level_cutoff(max_genus);
    return (c + 99) / 100 * 100;
}

LevelTable enumerate_levels(long max_genus, unsigned jobs) {
    if (max_genus < 0) throw Error(Errc::OutOfDomain, "max genus must be non-negative");
    LevelTable t;
    t.max_genus = max_genus;
    t.cutoff = scan_bound(max_genus);
    std::vector<long> g(t.cutoff + 1, -1);
    jobs = std::max(1u, jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (long N = 2 + w; N <= t.cutoff; N += jobs) g[N] = genus_record(N).g0plus;
        });
    for (auto& th : pool) th.join();
    for (long N = 2; N <= t.cutoff; ++N) {
        if (g[N] > max_genus) continue;
        (is_prime_level(N) ? t.prime : t.composite)[g[N]].push_back(N);
    }
    return t;
}

const LevelTable& reference_levels() {
    static const LevelTable t = [] {
        LevelTable r;
        r.max_genus = 6;
        r.cutoff = 13300;
        r.prime = {
            {0, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71}},
            {1, {37, 43, 53, 61, 79, 83, 89, 101, 131}},
            {2, {67, 73, 103, 107, 167, 191}},
            {3, {97, 109, 113, 127, 139, 149, 151, 179, 239}},
            {4, {137, 173, 199, 251, 311}},
            {5, {157, 181, 227, 263}},
            {6, {163, 197, 211, 223, 269, 271, 359}},
        };
        r.composite = {
            {0, {4, 6, 8, 9, 10, 12, 14, 15, 16, 18, 20, 21, 24, 25, 26, 27, 32, 35, 36, 39, 49, 50}},
            {1, {22, 28, 30, 33, 34, 38, 40, 44, 45, 48, 51, 54, 55, 56, 63, 64, 65, 75, 81, 95, 119}},
            {2, {42, 46, 52, 57, 62, 68, 69, 72, 74, 77, 80, 87, 91, 98, 111, 121, 125, 143}},
            {3, {58, 60, 66, 76, 85, 86, 96, 99, 100, 104, 128, 169}},
            {4, {70, 82, 84, 88, 90, 92, 93, 94, 108, 115, 116, 117, 129, 135, 147, 155, 159, 161, 215}},
            {5, {78, 105, 106, 110, 112, 122, 123, 133, 134, 144, 145, 146, 171, 175, 185, 209}},
            {6, {118, 124, 136, 141, 152, 153, 164, 183, 203, 221, 299}},
        };
        return r;
    }();
    return t;
}

}  // namespace x0p
