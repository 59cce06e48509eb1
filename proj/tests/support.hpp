#pragma once

#include <map>
#include <random>

#include "x0p/model.hpp"

namespace testing {

inline const x0p::CanonicalModel& model(long N) {
    static std::map<long, x0p::CanonicalModel> cache;
    auto it = cache.find(N);
    if (it == cache.end()) it = cache.emplace(N, x0p::load_model(x0p::fixture_path(N))).first;
    return it->second;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline long rand_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline x0p::QPoly qpoly(std::initializer_list<long> c) {
    std::vector<x0p::Rat> v;
    for (long x : c) v.emplace_back(x);
    return x0p::QPoly(x0p::QQ{}, v);
}

// Bivariate polynomial in (x, y) from (coefficient, i, j) triples.
inline x0p::MultiPoly bivar(std::initializer_list<std::tuple<long, int, int>> terms) {
    x0p::MultiPoly f({"x", "y"});
    for (auto [c, i, j] : terms) f.add_term({i, j}, c);
    return f;
}

// Table primes per level, in patch order.
inline const std::vector<long>& levels() { return x0p::known_levels(); }

}  // namespace testing
