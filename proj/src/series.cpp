#include "x0p/series.hpp"

#include <algorithm>

namespace x0p {

namespace {

void trim(Series& s) {
    if (static_cast<int>(s.c.size()) > s.prec) s.c.resize(s.prec);
    while (!s.c.empty() && sgn(s.c.back()) == 0) s.c.pop_back();
}

}  // namespace

Series Series::exact(std::vector<Rat> coeffs) {
    Series s;
    s.c = std::move(coeffs);
    trim(s);
    return s;
}

Series Series::truncated(std::vector<Rat> coeffs, int p) {
    Series s;
    s.c = std::move(coeffs);
    s.prec = p;
    trim(s);
    return s;
}

int Series::valuation() const {
    for (size_t i = 0; i < c.size(); ++i)
        if (sgn(c[i]) != 0) return static_cast<int>(i);
    return prec;
}

Series operator+(const Series& a, const Series& b) {
    Series r;
    r.prec = std::min(a.prec, b.prec);
    size_t n = std::max(a.c.size(), b.c.size());
    if (r.prec != Series::kExact) n = std::min<size_t>(n, r.prec);
    r.c.assign(n, Rat(0));
    for (size_t i = 0; i < n; ++i) r.c[i] = a.at(i) + b.at(i);
    trim(r);
    return r;
}

Series operator*(const Series& a, const Rat& s) {
    Series r = a;
    for (auto& v : r.c) v *= s;
    trim(r);
    return r;
}

Series operator-(const Series& a, const Series& b) { return a + b * Rat(-1); }

Series operator*(const Series& a, const Series& b) {
    Series r;
    // Zero is exact in every coefficient.
    if (a.prec == Series::kExact && a.c.empty()) return a;
    if (b.prec == Series::kExact && b.c.empty()) return b;
    int va = a.valuation(), vb = b.valuation();
    auto add = [](int x, int y) {
        return (x == Series::kExact || y == Series::kExact) ? Series::kExact : x + y;
    };
    r.prec = std::min(add(a.prec, vb), add(b.prec, va));
    if (a.c.empty() || b.c.empty()) {
        r.c.clear();
        return r;
    }
    size_t n = a.c.size() + b.c.size() - 1;
    if (r.prec != Series::kExact) n = std::min<size_t>(n, r.prec);
    r.c.assign(n, Rat(0));
    for (size_t i = 0; i < a.c.size() && i < n; ++i) {
        if (sgn(a.c[i]) == 0) continue;
        for (size_t j = 0; j < b.c.size() && i + j < n; ++j)
            if (sgn(b.c[j]) != 0) r.c[i + j] += a.c[i] * b.c[j];
    }
    trim(r);
    return r;
}

Series pow(const Series& a, unsigned e) {
    Series r = Series::constant(1);
    for (unsigned i = 0; i < e; ++i) r = r * a;
    return r;
}

}  // namespace x0p
