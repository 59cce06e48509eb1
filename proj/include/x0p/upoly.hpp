#pragma once

#include <algorithm>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "x0p/field.hpp"

namespace x0p {

// Dense univariate polynomial, lowest degree first. Zero has no coefficients.
template <class K>
struct UPoly {
    using E = typename K::E;
    K k{};
    std::vector<E> c;

    UPoly() = default;
    explicit UPoly(K field) : k(field) {}
    UPoly(K field, std::vector<E> coeffs) : k(field), c(std::move(coeffs)) { trim(); }

    static UPoly constant(K field, E v) { return UPoly(field, {v}); }
    static UPoly x(K field) { return UPoly(field, {field.zero(), field.one()}); }

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const E& lc() const { return c.back(); }
    E coeff(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : k.zero(); }

    void trim() {
        while (!c.empty() && k.is_zero(c.back())) c.pop_back();
    }

    E operator()(const E& v) const {
        E r = k.zero();
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = k.add(k.mul(r, v), *it);
        return r;
    }

    bool operator==(const UPoly& o) const { return k == o.k && c == o.c; }
    bool operator!=(const UPoly& o) const { return !(*this == o); }
};

using QPoly = UPoly<QQ>;
using FpPoly = UPoly<Fp>;

template <class K>
void check_same(const UPoly<K>& a, const UPoly<K>& b) {
    if (!(a.k == b.k))
        throw Error(Errc::DomainMismatch, "polynomials over " + a.k.name() + " and " + b.k.name());
}

template <class K>
UPoly<K> operator+(const UPoly<K>& a, const UPoly<K>& b) {
    check_same(a, b);
    std::vector<typename K::E> r(std::max(a.c.size(), b.c.size()), a.k.zero());
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] = a.k.add(r[i], b.c[i]);
    return UPoly<K>(a.k, std::move(r));
}

template <class K>
UPoly<K> operator-(const UPoly<K>& a) {
    UPoly<K> r = a;
    for (auto& v : r.c) v = a.k.neg(v);
    return r;
}

template <class K>
UPoly<K> operator-(const UPoly<K>& a, const UPoly<K>& b) {
    return a + (-b);
}

template <class K>
UPoly<K> operator*(const UPoly<K>& a, const UPoly<K>& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return UPoly<K>(a.k);
    std::vector<typename K::E> r(a.c.size() + b.c.size() - 1, a.k.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.k.is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = a.k.add(r[i + j], a.k.mul(a.c[i], b.c[j]));
    }
    return UPoly<K>(a.k, std::move(r));
}

template <class K>
UPoly<K> scale(const UPoly<K>& a, const typename K::E& s) {
    UPoly<K> r = a;
    for (auto& v : r.c) v = a.k.mul(v, s);
    r.trim();
    return r;
}

template <class K>
UPoly<K> pow(const UPoly<K>& a, unsigned e) {
    UPoly<K> r = UPoly<K>::constant(a.k, a.k.one());
    for (unsigned i = 0; i < e; ++i) r = r * a;
    return r;
}

// Quotient and remainder; b must be nonzero.
template <class K>
std::pair<UPoly<K>, UPoly<K>> divmod(const UPoly<K>& a, const UPoly<K>& b) {
    check_same(a, b);
    if (b.is_zero()) throw Error(Errc::Degenerate, "polynomial division by zero");
    const K& k = a.k;
    UPoly<K> r = a;
    if (a.deg() < b.deg()) return {UPoly<K>(k), r};
    std::vector<typename K::E> q(a.deg() - b.deg() + 1, k.zero());
    auto ilc = k.inv(b.lc());
    for (int i = r.deg(); i >= b.deg(); --i) {
        auto t = k.mul(r.c[i], ilc);
        q[i - b.deg()] = t;
        if (k.is_zero(t)) continue;
        for (int j = 0; j <= b.deg(); ++j) r.c[i - b.deg() + j] = k.sub(r.c[i - b.deg() + j], k.mul(t, b.c[j]));
    }
    r.trim();
    return {UPoly<K>(k, std::move(q)), r};
}

template <class K>
UPoly<K> derivative(const UPoly<K>& a) {
    std::vector<typename K::E> r;
    for (int i = 1; i <= a.deg(); ++i) r.push_back(a.k.mul(a.k.from_int(i), a.c[i]));
    return UPoly<K>(a.k, std::move(r));
}

template <class K>
UPoly<K> monic(const UPoly<K>& a) {
    if (a.is_zero()) return a;
    return scale(a, a.k.inv(a.lc()));
}

// Monic gcd; gcd(0, 0) = 0.
template <class K>
UPoly<K> gcd(UPoly<K> a, UPoly<K> b) {
    check_same(a, b);
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = monic(r);
    }
    return monic(a);
}

template <class K>
std::string to_string(const UPoly<K>& a, const std::string& var = "x") {
    if (a.is_zero()) return "0";
    std::string s;
    for (int i = a.deg(); i >= 0; --i) {
        if (a.k.is_zero(a.c[i])) continue;
        std::string cs;
        if constexpr (std::is_same_v<K, QQ>)
            cs = a.c[i].get_str();
        else
            cs = std::to_string(a.c[i]);
        if (!s.empty()) s += (cs[0] == '-') ? " - " : " + ";
        else if (cs[0] == '-') s += "-";
        if (cs[0] == '-') cs = cs.substr(1);
        if (i == 0 || cs != "1") s += cs;
        if (i > 0) s += (i == 0 || cs != "1" ? "*" : "") + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
}

}  // namespace x0p
