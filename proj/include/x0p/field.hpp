#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "x0p/error.hpp"

namespace x0p {

using Rat = mpq_class;

// Rational from num/den, canonicalized; den == 0 throws.
Rat make_rat(const mpz_class& num, const mpz_class& den);
// Accepts "a", "-a/b".
Rat parse_rat(const std::string& s);
std::string to_string(const Rat& r);

bool is_prime(std::uint64_t n);

// The rationals as a coefficient domain.
struct QQ {
    using E = Rat;
    E zero() const { return 0; }
    E one() const { return 1; }
    E from_int(long v) const { return E(v); }
    bool is_zero(const E& a) const { return sgn(a) == 0; }
    E add(const E& a, const E& b) const { return a + b; }
    E sub(const E& a, const E& b) const { return a - b; }
    E mul(const E& a, const E& b) const { return a * b; }
    E neg(const E& a) const { return -a; }
    E inv(const E& a) const;
    bool operator==(const QQ&) const { return true; }
    std::string name() const { return "Q"; }
};

// Z/pZ for a word-sized prime. Residues live in [0, p).
struct Fp {
    using E = std::uint32_t;
    std::uint32_t p = 0;

    Fp() = default;
    explicit Fp(std::uint32_t prime);

    E zero() const { return 0; }
    E one() const { return 1; }
    E from_int(long v) const {
        long r = v % static_cast<long>(p);
        return static_cast<E>(r < 0 ? r + p : r);
    }
    E from_rat(const Rat& r) const;  // NotPIntegral if p | den
    bool is_zero(E a) const { return a == 0; }
    E add(E a, E b) const {
        E s = a + b;
        return s >= p ? s - p : s;
    }
    E sub(E a, E b) const { return a >= b ? a - b : a + p - b; }
    E mul(E a, E b) const { return static_cast<E>(static_cast<std::uint64_t>(a) * b % p); }
    E neg(E a) const { return a == 0 ? 0 : p - a; }
    E pow(E a, std::uint64_t e) const;
    E inv(E a) const;
    bool operator==(const Fp& o) const { return p == o.p; }
    std::string name() const { return "F" + std::to_string(p); }
};

}  // namespace x0p
