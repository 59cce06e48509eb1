#pragma once

#include <limits>
#include <vector>

#include "x0p/field.hpp"

namespace x0p {

// Power series in q known modulo q^prec. Coefficients c[i] are exact for i < min(prec, c.size()),
// and zero beyond c.size(). prec == kExact marks a polynomial known exactly.
struct Series {
    static constexpr int kExact = std::numeric_limits<int>::max();

    std::vector<Rat> c;
    int prec = kExact;

    static Series exact(std::vector<Rat> coeffs);
    static Series truncated(std::vector<Rat> coeffs, int prec);
    static Series constant(const Rat& v) { return exact({v}); }

    // First index with nonzero known coefficient, or prec if none is known.
    int valuation() const;
    // true if every known coefficient vanishes
    bool is_zero_known() const { return valuation() >= known(); }
    int known() const { return prec == kExact ? static_cast<int>(c.size()) : prec; }
    Rat at(int i) const { return i < static_cast<int>(c.size()) ? c[i] : Rat(0); }
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator*(const Series& a, const Series& b);
Series operator*(const Series& a, const Rat& s);
Series pow(const Series& a, unsigned e);

}  // namespace x0p
