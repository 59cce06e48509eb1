#pragma once

#include <vector>

#include "x0p/mpoly.hpp"

namespace x0p {

// Res_y(a, b) for a, b given by their y-coefficients (polynomials in x, index = power of y).
// Fraction-free elimination on the Sylvester matrix.
QPoly resultant_y(const std::vector<QPoly>& a, const std::vector<QPoly>& b);

// (-1)^{d(d-1)/2} Res_y(Q, dQ/dy) / lc_y(Q) for bivariate Q in (x, y).
QPoly discriminant_y(const MultiPoly& Q, size_t yvar = 1);

// f / gcd(f, f'), monic.
template <class K>
UPoly<K> squarefree_part(const UPoly<K>& f) {
    if (f.is_zero()) throw Error(Errc::Degenerate, "squarefree part of zero");
    if constexpr (std::is_same_v<K, Fp>) {
        if (static_cast<std::uint64_t>(f.deg()) >= f.k.p)
            throw Error(Errc::OutOfDomain, "characteristic does not exceed the degree");
    }
    if (f.deg() == 0) return UPoly<K>::constant(f.k, f.k.one());
    auto g = gcd(f, derivative(f));
    return monic(divmod(f, g).first);
}

// Rational roots, ascending.
std::vector<Rat> rational_roots(const QPoly& f);

// Roots in [0, p) by exhaustive scan.
std::vector<Fp::E> roots_mod_p(const FpPoly& f);

// Clear denominators and content: primitive integer polynomial with positive lc.
std::vector<mpz_class> primitive_integer(const QPoly& f);

}  // namespace x0p
