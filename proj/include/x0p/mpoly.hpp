#pragma once

#include <map>
#include <string>
#include <vector>

#include "x0p/upoly.hpp"

namespace x0p {

using Exps = std::vector<int>;

// Sparse multivariate polynomial over Q. No zero coefficients are stored.
struct MultiPoly {
    std::vector<std::string> vars;
    std::map<Exps, Rat> terms;

    MultiPoly() = default;
    explicit MultiPoly(std::vector<std::string> v) : vars(std::move(v)) {}

    static MultiPoly constant(std::vector<std::string> v, const Rat& c);
    static MultiPoly variable(std::vector<std::string> v, size_t i);

    size_t nvars() const { return vars.size(); }
    bool is_zero() const { return terms.empty(); }
    void add_term(const Exps& e, const Rat& c);
    Rat coeff(const Exps& e) const;

    int total_degree() const;
    int degree_in(size_t var) const;
    bool is_homogeneous() const;

    Rat eval(const std::vector<Rat>& pt) const;

    bool operator==(const MultiPoly& o) const { return vars == o.vars && terms == o.terms; }
};

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
MultiPoly scale(const MultiPoly& a, const Rat& s);
MultiPoly pow(const MultiPoly& a, unsigned e);

// f(vals[0], ..., vals[n-1]) where each value is a polynomial in a common ring.
MultiPoly substitute(const MultiPoly& f, const std::vector<MultiPoly>& vals);

// Coefficients of var^0..var^d as polynomials in the remaining single variable.
// Requires a bivariate polynomial.
std::vector<QPoly> coeffs_in(const MultiPoly& f, size_t var);
MultiPoly from_coeffs(const std::vector<QPoly>& cs, std::vector<std::string> vars, size_t var);

std::string to_string(const MultiPoly& f);

// Reduction of a p-integral polynomial.
struct MultiPolyFp {
    Fp k;
    size_t nvars = 0;
    std::vector<std::pair<Fp::E, Exps>> terms;

    Fp::E eval(const std::vector<Fp::E>& pt) const;
    bool is_zero() const { return terms.empty(); }
};

MultiPolyFp reduce_mod_p(const MultiPoly& f, std::uint32_t p);
FpPoly reduce_mod_p(const QPoly& f, std::uint32_t p);
// Inverse of reduce for tests: lift residues to integers in [0, p).
QPoly lift(const FpPoly& f);

}  // namespace x0p
