#include "x0p/mpoly.hpp"

#include <algorithm>
#include <numeric>

namespace x0p {

MultiPoly MultiPoly::constant(std::vector<std::string> v, const Rat& c) {
    MultiPoly r(std::move(v));
    r.add_term(Exps(r.nvars(), 0), c);
    return r;
}

MultiPoly MultiPoly::variable(std::vector<std::string> v, size_t i) {
    MultiPoly r(std::move(v));
    Exps e(r.nvars(), 0);
    e.at(i) = 1;
    r.add_term(e, 1);
    return r;
}

void MultiPoly::add_term(const Exps& e, const Rat& c) {
    if (e.size() != vars.size()) throw Error(Errc::Invariant, "exponent arity mismatch");
    if (sgn(c) == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
        terms.emplace(e, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) terms.erase(it);
}

Rat MultiPoly::coeff(const Exps& e) const {
    auto it = terms.find(e);
    return it == terms.end() ? Rat(0) : it->second;
}

int MultiPoly::total_degree() const {
    int d = -1;
    for (auto& [e, c] : terms) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

int MultiPoly::degree_in(size_t var) const {
    int d = -1;
    for (auto& [e, c] : terms) d = std::max(d, e.at(var));
    return d;
}

bool MultiPoly::is_homogeneous() const {
    int d = -1;
    for (auto& [e, c] : terms) {
        int s = std::accumulate(e.begin(), e.end(), 0);
        if (d >= 0 && s != d) return false;
        d = s;
    }
    return true;
}

Rat MultiPoly::eval(const std::vector<Rat>& pt) const {
    if (pt.size() != vars.size()) throw Error(Errc::Invariant, "point arity mismatch");
    Rat s = 0;
    for (auto& [e, c] : terms) {
        Rat t = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (int j = 0; j < e[i]; ++j) t *= pt[i];
        s += t;
    }
    return s;
}

static void same_ring(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars != b.vars) throw Error(Errc::DomainMismatch, "polynomials in different variables");
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    same_ring(a, b);
    MultiPoly r = a;
    for (auto& [e, c] : b.terms) r.add_term(e, c);
    return r;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + scale(b, -1); }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    same_ring(a, b);
    MultiPoly r(a.vars);
    Exps e(a.nvars());
    for (auto& [ea, ca] : a.terms)
        for (auto& [eb, cb] : b.terms) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

MultiPoly scale(const MultiPoly& a, const Rat& s) {
    MultiPoly r(a.vars);
    if (sgn(s) == 0) return r;
    for (auto& [e, c] : a.terms) r.terms.emplace(e, c * s);
    return r;
}

MultiPoly pow(const MultiPoly& a, unsigned e) {
    MultiPoly r = MultiPoly::constant(a.vars, 1);
    for (unsigned i = 0; i < e; ++i) r = r * a;
    return r;
}

MultiPoly substitute(const MultiPoly& f, const std::vector<MultiPoly>& vals) {
    if (vals.size() != f.nvars() || vals.empty()) throw Error(Errc::Invariant, "substitution arity mismatch");
    const auto& ring = vals[0].vars;
    MultiPoly r(ring);
    for (auto& [e, c] : f.terms) {
        MultiPoly t = MultiPoly::constant(ring, c);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = t * pow(vals[i], e[i]);
        r = r + t;
    }
    return r;
}

std::vector<QPoly> coeffs_in(const MultiPoly& f, size_t var) {
    if (f.nvars() != 2) throw Error(Errc::Invariant, "expected a bivariate polynomial");
    size_t other = 1 - var;
    int d = std::max(f.degree_in(var), 0);
    std::vector<std::vector<Rat>> raw(d + 1);
    for (auto& [e, c] : f.terms) {
        auto& v = raw[e[var]];
        if (static_cast<int>(v.size()) <= e[other]) v.resize(e[other] + 1, Rat(0));
        v[e[other]] = c;
    }
    std::vector<QPoly> out;
    for (auto& v : raw) out.emplace_back(QQ{}, v);
    return out;
}

MultiPoly from_coeffs(const std::vector<QPoly>& cs, std::vector<std::string> vars, size_t var) {
    MultiPoly r(std::move(vars));
    for (size_t j = 0; j < cs.size(); ++j)
        for (int i = 0; i <= cs[j].deg(); ++i) {
            Exps e(2, 0);
            e[var] = static_cast<int>(j);
            e[1 - var] = i;
            r.add_term(e, cs[j].c[i]);
        }
    return r;
}

std::string to_string(const MultiPoly& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
        auto& [e, c] = *it;
        std::string cs = c.get_str();
        bool neg = cs[0] == '-';
        if (neg) cs = cs.substr(1);
        s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += f.vars[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) s += cs;
        else if (cs == "1") s += mono;
        else s += cs + "*" + mono;
    }
    return s;
}

Fp::E MultiPolyFp::eval(const std::vector<Fp::E>& pt) const {
    Fp::E s = 0;
    for (auto& [c, e] : terms) {
        Fp::E t = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (int j = 0; j < e[i]; ++j) t = k.mul(t, pt[i]);
        s = k.add(s, t);
    }
    return s;
}

MultiPolyFp reduce_mod_p(const MultiPoly& f, std::uint32_t p) {
    MultiPolyFp r;
    r.k = Fp(p);
    r.nvars = f.nvars();
    for (auto& [e, c] : f.terms) {
        auto v = r.k.from_rat(c);
        if (v) r.terms.emplace_back(v, e);
    }
    return r;
}

FpPoly reduce_mod_p(const QPoly& f, std::uint32_t p) {
    Fp k(p);
    std::vector<Fp::E> c;
    for (auto& v : f.c) c.push_back(k.from_rat(v));
    return FpPoly(k, std::move(c));
}

QPoly lift(const FpPoly& f) {
    std::vector<Rat> c;
    for (auto v : f.c) c.emplace_back(static_cast<unsigned long>(v));
    return QPoly(QQ{}, std::move(c));
}

}  // namespace x0p
