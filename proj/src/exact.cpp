#include "x0p/exact.hpp"

#include <algorithm>

namespace x0p {

namespace {

using ZPoly = std::vector<mpz_class>;  // lowest degree first, trimmed

void ztrim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    ztrim(r);
    return r;
}

ZPoly zsub(ZPoly a, const ZPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    ztrim(a);
    return a;
}

// a / b where the division is known to be exact in Z[x].
ZPoly zdivexact(ZPoly a, const ZPoly& b) {
    if (b.empty()) throw Error(Errc::Internal, "exact division by zero polynomial");
    if (a.empty()) return {};
    int db = static_cast<int>(b.size()) - 1;
    int da = static_cast<int>(a.size()) - 1;
    if (da < db) throw Error(Errc::Internal, "inexact polynomial division");
    ZPoly q(da - db + 1);
    for (int i = da; i >= db; --i) {
        if (a[i] == 0) continue;
        mpz_class t;
        mpz_divexact(t.get_mpz_t(), a[i].get_mpz_t(), b[db].get_mpz_t());
        q[i - db] = t;
        for (int j = 0; j <= db; ++j)
            if (b[j] != 0) mpz_submul(a[i - db + j].get_mpz_t(), t.get_mpz_t(), b[j].get_mpz_t());
    }
    ztrim(a);
    if (!a.empty()) throw Error(Errc::Internal, "inexact polynomial division");
    ztrim(q);
    return q;
}

mpz_class common_denominator(const std::vector<QPoly>& ps) {
    mpz_class l = 1;
    for (auto& p : ps)
        for (auto& c : p.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    return l;
}

ZPoly to_z(const QPoly& p, const mpz_class& scale) {
    ZPoly r;
    for (auto& c : p.c) {
        Rat v = c * scale;
        if (v.get_den() != 1) throw Error(Errc::Internal, "scaling did not clear denominators");
        r.push_back(v.get_num());
    }
    ztrim(r);
    return r;
}

QPoly to_q(const ZPoly& z) {
    std::vector<Rat> c;
    for (auto& v : z) c.emplace_back(v);
    return QPoly(QQ{}, std::move(c));
}

int degree_y(const std::vector<QPoly>& a) {
    int d = static_cast<int>(a.size()) - 1;
    while (d >= 0 && a[d].is_zero()) --d;
    return d;
}

}  // namespace

QPoly resultant_y(const std::vector<QPoly>& a, const std::vector<QPoly>& b) {
    int m = degree_y(a), n = degree_y(b);
    if (m < 0 || n < 0) return QPoly(QQ{});
    if (m == 0 && n == 0) return QPoly::constant(QQ{}, 1);
    mpz_class sa = common_denominator(a), sb = common_denominator(b);
    int size = m + n;
    std::vector<std::vector<ZPoly>> M(size, std::vector<ZPoly>(size));
    // Rows hold coefficients from the top power of y down.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) M[i][i + j] = to_z(a[m - j], sa);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) M[n + i][i + j] = to_z(b[n - j], sb);

    int sign = 1;
    ZPoly prev{mpz_class(1)};
    for (int k = 0; k < size - 1; ++k) {
        if (M[k][k].empty()) {
            int r = k + 1;
            while (r < size && M[r][k].empty()) ++r;
            if (r == size) return QPoly(QQ{});
            std::swap(M[k], M[r]);
            sign = -sign;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j) {
                ZPoly t = zsub(zmul(M[k][k], M[i][j]), zmul(M[i][k], M[k][j]));
                M[i][j] = zdivexact(std::move(t), prev);
            }
            M[i][k].clear();
        }
        prev = M[k][k];
    }
    QPoly det = to_q(M[size - 1][size - 1]);
    // Undo the row scalings: n rows of a scaled by sa, m rows of b scaled by sb.
    mpz_class fa, fb;
    mpz_pow_ui(fa.get_mpz_t(), sa.get_mpz_t(), n);
    mpz_pow_ui(fb.get_mpz_t(), sb.get_mpz_t(), m);
    Rat s = Rat(sign) / Rat(fa * fb);
    return scale(det, s);
}

QPoly discriminant_y(const MultiPoly& Q, size_t yvar) {
    auto cs = coeffs_in(Q, yvar);
    int d = degree_y(cs);
    if (d < 1) throw Error(Errc::Degenerate, "polynomial is constant in y");
    cs.resize(d + 1);
    std::vector<QPoly> dq;
    for (int j = 1; j <= d; ++j) dq.push_back(scale(cs[j], Rat(j)));
    QPoly res = resultant_y(cs, dq);
    if ((d * (d - 1) / 2) % 2) res = -res;
    auto [q, r] = divmod(res, cs[d]);
    if (!r.is_zero()) throw Error(Errc::Internal, "leading coefficient does not divide the resultant");
    return q;
}

std::vector<mpz_class> primitive_integer(const QPoly& f) {
    if (f.is_zero()) return {};
    mpz_class l = common_denominator({f});
    ZPoly z = to_z(f, l);
    mpz_class g = 0;
    for (auto& v : z) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    for (auto& v : z) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    if (z.back() < 0)
        for (auto& v : z) v = -v;
    return z;
}

namespace {

mpz_class zeval_mod(const ZPoly& f, const mpz_class& x, const mpz_class& m) {
    mpz_class r = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        r = r * x + *it;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    }
    return r;
}

// a/b with a = b*r mod m, |a|, b <= sqrt(m/2); false if none.
bool rational_reconstruct(const mpz_class& r, const mpz_class& m, mpz_class& a, mpz_class& b) {
    mpz_class bound;
    mpz_class half = m / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    mpz_class r0 = m, r1 = r, t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return false;
    a = r1;
    b = t1;
    if (b < 0) {
        a = -a;
        b = -b;
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g == 1;
}

}  // namespace

// Candidates are restricted by the rational-root theorem (numerator | constant term,
// denominator | leading coefficient). Instead of listing divisors, which is hopeless for
// hundred-digit coefficients, they are found as Hensel lifts of roots mod a small prime
// and recovered by rational reconstruction; every candidate is verified exactly.
std::vector<Rat> rational_roots(const QPoly& f) {
    if (f.is_zero()) throw Error(Errc::Degenerate, "rational roots of zero");
    std::vector<Rat> out;
    QPoly g = squarefree_part(f);
    if (g.deg() <= 0) return out;
    if (sgn(g.c[0]) == 0) {
        out.push_back(0);
        g = divmod(g, QPoly::x(QQ{})).first;
    }
    if (g.deg() <= 0) return out;
    ZPoly z = primitive_integer(g);
    ZPoly dz;
    for (size_t i = 1; i < z.size(); ++i) dz.push_back(z[i] * static_cast<unsigned long>(i));

    // a root a/b has |a| <= |a0| and |b| <= |an|; balanced reconstruction needs both below sqrt(m/2)
    mpz_class big = std::max(abs(z.front()), abs(z.back()));
    mpz_class need = 2 * big * big + 1;

    std::uint32_t ell = 101;
    FpPoly fbar;
    for (;; ++ell) {
        if (!is_prime(ell)) continue;
        if (mpz_divisible_ui_p(z.back().get_mpz_t(), ell)) continue;
        if (static_cast<int>(ell) <= g.deg()) continue;
        Fp k(ell);
        std::vector<Fp::E> c;
        for (auto& v : z) c.push_back(static_cast<Fp::E>(mpz_fdiv_ui(v.get_mpz_t(), ell)));
        fbar = FpPoly(k, c);
        if (gcd(fbar, derivative(fbar)).deg() == 0) break;
    }

    for (auto r0 : roots_mod_p(fbar)) {
        mpz_class m = ell, r = r0;
        while (m < need) {
            mpz_class m2 = m * m;
            mpz_class fv = zeval_mod(z, r, m2), dv = zeval_mod(dz, r, m2);
            mpz_class inv;
            if (!mpz_invert(inv.get_mpz_t(), dv.get_mpz_t(), m2.get_mpz_t()))
                throw Error(Errc::Internal, "Hensel lifting hit a non-simple root");
            r = r - fv * inv;
            mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m2.get_mpz_t());
            m = m2;
        }
        mpz_class a, b;
        if (!rational_reconstruct(r, m, a, b)) continue;
        if (!mpz_divisible_p(z.front().get_mpz_t(), a.get_mpz_t())) continue;
        if (!mpz_divisible_p(z.back().get_mpz_t(), b.get_mpz_t())) continue;
        Rat cand = make_rat(a, b);
        if (sgn(g(cand)) == 0) out.push_back(cand);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Fp::E> roots_mod_p(const FpPoly& f) {
    if (f.is_zero()) throw Error(Errc::Degenerate, "roots of the zero polynomial");
    std::vector<Fp::E> out;
    for (Fp::E v = 0; v < f.k.p; ++v)
        if (f(v) == 0) out.push_back(v);
    return out;
}

}  // namespace x0p
