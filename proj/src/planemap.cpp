#include "x0p/planemap.hpp"

#include <algorithm>

namespace x0p {

const char* undef_name(UndefReason r) {
    switch (r) {
        case UndefReason::X1X2Zero: return "x1x2zero";
        case UndefReason::Y1Y2Zero: return "y1y2zero";
        case UndefReason::X2Y2Zero: return "x2y2zero";
    }
    return "?";
}

namespace {

template <class K>
typename K::E coerce(const K& k, const Rat& r) {
    if constexpr (std::is_same_v<K, QQ>) {
        (void)k;
        return r;
    } else {
        return k.from_rat(r);
    }
}

template <class K>
typename K::E eval_form_k(const K& k, const LinearForm& f, const std::vector<typename K::E>& P) {
    auto s = k.zero();
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0) s = k.add(s, k.mul(coerce(k, f[i]), P[i]));
    return s;
}

template <class K>
std::vector<UndefReason> degeneracies(const K& k, const std::array<typename K::E, 4>& v) {
    std::vector<UndefReason> out;
    auto z = [&](int i) { return k.is_zero(v[i]); };
    if (z(0) && z(1)) out.push_back(UndefReason::X1X2Zero);
    if (z(2) && z(3)) out.push_back(UndefReason::Y1Y2Zero);
    if (z(1) && z(3)) out.push_back(UndefReason::X2Y2Zero);
    return out;
}

template <class K>
std::array<typename K::E, 4> patch_forms(const K& k, const PatchSpec& patch, const std::vector<typename K::E>& P) {
    return {eval_form_k(k, patch.x1, P), eval_form_k(k, patch.x2, P), eval_form_k(k, patch.y1, P),
            eval_form_k(k, patch.y2, P)};
}

template <class K>
std::array<typename K::E, 3> apply_rho(const K& k, const std::optional<Matrix3>& rho, std::array<typename K::E, 3> v) {
    if (!rho) return v;
    std::array<typename K::E, 3> w;
    for (int i = 0; i < 3; ++i) {
        w[i] = k.zero();
        for (int j = 0; j < 3; ++j) w[i] = k.add(w[i], k.mul(k.from_int((*rho)[i][j]), v[j]));
    }
    return w;
}

template <class K>
MapResult<K> map_core(const K& k, const PatchSpec& patch, const UPoly<K>& q0, const std::array<typename K::E, 4>& v) {
    MapResult<K> r;
    auto deg = degeneracies(k, v);
    if (!deg.empty()) {
        r.undefined = deg.front();
        return r;
    }
    auto [A, B, C] = apply_rho(k, patch.post_automorphism, {k.mul(v[0], v[3]), k.mul(v[1], v[2]), k.mul(v[1], v[3])});
    PlanePoint<K> pt;
    if (!k.is_zero(C)) {
        auto ic = k.inv(C);
        pt.x = k.mul(A, ic);
        pt.y = k.mul(q0(pt.x), k.mul(B, ic));
    } else {
        // psi at z = 0 is [A^{e+1}*0 : A^e B : 0] for monic Q0 of degree e
        pt.infinite = true;
        typename K::E X = A, Y = B;
        if (q0.deg() > 0) {
            auto t = k.one();
            for (int i = 0; i < q0.deg(); ++i) t = k.mul(t, A);
            t = k.mul(t, B);
            if (!k.is_zero(t)) X = k.zero(), Y = k.one();
        }
        if (!k.is_zero(X)) {
            auto ix = k.inv(X);
            pt.x = k.one();
            pt.y = k.mul(Y, ix);
        } else {
            pt.x = k.zero();
            pt.y = k.one();
        }
    }
    r.point = pt;
    return r;
}

FpSeries ser_mul(const Fp& k, const FpSeries& a, const FpSeries& b) {
    const size_t n = a.size();
    std::vector<std::uint64_t> acc(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; i + j < n; ++j) acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % k.p;
    }
    return FpSeries(acc.begin(), acc.end());
}

FpSeries ser_add(const Fp& k, FpSeries a, const FpSeries& b, Fp::E scale = 1) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = k.add(a[i], k.mul(scale, b[i]));
    return a;
}

FpSeries ser_const(size_t n, Fp::E c) {
    FpSeries s(n, 0);
    s[0] = c;
    return s;
}

int ser_val(const FpSeries& s) {
    for (size_t i = 0; i < s.size(); ++i)
        if (s[i]) return static_cast<int>(i);
    return -1;
}

FpSeries ser_pow(const Fp& k, const FpSeries& a, int e) {
    FpSeries r = ser_const(a.size(), 1);
    for (int i = 0; i < e; ++i) r = ser_mul(k, r, a);
    return r;
}

FpSeries eval_series(const MultiPolyFp& f, const std::vector<FpSeries>& x, size_t n) {
    const Fp& k = f.k;
    FpSeries out(n, 0);
    for (auto& [c, e] : f.terms) {
        FpSeries t = ser_const(n, c);
        for (size_t i = 0; i < e.size(); ++i)
            for (int j = 0; j < e[i]; ++j) t = ser_mul(k, t, x[i]);
        out = ser_add(k, out, t);
    }
    return out;
}

Fp::E partial_at(const MultiPolyFp& f, size_t var, const FpPoint& P) {
    const Fp& k = f.k;
    Fp::E s = 0;
    for (auto& [c, e] : f.terms) {
        if (e[var] == 0) continue;
        Fp::E t = k.mul(c, k.from_int(e[var]));
        for (size_t i = 0; i < e.size(); ++i) t = k.mul(t, k.pow(P[i], e[i] - (i == var ? 1 : 0)));
        s = k.add(s, t);
    }
    return s;
}

// Row reduction in place; returns the rank.
int rank_mod(const Fp& k, std::vector<std::vector<Fp::E>> M) {
    int r = 0;
    const size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    for (size_t c = 0; c < cols && r < static_cast<int>(rows); ++c) {
        size_t piv = r;
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[r], M[piv]);
        auto inv = k.inv(M[r][c]);
        for (auto& v : M[r]) v = k.mul(v, inv);
        for (size_t i = 0; i < rows; ++i)
            if (static_cast<int>(i) != r && M[i][c]) {
                auto f = M[i][c];
                for (size_t j = 0; j < cols; ++j) M[i][j] = k.sub(M[i][j], k.mul(f, M[r][j]));
            }
        ++r;
    }
    return r;
}

// Inverse of a square matrix over F_p; throws if singular.
std::vector<std::vector<Fp::E>> inverse_mod(const Fp& k, const std::vector<std::vector<Fp::E>>& A) {
    const size_t n = A.size();
    std::vector<std::vector<Fp::E>> M(n, std::vector<Fp::E>(2 * n, 0));
    for (size_t i = 0; i < n; ++i) {
        std::copy(A[i].begin(), A[i].end(), M[i].begin());
        M[i][n + i] = 1;
    }
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && M[piv][c] == 0) ++piv;
        if (piv == n) throw Error(Errc::Internal, "singular Jacobian minor");
        std::swap(M[c], M[piv]);
        auto inv = k.inv(M[c][c]);
        for (auto& v : M[c]) v = k.mul(v, inv);
        for (size_t i = 0; i < n; ++i)
            if (i != c && M[i][c]) {
                auto f = M[i][c];
                for (size_t j = 0; j < 2 * n; ++j) M[i][j] = k.sub(M[i][j], k.mul(f, M[c][j]));
            }
    }
    std::vector<std::vector<Fp::E>> out(n);
    for (size_t i = 0; i < n; ++i) out[i].assign(M[i].begin() + n, M[i].end());
    return out;
}

std::vector<std::vector<Fp::E>> jacobian(const std::vector<MultiPolyFp>& eqs, const FpPoint& P) {
    std::vector<std::vector<Fp::E>> J;
    for (auto& f : eqs) {
        J.emplace_back();
        for (size_t j = 0; j < P.size(); ++j) J.back().push_back(partial_at(f, j, P));
    }
    return J;
}

std::vector<std::vector<Fp::E>> select(const std::vector<std::vector<Fp::E>>& J, const std::vector<size_t>& rows,
                                       const std::vector<size_t>& cols) {
    std::vector<std::vector<Fp::E>> out;
    for (auto r : rows) {
        out.emplace_back();
        for (auto c : cols) out.back().push_back(J[r][c]);
    }
    return out;
}

std::vector<size_t> iota_n(size_t n) {
    std::vector<size_t> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

MultiPoly bivariate(const MultiPoly& Q) {
    if (Q.nvars() != 2) throw Error(Errc::Degenerate, "plane model must be in two variables");
    return Q;
}

}  // namespace

MapResult<QQ> eval_patch(const CanonicalModel& m, const PatchSpec& patch, const std::vector<Rat>& P) {
    if (P.size() != m.variables.size()) throw Error(Errc::NotOnCurve, "point has wrong arity");
    for (auto& e : m.equations)
        if (e.eval(P) != 0) throw Error(Errc::NotOnCurve, "point is not on the model");
    QQ k;
    return map_core(k, patch, patch.q0, patch_forms(k, patch, P));
}

MapResult<Fp> eval_patch(const CanonicalModel& m, const PatchSpec& patch, const FpPoint& P, std::uint32_t p) {
    if (P.size() != m.variables.size()) throw Error(Errc::NotOnCurve, "point has wrong arity");
    for (auto& e : m.equations)
        if (reduce_mod_p(e, p).eval(P) != 0) throw Error(Errc::NotOnCurve, "point is not on the model mod p");
    return eval_patch_unchecked(patch, P, Fp(p));
}

MapResult<Fp> eval_patch_unchecked(const PatchSpec& patch, const FpPoint& P, const Fp& k) {
    return map_core(k, patch, reduce_mod_p(patch.q0, k.p), patch_forms(k, patch, P));
}

std::string to_string(const QPlanePoint& P) {
    if (P.infinite) return "[" + to_string(P.x) + " : " + to_string(P.y) + " : 0]";
    return "[" + to_string(P.x) + " : " + to_string(P.y) + " : 1]";
}

std::string to_string(const FpPlanePoint& P) {
    return "[" + std::to_string(P.x) + " : " + std::to_string(P.y) + " : " + (P.infinite ? "0]" : "1]");
}

MultiPoly monicize(const MultiPoly& F) {
    if (F.nvars() != 3) throw Error(Errc::Degenerate, "monicize expects a polynomial in x, y, z");
    if (F.is_zero()) throw Error(Errc::Degenerate, "monicize of the zero polynomial");
    const int d = F.degree_in(1);
    // Q_i(x, 1) for i = 0..d, i.e. the coefficient of y^{d-i} on z = 1
    std::vector<QPoly> Qi(d + 1, QPoly(QQ{}));
    for (auto& [e, c] : F.terms) {
        auto& q = Qi[d - e[1]];
        if (static_cast<int>(q.c.size()) <= e[0]) q.c.resize(e[0] + 1, Rat(0));
        q.c[e[0]] += c;
    }
    for (auto& q : Qi) q.trim();
    if (Qi[0].is_zero()) throw Error(Errc::Degenerate, "leading coefficient in y vanishes");
    Rat lc = Qi[0].lc();
    for (auto& q : Qi) q = scale(q, Rat(1 / lc));
    std::vector<std::string> vars{F.vars[0], F.vars[1]};
    MultiPoly out(vars);
    QPoly q0pow = QPoly::constant(QQ{}, 1);
    for (int i = 0; i <= d; ++i) {
        // Y^{d-i} carries Q_i Q_0^{i-1}; for i = 0 that is 1
        QPoly coef = i == 0 ? QPoly::constant(QQ{}, 1) : Qi[i] * q0pow;
        if (i >= 1) q0pow = q0pow * Qi[0];
        for (int a = 0; a <= coef.deg(); ++a)
            if (coef.c[a] != 0) out.add_term({a, d - i}, coef.c[a]);
    }
    return out;
}

PlaneSeriesReport verify_plane_model_series(const CanonicalModel& m, const PatchSpec& patch, const MultiPoly& Q0) {
    const MultiPoly& Q = bivariate(Q0);
    Series x1 = m.series(patch.x1), x2 = m.series(patch.x2), y1 = m.series(patch.y1), y2 = m.series(patch.y2);
    std::array<Series, 3> abc{x1 * y2, x2 * y1, x2 * y2};
    if (patch.post_automorphism) {
        std::array<Series, 3> w;
        for (int i = 0; i < 3; ++i) {
            w[i] = Series::constant(0);
            for (int j = 0; j < 3; ++j)
                if ((*patch.post_automorphism)[i][j]) w[i] = w[i] + abc[j] * Rat((*patch.post_automorphism)[i][j]);
        }
        abc = w;
    }
    const Series &A = abc[0], &B = abc[1], &C = abc[2];
    const int e = patch.q0.deg();
    Series q0h = Series::constant(0);
    for (int i = 0; i <= e; ++i)
        if (patch.q0.c[i] != 0) q0h = q0h + pow(A, i) * pow(C, e - i) * patch.q0.c[i];
    Series Yn = q0h * B;

    int dx = 0, d = Q.degree_in(1);
    for (auto& [ex, c] : Q.terms) dx = std::max(dx, ex[0]);

    Series total = Series::constant(0);
    int minval = Series::kExact;
    for (auto& [ex, c] : Q.terms) {
        int i = ex[0], j = ex[1];
        Series t = pow(A, i) * pow(C, dx - i + (e + 1) * (d - j)) * pow(Yn, j) * c;
        minval = std::min(minval, t.valuation());
        total = total + t;
    }
    PlaneSeriesReport rep;
    rep.patch_index = patch.index;
    rep.check = check_series_vanishing(total, minval);
    rep.check.degree = d;
    return rep;
}

PlaneFpReport verify_plane_model_fp(const CanonicalModel& m, const PatchSpec& patch, const MultiPoly& Q,
                                    std::uint32_t p, unsigned jobs) {
    return verify_plane_model_fp(m, patch, Q, enumerate_fp_points(m, p, jobs));
}

PlaneFpReport verify_plane_model_fp(const CanonicalModel&, const PatchSpec& patch, const MultiPoly& Q,
                                    const FpPointSet& pts) {
    PlaneFpReport rep;
    rep.p = pts.p;
    rep.patch_index = patch.index;
    Fp k(pts.p);
    auto Qp = reduce_mod_p(bivariate(Q), pts.p);
    for (auto& P : pts.points) {
        ++rep.points;
        auto r = eval_patch_unchecked(patch, P, k);
        if (!r.defined()) {
            ++rep.undefined;
            continue;
        }
        if (r.point->infinite) {
            ++rep.infinite;
            continue;
        }
        ++rep.finite;
        if (Qp.eval({r.point->x, r.point->y}) != 0) rep.failures.push_back(P);
    }
    return rep;
}

std::vector<UndefinedPoint<FpPoint>> undefined_locus_points(const CanonicalModel&, const PatchSpec& patch,
                                                            const FpPointSet& pts) {
    Fp k(pts.p);
    std::vector<UndefinedPoint<FpPoint>> out;
    for (auto& P : pts.points) {
        auto deg = degeneracies(k, patch_forms(k, patch, P));
        if (!deg.empty()) out.push_back({P, deg});
    }
    return out;
}

std::vector<UndefinedPoint<std::vector<long>>> undefined_locus_points(const CanonicalModel& m, const PatchSpec& patch,
                                                                      long H, unsigned jobs) {
    QQ k;
    std::vector<UndefinedPoint<std::vector<long>>> out;
    for (auto& v : search_rational_points(m, H, jobs)) {
        auto deg = degeneracies(k, patch_forms(k, patch, to_rat(v)));
        if (!deg.empty()) out.push_back({v, deg});
    }
    return out;
}

int jacobian_rank(const std::vector<MultiPolyFp>& eqs, const FpPoint& P) {
    if (eqs.empty()) return 0;
    return rank_mod(eqs[0].k, jacobian(eqs, P));
}

bool all_nonsingular(const CanonicalModel& m, const FpPointSet& pts) {
    std::vector<MultiPolyFp> eqs;
    for (auto& e : m.equations) eqs.push_back(reduce_mod_p(e, pts.p));
    const int want = static_cast<int>(m.variables.size()) - 2;
    for (auto& P : pts.points)
        if (jacobian_rank(eqs, P) != want) return false;
    return true;
}

std::vector<FpSeries> local_branch(const std::vector<MultiPolyFp>& eqs, const FpPoint& P, const Fp& k, int terms) {
    const size_t g = P.size(), n = static_cast<size_t>(terms);
    size_t a = 0;
    while (a < g && P[a] == 0) ++a;
    if (a == g) throw Error(Errc::Degenerate, "zero vector is not a projective point");
    FpPoint u = normalize(k, P);

    auto J = jacobian(eqs, u);
    std::vector<size_t> others;
    for (size_t j = 0; j < g; ++j)
        if (j != a) others.push_back(j);
    const int want = static_cast<int>(g) - 2;
    auto all_rows = iota_n(eqs.size());
    if (rank_mod(k, select(J, all_rows, others)) != want)
        throw Error(Errc::Degenerate, "point is singular on the reduction");

    // parameter: a coordinate whose removal keeps the rank
    size_t b = others.front();
    std::vector<size_t> cols;
    for (size_t cand : others) {
        cols.clear();
        for (size_t j : others)
            if (j != cand) cols.push_back(j);
        if (rank_mod(k, select(J, all_rows, cols)) == want) {
            b = cand;
            break;
        }
    }
    std::vector<size_t> rows;
    for (size_t i = 0; i < eqs.size() && static_cast<int>(rows.size()) < want; ++i) {
        rows.push_back(i);
        if (rank_mod(k, select(J, rows, cols)) != static_cast<int>(rows.size())) rows.pop_back();
    }
    auto Ainv = inverse_mod(k, select(J, rows, cols));

    std::vector<FpSeries> x(g);
    for (size_t j = 0; j < g; ++j) x[j] = ser_const(n, u[j]);
    if (n > 1) x[b][1] = 1;
    // Chord iteration with the constant Jacobian: each step fixes at least one more order.
    for (int it = 0; it <= terms; ++it) {
        std::vector<FpSeries> vals;
        bool zero = true;
        for (auto r : rows) {
            vals.push_back(eval_series(eqs[r], x, n));
            zero = zero && ser_val(vals.back()) < 0;
        }
        if (zero) break;
        for (size_t ci = 0; ci < cols.size(); ++ci) {
            FpSeries delta(n, 0);
            for (size_t ri = 0; ri < rows.size(); ++ri) delta = ser_add(k, delta, vals[ri], Ainv[ci][ri]);
            x[cols[ci]] = ser_add(k, x[cols[ci]], delta, k.neg(1));
        }
    }
    return x;
}

namespace {
std::optional<FpPlanePoint> image_along_branch(const PatchSpec& patch, const std::vector<FpSeries>& x, const Fp& k,
                                               int kTerms);
}  // namespace

FpPlanePoint resolved_image(const CanonicalModel& m, const PatchSpec& patch, const FpPoint& P, std::uint32_t p) {
    Fp k(p);
    auto direct = eval_patch_unchecked(patch, P, k);
    if (direct.defined()) return *direct.point;

    std::vector<MultiPolyFp> eqs;
    for (auto& e : m.equations) eqs.push_back(reduce_mod_p(e, p));
    // High-order contact with the undefined locus needs more terms; double until something survives.
    for (int kTerms = 24; kTerms <= 384; kTerms *= 2)
        if (auto img = image_along_branch(patch, local_branch(eqs, P, k, kTerms), k, kTerms)) return *img;
    throw Error(Errc::Internal, "image series vanish to the working order");
}

namespace {

std::optional<FpPlanePoint> image_along_branch(const PatchSpec& patch, const std::vector<FpSeries>& x, const Fp& k,
                                               int kTerms) {
    const std::uint32_t p = k.p;
    auto form = [&](const LinearForm& f) {
        FpSeries s(kTerms, 0);
        for (size_t i = 0; i < f.size(); ++i)
            if (f[i] != 0) s = ser_add(k, s, x[i], k.from_rat(f[i]));
        return s;
    };
    FpSeries x1 = form(patch.x1), x2 = form(patch.x2), y1 = form(patch.y1), y2 = form(patch.y2);
    std::array<FpSeries, 3> abc{ser_mul(k, x1, y2), ser_mul(k, x2, y1), ser_mul(k, x2, y2)};
    if (patch.post_automorphism) {
        std::array<FpSeries, 3> w;
        for (int i = 0; i < 3; ++i) {
            w[i] = FpSeries(kTerms, 0);
            for (int j = 0; j < 3; ++j)
                w[i] = ser_add(k, w[i], abc[j], k.from_int((*patch.post_automorphism)[i][j]));
        }
        abc = w;
    }
    auto q0 = reduce_mod_p(patch.q0, p);
    const int e = patch.q0.deg();
    FpSeries q0h(kTerms, 0);
    for (int i = 0; i <= e; ++i)
        if (q0.coeff(i))
            q0h = ser_add(k, q0h, ser_mul(k, ser_pow(k, abc[0], i), ser_pow(k, abc[2], e - i)), q0.coeff(i));
    FpSeries X = ser_mul(k, abc[0], ser_pow(k, abc[2], e));
    FpSeries Y = ser_mul(k, q0h, abc[1]);
    FpSeries Z = ser_pow(k, abc[2], e + 1);

    int v = kTerms;
    for (auto* s : {&X, &Y, &Z}) {
        int sv = ser_val(*s);
        if (sv >= 0) v = std::min(v, sv);
    }
    if (v == kTerms) return std::nullopt;
    FpPlanePoint out;
    if (Z[v]) {
        auto iz = k.inv(Z[v]);
        out.x = k.mul(X[v], iz);
        out.y = k.mul(Y[v], iz);
    } else {
        out.infinite = true;
        if (X[v]) {
            out.x = 1;
            out.y = k.mul(Y[v], k.inv(X[v]));
        } else {
            out.x = 0;
            out.y = 1;
        }
    }
    return out;
}

}  // namespace

}  // namespace x0p
