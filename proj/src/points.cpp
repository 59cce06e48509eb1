#include "x0p/points.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "x0p/genus.hpp"

namespace x0p {

namespace {

// Equation split by the power of the last variable: f = sum_k C_k(x_0..x_{g-2}) t^k.
struct SplitEq {
    std::vector<std::vector<std::pair<std::uint64_t, Exps>>> by_k;
};

template <class Coef>
struct Split {
    std::vector<std::vector<std::pair<Coef, Exps>>> by_k;
};

SplitEq split_fp(const MultiPolyFp& f) {
    SplitEq s;
    for (auto& [c, e] : f.terms) {
        int k = e.back();
        if (static_cast<int>(s.by_k.size()) <= k) s.by_k.resize(k + 1);
        Exps head(e.begin(), e.end() - 1);
        s.by_k[k].emplace_back(c, head);
    }
    return s;
}

// Work item: points whose first nonzero coordinate sits at `lead`, and (when there is more than
// one free coordinate) whose next coordinate equals `first`.
struct Task {
    size_t lead;
    long first;
};

template <class Fn>
void run_tasks(const std::vector<Task>& tasks, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < tasks.size();) fn(tasks[i]);
    };
    if (jobs == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

FpPoint normalize(const Fp& k, FpPoint v) {
    for (auto x : v)
        if (x) {
            auto inv = k.inv(x);
            for (auto& y : v) y = k.mul(y, inv);
            return v;
        }
    throw Error(Errc::Degenerate, "zero vector is not a projective point");
}

std::optional<FpPoint> reduce_point(const std::vector<long>& coords, std::uint32_t p) {
    Fp k(p);
    FpPoint v;
    bool any = false;
    for (long c : coords) {
        v.push_back(k.from_int(c));
        any = any || v.back() != 0;
    }
    if (!any) return std::nullopt;
    return normalize(k, v);
}

FpPointSet enumerate_fp_points(const CanonicalModel& m, std::uint32_t p, unsigned jobs) {
    if (m.level % p == 0)
        throw Error(Errc::BadPrime, std::to_string(p) + " divides the level " + std::to_string(m.level));
    return enumerate_fp_points(m.equations, p, jobs);
}

FpPointSet enumerate_fp_points(const std::vector<MultiPoly>& equations, std::uint32_t p, unsigned jobs) {
    if (equations.empty()) throw Error(Errc::Degenerate, "no equations");
    Fp k(p);
    const size_t g = equations[0].nvars();
    std::vector<SplitEq> eqs;
    for (auto& e : equations) eqs.push_back(split_fp(reduce_mod_p(e, p)));

    std::vector<Task> tasks;
    for (size_t lead = 0; lead < g; ++lead) {
        size_t free = g - 1 - lead;
        if (free >= 2)
            for (long v = 0; v < static_cast<long>(p); ++v) tasks.push_back({lead, v});
        else
            tasks.push_back({lead, -1});
    }

    std::mutex mu;
    FpPointSet out;
    out.p = p;

    run_tasks(tasks, jobs, [&](const Task& t) {
        std::vector<FpPoint> local;
        FpPoint x(g, 0);
        x[t.lead] = 1;
        size_t free = g - 1 - t.lead;
        if (free == 0) {
            bool ok = true;
            for (auto& e : equations) ok = ok && reduce_mod_p(e, p).eval(x) == 0;
            if (ok) local.push_back(x);
        } else {
            // odometer over x[lead+1 .. g-2]; the last coordinate is scanned directly
            size_t lo = t.lead + 1, hi = g - 1;  // [lo, hi) is the prefix range
            if (t.first >= 0) x[lo] = static_cast<Fp::E>(t.first);
            size_t odo_lo = t.first >= 0 ? lo + 1 : lo;
            std::vector<std::vector<std::uint64_t>> C(eqs.size());
            for (;;) {
                for (size_t e = 0; e < eqs.size(); ++e) {
                    auto& cs = C[e];
                    cs.assign(eqs[e].by_k.size(), 0);
                    for (size_t kk = 0; kk < eqs[e].by_k.size(); ++kk) {
                        std::uint64_t s = 0;
                        for (auto& [c, ex] : eqs[e].by_k[kk]) {
                            std::uint64_t v = c;
                            for (size_t i = 0; i < ex.size(); ++i)
                                for (int j = 0; j < ex[i]; ++j) v = v * x[i] % p;
                            s += v;
                        }
                        cs[kk] = s % p;
                    }
                }
                for (std::uint64_t tv = 0; tv < p; ++tv) {
                    bool ok = true;
                    for (size_t e = 0; e < eqs.size() && ok; ++e) {
                        const auto& cs = C[e];
                        std::uint64_t r = 0;
                        for (size_t kk = cs.size(); kk-- > 0;) r = (r * tv + cs[kk]) % p;
                        ok = r == 0;
                    }
                    if (ok) {
                        x[g - 1] = static_cast<Fp::E>(tv);
                        local.push_back(x);
                    }
                }
                x[g - 1] = 0;
                size_t i = hi;
                while (i > odo_lo) {
                    --i;
                    if (++x[i] < p) break;
                    x[i] = 0;
                    if (i == odo_lo) {
                        i = hi + 1;  // exhausted
                        break;
                    }
                }
                if (i == hi + 1 || odo_lo >= hi) break;
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        out.points.insert(out.points.end(), local.begin(), local.end());
    });
    std::sort(out.points.begin(), out.points.end());
    return out;
}

std::vector<std::vector<long>> search_rational_points(const CanonicalModel& m, long H, unsigned jobs) {
    if (H < 1) throw Error(Errc::OutOfDomain, "height bound must be at least 1");
    const size_t g = m.variables.size();
    // Sieve primes: large enough that false positives are rare, coprime to every denominator.
    std::vector<std::uint32_t> sieve;
    for (std::uint32_t q = 1000003; sieve.size() < 2; q += 2) {
        if (!is_prime(q)) continue;
        try {
            for (auto& e : m.equations) reduce_mod_p(e, q);
            sieve.push_back(q);
        } catch (const Error&) {
        }
    }
    std::vector<std::vector<SplitEq>> red(2);
    for (int s = 0; s < 2; ++s)
        for (auto& e : m.equations) red[s].push_back(split_fp(reduce_mod_p(e, sieve[s])));

    std::vector<Task> tasks;
    for (size_t lead = 0; lead < g; ++lead)
        for (long v = 1; v <= H; ++v) tasks.push_back({lead, v});

    std::mutex mu;
    std::vector<std::vector<long>> out;

    run_tasks(tasks, jobs, [&](const Task& t) {
        std::vector<std::vector<long>> local;
        std::vector<long> x(g, 0);
        x[t.lead] = t.first;
        size_t free = g - 1 - t.lead;
        auto exact_check = [&](const std::vector<long>& v) {
            long gg = 0;
            for (long c : v) gg = std::gcd(gg, c);
            if (gg != 1) return;
            auto pt = to_rat(v);
            for (auto& e : m.equations)
                if (e.eval(pt) != 0) return;
            local.push_back(v);
        };
        if (free == 0) {
            exact_check(x);
        } else {
            size_t lo = t.lead + 1, hi = g - 1;
            for (size_t i = lo; i < hi; ++i) x[i] = -H;
            std::vector<std::vector<std::vector<std::uint64_t>>> C(2, std::vector<std::vector<std::uint64_t>>(m.equations.size()));
            for (;;) {
                for (int s = 0; s < 2; ++s) {
                    const std::uint64_t q = sieve[s];
                    for (size_t e = 0; e < m.equations.size(); ++e) {
                        auto& cs = C[s][e];
                        const auto& sp = red[s][e];
                        cs.assign(sp.by_k.size(), 0);
                        for (size_t kk = 0; kk < sp.by_k.size(); ++kk) {
                            std::uint64_t acc = 0;
                            for (auto& [c, ex] : sp.by_k[kk]) {
                                std::uint64_t v = c;
                                for (size_t i = 0; i < ex.size(); ++i) {
                                    std::uint64_t xi = static_cast<std::uint64_t>((x[i] % static_cast<long>(q) + static_cast<long>(q)) % static_cast<long>(q));
                                    for (int j = 0; j < ex[i]; ++j) v = v * xi % q;
                                }
                                acc = (acc + v) % q;
                            }
                            cs[kk] = acc;
                        }
                    }
                }
                for (long tv = -H; tv <= H; ++tv) {
                    bool ok = true;
                    for (int s = 0; s < 2 && ok; ++s) {
                        const std::uint64_t q = sieve[s];
                        std::uint64_t tq = static_cast<std::uint64_t>((tv % static_cast<long>(q) + static_cast<long>(q)) % static_cast<long>(q));
                        for (size_t e = 0; e < m.equations.size() && ok; ++e) {
                            const auto& cs = C[s][e];
                            std::uint64_t r = 0;
                            for (size_t kk = cs.size(); kk-- > 0;) r = (r * tq + cs[kk]) % q;
                            ok = r == 0;
                        }
                    }
                    if (ok) {
                        x[g - 1] = tv;
                        exact_check(x);
                    }
                }
                x[g - 1] = 0;
                if (lo >= hi) break;
                size_t i = hi;
                bool done = false;
                while (true) {
                    --i;
                    if (++x[i] <= H) break;
                    x[i] = -H;
                    if (i == lo) {
                        done = true;
                        break;
                    }
                }
                if (done) break;
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        out.insert(out.end(), local.begin(), local.end());
    });
    std::sort(out.begin(), out.end());
    return out;
}

HeegnerForm heegner_form(long N, long D) {
    check_discriminant(D);
    // b^2 = D mod 4a with N | a is solvable only if it is solvable mod 4N, so a = N suffices
    // whenever any Heegner form exists; larger multiples are tried for primitivity only.
    for (long k = 1; k <= 64; ++k) {
        long a = N * k;
        for (long b = 0; b <= a; ++b) {
            for (long sb : {b, -b}) {
                if ((sb * sb - D) % (4 * a) != 0) continue;
                long c = (sb * sb - D) / (4 * a);
                if (std::gcd(std::gcd(a, std::labs(sb)), c) != 1) continue;
                return {a, sb, c};
            }
        }
    }
    throw Error(Errc::NoHeegnerForm, "no Heegner form of discriminant " + std::to_string(D) + " for level " +
                                         std::to_string(N));
}

namespace {

// First continued-fraction convergent within tol of x with denominator <= maxden.
std::optional<std::pair<long, long>> approximate(double x, long maxden, double tol) {
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        if (std::fabs(a) > 1e12) break;
        long ai = static_cast<long>(a);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > maxden) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (std::fabs(x - static_cast<double>(p1) / q1) < tol) return std::make_pair(p1, q1);
        double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

std::vector<long> primitive_sign(std::vector<long> v) {
    long g = 0;
    for (long c : v) g = std::gcd(g, c);
    if (g == 0) return v;
    for (auto& c : v) c /= g;
    for (long c : v)
        if (c) {
            if (c < 0)
                for (auto& d : v) d = -d;
            break;
        }
    return v;
}

}  // namespace

bool forced_vanishing(long N, long D) { return D == -3 || D == -4 || D == -N || D == -4 * N; }

CmEvaluation evaluate_cm_point(const CanonicalModel& m, long D, const CmOptions& opt) {
    CmEvaluation ev;
    ev.D = D;
    ev.form = heegner_form(m.level, D);
    const double pi = M_PI;
    std::complex<double> tau(-static_cast<double>(ev.form.b) / (2.0 * ev.form.a),
                             std::sqrt(static_cast<double>(-D)) / (2.0 * ev.form.a));
    std::complex<double> q = std::exp(std::complex<double>(0, 2 * pi) * tau);
    ev.q_abs = std::abs(q);

    const size_t g = m.variables.size();
    auto evaluate = [&](bool deriv, double& scale) {
        std::vector<std::complex<double>> vals(g);
        scale = 0;
        for (size_t i = 0; i < g; ++i) {
            std::complex<double> s = 0, qn = 1;
            double mag = 0;
            int terms = std::min<int>(opt.terms, static_cast<int>(m.qexp[i].size()));
            for (int n = 1; n <= terms; ++n) {
                qn *= q;
                double w = deriv ? n : 1.0;
                s += w * static_cast<double>(m.qexp[i][n - 1]) * qn;
                mag += w * std::fabs(static_cast<double>(m.qexp[i][n - 1])) * std::abs(qn);
            }
            vals[i] = s;
            scale = std::max(scale, mag);
        }
        return vals;
    };

    double scale = 0;
    auto vals = evaluate(false, scale);
    double vmax = 0;
    for (auto& v : vals) vmax = std::max(vmax, std::abs(v));
    // The cusp forms vanish at the elliptic points (D = -3, -4) and at the fixed points of the
    // Fricke involution (D = -N, -4N); there the point is read off from first derivatives.
    // Truncated sums need not look small at such points, hence the structural test.
    if (forced_vanishing(m.level, D) || vmax < opt.vanish_threshold * scale) {
        ev.used_derivative_fallback = true;
        vals = evaluate(true, scale);
    }
    size_t imax = 0;
    for (size_t i = 0; i < g; ++i)
        if (std::abs(vals[i]) > std::abs(vals[imax])) imax = i;
    for (auto& v : vals) ev.approx_coords.push_back(v / vals[imax]);

    if (ev.q_abs > opt.convergence_threshold) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "|q| = %.4f exceeds the convergence threshold %.2f", ev.q_abs,
                      opt.convergence_threshold);
        throw NonConvergent(buf, ev);
    }

    std::vector<std::pair<long, long>> ratios;
    long l = 1;
    bool ok = true;
    for (auto& v : ev.approx_coords) {
        auto r = std::fabs(v.imag()) < opt.match_tolerance ? approximate(v.real(), opt.max_denominator, opt.match_tolerance)
                                                            : std::nullopt;
        if (!r) {
            ok = false;
            break;
        }
        ratios.push_back(*r);
        l = std::lcm(l, r->second);
    }
    auto distance = [&](const std::vector<long>& pt) {
        double d = 0;
        for (size_t i = 0; i < g; ++i)
            d = std::max(d, std::abs(ev.approx_coords[i] - static_cast<double>(pt[i]) / pt[imax]));
        return d;
    };
    if (ok) {
        std::vector<long> ints;
        for (auto [a, b] : ratios) ints.push_back(a * (l / b));
        ints = primitive_sign(ints);
        ev.reconstructed = ints;
        ev.residual = distance(ints);
        for (auto& kp : m.known_points)
            if (primitive_sign(kp.coords) == ints) ev.matched_point = kp;
    } else {
        // no consistent reconstruction: report the distance to the nearest known point
        ev.residual = std::numeric_limits<double>::infinity();
        for (auto& kp : m.known_points)
            if (kp.coords[imax] != 0) ev.residual = std::min(ev.residual, distance(kp.coords));
    }
    return ev;
}

}  // namespace x0p
