#include "x0p/disks.hpp"

#include <thread>

#include "x0p/exact.hpp"

namespace x0p {

DiskData disk_data(const MultiPoly& Q) {
    if (Q.nvars() != 2) throw Error(Errc::Degenerate, "plane model must be in two variables");
    if (Q.degree_in(1) < 2) throw Error(Errc::Degenerate, "degree in y must be at least 2");
    DiskData d;
    d.delta = discriminant_y(Q);
    d.r = squarefree_part(d.delta);
    return d;
}

bool linear_factor_screen(const DiskData& d) { return rational_roots(d.r).empty(); }
bool linear_factor_screen(const MultiPoly& Q) { return linear_factor_screen(disk_data(Q)); }

bool good_reduction_screen(const CanonicalModel& m, const MultiPoly& Q, std::uint32_t p) {
    return good_reduction_screen(m, disk_data(Q), Q, p);
}

bool good_reduction_screen(const CanonicalModel& m, const DiskData& d, const MultiPoly& Q, std::uint32_t p) {
    if (p < 5 || !is_prime(p) || m.level % p == 0) return false;
    try {
        reduce_mod_p(Q, p);
        auto db = reduce_mod_p(d.delta, p);
        return !db.is_zero() && db.deg() == d.delta.deg();
    } catch (const Error& e) {
        if (e.code() == Errc::NotPIntegral) return false;
        throw;
    }
}

bool good_model_prime(const CanonicalModel& m, std::uint32_t p, const FpPointSet& pts) {
    if (!is_prime(p) || m.level % p == 0) return false;
    try {
        for (auto& e : m.equations) reduce_mod_p(e, p);
    } catch (const Error& e) {
        if (e.code() == Errc::NotPIntegral) return false;
        throw;
    }
    return all_nonsingular(m, pts);
}

const char* disk_class_name(DiskClass c) {
    switch (c) {
        case DiskClass::Good: return "good";
        case DiskClass::BadRoot: return "bad-root";
        case DiskClass::BadInfinite: return "bad-infinite";
        case DiskClass::Undefined: return "undefined";
    }
    return "?";
}

DiskClass classify_point(const FpPoly& rbar, const FpPlanePoint& image) {
    if (image.infinite) return DiskClass::BadInfinite;
    return rbar(image.x) == 0 ? DiskClass::BadRoot : DiskClass::Good;
}

DiskClass classify_point(const FpPoly& rbar, const MapResult<Fp>& image) {
    if (!image.defined()) return DiskClass::Undefined;
    return classify_point(rbar, *image.point);
}

CoverageReport coverage_check(const CanonicalModel& m, const std::vector<int>& patch_indices, std::uint32_t p,
                              const CoverageOptions& opt) {
    for (int i : patch_indices)
        if (!good_reduction_screen(m, m.plane_model(i).Q, p))
            throw Error(Errc::BadPrime, std::to_string(p) + " fails the reduction screen for patch " + std::to_string(i));
    return coverage_check(m, patch_indices, enumerate_fp_points(m, p, opt.jobs), opt);
}

CoverageReport coverage_check(const CanonicalModel& m, const std::vector<int>& patch_indices, const FpPointSet& pts,
                              const CoverageOptions& opt) {
    if (patch_indices.empty()) throw Error(Errc::Degenerate, "no patches given");
    const std::uint32_t p = pts.p;
    Fp k(p);
    CoverageReport rep;
    rep.p = p;
    rep.patch_indices = patch_indices;
    std::vector<FpPoly> rbar;
    for (int i : patch_indices) {
        auto d = disk_data(m.plane_model(i).Q);
        if (!good_reduction_screen(m, d, m.plane_model(i).Q, p))
            throw Error(Errc::BadPrime, std::to_string(p) + " fails the reduction screen for patch " + std::to_string(i));
        rbar.push_back(reduce_mod_p(d.r, p));
        PatchDiskSummary s;
        s.patch_index = i;
        s.rbar_roots = roots_mod_p(rbar.back());
        rep.patches.push_back(s);
    }

    rep.rows.resize(pts.points.size());
    auto work = [&](size_t lo, size_t hi) {
        for (size_t n = lo; n < hi; ++n) {
            auto& row = rep.rows[n];
            row.point = pts.points[n];
            for (size_t j = 0; j < patch_indices.size(); ++j) {
                const auto& patch = m.patch(patch_indices[j]);
                auto direct = eval_patch_unchecked(patch, row.point, k);
                std::optional<FpPlanePoint> img;
                bool resolved = false;
                if (direct.defined()) {
                    img = direct.point;
                } else if (opt.resolve_undefined) {
                    try {
                        img = resolved_image(m, patch, row.point, p);
                        resolved = true;
                    } catch (const Error& e) {
                        if (e.code() != Errc::Degenerate) throw;
                    }
                }
                row.images.push_back(img);
                row.resolved.push_back(resolved);
                row.classes.push_back(img ? classify_point(rbar[j], *img) : DiskClass::Undefined);
            }
        }
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(pts.points.size())));
    if (jobs <= 1) {
        work(0, pts.points.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (pts.points.size() + jobs - 1) / jobs;
        for (unsigned w = 0; w < jobs; ++w) {
            size_t lo = w * chunk, hi = std::min(pts.points.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    for (auto& row : rep.rows) {
        bool good = false;
        for (size_t j = 0; j < row.classes.size(); ++j) {
            good = good || row.classes[j] == DiskClass::Good;
            if (row.classes[j] == DiskClass::BadInfinite) ++rep.patches[j].infinite_images;
        }
        if (!good) rep.uncovered.push_back(row.point);
    }
    rep.covered = rep.uncovered.empty();
    rep.strict_covered = rep.covered;
    for (auto& s : rep.patches) rep.strict_covered = rep.strict_covered && s.strict_clean();
    return rep;
}

const char* advisory_name(Advisory a) {
    switch (a) {
        case Advisory::Generates: return "generates";
        case Advisory::DoesNotGenerate: return "does-not-generate";
        case Advisory::Unknown: return "unknown";
    }
    return "?";
}

std::vector<PrimeCandidate> find_primes(const CanonicalModel& m, const std::vector<int>& patch_indices,
                                        std::uint32_t p_min, std::uint32_t p_max,
                                        const std::vector<NewformOrbitRecord>* newforms, unsigned jobs) {
    if (p_min < 5) throw Error(Errc::OutOfDomain, "primes below 5 are not supported");
    std::vector<DiskData> dd;
    for (int i : patch_indices) dd.push_back(disk_data(m.plane_model(i).Q));
    std::vector<PrimeCandidate> out;
    for (std::uint32_t p = p_min; p <= p_max; ++p) {
        if (!is_prime(p)) continue;
        bool ok = true;
        for (size_t j = 0; j < patch_indices.size(); ++j)
            ok = ok && good_reduction_screen(m, dd[j], m.plane_model(patch_indices[j]).Q, p);
        if (!ok) continue;
        PrimeCandidate c;
        c.p = p;
        auto pts = enumerate_fp_points(m, p, jobs);
        if (!all_nonsingular(m, pts)) c.note = "model singular mod p";
        CoverageOptions opt;
        opt.jobs = jobs;
        auto rep = coverage_check(m, patch_indices, pts, opt);
        c.covered = rep.covered;
        c.strict_covered = rep.strict_covered;
        if (newforms) {
            try {
                c.hecke = hecke_generation_check(m.level, m.genus, p, *newforms) ? Advisory::Generates
                                                                                 : Advisory::DoesNotGenerate;
            } catch (const Error& e) {
                if (e.code() != Errc::InsufficientData) throw;
            }
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace x0p
