#pragma once

#include <optional>
#include <string>
#include <vector>

#include "x0p/newform.hpp"
#include "x0p/planemap.hpp"

namespace x0p {

struct DiskData {
    QPoly delta;  // discriminant of Q in y
    QPoly r;      // squarefree part of delta, monic
};

DiskData disk_data(const MultiPoly& Q);

// True iff r has no rational root.
bool linear_factor_screen(const MultiPoly& Q);
bool linear_factor_screen(const DiskData& d);

// p prime, p >= 5, p does not divide N, Q p-integral, delta mod p nonzero of the same degree.
bool good_reduction_screen(const CanonicalModel& m, const MultiPoly& Q, std::uint32_t p);
bool good_reduction_screen(const CanonicalModel& m, const DiskData& d, const MultiPoly& Q, std::uint32_t p);

// Prime where the canonical model reduces to a curve we can work on: p does not divide N,
// the equations are p-integral, and every F_p point is nonsingular.
bool good_model_prime(const CanonicalModel& m, std::uint32_t p, const FpPointSet& pts);

enum class DiskClass { Good, BadRoot, BadInfinite, Undefined };
const char* disk_class_name(DiskClass c);

DiskClass classify_point(const FpPoly& rbar, const MapResult<Fp>& image);
DiskClass classify_point(const FpPoly& rbar, const FpPlanePoint& image);

struct CoverageRow {
    FpPoint point;
    std::vector<DiskClass> classes;                    // one per patch
    std::vector<std::optional<FpPlanePoint>> images;   // per patch; empty if unresolved
    std::vector<bool> resolved;                        // image came from the local branch
};

struct PatchDiskSummary {
    int patch_index = 0;
    std::vector<Fp::E> rbar_roots;
    size_t infinite_images = 0;
    bool strict_clean() const { return rbar_roots.empty() && infinite_images == 0; }
};

struct CoverageReport {
    std::uint32_t p = 0;
    std::vector<int> patch_indices;
    std::vector<CoverageRow> rows;
    std::vector<PatchDiskSummary> patches;
    bool covered = false;
    // covered, and in addition each patch has no root of r mod p and no point at infinity
    bool strict_covered = false;
    std::vector<FpPoint> uncovered;
};

struct CoverageOptions {
    // Extend the patch map across its undefined locus along local branches; without this,
    // such points are reported Undefined and never count as covered.
    bool resolve_undefined = true;
    unsigned jobs = 1;
};

// Throws BadPrime if some patch fails good_reduction_screen at p.
CoverageReport coverage_check(const CanonicalModel& m, const std::vector<int>& patch_indices, std::uint32_t p,
                              const CoverageOptions& opt = {});
CoverageReport coverage_check(const CanonicalModel& m, const std::vector<int>& patch_indices, const FpPointSet& pts,
                              const CoverageOptions& opt = {});

enum class Advisory { Generates, DoesNotGenerate, Unknown };
const char* advisory_name(Advisory a);

struct PrimeCandidate {
    std::uint32_t p = 0;
    bool covered = false;
    bool strict_covered = false;
    Advisory hecke = Advisory::Unknown;
    std::string note;
};

// Primes in [p_min, p_max] passing the reduction screens for every patch, with coverage.
std::vector<PrimeCandidate> find_primes(const CanonicalModel& m, const std::vector<int>& patch_indices,
                                        std::uint32_t p_min, std::uint32_t p_max,
                                        const std::vector<NewformOrbitRecord>* newforms = nullptr,
                                        unsigned jobs = 1);

}  // namespace x0p
