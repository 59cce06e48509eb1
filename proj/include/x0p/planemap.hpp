#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "x0p/model.hpp"
#include "x0p/points.hpp"

namespace x0p {

enum class UndefReason { X1X2Zero, Y1Y2Zero, X2Y2Zero };
const char* undef_name(UndefReason r);

// Affine point (x, y) on z = 1, or a point [x:y:0] at infinity with its first nonzero entry 1.
template <class K>
struct PlanePoint {
    using E = typename K::E;
    bool infinite = false;
    E x{}, y{};
    bool operator==(const PlanePoint& o) const { return infinite == o.infinite && x == o.x && y == o.y; }
    bool operator<(const PlanePoint& o) const {
        return std::tie(infinite, x, y) < std::tie(o.infinite, o.x, o.y);
    }
};

template <class K>
struct MapResult {
    std::optional<PlanePoint<K>> point;
    std::optional<UndefReason> undefined;
    bool defined() const { return point.has_value(); }
};

using QPlanePoint = PlanePoint<QQ>;
using FpPlanePoint = PlanePoint<Fp>;

// The patch map on a point of the canonical model. Throws NotOnCurve if P is not on the model.
MapResult<QQ> eval_patch(const CanonicalModel& m, const PatchSpec& patch, const std::vector<Rat>& P);
MapResult<Fp> eval_patch(const CanonicalModel& m, const PatchSpec& patch, const FpPoint& P, std::uint32_t p);
// Same, without the on-curve check (for points already known to lie on the model).
MapResult<Fp> eval_patch_unchecked(const PatchSpec& patch, const FpPoint& P, const Fp& k);

std::string to_string(const QPlanePoint& P);
std::string to_string(const FpPlanePoint& P);

// Sum_i Q_i(x, z) y^{d-i} in variables (x, y, z) with Q_0(x, 1) monic, to the equation in
// Y = Q_0 y on z = 1. Result variables: (x, y).
MultiPoly monicize(const MultiPoly& F);

struct PlaneSeriesReport {
    int patch_index = 0;
    SeriesCheck check;
};

// Substitute the q-expansions into the plane model through the patch map, with all
// denominators cleared (homogeneous form), and test vanishing through the propagated precision.
PlaneSeriesReport verify_plane_model_series(const CanonicalModel& m, const PatchSpec& patch, const MultiPoly& Q);

struct PlaneFpReport {
    std::uint32_t p = 0;
    int patch_index = 0;
    size_t points = 0, finite = 0, infinite = 0, undefined = 0;
    std::vector<FpPoint> failures;  // finite images not on Q mod p
    bool ok() const { return failures.empty(); }
};

// Q(phi(P)) = 0 for every F_p point of the model where phi is defined and finite.
PlaneFpReport verify_plane_model_fp(const CanonicalModel& m, const PatchSpec& patch, const MultiPoly& Q,
                                    std::uint32_t p, unsigned jobs = 1);
PlaneFpReport verify_plane_model_fp(const CanonicalModel& m, const PatchSpec& patch, const MultiPoly& Q,
                                    const FpPointSet& pts);

template <class Pt>
struct UndefinedPoint {
    Pt point;
    std::vector<UndefReason> reasons;
};

std::vector<UndefinedPoint<FpPoint>> undefined_locus_points(const CanonicalModel& m, const PatchSpec& patch,
                                                            const FpPointSet& pts);
std::vector<UndefinedPoint<std::vector<long>>> undefined_locus_points(const CanonicalModel& m, const PatchSpec& patch,
                                                                      long H, unsigned jobs = 1);

// Local analysis at F_p points. Requires the point to be nonsingular on the reduction.

// Jacobian rank of the reduced equations at P.
int jacobian_rank(const std::vector<MultiPolyFp>& eqs, const FpPoint& P);
// True if every point in pts has Jacobian rank g - 2.
bool all_nonsingular(const CanonicalModel& m, const FpPointSet& pts);

// Truncated power series over F_p in a local parameter s.
using FpSeries = std::vector<Fp::E>;

// Coordinates of a formal branch through the nonsingular point P, to order s^terms.
std::vector<FpSeries> local_branch(const std::vector<MultiPolyFp>& eqs, const FpPoint& P, const Fp& k, int terms);

// Image of P on the plane model, extending phi across its undefined locus along the local branch.
FpPlanePoint resolved_image(const CanonicalModel& m, const PatchSpec& patch, const FpPoint& P, std::uint32_t p);

}  // namespace x0p
