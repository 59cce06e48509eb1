#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "x0p/model.hpp"

namespace x0p {

using FpPoint = std::vector<Fp::E>;

struct FpPointSet {
    std::uint32_t p = 0;
    std::vector<FpPoint> points;  // first nonzero coordinate is 1, sorted
};

// All F_p points of the variety cut out by the equations (p must not divide the level).
FpPointSet enumerate_fp_points(const CanonicalModel& m, std::uint32_t p, unsigned jobs = 1);
FpPointSet enumerate_fp_points(const std::vector<MultiPoly>& equations, std::uint32_t p, unsigned jobs = 1);

// Normalize a nonzero vector so its first nonzero coordinate is 1.
FpPoint normalize(const Fp& k, FpPoint v);
// Reduce a primitive integer point mod p; nullopt if it vanishes identically.
std::optional<FpPoint> reduce_point(const std::vector<long>& coords, std::uint32_t p);

// Primitive integer points with max |coordinate| <= H, first nonzero coordinate positive.
std::vector<std::vector<long>> search_rational_points(const CanonicalModel& m, long H, unsigned jobs = 1);

struct HeegnerForm {
    long a = 0, b = 0, c = 0;
};

HeegnerForm heegner_form(long N, long D);

struct CmOptions {
    int terms = 19;
    double vanish_threshold = 1e-4;
    double convergence_threshold = 0.85;
    long max_denominator = 100;
    double match_tolerance = 1e-3;  // per-ratio tolerance for reconstruction
};

struct CmEvaluation {
    long D = 0;
    HeegnerForm form;
    double q_abs = 0;
    std::vector<std::complex<double>> approx_coords;  // normalized by the largest coordinate
    std::optional<KnownPoint> matched_point;
    std::optional<std::vector<long>> reconstructed;
    double residual = 0;  // to the reconstruction, else to the nearest known point
    bool used_derivative_fallback = false;
};

// Thrown when |q| exceeds the convergence threshold; carries what was computed.
class NonConvergent : public Error {
  public:
    NonConvergent(const std::string& what, CmEvaluation partial)
        : Error(Errc::NonConvergent, what), partial_(std::move(partial)) {}
    const CmEvaluation& partial() const { return partial_; }

  private:
    CmEvaluation partial_;
};

// Every cusp form vanishes at the CM point of discriminant D on X0(N) (D = -3, -4, -N, -4N).
bool forced_vanishing(long N, long D);

CmEvaluation evaluate_cm_point(const CanonicalModel& m, long D, const CmOptions& opt = {});

}  // namespace x0p
