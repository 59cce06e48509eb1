#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "x0p/mpoly.hpp"
#include "x0p/series.hpp"

namespace x0p {

inline constexpr int kSchemaVersion = 1;

struct KnownPoint {
    std::string label;  // cusp, cm, exceptional
    std::optional<long> D;
    std::vector<long> coords;
};

using LinearForm = std::vector<Rat>;
using Matrix3 = std::array<std::array<long, 3>, 3>;

struct PatchSpec {
    int index = 0;
    LinearForm x1, x2, y1, y2;
    std::optional<Matrix3> post_automorphism;  // rows give the new (A, B, C)
    int dx = 0, dy = 0, d_inf = 0;
    std::uint32_t prime = 0;
    QPoly q0;  // monic leading coefficient undone by the monic transform
};

struct PlaneModelRecord {
    int patch_index = 0;
    MultiPoly Q;  // in (x, y), monic in y
};

// Linear change of variables taking this model to an older one, with that model's equations.
struct AltModel {
    std::vector<std::string> variables;
    std::vector<std::vector<long>> substitution;  // row i: new variable i over model variables
    std::vector<MultiPoly> equations;
};

struct CanonicalModel {
    long level = 0;
    int genus = 0;
    std::vector<std::string> variables;
    std::vector<MultiPoly> equations;
    std::vector<std::vector<long>> qexp;  // per variable, coefficients of q^1, q^2, ...
    int precision = 20;
    std::vector<KnownPoint> known_points;
    std::vector<PatchSpec> patches;
    std::vector<PlaneModelRecord> plane_models;
    std::optional<AltModel> galbraith;

    const PatchSpec& patch(int index) const;
    const PlaneModelRecord& plane_model(int patch_index) const;
    // q-expansion of a variable as a truncated series
    Series series(size_t var) const;
    Series series(const LinearForm& f) const;
};

CanonicalModel parse_model(const nlohmann::json& j, bool validate = true);
nlohmann::json to_json(const CanonicalModel& m);
CanonicalModel load_model(const std::string& path, bool validate = true);

// Default fixture directory (environment X0PLUS_FIXTURES, else the build-time path).
std::string fixture_dir();
std::string fixture_path(long level, const std::string& dir = fixture_dir());
const std::vector<long>& known_levels();

Rat eval_form(const LinearForm& f, const std::vector<Rat>& pt);
std::vector<Rat> to_rat(const std::vector<long>& v);

struct PointCheck {
    size_t index = 0;
    std::string label;
    std::vector<long> coords;
    bool ok = true;
    std::vector<size_t> failing_equations;
};

struct KnownPointReport {
    std::vector<PointCheck> rows;
    bool ok() const;
};

KnownPointReport verify_known_points(const CanonicalModel& m);

enum class Status { Pass, Fail, Inconclusive };
const char* status_name(Status s);

struct SeriesCheck {
    size_t index = 0;
    int degree = 0;
    int min_term_valuation = 0;  // smallest valuation among the monomials
    int verified_through = 0;    // coefficients below this exponent were checked
    int first_nonzero = -1;      // exponent of the first nonvanishing coefficient, if any
    Status status = Status::Pass;
};

struct QexpReport {
    std::vector<SeriesCheck> rows;
    bool ok() const;
};

// Substitute each variable's series into each equation and check vanishing through the
// propagated precision.
QexpReport verify_qexp(const CanonicalModel& m);
SeriesCheck check_series_vanishing(const Series& total, int min_term_valuation);

struct GalbraithReport {
    bool ok = true;
    size_t known_points_checked = 0;
    std::vector<std::pair<std::uint32_t, size_t>> fp_points_checked;  // (p, #points)
    std::vector<std::string> failures;
};

// Pull the alternative equations back along the substitution and check that they vanish on
// the model's known points and on all its F_p points for the given primes.
GalbraithReport crosscheck_alt_model(const CanonicalModel& m, const AltModel& alt,
                                     const std::vector<std::uint32_t>& primes = {5, 11, 13});

}  // namespace x0p
