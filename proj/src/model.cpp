#include "x0p/model.hpp"

#include <cstdlib>
#include <fstream>
#include <numeric>

#include "x0p/points.hpp"

#ifndef X0P_FIXTURE_DIR
#define X0P_FIXTURE_DIR "fixtures"
#endif

namespace x0p {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(Errc::Schema, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

mpz_class json_int(const json& v) {
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_number_unsigned()) return mpz_class(std::to_string(v.get<unsigned long long>()));
    if (v.is_string()) return mpz_class(v.get<std::string>());
    schema_error("expected an integer, got " + v.dump());
}

json int_json(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

MultiPoly parse_poly(const json& terms, const std::vector<std::string>& vars) {
    if (!terms.is_array()) schema_error("polynomial must be an array of terms");
    MultiPoly f(vars);
    for (auto& t : terms) {
        if (!t.is_array() || t.size() != 3) schema_error("term must be [num, den, exps]");
        auto exps = t[2].get<Exps>();
        if (exps.size() != vars.size()) schema_error("exponent vector arity mismatch");
        for (int e : exps)
            if (e < 0) schema_error("negative exponent");
        f.add_term(exps, make_rat(json_int(t[0]), json_int(t[1])));
    }
    return f;
}

json poly_json(const MultiPoly& f) {
    json out = json::array();
    for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it)
        out.push_back({int_json(it->second.get_num()), int_json(it->second.get_den()), it->first});
    return out;
}

QPoly parse_upoly(const json& terms) {
    MultiPoly f = parse_poly(terms, {"x"});
    std::vector<Rat> c(std::max(f.degree_in(0) + 1, 0), Rat(0));
    for (auto& [e, v] : f.terms) c[e[0]] = v;
    return QPoly(QQ{}, c);
}

json upoly_json(const QPoly& p) {
    MultiPoly f({"x"});
    for (int i = 0; i <= p.deg(); ++i) f.add_term({i}, p.c[i]);
    return poly_json(f);
}

LinearForm parse_form(const json& j, size_t g) {
    if (!j.is_array() || j.size() != g) schema_error("linear form must have one coefficient per variable");
    LinearForm f;
    for (auto& v : j) {
        if (v.is_string()) f.push_back(parse_rat(v.get<std::string>()));
        else f.push_back(Rat(json_int(v)));
    }
    return f;
}

json form_json(const LinearForm& f) {
    json out = json::array();
    for (auto& v : f) out.push_back(v.get_str());
    return out;
}

bool proportional(const LinearForm& a, const LinearForm& b) {
    // rank of the 2 x g matrix is < 2
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            if (a[i] * b[j] - a[j] * b[i] != 0) return false;
    return true;
}

void validate(const CanonicalModel& m) {
    auto bad = [](const std::string& s) { throw Error(Errc::Invariant, s); };
    if (m.genus < 4 || m.genus > 6) bad("genus must be 4, 5 or 6");
    const size_t g = m.genus;
    if (m.variables.size() != g) bad("number of variables differs from the genus");
    for (size_t i = 0; i < m.equations.size(); ++i) {
        const auto& e = m.equations[i];
        if (!e.is_homogeneous() || e.is_zero()) bad("equation " + std::to_string(i) + " is not homogeneous");
        int d = e.total_degree();
        if (d != 2 && d != 3) bad("equation " + std::to_string(i) + " has degree " + std::to_string(d));
    }
    if (m.qexp.size() != g) bad("q-expansion missing for some variable");
    for (size_t i = 0; i < g; ++i)
        if (static_cast<int>(m.qexp[i].size()) < m.precision - 1)
            bad("q-expansion of " + m.variables[i] + " is shorter than the stated precision");
    for (size_t i = 0; i < m.known_points.size(); ++i) {
        const auto& c = m.known_points[i].coords;
        if (c.size() != g) bad("known point " + std::to_string(i) + " has wrong arity");
        long gg = 0;
        for (long v : c) gg = std::gcd(gg, v);
        if (gg != 1) bad("known point " + std::to_string(i) + " is not primitive");
    }
    auto kp = verify_known_points(m);
    for (auto& r : kp.rows)
        if (!r.ok)
            bad("known point " + std::to_string(r.index) + " fails equation " +
                std::to_string(r.failing_equations.front()));
    if (m.plane_models.size() != m.patches.size()) bad("each patch needs exactly one plane model");
    for (auto& p : m.patches) {
        std::string tag = "patch " + std::to_string(p.index);
        if (proportional(p.x1, p.x2)) bad(tag + ": x1 and x2 are proportional");
        if (proportional(p.y1, p.y2)) bad(tag + ": y1 and y2 are proportional");
        if (p.q0.is_zero() || p.q0.lc() != 1) bad(tag + ": q0 must be monic");
        if (p.post_automorphism) {
            const auto& a = *p.post_automorphism;
            long det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                       a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
            if (det == 0) bad(tag + ": automorphism is singular");
        }
        const auto& Q = m.plane_model(p.index).Q;
        int d = Q.degree_in(1);
        if (d != p.dx) bad(tag + ": degree in y is " + std::to_string(d) + ", expected " + std::to_string(p.dx));
        Exps top{0, d};
        if (Q.coeff(top) != 1) bad(tag + ": plane model is not monic in y");
        for (auto& [e, c] : Q.terms)
            if (e[1] == d && e[0] != 0) bad(tag + ": plane model is not monic in y");
    }
    auto qr = verify_qexp(m);
    for (auto& r : qr.rows)
        if (r.status != Status::Pass)
            bad("equation " + std::to_string(r.index) + " does not vanish on the q-expansions");
}

}  // namespace

const PatchSpec& CanonicalModel::patch(int index) const {
    for (auto& p : patches)
        if (p.index == index) return p;
    throw Error(Errc::NotFound, "level " + std::to_string(level) + " has no patch " + std::to_string(index));
}

const PlaneModelRecord& CanonicalModel::plane_model(int patch_index) const {
    for (auto& p : plane_models)
        if (p.patch_index == patch_index) return p;
    throw Error(Errc::NotFound, "no plane model for patch " + std::to_string(patch_index));
}

Series CanonicalModel::series(size_t var) const {
    std::vector<Rat> c(1, Rat(0));
    for (long v : qexp.at(var)) c.emplace_back(v);
    return Series::truncated(std::move(c), precision);
}

Series CanonicalModel::series(const LinearForm& f) const {
    Series s = Series::truncated({}, precision);
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0) s = s + series(i) * f[i];
    return s;
}

CanonicalModel parse_model(const json& j, bool check) {
    CanonicalModel m;
    if (!j.is_object()) schema_error("model must be a JSON object");
    if (field(j, "schema").get<int>() != kSchemaVersion) schema_error("unsupported schema version");
    try {
        m.level = field(j, "level").get<long>();
        m.genus = field(j, "genus").get<int>();
        m.variables = field(j, "variables").get<std::vector<std::string>>();
        for (auto& e : field(j, "equations")) m.equations.push_back(parse_poly(e, m.variables));
        m.precision = field(j, "precision").get<int>();
        const auto& q = field(j, "qexp");
        for (auto& v : m.variables) m.qexp.push_back(field(q, v.c_str()).get<std::vector<long>>());
        for (auto& p : field(j, "known_points")) {
            KnownPoint k;
            k.label = field(p, "label").get<std::string>();
            if (p.contains("D")) k.D = p.at("D").get<long>();
            k.coords = field(p, "coords").get<std::vector<long>>();
            m.known_points.push_back(std::move(k));
        }
        const size_t g = m.variables.size();
        for (auto& p : field(j, "patches")) {
            PatchSpec s;
            s.index = field(p, "index").get<int>();
            s.x1 = parse_form(field(p, "x1"), g);
            s.x2 = parse_form(field(p, "x2"), g);
            s.y1 = parse_form(field(p, "y1"), g);
            s.y2 = parse_form(field(p, "y2"), g);
            if (p.contains("post_automorphism") && !p.at("post_automorphism").is_null())
                s.post_automorphism = p.at("post_automorphism").get<Matrix3>();
            s.dx = field(p, "dx").get<int>();
            s.dy = field(p, "dy").get<int>();
            s.d_inf = field(p, "d_inf").get<int>();
            s.prime = field(p, "prime").get<std::uint32_t>();
            s.q0 = parse_upoly(field(p, "q0"));
            m.patches.push_back(std::move(s));
        }
        for (auto& p : field(j, "plane_models")) {
            PlaneModelRecord r;
            r.patch_index = field(p, "patch_index").get<int>();
            r.Q = parse_poly(field(p, "Q"), {"x", "y"});
            m.plane_models.push_back(std::move(r));
        }
        if (j.contains("galbraith")) {
            const auto& a = j.at("galbraith");
            AltModel alt;
            alt.variables = field(a, "variables").get<std::vector<std::string>>();
            alt.substitution = field(a, "substitution").get<std::vector<std::vector<long>>>();
            for (auto& e : field(a, "equations")) alt.equations.push_back(parse_poly(e, alt.variables));
            m.galbraith = std::move(alt);
        }
    } catch (const json::exception& e) {
        schema_error(e.what());
    }
    if (check) validate(m);
    return m;
}

json to_json(const CanonicalModel& m) {
    json j;
    j["schema"] = kSchemaVersion;
    j["level"] = m.level;
    j["genus"] = m.genus;
    j["variables"] = m.variables;
    j["equations"] = json::array();
    for (auto& e : m.equations) j["equations"].push_back(poly_json(e));
    j["precision"] = m.precision;
    j["qexp"] = json::object();
    for (size_t i = 0; i < m.variables.size(); ++i) j["qexp"][m.variables[i]] = m.qexp[i];
    j["known_points"] = json::array();
    for (auto& k : m.known_points) {
        json p = {{"label", k.label}, {"coords", k.coords}};
        if (k.D) p["D"] = *k.D;
        j["known_points"].push_back(p);
    }
    j["patches"] = json::array();
    for (auto& s : m.patches) {
        json p = {{"index", s.index},  {"x1", form_json(s.x1)}, {"x2", form_json(s.x2)},
                  {"y1", form_json(s.y1)}, {"y2", form_json(s.y2)}, {"dx", s.dx},
                  {"dy", s.dy},        {"d_inf", s.d_inf},     {"prime", s.prime},
                  {"q0", upoly_json(s.q0)}};
        p["post_automorphism"] = s.post_automorphism ? json(*s.post_automorphism) : json(nullptr);
        j["patches"].push_back(p);
    }
    j["plane_models"] = json::array();
    for (auto& r : m.plane_models) j["plane_models"].push_back({{"patch_index", r.patch_index}, {"Q", poly_json(r.Q)}});
    if (m.galbraith) {
        json a;
        a["variables"] = m.galbraith->variables;
        a["substitution"] = m.galbraith->substitution;
        a["equations"] = json::array();
        for (auto& e : m.galbraith->equations) a["equations"].push_back(poly_json(e));
        j["galbraith"] = a;
    }
    return j;
}

CanonicalModel load_model(const std::string& path, bool check) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::NotFound, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        schema_error(path + ": " + e.what());
    }
    return parse_model(j, check);
}

std::string fixture_dir() {
    if (const char* d = std::getenv("X0PLUS_FIXTURES"); d && *d) return d;
    return X0P_FIXTURE_DIR;
}

std::string fixture_path(long level, const std::string& dir) { return dir + "/" + std::to_string(level) + ".json"; }

const std::vector<long>& known_levels() {
    static const std::vector<long> v{137, 173, 199, 251, 311, 157, 181, 227, 263, 163, 197, 211, 223, 269, 271, 359};
    return v;
}

Rat eval_form(const LinearForm& f, const std::vector<Rat>& pt) {
    Rat s = 0;
    for (size_t i = 0; i < f.size(); ++i) s += f[i] * pt[i];
    return s;
}

std::vector<Rat> to_rat(const std::vector<long>& v) {
    std::vector<Rat> r;
    for (long x : v) r.emplace_back(x);
    return r;
}

bool KnownPointReport::ok() const {
    for (auto& r : rows)
        if (!r.ok) return false;
    return true;
}

KnownPointReport verify_known_points(const CanonicalModel& m) {
    KnownPointReport rep;
    for (size_t i = 0; i < m.known_points.size(); ++i) {
        const auto& k = m.known_points[i];
        PointCheck row{i, k.label, k.coords, true, {}};
        if (k.coords.size() != m.variables.size()) {
            row.ok = false;
        } else {
            auto pt = to_rat(k.coords);
            for (size_t e = 0; e < m.equations.size(); ++e)
                if (m.equations[e].eval(pt) != 0) {
                    row.ok = false;
                    row.failing_equations.push_back(e);
                }
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

bool QexpReport::ok() const {
    for (auto& r : rows)
        if (r.status != Status::Pass) return false;
    return true;
}

SeriesCheck check_series_vanishing(const Series& total, int min_term_valuation) {
    SeriesCheck r;
    r.min_term_valuation = min_term_valuation;
    r.verified_through = total.prec;
    int v = total.valuation();
    if (v < total.prec) {
        r.first_nonzero = v;
        r.status = Status::Fail;
    } else if (total.prec <= min_term_valuation) {
        // nothing beyond the trivially zero range was tested
        r.status = Status::Inconclusive;
    }
    return r;
}

QexpReport verify_qexp(const CanonicalModel& m) {
    QexpReport rep;
    std::vector<Series> s;
    for (size_t i = 0; i < m.variables.size(); ++i) s.push_back(m.series(i));
    for (size_t e = 0; e < m.equations.size(); ++e) {
        Series total = Series::constant(0);
        int minval = Series::kExact;
        for (auto& [ex, c] : m.equations[e].terms) {
            Series t = Series::constant(c);
            for (size_t i = 0; i < ex.size(); ++i)
                if (ex[i]) t = t * pow(s[i], ex[i]);
            minval = std::min(minval, t.valuation());
            total = total + t;
        }
        auto row = check_series_vanishing(total, minval);
        row.index = e;
        row.degree = m.equations[e].total_degree();
        rep.rows.push_back(row);
    }
    return rep;
}

GalbraithReport crosscheck_alt_model(const CanonicalModel& m, const AltModel& alt,
                                     const std::vector<std::uint32_t>& primes) {
    GalbraithReport rep;
    const size_t g = m.variables.size();
    if (alt.substitution.size() != alt.variables.size())
        throw Error(Errc::Schema, "substitution needs one row per alternative variable");
    std::vector<MultiPoly> vals;
    for (auto& row : alt.substitution) {
        if (row.size() != g) throw Error(Errc::Schema, "substitution row has wrong arity");
        MultiPoly f(m.variables);
        for (size_t i = 0; i < g; ++i) f = f + scale(MultiPoly::variable(m.variables, i), row[i]);
        vals.push_back(f);
    }
    std::vector<MultiPoly> pulled;
    for (auto& e : alt.equations) pulled.push_back(substitute(e, vals));

    for (auto& k : m.known_points) {
        auto pt = to_rat(k.coords);
        for (size_t e = 0; e < pulled.size(); ++e)
            if (pulled[e].eval(pt) != 0) {
                rep.ok = false;
                rep.failures.push_back("equation " + std::to_string(e) + " at known point " + k.label);
            }
        ++rep.known_points_checked;
    }
    for (auto p : primes) {
        auto pts = enumerate_fp_points(m, p);
        std::vector<MultiPolyFp> red;
        for (auto& e : pulled) red.push_back(reduce_mod_p(e, p));
        for (auto& pt : pts.points)
            for (size_t e = 0; e < red.size(); ++e)
                if (red[e].eval(pt) != 0) {
                    rep.ok = false;
                    std::string s = "equation " + std::to_string(e) + " at an F_" + std::to_string(p) + " point [";
                    for (size_t i = 0; i < pt.size(); ++i) s += (i ? ":" : "") + std::to_string(pt[i]);
                    rep.failures.push_back(s + "]");
                }
        rep.fp_points_checked.emplace_back(p, pts.points.size());
    }
    return rep;
}

}  // namespace x0p
