#pragma once
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "convexgeo.hpp"
#include "io_json.hpp"
#include "svg.hpp"

// command-line front end. exit codes: 0 = success / check passed,
// 1 = a concavity or convexity check measured a real violation,
// 2 = the invocation itself is wrong, 3 = the input data is unusable.
namespace convexgeo::cli {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- small parsers ----------------------------------------------------

inline double to_d(const std::string& s) {
    size_t n = 0;
    double v = 0;
    try {
        v = std::stod(s, &n);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: " + s);
    }
    if (n != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
}

inline int to_i(const std::string& s) {
    size_t n = 0;
    int v = 0;
    try {
        v = std::stoi(s, &n);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: " + s);
    }
    if (n != s.size()) throw std::invalid_argument("not an integer: " + s);
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t p = 0;
    while (true) {
        size_t q = s.find(sep, p);
        parts.push_back(s.substr(p, q - p));
        if (q == std::string::npos) break;
        p = q + 1;
    }
    return parts;
}

// point grammar: v:<i> | f:<i>:<b1>,<b2>,<b3> | xyz:<x>,<y>,<z>
inline SurfacePoint parse_point(const ConvexSurfaceMesh& m, const std::string& spec) {
    std::invalid_argument bad("point spec must be v:<i>, f:<i>:<b1>,<b2>,<b3>, or xyz:<x>,<y>,<z> "
                              "(got \"" + spec + "\")");
    auto parts = split(spec, ':');
    if (parts.size() == 2 && parts[0] == "v") {
        int v = to_i(parts[1]);
        if (v < 0 || v >= m.n_vertices()) throw InputError("vertex index out of range: " + spec);
        return m.vertex_point(v);
    }
    if (parts.size() == 3 && parts[0] == "f") {
        int f = to_i(parts[1]);
        if (f < 0 || f >= m.n_faces()) throw InputError("face index out of range: " + spec);
        auto bs = split(parts[2], ',');
        if (bs.size() != 3) throw bad;
        double b0 = to_d(bs[0]), b1 = to_d(bs[1]), b2 = to_d(bs[2]);
        if (b0 < 0 || b1 < 0 || b2 < 0 || b0 + b1 + b2 <= 0)
            throw InputError("barycentric weights must be nonnegative with positive sum: " + spec);
        double s = b0 + b1 + b2;
        SurfacePoint sp;
        sp.face = f;
        sp.bary = {b0 / s, b1 / s, b2 / s};
        return sp;
    }
    if (parts.size() == 2 && parts[0] == "xyz") {
        auto cs = split(parts[1], ',');
        if (cs.size() != 3) throw bad;
        return m.nearest_surface_point({to_d(cs[0]), to_d(cs[1]), to_d(cs[2])});
    }
    throw bad;
}

// source grammar adds whole components: face:<i>, edge:<a>,<b>, all
inline SourceSet parse_sources(const ConvexSurfaceMesh& m, const std::vector<std::string>& specs) {
    SourceSet K;
    for (const std::string& s : specs) {
        if (s == "all") {
            for (int f = 0; f < m.n_faces(); f++) K.faces.push_back(f);
        } else if (s.rfind("face:", 0) == 0) {
            int f = to_i(s.substr(5));
            if (f < 0 || f >= m.n_faces()) throw InputError("face index out of range: " + s);
            K.faces.push_back(f);
        } else if (s.rfind("edge:", 0) == 0) {
            auto vs = split(s.substr(5), ',');
            if (vs.size() != 2) throw std::invalid_argument("edge source needs edge:<a>,<b>: " + s);
            int a = to_i(vs[0]), b = to_i(vs[1]);
            if (a < 0 || a >= m.n_vertices() || b < 0 || b >= m.n_vertices())
                throw InputError("edge vertex out of range: " + s);
            K.edges.push_back({a, b});
        } else {
            K.points.push_back(parse_point(m, s));
        }
    }
    return K;
}

// ---- inputs -----------------------------------------------------------

inline BodySpec body_from_json(const nlohmann::json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "sphere") return BodySpec::sphere();
    if (type == "ellipsoid")
        return BodySpec::ellipsoid(j.value("a", 1.0), j.value("b", 1.0), j.value("c", 1.0));
    if (type == "hull") {
        std::vector<Vec3> pts;
        for (const auto& p : j.at("points"))
            pts.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
        return BodySpec::hull(std::move(pts));
    }
    throw InputError("body type must be sphere, ellipsoid, or hull (got \"" + type + "\")");
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open file: " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

// a mesh argument is an OFF file or a JSON body description; an analytic
// body carries "k" (and optional "seed") to pick the faceting
inline ConvexSurfaceMesh load_mesh(const std::string& path) {
    if (!std::filesystem::exists(path)) throw InputError("no such file: " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".off") return load_off(path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json doc = read_json_file(path);
        BodySpec body = body_from_json(doc);
        int k = doc.value("k", 0);
        std::uint64_t seed = doc.value("seed", 0);
        if (k >= 4) return approximate_polyhedral(body, k, seed);
        if (body.type == "hull") return mesh_from_hull(body.points);
        throw InputError("analytic body needs \"k\" to become a mesh: " + path);
    }
    throw InputError("mesh must be a .off or .json file: " + path);
}

// body argument for approx/converge: sphere | ellipsoid:<a>,<b>,<c> | file
inline BodySpec parse_body(const std::string& spec) {
    if (spec == "sphere") return BodySpec::sphere();
    if (spec.rfind("ellipsoid:", 0) == 0) {
        auto cs = split(spec.substr(10), ',');
        if (cs.size() != 3)
            throw std::invalid_argument("ellipsoid body needs ellipsoid:<a>,<b>,<c>");
        double a = to_d(cs[0]), b = to_d(cs[1]), c = to_d(cs[2]);
        if (a <= 0 || b <= 0 || c <= 0) throw InputError("ellipsoid semi-axes must be positive");
        return BodySpec::ellipsoid(a, b, c);
    }
    if (spec.size() >= 5 && spec.substr(spec.size() - 5) == ".json") {
        if (!std::filesystem::exists(spec)) throw InputError("no such file: " + spec);
        return body_from_json(read_json_file(spec));
    }
    if (spec.size() >= 4 && spec.substr(spec.size() - 4) == ".off") {
        if (!std::filesystem::exists(spec)) throw InputError("no such file: " + spec);
        return BodySpec::hull(load_off(spec).V);
    }
    throw std::invalid_argument(
        "body must be sphere, ellipsoid:<a>,<b>,<c>, or a .json/.off file: " + spec);
}

inline double body_gauge(const BodySpec& b, const Vec3& x) {
    if (b.type == "sphere") return norm(x);
    if (b.type == "ellipsoid") {
        Vec3 s{x.x / b.a, x.y / b.b, x.z / b.c};
        return norm(s);
    }
    throw std::invalid_argument("gauge needs an analytic body");
}

// ---- sampling helpers --------------------------------------------------

inline std::vector<double> face_cum_areas(const ConvexSurfaceMesh& m) {
    std::vector<double> cum(m.n_faces());
    double s = 0;
    for (int f = 0; f < m.n_faces(); f++) cum[f] = (s += m.face_area(f));
    return cum;
}

inline SurfacePoint sample_surface(const ConvexSurfaceMesh& m, Rng& rng,
                                   const std::vector<double>& cum) {
    double u = rng.uniform() * cum.back();
    int f = int(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    f = std::min(f, m.n_faces() - 1);
    double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
    SurfacePoint sp;
    sp.face = f;
    sp.bary = {1 - r1, r1 * (1 - r2), r1 * r2};
    return sp;
}

// ---- environment -------------------------------------------------------

// CONVEXGEO_THREADS caps worker parallelism; evaluation currently runs on
// one thread per process, which satisfies any positive cap
inline int env_thread_cap() {
    const char* s = std::getenv("CONVEXGEO_THREADS");
    if (!s || !*s) return 0;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v <= 0) throw InputError("CONVEXGEO_THREADS must be a positive integer");
    return int(v);
}

// ---- output ------------------------------------------------------------

inline void emit_report(std::ostream& out, const std::string& json_file, const json& doc) {
    std::string text = doc.dump(2);
    text += '\n';
    out << text;
    if (!json_file.empty()) {
        std::ofstream f(json_file, std::ios::binary);
        if (!f) throw InputError("cannot open output file: " + json_file);
        f << text;
    }
}

// ---- option storage ----------------------------------------------------

struct CliOptions {
    std::string mesh, body, json_file, svg, chart_at, check, kind = "distance";
    std::string from, to, at, at2, t_offset, values;
    std::vector<std::string> sources;
    std::vector<int> ks;
    std::vector<double> rs;
    double r = 0, r_min = 0, r_max = 0, window = -1, tau = 1e-9, tol = -1, c = -1,
           delta = -1, radius = -1, m_upper = -1, density = 0, eps_tie = 0, min_angle = 0,
           chart_radius = -1;
    int subdiv = 16, scan_subdiv = 12, n = 20, samples = 500, diam_samples = 200, pairs = -1,
        grid = -1, dirs = 16, sides = 32, k = 0, chart_sides = 32;
    std::uint64_t seed = 0;
    bool no_polyline = false;
    std::string save_off_path;
    int threads = 0;
};

inline json point_echo(const std::string& spec, const SurfacePoint& sp) {
    return json{{"spec", spec}, {"resolved", to_json(sp)}};
}

inline double default_radius(const ConvexSurfaceMesh& m, double given) {
    return given > 0 ? given : 0.25 * m.bbox_diag();
}

inline PairGrid grid_for(int target_pairs, std::uint64_t seed) {
    PairGrid g;
    g.seed = seed;
    // the grid walks centers x directions x magnitudes; honor the request as
    // a lower bound on attempted pairs
    if (target_pairs > 0)
        g.n_centers = (target_pairs + g.n_dirs * g.n_mags - 1) / (g.n_dirs * g.n_mags);
    return g;
}

inline void render_svg(const ConvexSurfaceMesh& m, const CliOptions& o,
                       const std::function<void(SvgScene&)>& fill) {
    if (o.svg.empty()) return;
    SvgScene scene(m);
    fill(scene);
    if (!o.chart_at.empty()) {
        double rr = o.chart_radius > 0 ? o.chart_radius : 0.3 * m.bbox_diag();
        StandardChart ch = build_standard_chart(m, parse_point(m, o.chart_at), rr, o.chart_sides);
        scene.save_chart(ch, o.svg);
    } else {
        scene.save(o.svg);
    }
}

// ---- commands ----------------------------------------------------------

inline int cmd_check_convex(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    ConvexityReport rep = validate_convex(m, o.tol);
    json res = to_json(rep);
    res["n_vertices"] = m.n_vertices();
    res["n_faces"] = m.n_faces();
    res["n_edges"] = m.n_edges();
    res["bbox_diag"] = m.bbox_diag();
    emit_report(out, o.json_file,
                report_envelope("check-convex",
                                json{{"mesh", o.mesh}, {"tol", o.tol}, {"threads", o.threads}},
                                res));
    render_svg(m, o, [](SvgScene&) {});
    return rep.pass ? 0 : 1;
}

inline int cmd_chart(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    SurfacePoint at = parse_point(m, o.at);
    double radius = default_radius(m, o.radius);
    StandardChart ch = build_standard_chart(m, at, radius, o.sides);
    emit_report(out, o.json_file,
                report_envelope("chart",
                                json{{"mesh", o.mesh},
                                     {"at", point_echo(o.at, at)},
                                     {"radius", radius},
                                     {"sides", o.sides},
                                     {"threads", o.threads}},
                                to_json(ch)));
    if (!o.svg.empty()) {
        SvgScene scene(m);
        scene.add_markers({m.point(at)});
        scene.save_chart(ch, o.svg);
    }
    return 0;
}

inline int cmd_distance(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    SurfacePoint a = parse_point(m, o.from), b = parse_point(m, o.to);
    GeodesicPath p = shortest_path(m, a, b, o.tau);
    emit_report(out, o.json_file,
                report_envelope("distance",
                                json{{"mesh", o.mesh},
                                     {"from", point_echo(o.from, a)},
                                     {"to", point_echo(o.to, b)},
                                     {"tau", o.tau},
                                     {"threads", o.threads}},
                                to_json(p, !o.no_polyline)));
    render_svg(m, o, [&](SvgScene& s) {
        s.add_path(p);
        s.add_markers({m.point(a), m.point(b)});
    });
    return 0;
}

inline int cmd_diameter(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    DiameterReport rep = intrinsic_diameter(m, o.diam_samples, o.tau);
    emit_report(out, o.json_file,
                report_envelope("diameter",
                                json{{"mesh", o.mesh},
                                     {"samples", o.diam_samples},
                                     {"tau", o.tau},
                                     {"threads", o.threads}},
                                to_json(rep)));
    return 0;
}

inline int cmd_approx(const CliOptions& o, std::ostream& out) {
    BodySpec body = parse_body(o.body);
    if (o.k < 4) throw std::invalid_argument("approx needs --k >= 4");
    ConvexSurfaceMesh mk = approximate_polyhedral(body, o.k, o.seed);
    json res{{"n_vertices", mk.n_vertices()},
             {"n_faces", mk.n_faces()},
             {"n_edges", mk.n_edges()},
             {"volume", mk.volume()},
             {"bbox_diag", mk.bbox_diag()}};
    if (body.type == "hull") {
        SandwichReport sw = sandwich_epsilon(mesh_from_hull(body.points), mk);
        res["sandwich"] = to_json(sw);
    } else {
        // vertices sit on the body; the facets sag inward by at most the
        // worst face-centroid gauge gap
        double sag = 0, vert_err = 0;
        for (int f = 0; f < mk.n_faces(); f++) {
            Vec3 c = (mk.V[mk.F[f][0]] + mk.V[mk.F[f][1]] + mk.V[mk.F[f][2]]) / 3.0;
            sag = std::max(sag, 1.0 - body_gauge(body, c));
        }
        for (const Vec3& v : mk.V) vert_err = std::max(vert_err, std::abs(body_gauge(body, v) - 1.0));
        res["inscribed_sag"] = sag;
        res["max_vertex_gauge_error"] = vert_err;
    }
    if (!o.save_off_path.empty()) save_off(mk, o.save_off_path);
    emit_report(out, o.json_file,
                report_envelope("approx",
                                json{{"body", o.body},
                                     {"k", o.k},
                                     {"seed", o.seed},
                                     {"save_off", o.save_off_path},
                                     {"threads", o.threads}},
                                res));
    render_svg(mk, o, [](SvgScene&) {});
    return 0;
}

inline int cmd_converge(const CliOptions& o, std::ostream& out) {
    BodySpec body = parse_body(o.body);
    if (o.ks.size() < 2) throw std::invalid_argument("converge needs --ks with at least two sizes");
    for (size_t i = 1; i < o.ks.size(); i++)
        if (o.ks[i] <= o.ks[i - 1])
            throw std::invalid_argument("--ks must be strictly increasing");

    std::vector<ConvexSurfaceMesh> seq;
    for (int k : o.ks) seq.push_back(approximate_polyhedral(body, k, o.seed));
    std::vector<const ConvexSurfaceMesh*> seq_ptrs;
    for (const auto& mk : seq) seq_ptrs.push_back(&mk);

    // reference surface: exact hull when the body is one, otherwise a much
    // finer faceting standing in for the smooth limit
    ConvexSurfaceMesh X = body.type == "hull"
                              ? mesh_from_hull(body.points)
                              : approximate_polyhedral(body, 4 * o.ks.back(), o.seed + 1);

    json params{{"body", o.body}, {"ks", o.ks},   {"kind", o.kind},
                {"seed", o.seed}, {"tau", o.tau}, {"threads", o.threads}};
    if (o.kind == "distance") {
        Rng rng(o.seed);
        auto cum = face_cum_areas(X);
        std::vector<std::pair<SurfacePoint, SurfacePoint>> pairs;
        for (int i = 0; i < o.n; i++)
            pairs.emplace_back(sample_surface(X, rng, cum), sample_surface(X, rng, cum));
        DistanceConvergenceReport rep = distance_convergence_report(X, seq_ptrs, pairs, o.tau);
        params["pairs"] = o.n;
        emit_report(out, o.json_file,
                    report_envelope("converge", params, to_json(rep, true)));
        return rep.trend_ok ? 0 : 1;
    }
    if (o.kind == "chart") {
        SurfacePoint at = o.at.empty() ? X.nearest_surface_point(X.V[0]) : parse_point(X, o.at);
        StandardChart chartX = build_standard_chart(X, at, default_radius(X, o.radius), o.sides);
        // probe a strictly interior subdomain so every approximant covers it
        Vec2 cen{0, 0};
        for (const Vec2& v : chartX.V) cen += v;
        cen = cen / double(chartX.V.size());
        std::vector<Vec2> W;
        for (const Vec2& v : chartX.V) W.push_back(cen + (v - cen) * 0.7);

        json reps = json::array();
        bool all_pass = true;
        for (const auto& mk : seq) {
            ChartConvergenceReport rep = chart_convergence_report(chartX, W, mk, o.samples, o.seed);
            all_pass = all_pass && rep.pass;
            reps.push_back(to_json(rep));
        }
        params["samples"] = o.samples;
        emit_report(out, o.json_file,
                    report_envelope("converge", params,
                                    json{{"pass", all_pass}, {"reports", reps}}));
        return all_pass ? 0 : 1;
    }
    throw std::invalid_argument("--kind must be distance or chart");
}

inline int cmd_dc_check(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    json params{{"mesh", o.mesh},   {"check", o.check}, {"seed", o.seed},
                {"tau", o.tau},     {"threads", o.threads}};
    auto finish = [&](const ConcavityReport& rep) {
        emit_report(out, o.json_file, report_envelope("dc-check", params, to_json(rep)));
        return rep.pass ? 0 : 1;
    };

    if (o.check == "second-diff") {
        auto vs = split(o.values, ',');
        if (vs.size() != 3)
            throw std::invalid_argument("second-diff needs --values <f(a)>,<f(b)>,<f(mid)>");
        double v = second_difference(to_d(vs[0]), to_d(vs[1]), to_d(vs[2]));
        params["values"] = o.values;
        emit_report(out, o.json_file,
                    report_envelope("dc-check", params, json{{"second_difference", v}}));
        return 0;
    }
    if (o.check == "chart-c") {
        if (o.at.empty()) throw std::invalid_argument("chart-c needs --at");
        SurfacePoint at = parse_point(m, o.at);
        double radius = default_radius(m, o.radius);
        StandardChart ch = build_standard_chart(m, at, radius, o.sides);
        double c = o.c < 0 ? 2.0 : o.c;
        PairGrid g = grid_for(o.grid, o.seed);
        params["at"] = point_echo(o.at, at);
        params["radius"] = radius;
        params["c"] = c;
        params["grid"] = g.n_centers * g.n_dirs * g.n_mags;
        params["fixture"] = "squared-norm";
        // the built-in fixture is the squared plane norm: exactly 2-concave,
        // so any c below 2 must be reported as violated
        return finish(check_chart_c_concavity(
            ch, [](const Vec2& x) { return x.x * x.x + x.y * x.y; }, c, g));
    }
    if (o.check == "midpoint-4c" || o.check == "diagonal") {
        int n = o.pairs > 0 ? o.pairs : (o.check == "diagonal" ? 50 : 100);
        Rng rng(o.seed);
        auto cum = face_cum_areas(m);
        params["pairs"] = n;
        if (o.check == "diagonal") {
            std::vector<ProductPoint> samples;
            for (int i = 0; i < n; i++)
                samples.push_back({sample_surface(m, rng, cum), sample_surface(m, rng, cum)});
            return finish(check_diagonal_identity(m, samples, o.tau));
        }
        std::vector<std::pair<ProductPoint, ProductPoint>> pairs;
        for (int i = 0; i < n; i++)
            pairs.push_back({{sample_surface(m, rng, cum), sample_surface(m, rng, cum)},
                             {sample_surface(m, rng, cum), sample_surface(m, rng, cum)}});
        double c = o.c < 0 ? 4.0 : o.c;
        params["c"] = c;
        return finish(check_midpoint_concavity(m, pairs, c, o.tau));
    }
    if (o.check == "displacement") {
        if (o.at.empty()) throw std::invalid_argument("displacement needs --at");
        SurfacePoint at = parse_point(m, o.at);
        double radius = default_radius(m, o.radius);
        StandardChart ch = build_standard_chart(m, at, radius, o.sides);
        Vec2 t = ch.to_plane(m.point(ch.seed));
        if (!o.t_offset.empty()) {
            auto cs = split(o.t_offset, ',');
            if (cs.size() != 2) throw std::invalid_argument("--t needs <du>,<dv>");
            t += Vec2{to_d(cs[0]), to_d(cs[1])};
        }
        double delta = o.delta > 0 ? o.delta : 0.5 * radius;
        params["at"] = point_echo(o.at, at);
        params["radius"] = radius;
        params["t_offset"] = o.t_offset.empty() ? "0,0" : o.t_offset;
        params["delta"] = delta;
        params["dirs"] = o.dirs;
        return finish(check_midpoint_displacement(m, ch, t, delta, o.dirs, o.tau, o.seed));
    }
    if (o.check == "modifier" || o.check == "field-dc") {
        if (o.at.empty()) throw std::invalid_argument(o.check + " needs --at");
        SurfacePoint at = parse_point(m, o.at);
        double radius = default_radius(m, o.radius);
        StandardChart ch = build_standard_chart(m, at, radius, o.sides);
        // any upper bound for the intrinsic diameter works; the intrinsic
        // distance between surface points is at most pi/2 times the chord
        double M = o.m_upper > 0 ? o.m_upper : 2.0 * m.bbox_diag();
        PairGrid g = grid_for(o.grid, o.seed);
        params["at"] = point_echo(o.at, at);
        params["radius"] = radius;
        params["m_upper"] = M;
        params["grid"] = g.n_centers * g.n_dirs * g.n_mags;
        if (o.check == "modifier") {
            if (o.at2.empty()) throw std::invalid_argument("modifier needs --at2");
            SurfacePoint at2 = parse_point(m, o.at2);
            StandardChart ch2 = build_standard_chart(m, at2, radius, o.sides);
            params["at2"] = point_echo(o.at2, at2);
            return finish(check_modifier_concavity(m, ch, ch2, M, g, o.tau));
        }
        if (o.sources.empty()) throw std::invalid_argument("field-dc needs --source");
        SourceSet K = parse_sources(m, o.sources);
        params["sources"] = o.sources;
        return finish(check_dc_distance_field(m, ch, K, M, g, o.tau));
    }
    throw std::invalid_argument(
        "--check must be one of second-diff, chart-c, midpoint-4c, diagonal, displacement, "
        "modifier, field-dc (got \"" + o.check + "\")");
}

inline int cmd_field(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    SourceSet K = parse_sources(m, o.sources);
    FieldOptions fo;
    fo.tau_geo = o.tau;
    DistanceField f = multi_source_field(m, K, fo);
    int argmax = 0;
    for (int v = 1; v < m.n_vertices(); v++)
        if (f.vdist[v] > f.vdist[argmax]) argmax = v;
    json res{{"n_source_components", K.n_components()},
             {"e_field", f.e_field},
             {"max_vertex_dist", f.max_vertex_dist},
             {"farthest_vertex", argmax}};
    if (!o.at.empty()) {
        SurfacePoint q = parse_point(m, o.at);
        res["eval"] = json{{"at", point_echo(o.at, q)}, {"value", f.eval(q)}};
    }
    emit_report(out, o.json_file,
                report_envelope("field",
                                json{{"mesh", o.mesh},
                                     {"sources", o.sources},
                                     {"tau", o.tau},
                                     {"threads", o.threads}},
                                res));
    return 0;
}

inline int cmd_levelset(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    SourceSet K = parse_sources(m, o.sources);
    FieldOptions fo;
    fo.tau_geo = o.tau;
    DistanceField f = multi_source_field(m, K, fo);
    LevelSet ls = extract_level_set(f, o.r, o.subdiv);
    LevelSetTopology topo = levelset_topology(ls);
    double window = o.window >= 0 ? o.window : 0.02 * f.max_vertex_dist;
    bool near_critical = scan_regular_values(f, {o.r}, window)[0].second;
    json res{{"level_set", to_json(ls, true)},
             {"topology", to_json(topo)},
             // near a critical value the measured topology is reported, not
             // certified; the flag tells the reader which case they are in
             {"near_critical", near_critical},
             {"e_field", f.e_field}};
    emit_report(out, o.json_file,
                report_envelope("levelset",
                                json{{"mesh", o.mesh},
                                     {"sources", o.sources},
                                     {"r", o.r},
                                     {"subdiv", o.subdiv},
                                     {"window", window},
                                     {"tau", o.tau},
                                     {"threads", o.threads}},
                                res));
    render_svg(m, o, [&](SvgScene& s) {
        s.add_level_set(ls);
        std::vector<Vec3> src;
        for (const SurfacePoint& p : K.points) src.push_back(m.point(p));
        s.add_markers(src);
    });
    return 0;
}

inline int cmd_scan(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    SourceSet K = parse_sources(m, o.sources);
    FieldOptions fo;
    fo.tau_geo = o.tau;
    DistanceField f = multi_source_field(m, K, fo);
    std::vector<double> grid = o.rs;
    if (grid.empty()) {
        if (!(o.r_max > o.r_min) || o.n < 2)
            throw std::invalid_argument("scan needs --rs or --r-min/--r-max/--n");
        for (int i = 0; i < o.n; i++)
            grid.push_back(o.r_min + (o.r_max - o.r_min) * double(i) / (o.n - 1));
    }
    double window = o.window >= 0 ? o.window : 0.02 * f.max_vertex_dist;
    auto flags = scan_regular_values(f, grid, window, o.scan_subdiv);
    json rows = json::array();
    for (const auto& [r, crit] : flags) rows.push_back(json{{"r", r}, {"near_critical", crit}});
    emit_report(out, o.json_file,
                report_envelope("scan",
                                json{{"mesh", o.mesh},
                                     {"sources", o.sources},
                                     {"r_grid", grid},
                                     {"window", window},
                                     {"subdiv", o.subdiv},
                                     {"tau", o.tau},
                                     {"threads", o.threads}},
                                json{{"values", rows}}));
    return 0;
}

inline int cmd_exoskeleton(const CliOptions& o, std::ostream& out) {
    ConvexSurfaceMesh m = load_mesh(o.mesh);
    SourceSet K = parse_sources(m, o.sources);
    ExoskeletonEstimate est =
        estimate_multijoined_locus(m, K, o.density, o.eps_tie, o.min_angle, o.tau);
    emit_report(out, o.json_file,
                report_envelope("exoskeleton",
                                json{{"mesh", o.mesh},
                                     {"sources", o.sources},
                                     {"density", o.density},
                                     {"eps_tie", est.eps_tie},
                                     {"min_separation_angle", o.min_angle},
                                     {"tau", o.tau},
                                     {"threads", o.threads}},
                                to_json(est, true)));
    render_svg(m, o, [&](SvgScene& s) {
        std::vector<Vec3> pts;
        for (const ExoSample& smp : est.samples) pts.push_back(m.point(smp.p));
        s.add_markers(pts, "#c62828");
        std::vector<Vec3> src;
        for (const SurfacePoint& p : K.points) src.push_back(m.point(p));
        s.add_markers(src);
    });
    return 0;
}

// ---- driver ------------------------------------------------------------

inline int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"intrinsic geometry and concavity checks on convex polyhedral surfaces"};
    app.name("convexgeo");
    app.require_subcommand(1);
    CliOptions o;
    int rc = 0;

    auto add_common = [&](CLI::App* sc, bool mesh_required = true) {
        if (mesh_required) sc->add_option("--mesh", o.mesh, "surface: .off file or .json body")
                               ->required();
        sc->add_option("--json", o.json_file, "also write the JSON report to this file");
        sc->add_option("--tau", o.tau, "geodesic certification tolerance");
        sc->add_option("--seed", o.seed, "sampling seed");
    };
    auto add_svg = [&](CLI::App* sc) {
        sc->add_option("--svg", o.svg, "write an SVG rendering to this file");
        sc->add_option("--chart", o.chart_at,
                       "project the SVG through a chart anchored at this point instead of the "
                       "axonometric view");
        sc->add_option("--chart-radius", o.chart_radius, "projection chart radius");
    };

    auto* c_convex = app.add_subcommand("check-convex", "validate convexity and manifoldness");
    add_common(c_convex);
    add_svg(c_convex);
    c_convex->add_option("--tol", o.tol, "flatness tolerance, default scales with the body");
    c_convex->callback([&] { rc = cmd_check_convex(o, out); });

    auto* c_chart = app.add_subcommand("chart", "build a graph chart over a supporting plane");
    add_common(c_chart);
    add_svg(c_chart);
    c_chart->add_option("--at", o.at, "anchor point")->required();
    c_chart->add_option("--radius", o.radius, "domain radius in the chart plane");
    c_chart->add_option("--sides", o.sides, "domain polygon sides");
    c_chart->callback([&] { rc = cmd_chart(o, out); });

    auto* c_dist = app.add_subcommand("distance", "certified geodesic distance between two points");
    add_common(c_dist);
    add_svg(c_dist);
    c_dist->add_option("--from", o.from, "start point")->required();
    c_dist->add_option("--to", o.to, "end point")->required();
    c_dist->add_flag("--no-polyline", o.no_polyline, "omit the path polyline from the JSON");
    c_dist->callback([&] { rc = cmd_distance(o, out); });

    auto* c_diam = app.add_subcommand("diameter", "bracket the intrinsic diameter");
    add_common(c_diam);
    c_diam->add_option("--samples", o.diam_samples, "size of the covering sample net");
    c_diam->callback([&] { rc = cmd_diameter(o, out); });

    auto* c_approx = app.add_subcommand("approx", "inscribe a polyhedral surface in a convex body");
    c_approx->add_option("--body", o.body, "sphere | ellipsoid:<a>,<b>,<c> | .json/.off file")
        ->required();
    c_approx->add_option("--k", o.k, "number of hull vertices")->required();
    c_approx->add_option("--json", o.json_file, "also write the JSON report to this file");
    c_approx->add_option("--seed", o.seed, "vertex placement seed");
    c_approx->add_option("--save-off", o.save_off_path, "write the mesh as an OFF file");
    add_svg(c_approx);
    c_approx->callback([&] { rc = cmd_approx(o, out); });

    auto* c_conv = app.add_subcommand("converge", "compare a faceting sequence against its body");
    c_conv->add_option("--body", o.body, "sphere | ellipsoid:<a>,<b>,<c> | .json/.off file")
        ->required();
    c_conv->add_option("--ks", o.ks, "increasing vertex counts")->delimiter(',')->required();
    c_conv->add_option("--kind", o.kind, "distance | chart");
    c_conv->add_option("--pairs", o.n, "point pairs for kind=distance");
    c_conv->add_option("--samples", o.samples, "chart samples for kind=chart");
    c_conv->add_option("--at", o.at, "chart anchor for kind=chart");
    c_conv->add_option("--radius", o.radius, "chart radius for kind=chart");
    c_conv->add_option("--json", o.json_file, "also write the JSON report to this file");
    c_conv->add_option("--tau", o.tau, "geodesic certification tolerance");
    c_conv->add_option("--seed", o.seed, "sampling seed");
    c_conv->callback([&] { rc = cmd_converge(o, out); });

    auto* c_dc = app.add_subcommand("dc-check", "falsification checks for squared-distance "
                                                "concavity inequalities");
    add_common(c_dc);
    c_dc->add_option("--check", o.check,
                     "second-diff | chart-c | midpoint-4c | diagonal | displacement | modifier | "
                     "field-dc")
        ->required();
    c_dc->add_option("--c", o.c, "concavity constant to test");
    c_dc->add_option("--grid", o.grid, "target number of grid pairs");
    c_dc->add_option("--pairs", o.pairs, "random product pairs");
    c_dc->add_option("--at", o.at, "chart anchor point");
    c_dc->add_option("--at2", o.at2, "second chart anchor (modifier)");
    c_dc->add_option("--radius", o.radius, "chart radius");
    c_dc->add_option("--sides", o.sides, "chart polygon sides");
    c_dc->add_option("--t", o.t_offset, "displacement center offset <du>,<dv> in the chart plane");
    c_dc->add_option("--delta", o.delta, "displacement magnitude");
    c_dc->add_option("--dirs", o.dirs, "displacement directions");
    c_dc->add_option("--m-upper", o.m_upper, "upper bound for the intrinsic diameter");
    c_dc->add_option("--source", o.sources, "source components for field-dc");
    c_dc->add_option("--values", o.values, "three samples <f(a)>,<f(b)>,<f(mid)> for second-diff");
    c_dc->callback([&] { rc = cmd_dc_check(o, out); });

    auto* c_field = app.add_subcommand("field", "multi-source geodesic distance field summary");
    add_common(c_field);
    c_field->add_option("--source", o.sources, "source components (point spec, face:<i>, "
                                               "edge:<a>,<b>, or all)")
        ->required();
    c_field->add_option("--at", o.at, "also evaluate the field at this point");
    c_field->callback([&] { rc = cmd_field(o, out); });

    auto* c_ls = app.add_subcommand("levelset", "extract a distance sphere as surface polylines");
    add_common(c_ls);
    add_svg(c_ls);
    c_ls->add_option("--source", o.sources, "source components")->required();
    c_ls->add_option("--r", o.r, "field value to extract")->required();
    c_ls->add_option("--subdiv", o.subdiv, "per-face lattice subdivision");
    c_ls->add_option("--window", o.window, "near-critical detection window");
    c_ls->callback([&] { rc = cmd_levelset(o, out); });

    auto* c_scan = app.add_subcommand("scan", "flag near-critical field values on a grid");
    add_common(c_scan);
    c_scan->add_option("--source", o.sources, "source components")->required();
    c_scan->add_option("--rs", o.rs, "explicit increasing values")->delimiter(',');
    c_scan->add_option("--r-min", o.r_min, "grid start");
    c_scan->add_option("--r-max", o.r_max, "grid end");
    c_scan->add_option("--n", o.n, "grid size");
    c_scan->add_option("--window", o.window, "near-critical detection window");
    c_scan->add_option("--subdiv", o.scan_subdiv, "scan lattice subdivision");
    c_scan->callback([&] { rc = cmd_scan(o, out); });

    auto* c_exo = app.add_subcommand("exoskeleton", "sample the multijoined locus of a source set");
    add_common(c_exo);
    add_svg(c_exo);
    c_exo->add_option("--source", o.sources, "source components")->required();
    c_exo->add_option("--density", o.density, "probes per unit area")->required();
    c_exo->add_option("--eps-tie", o.eps_tie, "tie budget between witness lengths");
    c_exo->add_option("--min-angle", o.min_angle, "arrival separation for distinct witnesses");
    c_exo->callback([&] { rc = cmd_exoskeleton(o, out); });

    try {
        o.threads = env_thread_cap();
        std::reverse(args.begin(), args.end());
        app.parse(args);
        return rc;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace convexgeo::cli
