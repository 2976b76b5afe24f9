#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "convexgeo/chart.hpp"
#include "convexgeo/geodesic.hpp"
#include "convexgeo/mesh.hpp"
#include "convexgeo/rng.hpp"

namespace convexgeo {

struct BodySpec {
    std::string type;  // "sphere" | "ellipsoid" | "hull"
    double a = 1, b = 1, c = 1;
    std::vector<Vec3> points;

    static BodySpec sphere() { return {"sphere", 1, 1, 1, {}}; }
    static BodySpec ellipsoid(double a, double b, double c) { return {"ellipsoid", a, b, c, {}}; }
    static BodySpec hull(std::vector<Vec3> pts) { return {"hull", 1, 1, 1, std::move(pts)}; }
};

// golden-angle lattice on the unit sphere; the seed only shifts the phase so
// any seed gives the same coverage quality
inline std::vector<Vec3> fibonacci_sphere_points(int k, std::uint64_t seed = 0) {
    if (k < 4) throw std::invalid_argument("need at least 4 sphere points");
    Rng rng(seed);
    double phase = rng.uniform(0, 6.283185307179586);
    const double golden = 2.399963229728653;
    std::vector<Vec3> pts(k);
    for (int i = 0; i < k; i++) {
        double z = 1.0 - 2.0 * (i + 0.5) / k;
        double r = std::sqrt(std::max(0.0, 1 - z * z));
        double ph = golden * i + phase;
        pts[i] = {r * std::cos(ph), r * std::sin(ph), z};
    }
    return pts;
}

inline ConvexSurfaceMesh approximate_polyhedral(const BodySpec& body, int k,
                                                std::uint64_t seed = 0) {
    if (k < 4) throw std::invalid_argument("k must be at least 4");
    if (body.type == "sphere") {
        return mesh_from_hull(fibonacci_sphere_points(k, seed));
    }
    if (body.type == "ellipsoid") {
        double scale = std::max({std::abs(body.a), std::abs(body.b), std::abs(body.c)});
        if (!(body.a > 1e-9 * scale && body.b > 1e-9 * scale && body.c > 1e-9 * scale))
            throw std::invalid_argument("degenerate ellipsoid spec");
        auto pts = fibonacci_sphere_points(k, seed);
        for (Vec3& p : pts) p = {p.x * body.a, p.y * body.b, p.z * body.c};
        return mesh_from_hull(pts);
    }
    if (body.type == "hull") {
        if (body.points.size() < 4) throw std::invalid_argument("hull spec needs >= 4 points");
        ConvexSurfaceMesh base = mesh_from_hull(body.points);
        std::vector<Vec3> pts = body.points;  // corner-inclusive by construction
        int extra = k - int(pts.size());
        if (extra > 0) {
            Vec3 c = base.centroid();
            double R = base.bbox_diag();
            auto dirs = fibonacci_sphere_points(extra < 4 ? 4 : extra, seed);
            for (int i = 0; i < extra; i++) {
                SurfacePoint sp = base.nearest_surface_point(c + dirs[i] * (2 * R));
                pts.push_back(base.point(sp));
            }
        }
        return mesh_from_hull(pts);
    }
    throw std::invalid_argument("unknown body type: " + body.type);
}

// distance from a point to the solid body bounded by the mesh (0 inside)
inline double point_body_distance(const ConvexSurfaceMesh& m, const Vec3& p) {
    bool inside = true;
    for (int f = 0; f < m.n_faces() && inside; f++) {
        Vec3 n = m.face_normal(f);
        if (dot(n, p - m.V[m.F[f][0]]) > 0) inside = false;
    }
    if (inside) return 0.0;
    double best = kInf;
    for (int f = 0; f < m.n_faces(); f++)
        best = std::min(best, norm(p - m.closest_on_face(f, p)));
    return best;
}

// exact for convex polytopes: the directed deviation is a convex function on
// the body, so it peaks at vertices; boundary and body Hausdorff coincide for
// convex bodies
inline double hausdorff_distance(const ConvexSurfaceMesh& A, const ConvexSurfaceMesh& B) {
    double h = 0;
    for (const Vec3& v : A.V) h = std::max(h, point_body_distance(B, v));
    for (const Vec3& v : B.V) h = std::max(h, point_body_distance(A, v));
    return h;
}

// Minkowski gauge with respect to the origin; requires the origin interior
inline double gauge(const ConvexSurfaceMesh& m, const Vec3& x) {
    double g = 0;
    for (int f = 0; f < m.n_faces(); f++) {
        Vec3 n = m.face_normal(f);
        double d = dot(n, m.V[m.F[f][0]]);
        if (d <= 1e-12 * m.bbox_diag())
            throw std::invalid_argument("origin is not interior to the body");
        g = std::max(g, dot(n, x) / d);
    }
    return g;
}

struct SandwichReport {
    double epsilon = 0;
    double hausdorff = 0;
    int k = 0;
};

// minimal eps with (1-eps)C subset Ck subset (1+eps)C; exact via gauges of
// each body evaluated at the other body's vertices
inline SandwichReport sandwich_epsilon(const ConvexSurfaceMesh& C, const ConvexSurfaceMesh& Ck) {
    double out = 0;
    for (const Vec3& v : Ck.V) out = std::max(out, gauge(C, v));
    double in = 0;
    for (const Vec3& w : C.V) in = std::max(in, gauge(Ck, w));
    SandwichReport rep;
    rep.epsilon = std::max(std::max(0.0, out - 1), in > 1 ? 1 - 1 / in : 0.0);
    rep.hausdorff = hausdorff_distance(C, Ck);
    rep.k = Ck.n_vertices();
    return rep;
}

struct ChartConvergenceReport {
    std::vector<double> deviations;
    double lip_f = 0, lip_fk = 0;
    double delta = 0;       // Hausdorff distance of the two surfaces
    double bound_rhs = 0;   // (1 + lip_f) * delta
    double max_deviation = 0;
    int n_samples = 0;
    bool pass = false;
};

// sampled pointwise comparison of the chart functions of X and a nearby Xk
// over a subdomain W whose closure lies in the chart domain
inline ChartConvergenceReport chart_convergence_report(const StandardChart& chartX,
                                                       const std::vector<Vec2>& W,
                                                       const ConvexSurfaceMesh& Xk, int samples,
                                                       std::uint64_t seed = 0) {
    if (W.size() < 3) throw std::invalid_argument("subdomain polygon needs >= 3 vertices");
    double eps = 1e-12 * chartX.scale();
    for (const Vec2& w : W)
        if (!polygon_contains(chartX.V, w, -eps))
            throw std::invalid_argument("subdomain is not strictly inside the chart domain");

    StandardChart chk = build_chart_on(Xk, chartX.e, W);
    ChartConvergenceReport rep;
    rep.lip_f = chartX.L;
    rep.lip_fk = chk.L;
    rep.delta = hausdorff_distance(*chartX.mesh, Xk);
    rep.bound_rhs = (1 + chartX.L) * rep.delta;

    Vec2 lo = W[0], hi = W[0];
    for (const Vec2& w : W) {
        lo = {std::min(lo.x, w.x), std::min(lo.y, w.y)};
        hi = {std::max(hi.x, w.x), std::max(hi.y, w.y)};
    }
    Rng rng(seed);
    std::vector<Vec2> pts;
    Vec2 cen{0, 0};
    for (const Vec2& w : W) cen += w / double(W.size());
    pts.push_back(cen);
    for (const Vec2& w : W) pts.push_back(lerp(w, cen, 1e-6));
    while (int(pts.size()) < samples) {
        Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (polygon_contains(W, p, 0)) pts.push_back(p);
    }
    for (const Vec2& p : pts) {
        double d = std::abs(chk.f(p) - chartX.f(p));
        rep.deviations.push_back(d);
        rep.max_deviation = std::max(rep.max_deviation, d);
    }
    rep.n_samples = int(pts.size());
    rep.pass = rep.max_deviation <= rep.bound_rhs + 1e-12 * chartX.scale();
    return rep;
}

struct DistanceConvergenceReport {
    std::vector<double> reference;             // dist_X per pair
    std::vector<std::vector<double>> values;   // [mesh][pair]
    std::vector<std::vector<double>> deviations;
    double max_head = 0, max_tail = 0;         // deviation maxima over sequence halves
    bool trend_ok = false;
};

inline DistanceConvergenceReport distance_convergence_report(
    const ConvexSurfaceMesh& X, const std::vector<const ConvexSurfaceMesh*>& sequence,
    const std::vector<std::pair<SurfacePoint, SurfacePoint>>& pairs, double tau_geo = 1e-9) {
    DistanceConvergenceReport rep;
    for (const auto& [a, b] : pairs)
        rep.reference.push_back(shortest_path(X, a, b, tau_geo).length);
    for (const ConvexSurfaceMesh* Mk : sequence) {
        std::vector<double> vals, devs;
        for (size_t i = 0; i < pairs.size(); i++) {
            SurfacePoint ak = Mk->nearest_surface_point(X.point(pairs[i].first));
            SurfacePoint bk = Mk->nearest_surface_point(X.point(pairs[i].second));
            double d = shortest_path(*Mk, ak, bk, tau_geo).length;
            vals.push_back(d);
            devs.push_back(std::abs(d - rep.reference[i]));
        }
        rep.values.push_back(std::move(vals));
        rep.deviations.push_back(std::move(devs));
    }
    size_t n = sequence.size(), head_end = (n + 1) / 2;
    for (size_t k = 0; k < n; k++)
        for (double d : rep.deviations[k])
            (k < head_end ? rep.max_head : rep.max_tail) = std::max(
                k < head_end ? rep.max_head : rep.max_tail, d);
    rep.trend_ok = n < 2 || rep.max_tail <= rep.max_head;
    return rep;
}

// same comparison against an analytic reference value instead of a mesh
inline DistanceConvergenceReport distance_convergence_report(
    double reference, const std::vector<const ConvexSurfaceMesh*>& sequence,
    const std::vector<std::pair<Vec3, Vec3>>& pairs, double tau_geo = 1e-9) {
    DistanceConvergenceReport rep;
    rep.reference.assign(pairs.size(), reference);
    for (const ConvexSurfaceMesh* Mk : sequence) {
        std::vector<double> vals, devs;
        for (const auto& [pa, pb] : pairs) {
            SurfacePoint ak = Mk->nearest_surface_point(pa);
            SurfacePoint bk = Mk->nearest_surface_point(pb);
            double d = shortest_path(*Mk, ak, bk, tau_geo).length;
            vals.push_back(d);
            devs.push_back(std::abs(d - reference));
        }
        rep.values.push_back(std::move(vals));
        rep.deviations.push_back(std::move(devs));
    }
    size_t n = sequence.size(), head_end = (n + 1) / 2;
    for (size_t k = 0; k < n; k++)
        for (double d : rep.deviations[k])
            (k < head_end ? rep.max_head : rep.max_tail) = std::max(
                k < head_end ? rep.max_head : rep.max_tail, d);
    rep.trend_ok = n < 2 || rep.max_tail <= rep.max_head;
    return rep;
}

// ---- stock shapes ----

inline ConvexSurfaceMesh make_cube(double half = 0.5, const Vec3& center = {0, 0, 0}) {
    std::vector<Vec3> corners;
    for (int i = 0; i < 8; i++)
        corners.push_back(center + Vec3{i & 1 ? half : -half, i & 2 ? half : -half,
                                        i & 4 ? half : -half});
    return mesh_from_hull(corners);
}

inline ConvexSurfaceMesh make_tetrahedron(double R = 1.0) {
    double s = R / std::sqrt(3.0);
    return mesh_from_hull({{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}});
}

inline ConvexSurfaceMesh random_hull_mesh(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec3> pts;
    for (int i = 0; i < n; i++) pts.push_back(rng.unit_vec3());
    return mesh_from_hull(pts);
}

}  // namespace convexgeo
