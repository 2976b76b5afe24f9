#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "convexgeo/chart.hpp"
#include "convexgeo/geodesic.hpp"
#include "convexgeo/mesh.hpp"
#include "convexgeo/rng.hpp"
#include "convexgeo/vec.hpp"

namespace convexgeo {

// Falsification-style concavity testing. Every routine here samples a finite
// configuration grid, evaluates an inequality with certified geodesic values,
// and reports the worst margin. Tolerances are derived from the certification
// error of the values entering each inequality, never configured from outside,
// so a reported violation is a genuine counterexample up to floating point.

struct ConcavityWitness {
    std::vector<Vec3> config;    // worst configuration, world coordinates
    std::vector<double> raw;     // raw values entering its inequality
    double h = 0.0;              // offset magnitude of the worst pair
};

struct ConcavityReport {
    std::string description;
    int n_tested = 0;
    int n_skipped = 0;
    double max_violation = -kInf;  // LHS - RHS over the grid; positive violates
    double tolerance = 0.0;        // numeric slack the violation must exceed
    ConcavityWitness witness;
    bool pass = false;             // max_violation <= tolerance
};

// one half of a second difference: mean of the endpoint values minus the
// midpoint value; nonpositive on concave data, (c/2)-bounded on c-concave data
inline double second_difference(double fa, double fb, double fmid) {
    return 0.5 * (fa + fb) - fmid;
}

// a point of the product surface X x X with the metric
// dist((x1,x2),(y1,y2)) = sqrt(dist(x1,y1)^2 + dist(x2,y2)^2)
struct ProductPoint {
    SurfacePoint x1, x2;
};

// symmetric-pair sampler: n_centers random centers, n_dirs directions each,
// and a geometric ladder of offset magnitudes; deterministic under seed
struct PairGrid {
    int n_centers = 8;
    int n_dirs = 8;
    int n_mags = 3;
    double mag0 = 0.2;    // top offset, as a fraction of the domain inradius
    double ratio = 0.25;  // ladder step between consecutive magnitudes
    std::uint64_t seed = 1;
};

namespace dc_detail {

inline Vec2 polygon_centroid(const std::vector<Vec2>& P) {
    Vec2 c{0, 0};
    for (const Vec2& p : P) c = c + p;
    return c / double(P.size());
}

inline double polygon_inradius(const std::vector<Vec2>& P) {
    Vec2 c = polygon_centroid(P);
    double r = kInf;
    for (size_t i = 0; i < P.size(); i++) {
        Vec2 a = P[i], b = P[(i + 1) % P.size()];
        r = std::min(r, std::sqrt(point_segment_dist2(c, a, b)));
    }
    return r;
}

inline Vec2 sample_in_polygon(const std::vector<Vec2>& P, Rng& rng) {
    Vec2 lo{kInf, kInf}, hi{-kInf, -kInf};
    for (const Vec2& p : P) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    for (int it = 0; it < 10'000; it++) {
        Vec2 x{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (polygon_contains(P, x, 0.0)) return x;
    }
    throw std::runtime_error("grid sampler: polygon rejection sampling failed");
}

// enumerate symmetric pairs (x+h, x-h) with the whole segment inside V;
// magnitudes that stick out of the polygon shrink toward the center
template <typename Fn>
void for_each_pair(const std::vector<Vec2>& V, const PairGrid& g, Fn&& fn) {
    Rng rng(g.seed);
    double r0 = g.mag0 * polygon_inradius(V);
    for (int ci = 0; ci < g.n_centers; ci++) {
        Vec2 x = sample_in_polygon(V, rng);
        for (int di = 0; di < g.n_dirs; di++) {
            Vec2 u = rng.unit_vec2();
            for (int mi = 0; mi < g.n_mags; mi++) {
                double mag = r0 * std::pow(g.ratio, mi);
                int guard = 0;
                while (guard++ < 60 &&
                       !(polygon_contains(V, x + u * mag, 0.0) &&
                         polygon_contains(V, x - u * mag, 0.0)))
                    mag *= 0.5;
                if (guard > 60) continue;
                fn(x, u * mag);
            }
        }
    }
}

// product-domain variant: joint 4D direction over V1 x V2
template <typename Fn>
void for_each_product_pair(const std::vector<Vec2>& V1, const std::vector<Vec2>& V2,
                           const PairGrid& g, Fn&& fn) {
    Rng rng(g.seed);
    double r0 = g.mag0 * std::min(polygon_inradius(V1), polygon_inradius(V2));
    auto dir4 = [&rng]() {
        for (;;) {
            std::array<double, 4> v{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                    rng.uniform(-1, 1), rng.uniform(-1, 1)};
            double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
            if (n2 > 1e-6 && n2 <= 1.0) {
                double n = std::sqrt(n2);
                for (double& t : v) t /= n;
                return v;
            }
        }
    };
    for (int ci = 0; ci < g.n_centers; ci++) {
        Vec2 x1 = sample_in_polygon(V1, rng);
        Vec2 x2 = sample_in_polygon(V2, rng);
        for (int di = 0; di < g.n_dirs; di++) {
            auto u = dir4();
            Vec2 h1{u[0], u[1]}, h2{u[2], u[3]};
            for (int mi = 0; mi < g.n_mags; mi++) {
                double mag = r0 * std::pow(g.ratio, mi);
                int guard = 0;
                while (guard++ < 60 &&
                       !(polygon_contains(V1, x1 + h1 * mag, 0.0) &&
                         polygon_contains(V1, x1 - h1 * mag, 0.0) &&
                         polygon_contains(V2, x2 + h2 * mag, 0.0) &&
                         polygon_contains(V2, x2 - h2 * mag, 0.0)))
                    mag *= 0.5;
                if (guard > 60) continue;
                fn(x1, h1 * mag, x2, h2 * mag);
            }
        }
    }
}

inline void note(ConcavityReport& rep, double violation, double tol_here,
                 ConcavityWitness&& wit) {
    rep.n_tested++;
    rep.tolerance = std::max(rep.tolerance, tol_here);
    if (violation > rep.max_violation) {
        rep.max_violation = violation;
        rep.witness = std::move(wit);
    }
}

inline ConcavityReport finalize(ConcavityReport rep) {
    if (rep.n_tested == 0 && rep.n_skipped == 0)
        throw std::invalid_argument("concavity check: empty grid");
    rep.pass = rep.max_violation <= rep.tolerance;
    return rep;
}

// error of a squared distance when the distance carries two-sided error e
inline double sq_err(double d, double e) { return 2.0 * std::abs(d) * e + e * e; }

}  // namespace dc_detail

// c-concavity of a scalar function on the chart domain:
// (g(x+h) + g(x-h))/2 - g(x) <= (c/2) |h|^2 on every sampled pair.
// g carries no certification data, so the tolerance covers only roundoff.
inline ConcavityReport check_chart_c_concavity(const StandardChart& chart,
                                               const std::function<double(const Vec2&)>& g,
                                               double c, const PairGrid& grid) {
    ConcavityReport rep;
    rep.description = "c-concavity of a function over the chart domain, c = " +
                      std::to_string(c);
    double vref = std::max({1.0, chart.scale(), chart.scale() * chart.scale()});
    dc_detail::for_each_pair(chart.V, grid, [&](Vec2 x, Vec2 h) {
        double lhs = second_difference(g(x + h), g(x - h), g(x));
        double rhs = 0.5 * c * norm2(h);
        ConcavityWitness w;
        w.config = {chart.from_plane(x + h), chart.from_plane(x - h), chart.from_plane(x)};
        w.raw = {g(x + h), g(x - h), g(x), rhs};
        w.h = norm(h);
        dc_detail::note(rep, lhs - rhs, 64 * 1e-16 * vref, std::move(w));
    });
    return dc_detail::finalize(rep);
}

// intrinsic midpoint with a bound on how far it can sit from a true midpoint
inline SurfacePoint certified_midpoint(const ConvexSurfaceMesh& m, const SurfacePoint& a,
                                       const SurfacePoint& b, double tau_geo,
                                       double* err_out = nullptr) {
    GeodesicPath p = shortest_path(m, a, b, tau_geo);
    if (err_out) *err_out = (p.length - p.lower) + tau_geo * p.length;
    return path_midpoint(m, p);
}

inline double product_distance(const ConvexSurfaceMesh& m, const ProductPoint& p,
                               const ProductPoint& q, double tau_geo = 1e-9,
                               double* err_out = nullptr) {
    GeodesicPath p1 = shortest_path(m, p.x1, q.x1, tau_geo);
    GeodesicPath p2 = shortest_path(m, p.x2, q.x2, tau_geo);
    if (err_out) *err_out = (p1.length - p1.lower) + (p2.length - p2.lower);
    return std::sqrt(p1.length * p1.length + p2.length * p2.length);
}

// midpoint c-concavity of squared distance on the product surface:
// (g(x) + g(y))/2 - g(s) <= (c/2) d^2, g = dist^2 between the two coordinates,
// s the componentwise midpoint, d = half the product distance of x and y
inline ConcavityReport check_midpoint_concavity(const ConvexSurfaceMesh& m,
                                                const std::vector<std::pair<ProductPoint, ProductPoint>>& pairs,
                                                double c, double tau_geo = 1e-9) {
    ConcavityReport rep;
    rep.description = "midpoint " + std::to_string(c) +
                      "-concavity of squared distance on the product surface";
    for (const auto& [x, y] : pairs) {
        double e1 = 0, e2 = 0, em1 = 0, em2 = 0, eg1 = 0, eg2 = 0, eg3 = 0;
        GeodesicPath c1 = shortest_path(m, x.x1, y.x1, tau_geo);
        GeodesicPath c2 = shortest_path(m, x.x2, y.x2, tau_geo);
        e1 = c1.length - c1.lower;
        e2 = c2.length - c2.lower;
        SurfacePoint s1 = path_midpoint(m, c1), s2 = path_midpoint(m, c2);
        em1 = e1 + tau_geo * c1.length;  // worst offset from a true midpoint
        em2 = e2 + tau_geo * c2.length;

        GeodesicPath gx = shortest_path(m, x.x1, x.x2, tau_geo);
        GeodesicPath gy = shortest_path(m, y.x1, y.x2, tau_geo);
        GeodesicPath gs = shortest_path(m, s1, s2, tau_geo);
        eg1 = gx.length - gx.lower;
        eg2 = gy.length - gy.lower;
        eg3 = gs.length - gs.lower + em1 + em2;  // midpoint wobble moves g(s)

        double d = 0.5 * std::sqrt(c1.length * c1.length + c2.length * c2.length);
        double lhs = second_difference(gx.length * gx.length, gy.length * gy.length,
                                       gs.length * gs.length);
        double rhs = 0.5 * c * d * d;
        double emax = std::max({dc_detail::sq_err(gx.length, eg1),
                                dc_detail::sq_err(gy.length, eg2),
                                dc_detail::sq_err(gs.length, eg3),
                                0.5 * c * dc_detail::sq_err(d, 0.5 * (e1 + e2))});
        // kappa = 4: two halves and one midpoint evaluation of g, plus the
        // right-hand side, each within emax
        ConcavityWitness w;
        w.config = {m.point(x.x1), m.point(x.x2), m.point(y.x1), m.point(y.x2),
                    m.point(s1), m.point(s2)};
        w.raw = {gx.length, gy.length, gs.length, d};
        w.h = d;
        dc_detail::note(rep, lhs - rhs, 4 * emax, std::move(w));
    }
    return dc_detail::finalize(rep);
}

inline ConcavityReport check_midpoint_4concavity(const ConvexSurfaceMesh& m,
                                                 const std::vector<std::pair<ProductPoint, ProductPoint>>& pairs,
                                                 double tau_geo = 1e-9) {
    return check_midpoint_concavity(m, pairs, 4.0, tau_geo);
}

// identity between squared distance and twice the squared product distance to
// the diagonal: the midpoint candidate realizes the infimum, every other
// candidate bounds it from below through the triangle inequality
inline ConcavityReport check_diagonal_identity(const ConvexSurfaceMesh& m,
                                               const std::vector<ProductPoint>& samples,
                                               double tau_geo = 1e-9) {
    ConcavityReport rep;
    rep.description = "squared distance equals twice the squared product distance "
                      "to the diagonal";
    for (const ProductPoint& p : samples) {
        GeodesicPath base = shortest_path(m, p.x1, p.x2, tau_geo);
        double g = base.length * base.length;
        double eg = dc_detail::sq_err(base.length, base.length - base.lower);

        std::vector<SurfacePoint> cands;
        cands.push_back(path_midpoint(m, base));
        for (int v = 0; v < m.n_vertices(); v++) cands.push_back(m.vertex_point(v));
        for (int f = 0; f < m.n_faces(); f++)
            cands.push_back({f, {1.0 / 3, 1.0 / 3, 1.0 / 3}});

        FieldOptions fo;
        fo.tau_geo = tau_geo;
        DistanceField f1 = multi_source_field(m, SourceSet::one_point(p.x1), fo);
        DistanceField f2 = multi_source_field(m, SourceSet::one_point(p.x2), fo);
        double best = kInf;
        Vec3 besty{};
        for (const SurfacePoint& y : cands) {
            double d1 = f1.eval(y), d2 = f2.eval(y);
            double v = 2.0 * (d1 * d1 + d2 * d2);
            if (v < best) { best = v; besty = m.point(y); }
        }
        double ecand = 2.0 * (dc_detail::sq_err(base.length, f1.e_field + f2.e_field +
                                                                 tau_geo * base.length));
        double viol = std::abs(best - g);
        ConcavityWitness w;
        w.config = {m.point(p.x1), m.point(p.x2), besty};
        w.raw = {g, best};
        w.h = base.length;
        dc_detail::note(rep, viol, 4 * std::max(eg, ecand), std::move(w));
    }
    return dc_detail::finalize(rep);
}

// displacement of the intrinsic midpoint of two lifted points from the lifted
// center: dist(S, T) <= 2 * second difference of the chart height, provided
// the height is affine between each sample and the center. Pairs breaking
// that premise are skipped and counted, never failed.
inline ConcavityReport check_midpoint_displacement(const ConvexSurfaceMesh& m,
                                                   const StandardChart& chart, Vec2 t,
                                                   double delta, int n_dirs,
                                                   double tau_geo = 1e-9,
                                                   std::uint64_t seed = 1) {
    if (n_dirs <= 0) throw std::invalid_argument("midpoint displacement: no directions");
    if (!chart.contains(t))
        throw std::invalid_argument("midpoint displacement: center outside the chart domain");
    ConcavityReport rep;
    rep.description = "midpoint displacement against twice the chart height "
                      "second difference";
    Rng rng(seed);
    double sc = chart.scale();
    auto affine_on = [&](const Vec2& a, const Vec2& b) {
        // convex along segments, so vanishing interior second differences
        // force affinity; quarter points guard near-cancellation
        for (double lam : {0.5, 0.25, 0.75}) {
            Vec2 mid = lerp(a, b, lam);
            double want = (1 - lam) * chart.f(a) + lam * chart.f(b);
            if (std::abs(chart.f(mid) - want) > 1e-10 * sc) return false;
        }
        return true;
    };
    for (int di = 0; di < n_dirs; di++) {
        Vec2 u = rng.unit_vec2();
        double mag = 0.5 * delta;
        Vec2 x = t + u * mag, y = t - u * mag;
        if (!(chart.contains(x) && chart.contains(y))) { rep.n_skipped++; continue; }
        if (!affine_on(x, t) || !affine_on(y, t)) { rep.n_skipped++; continue; }

        double dd = second_difference(chart.f(x), chart.f(y), chart.f(t));
        SurfacePoint Fx = chart.F(x), Fy = chart.F(y), Ft = chart.F(t);
        GeodesicPath pxy = shortest_path(m, Fx, Fy, tau_geo);
        SurfacePoint S = path_midpoint(m, pxy);
        // the bound needs S inside the chart, which holds for small offsets;
        // configurations whose midpoint escapes are premise failures too
        Vec2 s2 = chart.to_plane(m.point(S));
        if (!chart.contains(s2) ||
            std::abs(chart.f(s2) - dot(m.point(S), chart.e)) > 1e-9 * sc) {
            rep.n_skipped++;
            continue;
        }
        GeodesicPath pst = shortest_path(m, S, Ft, tau_geo);
        double e_mid = (pxy.length - pxy.lower) + tau_geo * pxy.length;
        double e_st = (pst.length - pst.lower) + e_mid + 1e-12 * sc;
        double lhs = pst.length, rhs = 2.0 * dd;
        ConcavityWitness w;
        w.config = {m.point(Fx), m.point(Fy), m.point(Ft), m.point(S)};
        w.raw = {lhs, dd};
        w.h = mag;
        dc_detail::note(rep, lhs - rhs, 4 * e_st, std::move(w));
    }
    if (rep.n_tested == 0)
        throw std::runtime_error(
            "midpoint displacement: every direction broke the affinity premise");
    return dc_detail::finalize(rep);
}

// concavity of squared distance between two lifted charts after subtracting
// the explicit modifier: G = g - c - d with
//   g(x1,x2) = dist^2(F1(x1), F2(x2)),
//   c(x1,x2) = 4 (1 + L^2) (|x1|^2 + |x2|^2),   L = max of the chart constants,
//   d(x1,x2) = 4 M (f1(x1) + f2(x2)),           M >= intrinsic diameter.
// Second differences of G over symmetric product pairs must be nonpositive.
inline ConcavityReport check_modifier_concavity(const ConvexSurfaceMesh& m,
                                                const StandardChart& c1,
                                                const StandardChart& c2, double M_upper,
                                                const PairGrid& grid,
                                                double tau_geo = 1e-9) {
    if (M_upper <= 0) throw std::invalid_argument("modifier concavity: M_upper must be positive");
    ConcavityReport rep;
    rep.description = "concavity of lifted squared distance minus the explicit "
                      "modifier over a chart pair";
    double L = std::max(c1.L, c2.L);
    auto cmod = [&](const Vec2& a, const Vec2& b) {
        return 4.0 * (1.0 + L * L) * (norm2(a) + norm2(b));
    };
    auto dmod = [&](const Vec2& a, const Vec2& b) {
        return 4.0 * M_upper * (c1.f(a) + c2.f(b));
    };
    dc_detail::for_each_product_pair(c1.V, c2.V, grid, [&](Vec2 x1, Vec2 h1, Vec2 x2, Vec2 h2) {
        auto G = [&](Vec2 a, Vec2 b, double* err) {
            GeodesicPath p = shortest_path(m, c1.F(a), c2.F(b), tau_geo);
            *err = dc_detail::sq_err(p.length, p.length - p.lower);
            return p.length * p.length - cmod(a, b) - dmod(a, b);
        };
        double ea, eb, ec;
        double ga = G(x1 + h1, x2 + h2, &ea);
        double gb = G(x1 - h1, x2 - h2, &eb);
        double gc = G(x1, x2, &ec);
        double lhs = second_difference(ga, gb, gc);
        // kappa = 3: two halves plus the center evaluation
        ConcavityWitness w;
        w.config = {c1.F_xyz(x1 + h1), c2.F_xyz(x2 + h2), c1.F_xyz(x1 - h1),
                    c2.F_xyz(x2 - h2), c1.F_xyz(x1), c2.F_xyz(x2)};
        w.raw = {ga, gb, gc};
        w.h = std::sqrt(norm2(h1) + norm2(h2));
        dc_detail::note(rep, lhs, 3 * std::max({ea, eb, ec}), std::move(w));
    });
    return dc_detail::finalize(rep);
}

// concavity of the shifted squared distance field: with
//   psi(x) = dist^2(F(x), K) - omega(x),
//   omega(x) = 4 (1 + L^2) |x|^2 + 4 M f(x),
// second differences of psi over symmetric pairs in V must be nonpositive;
// this exhibits dist^2(., K) on the chart as a difference of psi and the
// convex omega
inline ConcavityReport check_dc_distance_field(const ConvexSurfaceMesh& m,
                                               const StandardChart& chart,
                                               const SourceSet& K, double M_upper,
                                               const PairGrid& grid,
                                               double tau_geo = 1e-9) {
    if (M_upper <= 0) throw std::invalid_argument("field concavity: M_upper must be positive");
    ConcavityReport rep;
    rep.description = "concavity of the squared distance field minus the convex "
                      "shift over the chart domain";
    FieldOptions fo;
    fo.tau_geo = tau_geo;
    DistanceField field = multi_source_field(m, K, fo);
    double L = chart.L;
    auto psi = [&](const Vec2& x, double* err) {
        double dF = field.eval(chart.F(x));
        *err = dc_detail::sq_err(dF, field.e_field);
        double omega = 4.0 * (1.0 + L * L) * norm2(x) + 4.0 * M_upper * chart.f(x);
        return dF * dF - omega;
    };
    dc_detail::for_each_pair(chart.V, grid, [&](Vec2 x, Vec2 h) {
        double ea, eb, ec;
        double pa = psi(x + h, &ea);
        double pb = psi(x - h, &eb);
        double pc = psi(x, &ec);
        double lhs = second_difference(pa, pb, pc);
        ConcavityWitness w;
        w.config = {chart.F_xyz(x + h), chart.F_xyz(x - h), chart.F_xyz(x)};
        w.raw = {pa, pb, pc};
        w.h = norm(h);
        dc_detail::note(rep, lhs, 3 * std::max({ea, eb, ec}), std::move(w));
    });
    return dc_detail::finalize(rep);
}

}  // namespace convexgeo
