#include <catch2/catch_amalgamated.hpp>

#include "convexgeo/convexgeo.hpp"
#include "oracle_unfold.hpp"
#include "test_util.hpp"

using namespace convexgeo;
using testutil::random_surface_point;
using testutil::vertex_sp;

namespace {
double polyline_length(const GeodesicPath& p) {
    double s = 0;
    for (size_t i = 0; i + 1 < p.xyz.size(); i++) s += dist(p.xyz[i], p.xyz[i + 1]);
    return s;
}
}  // namespace

TEST_CASE("frozen cube distances: opposite corners and opposite face centers", "[geodesic]") {
    ConvexSurfaceMesh cube = make_cube(0.5);

    GeodesicPath p = shortest_path(cube, vertex_sp(cube, {0.5, 0.5, 0.5}),
                                   vertex_sp(cube, {-0.5, -0.5, -0.5}));
    REQUIRE(p.length == Catch::Approx(2.2360679774997896).margin(1e-9));  // sqrt(5)
    REQUIRE(p.lower <= p.length);
    REQUIRE(p.length - p.lower < 1e-9);
    REQUIRE(p.method == "exact-unfolding");
    REQUIRE(polyline_length(p) == Catch::Approx(p.length).margin(1e-9));
    REQUIRE(dist(p.xyz.front(), Vec3{0.5, 0.5, 0.5}) < 1e-12);
    REQUIRE(dist(p.xyz.back(), Vec3{-0.5, -0.5, -0.5}) < 1e-12);

    GeodesicPath q = shortest_path(cube, cube.nearest_surface_point({0.5, 0, 0}),
                                   cube.nearest_surface_point({-0.5, 0, 0}));
    REQUIRE(q.length == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("engine matches the brute-force unfolding oracle on the cube", "[geodesic][oracle]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    Rng rng(101);
    for (int it = 0; it < 25; it++) {
        SurfacePoint a = random_surface_point(cube, rng);
        SurfacePoint b = random_surface_point(cube, rng);
        double ref = oracle::oracle_distance(cube, a, b, 6);
        GeodesicPath p = shortest_path(cube, a, b);
        REQUIRE(p.length == Catch::Approx(ref).margin(1e-9));
    }
}

TEST_CASE("engine matches the brute-force unfolding oracle on the tetrahedron",
          "[geodesic][oracle]") {
    ConvexSurfaceMesh tet = make_tetrahedron(1.0);
    Rng rng(202);
    for (int it = 0; it < 25; it++) {
        SurfacePoint a = random_surface_point(tet, rng);
        SurfacePoint b = random_surface_point(tet, rng);
        double ref = oracle::oracle_distance(tet, a, b, 4);
        GeodesicPath p = shortest_path(tet, a, b);
        REQUIRE(p.length == Catch::Approx(ref).margin(1e-9));
    }
}

TEST_CASE("engine never exceeds any short unfolding on random hulls", "[geodesic][oracle]") {
    // the oracle minimizes over face sequences with few crossings, so it is an
    // upper bound in general and tight when the true curve is short
    for (uint64_t seed : {3u, 4u}) {
        ConvexSurfaceMesh m = random_hull_mesh(20, seed);
        Rng rng(300 + seed);
        for (int it = 0; it < 12; it++) {
            SurfacePoint a = random_surface_point(m, rng);
            SurfacePoint b = random_surface_point(m, rng);
            double ref = oracle::oracle_distance(m, a, b, 4);
            GeodesicPath p = shortest_path(m, a, b);
            if (ref < kInf) REQUIRE(p.length <= ref + 1e-9);
            REQUIRE(p.length >= dist(m.point(a), m.point(b)) - 1e-12);
            REQUIRE(p.length - p.lower <= 1e-9 * p.length + 1e-12);
        }
    }
}

TEST_CASE("metric axioms on sampled pairs and triples", "[geodesic][property]") {
    std::vector<ConvexSurfaceMesh> meshes;
    meshes.push_back(make_cube(0.5));
    meshes.push_back(random_hull_mesh(20, 7));
    for (const auto& m : meshes) {
        Rng rng(404);
        for (int it = 0; it < 10; it++) {
            SurfacePoint a = random_surface_point(m, rng);
            SurfacePoint b = random_surface_point(m, rng);
            SurfacePoint c = random_surface_point(m, rng);
            double ab = geodesic_distance(m, a, b);
            double ba = geodesic_distance(m, b, a);
            double bc = geodesic_distance(m, b, c);
            double ac = geodesic_distance(m, a, c);
            REQUIRE(ab == Catch::Approx(ba).margin(1e-9));
            REQUIRE(ac <= ab + bc + 1e-9);
            REQUIRE(ab >= dist(m.point(a), m.point(b)) - 1e-12);
            REQUIRE(geodesic_distance(m, a, a) == 0.0);
        }
    }
}

TEST_CASE("same-face pairs come back as exact planar chords", "[geodesic]") {
    ConvexSurfaceMesh m = random_hull_mesh(20, 11);
    Rng rng(505);
    for (int it = 0; it < 20; it++) {
        int f = rng.uniform_int(m.n_faces());
        double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
        SurfacePoint a{f, {1 - r1, r1 * (1 - r2), r1 * r2}};
        double r3 = std::sqrt(rng.uniform()), r4 = rng.uniform();
        SurfacePoint b{f, {1 - r3, r3 * (1 - r4), r3 * r4}};
        double d = geodesic_distance(m, a, b);
        REQUIRE(d == Catch::Approx(dist(m.point(a), m.point(b))).margin(1e-12));
    }
}

TEST_CASE("path midpoints bisect the distance", "[geodesic]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    Rng rng(606);
    for (int it = 0; it < 8; it++) {
        SurfacePoint a = random_surface_point(cube, rng);
        SurfacePoint b = random_surface_point(cube, rng);
        GeodesicPath p = shortest_path(cube, a, b);
        if (p.length < 1e-6) continue;
        SurfacePoint s = path_midpoint(cube, p);
        REQUIRE(geodesic_distance(cube, a, s) == Catch::Approx(p.length / 2).margin(1e-7));
        REQUIRE(geodesic_distance(cube, s, b) == Catch::Approx(p.length / 2).margin(1e-7));
    }
}

TEST_CASE("graph method brackets the exact distance at its coarse tolerance", "[geodesic]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    Rng rng(707);
    for (int it = 0; it < 3; it++) {
        SurfacePoint a = random_surface_point(cube, rng);
        SurfacePoint b = random_surface_point(cube, rng);
        GeodesicPath e = shortest_path(cube, a, b);
        GeodesicPath g = shortest_path(cube, a, b, 0.05, "graph");
        REQUIRE(g.method == "refined-graph");
        REQUIRE(g.lower <= e.length + 1e-12);
        REQUIRE(e.length <= g.length + 1e-12);
        REQUIRE(g.length - g.lower <= 0.05 * g.length + 1e-12);
    }
}

TEST_CASE("two-component fields take the pointwise minimum", "[field]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    SurfacePoint p1 = vertex_sp(cube, {0.5, 0.5, 0.5});
    SurfacePoint p2 = cube.nearest_surface_point({-0.5, 0, 0});
    DistanceField f1 = multi_source_field(cube, SourceSet::one_point(p1));
    DistanceField f2 = multi_source_field(cube, SourceSet::one_point(p2));
    SourceSet both;
    both.points = {p1, p2};
    DistanceField f12 = multi_source_field(cube, both);
    Rng rng(808);
    for (int it = 0; it < 40; it++) {
        SurfacePoint q = random_surface_point(cube, rng);
        double d1 = f1.eval(q), d2 = f2.eval(q), d = f12.eval(q);
        REQUIRE(d == Catch::Approx(std::min(d1, d2)).margin(1e-9));
        if (std::abs(d1 - d2) > 1e-6) {
            int want = d1 < d2 ? 0 : 1;
            REQUIRE(f12.trace_best(q).component == want);
        }
    }
}

TEST_CASE("edge and whole-surface source sets", "[field]") {
    ConvexSurfaceMesh cube = make_cube(0.5);

    SourceSet all;
    for (int f = 0; f < cube.n_faces(); f++) all.faces.push_back(f);
    DistanceField cover = multi_source_field(cube, all);
    Rng rng(909);
    for (int it = 0; it < 20; it++)
        REQUIRE(cover.eval(random_surface_point(cube, rng)) < 1e-12);

    // one bottom edge as the source; inside a face containing the edge the
    // field is the planar point-segment distance
    int va = -1, vb = -1, host = -1;
    for (int f = 0; f < cube.n_faces() && host < 0; f++)
        for (int k = 0; k < 3; k++) {
            int i = cube.F[f][k], j = cube.F[f][(k + 1) % 3];
            if (cube.V[i].z < 0 && cube.V[j].z < 0 && std::abs(cube.V[i].y - cube.V[j].y) < 1e-12 &&
                cube.V[i].y < 0) {
                va = i; vb = j; host = f;
                break;
            }
        }
    REQUIRE(host >= 0);
    SourceSet ek;
    ek.edges.push_back({va, vb});
    DistanceField fe = multi_source_field(cube, ek);
    for (int it = 0; it < 20; it++) {
        double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
        SurfacePoint q{host, {1 - r1, r1 * (1 - r2), r1 * r2}};
        double want = std::sqrt(point_segment_dist2(cube.point(q), cube.V[va], cube.V[vb]));
        REQUIRE(fe.eval(q) == Catch::Approx(want).margin(1e-9));
    }
    // far query: bracket against a dense sample of sources on the edge
    SurfacePoint far = cube.nearest_surface_point({0, 0.25, 0.5});
    double dense = kInf;
    int n = 64;
    for (int i = 0; i <= n; i++) {
        SurfacePoint s = cube.nearest_surface_point(lerp(cube.V[va], cube.V[vb], double(i) / n));
        dense = std::min(dense, geodesic_distance(cube, s, far));
    }
    double h = dist(cube.V[va], cube.V[vb]) / n;
    REQUIRE(fe.eval(far) <= dense + 1e-9);
    REQUIRE(fe.eval(far) >= dense - h / 2 - 1e-9);
}

TEST_CASE("distance fields are 1-lipschitz along the surface", "[field][property]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    DistanceField f = multi_source_field(cube, SourceSet::one_point(vertex_sp(cube, {0.5, 0.5, 0.5})));
    Rng rng(1010);
    for (int it = 0; it < 15; it++) {
        SurfacePoint x = random_surface_point(cube, rng);
        SurfacePoint y = random_surface_point(cube, rng);
        REQUIRE(std::abs(f.eval(x) - f.eval(y)) <= geodesic_distance(cube, x, y) + 1e-9);
    }
}

TEST_CASE("all tied geodesics between opposite cube corners are enumerated", "[witness]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    SurfacePoint src = vertex_sp(cube, {0.5, 0.5, 0.5});
    SurfacePoint dst = vertex_sp(cube, {-0.5, -0.5, -0.5});
    DistanceField f = multi_source_field(cube, SourceSet::one_point(src));
    auto wits = f.witnesses(dst, 1e-6);
    REQUIRE(wits.size() == 6);  // one per route of two faces joining the corners
    for (const auto& w : wits) {
        REQUIRE(w.length == Catch::Approx(std::sqrt(5.0)).margin(1e-9));
        REQUIRE(dist(w.endpoint, Vec3{0.5, 0.5, 0.5}) < 1e-9);
        REQUIRE(polyline_length(w.path) == Catch::Approx(std::sqrt(5.0)).margin(1e-9));
    }
    for (size_t i = 0; i < wits.size(); i++)
        for (size_t j = i + 1; j < wits.size(); j++) {
            REQUIRE(wits[i].signature != wits[j].signature);
            REQUIRE(dist(wits[i].arrival_dir, wits[j].arrival_dir) > 0.1);
        }

    // opposite face centers tie across the four connecting faces
    DistanceField g = multi_source_field(
        cube, SourceSet::one_point(cube.nearest_surface_point({0.5, 0, 0})));
    auto wits2 = g.witnesses(cube.nearest_surface_point({-0.5, 0, 0}), 1e-6);
    REQUIRE(wits2.size() == 4);
    for (const auto& w : wits2) REQUIRE(w.length == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("geodesic error handling", "[geodesic]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    SurfacePoint a = vertex_sp(cube, {0.5, 0.5, 0.5});
    SurfacePoint b = vertex_sp(cube, {-0.5, -0.5, -0.5});
    REQUIRE_THROWS_AS(multi_source_field(cube, SourceSet{}), std::invalid_argument);
    REQUIRE_THROWS_WITH(shortest_path(cube, a, b, 1e-14),
                        Catch::Matchers::ContainsSubstring("certification floor"));
    FieldOptions opt;
    opt.tau_geo = 1e-13;
    REQUIRE_THROWS_WITH(multi_source_field(cube, SourceSet::one_point(a), opt),
                        Catch::Matchers::ContainsSubstring("certification floor"));
    REQUIRE_THROWS_AS(shortest_path(cube, a, b, 1e-9, "fancy"), std::invalid_argument);
    REQUIRE(shortest_path(cube, a, a).length == 0.0);
}

TEST_CASE("intrinsic diameter report brackets the farthest sampled pair", "[diameter]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    DiameterReport rep = intrinsic_diameter(cube, 200);
    REQUIRE(rep.lower <= rep.upper);
    REQUIRE(rep.lower >= 2.2360679774997896 - 1e-9);  // corner pair is sampled
    REQUIRE(rep.upper < 3.0);
    REQUIRE(rep.h_cover > 0);
    double realized = geodesic_distance(cube, rep.a, rep.b);
    REQUIRE(realized == Catch::Approx(rep.lower).margin(1e-9));
}
