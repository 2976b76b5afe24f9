#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "convexgeo/approx.hpp"
#include "convexgeo/convexgeo.hpp"
#include "test_util.hpp"

using namespace convexgeo;

TEST_CASE("hull of cube corners", "[hull]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    REQUIRE(cube.n_vertices() == 8);
    REQUIRE(cube.n_faces() == 12);
    REQUIRE(cube.volume() == Catch::Approx(1.0).epsilon(1e-12));
    auto rep = validate_convex(cube);
    REQUIRE(rep.pass);
    REQUIRE(rep.max_vertex_deviation <= rep.tolerance);
}

TEST_CASE("hull ignores interior and coplanar points", "[hull]") {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; i++)
        pts.push_back({i & 1 ? 0.5 : -0.5, i & 2 ? 0.5 : -0.5, i & 4 ? 0.5 : -0.5});
    pts.push_back({0, 0, 0});        // interior
    pts.push_back({0, 0, 0.5});      // on the top facet
    pts.push_back({0.25, 0.5, 0.1}); // on a side facet
    ConvexSurfaceMesh m = mesh_from_hull(pts);
    REQUIRE(m.n_vertices() == 8);
    REQUIRE(m.volume() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random point clouds give valid convex meshes", "[hull]") {
    for (std::uint64_t seed = 0; seed < 5; seed++) {
        ConvexSurfaceMesh m = random_hull_mesh(20, seed);
        REQUIRE(m.n_vertices() == 20);  // points on a sphere are all extreme
        REQUIRE(m.n_faces() == 2 * m.n_vertices() - 4);
        REQUIRE(validate_convex(m).pass);
        double vol = m.volume();
        REQUIRE(vol > 0.5);  // 20 spread points capture much of the unit ball
        REQUIRE(vol < 4.18879020478639);
    }
}

TEST_CASE("tetrahedron inscribed in unit sphere", "[hull]") {
    ConvexSurfaceMesh t = make_tetrahedron(1.0);
    REQUIRE(t.n_vertices() == 4);
    REQUIRE(t.n_faces() == 4);
    for (const Vec3& v : t.V) REQUIRE(norm(v) == Catch::Approx(1.0).epsilon(1e-12));
    double a = dist(t.V[0], t.V[1]);  // edge of the regular tetrahedron
    REQUIRE(t.volume() == Catch::Approx(a * a * a / (6 * std::sqrt(2.0))).epsilon(1e-12));
    REQUIRE(validate_convex(t).pass);
}

TEST_CASE("deep pushed-in vertex fails convexity with known depth", "[mesh][convexity]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    auto V = cube.V;
    auto F = cube.F;
    int idx = -1;
    for (int i = 0; i < 8; i++)
        if (V[i].x > 0 && V[i].y > 0 && V[i].z > 0) idx = i;
    V[idx] = {0.0, 0.0, 0.0};  // into the interior
    ConvexSurfaceMesh pushed(V, F);
    auto rep = validate_convex(pushed);
    REQUIRE_FALSE(rep.pass);
    // nearest hull facet to the origin is the corner-cut plane x+y+z = 1/2
    REQUIRE(rep.max_vertex_deviation ==
            Catch::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("shallow dent is caught by face-plane violation", "[mesh][convexity]") {
    // hand-triangulated cube whose three squares at corner 6 are split by the
    // diagonal through corner 6; denting that corner makes those diagonals
    // reflex while every vertex stays in convex position, so only the
    // face-plane check can see the defect
    std::vector<Vec3> V = {{-.5, -.5, -.5}, {.5, -.5, -.5}, {.5, .5, -.5}, {-.5, .5, -.5},
                           {-.5, -.5, .5},  {.5, -.5, .5},  {.5, .5, .5},  {-.5, .5, .5}};
    std::vector<std::array<int, 3>> F = {{0, 3, 2}, {0, 2, 1},   // bottom
                                         {4, 5, 6}, {4, 6, 7},   // top, diagonal 4-6
                                         {0, 1, 5}, {0, 5, 4},   // front
                                         {2, 3, 6}, {3, 7, 6},   // back, diagonal 3-6
                                         {0, 4, 7}, {0, 7, 3},   // left
                                         {1, 2, 6}, {1, 6, 5}};  // right, diagonal 1-6
    REQUIRE(validate_convex(ConvexSurfaceMesh(V, F)).pass);
    V[6] = {0.4, 0.4, 0.4};  // still in convex position, but faces now bend
    ConvexSurfaceMesh dented(V, F);
    auto rep = validate_convex(dented);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.max_vertex_deviation < 1e-12);
    REQUIRE(rep.max_plane_violation > 1e-3);
}

TEST_CASE("mesh constructor rejects broken topology", "[mesh]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    auto V = cube.V;
    auto F = cube.F;

    SECTION("open boundary") {
        auto open = F;
        open.pop_back();
        REQUIRE_THROWS_WITH((ConvexSurfaceMesh(V, open)),
                            Catch::Matchers::ContainsSubstring("open boundary"));
    }
    SECTION("flipped face") {
        auto flipped = F;
        std::swap(flipped[0][0], flipped[0][1]);
        REQUIRE_THROWS_WITH((ConvexSurfaceMesh(V, flipped)),
                            Catch::Matchers::ContainsSubstring("directed edge"));
    }
    SECTION("too few vertices") {
        REQUIRE_THROWS(ConvexSurfaceMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}));
    }
}

TEST_CASE("degenerate hull inputs are rejected", "[hull]") {
    REQUIRE_THROWS_WITH(convex_hull({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}),
                        Catch::Matchers::ContainsSubstring("degenerate"));
    REQUIRE_THROWS_WITH(
        convex_hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.3, 0.3, 0}}),
        Catch::Matchers::ContainsSubstring("degenerate"));
}

TEST_CASE("surface point embedding round trip", "[mesh]") {
    ConvexSurfaceMesh m = random_hull_mesh(20, 1);
    Rng rng(3);
    for (int it = 0; it < 200; it++) {
        SurfacePoint sp = testutil::random_surface_point(m, rng);
        Vec3 p = m.point(sp);
        auto bc = m.barycentric(sp.face, p);
        for (int k = 0; k < 3; k++) REQUIRE(bc[k] == Catch::Approx(sp.bary[k]).margin(1e-12));
        SurfacePoint back = m.nearest_surface_point(p);
        REQUIRE(dist(m.point(back), p) < 1e-12 * m.bbox_diag());
    }
}

TEST_CASE("nearest surface point projects exterior points onto the hull", "[mesh]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    SurfacePoint sp = cube.nearest_surface_point({2, 0, 0});
    REQUIRE(dist(cube.point(sp), {0.5, 0, 0}) < 1e-12);
    sp = cube.nearest_surface_point({0.7, 0.8, 0.9});
    REQUIRE(dist(cube.point(sp), {0.5, 0.5, 0.5}) < 1e-12);
}

TEST_CASE("off files round trip", "[mesh][io]") {
    ConvexSurfaceMesh m = random_hull_mesh(12, 5);
    std::string path = "roundtrip_tmp.off";
    save_off(m, path);
    ConvexSurfaceMesh back = load_off(path);
    REQUIRE(back.n_vertices() == m.n_vertices());
    REQUIRE(back.n_faces() == m.n_faces());
    for (int i = 0; i < m.n_vertices(); i++) REQUIRE(dist(back.V[i], m.V[i]) == 0.0);
    std::remove(path.c_str());
}
