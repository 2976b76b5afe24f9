#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "convexgeo/convexgeo.hpp"
#include "test_util.hpp"

using namespace convexgeo;

// on any convex surface the intrinsic metric is at most pi/2 times the chord
// length, so twice the bounding-box diagonal always dominates the diameter
static double safe_M(const ConvexSurfaceMesh& m) { return 2.0 * m.bbox_diag(); }

TEST_CASE("second difference of samples") {
    // affine data has vanishing second differences
    CHECK(second_difference(1.0, 7.0, 4.0) == 0.0);
    // x^2 sampled at 1 +- h gives exactly h^2
    double h = 0.375;
    CHECK(second_difference((1 + h) * (1 + h), (1 - h) * (1 - h), 1.0) ==
          Catch::Approx(h * h).margin(1e-15));
    CHECK(second_difference(1.0, 3.0, 2.5) == -0.5);

    // linearity, exact in dyadic arithmetic
    double fa = 1.25, fb = -2.5, fm = 0.75;
    double ga = 3.5, gb = 0.5, gm = -1.25;
    double al = 2.0, be = -4.0;
    CHECK(second_difference(al * fa + be * ga, al * fb + be * gb, al * fm + be * gm) ==
          al * second_difference(fa, fb, fm) + be * second_difference(ga, gb, gm));
}

TEST_CASE("chart c-concavity of explicit functions") {
    ConvexSurfaceMesh m = make_cube();
    StandardChart ch = build_standard_chart(m, Vec3{0.05, -0.02, 0.5}, 0.3);
    PairGrid grid;
    grid.seed = 7;

    SECTION("constants are 0-concave") {
        auto rep = check_chart_c_concavity(ch, [](const Vec2&) { return 1.0; }, 0.0, grid);
        CHECK(rep.pass);
        CHECK(rep.n_tested == grid.n_centers * grid.n_dirs * grid.n_mags);
        CHECK(rep.max_violation <= rep.tolerance);
    }

    SECTION("|x|^2 is exactly 2-concave") {
        auto sq = [](const Vec2& x) { return norm2(x); };
        auto rep = check_chart_c_concavity(ch, sq, 2.0, grid);
        CHECK(rep.pass);
        CHECK(std::abs(rep.max_violation) < 1e-12);

        // and fails c = 1 by exactly half the squared offset
        auto bad = check_chart_c_concavity(ch, sq, 1.0, grid);
        CHECK_FALSE(bad.pass);
        CHECK(bad.max_violation ==
              Catch::Approx(0.5 * bad.witness.h * bad.witness.h).epsilon(1e-9));
    }

    SECTION("passing is monotone in c") {
        auto sq = [](const Vec2& x) { return norm2(x); };
        bool seen_pass = false;
        for (double c : {0.5, 1.0, 2.0, 3.0, 5.0}) {
            bool p = check_chart_c_concavity(ch, sq, c, grid).pass;
            if (seen_pass) CHECK(p);
            seen_pass = seen_pass || p;
        }
        CHECK(seen_pass);
    }

    SECTION("an empty grid is an error") {
        PairGrid none;
        none.n_centers = 0;
        CHECK_THROWS_AS(check_chart_c_concavity(ch, [](const Vec2&) { return 0.0; }, 0.0, none),
                        std::invalid_argument);
    }
}

TEST_CASE("product metric") {
    ConvexSurfaceMesh m = make_cube();
    SurfacePoint a = testutil::vertex_sp(m, {-0.5, -0.5, -0.5});
    SurfacePoint b = testutil::vertex_sp(m, {0.5, 0.5, 0.5});
    SurfacePoint c = m.nearest_surface_point({0.0, 0.1, 0.5});

    CHECK(product_distance(m, {a, c}, {a, c}) == Catch::Approx(0.0).margin(1e-12));

    // a frozen second coordinate collapses to the plain distance
    double dab = shortest_path(m, a, b).length;
    CHECK(product_distance(m, {a, c}, {b, c}) == Catch::Approx(dab).epsilon(1e-12));

    // both coordinates across the cube: sqrt(5 + 5)
    double err = 0;
    double dd = product_distance(m, {a, a}, {b, b}, 1e-9, &err);
    CHECK(dd == Catch::Approx(std::sqrt(10.0)).epsilon(1e-9));
    CHECK(err >= 0);
    CHECK(err < 1e-6);
}

TEST_CASE("midpoint 4-concavity of squared distance") {
    ConvexSurfaceMesh m = make_cube();

    SECTION("degenerate pairs vanish") {
        ProductPoint x{m.nearest_surface_point({0.2, -0.1, 0.5}),
                       m.nearest_surface_point({-0.5, 0.1, 0.2})};
        auto rep = check_midpoint_4concavity(m, {{x, x}});
        CHECK(rep.pass);
        CHECK(std::abs(rep.max_violation) < 1e-10);
    }

    SECTION("coplanar antiparallel offsets realize equality") {
        // in one face the check reduces to the euclidean parallelogram
        // identity; offsets w and -w on the two coordinates make both sides
        // equal |w|^2
        Vec3 P{-0.2, -0.1, 0.5}, Q{0.1, 0.15, 0.5}, w{0.15, 0.05, 0.0};
        ProductPoint x{m.nearest_surface_point(P + w), m.nearest_surface_point(Q)};
        ProductPoint y{m.nearest_surface_point(P), m.nearest_surface_point(Q + w)};
        auto rep = check_midpoint_4concavity(m, {{x, y}});
        CHECK(rep.pass);
        CHECK(std::abs(rep.max_violation) < 1e-9);
        CHECK(rep.witness.raw.size() == 4);
    }

    SECTION("random pairs on a random hull") {
        ConvexSurfaceMesh h = random_hull_mesh(20, 3);
        Rng rng(11);
        std::vector<std::pair<ProductPoint, ProductPoint>> pairs;
        for (int i = 0; i < 30; i++)
            pairs.push_back({{testutil::random_surface_point(h, rng),
                              testutil::random_surface_point(h, rng)},
                             {testutil::random_surface_point(h, rng),
                              testutil::random_surface_point(h, rng)}});
        auto rep = check_midpoint_4concavity(h, pairs);
        CHECK(rep.pass);
        CHECK(rep.n_tested == 30);
    }

    SECTION("squared distance to a fixed point is 2-concave") {
        // pin the second coordinate: the product check then exercises
        // dist^2(., P) with the sharper constant
        SurfacePoint P = m.nearest_surface_point({0.0, 0.0, 0.5});
        Rng rng(5);
        std::vector<std::pair<ProductPoint, ProductPoint>> pairs;
        for (int i = 0; i < 25; i++)
            pairs.push_back({{testutil::random_surface_point(m, rng), P},
                             {testutil::random_surface_point(m, rng), P}});
        auto rep = check_midpoint_concavity(m, pairs, 2.0);
        CHECK(rep.pass);
    }
}

TEST_CASE("squared distance against the diagonal") {
    ConvexSurfaceMesh m = make_cube();

    SECTION("points on the diagonal") {
        SurfacePoint a = m.nearest_surface_point({0.2, -0.1, 0.5});
        auto rep = check_diagonal_identity(m, {{a, a}});
        CHECK(rep.pass);
        CHECK(std::abs(rep.max_violation) < 1e-10);
    }

    SECTION("opposite cube corners") {
        ProductPoint p{testutil::vertex_sp(m, {-0.5, -0.5, -0.5}),
                       testutil::vertex_sp(m, {0.5, 0.5, 0.5})};
        auto rep = check_diagonal_identity(m, {p});
        CHECK(rep.pass);
        CHECK(rep.witness.raw[0] == Catch::Approx(5.0).epsilon(1e-9));
    }

    SECTION("one face is exact") {
        ProductPoint p{m.nearest_surface_point({-0.2, -0.1, 0.5}),
                       m.nearest_surface_point({0.3, 0.2, 0.5})};
        auto rep = check_diagonal_identity(m, {p});
        CHECK(rep.pass);
        CHECK(std::abs(rep.max_violation) < 1e-9);
    }
}

TEST_CASE("midpoint displacement under the affinity premise") {
    ConvexSurfaceMesh m = make_cube();

    SECTION("flat charts move nothing") {
        StandardChart ch = build_standard_chart(m, Vec3{0.0, 0.0, 0.5}, 0.2);
        Vec2 t = ch.to_plane(m.point(ch.seed));
        auto rep = check_midpoint_displacement(m, ch, t, 0.1, 12, 1e-9, 2);
        CHECK(rep.pass);
        CHECK(rep.n_skipped == 0);
        CHECK(rep.n_tested == 12);
        CHECK(rep.max_violation < 1e-9);
    }

    SECTION("pairs straddling a cube edge") {
        StandardChart ch = build_standard_chart(m, Vec3{0.0, 0.5, 0.5}, 0.3);
        Vec2 t = ch.to_plane(m.point(ch.seed));
        auto rep = check_midpoint_displacement(m, ch, t, 0.24, 24, 1e-9, 4);
        CHECK(rep.pass);
        CHECK(rep.n_tested > 0);
        // the worst direction crosses the crease, so its height second
        // difference is genuinely positive
        CHECK(rep.witness.raw[1] > 0);
    }

    SECTION("creases strictly inside a sample segment are skipped") {
        StandardChart ch = build_standard_chart(m, Vec3{0.0, 0.5, 0.5}, 0.3);
        Vec2 edge_dir = ch.to_plane(Vec3{1, 0, 0});
        Vec2 off_dir = normalized(ch.to_plane(Vec3{0, -1, 1}));
        Vec2 t = ch.to_plane(m.point(ch.seed)) + off_dir * 0.03;
        auto rep = check_midpoint_displacement(m, ch, t, 0.2, 32, 1e-9, 4);
        (void)edge_dir;
        CHECK(rep.n_skipped > 0);
        CHECK(rep.n_tested > 0);
        CHECK(rep.pass);
    }

    SECTION("a center whose every direction breaks the premise throws") {
        StandardChart ch = build_standard_chart(m, Vec3{0.5, 0.5, 0.5}, 0.25);
        Vec2 apex = ch.to_plane(Vec3{0.5, 0.5, 0.5});
        Vec2 t = apex + Vec2{1e-4, 2e-5};
        CHECK_THROWS_AS(check_midpoint_displacement(m, ch, t, 0.2, 16, 1e-9, 9),
                        std::runtime_error);
    }

    SECTION("degenerate parameters are rejected") {
        StandardChart ch = build_standard_chart(m, Vec3{0.0, 0.0, 0.5}, 0.2);
        Vec2 t = ch.to_plane(m.point(ch.seed));
        CHECK_THROWS_AS(check_midpoint_displacement(m, ch, t, 0.1, 0), std::invalid_argument);
        Vec2 far = t + Vec2{10.0, 0.0};
        CHECK_THROWS_AS(check_midpoint_displacement(m, ch, far, 0.1, 8), std::invalid_argument);
    }
}

TEST_CASE("modifier concavity over chart pairs") {
    ConvexSurfaceMesh m = make_cube();
    double M = safe_M(m);

    SECTION("one flat chart pair is strictly concave") {
        StandardChart c1 = build_standard_chart(m, Vec3{-0.15, 0.0, 0.5}, 0.2);
        StandardChart c2 = build_standard_chart(m, Vec3{0.2, 0.1, 0.5}, 0.2);
        PairGrid grid;
        grid.n_centers = 4;
        grid.seed = 13;
        auto rep = check_modifier_concavity(m, c1, c2, M, grid);
        CHECK(rep.pass);
        CHECK(rep.max_violation < 0);
    }

    SECTION("charts at adjacent cube vertices") {
        StandardChart c1 = build_standard_chart(m, Vec3{0.5, 0.5, 0.5}, 0.3);
        StandardChart c2 = build_standard_chart(m, Vec3{-0.5, 0.5, 0.5}, 0.3);
        PairGrid grid;
        grid.seed = 29;
        auto rep = check_modifier_concavity(m, c1, c2, M, grid);
        CHECK(rep.pass);
        CHECK(rep.n_tested > 150);
    }

    SECTION("a nonpositive diameter bound is rejected") {
        StandardChart c1 = build_standard_chart(m, Vec3{0.0, 0.0, 0.5}, 0.2);
        PairGrid grid;
        CHECK_THROWS_AS(check_modifier_concavity(m, c1, c1, 0.0, grid), std::invalid_argument);
    }
}

TEST_CASE("shifted squared distance field concavity") {
    ConvexSurfaceMesh m = make_cube();
    double M = safe_M(m);

    SECTION("distance to the whole surface vanishes, leaving the convex shift") {
        SourceSet K;
        for (int f = 0; f < m.n_faces(); f++) K.faces.push_back(f);
        StandardChart ch = build_standard_chart(m, Vec3{0.5, 0.5, 0.5}, 0.3);
        PairGrid grid;
        grid.seed = 3;
        auto rep = check_dc_distance_field(m, ch, K, M, grid);
        CHECK(rep.pass);
        CHECK(rep.max_violation < 0);
    }

    SECTION("distance to a vertex, chart at the opposite vertex") {
        SourceSet K = SourceSet::one_point(testutil::vertex_sp(m, {-0.5, -0.5, -0.5}));
        StandardChart ch = build_standard_chart(m, Vec3{0.5, 0.5, 0.5}, 0.3);
        PairGrid grid;
        grid.seed = 17;
        auto rep = check_dc_distance_field(m, ch, K, M, grid);
        CHECK(rep.pass);
        CHECK(rep.n_tested > 100);
    }

    SECTION("a nonpositive diameter bound is rejected") {
        StandardChart ch = build_standard_chart(m, Vec3{0.0, 0.0, 0.5}, 0.2);
        PairGrid grid;
        CHECK_THROWS_AS(check_dc_distance_field(m, ch, SourceSet(), -1.0, grid),
                        std::invalid_argument);
    }
}
