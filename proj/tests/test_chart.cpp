#include <catch2/catch_amalgamated.hpp>

#include "convexgeo/approx.hpp"
#include "convexgeo/convexgeo.hpp"
#include "test_util.hpp"

using namespace convexgeo;

namespace {

// test-local ray caster: entry point of v + t*e into the solid, minimum t over
// all faces whose plane the ray crosses inside the triangle
double entry_height(const ConvexSurfaceMesh& m, const Vec3& e, const Vec3& base) {
    double best = std::numeric_limits<double>::infinity();
    for (int f = 0; f < m.n_faces(); f++) {
        Vec3 n = m.face_normal(f);
        double ne = dot(n, e);
        if (std::abs(ne) < 1e-13) continue;
        double t = (dot(n, m.V[m.F[f][0]]) - dot(n, base)) / ne;
        Vec3 p = base + e * t;
        auto bc = m.barycentric(f, p);
        if (bc[0] >= -1e-9 && bc[1] >= -1e-9 && bc[2] >= -1e-9) best = std::min(best, t);
    }
    return best;
}

}  // namespace

TEST_CASE("flat-face chart has zero lipschitz and exact height", "[chart]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    StandardChart ch = build_standard_chart(cube, Vec3{0, 0, -2.0}, 0.3);
    REQUIRE(norm(ch.e - Vec3{0, 0, 1}) < 1e-12);
    REQUIRE(ch.L == Catch::Approx(0.0).margin(1e-12));
    Rng rng(5);
    for (int it = 0; it < 100; it++) {
        Vec2 v{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
        REQUIRE(ch.f(v) == Catch::Approx(-0.5).margin(1e-12));
    }
}

TEST_CASE("vertex chart lipschitz equals sqrt(2) and matches a plane fit", "[chart]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    StandardChart ch = build_standard_chart(cube, Vec3{1.5, 1.5, 1.5}, 0.25);
    REQUIRE(ch.L == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // independent oracle: sample f densely, fit per-face gradients by finite
    // differences of the exact ray heights
    Rng rng(9);
    double maxgrad = 0;
    for (int it = 0; it < 300; it++) {
        Vec2 v{rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15)};
        double h = 1e-7;
        auto F3 = [&](const Vec2& w) {
            Vec3 base = ch.b1 * w.x + ch.b2 * w.y;
            return entry_height(cube, ch.e, base);
        };
        double fx = (F3({v.x + h, v.y}) - F3({v.x - h, v.y})) / (2 * h);
        double fy = (F3({v.x, v.y + h}) - F3({v.x, v.y - h})) / (2 * h);
        maxgrad = std::max(maxgrad, std::sqrt(fx * fx + fy * fy));
        REQUIRE(std::abs(ch.f(v) - F3(v)) < 1e-9);
    }
    REQUIRE(maxgrad <= ch.L + 1e-5);
    REQUIRE(maxgrad > ch.L - 0.05);  // samples straddle the steep faces
}

TEST_CASE("chart function is convex and lipschitz on sampled pairs", "[chart][property]") {
    ConvexSurfaceMesh m = random_hull_mesh(20, 2);
    Vec3 z = normalized(Vec3{1, 0.3, -0.4}) * 3.0;
    StandardChart ch = build_standard_chart(m, z, 0.35);
    Rng rng(17);
    int done = 0;
    while (done < 1000) {
        Vec2 a{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
        Vec2 b{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
        if (!ch.contains(a) || !ch.contains(b) || !ch.contains(lerp(a, b, 0.5))) continue;
        double fa = ch.f(a), fb = ch.f(b), fm = ch.f(lerp(a, b, 0.5));
        REQUIRE((fa + fb) / 2 - fm >= -1e-12);              // convexity
        REQUIRE(std::abs(fa - fb) <= ch.L * dist(a, b) + 1e-12);  // lipschitz bound
        done++;
    }
}

TEST_CASE("chart map round trips", "[chart]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    StandardChart ch = build_standard_chart(cube, Vec3{1.5, 1.5, 1.5}, 0.25);
    Rng rng(23);
    for (int it = 0; it < 200; it++) {
        Vec2 v{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
        if (!ch.contains(v)) continue;
        SurfacePoint sp = ch.F(v);
        Vec2 back = ch.project(cube.point(sp));
        REQUIRE(dist(back, v) < 1e-12);
    }
}

TEST_CASE("grazing faces over the domain are refused", "[chart]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    // bottom chart: side faces are parallel to e; beyond the face they graze
    REQUIRE_NOTHROW(build_standard_chart(cube, Vec3{0, 0, -2.0}, 0.45));
    REQUIRE_THROWS_WITH(build_standard_chart(cube, Vec3{0, 0, -2.0}, 0.6),
                        Catch::Matchers::ContainsSubstring("grazing"));
}

TEST_CASE("chart parameter validation", "[chart]") {
    ConvexSurfaceMesh cube = make_cube(0.5);
    REQUIRE_THROWS_AS(build_standard_chart(cube, Vec3{0, 0, -2.0}, -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(build_standard_chart(cube, Vec3{0, 0, -2.0}, 0.2, 2), std::invalid_argument);
}
