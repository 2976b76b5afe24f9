#include <catch2/catch_amalgamated.hpp>

#include "convexgeo/convexgeo.hpp"

using namespace convexgeo;

TEST_CASE("vector algebra basics", "[vec]") {
    Vec3 a{1, 2, 3}, b{-1, 0, 2};
    REQUIRE(dot(a, b) == 5.0);
    Vec3 c = cross(a, b);
    REQUIRE(dot(c, a) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(dot(c, b) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(norm(Vec3{3, 4, 0}) == Catch::Approx(5.0));
}

TEST_CASE("orthonormal basis is right handed", "[vec]") {
    Rng rng(7);
    for (int it = 0; it < 100; it++) {
        Vec3 v = rng.unit_vec3();
        Vec3 b1, b2;
        orthonormal_basis(v, b1, b2);
        REQUIRE(std::abs(dot(b1, b2)) < 1e-12);
        REQUIRE(std::abs(dot(b1, v)) < 1e-12);
        REQUIRE(norm(cross(b1, b2) - normalized(v)) < 1e-12);
    }
}

TEST_CASE("rigid 2d maps segments exactly", "[vec]") {
    Rng rng(11);
    for (int it = 0; it < 100; it++) {
        Vec2 a0{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Vec2 a1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (norm(a1 - a0) < 1e-6) continue;
        double ang = rng.uniform(0, 6.28), tx = rng.uniform(-3, 3), ty = rng.uniform(-3, 3);
        Vec2 b0{std::cos(ang) * a0.x - std::sin(ang) * a0.y + tx,
                std::sin(ang) * a0.x + std::cos(ang) * a0.y + ty};
        Vec2 b1{std::cos(ang) * a1.x - std::sin(ang) * a1.y + tx,
                std::sin(ang) * a1.x + std::cos(ang) * a1.y + ty};
        Rigid2 T = Rigid2::map_segment(a0, a1, b0, b1);
        REQUIRE(norm(T(a0) - b0) < 1e-12);
        REQUIRE(norm(T(a1) - b1) < 1e-12);
        Vec2 mid = lerp(a0, a1, 0.37);
        REQUIRE(norm(T(mid) - lerp(b0, b1, 0.37)) < 1e-12);
    }
}
