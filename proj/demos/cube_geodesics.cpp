// Geodesic distances across a unit cube: straight-line unfoldings beat any
// along-edge walk, and the far corner is reached at sqrt(5).
#include "convexgeo/convexgeo.hpp"

#include <cstdio>

using namespace convexgeo;

int main() {
    std::vector<Vec3> corners;
    for (int i = 0; i < 8; i++)
        corners.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
    ConvexSurfaceMesh cube = mesh_from_hull(corners);

    SurfacePoint lo = cube.nearest_surface_point({0, 0, 0});
    SurfacePoint hi = cube.nearest_surface_point({1, 1, 1});
    GeodesicPath p = shortest_path(cube, lo, hi);
    std::printf("corner-to-corner geodesic: %.12f (lower bound %.12f)\n", p.length, p.lower);
    std::printf("polyline has %zu points:\n", p.xyz.size());
    for (const Vec3& x : p.xyz) std::printf("  (%.6f, %.6f, %.6f)\n", x.x, x.y, x.z);

    SurfacePoint mid = path_midpoint(cube, p);
    Vec3 mx = cube.point(mid);
    std::printf("midpoint: (%.6f, %.6f, %.6f)\n", mx.x, mx.y, mx.z);
    return 0;
}
