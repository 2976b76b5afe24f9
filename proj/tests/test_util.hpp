#pragma once

#include "convexgeo/convexgeo.hpp"

namespace testutil {

using namespace convexgeo;

// area-weighted uniform surface sampling, deterministic per rng state
inline SurfacePoint random_surface_point(const ConvexSurfaceMesh& m, Rng& rng) {
    double total = 0;
    for (int f = 0; f < m.n_faces(); f++) total += m.face_area(f);
    double pick = rng.uniform(0, total);
    int face = m.n_faces() - 1;
    for (int f = 0; f < m.n_faces(); f++) {
        pick -= m.face_area(f);
        if (pick <= 0) { face = f; break; }
    }
    double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
    return {face, {1 - r1, r1 * (1 - r2), r1 * r2}};
}

inline SurfacePoint vertex_sp(const ConvexSurfaceMesh& m, const Vec3& corner) {
    SurfacePoint sp = m.nearest_surface_point(corner);
    return sp;
}

}  // namespace testutil
