#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "convexgeo/mesh.hpp"
#include "convexgeo/vec.hpp"

namespace convexgeo {

// convex polygon in the plane, ccw
inline bool polygon_contains(const std::vector<Vec2>& poly, const Vec2& x, double eps = 0.0) {
    int n = int(poly.size());
    for (int i = 0; i < n; i++) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        if (cross(b - a, x - a) < -eps) return false;
    }
    return true;
}

// separating axis test for two convex polygons
inline bool polygons_overlap(const std::vector<Vec2>& P, const std::vector<Vec2>& Q, double eps) {
    auto separated_by = [&](const std::vector<Vec2>& A, const std::vector<Vec2>& B) {
        int n = int(A.size());
        for (int i = 0; i < n; i++) {
            Vec2 ax = perp(A[(i + 1) % n] - A[i]);
            double amax = -1e300, bmin = 1e300;
            for (const Vec2& p : A) amax = std::max(amax, dot(ax, p));
            for (const Vec2& p : B) bmin = std::min(bmin, dot(ax, p));
            if (bmin > amax + eps) return true;
        }
        return false;
    };
    return !separated_by(P, Q) && !separated_by(Q, P);
}

// graph presentation of a neighborhood of the surface: a direction e, the
// plane through the origin orthogonal to e, and the convex height function f
// over a convex polygon V in that plane. F(x) = x + f(x) e lands on the mesh.
class StandardChart {
  public:
    const ConvexSurfaceMesh* mesh = nullptr;
    Vec3 e, b1, b2;            // right-handed, cross(b1,b2) = e
    std::vector<Vec2> V;       // chart domain, ccw convex polygon
    SurfacePoint seed;         // z = F(center)
    double L = 0.0;            // exact Lipschitz constant of f on V
    std::vector<int> faces;    // near-side faces whose shadow meets V

    Vec2 to_plane(const Vec3& x) const { return {dot(x, b1), dot(x, b2)}; }
    Vec3 from_plane(const Vec2& u) const { return b1 * u.x + b2 * u.y; }

    bool contains(const Vec2& x, double eps = 0.0) const { return polygon_contains(V, x, eps); }

    // height of the entry point of the ray x + t e; smallest t with the ray
    // inside the body
    double f(const Vec2& x) const { return hit(x).first; }

    SurfacePoint F(const Vec2& x) const {
        auto [t, face] = hit(x);
        Vec3 p = from_plane(x) + e * t;
        SurfacePoint sp;
        sp.face = face;
        auto bc = mesh->barycentric(face, p);
        for (double& b : bc) b = std::max(0.0, b);
        double s = bc[0] + bc[1] + bc[2];
        sp.bary = {bc[0] / s, bc[1] / s, bc[2] / s};
        return sp;
    }

    Vec3 F_xyz(const Vec2& x) const {
        auto [t, face] = hit(x);
        (void)face;
        return from_plane(x) + e * t;
    }

    // inverse of F for points on the near-side graph; throws when p projects
    // outside V or lies on the far side
    Vec2 project(const Vec3& p, double tol = 1e-9) const {
        Vec2 u = to_plane(p);
        if (!contains(u, 1e-12 * scale()))
            throw std::runtime_error("chart: point projects outside V");
        Vec3 q = F_xyz(u);
        if (norm(q - p) > tol * std::max(1.0, scale()))
            throw std::runtime_error("chart: point is not on the chart graph (far side)");
        return u;
    }

    double scale() const { return mesh ? mesh->bbox_diag() : 1.0; }

    std::pair<double, int> hit(const Vec2& x) const {
        // the near-side shadows tile V, so exactly one candidate face
        // contains x; ties on shared edges are harmless
        Vec3 base = from_plane(x);
        int best_face = -1;
        double best_t = 1e300, best_slack = -1e300;
        for (int fi : faces) {
            const auto& tri = mesh->F[fi];
            Vec2 q0 = to_plane(mesh->V[tri[0]]);
            Vec2 q1 = to_plane(mesh->V[tri[1]]);
            Vec2 q2 = to_plane(mesh->V[tri[2]]);
            double a = cross(q1 - q0, q2 - q0);
            if (std::abs(a) < 1e-300) continue;
            double w0 = cross(q1 - x, q2 - x) / a;
            double w1 = cross(q2 - x, q0 - x) / a;
            double w2 = cross(q0 - x, q1 - x) / a;
            double slack = std::min({w0, w1, w2});
            if (slack < -1e-9) continue;
            Vec3 n = mesh->face_normal(fi);
            double ne = dot(n, e);
            double t = (dot(n, mesh->V[tri[0]]) - dot(n, base)) / ne;
            if (slack > best_slack) { best_slack = slack; best_t = t; best_face = fi; }
        }
        if (best_face < 0)
            throw std::runtime_error("chart: ray misses the near-side graph");
        return {best_t, best_face};
    }
};

// collects the near-side faces over V, computes the exact Lipschitz constant,
// and rejects domains where the graph condition fails
inline void finalize_chart(StandardChart& ch) {
    const ConvexSurfaceMesh& mesh = *ch.mesh;
    const double graze_tol = 1e-8;
    double overlap_eps = 1e-12 * mesh.bbox_diag();
    ch.faces.clear();
    ch.L = 0.0;
    for (int fi = 0; fi < mesh.n_faces(); fi++) {
        Vec3 n = mesh.face_normal(fi);
        double ne = dot(n, ch.e);
        if (ne > graze_tol) continue;  // far side
        std::vector<Vec2> shadow = {ch.to_plane(mesh.V[mesh.F[fi][0]]),
                                    ch.to_plane(mesh.V[mesh.F[fi][1]]),
                                    ch.to_plane(mesh.V[mesh.F[fi][2]])};
        if (cross(shadow[1] - shadow[0], shadow[2] - shadow[0]) < 0)
            std::swap(shadow[1], shadow[2]);
        if (!polygons_overlap(ch.V, shadow, overlap_eps)) continue;
        if (ne > -graze_tol)
            throw std::runtime_error("chart: radius too large, a face over the domain is grazing e");
        ch.faces.push_back(fi);
        Vec3 pn = n - ch.e * ne;  // component of the normal inside the plane
        ch.L = std::max(ch.L, norm(pn) / std::abs(ne));
    }
    if (ch.faces.empty()) throw std::runtime_error("chart: empty domain");
    Vec2 c{0, 0};
    for (const Vec2& corner : ch.V) c += corner;
    ch.hit(c / double(ch.V.size()));
    for (const Vec2& corner : ch.V) ch.hit(corner);  // throws when V leaves the shadow
}

// chart anchored at surface point z, looking along e = (a - z)/|a - z| with a
// the interior anchor; V is a regular polygon inscribed in the shadow disk of
// radius `radius` around the projection of z
inline StandardChart build_standard_chart(const ConvexSurfaceMesh& mesh, const SurfacePoint& z,
                                          double radius, int polygon_sides = 32) {
    if (radius <= 0) throw std::invalid_argument("chart: radius must be positive");
    if (polygon_sides < 3) throw std::invalid_argument("chart: polygon needs >= 3 sides");
    StandardChart ch;
    ch.mesh = &mesh;
    Vec3 z3 = mesh.point(z);
    Vec3 a = mesh.centroid();
    if (norm(a - z3) < 1e-12 * mesh.bbox_diag())
        throw std::runtime_error("chart: seed coincides with the interior anchor");
    ch.e = normalized(a - z3);
    orthonormal_basis(ch.e, ch.b1, ch.b2);
    ch.seed = z;

    Vec2 c0 = ch.to_plane(z3);
    ch.V.resize(polygon_sides);
    for (int i = 0; i < polygon_sides; i++) {
        double t = 2.0 * 3.14159265358979323846 * (double(i) / polygon_sides);
        ch.V[i] = c0 + Vec2{radius * std::cos(t), radius * std::sin(t)};
    }
    finalize_chart(ch);
    return ch;
}

inline StandardChart build_standard_chart(const ConvexSurfaceMesh& mesh, const Vec3& z_near,
                                          double radius, int polygon_sides = 32) {
    return build_standard_chart(mesh, mesh.nearest_surface_point(z_near), radius, polygon_sides);
}

// chart with a prescribed direction and domain polygon; used to present two
// nearby surfaces over one common domain
inline StandardChart build_chart_on(const ConvexSurfaceMesh& mesh, const Vec3& e,
                                    const std::vector<Vec2>& V, const SurfacePoint& seed = {}) {
    StandardChart ch;
    ch.mesh = &mesh;
    ch.e = normalized(e);
    orthonormal_basis(ch.e, ch.b1, ch.b2);
    ch.V = V;
    finalize_chart(ch);
    Vec2 c{0, 0};
    for (const Vec2& corner : ch.V) c += corner;
    ch.seed = seed.face >= 0 ? seed : ch.F(c / double(ch.V.size()));
    return ch;
}

inline double estimate_lipschitz(const StandardChart& ch) { return ch.L; }

}  // namespace convexgeo
