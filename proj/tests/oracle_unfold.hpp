#pragma once

// Brute-force geodesic oracle: enumerate every face sequence up to a crossing
// budget, unfold it flat, and keep straight segments whose edge crossings are
// admissible and ordered. Independent of the window-propagation engine.

#include <vector>

#include "convexgeo/mesh.hpp"
#include "convexgeo/vec.hpp"

namespace oracle {

using convexgeo::ConvexSurfaceMesh;
using convexgeo::Rigid2;
using convexgeo::SurfacePoint;
using convexgeo::Vec2;
using convexgeo::Vec3;

inline std::array<Vec2, 3> frame2d(const ConvexSurfaceMesh& m, int f) {
    Vec3 a = m.V[m.F[f][0]], b = m.V[m.F[f][1]], c = m.V[m.F[f][2]];
    Vec3 u = convexgeo::normalized(b - a);
    Vec3 cp = c - a - u * convexgeo::dot(c - a, u);
    Vec3 w = convexgeo::normalized(cp);
    return {Vec2{0, 0}, Vec2{convexgeo::norm(b - a), 0},
            Vec2{convexgeo::dot(c - a, u), convexgeo::dot(c - a, w)}};
}

inline std::vector<int> homes(const ConvexSurfaceMesh& m, const SurfacePoint& sp) {
    int zeros = 0;
    for (double b : sp.bary)
        if (b < 1e-12) zeros++;
    if (zeros == 0) return {sp.face};
    if (zeros == 1) {
        int i = 0;
        while (sp.bary[i] >= 1e-12) i++;
        return {sp.face, m.neighbor(sp.face, (i + 1) % 3)};
    }
    int i = 0;
    while (sp.bary[i] < 1e-12) i++;
    return m.vertex_faces(m.F[sp.face][i]);
}

inline Vec2 locate(const ConvexSurfaceMesh& m, int f, const Vec3& p) {
    auto bc = m.barycentric(f, p);
    auto c2 = frame2d(m, f);
    return c2[0] * bc[0] + c2[1] * bc[1] + c2[2] * bc[2];
}

struct UnfoldState {
    int face;
    int prev;
    Rigid2 T;  // face frame -> start-face plane
    std::vector<std::pair<Vec2, Vec2>> gates;  // unfolded shared edges, in order
};

inline double oracle_distance(const ConvexSurfaceMesh& m, const SurfacePoint& a,
                              const SurfacePoint& b, int max_crossings = 4) {
    Vec3 a3 = m.point(a), b3 = m.point(b);
    double scale = m.bbox_diag();
    double best = std::numeric_limits<double>::infinity();

    for (int fa : homes(m, a)) {
        Vec2 a2 = locate(m, fa, a3);
        std::vector<UnfoldState> stack;
        stack.push_back({fa, -1, Rigid2{1, 0, {0, 0}}, {}});
        while (!stack.empty()) {
            UnfoldState st = stack.back();
            stack.pop_back();
            // candidate: b lives on this face (any home face matching)
            for (int fb : homes(m, b)) {
                if (fb != st.face) continue;
                Vec2 b2 = st.T(locate(m, st.face, b3));
                bool ok = true;
                double tprev = -1e-9;
                Vec2 d = b2 - a2;
                for (const auto& [P, Q] : st.gates) {
                    Vec2 g = Q - P;
                    double den = convexgeo::cross(d, g);
                    if (std::abs(den) < 1e-14 * scale * scale) { ok = false; break; }
                    double t = convexgeo::cross(P - a2, g) / den;
                    double u = convexgeo::cross(d, a2 - P) / den;
                    if (u < -1e-9 || u > 1 + 1e-9) { ok = false; break; }
                    if (t < tprev - 1e-12 || t < -1e-9 || t > 1 + 1e-9) { ok = false; break; }
                    tprev = t;
                }
                if (ok) best = std::min(best, convexgeo::norm(b2 - a2));
            }
            if (int(st.gates.size()) >= max_crossings) continue;
            auto c2 = frame2d(m, st.face);
            for (int e = 0; e < 3; e++) {
                int g = m.neighbor(st.face, e);
                if (g == st.prev) continue;
                int ge = m.neighbor_edge(st.face, e);
                auto cg = frame2d(m, g);
                // shared edge: corners (e, e+1) here equal (ge+1, ge) there
                Rigid2 M = Rigid2::map_segment(cg[ge], cg[(ge + 1) % 3], c2[(e + 1) % 3], c2[e]);
                UnfoldState child;
                child.face = g;
                child.prev = st.face;
                child.T = st.T.compose(M);
                child.gates = st.gates;
                child.gates.push_back({st.T(c2[e]), st.T(c2[(e + 1) % 3])});
                stack.push_back(std::move(child));
            }
        }
    }
    // same-face direct chord (zero crossings) for every home pairing
    for (int fa : homes(m, a))
        for (int fb : homes(m, b))
            if (fa == fb) best = std::min(best, convexgeo::dist(a3, b3));
    return best;
}

}  // namespace oracle
