#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "convexgeo/vec.hpp"

namespace convexgeo {

// triangulated boundary of the convex hull; face indices refer to the input
// point array, normals face outward
struct HullMesh {
    std::vector<std::array<int, 3>> faces;
    std::vector<int> vertices;  // ids of points that are hull vertices, ascending
};

namespace hull_detail {

struct Face {
    int v[3];
    int nbr[3];  // neighbor across edge (v[i], v[i+1])
    Vec3 n;      // unit outward normal
    double d;    // plane offset, dot(n,x) = d on the plane
    bool alive = true;
};

inline void plane_of(Face& f, const std::vector<Vec3>& pts) {
    Vec3 a = pts[f.v[0]], b = pts[f.v[1]], c = pts[f.v[2]];
    f.n = normalized(cross(b - a, c - a));
    f.d = dot(f.n, a);
}

}  // namespace hull_detail

// incremental hull with strict-visibility flood; points in exactly convex
// position are kept (coplanar facets stay split into triangles)
inline HullMesh convex_hull(const std::vector<Vec3>& pts) {
    using hull_detail::Face;
    const int n = int(pts.size());
    if (n < 4) throw std::runtime_error("convex_hull: need at least 4 points");

    double scale = 0.0;
    for (const Vec3& p : pts)
        scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    const double eps = 1e-12 * std::max(scale, 1e-30);

    // initial simplex from extremes
    int i0 = 0, i1 = 0;
    for (int i = 1; i < n; i++) {
        if (pts[i].x < pts[i0].x) i0 = i;
        if (pts[i].x > pts[i1].x) i1 = i;
    }
    if (dist(pts[i0], pts[i1]) <= eps) {
        for (int i = 0; i < n; i++)
            for (int j = i + 1; j < n; j++)
                if (dist(pts[i], pts[j]) > dist(pts[i0], pts[i1])) { i0 = i; i1 = j; }
    }
    if (dist(pts[i0], pts[i1]) <= eps) throw std::runtime_error("convex_hull: degenerate input");
    int i2 = -1;
    double best = eps;
    for (int i = 0; i < n; i++) {
        double a = norm(cross(pts[i1] - pts[i0], pts[i] - pts[i0]));
        if (a > best) { best = a; i2 = i; }
    }
    if (i2 < 0) throw std::runtime_error("convex_hull: degenerate input (collinear)");
    int i3 = -1;
    best = eps * norm(cross(pts[i1] - pts[i0], pts[i2] - pts[i0]));
    for (int i = 0; i < n; i++) {
        double v = std::abs(orient3d(pts[i0], pts[i1], pts[i2], pts[i]));
        if (v > best) { best = v; i3 = i; }
    }
    if (i3 < 0) throw std::runtime_error("convex_hull: degenerate input (coplanar)");
    if (orient3d(pts[i0], pts[i1], pts[i2], pts[i3]) > 0) std::swap(i1, i2);
    // now i3 is below the (i0,i1,i2) plane

    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c, int na, int nb, int nc) {
        Face f;
        f.v[0] = a; f.v[1] = b; f.v[2] = c;
        f.nbr[0] = na; f.nbr[1] = nb; f.nbr[2] = nc;
        hull_detail::plane_of(f, pts);
        faces.push_back(f);
        return int(faces.size()) - 1;
    };
    // tetra (i0,i1,i2 up; i3 apex below); all normals outward
    add_face(i0, i1, i2, 3, 1, 2);  // 0: top
    add_face(i2, i1, i3, 0, 3, 2);  // 1
    add_face(i0, i2, i3, 0, 1, 3);  // 2
    add_face(i1, i0, i3, 0, 2, 1);  // 3
    Vec3 inner = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
    for (Face& f : faces)
        if (dot(f.n, inner) - f.d > 0) throw std::runtime_error("convex_hull: bad init orientation");

    std::vector<char> used(n, 0);
    used[i0] = used[i1] = used[i2] = used[i3] = 1;

    auto compact = [&]() {
        std::vector<int> remap(faces.size(), -1);
        std::vector<Face> next;
        next.reserve(faces.size());
        for (int i = 0; i < int(faces.size()); i++) {
            if (!faces[i].alive) continue;
            remap[i] = int(next.size());
            next.push_back(faces[i]);
        }
        for (Face& f : next)
            for (int e = 0; e < 3; e++) f.nbr[e] = remap[f.nbr[e]];
        faces.swap(next);
    };

    std::vector<int> vis_stack, visible;
    int alive_count = 4;
    for (int p = 0; p < n; p++) {
        if (used[p]) continue;
        used[p] = 1;
        if (int(faces.size()) > 1000 && int(faces.size()) > 3 * alive_count) compact();
        // strictest violated face seeds the flood
        int seed = -1;
        double worst = eps;
        for (int fi = 0; fi < int(faces.size()); fi++) {
            if (!faces[fi].alive) continue;
            double s = dot(faces[fi].n, pts[p]) - faces[fi].d;
            if (s > worst) { worst = s; seed = fi; }
        }
        if (seed < 0) continue;  // inside or on the boundary

        visible.clear();
        vis_stack.assign(1, seed);
        std::vector<char> mark(faces.size(), 0);
        mark[seed] = 1;
        while (!vis_stack.empty()) {
            int fi = vis_stack.back();
            vis_stack.pop_back();
            visible.push_back(fi);
            for (int e = 0; e < 3; e++) {
                int g = faces[fi].nbr[e];
                if (g < 0 || mark[g] || !faces[g].alive) continue;
                if (dot(faces[g].n, pts[p]) - faces[g].d > eps) {
                    mark[g] = 1;
                    vis_stack.push_back(g);
                }
            }
        }
        // horizon: directed edges of visible faces whose neighbor survives
        // key: first vertex of the directed edge as seen from the visible side
        std::map<int, std::array<int, 3>> horizon;  // a -> (b, outsideFace, outsideEdge)
        for (int fi : visible) {
            for (int e = 0; e < 3; e++) {
                int g = faces[fi].nbr[e];
                if (g >= 0 && mark[size_t(g)] ) continue;
                int a = faces[fi].v[e], b = faces[fi].v[(e + 1) % 3];
                int ge = 0;
                for (int k = 0; k < 3; k++)
                    if (faces[g].v[k] == b && faces[g].v[(k + 1) % 3] == a) ge = k;
                horizon[a] = {b, g, ge};
            }
        }
        if (horizon.empty()) continue;
        for (int fi : visible) faces[fi].alive = false;

        // walk the horizon cycle and stitch the new fan
        int start = horizon.begin()->first;
        std::vector<int> fan;
        int a = start;
        do {
            auto it = horizon.find(a);
            if (it == horizon.end()) throw std::runtime_error("convex_hull: open horizon");
            int b = it->second[0], g = it->second[1], ge = it->second[2];
            int nf = add_face(p, a, b, -1, g, -1);
            faces[g].nbr[ge] = nf;
            fan.push_back(nf);
            a = b;
        } while (a != start && int(fan.size()) <= int(horizon.size()));
        if (a != start) throw std::runtime_error("convex_hull: horizon walk failed");
        alive_count += int(fan.size()) - int(visible.size());
        for (int k = 0; k < int(fan.size()); k++) {
            int prev = fan[(k + int(fan.size()) - 1) % fan.size()];
            int next = fan[(k + 1) % fan.size()];
            faces[fan[k]].nbr[0] = prev;  // edge (p, a)
            faces[fan[k]].nbr[2] = next;  // edge (b, p)
        }
        for (int nf : fan)
            if (dot(faces[nf].n, inner) - faces[nf].d > eps)
                throw std::runtime_error("convex_hull: inverted face");
    }

    HullMesh out;
    std::vector<char> isv(n, 0);
    for (const Face& f : faces) {
        if (!f.alive) continue;
        out.faces.push_back({f.v[0], f.v[1], f.v[2]});
        isv[f.v[0]] = isv[f.v[1]] = isv[f.v[2]] = 1;
    }
    for (int i = 0; i < n; i++)
        if (isv[i]) out.vertices.push_back(i);
    return out;
}

}  // namespace convexgeo
