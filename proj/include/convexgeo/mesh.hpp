#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "convexgeo/hull.hpp"
#include "convexgeo/vec.hpp"

namespace convexgeo {

// location on the surface: face id plus barycentric coordinates
struct SurfacePoint {
    int face = -1;
    std::array<double, 3> bary{0, 0, 0};
};

// closed, consistently oriented triangle surface of a convex body.
// construction validates topology (2-manifold, genus 0) and fixes the global
// orientation so normals point outward; metric convexity is a separate check.
class ConvexSurfaceMesh {
  public:
    std::vector<Vec3> V;
    std::vector<std::array<int, 3>> F;

    ConvexSurfaceMesh() = default;
    ConvexSurfaceMesh(std::vector<Vec3> verts, std::vector<std::array<int, 3>> faces)
        : V(std::move(verts)), F(std::move(faces)) {
        finish_build();
    }

    int n_vertices() const { return int(V.size()); }
    int n_faces() const { return int(F.size()); }
    int n_edges() const { return int(edge_list_.size()); }

    // neighbor face across edge e of face f (edge e runs F[f][e] -> F[f][e+1])
    int neighbor(int f, int e) const { return adj_[f][e].first; }
    // the matching edge index inside the neighbor
    int neighbor_edge(int f, int e) const { return adj_[f][e].second; }

    const std::vector<std::array<int, 2>>& edges() const { return edge_list_; }
    const std::vector<int>& vertex_faces(int v) const { return vfaces_[v]; }

    Vec3 face_normal(int f) const {
        return normalized(cross(V[F[f][1]] - V[F[f][0]], V[F[f][2]] - V[F[f][0]]));
    }
    double face_area(int f) const {
        return 0.5 * norm(cross(V[F[f][1]] - V[F[f][0]], V[F[f][2]] - V[F[f][0]]));
    }
    Vec3 centroid() const { return centroid_; }
    double bbox_diag() const { return bbox_diag_; }
    double volume() const { return volume_; }

    Vec3 point(const SurfacePoint& p) const {
        const auto& f = F[p.face];
        return V[f[0]] * p.bary[0] + V[f[1]] * p.bary[1] + V[f[2]] * p.bary[2];
    }

    SurfacePoint vertex_point(int v) const {
        SurfacePoint p;
        p.face = vfaces_[v][0];
        for (int k = 0; k < 3; k++) p.bary[k] = (F[p.face][k] == v) ? 1.0 : 0.0;
        return p;
    }

    // barycentric coordinates of x projected into face f's plane
    std::array<double, 3> barycentric(int f, const Vec3& x) const {
        Vec3 a = V[F[f][0]], b = V[F[f][1]], c = V[F[f][2]];
        Vec3 u = b - a, v = c - a, w = x - a;
        double uu = dot(u, u), vv = dot(v, v), uv = dot(u, v);
        double wu = dot(w, u), wv = dot(w, v);
        double det = uu * vv - uv * uv;
        double s = (wu * vv - wv * uv) / det;
        double t = (uu * wv - uv * wu) / det;
        return {1.0 - s - t, s, t};
    }

    SurfacePoint nearest_surface_point(const Vec3& x) const {
        double best = 1e300;
        Vec3 bq;
        int bf = 0;
        for (int f = 0; f < n_faces(); f++) {
            Vec3 q = closest_on_face(f, x);
            double d2 = norm2(x - q);
            if (d2 < best) { best = d2; bq = q; bf = f; }
        }
        SurfacePoint p;
        p.face = bf;
        auto bc = barycentric(bf, bq);
        for (double& b : bc) b = std::max(0.0, b);
        double s = bc[0] + bc[1] + bc[2];
        p.bary = {bc[0] / s, bc[1] / s, bc[2] / s};
        return p;
    }

    Vec3 closest_on_face(int f, const Vec3& x) const {
        Vec3 a = V[F[f][0]], b = V[F[f][1]], c = V[F[f][2]];
        auto bc = barycentric(f, x);
        if (bc[0] >= 0 && bc[1] >= 0 && bc[2] >= 0)
            return a * bc[0] + b * bc[1] + c * bc[2];
        auto seg = [&](const Vec3& p, const Vec3& q) {
            double t = norm2(q - p) > 0 ? clamp01(dot(x - p, q - p) / norm2(q - p)) : 0.0;
            return p + (q - p) * t;
        };
        Vec3 cand[3] = {seg(a, b), seg(b, c), seg(c, a)};
        Vec3 bestq = cand[0];
        for (int k = 1; k < 3; k++)
            if (norm2(x - cand[k]) < norm2(x - bestq)) bestq = cand[k];
        return bestq;
    }

  private:
    std::vector<std::array<std::pair<int, int>, 3>> adj_;
    std::vector<std::array<int, 2>> edge_list_;
    std::vector<std::vector<int>> vfaces_;
    Vec3 centroid_;
    double bbox_diag_ = 0.0;
    double volume_ = 0.0;

    void finish_build() {
        if (V.size() < 4 || F.size() < 4)
            throw std::runtime_error("mesh: too few vertices or faces");
        for (auto& f : F)
            for (int k = 0; k < 3; k++)
                if (f[k] < 0 || f[k] >= int(V.size()))
                    throw std::runtime_error("mesh: face index out of range");

        centroid_ = {0, 0, 0};
        for (const Vec3& p : V) centroid_ += p;
        centroid_ = centroid_ / double(V.size());
        volume_ = 0.0;
        for (auto& f : F)
            volume_ += orient3d(centroid_, V[f[0]], V[f[1]], V[f[2]]) / 6.0;
        if (volume_ < 0) {  // consistently inward, flip everything
            for (auto& f : F) std::swap(f[1], f[2]);
            volume_ = -volume_;
        }

        std::map<std::pair<int, int>, std::pair<int, int>> half;  // (a,b) -> (face, edge)
        for (int f = 0; f < n_faces(); f++) {
            for (int e = 0; e < 3; e++) {
                int a = F[f][e], b = F[f][(e + 1) % 3];
                if (a == b) throw std::runtime_error("mesh: degenerate face");
                auto key = std::make_pair(a, b);
                if (half.count(key))
                    throw std::runtime_error("mesh: duplicated directed edge (non-manifold or mixed orientation)");
                half[key] = {f, e};
            }
        }
        adj_.assign(F.size(), {});
        edge_list_.clear();
        for (auto& [key, fe] : half) {
            auto twin = half.find({key.second, key.first});
            if (twin == half.end())
                throw std::runtime_error("mesh: open boundary edge");
            adj_[fe.first][fe.second] = twin->second;
            if (key.first < key.second) edge_list_.push_back({key.first, key.second});
        }
        int eu = n_vertices() - n_edges() + n_faces();
        if (eu != 2) throw std::runtime_error("mesh: euler characteristic " + std::to_string(eu) + ", expected 2 (sphere topology)");

        vfaces_.assign(V.size(), {});
        for (int f = 0; f < n_faces(); f++)
            for (int k = 0; k < 3; k++) vfaces_[F[f][k]].push_back(f);
        for (int v = 0; v < n_vertices(); v++) {
            if (vfaces_[v].empty()) throw std::runtime_error("mesh: isolated vertex");
            // single umbrella: walk around v across twins and count
            int f0 = vfaces_[v][0];
            int f = f0, guard = 0, seen = 0;
            do {
                int e = -1;
                for (int k = 0; k < 3; k++)
                    if (F[f][k] == v) e = k;
                f = adj_[f][e].first;  // across the edge leaving v
                seen++;
                if (++guard > n_faces() + 1) throw std::runtime_error("mesh: broken vertex fan");
            } while (f != f0);
            if (seen != int(vfaces_[v].size()))
                throw std::runtime_error("mesh: vertex fan is not a single cycle");
        }

        Vec3 lo = V[0], hi = V[0];
        for (const Vec3& p : V)
            for (int k = 0; k < 3; k++) {
                lo[k] = std::min(lo[k], p[k]);
                hi[k] = std::max(hi[k], p[k]);
            }
        bbox_diag_ = norm(hi - lo);
        if (volume_ <= 0 || bbox_diag_ <= 0)
            throw std::runtime_error("mesh: degenerate (zero volume)");
    }
};

struct ConvexityReport {
    double max_vertex_deviation = 0.0;  // depth of the worst vertex inside the hull
    double max_plane_violation = 0.0;   // how far the hull pokes past a face plane
    double tolerance = 0.0;
    double volume = 0.0;
    bool pass = false;
};

// a mesh is accepted as convex when every vertex lies on the hull of all
// vertices and every face plane supports that hull
inline ConvexityReport validate_convex(const ConvexSurfaceMesh& m, double tol_convex = -1.0) {
    ConvexityReport rep;
    rep.tolerance = tol_convex > 0 ? tol_convex : 1e-9 * m.bbox_diag();
    rep.volume = m.volume();

    HullMesh hull = convex_hull(m.V);
    struct Plane { Vec3 n; double d; };
    std::vector<Plane> planes(hull.faces.size());
    for (size_t i = 0; i < hull.faces.size(); i++) {
        const auto& f = hull.faces[i];
        Vec3 n = normalized(cross(m.V[f[1]] - m.V[f[0]], m.V[f[2]] - m.V[f[0]]));
        planes[i] = {n, dot(n, m.V[f[0]])};
    }
    for (const Vec3& v : m.V) {
        double depth = 1e300;
        for (const Plane& pl : planes)
            depth = std::min(depth, pl.d - dot(pl.n, v));
        rep.max_vertex_deviation = std::max(rep.max_vertex_deviation, std::max(0.0, depth));
    }
    for (int f = 0; f < m.n_faces(); f++) {
        Vec3 n = m.face_normal(f);
        double d = dot(n, m.V[m.F[f][0]]);
        double worst = 0.0;
        for (int hv : hull.vertices)
            worst = std::max(worst, dot(n, m.V[hv]) - d);
        rep.max_plane_violation = std::max(rep.max_plane_violation, worst);
    }
    rep.pass = rep.max_vertex_deviation <= rep.tolerance &&
               rep.max_plane_violation <= rep.tolerance;
    return rep;
}

inline ConvexSurfaceMesh mesh_from_hull(const std::vector<Vec3>& pts) {
    HullMesh h = convex_hull(pts);
    std::vector<int> remap(pts.size(), -1);
    std::vector<Vec3> verts;
    for (int vid : h.vertices) {
        remap[vid] = int(verts.size());
        verts.push_back(pts[vid]);
    }
    std::vector<std::array<int, 3>> faces;
    faces.reserve(h.faces.size());
    for (const auto& f : h.faces)
        faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
    return ConvexSurfaceMesh(std::move(verts), std::move(faces));
}

inline ConvexSurfaceMesh load_off(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    auto next_token_line = [&](std::string& line) {
        while (std::getline(in, line)) {
            size_t h = line.find('#');
            if (h != std::string::npos) line = line.substr(0, h);
            size_t b = line.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) continue;
            line = line.substr(b);
            return true;
        }
        return false;
    };
    std::string line;
    if (!next_token_line(line)) throw std::runtime_error(path + ": empty OFF file");
    std::istringstream hdr(line);
    std::string magic;
    hdr >> magic;
    long nv = -1, nf = -1, ne = -1;
    if (magic == "OFF") {
        if (!(hdr >> nv >> nf >> ne)) {
            if (!next_token_line(line)) throw std::runtime_error(path + ": truncated OFF header");
            std::istringstream cnt(line);
            if (!(cnt >> nv >> nf >> ne)) throw std::runtime_error(path + ": bad OFF counts");
        }
    } else {
        std::istringstream cnt(line);
        if (!(cnt >> nv >> nf >> ne)) throw std::runtime_error(path + ": missing OFF header");
    }
    if (nv < 4 || nf < 4) throw std::runtime_error(path + ": too few vertices/faces");

    std::vector<Vec3> verts(nv);
    for (long i = 0; i < nv; i++) {
        if (!next_token_line(line)) throw std::runtime_error(path + ": truncated vertex list");
        std::istringstream ls(line);
        if (!(ls >> verts[i].x >> verts[i].y >> verts[i].z))
            throw std::runtime_error(path + ": bad vertex line");
    }
    std::vector<std::array<int, 3>> faces;
    for (long i = 0; i < nf; i++) {
        if (!next_token_line(line)) throw std::runtime_error(path + ": truncated face list");
        std::istringstream ls(line);
        int cnt;
        if (!(ls >> cnt) || cnt < 3) throw std::runtime_error(path + ": bad face line");
        std::vector<int> idx(cnt);
        for (int k = 0; k < cnt; k++)
            if (!(ls >> idx[k])) throw std::runtime_error(path + ": bad face line");
        for (int k = 1; k + 1 < cnt; k++)  // fan triangulation of convex facets
            faces.push_back({idx[0], idx[k], idx[k + 1]});
    }
    return ConvexSurfaceMesh(std::move(verts), std::move(faces));
}

inline void save_off(const ConvexSurfaceMesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "OFF\n" << m.n_vertices() << " " << m.n_faces() << " " << m.n_edges() << "\n";
    char buf[128];
    for (const Vec3& v : m.V) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
        out << buf;
    }
    for (const auto& f : m.F)
        out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

}  // namespace convexgeo
