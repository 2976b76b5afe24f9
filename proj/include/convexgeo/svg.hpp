#pragma once
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chart.hpp"
#include "distance_fields.hpp"
#include "geodesic.hpp"
#include "mesh.hpp"

namespace convexgeo {

// two projections share one scene: an axonometric view of the whole surface
// with back-facing geometry dimmed, and a flat view through a chart plane.
// output is plain text with fixed-precision coordinates, so equal scenes
// produce equal files
class SvgScene {
  public:
    explicit SvgScene(const ConvexSurfaceMesh& m) : m_(&m) {}

    void add_polyline(std::vector<Vec3> pts, std::vector<int> faces, const std::string& color,
                      bool closed, double width = 1.6) {
        if (pts.empty()) return;
        if (faces.size() != pts.size()) faces.assign(pts.size(), -1);
        items_.push_back({std::move(pts), std::move(faces), closed, false, color, width});
    }

    void add_path(const GeodesicPath& p, const std::string& color = "#c62828") {
        if (p.xyz.size() < 2) {
            add_markers(p.xyz, color);
            return;
        }
        // seg_face carries each segment; attribute a point to its outgoing
        // segment and the last point to its incoming one
        std::vector<int> faces(p.xyz.size(), -1);
        for (size_t i = 0; i + 1 < p.xyz.size() && i < p.seg_face.size(); i++)
            faces[i] = p.seg_face[i];
        if (!p.seg_face.empty()) faces.back() = p.seg_face.back();
        add_polyline(p.xyz, std::move(faces), color, false, 2.0);
    }

    void add_level_set(const LevelSet& ls, const std::string& color = "#1565c0") {
        for (size_t c = 0; c < ls.xyz.size(); c++) {
            std::vector<int> faces(ls.xyz[c].size(), -1);
            for (size_t i = 0; i < faces.size() && i < ls.polylines[c].size(); i++)
                faces[i] = ls.polylines[c][i].face;
            add_polyline(ls.xyz[c], std::move(faces), color, c < ls.closed.size() && ls.closed[c]);
        }
    }

    void add_markers(std::vector<Vec3> pts, const std::string& color = "#2e7d32",
                     double radius = 2.6) {
        if (pts.empty()) return;
        items_.push_back({std::move(pts), std::vector<int>(), false, true, color, radius});
    }

    void save(const std::string& path) const {
        Vec3 d = view_dir();
        Vec3 right = normalized(cross(Vec3{0, 0, 1}, d));
        Vec3 up = cross(d, right);
        auto proj = [&](const Vec3& x) { return Vec2{dot(x, right), dot(x, up)}; };
        auto face_visible = [&](int f) { return f >= 0 && dot(m_->face_normal(f), d) > 1e-12; };
        write_scene(path, proj, face_visible, nullptr);
    }

    void save_chart(const StandardChart& chart, const std::string& path) const {
        auto proj = [&](const Vec3& x) { return chart.to_plane(x); };
        // the chart sees the near-side graph only: every covered face counts
        // as front-facing, everything else is dimmed
        std::vector<char> near(m_->n_faces(), 0);
        for (int f : chart.faces) near[f] = 1;
        auto face_visible = [near = std::move(near)](int f) { return f >= 0 && near[f]; };
        write_scene(path, proj, face_visible, &chart);
    }

  private:
    struct Item {
        std::vector<Vec3> pts;
        std::vector<int> faces;  // containing face per point, -1 = unknown
        bool closed = false;
        bool markers = false;
        std::string color;
        double width = 1.6;
    };

    static Vec3 view_dir() {
        // azimuth 35 deg, elevation 28 deg: three faces of an axis-aligned
        // box stay visible and no edge projects degenerate
        double az = 35.0 * 0.017453292519943295, el = 28.0 * 0.017453292519943295;
        return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
    }

    int face_of(const Vec3& x) const { return m_->nearest_surface_point(x).face; }

    int segment_face(const Item& it, size_t i, size_t j) const {
        if (it.faces[i] >= 0 && it.faces[i] == it.faces[j]) return it.faces[i];
        return face_of((it.pts[i] + it.pts[j]) * 0.5);
    }

    template <class Proj, class Vis>
    void write_scene(const std::string& path, Proj proj, Vis face_visible,
                     const StandardChart* chart) const {
        // bounds over everything drawn
        Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
        auto grow = [&](const Vec2& u) {
            lo.x = std::min(lo.x, u.x), lo.y = std::min(lo.y, u.y);
            hi.x = std::max(hi.x, u.x), hi.y = std::max(hi.y, u.y);
        };
        if (chart) {
            for (const Vec2& v : chart->V) grow(v);
            for (int f : chart->faces)
                for (int k = 0; k < 3; k++) grow(proj(m_->V[m_->F[f][k]]));
        } else {
            for (const Vec3& v : m_->V) grow(proj(v));
        }
        for (const Item& it : items_)
            for (const Vec3& p : it.pts) grow(proj(p));
        double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
        double pad = 0.06 * span;
        lo -= Vec2{pad, pad}, hi += Vec2{pad, pad};
        double W = 720.0, s = W / (hi.x - lo.x);
        double H = std::ceil((hi.y - lo.y) * s);
        // svg y grows downward
        auto px = [&](const Vec2& u) { return Vec2{(u.x - lo.x) * s, (hi.y - u.y) * s}; };

        std::string out;
        char buf[256];
        auto emit = [&](const char* fmt, auto... a) {
            std::snprintf(buf, sizeof buf, fmt, a...);
            out += buf;
        };
        emit("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %.0f %.0f\">\n", W, H);
        out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

        auto poly_attr = [&](const std::vector<Vec2>& q, bool closed, const std::string& color,
                             double w, double opacity) {
            if (q.size() < 2) return;
            out += closed ? "<polygon points=\"" : "<polyline points=\"";
            for (const Vec2& u : q) {
                Vec2 p = px(u);
                emit("%.2f,%.2f ", p.x, p.y);
            }
            out.pop_back();
            emit("\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.2f\" stroke-opacity=\"%.2f\" "
                 "stroke-linejoin=\"round\" stroke-linecap=\"round\"/>\n",
                 color.c_str(), w, opacity);
        };

        // mesh wireframe, dim pass then bright pass so front edges win
        std::map<std::pair<int, int>, std::pair<int, int>> edge_faces;
        for (int f = 0; f < m_->n_faces(); f++)
            for (int e = 0; e < 3; e++) {
                int a = m_->F[f][e], b = m_->F[f][(e + 1) % 3];
                auto& slot = edge_faces[{std::min(a, b), std::max(a, b)}];
                (slot.first == 0 && slot.second == 0 ? slot.first : slot.second) = f + 1;
            }
        for (int pass = 0; pass < 2; pass++)
            for (const auto& [e, ff] : edge_faces) {
                bool vis = face_visible(ff.first - 1) || face_visible(ff.second - 1);
                if (vis != (pass == 1)) continue;
                poly_attr({proj(m_->V[e.first]), proj(m_->V[e.second])}, false, "#455a64", 1.0,
                          vis ? 0.85 : 0.18);
            }
        if (chart) {
            std::vector<Vec2> dom = chart->V;
            poly_attr(dom, true, "#000000", 1.4, 0.9);
        }

        // overlays: split each chain into runs of constant visibility
        for (const Item& it : items_) {
            if (it.markers) continue;
            size_t n = it.pts.size();
            for (int pass = 0; pass < 2; pass++) {
                std::vector<Vec2> run;
                auto flush = [&]() {
                    poly_attr(run, false, it.color, it.width, pass ? 1.0 : 0.25);
                    run.clear();
                };
                size_t nseg = it.closed ? n : n - 1;
                for (size_t i = 0; i < nseg; i++) {
                    size_t j = (i + 1) % n;
                    bool vis = face_visible(segment_face(it, i, j));
                    if (vis == (pass == 1)) {
                        if (run.empty()) run.push_back(proj(it.pts[i]));
                        run.push_back(proj(it.pts[j]));
                    } else {
                        flush();
                    }
                }
                flush();
            }
        }
        for (const Item& it : items_) {
            if (!it.markers) continue;
            for (const Vec3& p : it.pts) {
                bool vis = face_visible(face_of(p));
                Vec2 q = px(proj(p));
                emit("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\" "
                     "fill-opacity=\"%.2f\"/>\n",
                     q.x, q.y, it.width, it.color.c_str(), vis ? 1.0 : 0.3);
            }
        }
        out += "</svg>\n";

        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("svg: cannot open output file: " + path);
        f << out;
    }

    const ConvexSurfaceMesh* m_;
    std::vector<Item> items_;
};

}  // namespace convexgeo
