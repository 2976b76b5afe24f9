#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "convexgeo/mesh.hpp"
#include "convexgeo/vec.hpp"

namespace convexgeo {

constexpr double kInf = std::numeric_limits<double>::infinity();

// finite union of surface pieces acting as the set K; every entry is its own
// component (points first, then edges, then faces)
struct SourceSet {
    std::vector<SurfacePoint> points;
    std::vector<std::array<int, 2>> edges;  // mesh edges given by vertex ids
    std::vector<int> faces;                 // whole closed triangles

    int n_components() const { return int(points.size() + edges.size() + faces.size()); }
    static SourceSet one_point(const SurfacePoint& p) {
        SourceSet k;
        k.points.push_back(p);
        return k;
    }
};

struct GeodesicPath {
    double length = 0.0;          // certified upper bound, realized by the polyline
    double lower = 0.0;           // certified lower bound on the true distance
    std::vector<SurfacePoint> points;
    std::vector<Vec3> xyz;
    std::vector<int> seg_face;    // face carrying each polyline segment
    std::string method = "exact-unfolding";
    int component = -1;
};

// one near-minimal curve from a query point back to the source set
struct PathWitness {
    double length = 0.0;
    int component = -1;
    std::vector<int> signature;   // entry halfedges, source to target, then target face
    Vec3 endpoint;                // foot on the source component
    Vec3 arrival_dir;             // unit direction of the last segment, into the query point
    int via_vertex = -1;          // mesh vertex the curve is relayed through, if any
    GeodesicPath path;
};

struct FieldOptions {
    double radius_limit = kInf;
    bool has_target = false;
    SurfacePoint target;
    double tau_geo = 1e-9;
    double tie_margin = 0.0;   // keep competitively close windows arriving from
    double tie_angle = 0.5;    // directions at least tie_angle apart
    std::size_t max_windows = 20'000'000;
};

struct DiameterReport {
    double lower = 0.0, upper = 0.0, h_cover = 0.0;
    SurfacePoint a, b;
    int n_samples = 0;
};

namespace geo_detail {

struct Window {
    Vec2 s0, s1;        // point: image of the source; band: unfolded source segment
    double lo = 0, hi = 1;  // covered interval on the entry edge, params in [0,1]
    double key = 0;         // min distance over the interval
    int face = -1;          // frame of s0/s1; the face the window entered
    int parent = -1;
    int comp = -1;
    std::int8_t edge = 0;   // entry edge of `face`
    std::int8_t kind = 0;   // 0 point, 1 band
};

struct DirectSrc {
    int comp;
    int kind;  // 0 point, 1 segment, 2 whole face
    Vec2 a, b;
};

}  // namespace geo_detail

// distance field from a source set, exact up to floating point. Windows are
// kept per face so the field can be re-evaluated anywhere on the surface and
// near-minimal curves can be enumerated.
class DistanceField {
  public:
    using Window = geo_detail::Window;

    const ConvexSurfaceMesh* m = nullptr;
    SourceSet K;
    std::vector<double> vdist;   // exact distances at vertices
    std::vector<int> varg;       // window realizing vdist; -2 direct chord, -1 none
    std::vector<int> vcomp;
    std::vector<int> vpar;       // edge-graph parent, tracing fallback
    double e_field = 0.0;        // certification slack of every reported value
    double max_vertex_dist = 0.0;

    double eval(const SurfacePoint& q) const {
        Vec2 x = to_frame(q);
        double best = kInf;
        query_candidates(q.face, x, [&](double d, int, int) { best = std::min(best, d); });
        return best;
    }

    // all candidate arrivals within eps_tie of the minimum, deduplicated by
    // unfolding signature; distinctness of curves is combinatorial
    std::vector<PathWitness> witnesses(const SurfacePoint& q, double eps_tie) const;

    GeodesicPath trace_best(const SurfacePoint& q) const;

    double field_scale() const { return m->bbox_diag() + max_vertex_dist; }

    // ---- internals (populated by multi_source_field) ----
    std::vector<std::array<Vec2, 3>> c2d;        // per face corner frame
    std::vector<Vec3> forg;                      // frame origin
    std::vector<std::array<Vec3, 2>> faxes;      // frame axes
    std::vector<std::array<Rigid2, 3>> xf;       // unfolding across edge e of face f
    std::vector<Window> wins;
    std::vector<std::vector<int>> ewins;         // per halfedge 3f+e
    std::vector<std::vector<geo_detail::DirectSrc>> fsrc;
    std::vector<Vec3> comp_xyz;                  // representative point per point-component

    Vec2 to_frame(const SurfacePoint& q) const {
        return c2d[q.face][0] * q.bary[0] + c2d[q.face][1] * q.bary[1] + c2d[q.face][2] * q.bary[2];
    }
    Vec3 to3d(int f, const Vec2& p) const { return forg[f] + faxes[f][0] * p.x + faxes[f][1] * p.y; }

    bool covers(const Window& w, const Vec2& x, double slack) const {
        Vec2 A = c2d[w.face][w.edge], B = c2d[w.face][(w.edge + 1) % 3];
        Vec2 E0 = lerp(A, B, w.lo), E1 = lerp(A, B, w.hi);
        if (w.kind == 0) {
            double om = cross(E0 - w.s0, E1 - w.s0);
            if (std::abs(om) < 1e-14 * slack_scale_) return false;
            double sg = om > 0 ? 1.0 : -1.0;
            return sg * cross(E0 - w.s0, x - w.s0) >= -slack &&
                   sg * cross(x - w.s0, E1 - w.s0) >= -slack;
        }
        (void)slack;
        Vec2 t = w.s1 - w.s0;
        double len = norm(t);
        if (len < 1e-14 * m->bbox_diag()) return false;
        t = t / len;
        Vec2 nh = perp(t);
        double foot = dot(x - w.s0, t);
        double lin = lin_slack_;
        return foot >= -lin && foot <= len + lin && dot(x - w.s0, nh) >= -lin;
    }

    double wdist(const Window& w, const Vec2& x) const {
        if (w.kind == 0) return norm(x - w.s0);
        Vec2 t = normalized(w.s1 - w.s0);
        return std::abs(cross(t, x - w.s0));
    }

    template <class FN>  // FN(length, type, ref): type 0 window, 1 relay corner, 2 direct
    void query_candidates(int f, const Vec2& x, FN&& fn) const {
        for (const auto& ds : fsrc[f]) {
            if (ds.kind == 2) fn(0.0, 2, ds.comp);
            else if (ds.kind == 0) fn(norm(x - ds.a), 2, ds.comp);
            else fn(std::sqrt(point_segment_dist2(x, ds.a, ds.b)), 2, ds.comp);
        }
        double slack = cone_slack_;
        for (int e = 0; e < 3; e++)
            for (int wid : ewins[3 * f + e]) {
                const Window& w = wins[wid];
                if (covers(w, x, slack)) fn(wdist(w, x), 0, wid);
            }
        for (int k = 0; k < 3; k++) {
            int v = m->F[f][k];
            if (vdist[v] < kInf) fn(vdist[v] + norm(x - c2d[f][k]), 1, v);
        }
    }

    double cone_slack_ = 0.0, slack_scale_ = 1.0, lin_slack_ = 0.0;

    int common_face(int va, int vb) const {
        for (int f : m->vertex_faces(va))
            for (int k = 0; k < 3; k++)
                if (m->F[f][k] == vb) return f;
        throw std::runtime_error("trace: vertices do not share a face");
    }
    int face_near(int v, const Vec3& p) const {
        int best = -1;
        double bd = kInf;
        for (int f : m->vertex_faces(v)) {
            double d = norm2(p - m->closest_on_face(f, p));
            if (d < bd) { bd = d; best = f; }
        }
        return best;
    }

    GeodesicPath trace_candidate(const SurfacePoint& q, int type, int ref) const;
    std::vector<int> signature_of(int type, int ref, int qface) const;
};

namespace geo_detail {

class Propagator {
  public:
    Propagator(const ConvexSurfaceMesh& mesh, const SourceSet& K, const FieldOptions& opt,
               DistanceField& out)
        : m_(mesh), K_(K), opt_(opt), f_(out) {
        build_frames();
        f_.m = &mesh;
        f_.K = K;
        f_.vdist.assign(mesh.n_vertices(), kInf);
        f_.varg.assign(mesh.n_vertices(), -1);
        f_.vcomp.assign(mesh.n_vertices(), -1);
        f_.vpar.assign(mesh.n_vertices(), -1);
        f_.ewins.assign(3 * mesh.n_faces(), {});
        f_.fsrc.assign(mesh.n_faces(), {});
        scale_ = mesh.bbox_diag();
        f_.cone_slack_ = 1e-12 * scale_ * scale_;
        f_.slack_scale_ = scale_ * scale_;
        f_.lin_slack_ = 1e-12 * scale_;
        trim_eps_ = 1e-12 * scale_;
        if (opt.has_target) target_xyz_ = mesh.point(opt.target);
    }

    void run() {
        seed_sources();
        skeleton_dijkstra();
        if (opt_.has_target) init_best_u();
        while (!heap_.empty()) {
            auto [key, wid] = heap_.top();
            heap_.pop();
            if (key > opt_.radius_limit) break;
            if (opt_.has_target && key > best_u_ + 10 * trim_eps_) break;
            process(wid);
        }
        skeleton_dijkstra();  // tighten vertex values along edges once more
        double maxv = 0.0;
        for (double d : f_.vdist)
            if (d < kInf) maxv = std::max(maxv, d);
        f_.max_vertex_dist = maxv;
        f_.e_field = 1e-12 * (scale_ + maxv);
        if (f_.e_field > opt_.tau_geo * std::max(maxv, 1e-300) && maxv > 0)
            throw std::invalid_argument("geodesic: tau below the certification floor");
    }

  private:
    const ConvexSurfaceMesh& m_;
    const SourceSet& K_;
    FieldOptions opt_;
    DistanceField& f_;
    double scale_ = 1.0, trim_eps_ = 0.0;
    double best_u_ = kInf;
    Vec3 target_xyz_;
    std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                        std::greater<>> heap_;

    void build_frames() {
        int F = m_.n_faces();
        f_.c2d.resize(F);
        f_.forg.resize(F);
        f_.faxes.resize(F);
        f_.xf.resize(F);
        for (int fi = 0; fi < F; fi++) {
            Vec3 a = m_.V[m_.F[fi][0]], b = m_.V[m_.F[fi][1]], c = m_.V[m_.F[fi][2]];
            Vec3 u = normalized(b - a);
            Vec3 cp = c - a - u * dot(c - a, u);
            Vec3 w = normalized(cp);
            f_.forg[fi] = a;
            f_.faxes[fi] = {u, w};
            f_.c2d[fi] = {Vec2{0, 0}, Vec2{norm(b - a), 0}, Vec2{dot(c - a, u), dot(c - a, w)}};
        }
        for (int fi = 0; fi < F; fi++) {
            for (int e = 0; e < 3; e++) {
                int g = m_.neighbor(fi, e), ge = m_.neighbor_edge(fi, e);
                // shared edge runs e -> e+1 here and ge+1 <- ge there
                f_.xf[fi][e] = Rigid2::map_segment(f_.c2d[fi][e], f_.c2d[fi][(e + 1) % 3],
                                                   f_.c2d[g][(ge + 1) % 3], f_.c2d[g][ge]);
            }
        }
    }

    void update_vertex(int v, double d, int arg, int comp) {
        if (d < f_.vdist[v]) {
            f_.vdist[v] = d;
            f_.varg[v] = arg;
            f_.vcomp[v] = comp;
            f_.vpar[v] = -1;  // the edge-graph parent no longer realizes vdist
        }
    }

    void seed_sources() {
        int comp = 0;
        for (const SurfacePoint& sp : K_.points) {
            Vec3 xyz = m_.point(sp);
            f_.comp_xyz.push_back(xyz);
            int zeros = 0;
            for (double b : sp.bary)
                if (b < 1e-12) zeros++;
            std::vector<int> homes;
            if (zeros == 0) homes = {sp.face};
            else if (zeros == 1) {
                int i = 0;
                while (sp.bary[i] >= 1e-12) i++;
                int e = (i + 1) % 3;
                homes = {sp.face, m_.neighbor(sp.face, e)};
            } else {
                int i = 0;
                while (sp.bary[i] < 1e-12) i++;
                int v = m_.F[sp.face][i];
                homes = m_.vertex_faces(v);
                update_vertex(v, 0.0, -2, comp);
            }
            for (int h : homes) {
                auto bc = m_.barycentric(h, xyz);
                Vec2 s = f_.c2d[h][0] * bc[0] + f_.c2d[h][1] * bc[1] + f_.c2d[h][2] * bc[2];
                f_.fsrc[h].push_back({comp, 0, s, s});
                for (int k = 0; k < 3; k++)
                    update_vertex(m_.F[h][k], norm(s - f_.c2d[h][k]), -2, comp);
                emit_from_point(h, s, comp);
            }
            comp++;
        }
        for (const auto& ev : K_.edges) {
            seed_edge(ev[0], ev[1], comp);
            comp++;
        }
        for (int fc : K_.faces) {
            f_.comp_xyz.push_back(m_.point(SurfacePoint{fc, {1.0 / 3, 1.0 / 3, 1.0 / 3}}));
            f_.fsrc[fc].push_back({comp, 2, Vec2{}, Vec2{}});
            for (int k = 0; k < 3; k++)
                update_vertex(m_.F[fc][k], 0.0, -2, comp);
            for (int e = 0; e < 3; e++) {
                emit_edge_band(fc, e, comp);
                int g = m_.neighbor(fc, e);
                emit_edge_band(g, m_.neighbor_edge(fc, e), comp);
                emit_vertex(m_.F[fc][e], comp);
            }
            comp++;
        }
    }

    void seed_edge(int a, int b, int comp) {
        f_.comp_xyz.push_back((m_.V[a] + m_.V[b]) * 0.5);
        bool found = false;
        for (int h : m_.vertex_faces(a)) {
            for (int e = 0; e < 3; e++) {
                if (m_.F[h][e] == a && m_.F[h][(e + 1) % 3] == b) {
                    f_.fsrc[h].push_back({comp, 1, f_.c2d[h][e], f_.c2d[h][(e + 1) % 3]});
                    emit_edge_band(h, e, comp);
                    int g = m_.neighbor(h, e), ge = m_.neighbor_edge(h, e);
                    f_.fsrc[g].push_back({comp, 1, f_.c2d[g][ge], f_.c2d[g][(ge + 1) % 3]});
                    emit_edge_band(g, ge, comp);
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) throw std::invalid_argument("source edge is not a mesh edge");
        update_vertex(a, 0.0, -2, comp);
        update_vertex(b, 0.0, -2, comp);
        emit_vertex(a, comp);
        emit_vertex(b, comp);
    }

    void emit_vertex(int v, int comp) {
        for (int h : m_.vertex_faces(v)) {
            int k = 0;
            while (m_.F[h][k] != v) k++;
            emit_from_point(h, f_.c2d[h][k], comp);
        }
    }

    // initial windows out of face h from a source image s on or inside it;
    // edges whose line carries s are skipped, adjacency coverage comes from
    // emitting inside every face that contains the source point
    void emit_from_point(int h, const Vec2& s, int comp) {
        for (int e = 0; e < 3; e++) {
            Vec2 A = f_.c2d[h][e], B = f_.c2d[h][(e + 1) % 3];
            if (std::abs(cross(B - A, s - A)) <= 1e-12 * scale_ * scale_) continue;
            Window w;
            w.kind = 0;
            w.s0 = w.s1 = f_.xf[h][e](s);
            w.face = m_.neighbor(h, e);
            w.edge = std::int8_t(m_.neighbor_edge(h, e));
            w.lo = 0.0;
            w.hi = 1.0;
            w.parent = -1;
            w.comp = comp;
            finish_and_push(w);
        }
    }

    // perpendicular band of an edge source into the face on side (h,e)
    void emit_edge_band(int h, int e, int comp) {
        Window w;
        w.kind = 1;
        Vec2 A = f_.c2d[h][e], B = f_.c2d[h][(e + 1) % 3], C = f_.c2d[h][(e + 2) % 3];
        w.s0 = A;
        w.s1 = B;
        if (cross(B - A, C - A) < 0) std::swap(w.s0, w.s1);  // perp(t) must face the interior
        w.face = h;
        w.edge = std::int8_t(e);
        w.lo = 0.0;
        w.hi = 1.0;
        w.parent = -1;
        w.comp = comp;
        finish_and_push(w);
    }

    void skeleton_dijkstra() {
        using QE = std::pair<double, int>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> q;
        for (int v = 0; v < m_.n_vertices(); v++)
            if (f_.vdist[v] < kInf) q.push({f_.vdist[v], v});
        std::vector<std::vector<std::pair<int, double>>> adj(m_.n_vertices());
        for (const auto& e : m_.edges()) {
            double w = dist(m_.V[e[0]], m_.V[e[1]]);
            adj[e[0]].push_back({e[1], w});
            adj[e[1]].push_back({e[0], w});
        }
        while (!q.empty()) {
            auto [d, v] = q.top();
            q.pop();
            if (d > f_.vdist[v]) continue;
            for (auto [u, w] : adj[v]) {
                if (d + w < f_.vdist[u]) {
                    f_.vdist[u] = d + w;
                    f_.varg[u] = -1;
                    f_.vcomp[u] = f_.vcomp[v];
                    f_.vpar[u] = v;
                    q.push({d + w, u});
                }
            }
        }
    }

    void init_best_u() {
        Vec2 x = f_.to_frame(opt_.target);
        int tf = opt_.target.face;
        for (const auto& ds : f_.fsrc[tf]) {
            if (ds.kind == 2) best_u_ = 0;
            else if (ds.kind == 0) best_u_ = std::min(best_u_, norm(x - ds.a));
            else best_u_ = std::min(best_u_, std::sqrt(point_segment_dist2(x, ds.a, ds.b)));
        }
        for (int k = 0; k < 3; k++) {
            int v = m_.F[tf][k];
            if (f_.vdist[v] < kInf)
                best_u_ = std::min(best_u_, f_.vdist[v] + norm(x - f_.c2d[tf][k]));
        }
    }

    double window_min_dist(const Window& w) const {
        Vec2 A = f_.c2d[w.face][w.edge], B = f_.c2d[w.face][(w.edge + 1) % 3];
        Vec2 E0 = lerp(A, B, w.lo), E1 = lerp(A, B, w.hi);
        if (w.kind == 0) return std::sqrt(point_segment_dist2(w.s0, E0, E1));
        return std::min(f_.wdist(w, E0), f_.wdist(w, E1));
    }

    // clip, trim against resident windows, prune, push
    void finish_and_push(Window w) {
        if (w.hi - w.lo < 1e-14) return;
        // windows pinched onto an endpoint of their entry edge carry only
        // bundles grazing that vertex; letting them through lets cone slack
        // resurrect them hop after hop, wrapping the unfolding around the
        // vertex until the source image is rotated to a bogus position. A
        // grazing bundle differs from the corner relay only to second order
        // in the pinch width, so dropping it stays within e_field.
        if (w.hi < 1e-9 || w.lo > 1 - 1e-9) return;
        // a face that is itself a source has value zero throughout and seeds
        // its own outgoing bands; windows crossing it carry nothing downstream
        for (const auto& ds : f_.fsrc[w.face])
            if (ds.kind == 2) return;
        int he = 3 * w.face + w.edge;
        Vec2 A = f_.c2d[w.face][w.edge], B = f_.c2d[w.face][(w.edge + 1) % 3];
        if (w.kind == 0) {
            // resident windows with a strictly better claim shave the interval
            for (int oid : f_.ewins[he]) {
                const Window& o = f_.wins[oid];
                if (o.kind != 0) continue;
                if (norm(o.s0 - w.s0) <= 1e-13 * scale_ && o.comp == w.comp &&
                    o.lo <= w.lo + 1e-12 && o.hi >= w.hi - 1e-12)
                    return;  // duplicate unfolding, e.g. symmetric tie cascades
                // D(u) = |X(u)-s_new|^2 - |X(u)-s_old|^2, linear in u
                Vec2 dd = o.s0 - w.s0;
                double Da = 2 * dot(A, dd) + norm2(w.s0) - norm2(o.s0);
                double Db = 2 * dot(B - A, dd);
                double margin = 2 * trim_eps_ * scale_;
                if (opt_.tie_margin > 0) {
                    Vec2 xm = lerp(A, B, 0.5 * (w.lo + w.hi));
                    double dn = norm(xm - w.s0), dold = norm(xm - o.s0);
                    if (dn < dold + opt_.tie_margin) {
                        Vec2 un = normalized(xm - w.s0), uo = normalized(xm - o.s0);
                        double ang = std::acos(std::clamp(dot(un, uo), -1.0, 1.0));
                        if (ang >= opt_.tie_angle) continue;  // keep a distinct approach
                    }
                }
                // keep the region where D <= margin, but compare only on the
                // parameter overlap: beyond its own interval the resident has
                // no straight claim, and a phantom value there could delete a
                // live bundle over a region the resident never covers
                double ps = std::max(w.lo, o.lo), pe = std::min(w.hi, o.hi);
                if (pe - ps <= 0) continue;
                double Dps = Da + Db * ps, Dpe = Da + Db * pe;
                if (Dps <= margin && Dpe <= margin) continue;
                double edge_eps = 1e-14;
                bool at_lo = ps <= w.lo + edge_eps, at_hi = pe >= w.hi - edge_eps;
                if (Dps > margin && Dpe > margin) {
                    if (at_lo && at_hi) return;
                    if (at_lo) w.lo = pe;
                    else if (at_hi) w.hi = ps;
                    // an interior bite would split the window; keep it whole
                } else if (Dps > margin) {
                    if (at_lo) w.lo = std::max(w.lo, (margin - Da) / Db);
                } else {
                    if (at_hi) w.hi = std::min(w.hi, (margin - Da) / Db);
                }
                if (w.hi - w.lo < 1e-14) return;
            }
        }
        w.key = window_min_dist(w);
        if (w.key > opt_.radius_limit) return;
        // no pruning against vertex relays here: a relay can undercut a
        // window on its entry interval, yet the region behind the window
        // would then inherit edge-walk values that drift well past e_field.
        // geodesics on a convex surface never bend at a vertex, so every
        // live bundle must stay represented by windows.
        Vec2 E0 = lerp(A, B, w.lo), E1 = lerp(A, B, w.hi);
        if (opt_.has_target) {
            Vec3 p0 = f_.to3d(w.face, E0), p1 = f_.to3d(w.face, E1);
            double rest = std::sqrt(point_segment_dist2(target_xyz_, p0, p1));
            if (w.key + rest > best_u_ + 10 * trim_eps_) return;
            if (w.face == opt_.target.face) {
                Vec2 x = f_.to_frame(opt_.target);
                if (f_.covers(w, x, f_.cone_slack_))
                    best_u_ = std::min(best_u_, f_.wdist(w, x));
            }
        }
        if (f_.wins.size() >= opt_.max_windows)
            throw std::runtime_error("geodesic: window budget exceeded");
        int wid = int(f_.wins.size());
        f_.wins.push_back(w);
        f_.ewins[he].push_back(wid);
        heap_.push({w.key, wid});
    }

    void process(int wid) {
        Window w = f_.wins[wid];  // copy, wins may reallocate
        int fi = w.face, k = w.edge;
        Vec2 A = f_.c2d[fi][k], B = f_.c2d[fi][(k + 1) % 3], C = f_.c2d[fi][(k + 2) % 3];
        Vec2 E0 = lerp(A, B, w.lo), E1 = lerp(A, B, w.hi);
        if (w.lo <= 1e-12) update_vertex(m_.F[fi][k], f_.wdist(w, A), wid, w.comp);
        if (w.hi >= 1 - 1e-12) update_vertex(m_.F[fi][(k + 1) % 3], f_.wdist(w, B), wid, w.comp);
        if (f_.covers(w, C, f_.cone_slack_))
            update_vertex(m_.F[fi][(k + 2) % 3], f_.wdist(w, C), wid, w.comp);

        for (int step = 1; step <= 2; step++) {
            int mth = (k + step) % 3;
            Vec2 A2 = f_.c2d[fi][mth], B2 = f_.c2d[fi][(mth + 1) % 3];
            double u0 = 0.0, u1 = 1.0;
            bool empty = false;
            auto clip_halfplane = [&](double ca, double cb) {
                // keep { u : ca + u*cb >= -slack }; slack must stay zero here:
                // any admission beyond the exact cone compounds hop after hop,
                // and a geometrically empty sliver that survives at slack width
                // can spiral around the mesh until its source image is bogus
                double sl = 0.0;
                if (std::abs(cb) < 1e-300) {
                    if (ca < -sl) empty = true;
                    return;
                }
                double ustar = (-sl - ca) / cb;
                if (cb > 0) u0 = std::max(u0, ustar);
                else u1 = std::min(u1, ustar);
            };
            if (w.kind == 0) {
                double om = cross(E0 - w.s0, E1 - w.s0);
                if (std::abs(om) < 1e-14 * scale_ * scale_) continue;  // degenerate cone
                double sg = om > 0 ? 1.0 : -1.0;
                clip_halfplane(sg * cross(E0 - w.s0, A2 - w.s0), sg * cross(E0 - w.s0, B2 - A2));
                clip_halfplane(sg * cross(A2 - w.s0, E1 - w.s0), sg * cross(B2 - A2, E1 - w.s0));
            } else {
                Vec2 t = normalized(w.s1 - w.s0);
                Vec2 nh = perp(t);
                double len = norm(w.s1 - w.s0);
                double lsl = 1e-12 * scale_;
                // strip: 0 <= dot(X-s0,t) <= len, forward dot(X-s0,n) >= 0
                double f0 = dot(E0 - w.s0, t), f1 = dot(E1 - w.s0, t);
                double flo = std::max(0.0, std::min(f0, f1)), fhi = std::min(len, std::max(f0, f1));
                if (fhi - flo < -lsl) continue;
                double ca = dot(A2 - w.s0, t) - flo, cb = dot(B2 - A2, t);
                clip_halfplane(ca * scale_, cb * scale_);
                double ca2 = fhi - dot(A2 - w.s0, t), cb2 = -dot(B2 - A2, t);
                clip_halfplane(ca2 * scale_, cb2 * scale_);
                clip_halfplane(dot(A2 - w.s0, nh) * scale_, dot(B2 - A2, nh) * scale_);
            }
            if (empty || u1 - u0 < 1e-14) continue;

            Window ch;
            ch.kind = w.kind;
            const Rigid2& T = f_.xf[fi][mth];
            ch.face = m_.neighbor(fi, mth);
            ch.edge = std::int8_t(m_.neighbor_edge(fi, mth));
            ch.lo = 1.0 - u1;
            ch.hi = 1.0 - u0;
            ch.parent = wid;
            ch.comp = w.comp;
            if (w.kind == 0) {
                ch.s0 = ch.s1 = T(w.s0);
            } else {
                // narrow the band to the feet of the covered sub-interval
                Vec2 t = normalized(w.s1 - w.s0);
                double len = norm(w.s1 - w.s0);
                Vec2 X0 = lerp(A2, B2, u0), X1 = lerp(A2, B2, u1);
                double fo0 = dot(X0 - w.s0, t), fo1 = dot(X1 - w.s0, t);
                double flo = std::clamp(std::min(fo0, fo1), 0.0, len);
                double fhi = std::clamp(std::max(fo0, fo1), 0.0, len);
                if (fhi - flo < 1e-14 * scale_) continue;
                ch.s0 = T(w.s0 + t * flo);
                ch.s1 = T(w.s0 + t * fhi);
            }
            finish_and_push(ch);
        }
    }
};

inline std::vector<int> home_faces(const ConvexSurfaceMesh& m, const SurfacePoint& sp) {
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

}  // namespace geo_detail

inline DistanceField multi_source_field(const ConvexSurfaceMesh& mesh, const SourceSet& K,
                                        const FieldOptions& opt = {}) {
    if (K.n_components() == 0) throw std::invalid_argument("empty source set");
    DistanceField f;
    geo_detail::Propagator prop(mesh, K, opt, f);
    prop.run();
    return f;
}

// ---- tracing ----

inline GeodesicPath DistanceField::trace_candidate(const SurfacePoint& q, int type, int ref) const {
    GeodesicPath path;
    Vec2 x = to_frame(q);
    Vec3 q3 = m->point(q);

    auto finish = [&](std::vector<Vec3> pts, std::vector<SurfacePoint> sps, std::vector<int> segf,
                      int comp) {
        // collapse zero-length segments (queries sitting on crossings)
        double tiny = 1e-14 * m->bbox_diag();
        for (size_t i = 1; i < pts.size();) {
            if (dist(pts[i], pts[i - 1]) < tiny && pts.size() > 1) {
                pts.erase(pts.begin() + i);
                sps.erase(sps.begin() + std::min(i, sps.size() - 1));
                if (!segf.empty()) segf.erase(segf.begin() + std::min(i - 1, segf.size() - 1));
            } else {
                i++;
            }
        }
        path.xyz = std::move(pts);
        path.points = std::move(sps);
        path.seg_face = std::move(segf);
        path.component = comp;
        path.length = 0;
        for (size_t i = 0; i + 1 < path.xyz.size(); i++)
            path.length += dist(path.xyz[i], path.xyz[i + 1]);
        path.lower = std::max(0.0, path.length * (1 - 4e-12) - 1e-15);
        return path;
    };

    auto surface_point_on = [&](int face, const Vec3& p) {
        SurfacePoint sp;
        sp.face = face;
        auto bc = m->barycentric(face, p);
        for (double& b : bc) b = std::max(0.0, b);
        double s = bc[0] + bc[1] + bc[2];
        sp.bary = {bc[0] / s, bc[1] / s, bc[2] / s};
        return sp;
    };

    if (type == 2) {  // direct inside the query face
        const auto& ds = fsrc[q.face];
        for (const auto& d : ds) {
            if (d.comp != ref) continue;
            Vec2 s;
            if (d.kind == 2) s = x;
            else if (d.kind == 0) s = d.a;
            else {
                Vec2 ab = d.b - d.a;
                double t = norm2(ab) > 0 ? clamp01(dot(x - d.a, ab) / norm2(ab)) : 0;
                s = d.a + ab * t;
            }
            Vec3 s3 = to3d(q.face, s);
            return finish({s3, q3}, {surface_point_on(q.face, s3), q}, {q.face}, d.comp);
        }
        throw std::runtime_error("trace: direct source not found");
    }

    if (type == 1) {  // relay through a vertex, then a chord inside the face
        int v = ref;
        std::vector<Vec3> pts;
        std::vector<SurfacePoint> sps;
        std::vector<int> segf;
        if (varg[v] >= 0) {
            // the realizing window lives on a specific incident face; the head
            // query must be framed there, not on vertex_point's default face
            int wf = wins[varg[v]].face;
            SurfacePoint vq;
            vq.face = wf;
            for (int k = 0; k < 3; k++) vq.bary[k] = (m->F[wf][k] == v) ? 1.0 : 0.0;
            GeodesicPath head = trace_candidate(vq, 0, varg[v]);
            pts = std::move(head.xyz);
            sps = std::move(head.points);
            segf = std::move(head.seg_face);
        } else {
            // edge-walk chain back to a vertex whose value a window or a
            // seed chord realizes; each hop telescopes vdist exactly
            std::vector<int> chainv = {v};
            while (vpar[chainv.back()] >= 0) chainv.push_back(vpar[chainv.back()]);
            std::reverse(chainv.begin(), chainv.end());
            int v0 = chainv[0];
            size_t i0 = 0;
            if (varg[v0] >= 0) {
                // the chain bottoms out on a window-realized vertex: splice
                // that window's own trace in as the head
                int wf = wins[varg[v0]].face;
                SurfacePoint vq;
                vq.face = wf;
                for (int k = 0; k < 3; k++) vq.bary[k] = (m->F[wf][k] == v0) ? 1.0 : 0.0;
                GeodesicPath head = trace_candidate(vq, 0, varg[v0]);
                pts = std::move(head.xyz);
                sps = std::move(head.points);
                segf = std::move(head.seg_face);
                i0 = 1;  // head already ends at v0
            } else if (vdist[v0] > 0 && vcomp[v0] >= 0 && size_t(vcomp[v0]) < comp_xyz.size()) {
                Vec3 s3 = comp_xyz[vcomp[v0]];  // seed was a chord from the source image
                int hf = face_near(v0, s3);
                pts.push_back(s3);
                sps.push_back(surface_point_on(hf, s3));
                segf.push_back(hf);
            }
            for (size_t i = i0; i < chainv.size(); i++) {
                pts.push_back(m->V[chainv[i]]);
                sps.push_back(m->vertex_point(chainv[i]));
                if (i > 0) segf.push_back(common_face(chainv[i - 1], chainv[i]));
            }
        }
        if (pts.empty()) {
            pts.push_back(m->V[v]);
            sps.push_back(m->vertex_point(v));
        }
        pts.push_back(q3);
        sps.push_back(q);
        segf.push_back(q.face);
        return finish(std::move(pts), std::move(sps), std::move(segf), vcomp[v]);
    }

    // window chain
    std::vector<int> chain;
    for (int id = ref; id >= 0; id = wins[id].parent) chain.push_back(id);
    std::vector<Vec3> rev_pts = {q3};
    std::vector<SurfacePoint> rev_sps = {q};
    std::vector<int> rev_segf;
    Vec2 cur = x;
    int comp = wins[ref].comp;
    for (size_t ci = 0; ci < chain.size(); ci++) {
        const Window& w = wins[chain[ci]];
        Vec2 A = c2d[w.face][w.edge], B = c2d[w.face][(w.edge + 1) % 3];
        Vec2 src;
        if (w.kind == 0) src = w.s0;
        else {
            Vec2 t = normalized(w.s1 - w.s0);
            src = w.s0 + t * dot(cur - w.s0, t);
        }
        double den = cross(cur - src, B - A);
        double u = std::abs(den) < 1e-300 ? 0.5 * (w.lo + w.hi)
                                          : cross(cur - src, A - src) / -den;
        u = std::clamp(u, std::max(0.0, w.lo), std::min(1.0, w.hi));
        Vec2 cx = lerp(A, B, u);
        Vec3 cx3 = to3d(w.face, cx);
        rev_pts.push_back(cx3);
        rev_sps.push_back(surface_point_on(w.face, cx3));
        rev_segf.push_back(w.face);
        if (w.parent >= 0) {
            const Window& p = wins[w.parent];
            int mth = -1;
            for (int e = 0; e < 3; e++)
                if (m->neighbor(p.face, e) == w.face && m->neighbor_edge(p.face, e) == w.edge)
                    mth = e;
            if (mth < 0) throw std::runtime_error("trace: broken parent link");
            cur = lerp(c2d[p.face][mth], c2d[p.face][(mth + 1) % 3], 1.0 - u);
        } else {
            // root: connect to the physical source
            if (w.kind == 0) {
                // the source lives in the face the root window was emitted from,
                // across the entry edge; halfedge transforms compose to identity
                int sf = m->neighbor(w.face, w.edge);
                Vec2 s_in_sf = xf[w.face][w.edge](w.s0);
                Vec3 src3 = to3d(sf, s_in_sf);
                rev_pts.push_back(src3);
                rev_sps.push_back(surface_point_on(sf, src3));
                rev_segf.push_back(sf);
            } else {
                Vec3 src3 = to3d(w.face, src);
                rev_pts.push_back(src3);
                rev_sps.push_back(surface_point_on(w.face, src3));
                rev_segf.push_back(w.face);
            }
        }
    }
    std::reverse(rev_pts.begin(), rev_pts.end());
    std::reverse(rev_sps.begin(), rev_sps.end());
    std::reverse(rev_segf.begin(), rev_segf.end());
    return finish(std::move(rev_pts), std::move(rev_sps), std::move(rev_segf), comp);
}

inline std::vector<int> DistanceField::signature_of(int type, int ref, int qface) const {
    std::vector<int> sig;
    if (type == 2) {
        sig = {-1000 - ref, qface};
        return sig;
    }
    if (type == 1) {
        int v = ref;
        if (varg[v] >= 0) sig = signature_of(0, varg[v], -1);
        sig.push_back(3 * m->n_faces() + v);
        sig.push_back(qface);
        return sig;
    }
    for (int id = ref; id >= 0; id = wins[id].parent)
        sig.push_back(3 * wins[id].face + wins[id].edge);
    std::reverse(sig.begin(), sig.end());
    if (qface >= 0) sig.push_back(qface);
    return sig;
}

inline std::vector<PathWitness> DistanceField::witnesses(const SurfacePoint& q,
                                                         double eps_tie) const {
    // a query on an edge or a vertex is reachable through every incident face,
    // so candidates are gathered from all of them
    struct Cand { double d; int type, ref; SurfacePoint sp; };
    std::vector<Cand> cands;
    double best = kInf;
    Vec3 p3 = m->point(q);
    for (int hf : geo_detail::home_faces(*m, q)) {
        SurfacePoint sq;
        sq.face = hf;
        auto bc = m->barycentric(hf, p3);
        for (double& b : bc) b = std::max(0.0, b);
        double bs = bc[0] + bc[1] + bc[2];
        sq.bary = {bc[0] / bs, bc[1] / bs, bc[2] / bs};
        Vec2 x = to_frame(sq);
        query_candidates(hf, x, [&](double d, int type, int ref) {
            cands.push_back({d, type, ref, sq});
            best = std::min(best, d);
        });
    }
    // at equal length a straight candidate outranks a vertex relay, so ties
    // between a geodesic and the relay shadowing it keep the geodesic
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d != b.d) return a.d < b.d;
        return (a.type == 1) < (b.type == 1);
    });

    // one geodesic can reach the heap as several candidates (a window and its
    // child across the final edge, a vertex relay and the window feeding it),
    // so duplicates are recognized by the traced curve itself
    auto sample_at = [&](const GeodesicPath& p, double s) {
        const auto& P = p.xyz;
        for (size_t i = 0; i + 1 < P.size(); i++) {
            double seg = dist(P[i], P[i + 1]);
            if (s <= seg || i + 2 == P.size()) return lerp(P[i], P[i + 1], seg > 0 ? std::clamp(s / seg, 0.0, 1.0) : 0.0);
            s -= seg;
        }
        return P.back();
    };
    double dup_tol = 1e-6 * field_scale() + 4 * e_field;
    std::vector<PathWitness> out;
    for (const Cand& c : cands) {
        if (c.d > best + eps_tie) break;
        GeodesicPath path = trace_candidate(c.sp, c.type, c.ref);
        bool dup = false;
        for (const PathWitness& w : out) {
            double sep = 0;
            for (int k = 0; k <= 8; k++) {
                double t = k / 8.0;
                sep = std::max(sep, dist(sample_at(path, t * path.length),
                                         sample_at(w.path, t * w.path.length)));
            }
            if (sep < dup_tol) { dup = true; break; }
        }
        if (dup) continue;
        PathWitness wt;
        wt.length = c.d;
        wt.via_vertex = c.type == 1 ? c.ref : -1;
        wt.signature = signature_of(c.type, c.ref, c.sp.face);
        wt.path = std::move(path);
        wt.component = wt.path.component;
        wt.endpoint = wt.path.xyz.front();
        size_t n = wt.path.xyz.size();
        if (n >= 2 && dist(wt.path.xyz[n - 1], wt.path.xyz[n - 2]) > 0)
            wt.arrival_dir = normalized(wt.path.xyz[n - 1] - wt.path.xyz[n - 2]);
        out.push_back(std::move(wt));
    }
    return out;
}

inline GeodesicPath DistanceField::trace_best(const SurfacePoint& q) const {
    Vec2 x = to_frame(q);
    double best = kInf;
    int bt = -1, br = -1;
    query_candidates(q.face, x, [&](double d, int type, int ref) {
        if (d < best) { best = d; bt = type; br = ref; }
    });
    if (bt < 0) throw std::runtime_error("field: query point unreachable");
    return trace_candidate(q, bt, br);
}

// ---- point-to-point ----

namespace geo_detail {

// edge-subdivision graph with a certified lower bound: a shortest surface
// path on a convex polyhedron crosses each mesh edge at most once, so
// snapping its crossings to lattice nodes inflates it by at most the node
// spacing per crossed edge; subtracting that inflation (only for edges the
// path could cross at all) from the graph optimum bounds the true length
// from below
inline GeodesicPath graph_path(const ConvexSurfaceMesh& m, const SurfacePoint& a,
                               const SurfacePoint& b, double tau) {
    auto medges = m.edges();
    std::unordered_map<long long, int> eid;
    for (size_t i = 0; i < medges.size(); i++)
        eid[(long long)medges[i][0] * m.n_vertices() + medges[i][1]] = int(i);
    auto edge_of = [&](int va, int vb) {
        if (va > vb) std::swap(va, vb);
        return eid.at((long long)va * m.n_vertices() + vb);
    };

    Vec3 a3 = m.point(a), b3 = m.point(b);
    GeodesicPath best;
    for (int sub = 8; sub <= 256; sub *= 2) {
        int nV = m.n_vertices();
        int nN = nV + int(medges.size()) * sub + 2;
        if (nN > 400'000) break;
        std::vector<Vec3> pos(nN);
        for (int v = 0; v < nV; v++) pos[v] = m.V[v];
        for (size_t e = 0; e < medges.size(); e++) {
            Vec3 va = m.V[medges[e][0]], vb = m.V[medges[e][1]];
            for (int j = 0; j < sub; j++)
                pos[nV + int(e) * sub + j] = lerp(va, vb, double(j + 1) / (sub + 1));
        }
        int na = nN - 2, nb = nN - 1;
        pos[na] = a3;
        pos[nb] = b3;

        std::vector<std::vector<std::pair<int, int>>> adj(nN);  // (node, face)
        auto face_nodes = [&](int f) {
            std::vector<int> ns = {m.F[f][0], m.F[f][1], m.F[f][2]};
            for (int k = 0; k < 3; k++) {
                int e = edge_of(m.F[f][k], m.F[f][(k + 1) % 3]);
                for (int j = 0; j < sub; j++) ns.push_back(nV + e * sub + j);
            }
            return ns;
        };
        for (int f = 0; f < m.n_faces(); f++) {
            auto ns = face_nodes(f);
            for (size_t i = 0; i < ns.size(); i++)
                for (size_t j = i + 1; j < ns.size(); j++) {
                    adj[ns[i]].push_back({ns[j], f});
                    adj[ns[j]].push_back({ns[i], f});
                }
        }
        for (int hf : home_faces(m, a))
            for (int n : face_nodes(hf)) {
                adj[na].push_back({n, hf});
                adj[n].push_back({na, hf});
            }
        for (int hf : home_faces(m, b)) {
            for (int n : face_nodes(hf)) {
                adj[nb].push_back({n, hf});
                adj[n].push_back({nb, hf});
            }
            for (int ha : home_faces(m, a))
                if (ha == hf) {
                    adj[na].push_back({nb, hf});
                    adj[nb].push_back({na, hf});
                }
        }

        auto dijkstra = [&](std::vector<int>* par, std::vector<int>* parf) {
            std::vector<double> d(nN, kInf);
            std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                                std::greater<>> q;
            d[na] = 0;
            q.push({0, na});
            while (!q.empty()) {
                auto [dd, u] = q.top();
                q.pop();
                if (dd > d[u]) continue;
                if (u == nb) break;
                for (auto [v, f] : adj[u]) {
                    double w = dist(pos[u], pos[v]);
                    if (d[u] + w < d[v]) {
                        d[v] = d[u] + w;
                        if (par) (*par)[v] = u;
                        if (parf) (*parf)[v] = f;
                        q.push({d[v], v});
                    }
                }
            }
            return d[nb];
        };
        std::vector<int> par(nN, -1), parf(nN, -1);
        double U = dijkstra(&par, &parf);
        // every point x of the true path satisfies |a-x|+|x-b| <= true <= U,
        // so only edges meeting that ellipsoid can be crossed; the nearest
        // lattice node sits within h_e/2 of the crossing, moving each chord
        // sum by at most h_e in total
        double infl = 0.0;
        for (size_t e = 0; e < medges.size(); e++) {
            const Vec3 &va = m.V[medges[e][0]], &vb = m.V[medges[e][1]];
            double he = dist(va, vb) / (sub + 1);
            double cs = std::min(dist(a3, va) + dist(va, b3), dist(a3, vb) + dist(vb, b3));
            for (int j = 0; j < sub; j++) {
                const Vec3& nj = pos[nV + int(e) * sub + j];
                cs = std::min(cs, dist(a3, nj) + dist(nj, b3));
            }
            if (cs <= U + he) infl += he;
        }
        double L = std::max(dist(a3, b3), U - infl);
        L = std::min(L, U);

        GeodesicPath p;
        p.method = "refined-graph";
        p.length = U;
        p.lower = L;
        for (int u = nb; u >= 0; u = par[u]) {
            p.xyz.push_back(pos[u]);
            if (par[u] >= 0) p.seg_face.push_back(parf[u]);
            if (u == na) break;
        }
        std::reverse(p.xyz.begin(), p.xyz.end());
        std::reverse(p.seg_face.begin(), p.seg_face.end());
        for (size_t i = 0; i < p.xyz.size(); i++) {
            int f = i < p.seg_face.size() ? p.seg_face[i] : p.seg_face.back();
            auto bc = m.barycentric(f, p.xyz[i]);
            for (double& t : bc) t = std::max(0.0, t);
            double s = bc[0] + bc[1] + bc[2];
            p.points.push_back({f, {bc[0] / s, bc[1] / s, bc[2] / s}});
        }
        best = p;
        if (U <= 0 || (U - L) <= tau * U) return best;
    }
    throw std::runtime_error("graph method: could not certify the requested tau within budget");
}

}  // namespace geo_detail

inline GeodesicPath shortest_path(const ConvexSurfaceMesh& m, const SurfacePoint& a,
                                  const SurfacePoint& b, double tau = 1e-9,
                                  const std::string& method = "exact") {
    if (!(tau >= 1e-13)) throw std::invalid_argument("tau below the certification floor");
    if (method == "graph") return geo_detail::graph_path(m, a, b, tau);
    if (method != "exact") throw std::invalid_argument("unknown geodesic method: " + method);

    Vec3 a3 = m.point(a), b3 = m.point(b);
    if (dist(a3, b3) < 1e-15 * m.bbox_diag()) {
        GeodesicPath p;
        p.xyz = {a3};
        p.points = {a};
        return p;
    }
    FieldOptions opt;
    opt.has_target = true;
    opt.target = b;
    opt.tau_geo = tau;
    DistanceField f = multi_source_field(m, SourceSet::one_point(a), opt);
    GeodesicPath p = f.trace_best(b);
    double d = f.eval(b);
    p.length = std::max(p.length, d);
    p.lower = std::max(dist(a3, b3), d - f.e_field);
    p.lower = std::min(p.lower, p.length);
    if (p.length > 0 && (p.length - p.lower) > tau * p.length)
        throw std::runtime_error("exact method: certification drifted above tau");
    return p;
}

inline double geodesic_distance(const ConvexSurfaceMesh& m, const SurfacePoint& a,
                                const SurfacePoint& b, double tau = 1e-9) {
    return shortest_path(m, a, b, tau).length;
}

inline SurfacePoint path_point_at(const ConvexSurfaceMesh& m, const GeodesicPath& p, double s) {
    if (p.xyz.empty()) throw std::invalid_argument("empty path");
    if (p.xyz.size() == 1) return p.points[0];
    s = std::clamp(s, 0.0, p.length);
    double acc = 0;
    for (size_t i = 0; i + 1 < p.xyz.size(); i++) {
        double seg = dist(p.xyz[i], p.xyz[i + 1]);
        if (acc + seg >= s - 1e-300 || i + 2 == p.xyz.size()) {
            double t = seg > 0 ? clamp01((s - acc) / seg) : 0.0;
            Vec3 x = lerp(p.xyz[i], p.xyz[i + 1], t);
            int f = i < p.seg_face.size() ? p.seg_face[i] : p.points[i].face;
            auto bc = m.barycentric(f, x);
            for (double& v : bc) v = std::max(0.0, v);
            double sum = bc[0] + bc[1] + bc[2];
            return {f, {bc[0] / sum, bc[1] / sum, bc[2] / sum}};
        }
        acc += seg;
    }
    return p.points.back();
}

inline SurfacePoint path_midpoint(const ConvexSurfaceMesh& m, const GeodesicPath& p) {
    return path_point_at(m, p, 0.5 * p.length);
}

// sampled two-sided diameter bound: exact pairwise distances on a sample net,
// then a covering radius blow-up for the unsampled remainder
inline DiameterReport intrinsic_diameter(const ConvexSurfaceMesh& m, int n_samples = 200,
                                         double tau = 1e-9) {
    std::vector<SurfacePoint> S;
    for (int v = 0; v < m.n_vertices(); v++) S.push_back(m.vertex_point(v));
    double R = m.bbox_diag();
    // spread the remaining budget as per-face barycentric lattices, quota by
    // area, so the covering radius shrinks like 1/sqrt(n_samples) everywhere
    int extra = std::max(0, n_samples - int(S.size()));
    if (extra > 0) {
        double atot = 0;
        for (int f = 0; f < m.n_faces(); f++) atot += m.face_area(f);
        for (int f = 0; f < m.n_faces(); f++) {
            double quota = extra * m.face_area(f) / atot;
            int r = std::max(1, int(std::lround(std::sqrt(2.0 * quota))) - 1);
            for (int i = 0; i <= r; i++)
                for (int j = 0; i + j <= r; j++) {
                    SurfacePoint sp;
                    sp.face = f;
                    sp.bary = {double(i) / r, double(j) / r, double(r - i - j) / r};
                    Vec3 p = m.point(sp);
                    bool dup = false;
                    for (const auto& t : S)
                        if (dist(m.point(t), p) < 1e-9 * R) { dup = true; break; }
                    if (!dup) S.push_back(sp);
                }
        }
    }
    int n = int(S.size());
    FieldOptions fo;
    fo.tau_geo = tau;

    auto row_of = [&](int i) {
        DistanceField f = multi_source_field(m, SourceSet::one_point(S[i]), fo);
        std::vector<double> row(n);
        for (int j = 0; j < n; j++) row[j] = f.eval(S[j]);
        return row;
    };

    DiameterReport rep;
    rep.n_samples = n;
    std::vector<std::vector<double>> base;
    std::vector<int> base_id;
    int bi = 0;
    for (int k = 0; k < std::min(6, n); k++) {
        base.push_back(row_of(bi));
        base_id.push_back(bi);
        const auto& row = base.back();
        int arg = 0;
        for (int j = 0; j < n; j++) {
            if (row[j] > rep.lower) {
                rep.lower = row[j];
                rep.a = S[bi];
                rep.b = S[j];
            }
            if (row[j] > row[arg]) arg = j;
        }
        bi = arg;
        bool seen = false;
        for (int id : base_id)
            if (id == bi) seen = true;
        if (seen) break;
    }
    std::vector<double> pot(n, 0.0);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            double ub = kInf;
            for (const auto& row : base) ub = std::min(ub, row[i] + row[j]);
            pot[i] = std::max(pot[i], ub);
        }
    std::vector<int> order(n);
    for (int i = 0; i < n; i++) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return pot[x] > pot[y]; });
    double residual_pot = 0.0;
    int budget = 64;
    for (int oi = 0; oi < n; oi++) {
        int i = order[oi];
        if (pot[i] <= rep.lower * (1 + 1e-12)) break;
        if (budget-- <= 0) {
            residual_pot = pot[i];
            break;
        }
        auto row = row_of(i);
        for (int j = 0; j < n; j++)
            if (row[j] > rep.lower) {
                rep.lower = row[j];
                rep.a = S[i];
                rep.b = S[j];
            }
    }

    // covering radius: the field of all samples, certified on a face lattice.
    // Within one planar face the surface metric is the plane metric, so a
    // point of a lattice cell is no farther from the samples than the best
    // cell corner's value plus the in-plane reach of that corner.
    SourceSet all;
    all.points = S;
    DistanceField cov = multi_source_field(m, all, fo);
    const int sdiv = 12;
    double h = 0;
    for (int f = 0; f < m.n_faces(); f++) {
        auto node = [&](int i, int j) {  // bary (i, j, sdiv-i-j)/sdiv
            SurfacePoint sp;
            sp.face = f;
            sp.bary = {double(i) / sdiv, double(j) / sdiv, double(sdiv - i - j) / sdiv};
            return sp;
        };
        std::vector<std::vector<double>> val(sdiv + 1, std::vector<double>(sdiv + 1, kInf));
        std::vector<std::vector<Vec3>> np(sdiv + 1, std::vector<Vec3>(sdiv + 1));
        for (int i = 0; i <= sdiv; i++)
            for (int j = 0; i + j <= sdiv; j++) {
                SurfacePoint sp = node(i, j);
                val[i][j] = cov.eval(sp);
                np[i][j] = m.point(sp);
            }
        auto cell = [&](std::array<int, 2> u, std::array<int, 2> v, std::array<int, 2> w) {
            double ub = kInf;
            std::array<std::array<int, 2>, 3> c = {u, v, w};
            for (int k = 0; k < 3; k++) {
                const Vec3& pk = np[c[k][0]][c[k][1]];
                double reach = 0;
                for (int l = 0; l < 3; l++)
                    reach = std::max(reach, dist(pk, np[c[l][0]][c[l][1]]));
                ub = std::min(ub, val[c[k][0]][c[k][1]] + reach);
            }
            h = std::max(h, ub);
        };
        for (int i = 0; i < sdiv; i++)
            for (int j = 0; i + j < sdiv; j++) {
                cell({i, j}, {i + 1, j}, {i, j + 1});
                if (i + j + 1 < sdiv) cell({i + 1, j}, {i + 1, j + 1}, {i, j + 1});
            }
    }
    rep.h_cover = h;
    rep.upper = std::max(rep.lower, residual_pot) + 2 * h + 4 * cov.e_field;
    return rep;
}

}  // namespace convexgeo
