#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "convexgeo/geodesic.hpp"
#include "convexgeo/mesh.hpp"

namespace convexgeo {

// r-boundary of the source set: chains of surface points where the distance
// field crosses r. Chains are closed on a regular radius of a closed surface.
struct LevelSet {
    double r = 0.0;
    std::vector<std::vector<SurfacePoint>> polylines;
    std::vector<std::vector<Vec3>> xyz;  // same chains in world coordinates
    std::vector<bool> closed;
    double total_length = 0.0;
};

struct LevelSetTopology {
    int n_components = 0;
    std::vector<bool> closed;
    std::vector<double> lengths;
    std::vector<bool> simple;  // no self-intersection within the component
    bool all_closed = true;
    bool all_simple = true;
};

// surface point carrying two combinatorially distinct near-minimal curves
// back to the source set
struct ExoSample {
    SurfacePoint p;
    double d = 0.0;    // distance field value at p
    PathWitness w1, w2;
    double gap = 0.0;  // length difference of the two witnesses
    bool distinct_endpoints = false;  // feet apart in K, not only curves apart
};

struct ExoskeletonEstimate {
    std::vector<ExoSample> samples;
    double eps_tie = 0.0;
    double density = 0.0;
    int n_probed = 0;

    int n_ambiguous() const {
        int k = 0;
        for (const ExoSample& s : samples) k += s.distinct_endpoints ? 1 : 0;
        return k;
    }
};

namespace lsd {

// per-face barycentric lattices with canonical values on shared mesh edges,
// so the two faces of an edge always march against identical numbers
struct Lattice {
    int n = 0;
    std::vector<std::vector<double>> val;  // [face][i * (n + 1) + j], i + j <= n

    static SurfacePoint node_sp(int f, int i, int j, int n) {
        SurfacePoint sp;
        sp.face = f;
        sp.bary = {1.0 - double(i + j) / n, double(i) / n, double(j) / n};
        return sp;
    }
    double at(int f, int i, int j) const { return val[f][i * (n + 1) + j]; }
};

inline Lattice build_lattice(const DistanceField& field, int n) {
    const ConvexSurfaceMesh& m = *field.m;
    std::map<std::pair<int, int>, int> eid;
    for (int e = 0; e < m.n_edges(); e++)
        eid[{m.edges()[e][0], m.edges()[e][1]}] = e;

    Lattice L;
    L.n = n;
    L.val.assign(m.n_faces(), std::vector<double>((n + 1) * (n + 1), 0.0));
    std::vector<double> vert_val(m.n_vertices(), -1.0);
    std::map<std::pair<int, int>, double> edge_val;  // (eid, step from lower vertex)

    for (int f = 0; f < m.n_faces(); f++) {
        int v0 = m.F[f][0], v1 = m.F[f][1], v2 = m.F[f][2];
        for (int i = 0; i <= n; i++)
            for (int j = 0; i + j <= n; j++) {
                double& out = L.val[f][i * (n + 1) + j];
                auto ev = [&]() { return field.eval(Lattice::node_sp(f, i, j, n)); };
                int vert = -1;
                if (i == 0 && j == 0) vert = v0;
                else if (i == n) vert = v1;
                else if (j == n) vert = v2;
                if (vert >= 0) {
                    if (vert_val[vert] < 0) vert_val[vert] = ev();
                    out = vert_val[vert];
                    continue;
                }
                int a = -1, b = -1, k = -1;
                if (j == 0) { a = v0; b = v1; k = i; }
                else if (i == 0) { a = v0; b = v2; k = j; }
                else if (i + j == n) { a = v1; b = v2; k = j; }
                if (a >= 0) {
                    if (a > b) { std::swap(a, b); k = n - k; }
                    auto key = std::make_pair(eid.at({a, b}), k);
                    auto it = edge_val.find(key);
                    if (it == edge_val.end()) it = edge_val.emplace(key, ev()).first;
                    out = it->second;
                    continue;
                }
                out = ev();
            }
    }
    return L;
}

inline LevelSet extract_on_lattice(const DistanceField& field, const Lattice& L, double r) {
    const ConvexSurfaceMesh& m = *field.m;
    const int n = L.n;
    std::map<std::pair<int, int>, int> eid;
    for (int e = 0; e < m.n_edges(); e++)
        eid[{m.edges()[e][0], m.edges()[e][1]}] = e;

    // crossings keyed so a sub-edge along a mesh edge resolves to the same id
    // from both incident faces
    std::map<std::array<int, 4>, int> xid;
    std::vector<SurfacePoint> xsp;
    std::vector<Vec3> xyz;
    std::vector<std::array<int, 2>> segs;

    auto refine = [&](const SurfacePoint& A, const SurfacePoint& B, bool posA) {
        auto at = [&](double t) {
            SurfacePoint q;
            q.face = A.face;
            for (int k = 0; k < 3; k++) q.bary[k] = (1 - t) * A.bary[k] + t * B.bary[k];
            return q;
        };
        double lo = 0, hi = 1;
        for (int it = 0; it < 30; it++) {
            double mid = 0.5 * (lo + hi);
            bool pos = field.eval(at(mid)) > r;
            (pos == posA ? lo : hi) = mid;
        }
        return at(0.5 * (lo + hi));
    };

    auto crossing = [&](int f, int i0, int j0, int i1, int j1) {
        // the two sub-triangles sharing a sub-edge visit it in opposite
        // orders, so the key is built on the lexicographic orientation
        if (std::make_pair(i0, j0) > std::make_pair(i1, j1)) {
            std::swap(i0, i1);
            std::swap(j0, j1);
        }
        std::array<int, 4> key{1 + f, i0, j0, (i1 - i0) * 3 + (j1 - j0)};
        int v0 = m.F[f][0], v1 = m.F[f][1], v2 = m.F[f][2];
        int a = -1, b = -1, k = -1;
        if (j0 == 0 && j1 == 0) { a = v0; b = v1; k = std::min(i0, i1); }
        else if (i0 == 0 && i1 == 0) { a = v0; b = v2; k = std::min(j0, j1); }
        else if (i0 + j0 == n && i1 + j1 == n) { a = v1; b = v2; k = std::min(j0, j1); }
        if (a >= 0) {
            if (a > b) { std::swap(a, b); k = n - 1 - k; }
            key = {0, eid.at({a, b}), k, 0};
        }
        auto it = xid.find(key);
        if (it != xid.end()) return it->second;
        SurfacePoint A = Lattice::node_sp(f, i0, j0, n);
        SurfacePoint B = Lattice::node_sp(f, i1, j1, n);
        SurfacePoint X = refine(A, B, L.at(f, i0, j0) > r);
        int id = int(xsp.size());
        xsp.push_back(X);
        xyz.push_back(m.point(X));
        xid.emplace(key, id);
        return id;
    };

    auto march = [&](int f, std::array<int, 2> A, std::array<int, 2> B, std::array<int, 2> C) {
        bool pa = L.at(f, A[0], A[1]) > r;
        bool pb = L.at(f, B[0], B[1]) > r;
        bool pc = L.at(f, C[0], C[1]) > r;
        if (pa == pb && pb == pc) return;
        std::array<int, 2> xs{-1, -1};
        int cnt = 0;
        if (pa != pb) xs[cnt++] = crossing(f, A[0], A[1], B[0], B[1]);
        if (pb != pc) xs[cnt++] = crossing(f, B[0], B[1], C[0], C[1]);
        if (pa != pc && cnt < 2) xs[cnt++] = crossing(f, A[0], A[1], C[0], C[1]);
        segs.push_back({xs[0], xs[1]});
    };

    for (int f = 0; f < m.n_faces(); f++)
        for (int i = 0; i < n; i++)
            for (int j = 0; i + j < n; j++) {
                march(f, {i, j}, {i + 1, j}, {i, j + 1});
                if (i + j < n - 1) march(f, {i + 1, j}, {i + 1, j + 1}, {i, j + 1});
            }

    // stitch: every crossing on a closed surface meets exactly two segments,
    // so chains close up; open chains are kept defensively
    std::vector<std::vector<int>> at_x(xsp.size());
    for (int s = 0; s < int(segs.size()); s++) {
        at_x[segs[s][0]].push_back(s);
        at_x[segs[s][1]].push_back(s);
    }
    LevelSet ls;
    ls.r = r;
    std::vector<bool> used(segs.size(), false);
    for (int s0 = 0; s0 < int(segs.size()); s0++) {
        if (used[s0]) continue;
        std::vector<int> chain{segs[s0][0], segs[s0][1]};
        used[s0] = true;
        bool closed = false;
        for (int dir = 0; dir < 2; dir++) {
            for (;;) {
                int tail = chain.back();
                int next = -1;
                for (int s : at_x[tail])
                    if (!used[s]) { next = s; break; }
                if (next < 0) break;
                used[next] = true;
                chain.push_back(segs[next][0] == tail ? segs[next][1] : segs[next][0]);
            }
            if (chain.front() == chain.back() && chain.size() > 2) {
                closed = true;
                chain.pop_back();
                break;
            }
            std::reverse(chain.begin(), chain.end());
        }
        std::vector<SurfacePoint> pl;
        std::vector<Vec3> pl3;
        for (int c : chain) {
            pl.push_back(xsp[c]);
            pl3.push_back(xyz[c]);
        }
        for (size_t k = 0; k + 1 < pl3.size(); k++) ls.total_length += dist(pl3[k], pl3[k + 1]);
        if (closed && pl3.size() > 1) ls.total_length += dist(pl3.back(), pl3.front());
        ls.polylines.push_back(std::move(pl));
        ls.xyz.push_back(std::move(pl3));
        ls.closed.push_back(closed);
    }
    return ls;
}

inline double seg_seg_dist(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    // closest approach of two segments, clamped coordinate descent
    double s = 0.5, t = 0.5;
    for (int it = 0; it < 32; it++) {
        Vec3 p = lerp(c, d, t) - a, u = b - a;
        s = norm2(u) > 0 ? clamp01(dot(p, u) / norm2(u)) : 0.0;
        Vec3 q = lerp(a, b, s) - c, v = d - c;
        t = norm2(v) > 0 ? clamp01(dot(q, v) / norm2(v)) : 0.0;
    }
    return dist(lerp(a, b, s), lerp(c, d, t));
}

}  // namespace lsd

// marching-triangles extraction of the r-isoline over per-face lattices; the
// field is re-evaluated exactly while refining every emitted point, so the
// polylines sit on the true isoline up to the field certification error
inline LevelSet extract_level_set(const DistanceField& field, double r, int subdiv = 16) {
    if (!(r > 0)) throw std::invalid_argument("level set: r must be positive");
    if (subdiv < 1) throw std::invalid_argument("level set: subdivision must be positive");
    lsd::Lattice L = lsd::build_lattice(field, subdiv);
    return lsd::extract_on_lattice(field, L, r);
}

inline LevelSetTopology levelset_topology(const LevelSet& ls) {
    LevelSetTopology top;
    top.n_components = int(ls.polylines.size());
    top.closed = ls.closed;
    double sc = ls.r;
    for (const auto& pl : ls.xyz)
        for (const Vec3& p : pl) sc = std::max(sc, norm(p));
    double tol = 1e-9 * std::max(sc, 1e-30);

    struct Seg { Vec3 a, b; int comp; };
    std::vector<Seg> S;
    for (int c = 0; c < top.n_components; c++) {
        const auto& pl = ls.xyz[c];
        double len = 0;
        for (size_t k = 0; k + 1 < pl.size(); k++) {
            S.push_back({pl[k], pl[k + 1], c});
            len += dist(pl[k], pl[k + 1]);
        }
        if (ls.closed[c] && pl.size() > 1) {
            S.push_back({pl.back(), pl.front(), c});
            len += dist(pl.back(), pl.front());
        }
        top.lengths.push_back(len);
        top.simple.push_back(true);
    }
    for (size_t i = 0; i < S.size(); i++)
        for (size_t j = i + 1; j < S.size(); j++) {
            // touching endpoints are chain joints, not crossings
            double e = std::min({dist(S[i].a, S[j].a), dist(S[i].a, S[j].b),
                                 dist(S[i].b, S[j].a), dist(S[i].b, S[j].b)});
            if (e < tol) continue;
            if (lsd::seg_seg_dist(S[i].a, S[i].b, S[j].a, S[j].b) < tol) {
                top.all_simple = false;
                if (S[i].comp == S[j].comp) top.simple[S[i].comp] = false;
            }
        }
    for (bool c : top.closed) top.all_closed = top.all_closed && c;
    return top;
}

// quasi-uniform surface samples: per-face barycentric lattices with quotas
// proportional to area, shared boundary nodes deduplicated
inline std::vector<SurfacePoint> surface_sample_net(const ConvexSurfaceMesh& m, double density) {
    if (!(density > 0)) throw std::invalid_argument("sampling density must be positive");
    double atot = 0;
    for (int f = 0; f < m.n_faces(); f++) atot += m.face_area(f);
    std::vector<SurfacePoint> out;
    std::map<std::array<long long, 3>, bool> seen;
    double q = 1e-9 * m.bbox_diag();
    for (int f = 0; f < m.n_faces(); f++) {
        double quota = density * m.face_area(f);
        int r = std::max(1, int(std::lround(std::sqrt(2.0 * quota))));
        for (int i = 0; i <= r; i++)
            for (int j = 0; i + j <= r; j++) {
                SurfacePoint sp;
                sp.face = f;
                sp.bary = {1.0 - double(i + j) / r, double(i) / r, double(j) / r};
                Vec3 p = m.point(sp);
                std::array<long long, 3> key{(long long)std::llround(p.x / q),
                                             (long long)std::llround(p.y / q),
                                             (long long)std::llround(p.z / q)};
                if (seen.emplace(key, true).second) out.push_back(sp);
            }
    }
    return out;
}

// samples of the multijoined locus: surface points whose distance to K is
// realized by at least two combinatorially distinct near-minimal curves.
// Samples whose two curves also end at separated feet are additionally marked
// as ambiguous-locus candidates. eps_tie <= 0 picks ten times the field
// certification error; min_separation_angle optionally drops pairs arriving
// almost parallel.
inline ExoskeletonEstimate estimate_multijoined_locus(const ConvexSurfaceMesh& m,
                                                      const SourceSet& K, double density,
                                                      double eps_tie = 0.0,
                                                      double min_separation_angle = 0.0,
                                                      double tau_geo = 1e-9) {
    if (K.n_components() == 0)
        throw std::invalid_argument("exoskeleton: source set is empty");
    FieldOptions fo;
    fo.tau_geo = tau_geo;
    DistanceField field = multi_source_field(m, K, fo);
    ExoskeletonEstimate est;
    est.density = density;
    est.eps_tie = eps_tie > 0 ? eps_tie : 10.0 * field.e_field;
    double foot_tol = 1e-6 * field.field_scale() + 10.0 * field.e_field;

    // a candidate relayed through a strictly convex vertex is an upper-bound
    // path, not a locally minimal curve, so only straight candidates (and
    // relays whose vertex lies on K, which are single segments) can witness
    // multijoinedness
    auto genuine = [&field](const PathWitness& w) {
        return w.via_vertex < 0 || field.vdist[w.via_vertex] <= 10.0 * field.e_field;
    };

    for (const SurfacePoint& sp : surface_sample_net(m, density)) {
        est.n_probed++;
        double d = field.eval(sp);
        if (d <= 10.0 * field.e_field) continue;  // on K: only the trivial curve
        std::vector<PathWitness> wits;
        for (PathWitness& w : field.witnesses(sp, est.eps_tie))
            if (genuine(w)) wits.push_back(std::move(w));
        if (wits.size() < 2) continue;
        int pick = -1;
        for (size_t j = 1; j < wits.size(); j++) {
            bool distinct = wits[j].component != wits[0].component ||
                            wits[j].signature != wits[0].signature;
            if (!distinct) continue;
            double ca = std::clamp(dot(wits[j].arrival_dir, wits[0].arrival_dir), -1.0, 1.0);
            if (std::acos(ca) < min_separation_angle) continue;
            pick = int(j);
            break;
        }
        if (pick < 0) continue;
        ExoSample s;
        s.p = sp;
        s.d = d;
        s.w1 = wits[0];
        s.w2 = wits[pick];
        s.gap = wits[pick].length - wits[0].length;
        s.distinct_endpoints = s.w1.component != s.w2.component ||
                               dist(s.w1.endpoint, s.w2.endpoint) > foot_tol;
        est.samples.push_back(std::move(s));
    }
    return est;
}

// heuristic near-critical radius flagger: a radius is suspect when it sits
// within window of a sampled local maximum of the field, of a radius where
// the level-set component count changes, or of a value attained on the
// estimated multijoined locus. true = near-critical, false = regular.
inline std::vector<std::pair<double, bool>> scan_regular_values(const DistanceField& field,
                                                                const std::vector<double>& r_grid,
                                                                double window,
                                                                int subdiv = 12) {
    for (size_t i = 0; i + 1 < r_grid.size(); i++)
        if (!(r_grid[i] < r_grid[i + 1]))
            throw std::invalid_argument("scan: r grid must be increasing");
    for (double r : r_grid)
        if (!(r > 0)) throw std::invalid_argument("scan: radii must be positive");

    const ConvexSurfaceMesh& m = *field.m;
    lsd::Lattice L = lsd::build_lattice(field, subdiv);
    std::vector<std::pair<double, double>> crit;  // closed intervals of suspicion

    // (a) sampled local maxima: interior lattice nodes dominating their hex
    // neighborhood, plus the global maximum (it may sit on a vertex)
    double gmax = -kInf;
    for (int f = 0; f < m.n_faces(); f++)
        for (int i = 0; i <= subdiv; i++)
            for (int j = 0; i + j <= subdiv; j++) {
                double v = L.at(f, i, j);
                gmax = std::max(gmax, v);
                if (i == 0 || j == 0 || i + j == subdiv) continue;
                double nb = std::max({L.at(f, i + 1, j), L.at(f, i - 1, j),
                                      L.at(f, i, j + 1), L.at(f, i, j - 1),
                                      L.at(f, i + 1, j - 1), L.at(f, i - 1, j + 1)});
                if (v >= nb) crit.push_back({v, v});
            }
    crit.push_back({gmax, gmax});

    // (b) radii where the extracted component count changes
    std::vector<int> counts;
    for (double r : r_grid)
        counts.push_back(int(lsd::extract_on_lattice(field, L, r).polylines.size()));
    for (size_t i = 0; i + 1 < r_grid.size(); i++)
        if (counts[i] != counts[i + 1]) crit.push_back({r_grid[i], r_grid[i + 1]});

    // (c) values attained at sampled tie points of the field
    double eps_tie = 10.0 * field.e_field;
    int step = std::max(1, subdiv / 4);
    for (int f = 0; f < m.n_faces(); f++)
        for (int i = 0; i <= subdiv; i += step)
            for (int j = 0; i + j <= subdiv; j += step) {
                SurfacePoint sp = lsd::Lattice::node_sp(f, i, j, subdiv);
                double d = field.eval(sp);
                if (d <= 10.0 * field.e_field) continue;
                std::vector<PathWitness> wits;
                for (PathWitness& w : field.witnesses(sp, eps_tie))
                    if (w.via_vertex < 0 || field.vdist[w.via_vertex] <= 10.0 * field.e_field)
                        wits.push_back(std::move(w));
                bool tie = false;
                for (size_t k = 1; k < wits.size() && !tie; k++)
                    tie = wits[k].component != wits[0].component ||
                          wits[k].signature != wits[0].signature;
                if (tie) crit.push_back({d, d});
            }

    std::vector<std::pair<double, bool>> out;
    for (double r : r_grid) {
        bool near = false;
        for (const auto& [lo, hi] : crit)
            near = near || (r >= lo - window && r <= hi + window);
        out.push_back({r, near});
    }
    return out;
}

}  // namespace convexgeo
