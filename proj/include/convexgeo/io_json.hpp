#pragma once
#include <string>

#include "json.hpp"

#include "approx.hpp"
#include "chart.hpp"
#include "dc_checks.hpp"
#include "distance_fields.hpp"
#include "geodesic.hpp"
#include "mesh.hpp"

namespace convexgeo {

// ordered_json keeps insertion order, so reports serialize with a stable key
// sequence; together with seeded sampling this makes equal runs byte-equal
using json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "convexgeo";
inline constexpr const char* kToolVersion = "0.1.0";

inline json to_json(const Vec2& v) { return json::array({v.x, v.y}); }
inline json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline json to_json(const SurfacePoint& p) {
    return json{{"face", p.face}, {"bary", {p.bary[0], p.bary[1], p.bary[2]}}};
}

inline json to_json(const std::vector<Vec3>& pts) {
    json a = json::array();
    for (const Vec3& p : pts) a.push_back(to_json(p));
    return a;
}

inline json to_json(const GeodesicPath& p, bool with_polyline = true) {
    json j{{"length", p.length},
           {"lower_bound", p.lower},
           {"method", p.method},
           {"n_segments", int(p.xyz.empty() ? 0 : p.xyz.size() - 1)}};
    if (with_polyline) j["polyline"] = to_json(p.xyz);
    return j;
}

inline json to_json(const ConvexityReport& r) {
    return json{{"pass", r.pass},
                {"max_vertex_deviation", r.max_vertex_deviation},
                {"max_plane_violation", r.max_plane_violation},
                {"tolerance", r.tolerance},
                {"volume", r.volume}};
}

inline json to_json(const DiameterReport& r) {
    return json{{"lower", r.lower},
                {"upper", r.upper},
                {"cover_radius", r.h_cover},
                {"n_samples", r.n_samples},
                {"witness_a", to_json(r.a)},
                {"witness_b", to_json(r.b)}};
}

inline json to_json(const StandardChart& ch) {
    json poly = json::array();
    for (const Vec2& v : ch.V) poly.push_back(to_json(v));
    return json{{"direction", to_json(ch.e)},
                {"basis", {to_json(ch.b1), to_json(ch.b2)}},
                {"polygon", poly},
                {"lipschitz", ch.L},
                {"n_faces_covered", int(ch.faces.size())},
                {"seed_point", to_json(ch.seed)}};
}

inline json to_json(const SandwichReport& r) {
    return json{{"epsilon", r.epsilon}, {"hausdorff", r.hausdorff}, {"k", r.k}};
}

inline json to_json(const ChartConvergenceReport& r, bool with_samples = false) {
    json j{{"pass", r.pass},
           {"n_samples", r.n_samples},
           {"lipschitz_reference", r.lip_f},
           {"lipschitz_approx", r.lip_fk},
           {"hausdorff", r.delta},
           {"bound_rhs", r.bound_rhs},
           {"max_deviation", r.max_deviation}};
    if (with_samples) j["deviations"] = r.deviations;
    return j;
}

inline json to_json(const DistanceConvergenceReport& r, bool with_samples = false) {
    json j{{"trend_ok", r.trend_ok},
           {"max_deviation_head", r.max_head},
           {"max_deviation_tail", r.max_tail},
           {"n_meshes", int(r.values.size())},
           {"n_pairs", int(r.reference.size())}};
    if (with_samples) {
        j["reference"] = r.reference;
        j["values"] = r.values;
        j["deviations"] = r.deviations;
    }
    return j;
}

inline json to_json(const ConcavityWitness& w) {
    json cfg = json::array();
    for (const Vec3& p : w.config) cfg.push_back(to_json(p));
    return json{{"config", cfg}, {"raw", w.raw}, {"h", w.h}};
}

inline json to_json(const ConcavityReport& r) {
    json j{{"pass", r.pass},
           {"description", r.description},
           {"n_tested", r.n_tested},
           {"n_skipped", r.n_skipped},
           {"max_violation", r.max_violation},
           {"tolerance", r.tolerance}};
    // the witness configuration only means something once a pair was measured
    if (r.n_tested > 0) j["witness"] = to_json(r.witness);
    return j;
}

inline json to_json(const LevelSet& ls, bool with_polylines = true) {
    json j{{"r", ls.r},
           {"n_components", int(ls.xyz.size())},
           {"total_length", ls.total_length},
           {"closed", ls.closed}};
    if (with_polylines) {
        json chains = json::array();
        for (const auto& c : ls.xyz) chains.push_back(to_json(c));
        j["polylines"] = chains;
    }
    return j;
}

inline json to_json(const LevelSetTopology& t) {
    return json{{"n_components", t.n_components},
                {"all_closed", t.all_closed},
                {"all_simple", t.all_simple},
                {"closed", t.closed},
                {"simple", t.simple},
                {"lengths", t.lengths}};
}

inline json to_json(const ExoSample& s) {
    return json{{"point", to_json(s.p)},
                {"distance", s.d},
                {"gap", s.gap},
                {"distinct_endpoints", s.distinct_endpoints},
                {"witness_lengths", {s.w1.length, s.w2.length}},
                {"witness_feet", {to_json(s.w1.endpoint), to_json(s.w2.endpoint)}}};
}

inline json to_json(const ExoskeletonEstimate& e, bool with_samples = true) {
    json j{{"n_samples", int(e.samples.size())},
           {"n_ambiguous", e.n_ambiguous()},
           {"n_probed", e.n_probed},
           {"eps_tie", e.eps_tie},
           {"density", e.density}};
    if (with_samples) {
        json arr = json::array();
        for (const ExoSample& s : e.samples) arr.push_back(to_json(s));
        j["samples"] = arr;
    }
    return j;
}

// every emitted document carries the tool version and the fully resolved
// parameter set; no clocks, no hostnames — rerunning a config reproduces the
// bytes
inline json report_envelope(const std::string& command, json params, json result) {
    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"command", command},
                {"params", std::move(params)},
                {"result", std::move(result)}};
}

}  // namespace convexgeo
