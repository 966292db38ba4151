#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "honeycomb/elements.hpp"

namespace honeycomb {

// Tube thickness control.  r0 = tanh(rH/2) parametrizes the hyperbolic tube
// radius rH; Accurate keeps it constant, AccurateClamped floors the euclidean
// diameter (accurate until the tube shrinks to the clamp, constant beyond),
// ConstantEuclidean fixes the euclidean radius outright.
struct ThicknessPolicy {
    enum class Kind { Accurate, AccurateClamped, ConstantEuclidean };
    Kind kind = Kind::Accurate;
    double r0 = 0.05;
    double min_euclidean_diameter = 0.0;

    static ThicknessPolicy accurate(double r0) { return {Kind::Accurate, r0, 0.0}; }
    static ThicknessPolicy accurate_clamped(double r0, double min_diam) {
        return {Kind::AccurateClamped, r0, min_diam};
    }
    static ThicknessPolicy constant_euclidean(double radius) {
        return {Kind::ConstantEuclidean, radius, 0.0};
    }
};

struct Mesh {
    std::vector<Point3> vertices;
    std::vector<std::array<int, 3>> triangles;

    void append(const Mesh& o) {
        int base = static_cast<int>(vertices.size());
        vertices.insert(vertices.end(), o.vertices.begin(), o.vertices.end());
        triangles.reserve(triangles.size() + o.triangles.size());
        for (const auto& t : o.triangles)
            triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
};

// Shrinks near-boundary endpoints onto the sphere |x| = R along the edge
// geodesic; interior endpoints are left alone.
inline Edge clip_edge_to_ball(const Edge& e, double R = kHyperidealClipRadius) {
    auto clip_one = [&](const Point3& keep, const Point3& move) -> Point3 {
        if (norm2(move) <= R * R) return move;
        // Walk samples from `keep` toward `move` and cut at |x| = R.
        auto pts = geodesic_arc(keep, move, 256);
        Point3 prev = pts[0];
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (norm2(pts[i]) > R * R) {
                // binary refine between prev and pts[i] on the chord
                Point3 lo = prev, hi = pts[i];
                for (int it = 0; it < 60; ++it) {
                    Point3 mid = (lo + hi) * 0.5;
                    (norm2(mid) > R * R ? hi : lo) = mid;
                }
                return lo;
            }
            prev = pts[i];
        }
        return move;
    };
    Edge out = e;
    bool a_out = norm2(e.a) > R * R, b_out = norm2(e.b) > R * R;
    if (a_out && b_out) {
        auto clipped = detail::clip_ideal_geodesic(e.a, e.b, R);
        if (clipped) return *clipped;
        return e;
    }
    if (b_out) out.b = clip_one(e.a, e.b);
    if (a_out) out.a = clip_one(out.b, e.a);
    return out;
}

namespace detail {

// Euclidean radius of the Accurate(r0) tube sphere centered at hyperbolic
// distance-from-origin parameter d = |center|.
inline double accurate_euclidean_radius(double r0, double d2) {
    double den = d2 * r0 * r0 - 1.0;
    return r0 * (d2 - 1.0) / den;
}

// Smallest |x| along the ball geodesic segment from a to b.
inline double min_norm_on_segment(const Point3& a, const Point3& b) {
    auto circ = geodesic_circle(a, b);
    double ends = std::min(norm(a), norm(b));
    if (!circ) {
        // chord through the origin
        Vec3 d = b - a;
        double t = -dot(a, d) / norm2(d);
        if (t > 0 && t < 1) return norm(a + t * d);
        return ends;
    }
    // Foot of the origin on the circle; inside the arc iff between endpoints.
    Vec3 foot = circ->center * (1.0 - circ->radius / norm(circ->center));
    Vec3 ua = a - circ->center, ub = b - circ->center, uf = foot - circ->center;
    double ang = std::acos(std::clamp(dot(ua, ub) / (norm(ua) * norm(ub)), -1.0, 1.0));
    double af = std::acos(std::clamp(dot(ua, uf) / (norm(ua) * norm(uf)), -1.0, 1.0));
    double bf = std::acos(std::clamp(dot(ub, uf) / (norm(ub) * norm(uf)), -1.0, 1.0));
    if (af <= ang + 1e-12 && bf <= ang + 1e-12) return norm(foot);
    return ends;
}

}  // namespace detail

// Maximum euclidean tube diameter along the edge under the given policy.
inline double edge_max_tube_diameter(const Edge& e, const ThicknessPolicy& policy) {
    switch (policy.kind) {
        case ThicknessPolicy::Kind::ConstantEuclidean:
            return 2.0 * policy.r0;
        case ThicknessPolicy::Kind::AccurateClamped: {
            double dmin = detail::min_norm_on_segment(e.a, e.b);
            double acc = 2.0 * detail::accurate_euclidean_radius(policy.r0, dmin * dmin);
            return std::max(acc, policy.min_euclidean_diameter);
        }
        case ThicknessPolicy::Kind::Accurate:
        default: {
            double dmin = detail::min_norm_on_segment(e.a, e.b);
            return 2.0 * detail::accurate_euclidean_radius(policy.r0, dmin * dmin);
        }
    }
}

// Tube mesh over one edge: n_rings sphere centers along the geodesic, each
// contributing the tangent circle where its sphere touches the cyclide (the
// curve furthest from the core geodesic), stitched into a closed tube with
// fan caps.  Ring phases are aligned by a shared frame transported along the
// core geodesic, so the tube does not twist.
inline Mesh cyclide_tube(const Edge& e, const ThicknessPolicy& policy, int n_rings,
                         int n_around) {
    if (n_rings < 2 || n_around < 3) throw Error("cyclide_tube needs n_rings >= 2, n_around >= 3");
    if (distance(e.a, e.b) < 1e-14) throw DegenerateArc("tube over a degenerate edge");
    if (norm2(e.a) >= 1.0 || norm2(e.b) >= 1.0)
        throw DegenerateArc("tube endpoints must be interior; clip the edge first");

    // Work in the frame where the edge midpoint is the origin: the geodesic
    // becomes a diameter and normal directions stay euclidean-constant.
    Point3 mid = ball_midpoint(e.a, e.b);
    Vec3 a = mobius_add(-1.0 * mid, e.a);
    Vec3 b = mobius_add(-1.0 * mid, e.b);
    Vec3 dir = normalized(b - a);
    Vec3 w = std::abs(dir.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 n1 = normalized(cross(dir, w));
    Vec3 n2 = cross(dir, n1);

    bool near_boundary = norm(e.a) > 0.99 || norm(e.b) > 0.99;
    double ta = dot(a, dir), tb = dot(b, dir);  // positions on the diameter
    std::vector<double> params(n_rings);
    if (near_boundary) {
        // uniform in the euclidean diameter parameter
        for (int i = 0; i < n_rings; ++i) params[i] = ta + (tb - ta) * i / (n_rings - 1.0);
    } else {
        // uniform in hyperbolic arc-length
        double sa = 2.0 * std::atanh(std::clamp(ta, -1.0 + 1e-16, 1.0 - 1e-16));
        double sb = 2.0 * std::atanh(std::clamp(tb, -1.0 + 1e-16, 1.0 - 1e-16));
        for (int i = 0; i < n_rings; ++i)
            params[i] = std::tanh((sa + (sb - sa) * i / (n_rings - 1.0)) / 2.0);
    }

    Mesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(n_rings) * n_around);
    const double tau = 2.0 * std::numbers::pi;
    for (int i = 0; i < n_rings; ++i) {
        Vec3 center_frame = params[i] * dir;
        Point3 center_world = mobius_add(mid, center_frame);
        double rH;
        switch (policy.kind) {
            case ThicknessPolicy::Kind::Accurate:
                rH = 2.0 * std::atanh(policy.r0);
                break;
            case ThicknessPolicy::Kind::AccurateClamped: {
                double rE = detail::accurate_euclidean_radius(policy.r0, norm2(center_world));
                if (2.0 * rE < policy.min_euclidean_diameter)
                    rH = hyp_radius_for_euclidean(policy.min_euclidean_diameter / 2.0,
                                                  norm2(center_world));
                else
                    rH = 2.0 * std::atanh(policy.r0);
                break;
            }
            case ThicknessPolicy::Kind::ConstantEuclidean:
            default:
                rH = hyp_radius_for_euclidean(policy.r0, norm2(center_world));
                break;
        }
        double rim = std::tanh(rH / 2.0);
        for (int k = 0; k < n_around; ++k) {
            double phi = tau * k / n_around;
            Vec3 nrm = std::cos(phi) * n1 + std::sin(phi) * n2;
            Vec3 pt_frame = mobius_add(center_frame, rim * nrm);
            mesh.vertices.push_back(mobius_add(mid, pt_frame));
        }
    }

    auto vid = [&](int ring, int k) { return ring * n_around + (k % n_around); };
    for (int i = 0; i + 1 < n_rings; ++i) {
        for (int k = 0; k < n_around; ++k) {
            mesh.triangles.push_back({vid(i, k), vid(i + 1, k), vid(i + 1, k + 1)});
            mesh.triangles.push_back({vid(i, k), vid(i + 1, k + 1), vid(i, k + 1)});
        }
    }
    // Caps: fans rooted at a rim vertex, so every mesh vertex stays on a
    // tangent circle.
    for (int k = 1; k + 1 < n_around; ++k) {
        mesh.triangles.push_back({vid(0, 0), vid(0, k + 1), vid(0, k)});
        mesh.triangles.push_back({vid(n_rings - 1, 0), vid(n_rings - 1, k), vid(n_rings - 1, k + 1)});
    }
    return mesh;
}

// Two-stage culling: drop edges whose maximum tube diameter falls below the
// threshold, then iteratively remove dangling edges (incident to a degree-1
// vertex) until every remaining vertex has degree >= 2.
inline EdgeSet cull(const EdgeSet& es, double min_euclidean_diameter,
                    const ThicknessPolicy& policy) {
    const auto& edges = es.edges();
    std::vector<bool> alive(edges.size(), true);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edge_max_tube_diameter(edges[i], policy) < min_euclidean_diameter) alive[i] = false;

    std::unordered_map<detail::VertexKey, int, detail::KeyHash> degree;
    auto add_deg = [&](const Point3& p, int d) { degree[detail::vertex_key(p)] += d; };
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (alive[i]) {
            add_deg(edges[i].a, 1);
            add_deg(edges[i].b, 1);
        }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!alive[i]) continue;
            if (degree[detail::vertex_key(edges[i].a)] == 1 ||
                degree[detail::vertex_key(edges[i].b)] == 1) {
                alive[i] = false;
                add_deg(edges[i].a, -1);
                add_deg(edges[i].b, -1);
                changed = true;
            }
        }
    }
    EdgeSet out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (alive[i]) out.insert(edges[i], es.depths()[i]);
    return out;
}

// Binary STL: 80-byte header, little-endian triangle count, 50-byte records.
inline std::vector<std::uint8_t> export_stl(const Mesh& m, double scale_mm) {
    if (m.triangles.empty()) throw EmptyMesh("no triangles to export");
    std::vector<std::uint8_t> out(80, 0);
    const char* tag = "honeycomb edge framework";
    std::memcpy(out.data(), tag, std::strlen(tag));
    auto put_u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    auto put_f32 = [&](float f) {
        std::uint32_t v;
        std::memcpy(&v, &f, 4);
        put_u32(v);
    };
    put_u32(static_cast<std::uint32_t>(m.triangles.size()));
    for (const auto& t : m.triangles) {
        Vec3 a = m.vertices[t[0]] * scale_mm;
        Vec3 b = m.vertices[t[1]] * scale_mm;
        Vec3 c = m.vertices[t[2]] * scale_mm;
        Vec3 n = cross(b - a, c - a);
        double len = norm(n);
        n = len > 1e-30 ? n / len : Vec3{0, 0, 0};
        put_f32(static_cast<float>(n.x));
        put_f32(static_cast<float>(n.y));
        put_f32(static_cast<float>(n.z));
        for (const Vec3& v : {a, b, c}) {
            put_f32(static_cast<float>(v.x));
            put_f32(static_cast<float>(v.y));
            put_f32(static_cast<float>(v.z));
        }
        out.push_back(0);
        out.push_back(0);  // attribute byte count
    }
    return out;
}

// Wavefront OBJ with 1-based indices.
inline std::string export_obj(const Mesh& m) {
    if (m.triangles.empty()) throw EmptyMesh("no triangles to export");
    std::ostringstream os;
    os.precision(9);
    for (const auto& v : m.vertices) os << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const auto& t : m.triangles)
        os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    return os.str();
}

}  // namespace honeycomb
