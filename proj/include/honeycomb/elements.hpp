#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "honeycomb/conformal.hpp"
#include "honeycomb/simplex.hpp"

namespace honeycomb {

// Honeycomb edge in the Poincare ball; endpoints may be ideal (|x| = 1).
struct Edge {
    Point3 a, b;
};

namespace detail {

// Reflections accumulate ~1e-12 of noise; a 1e-7 grid separates distinct
// vertices at printable recursion depths.
inline constexpr double kDedupGrid = 1e-7;

using VertexKey = std::array<std::int64_t, 3>;
using EdgeKey = std::array<std::int64_t, 6>;

inline VertexKey vertex_key(const Point3& p) {
    auto q = [](double v) { return static_cast<std::int64_t>(std::llround(v / kDedupGrid)); };
    return {q(p.x), q(p.y), q(p.z)};
}

inline EdgeKey edge_key(const Point3& a, const Point3& b) {
    VertexKey ka = vertex_key(a), kb = vertex_key(b);
    if (kb < ka) std::swap(ka, kb);
    return {ka[0], ka[1], ka[2], kb[0], kb[1], kb[2]};
}

struct KeyHash {
    template <std::size_t N>
    std::size_t operator()(const std::array<std::int64_t, N>& k) const {
        std::size_t h = 1469598103934665603ull;
        for (auto v : k) {
            h ^= static_cast<std::size_t>(v);
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace detail

// Deduplicated edge collection with endpoint-incidence indexing.
class EdgeSet {
  public:
    bool insert(const Edge& e, int depth = 0) {
        auto key = detail::edge_key(e.a, e.b);
        auto [it, fresh] = index_.emplace(key, edges_.size());
        if (!fresh) return false;
        edges_.push_back(e);
        depths_.push_back(depth);
        return true;
    }

    bool contains(const Edge& e) const { return index_.count(detail::edge_key(e.a, e.b)) > 0; }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& depths() const { return depths_; }
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    // Endpoint incidence: quantized vertex -> indices of incident edges.
    std::unordered_map<detail::VertexKey, std::vector<std::size_t>, detail::KeyHash>
    incidence() const {
        std::unordered_map<detail::VertexKey, std::vector<std::size_t>, detail::KeyHash> adj;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            adj[detail::vertex_key(edges_[i].a)].push_back(i);
            adj[detail::vertex_key(edges_[i].b)].push_back(i);
        }
        return adj;
    }

    // Canonical order (sorted by key) for deterministic export.
    std::vector<std::size_t> sorted_order() const {
        std::vector<std::pair<detail::EdgeKey, std::size_t>> keyed;
        keyed.reserve(edges_.size());
        for (std::size_t i = 0; i < edges_.size(); ++i)
            keyed.emplace_back(detail::edge_key(edges_[i].a, edges_[i].b), i);
        std::sort(keyed.begin(), keyed.end());
        std::vector<std::size_t> order;
        order.reserve(keyed.size());
        for (auto& kv : keyed) order.push_back(kv.second);
        return order;
    }

  private:
    std::vector<Edge> edges_;
    std::vector<int> depths_;
    std::unordered_map<detail::EdgeKey, std::size_t, detail::KeyHash> index_;
};

namespace detail {

// Clips the ball geodesic through two ideal points to |x| <= R.
inline std::optional<Edge> clip_ideal_geodesic(const Point3& a, const Point3& b, double R) {
    auto circ = geodesic_circle(a, b);
    if (!circ) {
        // Diameter: straight chord through the origin.
        return Edge{a * R, b * R};
    }
    double tau = circ->radius;
    if (norm(circ->center) - tau >= R) return std::nullopt;  // never enters the clip ball
    Vec3 e1 = (a - circ->center) / tau;
    Vec3 axis = cross(e1, (b - circ->center) / tau);
    double axn = norm(axis);
    if (axn < 1e-15) return std::nullopt;
    axis = axis / axn;
    Vec3 e2 = cross(axis, e1);
    double ang = std::acos(std::clamp(dot(e1, (b - circ->center) / tau), -1.0, 1.0));
    double A = dot(circ->center, e1), B = dot(circ->center, e2);
    double amp = std::sqrt(A * A + B * B);
    double K = (R * R - 1.0 - 2.0 * tau * tau) / (2.0 * tau);
    if (amp < 1e-15 || std::abs(K) > amp) return std::nullopt;
    double phi0 = std::atan2(B, A);
    double dphi = std::acos(std::clamp(K / amp, -1.0, 1.0));
    auto at = [&](double phi) { return circ->center + tau * (std::cos(phi) * e1 + std::sin(phi) * e2); };
    // The two crossings, ordered along the arc from a (phi = 0) to b (phi = ang).
    double c1 = phi0 - dphi, c2 = phi0 + dphi;
    auto wrap = [&](double phi) {
        while (phi < 0) phi += 2.0 * std::numbers::pi;
        while (phi >= 2.0 * std::numbers::pi) phi -= 2.0 * std::numbers::pi;
        return phi;
    };
    double w1 = wrap(c1), w2 = wrap(c2);
    if (w1 > w2) std::swap(w1, w2);
    if (w2 > ang + 1e-9) {
        // keep solutions inside [0, ang]
        if (w1 > ang + 1e-9) return std::nullopt;
    }
    return Edge{at(w1), at(w2)};
}

struct BallSimplex {
    std::array<GeneralizedSphere, 4> mirrors;
};

inline BallSimplex to_ball(const Simplex& sx) {
    BallSimplex b;
    for (int i = 0; i < 4; ++i) b.mirrors[i] = uhs_to_ball(sx.mirrors[i]);
    return b;
}

}  // namespace detail

inline constexpr double kHyperidealClipRadius = 0.9995;

// Recursive-reflection enumeration of honeycomb edges in the Poincare ball.
// The seed is the honeycomb edge through the fundamental simplex (vertex to
// mirrored vertex); reflection through the four mirrors generates the orbit.
// Recursion stops when an edge's euclidean endpoint separation drops below
// min_euclidean_length or the reflection depth reaches max_depth.  Edges of
// honeycombs with hyperideal vertices are clipped to |x| <= 0.9995.
inline EdgeSet enumerate_edges(const SchlafliSymbol& s, double min_euclidean_length,
                               int max_depth) {
    Simplex sx = build_simplex(s);
    if (s.r.is_infinite())
        throw UnsupportedGeometry("edges of " + to_string(s) +
                                  " are single ideal points; nothing to enumerate");
    detail::BallSimplex bs = detail::to_ball(sx);

    bool hyperideal = vertex_type(s) == ElementType::Hyperideal;
    Point3 seed_a, seed_b;
    if (!hyperideal) {
        auto v = vertex_position_uhs(sx);
        if (!v) throw UnsupportedGeometry("no vertex position for " + to_string(s));
        Point3 v2 = invert_point(sx.mirrors[0], *v);
        seed_a = uhs_to_ball(*v);
        seed_b = uhs_to_ball(v2);
    } else {
        Point3 u1, u2;
        if (!detail::trace_intersection(detail::boundary_trace(sx.mirrors[2]),
                                        detail::boundary_trace(sx.mirrors[3]), u1, u2))
            throw UnsupportedGeometry("edge geodesic of " + to_string(s) + " is degenerate");
        seed_a = uhs_to_ball(u1);
        seed_b = uhs_to_ball(u2);
    }

    auto output_edge = [&](const Point3& a, const Point3& b) -> std::optional<Edge> {
        if (!hyperideal) return Edge{a, b};
        return detail::clip_ideal_geodesic(a, b, kHyperidealClipRadius);
    };

    EdgeSet out;
    // BFS over defining endpoint pairs; output edges are the (possibly
    // clipped) segments, deduplicated by the defining pair.
    struct Node {
        Point3 a, b;
        int depth;
    };
    std::unordered_map<detail::EdgeKey, bool, detail::KeyHash> seen;
    std::deque<Node> queue;
    auto try_add = [&](const Point3& a, const Point3& b, int depth) {
        auto key = detail::edge_key(a, b);
        if (seen.count(key)) return;
        auto e = output_edge(a, b);
        if (!e || distance(e->a, e->b) < min_euclidean_length) return;
        seen.emplace(key, true);
        out.insert(*e, depth);
        queue.push_back({a, b, depth});
    };
    try_add(seed_a, seed_b, 0);
    while (!queue.empty()) {
        Node n = queue.front();
        queue.pop_front();
        if (n.depth >= max_depth) continue;
        for (const auto& m : bs.mirrors) {
            Point3 a = invert_point(m, n.a);
            Point3 b = invert_point(m, n.b);
            try_add(a, b, n.depth + 1);
        }
    }
    return out;
}

// One edge per line: "ax ay az bx by bz", canonically ordered.
inline void write_edges_text(std::ostream& os, const EdgeSet& es) {
    os.precision(17);
    for (std::size_t i : es.sorted_order()) {
        const Edge& e = es.edges()[i];
        os << e.a.x << ' ' << e.a.y << ' ' << e.a.z << ' '
           << e.b.x << ' ' << e.b.y << ' ' << e.b.z << '\n';
    }
}

// Cell-orbit enumeration by breadth-first reflection across faces, for
// honeycombs whose cells have material centers.  Returns the number of cells
// in each adjacency layer around the central cell: layer 0 is the central
// cell itself.
inline std::vector<std::size_t> cell_layers(const SchlafliSymbol& s, int layers) {
    if (cell_type(s) != ElementType::Material)
        throw NoMaterialCenter(to_string(s) + " cells have no material center");
    Simplex sx = build_simplex(s);
    detail::BallSimplex bs = detail::to_ball(sx);

    // Face mirrors of the central cell: orbit of the cell-wall mirror under
    // the cell group generated by the first three mirrors.
    auto sphere_key = [](const GeneralizedSphere& g) {
        detail::VertexKey ck = detail::vertex_key(g.center);
        return std::array<std::int64_t, 4>{
            ck[0], ck[1], ck[2],
            static_cast<std::int64_t>(std::llround(g.radius / detail::kDedupGrid))};
    };
    std::vector<GeneralizedSphere> faces{bs.mirrors[3]};
    std::unordered_map<std::array<std::int64_t, 4>, bool, detail::KeyHash> face_seen;
    face_seen.emplace(sphere_key(bs.mirrors[3]), true);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (faces.size() > 1000) throw UnsupportedGeometry("cell face orbit did not close");
        for (int g = 0; g < 3; ++g) {
            GeneralizedSphere f = invert_sphere(bs.mirrors[g], faces[i]);
            auto key = sphere_key(f);
            if (!face_seen.count(key)) {
                face_seen.emplace(key, true);
                faces.push_back(f);
            }
        }
    }

    struct Cell {
        Point3 center;
        std::vector<GeneralizedSphere> faces;
        int depth;
    };
    std::vector<std::size_t> counts(layers + 1, 0);
    std::unordered_map<detail::VertexKey, bool, detail::KeyHash> seen;
    std::deque<Cell> queue;
    Point3 origin{0, 0, 0};
    seen.emplace(detail::vertex_key(origin), true);
    queue.push_back({origin, faces, 0});
    counts[0] = 1;
    while (!queue.empty()) {
        Cell c = std::move(queue.front());
        queue.pop_front();
        if (c.depth >= layers) continue;
        for (const auto& f : c.faces) {
            Point3 nc = invert_point(f, c.center);
            auto key = detail::vertex_key(nc);
            if (seen.count(key)) continue;
            seen.emplace(key, true);
            std::vector<GeneralizedSphere> nf;
            nf.reserve(c.faces.size());
            for (const auto& g : c.faces) nf.push_back(invert_sphere(f, g));
            counts[c.depth + 1]++;
            queue.push_back({nc, std::move(nf), c.depth + 1});
        }
    }
    return counts;
}

// Hyperbolic distance from the cell center to the cell-wall mirror, read off
// the constructed simplex.  Defined only for material cell centers.
inline double inradius(const SchlafliSymbol& s) {
    if (classify_3d(s) != Geometry::Hyperbolic)
        throw UnsupportedGeometry(to_string(s) + " is not hyperbolic");
    if (cell_type(s) != ElementType::Material)
        throw NoMaterialCenter(to_string(s) + " cells have no material center");
    Simplex sx = build_simplex(s);
    // With material cells the construction puts the cell center at (0,0,1)
    // and the cell-wall mirror is the origin-centered hemisphere of radius R;
    // the distance along the vertical geodesic is ln R.
    const GeneralizedSphere& m3 = sx.mirrors[3];
    return std::log(m3.radius);
}

// The boundary image of a cell-centered honeycomb repeats under a uniform
// scaling of exp(2 * inradius): twice the inradius is the translation length
// down the tower of cells through the cell center.
inline double self_similar_scale(const SchlafliSymbol& s) {
    return std::exp(2.0 * inradius(s));
}

}  // namespace honeycomb
