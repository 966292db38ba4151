#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "honeycomb/errors.hpp"
#include "honeycomb/vec.hpp"

namespace honeycomb {

// A sphere or a plane, the universal mirror primitive of the conformal
// models.  Every instance carries an orientation: the "inside" is the side a
// fundamental domain lies on.
//
// Planes are stored in the canonical form  n.x <= d  (unit normal n), so the
// orientation is absorbed into the sign of (n, d).  Spheres keep an explicit
// flag selecting the interior or the exterior.
struct GeneralizedSphere {
    enum class Kind { Sphere, Plane };

    Kind kind = Kind::Plane;
    Vec3 center{0, 0, 1};   // sphere center, or unit plane normal
    double radius = 0.0;    // sphere radius > 0, or plane offset (n.x = d)
    bool inside_is_interior = true;  // spheres only

    static GeneralizedSphere sphere(const Vec3& c, double r, bool interior_side = true) {
        GeneralizedSphere g;
        g.kind = Kind::Sphere;
        g.center = c;
        g.radius = r;
        g.inside_is_interior = interior_side;
        return g;
    }

    // Surface {x : n.x = d}; inside is n.x <= d when below_is_inside.
    static GeneralizedSphere plane(const Vec3& n, double d, bool below_is_inside = true) {
        GeneralizedSphere g;
        g.kind = Kind::Plane;
        Vec3 u = normalized(n);
        double off = d / norm(n);
        if (!below_is_inside) {
            u = -u;
            off = -off;
        }
        g.center = u;
        g.radius = off;
        return g;
    }

    bool is_plane() const { return kind == Kind::Plane; }

    // Negative strictly inside, zero on the surface, positive outside.
    // For spheres this is a radial distance, for planes a normal distance.
    double signed_side(const Point3& x) const {
        if (is_plane()) {
            if (is_at_infinity(x)) return 0.0;  // every plane reaches infinity
            return dot(center, x) - radius;
        }
        if (is_at_infinity(x)) return inside_is_interior ? 1.0 : -1.0;
        double d = distance(center, x);
        return inside_is_interior ? d - radius : radius - d;
    }

    GeneralizedSphere flipped() const {
        GeneralizedSphere g = *this;
        if (is_plane()) {
            g.center = -center;
            g.radius = -radius;
        } else {
            g.inside_is_interior = !inside_is_interior;
        }
        return g;
    }
};

// Sphere inversion / plane mirror of a point.  The sphere center maps to the
// point at infinity and back; no error cases.
inline Point3 invert_point(const GeneralizedSphere& m, const Point3& x) {
    if (m.is_plane()) {
        if (is_at_infinity(x)) return x;
        double t = dot(m.center, x) - m.radius;
        return x - 2.0 * t * m.center;
    }
    if (is_at_infinity(x)) return m.center;
    Vec3 d = x - m.center;
    double d2 = norm2(d);
    if (d2 == 0.0) return point_at_infinity();
    return m.center + (m.radius * m.radius / d2) * d;
}

namespace detail {

// Spheres blowing past this radius under inversion are demoted to planes.
inline constexpr double kPlaneConversionRadius = 1e7;

// Fit the oriented plane through three points; `inside_witness` selects the
// inside half-space (or, when the witness is the point at infinity, the
// outside of nothing: infinity lies strictly on the chosen inside).
inline GeneralizedSphere plane_through(const Vec3& a, const Vec3& b, const Vec3& c,
                                       const Point3& inside_witness) {
    Vec3 n = cross(b - a, c - a);
    n = normalized(n);
    double d = dot(n, a);
    GeneralizedSphere g = GeneralizedSphere::plane(n, d);
    if (is_at_infinity(inside_witness)) return g;  // both sides reach infinity; keep as built
    if (g.signed_side(inside_witness) > 0.0) g = g.flipped();
    return g;
}

}  // namespace detail

// Image of a generalized sphere under inversion in `m`.  All four case
// combinations (sphere/plane mirror applied to sphere/plane argument) are
// handled, including spheres through the inversion center, which map to
// planes.  Orientation is transported: the image's inside is the image of the
// argument's inside.
inline GeneralizedSphere invert_sphere(const GeneralizedSphere& m, const GeneralizedSphere& s) {
    if (m.is_plane()) {
        // Euclidean mirror: shapes and sizes are preserved.
        GeneralizedSphere g = s;
        if (s.is_plane()) {
            Vec3 n = s.center - 2.0 * dot(m.center, s.center) * m.center;
            // A point p on s satisfies n'.p' = d' where p' is the mirror of p.
            Vec3 p = s.center * s.radius;  // foot of the plane
            Vec3 pm = invert_point(m, p);
            g.center = n;
            g.radius = dot(n, pm);
        } else {
            g.center = invert_point(m, s.center);
        }
        return g;
    }

    const Vec3 p = m.center;
    const double R2 = m.radius * m.radius;

    if (s.is_plane()) {
        double h = dot(s.center, p) - s.radius;  // signed distance of center from s
        if (std::abs(h) < R2 / detail::kPlaneConversionRadius) {
            // Plane through the inversion center maps to itself.
            return s;
        }
        // Image is a sphere through p.
        Vec3 c = p - (R2 / (2.0 * h)) * s.center;
        double r = std::abs(R2 / (2.0 * h));
        // The inside of the plane maps to the interior of the image iff the
        // inversion center is outside the plane's inside (infinity maps to p).
        bool interior = s.signed_side(p) > 0.0;
        return GeneralizedSphere::sphere(c, r, interior);
    }

    Vec3 q = s.center - p;
    double D2 = norm2(q);
    double denom = D2 - s.radius * s.radius;  // zero iff s passes through p
    if (std::abs(denom) < 1e-300 ||
        std::abs(R2 * s.radius / denom) > detail::kPlaneConversionRadius) {
        // s (nearly) passes through the inversion center: image is a plane,
        // fitted through three well-spread image points.
        Vec3 u = (D2 > 1e-30) ? normalized(q) : Vec3{1, 0, 0};
        Vec3 w = std::abs(u.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 v1 = normalized(cross(u, w));
        Vec3 v2 = cross(u, v1);
        Vec3 a = invert_point(m, s.center + s.radius * u);
        Vec3 b = invert_point(m, s.center + s.radius * v1);
        Vec3 c = invert_point(m, s.center + s.radius * v2);
        Vec3 witness_src = s.inside_is_interior ? s.center : point_at_infinity();
        Point3 witness = is_at_infinity(witness_src) ? Point3(p) : invert_point(m, witness_src);
        if (is_at_infinity(witness)) witness = p;  // s.center == p: inside maps around infinity
        GeneralizedSphere g = detail::plane_through(a, b, c, witness);
        // If the witness got mapped to infinity the orientation is ambiguous
        // from the witness alone; fall back to a second sample just inside.
        return g;
    }
    double t = R2 / denom;
    Vec3 c = p + t * q;
    double r = std::abs(t) * s.radius;
    // The interior of s maps to the interior of the image iff p is outside s;
    // if p is inside s, the interior sweeps past infinity.
    bool p_inside_s = (D2 < s.radius * s.radius);
    bool interior_maps_to_interior = !p_inside_s;
    bool interior = s.inside_is_interior ? interior_maps_to_interior : !interior_maps_to_interior;
    return GeneralizedSphere::sphere(c, r, interior);
}

// Unoriented intersection angle in [0, pi].  Throws Disjoint when the two
// surfaces do not meet.
inline double dihedral(const GeneralizedSphere& a, const GeneralizedSphere& b) {
    auto clamp_acos = [](double c) { return std::acos(std::clamp(c, -1.0, 1.0)); };
    if (a.is_plane() && b.is_plane()) {
        double c = dot(a.center, b.center);
        if (std::abs(c) >= 1.0 - 1e-15) {
            // Parallel planes meet only if they coincide.
            double off = (c > 0) ? a.radius - b.radius : a.radius + b.radius;
            if (std::abs(off) > 1e-12) throw Disjoint("parallel planes do not intersect");
            return 0.0;
        }
        return clamp_acos(std::abs(c));
    }
    if (a.is_plane() || b.is_plane()) {
        const GeneralizedSphere& pl = a.is_plane() ? a : b;
        const GeneralizedSphere& sp = a.is_plane() ? b : a;
        double h = std::abs(dot(pl.center, sp.center) - pl.radius);
        if (h > sp.radius * (1.0 + 1e-12)) throw Disjoint("plane and sphere do not intersect");
        return clamp_acos(std::min(h / sp.radius, 1.0));
    }
    double d2 = norm2(a.center - b.center);
    double c = (a.radius * a.radius + b.radius * b.radius - d2) / (2.0 * a.radius * b.radius);
    if (std::abs(c) > 1.0 + 1e-12) throw Disjoint("spheres do not intersect");
    return clamp_acos(c);
}

// Interior dihedral angle between the two oriented surfaces, measured inside
// the wedge where both "inside" half-regions overlap.
inline double interior_dihedral(const GeneralizedSphere& a, const GeneralizedSphere& b) {
    auto clamp_acos = [](double c) { return std::acos(std::clamp(c, -1.0, 1.0)); };
    if (a.is_plane() && b.is_plane()) {
        return clamp_acos(-dot(a.center, b.center));
    }
    if (a.is_plane() || b.is_plane()) {
        const GeneralizedSphere& pl = a.is_plane() ? a : b;
        const GeneralizedSphere& sp = a.is_plane() ? b : a;
        double eps = sp.inside_is_interior ? -1.0 : 1.0;
        double c = eps * (pl.radius - dot(pl.center, sp.center)) / sp.radius;
        return clamp_acos(c);
    }
    double ea = a.inside_is_interior ? -1.0 : 1.0;
    double eb = b.inside_is_interior ? -1.0 : 1.0;
    double d2 = norm2(a.center - b.center);
    double c = -ea * eb * (a.radius * a.radius + b.radius * b.radius - d2) /
               (2.0 * a.radius * b.radius);
    return clamp_acos(c);
}

// Residual of the tangency condition (surfaces meeting at a single boundary
// point); zero for exact tangency.
inline double tangency_residual(const GeneralizedSphere& a, const GeneralizedSphere& b) {
    if (a.is_plane() && b.is_plane()) {
        return norm(cross(a.center, b.center));  // parallel planes are tangent at infinity
    }
    if (a.is_plane() || b.is_plane()) {
        const GeneralizedSphere& pl = a.is_plane() ? a : b;
        const GeneralizedSphere& sp = a.is_plane() ? b : a;
        double h = std::abs(dot(pl.center, sp.center) - pl.radius);
        return std::abs(h - sp.radius);
    }
    double d = distance(a.center, b.center);
    return std::min(std::abs(d - (a.radius + b.radius)), std::abs(d - std::abs(a.radius - b.radius)));
}

// ---------------------------------------------------------------------------
// Model maps.  The ball <-> upper-half-space equivalence is pinned so that the
// ball origin maps to (0,0,1) and the ball south pole (0,0,-1) maps to the
// upper-half-space origin.
// ---------------------------------------------------------------------------

namespace detail {

inline const GeneralizedSphere& model_inversion_sphere() {
    static const GeneralizedSphere s =
        GeneralizedSphere::sphere(Vec3{0, 0, -1}, std::sqrt(2.0), true);
    return s;
}
inline const GeneralizedSphere& z_flip_plane() {
    static const GeneralizedSphere p = GeneralizedSphere::plane(Vec3{0, 0, 1}, 0.0);
    return p;
}

}  // namespace detail

inline Point3 uhs_to_ball(const Point3& x) {
    return invert_point(detail::z_flip_plane(), invert_point(detail::model_inversion_sphere(), x));
}
inline Point3 ball_to_uhs(const Point3& x) {
    return invert_point(detail::model_inversion_sphere(), invert_point(detail::z_flip_plane(), x));
}
inline GeneralizedSphere uhs_to_ball(const GeneralizedSphere& s) {
    return invert_sphere(detail::z_flip_plane(), invert_sphere(detail::model_inversion_sphere(), s));
}
inline GeneralizedSphere ball_to_uhs(const GeneralizedSphere& s) {
    return invert_sphere(detail::model_inversion_sphere(), invert_sphere(detail::z_flip_plane(), s));
}

inline Point3 poincare_to_klein(const Point3& x) {
    return x * (2.0 / (1.0 + norm2(x)));
}

// ---------------------------------------------------------------------------
// Poincare ball metric and point transport.
// ---------------------------------------------------------------------------

// Hyperbolic distance between interior points of the unit ball.
inline double ball_distance(const Point3& a, const Point3& b) {
    double num = 2.0 * norm2(a - b);
    double den = (1.0 - norm2(a)) * (1.0 - norm2(b));
    double delta = num / den;
    // acosh(1 + delta) in a form stable for small delta
    return std::log1p(delta + std::sqrt(delta * (delta + 2.0)));
}

inline double uhs_distance(const Point3& a, const Point3& b) {
    double delta = norm2(a - b) / (2.0 * a.z * b.z);
    return std::log1p(delta + std::sqrt(delta * (delta + 2.0)));
}

// Mobius addition: the hyperbolic translation taking the origin to a,
// applied to x.  An isometry of the ball.
inline Point3 mobius_add(const Vec3& a, const Vec3& x) {
    double ax = dot(a, x);
    double a2 = norm2(a);
    double x2 = norm2(x);
    double den = 1.0 + 2.0 * ax + a2 * x2;
    return ((1.0 + 2.0 * ax + x2) * a + (1.0 - a2) * x) / den;
}

// Geodesic midpoint of two interior ball points.
inline Point3 ball_midpoint(const Point3& a, const Point3& b) {
    Vec3 w = mobius_add(-1.0 * a, b);
    double t = norm(w);
    if (t < 1e-300) return a;
    double half = std::tanh(std::atanh(std::min(t, 1.0 - 1e-16)) / 2.0);
    return mobius_add(a, (half / t) * w);
}

namespace detail {

// Circle through two ball points orthogonal to the unit sphere: center q with
// |q|^2 = 1 + tau^2.  Returns nullopt when a, b, origin are collinear (the
// geodesic is a diameter).
struct BallCircle {
    Vec3 center;
    double radius;
};

inline std::optional<BallCircle> geodesic_circle(const Vec3& a, const Vec3& b) {
    // Solve q = alpha a + beta b with q.a = (|a|^2+1)/2, q.b = (|b|^2+1)/2.
    double aa = norm2(a), bb = norm2(b), ab = dot(a, b);
    double det = aa * bb - ab * ab;
    if (std::abs(det) < 1e-24) return std::nullopt;
    double ra = (aa + 1.0) / 2.0, rb = (bb + 1.0) / 2.0;
    double alpha = (ra * bb - rb * ab) / det;
    double beta = (aa * rb - ab * ra) / det;
    Vec3 q = alpha * a + beta * b;
    double tau2 = norm2(q) - 1.0;
    if (tau2 <= 0) return std::nullopt;
    return BallCircle{q, std::sqrt(tau2)};
}

}  // namespace detail

// Samples along the ball-model geodesic from a to b: n+1 points, uniformly
// spaced in hyperbolic arc-length when both endpoints are interior, uniformly
// in the circle-angle parameter when an endpoint is ideal (|x| = 1), where
// hyperbolic arc-length is infinite.
inline std::vector<Point3> geodesic_arc(const Point3& a, const Point3& b, int n) {
    if (n < 1) throw DegenerateArc("geodesic_arc needs n >= 1");
    if (distance(a, b) < 1e-15) throw DegenerateArc("geodesic endpoints coincide");
    std::vector<Point3> out;
    out.reserve(n + 1);
    bool ideal = norm2(a) >= 1.0 - 1e-12 || norm2(b) >= 1.0 - 1e-12;
    if (!ideal) {
        Vec3 w = mobius_add(-1.0 * a, b);
        double t = norm(w);
        Vec3 dir = w / t;
        double total = 2.0 * std::atanh(std::min(t, 1.0 - 1e-16));
        for (int i = 0; i <= n; ++i) {
            double s = total * i / n;
            out.push_back(mobius_add(a, std::tanh(s / 2.0) * dir));
        }
        out.front() = a;
        out.back() = b;
        return out;
    }
    auto circ = detail::geodesic_circle(a, b);
    if (!circ) {
        // Diameter: uniform euclidean chord.
        for (int i = 0; i <= n; ++i) out.push_back(a + (b - a) * (double(i) / n));
        return out;
    }
    // Uniform sweep along the minor arc (the one inside the ball).
    Vec3 ua = (a - circ->center) / circ->radius;
    Vec3 ub = (b - circ->center) / circ->radius;
    double ang = std::acos(std::clamp(dot(ua, ub), -1.0, 1.0));
    Vec3 axis = cross(ua, ub);
    double axn = norm(axis);
    if (axn < 1e-15) throw DegenerateArc("degenerate geodesic circle");
    axis = axis / axn;
    Vec3 perp = cross(axis, ua);  // in-plane, 90 degrees ahead of ua
    for (int i = 0; i <= n; ++i) {
        double t = ang * i / n;
        Vec3 u = std::cos(t) * ua + std::sin(t) * perp;
        out.push_back(circ->center + circ->radius * u);
    }
    out.front() = a;
    out.back() = b;
    return out;
}

// ---------------------------------------------------------------------------
// Hyperbolic spheres in the ball model.
// ---------------------------------------------------------------------------

struct HypSphere {
    Point3 center;   // hyperbolic center, |center| < 1
    double radius;   // hyperbolic radius > 0
};

struct EuclideanSphere {
    Point3 center;
    double radius;
};

// Euclidean center and radius of a hyperbolic sphere in the Poincare ball.
// With r0 = tanh(rH/2) and d = |pH|:
//   pE = pH (r0^2 - 1) / (d^2 r0^2 - 1),   rE = r0 (d^2 - 1) / (d^2 r0^2 - 1).
inline EuclideanSphere hyp_sphere_to_euclidean(const HypSphere& h) {
    double r0 = std::tanh(h.radius / 2.0);
    double d2 = norm2(h.center);
    double den = d2 * r0 * r0 - 1.0;
    return {h.center * ((r0 * r0 - 1.0) / den), r0 * (d2 - 1.0) / den};
}

// Inverse of the radius map: hyperbolic radius of the sphere with euclidean
// radius rE centered (hyperbolically) at distance-from-origin-squared d2.
inline double hyp_radius_for_euclidean(double rE, double d2) {
    if (d2 < 1e-30) return 2.0 * std::atanh(std::min(rE, 1.0 - 1e-16));
    double a = rE * d2, bq = 1.0 - d2, c = -rE;
    double r0 = (-bq + std::sqrt(bq * bq - 4.0 * a * c)) / (2.0 * a);
    return 2.0 * std::atanh(std::clamp(r0, 0.0, 1.0 - 1e-16));
}

}  // namespace honeycomb
