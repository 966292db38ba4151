#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "honeycomb/conformal.hpp"
#include "honeycomb/errors.hpp"
#include "honeycomb/schlafli.hpp"

namespace honeycomb {

// Fundamental simplex of a hyperbolic {p,q,r} honeycomb in upper half space.
//
// Mirror chain M0 -p- M1 -q- M2 -r- M3 with all non-adjacent pairs
// orthogonal.  M0..M2 generate the symmetry group of one cell; M3 reflects
// across cell walls.  Infinite terms replace the angle condition by tangency
// at a single boundary point.
struct Simplex {
    std::array<GeneralizedSphere, 4> mirrors;
    SchlafliSymbol symbol;
    Geometry geometry = Geometry::Hyperbolic;
};

struct CanonicalizeResult {
    Point3 point;
    int total_reflections = 0;
    int cell_reflections = 0;  // count of M3 reflections
    bool converged = false;
};

inline constexpr double kDomainTol = 1e-12;
inline constexpr int kDefaultMaxIter = 4000;

namespace detail {

// Generic construction for finite p.  The meta-{p,q} tiling on the boundary
// plane decides the shape of M2:
//   spherical meta:  M2 is the sphere through the cell center (0,0,1),
//   euclidean meta:  M2 is the vertical plane x = 1,
//   hyperbolic meta: M2 realizes the {p,q} edge mirror of the unit-disk
//                    Poincare model (unit circle = the meta limit circle).
// M3 is the hemisphere centered at the origin whose radius makes the (M2,M3)
// interior angle pi/r (tangency for r = infinity).
inline Simplex build_finite_p(const SchlafliSymbol& s) {
    const double sp = sin_pi_over(s.p);
    const double cp = cos_pi_over(s.p);
    const double cq = cos_pi_over(s.q);
    const double cr = cos_pi_over(s.r);

    Simplex sx;
    sx.symbol = s;
    sx.geometry = Geometry::Hyperbolic;
    sx.mirrors[0] = GeneralizedSphere::plane(Vec3{0, -1, 0}, 0.0);
    sx.mirrors[1] = GeneralizedSphere::plane(Vec3{-sp, cp, 0}, 0.0);

    switch (classify_2d(s.p, s.q)) {
        case Geometry::Spherical: {
            double c = cq / std::sqrt(sp * sp - cq * cq);
            double rho = std::sqrt(c * c + 1.0);
            sx.mirrors[2] = GeneralizedSphere::sphere(Vec3{c, 0, 0}, rho, false);
            double R = s.r.is_infinite()
                           ? rho + c
                           : rho * cr + std::sqrt(std::max(rho * rho * cr * cr - 1.0, 0.0));
            sx.mirrors[3] = GeneralizedSphere::sphere(Vec3{0, 0, 0}, R, true);
            break;
        }
        case Geometry::Euclidean: {
            const double e = 1.0;
            sx.mirrors[2] = GeneralizedSphere::plane(Vec3{1, 0, 0}, e);
            double R = s.r.is_infinite() ? e : e / cr;
            sx.mirrors[3] = GeneralizedSphere::sphere(Vec3{0, 0, 0}, R, false);
            break;
        }
        case Geometry::Hyperbolic: {
            double cosh_rin = cq / sp;  // cosh of the meta-tile inradius
            double m = std::sqrt((cosh_rin - 1.0) / (cosh_rin + 1.0));  // tanh(r_in/2)
            double c = 0.5 * (m + 1.0 / m);
            double rho = 0.5 * (1.0 / m - m);
            sx.mirrors[2] = GeneralizedSphere::sphere(Vec3{c, 0, 0}, rho, false);
            double R = s.r.is_infinite()
                           ? rho + c
                           : rho * cr + std::sqrt(rho * rho * cr * cr + 1.0);
            sx.mirrors[3] = GeneralizedSphere::sphere(Vec3{0, 0, 0}, R, true);
            break;
        }
    }
    return sx;
}

// {inf,q,inf}: both outer pairs are tangencies.  Gauge is pinned by M3 = unit
// hemisphere and M1 tangent to M0 at (1,0,0) with radius 1.
inline Simplex build_inf_q_inf(const SchlafliSymbol& s) {
    const double cq = cos_pi_over(s.q);
    const double R = 1.0;
    double rho = 2.0 * R / (2.0 - cq);
    Simplex sx;
    sx.symbol = s;
    sx.geometry = Geometry::Hyperbolic;
    sx.mirrors[0] = GeneralizedSphere::plane(Vec3{0, -1, 0}, 0.0);
    sx.mirrors[1] = GeneralizedSphere::sphere(Vec3{R, R, 0}, R, false);
    sx.mirrors[2] = GeneralizedSphere::sphere(Vec3{rho - R, 0, 0}, rho, true);
    sx.mirrors[3] = GeneralizedSphere::sphere(Vec3{0, 0, 0}, R, false);
    return sx;
}

}  // namespace detail

// Builds the fundamental simplex.  Spherical and euclidean symbols are
// rejected: the upper-half-space pipeline exists for hyperbolic honeycombs.
inline Simplex build_simplex(const SchlafliSymbol& s) {
    if (classify_3d(s) != Geometry::Hyperbolic)
        throw UnsupportedGeometry(to_string(s) + " is not hyperbolic");
    if (s.p.is_infinite() && s.r.is_infinite()) return detail::build_inf_q_inf(s);
    if (s.p.is_infinite()) {
        // Build the reversed (dual) symbol and relabel the mirrors in reverse;
        // the Coxeter diagram reads the same backwards.
        Simplex d = build_simplex(s.dual());
        Simplex sx;
        sx.symbol = s;
        sx.geometry = Geometry::Hyperbolic;
        sx.mirrors = {d.mirrors[3], d.mirrors[2], d.mirrors[1], d.mirrors[0]};
        return sx;
    }
    return detail::build_finite_p(s);
}

// Residuals of the six pairwise mirror conditions, in the order
// (0,1), (1,2), (2,3), (0,2), (0,3), (1,3).  Finite targets are angle
// residuals |measured - pi/t|; infinite targets are tangency residuals.
inline std::array<double, 6> verify_angles(const Simplex& sx) {
    const std::array<std::pair<int, int>, 6> pairs = {
        {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {0, 3}, {1, 3}}};
    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) {
        auto [i, j] = pairs[k];
        ExtendedInt target(2);
        if (i == 0 && j == 1) target = sx.symbol.p;
        else if (i == 1 && j == 2) target = sx.symbol.q;
        else if (i == 2 && j == 3) target = sx.symbol.r;
        else target = ExtendedInt(2);
        if (target.is_infinite()) {
            out[k] = tangency_residual(sx.mirrors[i], sx.mirrors[j]);
        } else {
            out[k] = std::abs(interior_dihedral(sx.mirrors[i], sx.mirrors[j]) -
                              std::numbers::pi / target.value());
        }
    }
    return out;
}

// Closed fundamental domain membership (tolerance kDomainTol).
inline bool in_domain(const Simplex& sx, const Point3& x, double tol = kDomainTol) {
    for (const auto& m : sx.mirrors)
        if (m.signed_side(x) > tol) return false;
    return true;
}

// Reflect x through the first violated mirror (scanning M0..M3 in index
// order) until it lands in the fundamental domain or max_iter is reached.
inline CanonicalizeResult canonicalize(const Simplex& sx, Point3 x,
                                       int max_iter = kDefaultMaxIter) {
    CanonicalizeResult res;
    for (int it = 0; it < max_iter; ++it) {
        int violated = -1;
        for (int i = 0; i < 4; ++i) {
            if (sx.mirrors[i].signed_side(x) > kDomainTol) {
                violated = i;
                break;
            }
        }
        if (violated < 0) {
            res.point = x;
            res.converged = true;
            return res;
        }
        x = invert_point(sx.mirrors[violated], x);
        ++res.total_reflections;
        if (violated == 3) ++res.cell_reflections;
    }
    res.point = x;
    res.converged = false;
    return res;
}

// A circle in the boundary plane z = 0.
struct BoundaryCircle {
    Vec3 center;  // z = 0
    double radius = 0.0;
};

namespace detail {

// Solves for the boundary circle orthogonal to three mirrors (all our mirrors
// are vertical planes or hemispheres centered on z = 0, so this is a 3x3
// linear system in the circle center (vx, vy) and s0 = |v|^2 - t^2).
// Returns t^2, which is negative when the common-perpendicular circle does
// not exist (the three mirrors share a material point instead).
struct OrthoCircle {
    Vec3 center;
    double t2 = 0.0;
    bool ok = false;
};

inline OrthoCircle circle_orthogonal_to(const GeneralizedSphere& a, const GeneralizedSphere& b,
                                        const GeneralizedSphere& c) {
    double M[3][3];
    double rhs[3];
    const GeneralizedSphere* ms[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
        const GeneralizedSphere& g = *ms[i];
        if (g.is_plane()) {
            M[i][0] = g.center.x;
            M[i][1] = g.center.y;
            M[i][2] = 0.0;
            rhs[i] = g.radius;
        } else {
            M[i][0] = 2.0 * g.center.x;
            M[i][1] = 2.0 * g.center.y;
            M[i][2] = -1.0;
            rhs[i] = norm2(g.center) - g.radius * g.radius;
        }
    }
    // Gaussian elimination with partial pivoting.
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int rw = col + 1; rw < 3; ++rw)
            if (std::abs(M[idx[rw]][col]) > std::abs(M[idx[piv]][col])) piv = rw;
        std::swap(idx[col], idx[piv]);
        if (std::abs(M[idx[col]][col]) < 1e-14) return {};
        for (int rw = col + 1; rw < 3; ++rw) {
            double f = M[idx[rw]][col] / M[idx[col]][col];
            for (int cc = col; cc < 3; ++cc) M[idx[rw]][cc] -= f * M[idx[col]][cc];
            rhs[idx[rw]] -= f * rhs[idx[col]];
        }
    }
    double sol[3];
    for (int col = 2; col >= 0; --col) {
        double v = rhs[idx[col]];
        for (int cc = col + 1; cc < 3; ++cc) v -= M[idx[col]][cc] * sol[cc];
        sol[col] = v / M[idx[col]][col];
    }
    OrthoCircle out;
    out.center = Vec3{sol[0], sol[1], 0.0};
    out.t2 = sol[0] * sol[0] + sol[1] * sol[1] - sol[2];
    out.ok = true;
    return out;
}

// 2D traces of the mirrors on the boundary plane z = 0.
struct Trace2 {
    bool is_line;      // line: n.x = d; circle: |x - c| = r
    Vec3 n_or_c;       // z = 0
    double d_or_r;
};

inline Trace2 boundary_trace(const GeneralizedSphere& g) {
    if (g.is_plane()) return {true, Vec3{g.center.x, g.center.y, 0}, g.radius};
    return {false, Vec3{g.center.x, g.center.y, 0}, g.radius};
}

// Intersection points of two boundary traces; the second point may be the
// point at infinity (two lines).  Returns false when tangent or disjoint.
inline bool trace_intersection(const Trace2& A, const Trace2& B, Point3& p1, Point3& p2) {
    if (A.is_line && B.is_line) {
        double det = A.n_or_c.x * B.n_or_c.y - A.n_or_c.y * B.n_or_c.x;
        if (std::abs(det) < 1e-13) return false;
        double x = (A.d_or_r * B.n_or_c.y - B.d_or_r * A.n_or_c.y) / det;
        double y = (A.n_or_c.x * B.d_or_r - B.n_or_c.x * A.d_or_r) / det;
        p1 = Point3{x, y, 0};
        p2 = point_at_infinity();
        return true;
    }
    if (A.is_line || B.is_line) {
        const Trace2& L = A.is_line ? A : B;
        const Trace2& C = A.is_line ? B : A;
        double h = dot(L.n_or_c, C.n_or_c) - L.d_or_r;  // signed distance of center
        double disc = C.d_or_r * C.d_or_r - h * h;
        if (disc <= 1e-20) return false;
        Vec3 foot = C.n_or_c - h * L.n_or_c;
        Vec3 t{-L.n_or_c.y, L.n_or_c.x, 0};
        double s = std::sqrt(disc);
        p1 = foot + s * t;
        p2 = foot - s * t;
        return true;
    }
    Vec3 d = B.n_or_c - A.n_or_c;
    double dist2 = norm2(d);
    if (dist2 < 1e-26) return false;
    double ra = A.d_or_r, rb = B.d_or_r;
    double a = (dist2 + ra * ra - rb * rb) / (2.0 * dist2);
    double disc = ra * ra - a * a * dist2;
    if (disc <= 1e-20) return false;
    Vec3 mid = A.n_or_c + a * d;
    Vec3 t = normalized(Vec3{-d.y, d.x, 0});
    double s = std::sqrt(disc);
    p1 = mid + s * t;
    p2 = mid - s * t;
    return true;
}

}  // namespace detail

// Shadow disk of the hyperideal vertex (the circle at infinity of the plane
// orthogonal to the three vertex mirrors M1, M2, M3).  Absent when the vertex
// is material or ideal.
inline std::optional<BoundaryCircle> vertex_disk(const Simplex& sx) {
    auto oc = detail::circle_orthogonal_to(sx.mirrors[1], sx.mirrors[2], sx.mirrors[3]);
    if (!oc.ok || oc.t2 <= 1e-12) return std::nullopt;
    return BoundaryCircle{oc.center, std::sqrt(oc.t2)};
}

// Head disk of the hyperideal cell (orthogonal to the cell mirrors M0..M2).
inline std::optional<BoundaryCircle> cell_head(const Simplex& sx) {
    auto oc = detail::circle_orthogonal_to(sx.mirrors[0], sx.mirrors[1], sx.mirrors[2]);
    if (!oc.ok || oc.t2 <= 1e-12) return std::nullopt;
    return BoundaryCircle{oc.center, std::sqrt(oc.t2)};
}

// Position of the honeycomb vertex V = M1 ^ M2 ^ M3 in upper half space,
// when it is material or ideal (z >= 0).
inline std::optional<Point3> vertex_position_uhs(const Simplex& sx) {
    auto oc = detail::circle_orthogonal_to(sx.mirrors[1], sx.mirrors[2], sx.mirrors[3]);
    if (!oc.ok || oc.t2 > 1e-12) return std::nullopt;
    double z2 = std::max(-oc.t2, 0.0);
    return Point3{oc.center.x, oc.center.y, std::sqrt(z2)};
}

// Deterministic strictly-interior point of the fundamental domain.
inline Point3 domain_probe(const Simplex& sx) {
    // Deterministic low-discrepancy sweep over a box covering the domain.
    Point3 best{0, 0, 1};
    double best_margin = 1e300;
    auto consider = [&](const Point3& cand) {
        double worst = -1e300;
        for (const auto& m : sx.mirrors) worst = std::max(worst, m.signed_side(cand));
        if (worst < best_margin) {
            best_margin = worst;
            best = cand;
        }
    };
    const double phi1 = 0.7548776662466927, phi2 = 0.5698402909980532,
                 phi3 = 0.35792788444704536;
    for (int i = 0; i < 20000; ++i) {
        double u = std::fmod(0.5 + phi1 * (i + 1), 1.0);
        double v = std::fmod(0.5 + phi2 * (i + 1), 1.0);
        double w = std::fmod(0.5 + phi3 * (i + 1), 1.0);
        consider(Point3{(u - 0.5) * 12.0, (v - 0.5) * 12.0, 1e-3 + w * 6.0});
        if (best_margin < -1e-4) break;
    }
    return best;
}

}  // namespace honeycomb
