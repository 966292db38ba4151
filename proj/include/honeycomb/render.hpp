#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "honeycomb/image.hpp"
#include "honeycomb/parallel.hpp"
#include "honeycomb/simplex.hpp"

namespace honeycomb {

inline constexpr double kDefaultBananaRadius = 0.025;

// Window onto the boundary plane z = 0.  half_extent is half the world width
// of the image; the vertical extent follows from the aspect ratio.  The
// optional pre-isometry (a composed inversion word) is applied to every
// sample point before canonicalization.
struct Viewport {
    Vec3 center{0, 0, 0};
    double half_extent = 2.0;
    int width = 512;
    int height = 512;
    std::vector<GeneralizedSphere> pre_isometry;

    double world_per_pixel() const { return 2.0 * half_extent / width; }
};

// Intermediate of the two-pass renderer: per 4x4-subsample cell-adjacency
// depth (or Unconverged) plus banana membership.
struct DepthGrid {
    static constexpr int kSub = 4;
    static constexpr std::int32_t kUnconverged = -1;

    int width = 0, height = 0;  // pixels
    std::vector<std::int32_t> depth;   // (4*height) x (4*width) raster
    std::vector<std::uint8_t> banana;
    std::uint64_t depth_sum = 0;
    std::uint64_t converged_count = 0;

    DepthGrid() = default;
    DepthGrid(int w, int h)
        : width(w), height(h),
          depth(static_cast<std::size_t>(w) * h * kSub * kSub, kUnconverged),
          banana(static_cast<std::size_t>(w) * h * kSub * kSub, 0) {}

    std::size_t sub_index(int px, int py, int sx, int sy) const {
        return static_cast<std::size_t>(py * kSub + sy) * (static_cast<std::size_t>(width) * kSub) +
               (static_cast<std::size_t>(px) * kSub + sx);
    }
    std::int32_t depth_at(int px, int py, int sx, int sy) const {
        return depth[sub_index(px, py, sx, sy)];
    }
    bool banana_at(int px, int py, int sx, int sy) const {
        return banana[sub_index(px, py, sx, sy)] != 0;
    }
    double mean_depth() const {
        return converged_count == 0 ? 0.0
                                    : static_cast<double>(depth_sum) / static_cast<double>(converged_count);
    }
};

// RGB triples in [0,1].
using Color = Vec3;

// Skew hexagon along the edges of the RGB cube:
// white, cyan, blue, black, red, yellow, and back to white.
struct Palette {
    std::array<Color, 7> hexagon = {Color{1, 1, 1}, Color{0, 1, 1}, Color{0, 0, 1},
                                    Color{0, 0, 0}, Color{1, 0, 0}, Color{1, 1, 0},
                                    Color{1, 1, 1}};
    double start_offset = 0.0;  // in [0, 6)
    int direction = 1;          // +1 or -1
    double rate_k = 1.0;        // rate = rate_k / sqrt(max(mean_depth, 1))
    Color bailout{0, 0, 0};     // color of unconverged samples
};

// Piecewise-linear position t along the hexagon path, period 6.
inline Color color_path(const Palette& pal, double t) {
    t = std::fmod(t, 6.0);
    if (t < 0) t += 6.0;
    int seg = static_cast<int>(t);
    if (seg > 5) seg = 5;
    double f = t - seg;
    return pal.hexagon[seg] * (1.0 - f) + pal.hexagon[seg + 1] * f;
}

namespace detail {

// Per-simplex data for the banana (thick apparent edge) test.  Apparent
// edges within a hyperideal-vertex disk are traces of the cell-wall mirror;
// the banana is the set of points within a fixed hyperbolic distance of that
// geodesic, measured in the disk's own Poincare metric.
struct BananaContext {
    bool active = false;
    Vec3 disk_center;
    double disk_radius = 1.0;
    bool trace_is_line = false;
    Vec3 circle_center;      // normalized disk coordinates
    double circle_radius = 0.0;
    Vec3 line_normal;
    double sinh_radius = 0.0;

    // x is a boundary point (z = 0); true iff inside the disk and within the
    // banana distance of the apparent-edge geodesic.
    bool test(const Point3& x) const {
        if (!active) return false;
        Vec3 w = (x - disk_center) / disk_radius;
        double w2 = w.x * w.x + w.y * w.y;
        if (w2 >= 1.0) return false;
        double s;
        if (trace_is_line) {
            s = 2.0 * std::abs(dot(line_normal, w)) / (1.0 - w2);
        } else {
            double d2 = norm2(w - circle_center);
            s = std::abs(d2 - circle_radius * circle_radius) /
                (circle_radius * (1.0 - w2));
        }
        return s < sinh_radius;
    }
};

inline BananaContext make_banana_context(const Simplex& sx, double radius) {
    BananaContext ctx;
    auto disk = vertex_disk(sx);
    if (!disk || radius <= 0.0) return ctx;
    ctx.active = true;
    ctx.disk_center = disk->center;
    ctx.disk_radius = disk->radius;
    ctx.sinh_radius = std::sinh(radius);
    const GeneralizedSphere& m3 = sx.mirrors[3];
    if (m3.is_plane()) {
        ctx.trace_is_line = true;
        ctx.line_normal = Vec3{m3.center.x, m3.center.y, 0};
        // The trace is orthogonal to the disk, hence passes through its center.
    } else {
        ctx.trace_is_line = false;
        ctx.circle_center = (Vec3{m3.center.x, m3.center.y, 0} - ctx.disk_center) / ctx.disk_radius;
        ctx.circle_radius = m3.radius / ctx.disk_radius;
    }
    return ctx;
}

}  // namespace detail

// True iff the canonicalized boundary point x lies within hyperbolic
// distance `radius` (in its vertex disk's 2D metric) of the apparent-edge
// geodesic.  False outside vertex disks.
inline bool banana_test(const Simplex& sx, const Point3& x, double radius) {
    return detail::make_banana_context(sx, radius).test(x);
}

// First pass: canonicalize every subsample (4x4 grid per pixel at offsets
// (i+0.5)/4) and record cell-adjacency depth and banana membership.
inline DepthGrid depth_field(const Simplex& sx, const Viewport& vp,
                             int max_iter = kDefaultMaxIter,
                             double banana_radius = kDefaultBananaRadius, int workers = 0) {
    DepthGrid grid(vp.width, vp.height);
    const double wpp = vp.world_per_pixel();
    const detail::BananaContext banana = detail::make_banana_context(sx, banana_radius);
    const int sub = DepthGrid::kSub;

    parallel_for_blocks(vp.height, workers, [&](int y0, int y1) {
        for (int py = y0; py < y1; ++py) {
            for (int ssy = 0; ssy < sub; ++ssy) {
                double v = py + (ssy + 0.5) / sub;
                double wy = vp.center.y + (vp.height / 2.0 - v) * wpp;
                for (int px = 0; px < vp.width; ++px) {
                    for (int ssx = 0; ssx < sub; ++ssx) {
                        double u = px + (ssx + 0.5) / sub;
                        double wx = vp.center.x + (u - vp.width / 2.0) * wpp;
                        Point3 pt{wx, wy, 0.0};
                        for (const auto& m : vp.pre_isometry) pt = invert_point(m, pt);
                        CanonicalizeResult cr = canonicalize(sx, pt, max_iter);
                        std::size_t idx = grid.sub_index(px, py, ssx, ssy);
                        if (cr.converged) {
                            grid.depth[idx] = cr.cell_reflections;
                            if (banana.active && banana.test(cr.point)) grid.banana[idx] = 1;
                        }
                    }
                }
            }
        }
    });

    // Exact integer reduction, independent of the worker partition.
    for (std::int32_t d : grid.depth) {
        if (d >= 0) {
            grid.depth_sum += static_cast<std::uint64_t>(d);
            ++grid.converged_count;
        }
    }
    return grid;
}

// Second pass: map depths to colors along the palette path at a rate
// proportional to 1/sqrt(mean depth), average the 16 subsamples per pixel in
// linear space, and quantize to 8-bit.  Banana samples are black; unconverged
// samples take the bail-out color.
inline Image colorize(const DepthGrid& grid, const Palette& pal,
                      std::optional<double> fixed_rate = std::nullopt) {
    if (grid.width <= 0 || grid.height <= 0 || grid.converged_count == 0)
        throw EmptyGrid("depth grid has no converged samples");
    double rate = fixed_rate ? *fixed_rate
                             : pal.rate_k / std::sqrt(std::max(grid.mean_depth(), 1.0));
    Image img(grid.width, grid.height);
    const int sub = DepthGrid::kSub;
    for (int py = 0; py < grid.height; ++py) {
        for (int px = 0; px < grid.width; ++px) {
            Color acc{0, 0, 0};
            for (int sy = 0; sy < sub; ++sy) {
                for (int sx = 0; sx < sub; ++sx) {
                    std::size_t idx = grid.sub_index(px, py, sx, sy);
                    Color c;
                    if (grid.banana[idx]) {
                        c = Color{0, 0, 0};
                    } else if (grid.depth[idx] < 0) {
                        c = pal.bailout;
                    } else {
                        double t = pal.start_offset + pal.direction * grid.depth[idx] * rate;
                        c = color_path(pal, t);
                    }
                    acc += c;
                }
            }
            acc = acc / (sub * sub);
            std::uint8_t* p = img.pixel(px, py);
            p[0] = static_cast<std::uint8_t>(std::lround(std::clamp(acc.x, 0.0, 1.0) * 255.0));
            p[1] = static_cast<std::uint8_t>(std::lround(std::clamp(acc.y, 0.0, 1.0) * 255.0));
            p[2] = static_cast<std::uint8_t>(std::lround(std::clamp(acc.z, 0.0, 1.0) * 255.0));
        }
    }
    return img;
}

enum class Centering { Auto, Cell, Edge };

// Cell-centered unless both the vertices and the cells fail to be material,
// in which case the most symmetric picture is edge-centered.
inline Centering default_centering(const SchlafliSymbol& s) {
    if (vertex_type(s) != ElementType::Material && cell_type(s) != ElementType::Material)
        return Centering::Edge;
    return Centering::Cell;
}

// Composed-inversion word mapping view coordinates to pattern coordinates so
// that the central honeycomb edge runs through 0 and infinity.
inline std::vector<GeneralizedSphere> edge_centering_isometry(const Simplex& sx) {
    Point3 a, b;
    if (vertex_type(sx.symbol) == ElementType::Hyperideal) {
        if (sx.symbol.r.is_infinite()) return {};  // edge degenerates to one ideal point
        if (!detail::trace_intersection(detail::boundary_trace(sx.mirrors[2]),
                                        detail::boundary_trace(sx.mirrors[3]), a, b))
            return {};
    } else {
        auto v = vertex_position_uhs(sx);
        if (!v || v->z > 1e-9) return {};  // material vertices: no ideal edge ends
        a = Point3{v->x, v->y, 0};
        Point3 m = invert_point(sx.mirrors[0], *v);
        b = Point3{m.x, m.y, 0};
    }
    if (is_at_infinity(b)) std::swap(a, b);
    std::vector<GeneralizedSphere> word;
    if (is_at_infinity(a)) {
        // Edge already ends at infinity; just translate b to the origin.
        if (norm(b) > 1e-12)
            word.push_back(GeneralizedSphere::plane(normalized(b), norm(b) / 2.0));
        return word;
    }
    double r = distance(a, b);
    // Applied to samples in order: plane reflection taking a to 0, then the
    // inversion fixing a and sending b to infinity.
    if (norm(a) > 1e-12)
        word.push_back(GeneralizedSphere::plane(normalized(a), norm(a) / 2.0));
    word.push_back(GeneralizedSphere::sphere(b, r, true));
    return word;
}

// Viewport wide enough to show the main features of the boundary pattern.
inline Viewport default_viewport(const Simplex& sx) {
    Viewport vp;
    double reach = 1.0;
    if (!sx.mirrors[3].is_plane())
        reach = std::max(reach, norm(Vec3{sx.mirrors[3].center.x, sx.mirrors[3].center.y, 0}) +
                                    sx.mirrors[3].radius);
    if (auto d = vertex_disk(sx)) reach = std::max(reach, norm(d->center) + d->radius);
    if (auto h = cell_head(sx)) reach = std::max(reach, norm(h->center) + h->radius);
    vp.half_extent = 1.15 * reach;
    return vp;
}

// Full pipeline: build the simplex, compute the depth field, colorize.
// Symbols whose boundary pattern is empty (no hyperideal vertices or cells)
// produce an image of the bail-out color.
inline Image render(const SchlafliSymbol& s, const Viewport& vp, const Palette& pal,
                    double banana_radius = kDefaultBananaRadius,
                    int max_iter = kDefaultMaxIter, int workers = 0) {
    if (classify_3d(s) != Geometry::Hyperbolic)
        throw UnsupportedGeometry(to_string(s) + " has no boundary-at-infinity image");
    Simplex sx = build_simplex(s);
    DepthGrid grid = depth_field(sx, vp, max_iter, banana_radius, workers);
    if (grid.converged_count == 0) {
        Image img(vp.width, vp.height);
        for (int y = 0; y < vp.height; ++y)
            for (int x = 0; x < vp.width; ++x) {
                std::uint8_t* p = img.pixel(x, y);
                p[0] = static_cast<std::uint8_t>(std::lround(std::clamp(pal.bailout.x, 0.0, 1.0) * 255));
                p[1] = static_cast<std::uint8_t>(std::lround(std::clamp(pal.bailout.y, 0.0, 1.0) * 255));
                p[2] = static_cast<std::uint8_t>(std::lround(std::clamp(pal.bailout.z, 0.0, 1.0) * 255));
            }
        return img;
    }
    return colorize(grid, pal);
}

}  // namespace honeycomb
