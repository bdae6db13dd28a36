#ifndef CROSSWALK_GEOMETRY_HPP
#define CROSSWALK_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace crosswalk {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

/// Rectangular enclosure [0, length] x [0, width].
struct Room {
    double length = 0.0; // abscissa extent
    double width = 0.0;  // ordinate extent
};

/// Vertical line spanning the room at a fixed abscissa, 0 < x < room length.
struct Link {
    double x = 0.0;
};

/// Map an angle into [0, 2*pi).
inline double canonical_angle(double theta) {
    double a = std::fmod(theta, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0; // fmod rounding can land exactly on 2*pi
    return a;
}

/// Result of folding one coordinate back into [0, extent].
struct FoldedCoordinate {
    double value = 0.0;
    int parity = +1; // +1 orientation preserved, -1 mirrored
};

/// Triangle-wave image of u with period 2*extent, plus the orientation of
/// the mirror copy u landed in. This is the one-dimensional specular
/// reflection map: walls at 0 and extent.
///
/// fmod is exact, and (2*extent - r) is exact for r >= extent by Sterbenz,
/// so the folded value is the correctly rounded image of the input and
/// always lies in [0, extent].
inline FoldedCoordinate fold_coordinate(double u, double extent) {
    if (!std::isfinite(u)) throw std::invalid_argument("fold_coordinate: non-finite coordinate");
    if (!std::isfinite(extent) || !(extent > 0.0))
        throw std::invalid_argument("fold_coordinate: extent must be positive and finite");

    const double period = 2.0 * extent;
    double r = std::fmod(u, period);
    if (r < 0.0) r += period;
    if (r <= extent) return {r, +1};
    return {period - r, -1};
}

/// One motion step folded into the room by specular reflection: an ordered
/// chain of sub-segments, each inside the closed rectangle, consecutive
/// ones meeting on a wall. theta_out is the heading after all reflections.
struct FoldedPath {
    std::vector<Point> vertices; // size = segments() + 1
    double theta_out = 0.0;

    std::size_t segments() const { return vertices.empty() ? 0 : vertices.size() - 1; }

    const Point& end() const { return vertices.back(); }

    double length() const {
        double acc = 0.0;
        for (std::size_t i = 1; i < vertices.size(); ++i)
            acc += std::hypot(vertices[i].x - vertices[i - 1].x,
                              vertices[i].y - vertices[i - 1].y);
        return acc;
    }
};

namespace detail {

inline void require_valid_room(const Room& room, const char* where) {
    if (!std::isfinite(room.length) || !(room.length > 0.0) ||
        !std::isfinite(room.width) || !(room.width > 0.0))
        throw std::invalid_argument(std::string(where) + ": room extents must be positive and finite");
}

inline void require_inside(const Point& p, const Room& room, const char* where) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument(std::string(where) + ": non-finite start point");
    if (p.x < 0.0 || p.x > room.length || p.y < 0.0 || p.y > room.width)
        throw std::invalid_argument(std::string(where) + ": start point outside the room");
}

/// Wall-contact parameters of the 1D motion u0 + t*du against walls at
/// multiples of extent, restricted to t in (eps, t_max - eps).
inline void wall_contact_times(double u0, double du, double extent, double t_max,
                               double eps, std::vector<double>& out) {
    if (du == 0.0) return;
    const double u1 = u0 + t_max * du;
    const double lo = std::min(u0, u1);
    const double hi = std::max(u0, u1);
    auto k_lo = static_cast<std::int64_t>(std::ceil(lo / extent)) - 1;
    auto k_hi = static_cast<std::int64_t>(std::floor(hi / extent)) + 1;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const double t = (static_cast<double>(k) * extent - u0) / du;
        if (t > eps && t < t_max - eps) out.push_back(t);
    }
}

} // namespace detail

/// Advance from `start` by distance `step_length` along heading `theta`,
/// reflecting specularly off the four walls as many times as the step
/// requires. Appends nothing on error; `out` is reused storage.
///
/// Implementation: the straight (unfolded) segment is split at every wall
/// contact, and both coordinates of each split point are folded back into
/// the room. Between contacts the fold is an isometry, so sub-segment
/// lengths add up to step_length exactly and containment holds by
/// construction.
inline void fold_step_into(const Point& start, double theta, double step_length,
                           const Room& room, FoldedPath& out) {
    detail::require_valid_room(room, "fold_step");
    detail::require_inside(start, room, "fold_step");
    if (!std::isfinite(theta)) throw std::invalid_argument("fold_step: non-finite heading");
    if (!std::isfinite(step_length) || step_length < 0.0)
        throw std::invalid_argument("fold_step: step length must be non-negative and finite");

    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    const double eps = 1e-12 * std::max(room.length, room.width);

    thread_local std::vector<double> contacts;
    contacts.clear();
    detail::wall_contact_times(start.x, dx, room.length, step_length, eps, contacts);
    detail::wall_contact_times(start.y, dy, room.width, step_length, eps, contacts);
    std::sort(contacts.begin(), contacts.end());

    out.vertices.clear();
    out.vertices.push_back(start);
    double prev_t = 0.0;
    for (double t : contacts) {
        if (t - prev_t <= eps) continue; // duplicate contact (corner hit)
        out.vertices.push_back(Point{fold_coordinate(start.x + t * dx, room.length).value,
                                     fold_coordinate(start.y + t * dy, room.width).value});
        prev_t = t;
    }
    const FoldedCoordinate fx = fold_coordinate(start.x + step_length * dx, room.length);
    const FoldedCoordinate fy = fold_coordinate(start.y + step_length * dy, room.width);
    out.vertices.push_back(Point{fx.value, fy.value});
    out.theta_out = canonical_angle(std::atan2(fy.parity * dy, fx.parity * dx));
}

inline FoldedPath fold_step(const Point& start, double theta, double step_length,
                            const Room& room) {
    FoldedPath path;
    fold_step_into(start, theta, step_length, room, path);
    return path;
}

/// Number of strict sign changes of (x - link.x) along the folded path.
/// A vertex exactly on the link line inherits the side of the preceding
/// sub-segment; a path that starts on the line starts on the low side.
inline std::uint64_t count_link_crossings(const FoldedPath& path, const Link& link) {
    if (path.vertices.empty()) return 0;
    const double xl = link.x;
    int side = path.vertices.front().x > xl ? +1 : -1;
    std::uint64_t crossings = 0;
    for (std::size_t i = 1; i < path.vertices.size(); ++i) {
        const double d = path.vertices[i].x - xl;
        if (d == 0.0) continue; // on the line: keep the previous side
        const int s = d > 0.0 ? +1 : -1;
        if (s != side) {
            ++crossings;
            side = s;
        }
    }
    return crossings;
}

/// Crossing count of the same step computed without reflections: the
/// straight segment from `start` is counted against the mirror lattice of
/// link images {2k*L + x_l} U {2k*L - x_l}. Equals
/// count_link_crossings(fold_step(...)) for all valid inputs.
inline std::uint64_t unfold_crossings(const Point& start, double theta, double step_length,
                                      const Room& room, const Link& link) {
    detail::require_valid_room(room, "unfold_crossings");
    detail::require_inside(start, room, "unfold_crossings");
    if (!std::isfinite(theta)) throw std::invalid_argument("unfold_crossings: non-finite heading");
    if (!std::isfinite(step_length) || step_length < 0.0)
        throw std::invalid_argument("unfold_crossings: step length must be non-negative and finite");

    const double L = room.length;
    const double xa = start.x;
    const double xb = start.x + step_length * std::cos(theta);
    const double lo = std::min(xa, xb);
    const double hi = std::max(xa, xb);

    std::uint64_t crossings = 0;
    const auto k_lo = static_cast<std::int64_t>(std::floor(lo / (2.0 * L))) - 1;
    const auto k_hi = static_cast<std::int64_t>(std::ceil(hi / (2.0 * L))) + 1;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const double base = 2.0 * static_cast<double>(k) * L;
        // even image preserves orientation, odd image mirrors it
        const double images[2] = {base + link.x, base - link.x};
        const int orientation[2] = {+1, -1};
        for (int j = 0; j < 2; ++j) {
            const double v = images[j];
            if (xa == v) {
                // start on a link image: counted as the low side of the folded
                // link, which is the orientation-dependent side of the image
                if (orientation[j] > 0 ? xb > v : xb < v) ++crossings;
            } else if ((xa - v) * (xb - v) < 0.0) {
                ++crossings; // strict straddle; an endpoint on the image keeps its side
            }
        }
    }
    return crossings;
}

} // namespace crosswalk

#endif // CROSSWALK_GEOMETRY_HPP
