#ifndef CROSSWALK_BUFFON_HPP
#define CROSSWALK_BUFFON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "crosswalk/errors.hpp"
#include "crosswalk/geometry.hpp"
#include "crosswalk/rng.hpp"
#include "crosswalk/stats.hpp"

namespace crosswalk {

/// One needle landing, reduced by symmetry: distance of the midpoint to the
/// nearest line in [0, L/2] and acute angle to the line direction in
/// [0, pi/2].
struct NeedleDrop {
    double midpoint_distance = 0.0; // d_m
    double angle = 0.0;             // theta
};

/// Rectifiable curve as an ordered polyline in shape-local coordinates.
/// A closed contour repeats its first vertex at the end.
struct NoodleShape {
    std::vector<Point> vertices;
    double total_length = 0.0; // sum of vertex-to-vertex distances
    std::string label;
};

struct DropConfig {
    double spacing = 2.0; // lattice line spacing L
    std::uint64_t n_drops = 1'000'000;
    std::uint64_t seed = 1;

    void validate() const {
        if (!std::isfinite(spacing) || !(spacing > 0.0))
            throw config_error("spacing", "must be positive and finite");
        if (n_drops < 1)
            throw config_error("n_drops", "must be at least 1");
    }
};

/// Crossing probability of a short straight needle: 2*d_s / (pi*L).
/// Only valid for d_s <= L; beyond that no closed form is provided and the
/// call is rejected (estimators still run and report empirical values).
inline double analytic_crossing_p(double needle_length, double spacing) {
    if (!std::isfinite(needle_length) || needle_length < 0.0)
        throw std::invalid_argument("analytic_crossing_p: needle length must be non-negative");
    if (!std::isfinite(spacing) || !(spacing > 0.0))
        throw std::invalid_argument("analytic_crossing_p: spacing must be positive");
    if (needle_length > spacing)
        throw std::domain_error("analytic_crossing_p: out of regime, needle longer than spacing");
    return 2.0 * needle_length / (kPi * spacing);
}

/// A dropped needle touches a line iff d_m <= (d_s/2) * sin(theta),
/// boundary included.
inline bool needle_crosses(const NeedleDrop& drop, double needle_length) {
    return drop.midpoint_distance <= 0.5 * needle_length * std::sin(drop.angle);
}

/// Draw (d_m, theta) from the joint density 4/(pi*L): d_m uniform on
/// [0, L/2], theta uniform on [0, pi/2], independent.
inline NeedleDrop sample_drop(double spacing, Rng& rng) {
    if (!std::isfinite(spacing) || !(spacing > 0.0))
        throw std::invalid_argument("sample_drop: spacing must be positive");
    NeedleDrop d;
    d.midpoint_distance = rng.uniform(0.0, 0.5 * spacing);
    d.angle = rng.uniform(0.0, 0.5 * kPi);
    return d;
}

/// Monte Carlo estimate of the needle crossing probability with a Wilson
/// confidence interval. Deterministic given the seed.
inline EstimateRecord estimate_needle_p(double needle_length, const DropConfig& config) {
    if (!std::isfinite(needle_length) || !(needle_length > 0.0))
        throw std::invalid_argument("estimate_needle_p: needle length must be positive");
    config.validate();

    Rng rng(config.seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < config.n_drops; ++i)
        if (needle_crosses(sample_drop(config.spacing, rng), needle_length)) ++hits;

    EstimateRecord rec;
    rec.n = config.n_drops;
    rec.point = static_cast<double>(hits) / static_cast<double>(config.n_drops);
    const auto [lo, hi] = wilson_interval(hits, config.n_drops, kDefaultZ);
    rec.ci_low = lo;
    rec.ci_high = hi;
    if (needle_length <= config.spacing)
        rec.analytic = analytic_crossing_p(needle_length, config.spacing);
    return rec;
}

enum class ShapeKind { segment, polyline, arc, semicircle, circle };

/// Kind-specific construction parameters; only the field the kind uses is
/// read.
struct ShapeDetail {
    double bend_angle = 0.5 * kPi; // polyline: interior angle between the two legs
    double arc_angle = 0.5 * kPi;  // arc: subtended angle in (0, 2*pi]
};

namespace detail {

inline double polyline_length(const std::vector<Point>& vertices) {
    double acc = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        acc += std::hypot(vertices[i].x - vertices[i - 1].x, vertices[i].y - vertices[i - 1].y);
    return acc;
}

/// Inscribe `segments` chords in a circular arc of the given arc length.
inline std::vector<Point> inscribe_arc(double arc_length, double subtended,
                                       std::size_t segments, bool closed) {
    const double radius = arc_length / subtended;
    std::vector<Point> v;
    v.reserve(segments + 1);
    for (std::size_t i = 0; i <= segments; ++i) {
        const double a = subtended * static_cast<double>(i) / static_cast<double>(segments);
        v.push_back(Point{radius * std::cos(a), radius * std::sin(a)});
    }
    if (closed) v.back() = v.front(); // exact closure
    return v;
}

} // namespace detail

/// Build a named noodle shape of the requested arc length. Curved kinds are
/// discretized by doubling the chord count until the inscribed polyline's
/// total length is within relative 1e-6 of the requested length.
inline NoodleShape make_shape(ShapeKind kind, double length, ShapeDetail detail_params = {}) {
    if (!std::isfinite(length) || !(length > 0.0))
        throw std::invalid_argument("make_shape: length must be positive and finite");

    NoodleShape shape;
    switch (kind) {
    case ShapeKind::segment:
        shape.vertices = {Point{0.0, 0.0}, Point{length, 0.0}};
        shape.label = "segment";
        break;
    case ShapeKind::polyline: {
        const double bend = detail_params.bend_angle;
        if (!std::isfinite(bend) || !(bend > 0.0) || bend > kPi)
            throw std::invalid_argument("make_shape: bend_angle must lie in (0, pi]");
        const double half = 0.5 * length;
        const double turn = kPi - bend;
        shape.vertices = {Point{0.0, 0.0}, Point{half, 0.0},
                          Point{half + half * std::cos(turn), half * std::sin(turn)}};
        shape.label = "v_polyline";
        break;
    }
    case ShapeKind::arc:
    case ShapeKind::semicircle:
    case ShapeKind::circle: {
        double subtended = detail_params.arc_angle;
        if (kind == ShapeKind::semicircle) subtended = kPi;
        if (kind == ShapeKind::circle) subtended = kTwoPi;
        if (!std::isfinite(subtended) || !(subtended > 0.0) || subtended > kTwoPi)
            throw std::invalid_argument("make_shape: arc_angle must lie in (0, 2*pi]");
        const bool closed = kind == ShapeKind::circle;
        std::size_t segments = 2;
        for (;;) {
            shape.vertices = detail::inscribe_arc(length, subtended, segments, closed);
            const double chord_sum = detail::polyline_length(shape.vertices);
            if (std::abs(chord_sum - length) <= 1e-6 * length) break;
            if (segments >= (std::size_t{1} << 22))
                throw std::runtime_error("make_shape: arc discretization failed to converge");
            segments *= 2;
        }
        shape.label = kind == ShapeKind::circle ? "circle"
                    : kind == ShapeKind::semicircle ? "semicircle"
                                                    : "arc";
        break;
    }
    default:
        throw std::invalid_argument("make_shape: unknown shape kind");
    }
    shape.total_length = detail::polyline_length(shape.vertices);
    return shape;
}

inline void validate_shape(const NoodleShape& shape) {
    if (shape.vertices.size() < 2)
        throw std::invalid_argument("NoodleShape: need at least 2 vertices");
    for (const Point& p : shape.vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("NoodleShape: non-finite vertex");
    const double measured = detail::polyline_length(shape.vertices);
    if (!(shape.total_length > 0.0) ||
        std::abs(measured - shape.total_length) > 1e-9 * shape.total_length)
        throw std::invalid_argument("NoodleShape: total_length inconsistent with vertices");
}

namespace detail {

/// Cell index of a scaled abscissa u (lattice lines at the integers). A
/// vertex exactly on a line inherits the previous segment's side; the first
/// vertex of a drop starts on the low side.
inline std::int64_t lattice_cell(double u, std::int64_t prev, bool first) {
    const double f = std::floor(u);
    const auto q = static_cast<std::int64_t>(f);
    if (u != f) return q;
    if (first) return q - 1;
    return prev <= q - 1 ? q - 1 : q;
}

/// Strict sign-change crossings of a polyline (given as abscissae in units
/// of the spacing) against the integer lattice.
inline std::uint64_t count_lattice_crossings(const std::vector<double>& scaled_x) {
    if (scaled_x.empty()) return 0;
    std::int64_t prev = lattice_cell(scaled_x[0], 0, true);
    std::uint64_t crossings = 0;
    for (std::size_t i = 1; i < scaled_x.size(); ++i) {
        const std::int64_t cell = lattice_cell(scaled_x[i], prev, false);
        crossings += static_cast<std::uint64_t>(cell > prev ? cell - prev : prev - cell);
        prev = cell;
    }
    return crossings;
}

/// One rigid placement: rotate by phi, shift by a uniform offset across one
/// period, project onto the lattice axis. Only abscissae matter.
inline std::uint64_t drop_noodle_soa(const std::vector<double>& vx, const std::vector<double>& vy,
                                     double spacing, Rng& rng, std::vector<double>& scaled) {
    const double phi = rng.uniform(0.0, kTwoPi);
    const double offset = rng.uniform(0.0, spacing);
    const double inv = 1.0 / spacing;
    const double cx = std::cos(phi) * inv;
    const double sy = -std::sin(phi) * inv;
    const double shift = offset * inv;
    const std::size_t n = vx.size();
    scaled.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        scaled[i] = cx * vx[i] + sy * vy[i] + shift;
    return count_lattice_crossings(scaled);
}

} // namespace detail

/// Throw the shape rigidly at the lattice {k*spacing}: uniform rotation,
/// uniform translation over one period. Returns the number of strict
/// sign-change crossings over all polyline segments.
inline std::uint64_t drop_noodle(const NoodleShape& shape, double spacing, Rng& rng) {
    validate_shape(shape);
    if (!std::isfinite(spacing) || !(spacing > 0.0))
        throw std::invalid_argument("drop_noodle: spacing must be positive");
    thread_local std::vector<double> vx, vy, scaled;
    const std::size_t n = shape.vertices.size();
    vx.resize(n);
    vy.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        vx[i] = shape.vertices[i].x;
        vy[i] = shape.vertices[i].y;
    }
    return detail::drop_noodle_soa(vx, vy, spacing, rng, scaled);
}

/// Sample mean of drop_noodle crossings with a normal-theory confidence
/// interval, against the analytic expectation 2*total_length/(pi*L), which
/// holds for any rectifiable shape and any length. Deterministic given the
/// seed.
inline EstimateRecord estimate_expected_crossings(const NoodleShape& shape,
                                                  const DropConfig& config) {
    validate_shape(shape);
    config.validate();

    const std::size_t n = shape.vertices.size();
    std::vector<double> vx(n), vy(n), scaled;
    for (std::size_t i = 0; i < n; ++i) {
        vx[i] = shape.vertices[i].x;
        vy[i] = shape.vertices[i].y;
    }

    Rng rng(config.seed);
    SampleStats stats;
    for (std::uint64_t i = 0; i < config.n_drops; ++i)
        stats.add(static_cast<double>(detail::drop_noodle_soa(vx, vy, config.spacing, rng, scaled)));

    EstimateRecord rec;
    rec.n = stats.n;
    rec.point = stats.mean();
    if (stats.n >= 2) {
        const auto [lo, hi] = mean_interval(stats, kDefaultZ);
        rec.ci_low = lo;
        rec.ci_high = hi;
    } else {
        rec.ci_low = rec.ci_high = rec.point;
    }
    rec.analytic = 2.0 * shape.total_length / (kPi * config.spacing);
    return rec;
}

} // namespace crosswalk

#endif // CROSSWALK_BUFFON_HPP
