#ifndef CROSSWALK_WALKER_HPP
#define CROSSWALK_WALKER_HPP

#include <cmath>
#include <cstdint>
#include <optional>

#include "crosswalk/errors.hpp"
#include "crosswalk/geometry.hpp"
#include "crosswalk/rng.hpp"
#include "crosswalk/stats.hpp"

namespace crosswalk {

/// Histogram resolutions used by walk summaries: 20 bins per position axis,
/// 36 angle bins.
inline constexpr std::size_t kPositionBins = 20;
inline constexpr std::size_t kAngleBins = 36;

/// Closed angular interval [lo, hi] within [0, 2*pi]; fresh headings are
/// drawn uniformly from it. Defaults to the full circle.
struct AngleRange {
    double lo = 0.0;
    double hi = kTwoPi;

    bool full_circle() const { return lo == 0.0 && hi == kTwoPi; }
};

struct InitialState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

/// Everything that determines a walk, including the seed: two runs with
/// equal configs produce identical summaries.
struct WalkConfig {
    double step_length = 1.0;
    double persistence = 0.0; // probability of keeping the previous heading
    AngleRange angle_range{};
    std::optional<InitialState> initial_state{};
    Room room{50.0, 30.0};
    Link link{25.0};
    std::uint64_t seed = 1;
    std::uint64_t n_steps = 1'000'000;
    std::optional<std::uint64_t> burn_in{}; // default: n_steps / 100

    std::uint64_t effective_burn_in() const {
        return burn_in ? *burn_in : n_steps / 100;
    }

    void validate() const {
        if (!std::isfinite(step_length) || !(step_length > 0.0))
            throw config_error("step_length", "must be positive and finite");
        if (!std::isfinite(persistence) || persistence < 0.0 || persistence > 1.0)
            throw config_error("persistence", "must lie in [0, 1]");
        if (!std::isfinite(room.length) || !(room.length > 0.0))
            throw config_error("room.length", "must be positive and finite");
        if (!std::isfinite(room.width) || !(room.width > 0.0))
            throw config_error("room.width", "must be positive and finite");
        if (!std::isfinite(link.x) || !(link.x > 0.0) || !(link.x < room.length))
            throw config_error("link.x", "must lie strictly between 0 and room.length");
        if (!std::isfinite(angle_range.lo) || !std::isfinite(angle_range.hi) ||
            angle_range.lo < 0.0 || angle_range.hi > kTwoPi || angle_range.lo > angle_range.hi)
            throw config_error("angle_range", "must satisfy 0 <= lo <= hi <= 2*pi");
        if (n_steps < 1)
            throw config_error("n_steps", "must be at least 1");
        if (effective_burn_in() >= n_steps)
            throw config_error("burn_in", "must be smaller than n_steps");
        if (initial_state) {
            const auto& s = *initial_state;
            if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.theta) ||
                s.x < 0.0 || s.x > room.length || s.y < 0.0 || s.y > room.width)
                throw config_error("initial_state", "must be a finite point inside the room");
        }
    }
};

struct WalkerState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0; // canonical [0, 2*pi)
    std::uint64_t step_index = 0;
};

struct WalkSummary {
    std::uint64_t n_steps = 0;     // total steps taken
    std::uint64_t burn_in = 0;     // steps discarded before counting
    std::uint64_t n_counted = 0;   // n_steps - burn_in
    std::uint64_t n_crossings = 0; // link crossings after burn-in
    double p_hat = 0.0;            // n_crossings / n_counted
    double p_analytic = 0.0;       // 2 * step_length / (pi * room.length)
    double ci_low = 0.0;
    double ci_high = 0.0;
    Histogram x_hist;     // post burn-in positions, 20 bins over [0, L]
    Histogram y_hist;     // post burn-in positions, 20 bins over [0, B]
    Histogram angle_hist; // post burn-in headings, 36 bins over [0, 2*pi)

    bool operator==(const WalkSummary&) const = default;
};

/// Keep the previous heading with probability `persistence`, otherwise draw
/// a fresh one uniformly from the allowed range. The persisted heading is
/// whatever the previous step ended with, reflections included.
inline double next_angle(double theta_prev, const WalkConfig& config, Rng& rng) {
    if (rng.bernoulli(config.persistence)) return theta_prev;
    return canonical_angle(rng.uniform(config.angle_range.lo, config.angle_range.hi));
}

struct StepResult {
    WalkerState state;
    std::uint64_t crossings = 0;
};

/// One iteration of the mobility model, folding the displacement into the
/// room. `scratch` is reused sub-segment storage for hot loops.
inline StepResult step(const WalkerState& state, const WalkConfig& config, Rng& rng,
                       FoldedPath& scratch) {
    const double heading = next_angle(state.theta, config, rng);
    fold_step_into(Point{state.x, state.y}, heading, config.step_length, config.room, scratch);
    StepResult result;
    result.crossings = count_link_crossings(scratch, config.link);
    result.state = WalkerState{scratch.end().x, scratch.end().y, scratch.theta_out,
                               state.step_index + 1};
    return result;
}

inline StepResult step(const WalkerState& state, const WalkConfig& config, Rng& rng) {
    FoldedPath scratch;
    return step(state, config, rng, scratch);
}

/// Run the walk and collect crossing statistics and the post burn-in
/// position/heading distributions. Deterministic given the seed.
///
/// The confidence interval is a Wilson interval on the per-step crossing
/// indicator whenever no step crosses more than once (the usual regime,
/// step_length below the room extents); with multi-crossing steps it falls
/// back to a normal interval on the per-step counts. Either way it treats
/// steps as independent, which understates the width for persistent walks;
/// replica-level scatter is the honest estimate there.
inline WalkSummary run_walk(const WalkConfig& config) {
    config.validate();
    Rng rng(config.seed);

    WalkerState state;
    if (config.initial_state) {
        state = WalkerState{config.initial_state->x, config.initial_state->y,
                            canonical_angle(config.initial_state->theta), 0};
    } else {
        state.x = rng.uniform(0.0, config.room.length);
        state.y = rng.uniform(0.0, config.room.width);
        state.theta = canonical_angle(rng.uniform(config.angle_range.lo, config.angle_range.hi));
        state.step_index = 0;
    }

    WalkSummary summary;
    summary.n_steps = config.n_steps;
    summary.burn_in = config.effective_burn_in();
    summary.n_counted = config.n_steps - summary.burn_in;
    summary.p_analytic = 2.0 * config.step_length / (kPi * config.room.length);
    summary.x_hist = Histogram::uniform_bins(0.0, config.room.length, kPositionBins);
    summary.y_hist = Histogram::uniform_bins(0.0, config.room.width, kPositionBins);
    summary.angle_hist = Histogram::uniform_bins(0.0, kTwoPi, kAngleBins);

    FoldedPath scratch;
    std::uint64_t max_step_crossings = 0;
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < config.n_steps; ++i) {
        const StepResult r = step(state, config, rng, scratch);
        state = r.state;
        if (state.step_index > summary.burn_in) {
            summary.n_crossings += r.crossings;
            if (r.crossings > max_step_crossings) max_step_crossings = r.crossings;
            sum_sq += static_cast<double>(r.crossings) * static_cast<double>(r.crossings);
            summary.x_hist.add(state.x);
            summary.y_hist.add(state.y);
            summary.angle_hist.add(state.theta);
        }
    }

    summary.p_hat = static_cast<double>(summary.n_crossings) / static_cast<double>(summary.n_counted);
    if (max_step_crossings <= 1) {
        const auto [lo, hi] = wilson_interval(summary.n_crossings, summary.n_counted, kDefaultZ);
        summary.ci_low = lo;
        summary.ci_high = hi;
    } else if (summary.n_counted >= 2) {
        const auto [lo, hi] = mean_interval(static_cast<double>(summary.n_crossings), sum_sq,
                                            summary.n_counted, kDefaultZ);
        summary.ci_low = lo;
        summary.ci_high = hi;
    } else {
        summary.ci_low = summary.ci_high = summary.p_hat;
    }
    return summary;
}

} // namespace crosswalk

#endif // CROSSWALK_WALKER_HPP
