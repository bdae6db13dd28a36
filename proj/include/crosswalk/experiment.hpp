#ifndef CROSSWALK_EXPERIMENT_HPP
#define CROSSWALK_EXPERIMENT_HPP

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "crosswalk/buffon.hpp"
#include "crosswalk/errors.hpp"
#include "crosswalk/stats.hpp"
#include "crosswalk/walker.hpp"

namespace crosswalk {

inline constexpr const char* kVersion = "0.1.0";

/// Flat description of one experiment invocation. Every knob of the
/// underlying modules appears here so the output envelope can echo a
/// complete, re-runnable configuration.
struct ExperimentConfig {
    std::string experiment = "needle"; // walk | needle | noodle | compare | sweep

    // shared scale parameters
    double ds = 1.0;      // step length / needle length
    double spacing = 2.0; // lattice spacing for needle and noodle

    // walk
    double room_l = 50.0;
    double room_b = 30.0;
    std::optional<double> link_x; // default: room_l / 2
    double p_theta = 0.0;
    double angle_min = 0.0;
    double angle_max = kTwoPi;
    std::optional<double> x0, y0, theta0; // all three or none
    std::uint64_t n_steps = 1'000'000;
    std::optional<std::uint64_t> burn_in; // default: n_steps / 100

    // needle / noodle
    std::uint64_t n_drops = 1'000'000;
    std::string shape = "segment"; // segment | v | arc | semicircle | circle
    double shape_length = 1.0;
    double bend_angle = 0.5 * kPi;
    double arc_angle = 0.5 * kPi;

    // sweep
    std::string sweep_target = "needle"; // needle | walk | noodle
    std::string sweep_param = "ds";      // ds | spacing
    std::vector<double> sweep_values;    // empty grid is allowed

    // common
    std::uint64_t seed = 1;
    std::uint64_t replicas = 1;
    std::string format = "json"; // json | csv
    std::string out_path;        // empty: stdout

    void validate() const;
    ShapeKind shape_kind() const;
};

inline void ExperimentConfig::validate() const {
    if (experiment != "walk" && experiment != "needle" && experiment != "noodle" &&
        experiment != "compare" && experiment != "sweep")
        throw config_error("experiment", "must be one of walk, needle, noodle, compare, sweep");
    if (format != "json" && format != "csv")
        throw config_error("format", "must be json or csv");
    if (replicas < 1)
        throw config_error("replicas", "must be at least 1");
    if (shape != "segment" && shape != "v" && shape != "arc" && shape != "semicircle" &&
        shape != "circle")
        throw config_error("shape", "must be one of segment, v, arc, semicircle, circle");
    const bool any_init = x0 || y0 || theta0;
    const bool all_init = x0 && y0 && theta0;
    if (any_init && !all_init)
        throw config_error("initial_state", "x0, y0, theta0 must be given together");
    if (experiment == "sweep") {
        if (sweep_target != "needle" && sweep_target != "walk" && sweep_target != "noodle")
            throw config_error("sweep_target", "must be one of needle, walk, noodle");
        if (sweep_param != "ds" && sweep_param != "spacing")
            throw config_error("sweep_param", "must be ds or spacing");
        for (double v : sweep_values)
            if (!std::isfinite(v) || !(v > 0.0))
                throw config_error("sweep_values", "values must be positive and finite");
    }
}

inline ShapeKind ExperimentConfig::shape_kind() const {
    if (shape == "segment") return ShapeKind::segment;
    if (shape == "v") return ShapeKind::polyline;
    if (shape == "arc") return ShapeKind::arc;
    if (shape == "semicircle") return ShapeKind::semicircle;
    if (shape == "circle") return ShapeKind::circle;
    throw config_error("shape", "must be one of segment, v, arc, semicircle, circle");
}

/// Walk-only counters and occupancy summaries carried beside the estimate.
struct WalkExtras {
    std::uint64_t n_steps = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t n_crossings = 0;
    double tv_x = 0.0;
    double tv_y = 0.0;
    double tv_angle = 0.0;
};

struct ReplicaOutcome {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    EstimateRecord estimate;
    std::optional<WalkExtras> walk_extras;
    std::optional<WalkSummary> walk; // full summary, kept for histogram merging
};

/// One experiment leg: all replicas of a single (kind, parameter point).
struct RunResult {
    std::string kind; // needle | walk | noodle
    std::optional<std::string> sweep_param;
    std::optional<double> sweep_value;
    std::vector<ReplicaOutcome> replicas;
    EstimateRecord merged;
    std::optional<double> rel_error; // |merged.point - analytic| / analytic
    std::optional<WalkExtras> merged_walk;
};

struct ResultEnvelope {
    std::string version = kVersion;
    std::string experiment;
    ExperimentConfig config;
    std::vector<RunResult> results;
    double duration_seconds = 0.0;
};

namespace detail {

/// Run one task per replica with seed base+index and collect results in
/// replica order regardless of completion order.
template <typename Fn>
std::vector<ReplicaOutcome> run_replicas(std::uint64_t base_seed, std::uint64_t replicas, Fn fn) {
    std::vector<std::future<ReplicaOutcome>> futures;
    futures.reserve(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r)
        futures.push_back(std::async(std::launch::async, fn, r, base_seed + r));
    std::vector<ReplicaOutcome> outcomes;
    outcomes.reserve(replicas);
    for (auto& f : futures) outcomes.push_back(f.get());
    return outcomes;
}

inline void finish_merge(RunResult& result) {
    if (result.merged.analytic && *result.merged.analytic != 0.0)
        result.rel_error =
            std::abs(result.merged.point - *result.merged.analytic) / *result.merged.analytic;
}

/// Merged interval from the spread of per-replica point estimates. Used
/// where per-replica samples are not independent draws (walk steps) or
/// where pooling raw moments is not worth the plumbing (noodle).
inline void scatter_interval(RunResult& result) {
    SampleStats scatter;
    for (const ReplicaOutcome& rep : result.replicas) scatter.add(rep.estimate.point);
    if (scatter.n >= 2) {
        const auto [lo, hi] = mean_interval(scatter, kDefaultZ);
        result.merged.ci_low = lo;
        result.merged.ci_high = hi;
    } else {
        result.merged.ci_low = result.replicas.front().estimate.ci_low;
        result.merged.ci_high = result.replicas.front().estimate.ci_high;
    }
}

inline RunResult run_needle_result(const ExperimentConfig& config, double ds, double spacing) {
    RunResult result;
    result.kind = "needle";
    result.replicas = run_replicas(config.seed, config.replicas,
                                   [&config, ds, spacing](std::uint64_t index, std::uint64_t seed) {
                                       DropConfig drops{spacing, config.n_drops, seed};
                                       ReplicaOutcome out;
                                       out.index = index;
                                       out.seed = seed;
                                       out.estimate = estimate_needle_p(ds, drops);
                                       return out;
                                   });

    // Drops are independent across replicas, so pool successes and trials.
    std::uint64_t hits = 0, trials = 0;
    for (const ReplicaOutcome& rep : result.replicas) {
        hits += static_cast<std::uint64_t>(
            std::llround(rep.estimate.point * static_cast<double>(rep.estimate.n)));
        trials += rep.estimate.n;
    }
    result.merged.n = trials;
    result.merged.point = static_cast<double>(hits) / static_cast<double>(trials);
    const auto [lo, hi] = wilson_interval(hits, trials, kDefaultZ);
    result.merged.ci_low = lo;
    result.merged.ci_high = hi;
    result.merged.analytic = result.replicas.front().estimate.analytic;
    finish_merge(result);
    return result;
}

inline RunResult run_noodle_result(const ExperimentConfig& config, double length, double spacing) {
    const NoodleShape shape = make_shape(config.shape_kind(), length,
                                         ShapeDetail{config.bend_angle, config.arc_angle});
    RunResult result;
    result.kind = "noodle";
    result.replicas = run_replicas(config.seed, config.replicas,
                                   [&config, &shape, spacing](std::uint64_t index, std::uint64_t seed) {
                                       DropConfig drops{spacing, config.n_drops, seed};
                                       ReplicaOutcome out;
                                       out.index = index;
                                       out.seed = seed;
                                       out.estimate = estimate_expected_crossings(shape, drops);
                                       return out;
                                   });

    std::uint64_t n = 0;
    double weighted = 0.0;
    for (const ReplicaOutcome& rep : result.replicas) {
        n += rep.estimate.n;
        weighted += rep.estimate.point * static_cast<double>(rep.estimate.n);
    }
    result.merged.n = n;
    result.merged.point = weighted / static_cast<double>(n);
    result.merged.analytic = result.replicas.front().estimate.analytic;
    scatter_interval(result);
    finish_merge(result);
    return result;
}

inline WalkConfig to_walk_config(const ExperimentConfig& config, double ds, double room_l) {
    WalkConfig wc;
    wc.step_length = ds;
    wc.persistence = config.p_theta;
    wc.angle_range = AngleRange{config.angle_min, config.angle_max};
    if (config.x0) wc.initial_state = InitialState{*config.x0, *config.y0, *config.theta0};
    wc.room = Room{room_l, config.room_b};
    wc.link = Link{config.link_x ? *config.link_x : 0.5 * room_l};
    wc.n_steps = config.n_steps;
    wc.burn_in = config.burn_in;
    return wc;
}

inline RunResult run_walk_result(const ExperimentConfig& config, double ds, double room_l) {
    WalkConfig base = to_walk_config(config, ds, room_l);
    base.seed = config.seed;
    base.validate();

    RunResult result;
    result.kind = "walk";
    result.replicas =
        run_replicas(config.seed, config.replicas, [base](std::uint64_t index, std::uint64_t seed) {
            WalkConfig wc = base;
            wc.seed = seed;
            const WalkSummary summary = run_walk(wc);
            ReplicaOutcome out;
            out.index = index;
            out.seed = seed;
            out.estimate = EstimateRecord{summary.p_hat, summary.ci_low, summary.ci_high,
                                          summary.n_counted, summary.p_analytic};
            out.walk_extras = WalkExtras{summary.n_steps,
                                         summary.burn_in,
                                         summary.n_crossings,
                                         tv_distance_to_uniform(summary.x_hist),
                                         tv_distance_to_uniform(summary.y_hist),
                                         tv_distance_to_uniform(summary.angle_hist)};
            out.walk = summary;
            return out;
        });

    // Pool counts for the point estimate; the interval comes from replica
    // scatter because successive steps of one walk are correlated and a
    // pooled binomial interval would be too narrow.
    WalkExtras merged_extras;
    std::uint64_t counted = 0;
    Histogram hx = result.replicas.front().walk->x_hist;
    Histogram hy = result.replicas.front().walk->y_hist;
    Histogram ha = result.replicas.front().walk->angle_hist;
    for (std::size_t i = 0; i < result.replicas.size(); ++i) {
        const ReplicaOutcome& rep = result.replicas[i];
        merged_extras.n_steps += rep.walk->n_steps;
        merged_extras.burn_in += rep.walk->burn_in;
        merged_extras.n_crossings += rep.walk->n_crossings;
        counted += rep.walk->n_counted;
        if (i > 0) {
            hx.merge(rep.walk->x_hist);
            hy.merge(rep.walk->y_hist);
            ha.merge(rep.walk->angle_hist);
        }
    }
    merged_extras.tv_x = tv_distance_to_uniform(hx);
    merged_extras.tv_y = tv_distance_to_uniform(hy);
    merged_extras.tv_angle = tv_distance_to_uniform(ha);

    result.merged.n = counted;
    result.merged.point =
        static_cast<double>(merged_extras.n_crossings) / static_cast<double>(counted);
    result.merged.analytic = result.replicas.front().estimate.analytic;
    result.merged_walk = merged_extras;
    scatter_interval(result);
    finish_merge(result);
    return result;
}

inline RunResult run_one(const ExperimentConfig& config, const std::string& kind, double ds,
                         double scale) {
    if (kind == "needle") return run_needle_result(config, ds, scale);
    if (kind == "noodle") return run_noodle_result(config, ds, scale);
    return run_walk_result(config, ds, scale);
}

} // namespace detail

/// Execute the configured experiment. `compare` runs needle, walk and
/// noodle at matched (ds, L) with L = room_l; `sweep` repeats the target
/// over sweep_values, re-deriving replica seeds at every point.
inline ResultEnvelope run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    config.validate();

    ResultEnvelope envelope;
    envelope.experiment = config.experiment;
    envelope.config = config;
    envelope.config.link_x = config.link_x ? *config.link_x : 0.5 * config.room_l;
    envelope.config.burn_in = config.burn_in ? *config.burn_in : config.n_steps / 100;

    if (config.experiment == "needle") {
        envelope.results.push_back(detail::run_needle_result(config, config.ds, config.spacing));
    } else if (config.experiment == "noodle") {
        envelope.results.push_back(
            detail::run_noodle_result(config, config.shape_length, config.spacing));
    } else if (config.experiment == "walk") {
        envelope.results.push_back(detail::run_walk_result(config, config.ds, config.room_l));
    } else if (config.experiment == "compare") {
        envelope.results.push_back(detail::run_needle_result(config, config.ds, config.room_l));
        envelope.results.push_back(detail::run_walk_result(config, config.ds, config.room_l));
        envelope.results.push_back(detail::run_noodle_result(config, config.ds, config.room_l));
    } else { // sweep
        for (double value : config.sweep_values) {
            double ds = config.sweep_target == "noodle" ? config.shape_length : config.ds;
            double scale = config.sweep_target == "walk" ? config.room_l : config.spacing;
            if (config.sweep_param == "ds")
                ds = value;
            else
                scale = value;
            RunResult result = detail::run_one(config, config.sweep_target, ds, scale);
            result.sweep_param = config.sweep_param;
            result.sweep_value = value;
            envelope.results.push_back(std::move(result));
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    envelope.duration_seconds = std::chrono::duration<double>(t1 - t0).count();
    return envelope;
}

} // namespace crosswalk

#endif // CROSSWALK_EXPERIMENT_HPP
