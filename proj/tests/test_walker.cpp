#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "crosswalk/stats.hpp"
#include "crosswalk/walker.hpp"

using namespace crosswalk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("next_angle persists fully at p_theta = 1") {
    WalkConfig config;
    config.persistence = 1.0;
    Rng rng(1);
    for (int i = 0; i < 100; ++i) REQUIRE(next_angle(1.0, config, rng) == 1.0);
}

TEST_CASE("next_angle draws uniformly at p_theta = 0") {
    WalkConfig config;
    config.persistence = 0.0;
    Rng rng(2);
    Histogram hist = Histogram::uniform_bins(0.0, kTwoPi, 36);
    for (int i = 0; i < 1'000'000; ++i) {
        const double a = next_angle(1.0, config, rng);
        REQUIRE(a >= 0.0);
        REQUIRE(a < kTwoPi);
        hist.add(a);
    }
    CHECK(tv_distance_to_uniform(hist) < 0.01);
}

TEST_CASE("next_angle keeps the previous heading half the time at p_theta = 0.5") {
    WalkConfig config;
    config.persistence = 0.5;
    Rng rng(3);
    const double prev = 1.0;
    int kept = 0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i)
        if (next_angle(prev, config, rng) == prev) ++kept;
    CHECK_THAT(static_cast<double>(kept) / n, WithinAbs(0.5, 0.002));
}

TEST_CASE("step point cases") {
    WalkConfig config;
    config.step_length = 2.0;
    config.persistence = 1.0;
    config.room = Room{10.0, 10.0};
    config.link = Link{2.0};
    Rng rng(4);

    const StepResult r = step(WalkerState{1.0, 1.0, 0.0, 0}, config, rng);
    CHECK(r.state.x == 3.0);
    CHECK(r.state.y == 1.0);
    CHECK(r.state.theta == 0.0);
    CHECK(r.state.step_index == 1);
    CHECK(r.crossings == 1);

    config.step_length = 1.0;
    const StepResult s = step(WalkerState{5.0, 5.0, 0.5 * kPi, 3}, config, rng);
    CHECK_THAT(s.state.x, WithinAbs(5.0, 1e-14)); // cos(pi/2) is ~6e-17, not 0
    CHECK(s.state.y == 6.0);
    CHECK_THAT(s.state.theta, WithinAbs(0.5 * kPi, 1e-14));
    CHECK(s.state.step_index == 4);
    CHECK(s.crossings == 0);
}

TEST_CASE("short steps cross at most once") {
    WalkConfig config;
    config.step_length = 0.005; // 0.001 * L
    config.persistence = 0.0;
    config.room = Room{5.0, 3.0};
    config.link = Link{2.5};
    Rng rng(5);
    WalkerState state{1.0, 1.0, 0.0, 0};
    for (int i = 0; i < 100'000; ++i) {
        const StepResult r = step(state, config, rng);
        REQUIRE(r.crossings <= 1);
        state = r.state;
    }
}

TEST_CASE("visited states stay inside the room") {
    WalkConfig config;
    config.step_length = 1.7;
    config.room = Room{4.0, 2.5};
    config.link = Link{2.0};
    Rng rng(6);
    WalkerState state{0.5, 0.5, 1.0, 0};
    for (int i = 0; i < 20'000; ++i) {
        state = step(state, config, rng).state;
        REQUIRE(state.x >= 0.0);
        REQUIRE(state.x <= config.room.length);
        REQUIRE(state.y >= 0.0);
        REQUIRE(state.y <= config.room.width);
        REQUIRE(state.theta >= 0.0);
        REQUIRE(state.theta < kTwoPi);
    }
}

TEST_CASE("run_walk converges to 2*ds/(pi*L) and mixes to uniform") {
    WalkConfig config;
    config.step_length = 1.0;
    config.room = Room{50.0, 30.0};
    config.link = Link{25.0};
    config.persistence = 0.0;
    config.n_steps = 1'000'000;
    config.burn_in = 10'000;
    config.seed = 20'25;

    const WalkSummary s = run_walk(config);
    CHECK_THAT(s.p_analytic, WithinRel(2.0 / (50.0 * kPi), 1e-15));
    CHECK_THAT(s.p_hat, WithinRel(s.p_analytic, 0.10));
    CHECK(s.n_counted == config.n_steps - 10'000);
    CHECK(s.ci_low <= s.p_hat);
    CHECK(s.p_hat <= s.ci_high);

    CHECK(tv_distance_to_uniform(s.x_hist) < 0.02);
    CHECK(tv_distance_to_uniform(s.y_hist) < 0.02);
    CHECK(tv_distance_to_uniform(s.angle_hist) < 0.02);
}

TEST_CASE("persistent walks keep the same rate and stay uniform") {
    WalkConfig config;
    config.step_length = 1.0;
    config.room = Room{50.0, 30.0};
    config.link = Link{25.0};
    config.persistence = 0.9;
    config.n_steps = 1'000'000;
    config.burn_in = 10'000;
    config.seed = 20'26;

    const WalkSummary s = run_walk(config);
    CHECK_THAT(s.p_hat, WithinRel(s.p_analytic, 0.15));
    CHECK(tv_distance_to_uniform(s.x_hist) < 0.02);
    CHECK(tv_distance_to_uniform(s.y_hist) < 0.02);
    CHECK(tv_distance_to_uniform(s.angle_hist) < 0.02);
}

TEST_CASE("motion parallel to the link never crosses") {
    WalkConfig config;
    config.persistence = 1.0;
    config.initial_state = InitialState{5.0, 5.0, 0.5 * kPi};
    config.room = Room{10.0, 10.0};
    config.link = Link{2.0};
    config.n_steps = 11;
    config.burn_in = 10;
    const WalkSummary s = run_walk(config);
    CHECK(s.n_counted == 1);
    CHECK(s.p_hat == 0.0);
}

TEST_CASE("run_walk is bit-deterministic for a fixed seed") {
    WalkConfig config;
    config.n_steps = 50'000;
    config.seed = 99;
    const WalkSummary a = run_walk(config);
    const WalkSummary b = run_walk(config);
    REQUIRE(a == b);
}

TEST_CASE("run_walk validates its configuration") {
    WalkConfig config;

    config.step_length = 0.0;
    CHECK_THROWS_AS(run_walk(config), config_error);
    config.step_length = 1.0;

    config.link = Link{50.0}; // must be strictly inside
    try {
        run_walk(config);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.field() == "link.x");
    }
    config.link = Link{25.0};

    config.burn_in = config.n_steps;
    CHECK_THROWS_AS(run_walk(config), config_error);
    config.burn_in.reset();

    config.persistence = 1.5;
    CHECK_THROWS_AS(run_walk(config), config_error);
    config.persistence = 0.0;

    config.initial_state = InitialState{60.0, 5.0, 0.0};
    CHECK_THROWS_AS(run_walk(config), config_error);
}

TEST_CASE("crossing rates do not depend on the link location") {
    // merged estimates from replica scatter: per-step crossings within one
    // walk are autocorrelated, so single-run binomial intervals would be
    // overconfident here
    const double link_xs[] = {12.5, 25.0, 37.5};
    std::vector<double> points;
    std::vector<std::pair<double, double>> intervals;
    for (int i = 0; i < 3; ++i) {
        SampleStats scatter;
        for (std::uint64_t r = 0; r < 4; ++r) {
            WalkConfig config;
            config.room = Room{50.0, 30.0};
            config.link = Link{link_xs[i]};
            config.n_steps = 100'000;
            config.burn_in = 1'000;
            config.seed = 300 + r;
            scatter.add(run_walk(config).p_hat);
        }
        points.push_back(scatter.mean());
        intervals.push_back(mean_interval(scatter, 3.0));
    }
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            INFO("estimate " << i << " against interval " << j);
            CHECK(points[i] >= intervals[j].first);
            CHECK(points[i] <= intervals[j].second);
        }
}
