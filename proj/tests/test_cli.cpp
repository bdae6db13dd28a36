#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crosswalk/config_file.hpp"
#include "crosswalk/experiment.hpp"
#include "crosswalk/io.hpp"

using namespace crosswalk;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::size_t count_fields(const std::string& row) {
    return static_cast<std::size_t>(std::count(row.begin(), row.end(), ',')) + 1;
}

} // namespace

TEST_CASE("experiment config validation names the offending field") {
    ExperimentConfig config;

    config.experiment = "teleport";
    try {
        config.validate();
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.field() == "experiment");
    }
    config.experiment = "needle";

    config.format = "xml";
    CHECK_THROWS_AS(config.validate(), config_error);
    config.format = "json";

    config.replicas = 0;
    CHECK_THROWS_AS(config.validate(), config_error);
    config.replicas = 1;

    config.shape = "blob";
    CHECK_THROWS_AS(config.validate(), config_error);
    config.shape = "segment";

    config.x0 = 1.0; // y0 and theta0 missing
    try {
        config.validate();
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.field() == "initial_state");
    }
    config.x0.reset();

    config.experiment = "sweep";
    config.sweep_target = "rope";
    CHECK_THROWS_AS(config.validate(), config_error);
    config.sweep_target = "needle";

    config.sweep_param = "length";
    CHECK_THROWS_AS(config.validate(), config_error);
    config.sweep_param = "ds";

    config.sweep_values = {1.0, -2.0};
    CHECK_THROWS_AS(config.validate(), config_error);
    config.sweep_values = {1.0};
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("needle envelope pools replica drops") {
    ExperimentConfig config;
    config.experiment = "needle";
    config.n_drops = 20'000;
    config.seed = 9;
    config.replicas = 3;

    const ResultEnvelope env = run_experiment(config);
    CHECK(env.version == std::string(kVersion));
    CHECK(env.experiment == "needle");
    REQUIRE(env.results.size() == 1);

    const RunResult& r = env.results.front();
    CHECK(r.kind == "needle");
    REQUIRE(r.replicas.size() == 3);
    std::uint64_t hits = 0, trials = 0;
    for (std::uint64_t k = 0; k < 3; ++k) {
        const ReplicaOutcome& rep = r.replicas[k];
        CHECK(rep.index == k);
        CHECK(rep.seed == 9 + k);
        hits += static_cast<std::uint64_t>(
            std::llround(rep.estimate.point * static_cast<double>(rep.estimate.n)));
        trials += rep.estimate.n;
    }
    CHECK(trials == 60'000);
    CHECK(r.merged.n == trials);
    CHECK(r.merged.point == static_cast<double>(hits) / static_cast<double>(trials));
    const auto [lo, hi] = wilson_interval(hits, trials, kDefaultZ);
    CHECK(r.merged.ci_low == lo);
    CHECK(r.merged.ci_high == hi);
    REQUIRE(r.merged.analytic.has_value());
    CHECK_THAT(*r.merged.analytic, WithinRel(1.0 / kPi, 1e-15));
    REQUIRE(r.rel_error.has_value());
    CHECK(*r.rel_error ==
          std::abs(r.merged.point - *r.merged.analytic) / *r.merged.analytic);
}

TEST_CASE("walk envelope replicas match standalone runs") {
    ExperimentConfig config;
    config.experiment = "walk";
    config.n_steps = 50'000;
    config.seed = 21;
    config.replicas = 4;

    const ResultEnvelope env = run_experiment(config);

    // resolved defaults are echoed so the envelope re-runs as-is
    REQUIRE(env.config.link_x.has_value());
    CHECK(*env.config.link_x == 25.0);
    REQUIRE(env.config.burn_in.has_value());
    CHECK(*env.config.burn_in == 500);

    REQUIRE(env.results.size() == 1);
    const RunResult& r = env.results.front();
    REQUIRE(r.replicas.size() == 4);

    SampleStats scatter;
    std::uint64_t crossings = 0, counted = 0;
    for (std::uint64_t k = 0; k < 4; ++k) {
        WalkConfig wc;
        wc.room = Room{50.0, 30.0};
        wc.link = Link{25.0};
        wc.n_steps = 50'000;
        wc.seed = 21 + k;
        const WalkSummary direct = run_walk(wc);
        const ReplicaOutcome& rep = r.replicas[k];
        CHECK(rep.estimate.point == direct.p_hat);
        CHECK(rep.estimate.n == direct.n_counted);
        REQUIRE(rep.walk_extras.has_value());
        CHECK(rep.walk_extras->n_crossings == direct.n_crossings);
        scatter.add(direct.p_hat);
        crossings += direct.n_crossings;
        counted += direct.n_counted;
    }
    CHECK(r.merged.n == counted);
    CHECK(r.merged.point ==
          static_cast<double>(crossings) / static_cast<double>(counted));
    const auto [lo, hi] = mean_interval(scatter, kDefaultZ);
    CHECK(r.merged.ci_low == lo);
    CHECK(r.merged.ci_high == hi);
    REQUIRE(r.merged_walk.has_value());
    CHECK(r.merged_walk->n_crossings == crossings);
    CHECK(r.merged_walk->tv_x < 0.05);
}

TEST_CASE("compare runs all three estimators at matched scale") {
    ExperimentConfig config;
    config.experiment = "compare";
    config.ds = 1.0;
    config.room_l = 10.0;
    config.room_b = 6.0;
    config.n_steps = 200'000;
    config.n_drops = 100'000;
    config.seed = 31;

    const ResultEnvelope env = run_experiment(config);
    REQUIRE(env.results.size() == 3);
    CHECK(env.results[0].kind == "needle");
    CHECK(env.results[1].kind == "walk");
    CHECK(env.results[2].kind == "noodle");
    const double expected = 2.0 / (kPi * 10.0);
    for (const RunResult& r : env.results) {
        REQUIRE(r.merged.analytic.has_value());
        CHECK_THAT(*r.merged.analytic, WithinRel(expected, 1e-12));
        CHECK(r.rel_error.has_value());
        CHECK(*r.rel_error < 0.25);
    }
}

TEST_CASE("sweep emits one result per grid value") {
    ExperimentConfig config;
    config.experiment = "sweep";
    config.sweep_target = "needle";
    config.sweep_param = "ds";
    config.sweep_values = {0.5, 1.0, 2.0};
    config.spacing = 10.0;
    config.n_drops = 20'000;
    config.replicas = 2;
    config.seed = 5;

    const ResultEnvelope env = run_experiment(config);
    REQUIRE(env.results.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const RunResult& r = env.results[i];
        REQUIRE(r.sweep_param.has_value());
        CHECK(*r.sweep_param == "ds");
        REQUIRE(r.sweep_value.has_value());
        CHECK(*r.sweep_value == config.sweep_values[i]);
        REQUIRE(r.replicas.size() == 2);
        CHECK(r.replicas[0].seed == 5);
        CHECK(r.replicas[1].seed == 6);
        REQUIRE(r.merged.analytic.has_value());
        CHECK_THAT(*r.merged.analytic,
                   WithinRel(2.0 * config.sweep_values[i] / (kPi * 10.0), 1e-15));
    }

    const std::string csv = to_csv(env);
    const std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 7); // header + 3 values x 2 replicas
    CHECK(lines[0] == std::string(kCsvHeader));
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(count_fields(lines[i]) == 15);
    CHECK(lines[1].rfind("sweep,needle,ds,0.5,0,5,", 0) == 0);
    CHECK(lines[2].rfind("sweep,needle,ds,0.5,1,6,", 0) == 0);
}

TEST_CASE("sweep over spacing rescales the analytic value") {
    ExperimentConfig config;
    config.experiment = "sweep";
    config.sweep_target = "needle";
    config.sweep_param = "spacing";
    config.sweep_values = {2.0, 4.0};
    config.ds = 1.0;
    config.n_drops = 10'000;
    config.seed = 8;

    const ResultEnvelope env = run_experiment(config);
    REQUIRE(env.results.size() == 2);
    CHECK_THAT(*env.results[0].merged.analytic, WithinRel(1.0 / kPi, 1e-15));
    CHECK_THAT(*env.results[1].merged.analytic, WithinRel(0.5 / kPi, 1e-15));
}

TEST_CASE("empty sweep grid produces an empty result list") {
    ExperimentConfig config;
    config.experiment = "sweep";
    config.sweep_values = {};
    config.n_drops = 1'000;

    const ResultEnvelope env = run_experiment(config);
    CHECK(env.results.empty());
    CHECK(to_csv(env) == std::string(kCsvHeader) + "\n");
    const ordered_json j = to_json(env);
    CHECK(j["results"].is_array());
    CHECK(j["results"].empty());
}

TEST_CASE("json serialization is stable under reparsing") {
    ExperimentConfig config;
    config.experiment = "sweep";
    config.sweep_target = "needle";
    config.sweep_param = "ds";
    config.sweep_values = {0.5, 1.0};
    config.n_drops = 5'000;
    config.seed = 13;

    const ResultEnvelope env = run_experiment(config);
    const std::string text = dump_json(to_json(env));
    const ordered_json reparsed = ordered_json::parse(text);
    CHECK(dump_json(reparsed) == text);

    std::vector<std::string> top;
    for (auto it = reparsed.begin(); it != reparsed.end(); ++it) top.push_back(it.key());
    CHECK(top == std::vector<std::string>{"version", "experiment", "config", "results",
                                          "duration_seconds"});
    std::vector<std::string> config_keys;
    for (auto it = reparsed["config"].begin(); it != reparsed["config"].end(); ++it)
        config_keys.push_back(it.key());
    CHECK(config_keys ==
          std::vector<std::string>{"ds", "spacing", "room_l", "room_b", "link_x", "p_theta",
                                   "angle_min", "angle_max", "x0", "y0", "theta0", "n_steps",
                                   "burn_in", "n_drops", "shape", "shape_length", "bend_angle",
                                   "arc_angle", "sweep_target", "sweep_param", "sweep_values",
                                   "seed", "replicas", "format", "out"});
}

TEST_CASE("floats are written with full precision") {
    CHECK(dump_json(ordered_json(1.0 / 3.0)) == "0.33333333333333331\n");
    CHECK(dump_json(ordered_json(-0.0)) == "0\n");
    CHECK(dump_json(ordered_json(1.0)) == "1\n");
}

TEST_CASE("reruns are identical apart from the duration") {
    ExperimentConfig config;
    config.experiment = "needle";
    config.n_drops = 20'000;
    config.seed = 17;
    config.replicas = 2;

    ResultEnvelope a = run_experiment(config);
    ResultEnvelope b = run_experiment(config);
    a.duration_seconds = 0.0;
    b.duration_seconds = 0.0;
    CHECK(dump_json(to_json(a)) == dump_json(to_json(b)));
    CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("csv quotes fields containing separators or quotes") {
    ResultEnvelope env;
    env.experiment = "nee,dle";
    RunResult r;
    r.kind = "say \"hi\"";
    ReplicaOutcome rep;
    rep.index = 0;
    rep.seed = 1;
    rep.estimate = EstimateRecord{0.5, 0.4, 0.6, 10, std::nullopt};
    r.replicas.push_back(rep);
    r.merged = rep.estimate;
    env.results.push_back(r);

    const std::vector<std::string> lines = split_lines(to_csv(env));
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].rfind("\"nee,dle\",\"say \"\"hi\"\"\",", 0) == 0);
}

TEST_CASE("config files expand to flags without shadowing given ones") {
    const std::string path = "/tmp/crosswalk_test_cfg.ini";
    {
        std::ofstream out(path);
        out << "# comment line\n"
               "\n"
               "ds = 2\n"
               "seed=9\n"
               "out = \"/tmp/spaced name.json\"\n"
               "config = other.ini\n";
    }

    const std::vector<std::string> args = {"needle", "--seed", "10", "--config", path};
    const std::vector<std::string> expanded = expand_config_file(args);
    CHECK(expanded == std::vector<std::string>{"needle", "--seed", "10", "--config", path,
                                               "--ds", "2", "--out", "/tmp/spaced name.json"});

    // --config=path form, --seed=10 form
    const std::vector<std::string> eq_form =
        expand_config_file({"needle", "--seed=10", "--config=" + path});
    CHECK(eq_form == std::vector<std::string>{"needle", "--seed=10", "--config=" + path, "--ds",
                                              "2", "--out", "/tmp/spaced name.json"});

    std::remove(path.c_str());

    // no --config: untouched; missing file: untouched (parser reports it)
    CHECK(expand_config_file({"walk", "--ds", "1"}) ==
          std::vector<std::string>{"walk", "--ds", "1"});
    CHECK(expand_config_file({"walk", "--config", path}) ==
          std::vector<std::string>{"walk", "--config", path});
}

TEST_CASE("malformed config lines are rejected with their line number") {
    const std::string path = "/tmp/crosswalk_test_cfg_bad.ini";
    {
        std::ofstream out(path);
        out << "ds = 2\n"
               "what is this\n";
    }
    try {
        expand_config_file({"needle", "--config", path});
        FAIL("expected runtime_error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == path + ":2: expected key=value");
    }
    std::remove(path.c_str());
}

TEST_CASE("emit writes the rendered bytes to a file") {
    ExperimentConfig config;
    config.experiment = "needle";
    config.n_drops = 1'000;
    config.seed = 3;

    const ResultEnvelope env = run_experiment(config);
    const std::string path = "/tmp/crosswalk_test_emit.json";
    emit(env, "json", path);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == render(env, "json"));
    std::remove(path.c_str());

    try {
        emit(env, "json", "/nonexistent_dir_xyz/out.json");
        FAIL("expected io_error");
    } catch (const io_error& e) {
        CHECK(e.path() == "/nonexistent_dir_xyz/out.json");
    }
}
