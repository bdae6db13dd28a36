// Command-line front end: configures one experiment, runs it, and emits a
// machine-readable envelope. Exit codes: 0 success, 2 configuration or
// usage error, 3 output I/O error, 1 anything else.

#include <algorithm>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crosswalk/config_file.hpp"
#include "crosswalk/experiment.hpp"
#include "crosswalk/io.hpp"

namespace {

using crosswalk::ExperimentConfig;

void add_common_options(CLI::App* sub, ExperimentConfig& cfg, std::string& config_path) {
    sub->add_option("--seed", cfg.seed, "base RNG seed; replica k uses seed + k");
    sub->add_option("--replicas", cfg.replicas, "independent replicas to run");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out_path, "output file path (default: stdout)");
    sub->add_option("--config", config_path,
                    "flat key=value file, keys named like the long flags; "
                    "command-line flags override")
        ->check(CLI::ExistingFile);
}

void add_walk_options(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--ds", cfg.ds, "step length");
    sub->add_option("--room-l", cfg.room_l, "room extent along the crossing axis");
    sub->add_option("--room-b", cfg.room_b, "room extent along the other axis");
    sub->add_option("--link-x", cfg.link_x, "link abscissa (default: room-l / 2)");
    sub->add_option("--p-theta", cfg.p_theta, "probability of keeping the previous heading");
    sub->add_option("--angle-min", cfg.angle_min, "lower edge of the heading range");
    sub->add_option("--angle-max", cfg.angle_max, "upper edge of the heading range");
    sub->add_option("--x0", cfg.x0, "initial x (requires --y0 and --theta0)");
    sub->add_option("--y0", cfg.y0, "initial y");
    sub->add_option("--theta0", cfg.theta0, "initial heading");
    sub->add_option("--steps", cfg.n_steps, "steps per replica");
    sub->add_option("--burn-in", cfg.burn_in, "steps discarded up front (default: steps / 100)");
}

void add_drop_options(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--spacing", cfg.spacing, "lattice line spacing L");
    sub->add_option("--drops", cfg.n_drops, "drops per replica");
}

void add_shape_options(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--shape", cfg.shape, "noodle shape")
        ->check(CLI::IsMember({"segment", "v", "arc", "semicircle", "circle"}));
    sub->add_option("--length", cfg.shape_length, "total arc length of the shape");
    sub->add_option("--bend", cfg.bend_angle, "interior angle of the v shape");
    sub->add_option("--arc-angle", cfg.arc_angle, "subtended angle of the arc shape");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo link-crossing experiments: random walks in a "
                 "reflecting room and needle/noodle drops on a line lattice",
                 "crosswalk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", crosswalk::kVersion);

    ExperimentConfig cfg;
    std::string config_path;

    CLI::App* walk = app.add_subcommand("walk", "random walk crossing-rate estimate");
    add_walk_options(walk, cfg);
    add_common_options(walk, cfg, config_path);

    CLI::App* needle = app.add_subcommand("needle", "straight-needle crossing probability");
    needle->add_option("--ds", cfg.ds, "needle length");
    add_drop_options(needle, cfg);
    add_common_options(needle, cfg, config_path);

    CLI::App* noodle = app.add_subcommand("noodle", "expected crossings of a rigid shape");
    add_shape_options(noodle, cfg);
    add_drop_options(noodle, cfg);
    add_common_options(noodle, cfg, config_path);

    CLI::App* compare =
        app.add_subcommand("compare", "walk, needle and noodle at matched (ds, L = room-l)");
    add_walk_options(compare, cfg);
    compare->add_option("--drops", cfg.n_drops, "drops per replica for needle and noodle");
    add_common_options(compare, cfg, config_path);

    CLI::App* sweep = app.add_subcommand("sweep", "repeat one estimator over a parameter grid");
    sweep->add_option("--target", cfg.sweep_target, "estimator to sweep")
        ->check(CLI::IsMember({"needle", "walk", "noodle"}));
    sweep->add_option("--param", cfg.sweep_param, "parameter to vary")
        ->check(CLI::IsMember({"ds", "spacing"}));
    sweep->add_option("--values", cfg.sweep_values, "grid values (comma separated)")
        ->delimiter(',');
    add_walk_options(sweep, cfg);
    add_drop_options(sweep, cfg);
    add_shape_options(sweep, cfg);
    add_common_options(sweep, cfg, config_path);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = crosswalk::expand_config_file(args);
        std::reverse(args.begin(), args.end()); // CLI11's vector overload wants last-first
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) { // malformed config file
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    cfg.experiment = app.get_subcommands().front()->get_name();

    try {
        const crosswalk::ResultEnvelope envelope = crosswalk::run_experiment(cfg);
        crosswalk::emit(envelope, cfg.format, cfg.out_path);
    } catch (const crosswalk::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const crosswalk::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
