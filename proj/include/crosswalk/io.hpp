#ifndef CROSSWALK_IO_HPP
#define CROSSWALK_IO_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "crosswalk/errors.hpp"
#include "crosswalk/experiment.hpp"

namespace crosswalk {

using ordered_json = nlohmann::ordered_json;

namespace detail {

/// Shortest-faithful float text: %.17g round-trips every finite double.
/// Zero is canonicalized so -0.0 cannot leak into the output.
inline void append_double(std::string& out, double v) {
    if (v == 0.0) {
        out += '0';
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

inline void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

inline void append_json(std::string& out, const ordered_json& v, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
    switch (v.type()) {
    case ordered_json::value_t::null: out += "null"; break;
    case ordered_json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; break;
    case ordered_json::value_t::number_integer: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v.get<std::int64_t>()));
        out += buf;
        break;
    }
    case ordered_json::value_t::number_unsigned: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%llu",
                      static_cast<unsigned long long>(v.get<std::uint64_t>()));
        out += buf;
        break;
    }
    case ordered_json::value_t::number_float: append_double(out, v.get<double>()); break;
    case ordered_json::value_t::string: append_escaped(out, v.get<std::string>()); break;
    case ordered_json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += pad_in;
            append_json(out, v[i], depth + 1);
            if (i + 1 < v.size()) out += ',';
            out += '\n';
        }
        out += pad;
        out += ']';
        break;
    }
    case ordered_json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            break;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = v.begin(); it != v.end(); ++it, ++i) {
            out += pad_in;
            append_escaped(out, it.key());
            out += ": ";
            append_json(out, it.value(), depth + 1);
            if (i + 1 < v.size()) out += ',';
            out += '\n';
        }
        out += pad;
        out += '}';
        break;
    }
    default: out += "null"; break;
    }
}

inline ordered_json opt_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

} // namespace detail

/// Serialize a JSON document in the envelope's documented layout: insertion
/// order preserved, floats with 17 significant digits, 2-space indent.
/// Re-serializing a parsed document reproduces the original bytes.
inline std::string dump_json(const ordered_json& v) {
    std::string out;
    detail::append_json(out, v, 0);
    out += '\n';
    return out;
}

inline ordered_json to_json(const ResultEnvelope& envelope) {
    const ExperimentConfig& c = envelope.config;

    ordered_json config;
    config["ds"] = c.ds;
    config["spacing"] = c.spacing;
    config["room_l"] = c.room_l;
    config["room_b"] = c.room_b;
    config["link_x"] = detail::opt_json(c.link_x);
    config["p_theta"] = c.p_theta;
    config["angle_min"] = c.angle_min;
    config["angle_max"] = c.angle_max;
    config["x0"] = detail::opt_json(c.x0);
    config["y0"] = detail::opt_json(c.y0);
    config["theta0"] = detail::opt_json(c.theta0);
    config["n_steps"] = c.n_steps;
    config["burn_in"] = c.burn_in ? ordered_json(*c.burn_in) : ordered_json(nullptr);
    config["n_drops"] = c.n_drops;
    config["shape"] = c.shape;
    config["shape_length"] = c.shape_length;
    config["bend_angle"] = c.bend_angle;
    config["arc_angle"] = c.arc_angle;
    config["sweep_target"] = c.sweep_target;
    config["sweep_param"] = c.sweep_param;
    config["sweep_values"] = c.sweep_values;
    config["seed"] = c.seed;
    config["replicas"] = c.replicas;
    config["format"] = c.format;
    config["out"] = c.out_path;

    ordered_json results = ordered_json::array();
    for (const RunResult& result : envelope.results) {
        const bool is_walk = result.kind == "walk";
        const char* point_key = result.kind == "noodle" ? "mean_crossings" : "p_hat";
        const char* analytic_key = result.kind == "noodle" ? "analytic_mean" : "p_analytic";

        ordered_json replicas = ordered_json::array();
        for (const ReplicaOutcome& rep : result.replicas) {
            ordered_json row;
            row["index"] = rep.index;
            row["seed"] = rep.seed;
            if (is_walk && rep.walk_extras) {
                row["n_steps"] = rep.walk_extras->n_steps;
                row["burn_in"] = rep.walk_extras->burn_in;
                row["n_crossings"] = rep.walk_extras->n_crossings;
            }
            row["n"] = rep.estimate.n;
            row[point_key] = rep.estimate.point;
            row["ci_low"] = rep.estimate.ci_low;
            row["ci_high"] = rep.estimate.ci_high;
            if (is_walk && rep.walk_extras) {
                row["tv_x"] = rep.walk_extras->tv_x;
                row["tv_y"] = rep.walk_extras->tv_y;
                row["tv_angle"] = rep.walk_extras->tv_angle;
            }
            replicas.push_back(std::move(row));
        }

        ordered_json merged;
        merged["n"] = result.merged.n;
        merged[point_key] = result.merged.point;
        merged["ci_low"] = result.merged.ci_low;
        merged["ci_high"] = result.merged.ci_high;
        if (is_walk && result.merged_walk) {
            merged["n_steps"] = result.merged_walk->n_steps;
            merged["burn_in"] = result.merged_walk->burn_in;
            merged["n_crossings"] = result.merged_walk->n_crossings;
            merged["tv_x"] = result.merged_walk->tv_x;
            merged["tv_y"] = result.merged_walk->tv_y;
            merged["tv_angle"] = result.merged_walk->tv_angle;
        }

        ordered_json row;
        row["kind"] = result.kind;
        row["param"] = result.sweep_param ? ordered_json(*result.sweep_param) : ordered_json(nullptr);
        row["value"] = detail::opt_json(result.sweep_value);
        row[analytic_key] = detail::opt_json(result.merged.analytic);
        row["rel_error"] = detail::opt_json(result.rel_error);
        row["replicas"] = std::move(replicas);
        row["merged"] = std::move(merged);
        results.push_back(std::move(row));
    }

    ordered_json root;
    root["version"] = envelope.version;
    root["experiment"] = envelope.experiment;
    root["config"] = std::move(config);
    root["results"] = std::move(results);
    root["duration_seconds"] = envelope.duration_seconds;
    return root;
}

namespace detail {

inline void append_csv_field(std::string& out, const std::string& field) {
    if (field.find_first_of(",\"\n\r") != std::string::npos) {
        out += '"';
        for (char ch : field) {
            if (ch == '"') out += '"';
            out += ch;
        }
        out += '"';
    } else {
        out += field;
    }
}

inline std::string csv_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

} // namespace detail

/// One row per (result, replica); the merged values live in the JSON
/// envelope only. Column order is frozen; fields that do not apply to a
/// row's kind are left empty.
inline constexpr const char* kCsvHeader =
    "experiment,kind,param,value,replica,seed,n,estimate,ci_low,ci_high,"
    "analytic,rel_error,tv_x,tv_y,tv_angle";

inline std::string to_csv(const ResultEnvelope& envelope) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const RunResult& result : envelope.results) {
        for (const ReplicaOutcome& rep : result.replicas) {
            std::vector<std::string> fields;
            fields.reserve(15);
            fields.push_back(envelope.experiment);
            fields.push_back(result.kind);
            fields.push_back(result.sweep_param ? *result.sweep_param : "");
            fields.push_back(result.sweep_value ? detail::csv_double(*result.sweep_value) : "");
            fields.push_back(std::to_string(rep.index));
            fields.push_back(std::to_string(rep.seed));
            fields.push_back(std::to_string(rep.estimate.n));
            fields.push_back(detail::csv_double(rep.estimate.point));
            fields.push_back(detail::csv_double(rep.estimate.ci_low));
            fields.push_back(detail::csv_double(rep.estimate.ci_high));
            fields.push_back(rep.estimate.analytic ? detail::csv_double(*rep.estimate.analytic)
                                                   : "");
            if (rep.estimate.analytic && *rep.estimate.analytic != 0.0)
                fields.push_back(detail::csv_double(
                    std::abs(rep.estimate.point - *rep.estimate.analytic) /
                    *rep.estimate.analytic));
            else
                fields.push_back("");
            if (rep.walk_extras) {
                fields.push_back(detail::csv_double(rep.walk_extras->tv_x));
                fields.push_back(detail::csv_double(rep.walk_extras->tv_y));
                fields.push_back(detail::csv_double(rep.walk_extras->tv_angle));
            } else {
                fields.push_back("");
                fields.push_back("");
                fields.push_back("");
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i > 0) out += ',';
                detail::append_csv_field(out, fields[i]);
            }
            out += '\n';
        }
    }
    return out;
}

inline std::string render(const ResultEnvelope& envelope, const std::string& format) {
    if (format == "csv") return to_csv(envelope);
    return dump_json(to_json(envelope));
}

/// Write the rendered envelope to `path`, or to stdout when `path` is
/// empty. Failures carry the offending path.
inline void emit(const ResultEnvelope& envelope, const std::string& format,
                 const std::string& path) {
    const std::string body = render(envelope, format);
    if (path.empty()) {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io_error(path, "cannot open for writing");
    file.write(body.data(), static_cast<std::streamsize>(body.size()));
    file.flush();
    if (!file.good()) throw io_error(path, "write failed");
}

} // namespace crosswalk

#endif // CROSSWALK_IO_HPP
