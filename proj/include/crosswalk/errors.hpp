#ifndef CROSSWALK_ERRORS_HPP
#define CROSSWALK_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace crosswalk {

/// Rejected experiment configuration. Carries the name of the offending
/// field so front ends can point at the exact flag.
class config_error : public std::runtime_error {
public:
    config_error(std::string field, const std::string& reason)
        : std::runtime_error("invalid configuration: " + field + ": " + reason),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Failure reading or writing an output target.
class io_error : public std::runtime_error {
public:
    io_error(std::string path, const std::string& reason)
        : std::runtime_error(path + ": " + reason), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace crosswalk

#endif // CROSSWALK_ERRORS_HPP
