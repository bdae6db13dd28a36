#ifndef CROSSWALK_CONFIG_FILE_HPP
#define CROSSWALK_CONFIG_FILE_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace crosswalk {

namespace detail {

inline std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace detail

/// Translate a flat key=value file into trailing long flags so the argument
/// parser applies its normal typing and validation. Keys are named like the
/// long flags without the leading dashes; `#` lines are comments; values may
/// be double-quoted. Keys already present on the command line are skipped,
/// which gives flags-override-file precedence. A missing file is left for
/// the parser's own existence check to report.
inline std::vector<std::string> expand_config_file(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream file(path);
    if (!file) return args;

    const auto given_on_cli = [&args](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&flag](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };

    std::vector<std::string> extra;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string entry = detail::trimmed(line);
        if (entry.empty() || entry.front() == '#') continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string key = detail::trimmed(entry.substr(0, eq));
        std::string value = detail::trimmed(entry.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key == "config") continue;
        const std::string flag = "--" + key;
        if (given_on_cli(flag)) continue;
        extra.push_back(flag);
        extra.push_back(value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

} // namespace crosswalk

#endif // CROSSWALK_CONFIG_FILE_HPP
