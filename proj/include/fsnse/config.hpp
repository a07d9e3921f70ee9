#pragma once

// Flat, sectioned, human-readable run configuration and the run manifest.
// Sections: [physics] [grid] [noise] [initial] [output] [study].  A manifest
// echoes the full effective configuration, so a run is reproducible from it.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsnse/solver.hpp"

namespace fsnse {

struct StudyConfig {
    std::vector<int> levels;
    std::vector<double> dts;
    int paths = 100;
    int p = 2;
    int threads = 0; // 0 = hardware concurrency
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    SimConfig sim;
    StudyConfig study;
};

// Parses "key = value" lines under "[section]" headers; '#' starts a comment.
// Unknown keys are rejected with the offending section.key name.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical echo of the effective configuration; parse(render(c)) == c.
std::string render_config(const RunConfig& cfg);

struct RunManifest {
    std::string artifact_version;
    std::string config_echo;
    std::uint64_t seed = 0;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> outputs;
    double stopping_time = -1.0; // tau if the blow-up monitor triggered
    std::string to_text() const;
};

extern const char* const ARTIFACT_VERSION;

} // namespace fsnse
