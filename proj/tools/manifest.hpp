#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace safezone::cli {

// Audit record written next to every file a subcommand produces. Replaying
// the recorded command reproduces the outputs (bit-for-bit on deterministic
// paths, sample-for-sample on seeded ones).
struct RunManifest {
    std::string command_line;
    std::string version;
    std::optional<uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> inputs; // path, sha256
    std::vector<std::pair<std::string, std::string>> config; // key, value
    std::vector<std::string> outputs;
    double wall_clock_seconds = 0.0;
    std::string created_utc;

    void add_input(const std::string& path);
    void write(const std::string& path) const;
};

std::string current_utc_timestamp();

} // namespace safezone::cli
