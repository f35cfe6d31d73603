#include "manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "safezone/io.hpp"
#include "sha256.hpp"

namespace safezone::cli {

std::string current_utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

void RunManifest::add_input(const std::string& path) {
    inputs.emplace_back(path, Sha256::of_file(path));
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << "safezone-manifest v1\n";
    out << "version " << version << "\n";
    out << "command " << command_line << "\n";
    if (seed) out << "seed " << *seed << "\n";
    for (const auto& [key, value] : config) out << "config " << key << ' ' << value << "\n";
    for (const auto& [input, digest] : inputs)
        out << "input " << input << " sha256 " << digest << "\n";
    for (const std::string& output : outputs) out << "output " << output << "\n";
    out << "wall_clock_seconds " << safezone::format_double(wall_clock_seconds) << "\n";
    out << "created " << created_utc << "\n";
}

} // namespace safezone::cli
