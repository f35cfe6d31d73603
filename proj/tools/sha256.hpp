#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace safezone::cli {

// Minimal SHA-256, enough to fingerprint input files in run manifests.
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    void update(const void* data, size_t length);
    std::string hex_digest(); // finalizes

    static std::string of_file(const std::string& path);
    static std::string of_string(const std::string& text);

private:
    void process_block(const uint8_t* block);

    std::array<uint32_t, 8> state_;
    std::array<uint8_t, 64> buffer_;
    uint64_t total_bytes_;
    size_t buffered_;
};

} // namespace safezone::cli
