#include "safezone/rng.hpp"

namespace safezone {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t root, std::string_view label, uint64_t index) {
    // FNV-1a over the label, then SplitMix hops keep unrelated labels and
    // indices decorrelated.
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix64(root ^ mix64(h) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

} // namespace safezone
