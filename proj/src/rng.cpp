#include "blowup/rng.hpp"

namespace blowup {

std::uint64_t hash_name(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t stream_key(std::uint64_t seed, std::string_view module, std::string_view check, std::uint64_t chunk) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ hash_name(module));
    k = splitmix64(k ^ hash_name(check));
    return splitmix64(k ^ splitmix64(chunk + 0x632be59bd9b4e019ULL));
}

}  // namespace blowup
