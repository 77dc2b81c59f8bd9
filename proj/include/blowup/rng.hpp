#pragma once

#include <cstdint>
#include <string_view>

namespace blowup {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_name(std::string_view s);

// Key of an independent substream; changing any component gives an unrelated stream.
std::uint64_t stream_key(std::uint64_t seed, std::string_view module, std::string_view check,
                         std::uint64_t chunk = 0);

// Seed for the tag-th member of a family of related runs; tag 0 is the seed itself.
inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t tag) {
    return tag == 0 ? seed : splitmix64(seed ^ splitmix64(tag * 0xd1b54a32d192ed03ULL));
}

// Counter-based generator: output i is a pure function of (key, i).
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return splitmix64(key_ ^ splitmix64(++counter_)); }

    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    // Strictly inside (0,1).
    double uniform_open() { return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace blowup
