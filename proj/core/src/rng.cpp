#include "mggpo/rng.hpp"

#include <sstream>

#include "mggpo/error.hpp"

namespace mggpo {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

RngStream RngStream::split(std::uint64_t master_seed, std::string_view purpose) {
    return RngStream(splitmix64(master_seed ^ fnv1a(purpose)));
}

std::uint64_t RngStream::below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return r % n;
}

std::string RngStream::state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

void RngStream::restore(const std::string& state) {
    std::istringstream is(state);
    is >> engine_;
    if (!is) throw ConfigError("malformed rng state");
}

} // namespace mggpo
