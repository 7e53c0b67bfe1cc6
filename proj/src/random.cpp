#include "comp_isac/random.hpp"

#include <cmath>

namespace comp_isac {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t counter)
{
    return RandomStream(mix64(seed) ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

double RandomStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open_closed()
{
    return 1.0 - uniform();
}

double RandomStream::normal()
{
    return normal_(engine_);
}

double RandomStream::exponential(double mean)
{
    if (mean <= 0.0) {
        return 0.0;
    }
    return -mean * std::log(uniform_open_closed());
}

}  // namespace comp_isac
