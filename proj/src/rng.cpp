#include <r1h/rng.hpp>

#include <cmath>
#include <numbers>

namespace r1h
{

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    double u1 = uniform();
    while (u1 == 0.0)
    {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Rng::complex_normal(double variance)
{
    double u1 = uniform();
    while (u1 == 0.0)
    {
        u1 = uniform();
    }
    const double u2 = uniform();
    // Box-Muller pair; each component has variance / 2
    const double radius = std::sqrt(-variance * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = mix64(master);
    for (std::uint64_t k : keys)
    {
        h = mix64(h ^ mix64(k));
    }
    return h;
}

} // namespace r1h
