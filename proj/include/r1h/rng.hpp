#ifndef R1H_RNG_HPP
#define R1H_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace r1h
{

///
/// Seeded random stream, version 1.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms take the top 53 bits; normals use the Box-Muller
/// transform. The standard library distributions are avoided because
/// their output is implementation-defined. Any change to these rules must
/// bump `version`.
///
class Rng
{
public:
    static constexpr int version = 1;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();

    /// Standard normal.
    double normal();

    /// Circularly-symmetric complex Gaussian with E|n|^2 = variance (each
    /// part has variance / 2).
    std::complex<double> complex_normal(double variance);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic child seed from a master seed and a key path.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

} // namespace r1h

#endif
