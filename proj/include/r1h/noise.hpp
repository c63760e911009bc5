#ifndef R1H_NOISE_HPP
#define R1H_NOISE_HPP

#include <cstddef>
#include <set>
#include <vector>

#include <r1h/matrix.hpp>
#include <r1h/rng.hpp>

namespace r1h
{

enum class NoiseKind
{
    white_gaussian,
    bernoulli_gaussian
};

///
/// Additive noise model. White: CN(0, sigma2). Impulsive: each sample from
/// CN(0, sigma1_2) with probability 1 - p, else CN(0, sigma2_2).
/// CN(0, v) puts variance v / 2 on each of the real and imaginary parts.
///
struct NoiseModel
{
    NoiseKind kind = NoiseKind::white_gaussian;
    double sigma2 = 1.0;
    double p = 0.1;
    double sigma1_2 = 1.0;
    double sigma2_2 = 200.0;

    static NoiseModel white(double sigma2);
    static NoiseModel impulsive(double p, double sigma1_2, double sigma2_2);

    /// Throws InvalidArgument on sigma2 <= 0 (white), or unless
    /// 0 < p < 1 and sigma2_2 > sigma1_2 > 0 (impulsive).
    void validate() const;

    /// Average per-sample power: sigma2, or (1 - p) sigma1_2 + p sigma2_2.
    double effective_variance() const;
};

std::vector<Complex> draw_noise(const NoiseModel& model, std::size_t count, Rng& rng);

/// One sample; the same stream consumption as draw_noise(model, 1, rng).
Complex draw_noise_sample(const NoiseModel& model, Rng& rng);

/// x with |x|^2 = 10^{snr_db / 10} * effective_variance and a uniform phase.
Complex calibrate_amplitude(double snr_db, const NoiseModel& model, Rng& rng);

struct FaultSpec
{
    std::set<std::size_t> faulty_sensors;
    double alpha_db = 10.0;
};

/// Sensor index of every entry of a D x W measurement matrix.
struct SensorMap
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t n_sensors = 0;
    std::vector<std::size_t> sensor; // column-major, like ComplexMatrix

    std::size_t at(std::size_t i, std::size_t j) const { return sensor[j * rows + i]; }

    /// Sliding window over a ULA: entry (i, j) samples sensor i + j.
    static SensorMap sliding_ula(std::size_t rows, std::size_t cols);
};

///
/// Replaces every entry that samples a faulty sensor with an independent
/// CN(0, sigma_i^2) draw, where for column i
/// sigma_i^2 = 10^{alpha/10} * mean_{healthy j} |x_ji|^2.
/// Healthy entries are returned unchanged. Throws InvalidConfiguration when
/// a column has no healthy entry and InvalidArgument on a map/matrix
/// dimension mismatch or a faulty index outside the array.
///
ComplexMatrix inject_faults(const ComplexMatrix& x, const SensorMap& map, const FaultSpec& spec,
                            Rng& rng);

} // namespace r1h

#endif
