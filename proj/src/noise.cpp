#include <r1h/noise.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include <r1h/errors.hpp>

namespace r1h
{

NoiseModel NoiseModel::white(double sigma2)
{
    NoiseModel m;
    m.kind = NoiseKind::white_gaussian;
    m.sigma2 = sigma2;
    return m;
}

NoiseModel NoiseModel::impulsive(double p, double sigma1_2, double sigma2_2)
{
    NoiseModel m;
    m.kind = NoiseKind::bernoulli_gaussian;
    m.p = p;
    m.sigma1_2 = sigma1_2;
    m.sigma2_2 = sigma2_2;
    return m;
}

void NoiseModel::validate() const
{
    if (kind == NoiseKind::white_gaussian)
    {
        if (!(sigma2 > 0.0))
        {
            throw InvalidArgument("NoiseModel: white noise needs sigma2 > 0");
        }
        return;
    }
    if (!(p > 0.0 && p < 1.0))
    {
        throw InvalidArgument("NoiseModel: impulse probability must lie in (0, 1)");
    }
    if (!(sigma1_2 > 0.0 && sigma2_2 > sigma1_2))
    {
        throw InvalidArgument("NoiseModel: need sigma2_2 > sigma1_2 > 0");
    }
}

double NoiseModel::effective_variance() const
{
    if (kind == NoiseKind::white_gaussian)
    {
        return sigma2;
    }
    return (1.0 - p) * sigma1_2 + p * sigma2_2;
}

Complex draw_noise_sample(const NoiseModel& model, Rng& rng)
{
    if (model.kind == NoiseKind::white_gaussian)
    {
        return rng.complex_normal(model.sigma2);
    }
    const bool impulse = rng.uniform() < model.p;
    return rng.complex_normal(impulse ? model.sigma2_2 : model.sigma1_2);
}

std::vector<Complex> draw_noise(const NoiseModel& model, std::size_t count, Rng& rng)
{
    model.validate();
    std::vector<Complex> out(count);
    for (auto& v : out)
    {
        v = draw_noise_sample(model, rng);
    }
    return out;
}

Complex calibrate_amplitude(double snr_db, const NoiseModel& model, Rng& rng)
{
    model.validate();
    const double power = std::pow(10.0, snr_db / 10.0) * model.effective_variance();
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    return std::polar(std::sqrt(power), phase);
}

SensorMap SensorMap::sliding_ula(std::size_t rows, std::size_t cols)
{
    SensorMap map{rows, cols, rows + cols - 1, std::vector<std::size_t>(rows * cols)};
    for (std::size_t j = 0; j < cols; ++j)
    {
        for (std::size_t i = 0; i < rows; ++i)
        {
            map.sensor[j * rows + i] = i + j;
        }
    }
    return map;
}

ComplexMatrix inject_faults(const ComplexMatrix& x, const SensorMap& map, const FaultSpec& spec,
                            Rng& rng)
{
    if (map.rows != x.rows() || map.cols != x.cols() || map.sensor.size() != x.rows() * x.cols())
    {
        throw InvalidArgument("inject_faults: sensor map does not match the matrix shape");
    }
    for (std::size_t s : spec.faulty_sensors)
    {
        if (s >= map.n_sensors)
        {
            throw InvalidArgument("inject_faults: faulty sensor " + std::to_string(s)
                                  + " outside an array of " + std::to_string(map.n_sensors));
        }
    }
    if (spec.faulty_sensors.empty())
    {
        return x;
    }

    Eigen::MatrixXcd out = x.eigen();
    const double gain = std::pow(10.0, spec.alpha_db / 10.0);
    for (std::size_t j = 0; j < x.cols(); ++j)
    {
        double healthy_power = 0.0;
        std::size_t healthy = 0;
        for (std::size_t i = 0; i < x.rows(); ++i)
        {
            if (!spec.faulty_sensors.contains(map.at(i, j)))
            {
                healthy_power += std::norm(x(i, j));
                ++healthy;
            }
        }
        if (healthy == 0)
        {
            throw InvalidConfiguration("inject_faults: column " + std::to_string(j)
                                       + " has no healthy entry");
        }
        const double variance = gain * healthy_power / static_cast<double>(healthy);
        for (std::size_t i = 0; i < x.rows(); ++i)
        {
            if (spec.faulty_sensors.contains(map.at(i, j)))
            {
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    rng.complex_normal(variance);
            }
        }
    }
    return ComplexMatrix(std::move(out));
}

} // namespace r1h
