#ifndef R1H_DOA_HPP
#define R1H_DOA_HPP

#include <cstddef>
#include <cstdint>
#include <optional>

#include <r1h/matrix.hpp>
#include <r1h/noise.hpp>
#include <r1h/rank1_l1.hpp>

namespace r1h
{

///
/// Uniform linear array of M elements read through a sliding window of D
/// elements, giving W = M - D + 1 subarray acquisitions.
///
struct ArrayConfig
{
    std::size_t elements = 16;
    std::size_t window = 8;
    /// d / lambda
    double spacing_ratio = 0.5;

    std::size_t acquisitions() const { return elements - window + 1; }

    /// Throws InvalidArgument unless 1 <= D <= M and spacing_ratio > 0.
    void validate() const;

    /// Spacing above half a wavelength admits spatial aliasing.
    bool aliasing() const { return spacing_ratio > 0.5; }

    /// D = M / 2, the sweep's default.
    static ArrayConfig half_window(std::size_t elements, double spacing_ratio = 0.5);
};

/// Angles -90 + k * step for k = 0 .. N - 1, all below +90 degrees.
struct ThetaGrid
{
    double step_degrees = 0.01;

    void validate() const;
    std::size_t size() const;
    double angle(std::size_t k) const { return -90.0 + static_cast<double>(k) * step_degrees; }
};

struct DoaScene
{
    ArrayConfig config;
    double theta0 = 0.0;
    Complex amplitude;
    ComplexMatrix measurements;
    std::uint64_t seed = 0;
};

struct DoaEstimate
{
    double theta_deg = 0.0;
    std::size_t grid_index = 0;
    /// Maximized (L2, matched filter) or minimized (L1) objective.
    double objective = 0.0;
    /// L1: grid points whose inner Weiszfeld loop hit the iteration cap.
    std::size_t inner_nonconverged = 0;
    bool refined = false;
};

/// a_M(theta)_m = exp(-j 2 pi m (d/lambda) sin theta), m = 0 .. M - 1.
ComplexVector steering_vector(double theta_deg, std::size_t elements, double spacing_ratio);

/// exp(-j 2 pi (d/lambda) sin theta); always on the unit circle.
Complex z_of_theta(double theta_deg, double spacing_ratio);

/// Inverse of z_of_theta on the principal branch of arg z, in [-90, 90).
/// +90 wraps to -90 (the same generator at half-wavelength spacing).
double theta_of_z(Complex z, double spacing_ratio);

///
/// Sliding-subarray acquisition: column i is x * a_M(theta0)[i .. i + D - 1]
/// plus a fresh noise draw for that acquisition (column 0 first, top to
/// bottom). `noise == nullopt` gives the noiseless matrix.
///
DoaScene acquire(const ArrayConfig& config, double theta0, Complex amplitude,
                 const std::optional<NoiseModel>& noise, std::uint64_t seed);

/// Grid argmax of |s_D(z)^H X s_W(z)^*| over z = z_of_theta(theta).
/// `refine` polishes the winner by golden section within one step.
DoaEstimate estimate_doa_l2(const ComplexMatrix& x, const ArrayConfig& config,
                            const ThetaGrid& grid = {}, bool refine = false);

struct L1SearchOptions
{
    /// Coarse pass at `coarse_step_degrees`, then the full-resolution grid
    /// within +-`window_degrees` of the coarse winner.
    bool two_stage = false;
    double coarse_step_degrees = 1.0;
    double window_degrees = 2.0;
    bool refine = false;
};

/// Grid argmin of objective_l1(X, z_of_theta(theta)), |z| = 1 only. Each
/// Weiszfeld run is warm-started from the previous grid angle.
DoaEstimate estimate_doa_l1(const ComplexMatrix& x, const ArrayConfig& config,
                            const ThetaGrid& grid = {}, const WeiszfeldConfig& cfg = {},
                            const L1SearchOptions& options = {});

/// Grid argmax of |a_v(theta)^H vec(X)|^2 with a_v = s_W kron s_D and vec()
/// stacking columns. An independent route to the same index as
/// estimate_doa_l2.
DoaEstimate matched_filter_ml(const ComplexMatrix& x, const ArrayConfig& config,
                              const ThetaGrid& grid = {});

/// Per-sensor mean of the entries X(i, j) with i + j = m (length M).
ComplexVector average_per_sensor(const ComplexMatrix& x, const ArrayConfig& config);

} // namespace r1h

#endif
