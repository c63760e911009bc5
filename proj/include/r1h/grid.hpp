#ifndef R1H_GRID_HPP
#define R1H_GRID_HPP

#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include <r1h/matrix.hpp>

namespace r1h
{

///
/// Polar search grid z = rho * exp(j phi) over the closed unit disc.
///
/// Radii are k * delta_rho (k = 0 .. ceil(1/delta_rho), the last one clamped
/// to 1) and angles are k * delta_phi < 2 pi. Halving either step keeps every
/// old point, so refining a grid never loses the coarse optimum. rho = 0 is
/// visited once (phi = 0). Traversal is rho-major, then phi.
///
struct GridSpec
{
    double delta_rho = 1.0 / 512.0;
    double delta_phi = 2.0 * std::numbers::pi / 2048.0;
    bool include_boundary = true;
    /// Search phi in {0, pi} only, i.e. z in [-1, 1].
    bool restrict_real = false;
    /// Golden-section polish of the grid winner in rho, then phi.
    bool refine = false;

    /// Throws InvalidArgument unless 0 < delta_rho <= 1 and 0 < delta_phi <= 2 pi.
    void validate() const;

    static GridSpec default_l2() { return GridSpec{}; }
    static GridSpec default_l1()
    {
        GridSpec g;
        g.delta_rho = 1.0 / 256.0;
        g.delta_phi = 2.0 * std::numbers::pi / 1024.0;
        return g;
    }
};

struct PolarGrid
{
    std::vector<double> radii;
    std::vector<double> angles;
    bool real_axis = false;

    /// Grid point; on the real-axis grid the imaginary part is exactly 0.
    Complex point(std::size_t radius_index, std::size_t angle_index) const
    {
        const double rho = radii[radius_index];
        if (real_axis)
        {
            return Complex{angle_index == 0 ? rho : -rho, 0.0};
        }
        return std::polar(rho, angles[angle_index]);
    }

    /// Angles visited for a given radius (1 at rho == 0).
    std::size_t angles_at(std::size_t radius_index) const
    {
        return radii[radius_index] == 0.0 ? 1 : angles.size();
    }

    std::size_t size() const;
};

PolarGrid make_polar_grid(const GridSpec& spec);

/// Maximizes a unimodal function on [lo, hi]; returns the abscissa.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          int iterations = 60);

/// Polishes a grid winner: golden-section in rho over the adjacent cells,
/// then in phi. `score` is maximized. Returns the improved point, or the
/// input when the polish does not beat it.
Complex refine_polar(const std::function<double(Complex)>& score, Complex winner,
                     const GridSpec& spec);

} // namespace r1h

#endif
