#include <r1h/grid.hpp>

#include <algorithm>
#include <cmath>

#include <r1h/errors.hpp>

namespace r1h
{

void GridSpec::validate() const
{
    if (!(delta_rho > 0.0 && delta_rho <= 1.0))
    {
        throw InvalidArgument("GridSpec: delta_rho must lie in (0, 1]");
    }
    if (!(delta_phi > 0.0 && delta_phi <= 2.0 * std::numbers::pi))
    {
        throw InvalidArgument("GridSpec: delta_phi must lie in (0, 2 pi]");
    }
}

std::size_t PolarGrid::size() const
{
    std::size_t n = 0;
    for (std::size_t k = 0; k < radii.size(); ++k)
    {
        n += angles_at(k);
    }
    return n;
}

PolarGrid make_polar_grid(const GridSpec& spec)
{
    spec.validate();
    PolarGrid grid;

    const auto n_rho = static_cast<std::size_t>(std::ceil(1.0 / spec.delta_rho - 1e-12));
    for (std::size_t k = 0; k <= n_rho; ++k)
    {
        const double rho = std::min(static_cast<double>(k) * spec.delta_rho, 1.0);
        if (rho >= 1.0 && !spec.include_boundary)
        {
            break;
        }
        grid.radii.push_back(rho);
        if (rho >= 1.0)
        {
            break;
        }
    }

    if (spec.restrict_real)
    {
        grid.angles = {0.0, std::numbers::pi};
        grid.real_axis = true;
    }
    else
    {
        const double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t k = 0;; ++k)
        {
            const double phi = static_cast<double>(k) * spec.delta_phi;
            if (phi >= two_pi - 1e-12)
            {
                break;
            }
            grid.angles.push_back(phi);
        }
    }
    return grid;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          int iterations)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < iterations; ++it)
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

Complex refine_polar(const std::function<double(Complex)>& score, Complex winner,
                     const GridSpec& spec)
{
    const double best = score(winner);
    double rho = std::abs(winner);
    double phi = rho > 0.0 ? std::arg(winner) : 0.0;

    const double rho_lo = std::max(0.0, rho - spec.delta_rho);
    const double rho_hi = std::min(spec.include_boundary ? 1.0 : 1.0 - 1e-12, rho + spec.delta_rho);
    if (rho_hi > rho_lo)
    {
        rho = golden_section_max([&](double r) { return score(std::polar(r, phi)); }, rho_lo,
                                 rho_hi);
    }
    if (!spec.restrict_real && rho > 0.0)
    {
        phi = golden_section_max([&](double p) { return score(std::polar(rho, p)); },
                                 phi - spec.delta_phi, phi + spec.delta_phi);
    }
    Complex candidate = std::polar(rho, phi);
    if (spec.restrict_real)
    {
        // keep the real axis exactly
        candidate = Complex{std::cos(phi) < 0.0 ? -rho : rho, 0.0};
    }
    return score(candidate) > best ? candidate : winner;
}

} // namespace r1h
