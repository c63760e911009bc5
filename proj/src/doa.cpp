#include <r1h/doa.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <r1h/errors.hpp>
#include <r1h/grid.hpp>

namespace r1h
{

namespace
{

constexpr double deg = std::numbers::pi / 180.0;

double abs_poly(const std::vector<Complex>& g, Complex w)
{
    Complex p = g.back();
    for (std::size_t m = g.size() - 1; m-- > 0;)
    {
        p = p * w + g[m];
    }
    return std::abs(p);
}

/// |s_D^H X s_W^*| for |z| = 1, where alpha = 1 / sqrt(D W) is constant.
double l2_score(const std::vector<Complex>& g, double scale, Complex z)
{
    return scale * abs_poly(g, std::conj(z));
}

} // namespace

void ArrayConfig::validate() const
{
    if (window == 0 || window > elements)
    {
        throw InvalidArgument("ArrayConfig: need 1 <= D <= M (D = " + std::to_string(window)
                              + ", M = " + std::to_string(elements) + ")");
    }
    if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
    {
        throw InvalidArgument("ArrayConfig: spacing ratio must be positive");
    }
}

ArrayConfig ArrayConfig::half_window(std::size_t elements, double spacing_ratio)
{
    ArrayConfig c{elements, std::max<std::size_t>(elements / 2, 1), spacing_ratio};
    c.validate();
    return c;
}

void ThetaGrid::validate() const
{
    if (!(step_degrees > 0.0) || !(step_degrees <= 180.0))
    {
        throw InvalidArgument("ThetaGrid: step must lie in (0, 180] degrees");
    }
}

std::size_t ThetaGrid::size() const
{
    validate();
    auto n = static_cast<std::size_t>(std::ceil(180.0 / step_degrees));
    while (n > 1 && angle(n - 1) >= 90.0)
    {
        --n;
    }
    while (angle(n) < 90.0)
    {
        ++n;
    }
    return n;
}

Complex z_of_theta(double theta_deg, double spacing_ratio)
{
    return std::polar(1.0, -2.0 * std::numbers::pi * spacing_ratio * std::sin(theta_deg * deg));
}

double theta_of_z(Complex z, double spacing_ratio)
{
    if (z == Complex{})
    {
        throw InvalidArgument("theta_of_z: z = 0 has no direction");
    }
    const double s = -std::arg(z) / (2.0 * std::numbers::pi * spacing_ratio);
    const double theta = std::asin(std::clamp(s, -1.0, 1.0)) / deg;
    return theta >= 90.0 ? -90.0 : theta;
}

ComplexVector steering_vector(double theta_deg, std::size_t elements, double spacing_ratio)
{
    const double step = -2.0 * std::numbers::pi * spacing_ratio * std::sin(theta_deg * deg);
    ComplexVector a(static_cast<Eigen::Index>(elements));
    for (std::size_t m = 0; m < elements; ++m)
    {
        a(static_cast<Eigen::Index>(m)) = std::polar(1.0, step * static_cast<double>(m));
    }
    return a;
}

DoaScene acquire(const ArrayConfig& config, double theta0, Complex amplitude,
                 const std::optional<NoiseModel>& noise, std::uint64_t seed)
{
    config.validate();
    if (noise)
    {
        noise->validate();
    }
    const std::size_t d = config.window;
    const std::size_t w = config.acquisitions();
    const ComplexVector a = steering_vector(theta0, config.elements, config.spacing_ratio);

    Rng rng(seed);
    Eigen::MatrixXcd x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(w));
    for (std::size_t j = 0; j < w; ++j)
    {
        for (std::size_t i = 0; i < d; ++i)
        {
            Complex v = amplitude * a(static_cast<Eigen::Index>(i + j));
            if (noise)
            {
                v += draw_noise_sample(*noise, rng);
            }
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return DoaScene{config, theta0, amplitude, ComplexMatrix(std::move(x)), seed};
}

namespace
{

void check_shape(const ComplexMatrix& x, const ArrayConfig& config, const char* who)
{
    config.validate();
    if (x.rows() != config.window || x.cols() != config.acquisitions())
    {
        throw InvalidArgument(std::string(who) + ": matrix is " + std::to_string(x.rows()) + "x"
                              + std::to_string(x.cols()) + ", array expects "
                              + std::to_string(config.window) + "x"
                              + std::to_string(config.acquisitions()));
    }
}

} // namespace

DoaEstimate estimate_doa_l2(const ComplexMatrix& x, const ArrayConfig& config,
                            const ThetaGrid& grid, bool refine)
{
    check_shape(x, config, "estimate_doa_l2");
    const std::size_t n = grid.size();
    const std::vector<Complex> g = antidiagonal_sums(x);
    const double scale =
        1.0 / std::sqrt(static_cast<double>(x.rows()) * static_cast<double>(x.cols()));

    DoaEstimate best;
    best.objective = -1.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const double v = l2_score(g, scale, z_of_theta(grid.angle(k), config.spacing_ratio));
        if (v > best.objective)
        {
            best.objective = v;
            best.grid_index = k;
        }
    }
    best.theta_deg = grid.angle(best.grid_index);

    if (refine)
    {
        auto f = [&](double t) { return l2_score(g, scale, z_of_theta(t, config.spacing_ratio)); };
        const double lo = std::max(-90.0, best.theta_deg - grid.step_degrees);
        const double hi = std::min(90.0, best.theta_deg + grid.step_degrees);
        const double t = golden_section_max(f, lo, hi);
        const double v = f(t);
        if (v > best.objective)
        {
            best.theta_deg = t;
            best.objective = v;
            best.refined = true;
        }
    }
    return best;
}

DoaEstimate estimate_doa_l1(const ComplexMatrix& x, const ArrayConfig& config,
                            const ThetaGrid& grid, const WeiszfeldConfig& cfg,
                            const L1SearchOptions& options)
{
    check_shape(x, config, "estimate_doa_l1");
    cfg.validate();
    const std::size_t n = grid.size();
    const detail::DiagonalData data(x);
    const double eps = cfg.epsilon_for(x);
    // |z| = 1 gives alpha = 1 / sqrt(D W) everywhere; only the generator matters
    std::vector<Complex> powers(data.n_diag);

    Complex warm{};
    bool have_warm = false;
    std::size_t nonconverged = 0;
    auto solve = [&](double theta, bool powers_ready = false) {
        if (!powers_ready)
        {
            detail::fill_powers(z_of_theta(theta, config.spacing_ratio), powers);
        }
        const Complex init = have_warm ? warm : detail::least_squares_coeff(data, powers);
        const detail::InnerResult r = detail::weiszfeld(data, powers, init, cfg, eps, nullptr);
        warm = r.c;
        have_warm = true;
        if (!r.converged)
        {
            ++nonconverged;
        }
        return r.objective;
    };

    DoaEstimate best;
    bool found = false;
    auto visit = [&](std::size_t k) {
        detail::fill_powers(z_of_theta(grid.angle(k), config.spacing_ratio), powers);
        // exact skip: the dual bound already exceeds the incumbent
        if (found && have_warm && detail::l1_dual_bound(data, powers, warm) > best.objective * (1.0 + 1e-12))
        {
            return;
        }
        const double v = solve(grid.angle(k), true);
        if (!found || v < best.objective)
        {
            best.objective = v;
            best.grid_index = k;
            found = true;
        }
    };

    if (options.two_stage)
    {
        if (!(options.coarse_step_degrees > 0.0) || !(options.window_degrees >= 0.0))
        {
            throw InvalidArgument("estimate_doa_l1: coarse step and window must be positive");
        }
        const auto stride = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(options.coarse_step_degrees / grid.step_degrees)));
        for (std::size_t k = 0; k < n; k += stride)
        {
            visit(k);
        }
        const auto half = static_cast<std::size_t>(
            std::llround(options.window_degrees / grid.step_degrees));
        const std::size_t centre = best.grid_index;
        const std::size_t lo = centre > half ? centre - half : 0;
        const std::size_t hi = std::min(n - 1, centre + half);
        found = false;
        have_warm = false;
        for (std::size_t k = lo; k <= hi; ++k)
        {
            visit(k);
        }
    }
    else
    {
        for (std::size_t k = 0; k < n; ++k)
        {
            visit(k);
        }
    }
    best.theta_deg = grid.angle(best.grid_index);

    if (options.refine)
    {
        have_warm = false;
        auto f = [&](double t) { return -solve(t); };
        const double lo = std::max(-90.0, best.theta_deg - grid.step_degrees);
        const double hi = std::min(90.0, best.theta_deg + grid.step_degrees);
        const double t = golden_section_max(f, lo, hi);
        have_warm = false;
        const double v = solve(t);
        if (v < best.objective)
        {
            best.theta_deg = t;
            best.objective = v;
            best.refined = true;
        }
    }
    best.inner_nonconverged = nonconverged;
    return best;
}

DoaEstimate matched_filter_ml(const ComplexMatrix& x, const ArrayConfig& config,
                              const ThetaGrid& grid)
{
    check_shape(x, config, "matched_filter_ml");
    const std::size_t d = x.rows();
    const std::size_t w = x.cols();
    const std::size_t n = grid.size();
    // column-major storage is vec(X)
    const Eigen::Map<const ComplexVector> r(x.eigen().data(), static_cast<Eigen::Index>(d * w));

    DoaEstimate best;
    best.objective = -1.0;
    ComplexVector av(static_cast<Eigen::Index>(d * w));
    for (std::size_t k = 0; k < n; ++k)
    {
        const Complex z = z_of_theta(grid.angle(k), config.spacing_ratio);
        const StructureVector sd = structure_vector(z, d);
        const StructureVector sw = structure_vector(z, w);
        for (std::size_t j = 0; j < w; ++j)
        {
            for (std::size_t i = 0; i < d; ++i)
            {
                av(static_cast<Eigen::Index>(j * d + i)) =
                    sw.v(static_cast<Eigen::Index>(j)) * sd.v(static_cast<Eigen::Index>(i));
            }
        }
        const double v = std::norm(av.dot(r));
        if (v > best.objective)
        {
            best.objective = v;
            best.grid_index = k;
        }
    }
    best.theta_deg = grid.angle(best.grid_index);
    return best;
}

ComplexVector average_per_sensor(const ComplexMatrix& x, const ArrayConfig& config)
{
    check_shape(x, config, "average_per_sensor");
    const std::vector<Complex> g = antidiagonal_sums(x);
    const std::size_t d = x.rows();
    const std::size_t w = x.cols();
    ComplexVector out(static_cast<Eigen::Index>(g.size()));
    for (std::size_t m = 0; m < g.size(); ++m)
    {
        // entries on anti-diagonal m
        const std::size_t count = std::min({m + 1, d, w, d + w - 1 - m});
        out(static_cast<Eigen::Index>(m)) = g[m] / static_cast<double>(count);
    }
    return out;
}

} // namespace r1h
