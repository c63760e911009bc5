#include <r1h/rank1_l2.hpp>

#include <cmath>
#include <limits>

#include <r1h/errors.hpp>

namespace r1h
{

std::string_view to_string(NormFlavor f)
{
    return f == NormFlavor::l2 ? "L2" : "L1";
}

std::string_view to_string(Branch b)
{
    return b == Branch::direct ? "direct" : "flipped";
}

std::string_view to_string(Structure s)
{
    return s == Structure::hankel ? "hankel" : "toeplitz";
}

std::string_view to_string(EvaluationMode m)
{
    return m == EvaluationMode::sequential ? "sequential" : "sequential_warm_start";
}

std::pair<Complex, Complex> reflect_rank1(Complex c, Complex z, std::size_t rows,
                                          std::size_t cols)
{
    if (z == Complex{})
    {
        throw ReciprocalOfZero("reflect_rank1: generator z = 0 maps to the point at infinity");
    }
    return {c * unit_phase_power(z, rows + cols - 2), 1.0 / z};
}

std::pair<Complex, Complex> post_flip_generator(Complex c, Complex z, std::size_t rows,
                                                std::size_t cols)
{
    if (z == Complex{})
    {
        return {c, Complex(std::numeric_limits<double>::infinity(), 0.0)};
    }
    return reflect_rank1(c, z, rows, cols);
}

Complex coefficient_l2(const ComplexMatrix& x, Complex z)
{
    const StructureVector sd = structure_vector(z, x.rows());
    const StructureVector sw = structure_vector(z, x.cols());
    return sd.v.dot(x.eigen() * sw.v.conjugate()); // dot() conjugates its left operand
}

double objective_l2(const ComplexMatrix& x, Complex z)
{
    return std::abs(coefficient_l2(x, z));
}

namespace detail
{

namespace
{

/// |sum_m g_m w^m| by Horner's rule, spelled out in real arithmetic.
inline double horner_abs(const std::vector<Complex>& g, double wr, double wi)
{
    double pr = g.back().real();
    double pi = g.back().imag();
    for (std::size_t m = g.size() - 1; m-- > 0;)
    {
        const double nr = pr * wr - pi * wi + g[m].real();
        const double ni = pr * wi + pi * wr + g[m].imag();
        pr = nr;
        pi = ni;
    }
    return std::sqrt(pr * pr + pi * pi);
}

} // namespace

L2Scan scan_l2(const std::vector<Complex>& g, std::size_t rows, std::size_t cols,
               const PolarGrid& grid)
{
    L2Scan best;
    for (std::size_t ri = 0; ri < grid.radii.size(); ++ri)
    {
        const double rho = grid.radii[ri];
        const double alpha = 1.0 / (power_vector_norm(rho, rows) * power_vector_norm(rho, cols));
        const std::size_t n_angles = grid.angles_at(ri);
        for (std::size_t ai = 0; ai < n_angles; ++ai)
        {
            const Complex z = grid.point(ri, ai);
            // s_D(z)^H X s_W(z)^* = alpha * sum_m g_m conj(z)^m
            const double value = alpha * horner_abs(g, z.real(), -z.imag());
            if (value > best.value)
            {
                best.value = value;
                best.z = z;
            }
        }
    }
    return best;
}

} // namespace detail

Rank1HankelFit approx_l2(const ComplexMatrix& x, const GridSpec& spec)
{
    if (x.is_zero())
    {
        throw DegenerateInput("approx_l2: input matrix is identically zero");
    }
    const PolarGrid grid = make_polar_grid(spec);
    const std::size_t n_rows = x.rows();
    const std::size_t n_cols = x.cols();

    const bool pre_flip = std::abs(x(0, 0)) < std::abs(x(n_rows - 1, n_cols - 1));
    const ComplexMatrix work = pre_flip ? flip(x, FlipMode::both) : x;

    const std::vector<Complex> g = antidiagonal_sums(work);
    const std::vector<Complex> g_flipped(g.rbegin(), g.rend()); // sums of J X J

    const detail::L2Scan a = detail::scan_l2(g, n_rows, n_cols, grid);
    const detail::L2Scan b = detail::scan_l2(g_flipped, n_rows, n_cols, grid);
    const bool direct = a.value >= b.value;

    Complex disc_point = direct ? a.z : b.z;
    bool refined = false;
    if (spec.refine)
    {
        const ComplexMatrix target = direct ? work : flip(work, FlipMode::both);
        const Complex polished = refine_polar(
            [&](Complex z) { return objective_l2(target, z); }, disc_point, spec);
        refined = polished != disc_point;
        disc_point = polished;
    }

    Complex z_work = disc_point;
    if (!direct)
    {
        if (disc_point == Complex{})
        {
            throw ReciprocalOfZero("approx_l2: flipped branch won at rho = 0");
        }
        z_work = 1.0 / disc_point;
    }
    const Complex c_work = coefficient_l2(work, z_work);
    if (c_work == Complex{})
    {
        throw DegenerateInput("approx_l2: optimal scale is zero at z = ("
                              + std::to_string(z_work.real()) + ", "
                              + std::to_string(z_work.imag()) + ")");
    }

    ComplexMatrix h = rank1_hankel(c_work, z_work, n_rows, n_cols);
    Complex c_hat = c_work;
    Complex z_hat = z_work;
    if (pre_flip)
    {
        h = flip(h, FlipMode::both);
        std::tie(c_hat, z_hat) = post_flip_generator(c_work, z_work, n_rows, n_cols);
    }
    const double residual = l2_distance(x, h);
    Rank1HankelFit fit{z_hat, c_hat, std::move(h), residual};
    fit.norm_flavor = NormFlavor::l2;
    fit.branch = (direct != pre_flip) ? Branch::direct : Branch::flipped;
    fit.pre_flipped = pre_flip;
    fit.grid_objective = direct ? a.value : b.value;
    fit.refined = refined;
    fit.mode = EvaluationMode::sequential;
    return fit;
}

Rank1HankelFit approx_l2_real(const ComplexMatrix& x, const GridSpec& grid)
{
    GridSpec real_grid = grid;
    real_grid.restrict_real = true;
    return approx_l2(x, real_grid);
}

} // namespace r1h
