#include <r1h/rank1_l1.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <r1h/errors.hpp>

namespace r1h
{

void WeiszfeldConfig::validate() const
{
    if (max_iters < 1)
    {
        throw InvalidArgument("WeiszfeldConfig: max_iters must be >= 1");
    }
    if (!(tol > 0.0))
    {
        throw InvalidArgument("WeiszfeldConfig: tol must be > 0");
    }
    if (anchor_epsilon && !(*anchor_epsilon > 0.0))
    {
        throw InvalidArgument("WeiszfeldConfig: anchor_epsilon must be > 0");
    }
}

double WeiszfeldConfig::epsilon_for(const ComplexMatrix& x) const
{
    return anchor_epsilon.value_or(1e-12 * (1.0 + x.max_abs()));
}

double alpha(Complex z, std::size_t rows, std::size_t cols)
{
    const double r = std::abs(z);
    return 1.0 / (power_vector_norm(r, rows) * power_vector_norm(r, cols));
}

namespace detail
{

DiagonalData::DiagonalData(const ComplexMatrix& x) : n_diag(x.rows() + x.cols() - 1)
{
    values.reserve(x.rows() * x.cols());
    diag.reserve(x.rows() * x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
    {
        for (std::size_t i = 0; i < x.rows(); ++i)
        {
            values.push_back(x(i, j));
            diag.push_back(static_cast<std::uint32_t>(i + j));
        }
    }
}

void fill_powers(Complex z, std::vector<Complex>& powers)
{
    Complex p{1.0, 0.0};
    for (auto& v : powers)
    {
        v = p;
        p *= z;
    }
}

double l1_objective(const DiagonalData& data, std::span<const Complex> powers, Complex c)
{
    double total = 0.0;
    for (std::size_t k = 0; k < data.values.size(); ++k)
    {
        const Complex a = powers[data.diag[k]];
        const double dr = data.values[k].real() - (c.real() * a.real() - c.imag() * a.imag());
        const double di = data.values[k].imag() - (c.real() * a.imag() + c.imag() * a.real());
        total += std::sqrt(dr * dr + di * di);
    }
    return total;
}

double l1_dual_bound(const DiagonalData& data, std::span<const Complex> powers, Complex c)
{
    // Single pass. With lambda = sum u conj(a) / sum |a|^2 the projected
    // directions u - lambda a have modulus at most 1 + |lambda| max|a|, and
    // their pairing with x splits into sum conj(u) x - conj(lambda) sum conj(a) x.
    double s_re = 0.0, s_im = 0.0, aa = 0.0, a_max = 0.0;
    double ux = 0.0, ax_re = 0.0, ax_im = 0.0;
    for (std::size_t k = 0; k < data.values.size(); ++k)
    {
        const Complex a = powers[data.diag[k]];
        const Complex x = data.values[k];
        const double dr = x.real() - (c.real() * a.real() - c.imag() * a.imag());
        const double di = x.imag() - (c.real() * a.imag() + c.imag() * a.real());
        const double r = std::sqrt(dr * dr + di * di);
        const double na = a.real() * a.real() + a.imag() * a.imag();
        aa += na;
        a_max = std::max(a_max, na);
        ax_re += a.real() * x.real() + a.imag() * x.imag();
        ax_im += a.real() * x.imag() - a.imag() * x.real();
        if (r > 0.0)
        {
            const double ur = dr / r, ui = di / r;
            s_re += ur * a.real() + ui * a.imag();
            s_im += ui * a.real() - ur * a.imag();
            ux += ur * x.real() + ui * x.imag();
        }
    }
    if (aa == 0.0)
    {
        return 0.0;
    }
    const double l_re = s_re / aa, l_im = s_im / aa;
    const double value = ux - (l_re * ax_re + l_im * ax_im);
    return value / (1.0 + std::sqrt((l_re * l_re + l_im * l_im) * a_max));
}

Complex least_squares_coeff(const DiagonalData& data, std::span<const Complex> powers)
{
    Complex num{};
    double den = 0.0;
    for (std::size_t k = 0; k < data.values.size(); ++k)
    {
        const Complex a = powers[data.diag[k]];
        num += data.values[k] * std::conj(a);
        den += std::norm(a);
    }
    return num / den;
}

namespace
{

/// Tries the data point nearest to `c` (in coefficient space). Returns true
/// and overwrites `result` when it does at least as well as `result`.
bool try_nearest_anchor(const DiagonalData& data, std::span<const Complex> powers, double epsilon,
                        InnerResult& result)
{
    const std::size_t n = data.values.size();
    std::size_t nearest = n;
    double nearest_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
    {
        const Complex a = powers[data.diag[k]];
        const double norm_a = std::norm(a);
        if (norm_a == 0.0)
        {
            continue;
        }
        // squared distance in coefficient space
        const double dist = std::norm(data.values[k] - result.c * a) / norm_a;
        if (dist < nearest_dist)
        {
            nearest_dist = dist;
            nearest = k;
        }
    }
    if (nearest == n)
    {
        return false;
    }
    const Complex anchor = data.values[nearest] / powers[data.diag[nearest]];
    const double anchor_objective = l1_objective(data, powers, anchor);
    if (anchor_objective > result.objective)
    {
        return false;
    }

    // Subgradient test at the anchor: the pull of the other points must not
    // exceed the total weight of the points sitting on it.
    Complex pull{};
    double pinned = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const Complex a = powers[data.diag[k]];
        const Complex d = anchor * a - data.values[k];
        const double r = std::sqrt(std::norm(d));
        if (r <= epsilon)
        {
            pinned += std::sqrt(std::norm(a));
        }
        else
        {
            pull += std::conj(a) * d / r;
        }
    }
    result.c = anchor;
    result.objective = anchor_objective;
    result.anchored = true;
    if (std::abs(pull) <= pinned)
    {
        result.converged = true;
    }
    return true;
}

} // namespace

InnerResult weiszfeld(const DiagonalData& data, std::span<const Complex> powers, Complex init,
                      const WeiszfeldConfig& cfg, double epsilon, std::vector<double>* trace)
{
    const std::size_t n = data.values.size();
    // one reweighting step; the objective at c comes out of the same pass
    auto update = [&](Complex c, double& f_at_c) {
        double num_re = 0.0;
        double num_im = 0.0;
        double den = 0.0;
        double f = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            const Complex a = powers[data.diag[k]];
            const Complex x = data.values[k];
            const double dr = x.real() - (c.real() * a.real() - c.imag() * a.imag());
            const double di = x.imag() - (c.real() * a.imag() + c.imag() * a.real());
            const double dist = std::sqrt(dr * dr + di * di);
            f += dist;
            const double inv_r = 1.0 / std::max(dist, epsilon);
            // x * conj(a) / r
            num_re += (x.real() * a.real() + x.imag() * a.imag()) * inv_r;
            num_im += (x.imag() * a.real() - x.real() * a.imag()) * inv_r;
            den += (a.real() * a.real() + a.imag() * a.imag()) * inv_r;
        }
        f_at_c = f;
        return Complex{num_re / den, num_im / den};
    };
    auto small_step = [&](Complex from, Complex to) {
        return std::abs(to - from) <= cfg.tol * std::abs(to);
    };
    auto record = [&](Complex c) {
        if (trace)
        {
            trace->push_back(l1_objective(data, powers, c));
        }
    };

    InnerResult result;
    Complex c = init;
    record(c);
    // Two plain steps, then a squared extrapolation along them (SQUAREM,
    // scheme 3) followed by one more plain step. The extrapolated point is
    // kept only if it is no worse than the first step; otherwise the second
    // plain step stands. Either way the accepted sequence descends.
    int it = 0;
    while (it < cfg.max_iters)
    {
        double f0 = 0.0;
        const Complex c1 = update(c, f0);
        ++it;
        record(c1);
        if (small_step(c, c1) || it == cfg.max_iters)
        {
            result.converged = small_step(c, c1);
            c = c1;
            break;
        }
        double f1 = 0.0;
        const Complex c2 = update(c1, f1);
        ++it;
        if (small_step(c1, c2) || it == cfg.max_iters)
        {
            result.converged = small_step(c1, c2);
            c = c2;
            record(c);
            break;
        }
        const Complex r = c1 - c;
        const Complex v = (c2 - c1) - r;
        const double alpha = std::abs(v) > 0.0 ? std::min(-std::abs(r) / std::abs(v), -1.0) : -1.0;
        if (alpha == -1.0)
        {
            c = c2;
            record(c);
            continue;
        }
        const Complex cx = c - 2.0 * alpha * r + alpha * alpha * v;
        double fx = 0.0;
        const Complex c3 = update(cx, fx);
        ++it;
        c = (std::isfinite(fx) && fx <= f1) ? c3 : c2;
        record(c);
    }
    result.iters = it;
    result.c = c;
    result.objective = l1_objective(data, powers, c);
    try_nearest_anchor(data, powers, epsilon, result);
    if (trace && result.anchored)
    {
        trace->push_back(result.objective);
    }
    return result;
}

InnerResult weighted_median_real(const DiagonalData& data, std::span<const Complex> powers)
{
    struct Point
    {
        double ratio;
        double weight;
    };
    std::vector<Point> points;
    points.reserve(data.values.size());
    double total = 0.0;
    for (std::size_t k = 0; k < data.values.size(); ++k)
    {
        const double a = powers[data.diag[k]].real();
        if (a == 0.0)
        {
            continue;
        }
        points.push_back({data.values[k].real() / a, std::abs(a)});
        total += std::abs(a);
    }
    std::sort(points.begin(), points.end(),
              [](const Point& l, const Point& r) { return l.ratio < r.ratio; });
    double cumulative = 0.0;
    double median = points.empty() ? 0.0 : points.back().ratio;
    for (const Point& p : points)
    {
        cumulative += p.weight;
        if (cumulative >= 0.5 * total)
        {
            median = p.ratio;
            break;
        }
    }
    InnerResult result;
    result.c = Complex{median, 0.0};
    result.objective = l1_objective(data, powers, result.c);
    result.converged = true;
    result.anchored = true;
    return result;
}

} // namespace detail

L1InnerSolution weighted_median_coeff(const ComplexMatrix& x, Complex z,
                                      const WeiszfeldConfig& cfg)
{
    cfg.validate();
    const detail::DiagonalData data(x);
    std::vector<Complex> powers(data.n_diag);
    detail::fill_powers(z, powers);

    L1InnerSolution out;
    const Complex init = detail::least_squares_coeff(data, powers);
    const detail::InnerResult r = detail::weiszfeld(data, powers, init, cfg, cfg.epsilon_for(x),
                                                    cfg.record_trace ? &out.trace : nullptr);
    out.c_tilde = r.c;
    out.c = r.c / alpha(z, x.rows(), x.cols());
    out.objective = r.objective;
    out.iters_used = r.iters;
    out.converged = r.converged;
    out.anchored = r.anchored;
    return out;
}

double objective_l1(const ComplexMatrix& x, Complex z, const WeiszfeldConfig& cfg)
{
    return weighted_median_coeff(x, z, cfg).objective;
}

namespace
{

struct L1Scan
{
    double value = std::numeric_limits<double>::infinity();
    Complex z{};
    Complex c_tilde{};
    std::size_t nonconverged = 0;
};

L1Scan scan_l1(const detail::DiagonalData& data, const PolarGrid& grid,
               const WeiszfeldConfig& cfg, double epsilon, bool exclude_origin, bool real_inner)
{
    L1Scan best;
    std::vector<Complex> powers(data.n_diag);
    bool have_warm = false;
    Complex warm{};
    for (std::size_t ri = 0; ri < grid.radii.size(); ++ri)
    {
        const std::size_t n_angles = grid.angles_at(ri);
        for (std::size_t ai = 0; ai < n_angles; ++ai)
        {
            const Complex z = grid.point(ri, ai);
            if (exclude_origin && z == Complex{})
            {
                continue;
            }
            detail::fill_powers(z, powers);
            detail::InnerResult r;
            if (real_inner)
            {
                r = detail::weighted_median_real(data, powers);
            }
            else
            {
                // a point whose dual bound already exceeds the incumbent
                // cannot win; skipping it leaves the argmin unchanged
                if (have_warm && detail::l1_dual_bound(data, powers, warm) > best.value * (1.0 + 1e-12))
                {
                    continue;
                }
                const Complex init =
                    have_warm ? warm : detail::least_squares_coeff(data, powers);
                r = detail::weiszfeld(data, powers, init, cfg, epsilon, nullptr);
            }
            warm = r.c;
            have_warm = true;
            if (!r.converged)
            {
                ++best.nonconverged;
            }
            if (r.objective < best.value)
            {
                best.value = r.objective;
                best.z = z;
                best.c_tilde = r.c;
            }
        }
    }
    return best;
}

detail::InnerResult solve_at(const detail::DiagonalData& data, Complex z,
                             const WeiszfeldConfig& cfg, double epsilon, bool real_inner)
{
    std::vector<Complex> powers(data.n_diag);
    detail::fill_powers(z, powers);
    if (real_inner)
    {
        return detail::weighted_median_real(data, powers);
    }
    return detail::weiszfeld(data, powers, detail::least_squares_coeff(data, powers), cfg,
                             epsilon, nullptr);
}

Rank1HankelFit approx_l1_impl(const ComplexMatrix& x, const GridSpec& spec,
                              const WeiszfeldConfig& cfg, bool real_inner)
{
    cfg.validate();
    if (x.is_zero())
    {
        throw DegenerateInput("approx_l1: input matrix is identically zero");
    }
    const PolarGrid grid = make_polar_grid(spec);
    const std::size_t n_rows = x.rows();
    const std::size_t n_cols = x.cols();
    const double epsilon = cfg.epsilon_for(x);

    const bool pre_flip = std::abs(x(0, 0)) < std::abs(x(n_rows - 1, n_cols - 1));
    const ComplexMatrix work = pre_flip ? flip(x, FlipMode::both) : x;
    const detail::DiagonalData direct_data(work);
    const detail::DiagonalData flipped_data(flip(work, FlipMode::both));

    const L1Scan c_scan = scan_l1(direct_data, grid, cfg, epsilon, false, real_inner);
    const L1Scan d_scan = scan_l1(flipped_data, grid, cfg, epsilon, true, real_inner);
    const bool direct = c_scan.value <= d_scan.value;
    const L1Scan& winner = direct ? c_scan : d_scan;

    Complex disc_point = winner.z;
    Complex c_tilde = winner.c_tilde;
    bool refined = false;
    if (spec.refine)
    {
        const detail::DiagonalData& target = direct ? direct_data : flipped_data;
        auto score = [&](Complex z) {
            if (!direct && z == Complex{})
            {
                return -std::numeric_limits<double>::infinity();
            }
            return -solve_at(target, z, cfg, epsilon, real_inner).objective;
        };
        const Complex polished = refine_polar(score, disc_point, spec);
        if (polished != disc_point)
        {
            refined = true;
            disc_point = polished;
            c_tilde = solve_at(target, polished, cfg, epsilon, real_inner).c;
        }
    }

    Complex c_work = c_tilde / alpha(disc_point, n_rows, n_cols);
    Complex z_work = disc_point;
    if (!direct)
    {
        std::tie(c_work, z_work) = reflect_rank1(c_work, z_work, n_rows, n_cols);
    }
    if (c_work == Complex{})
    {
        throw DegenerateInput("approx_l1: optimal scale is zero at z = ("
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
    const double residual = l1_distance(x, h);
    Rank1HankelFit fit{z_hat, c_hat, std::move(h), residual};
    fit.norm_flavor = NormFlavor::l1;
    fit.branch = (direct != pre_flip) ? Branch::direct : Branch::flipped;
    fit.pre_flipped = pre_flip;
    fit.grid_objective = winner.value;
    fit.refined = refined;
    fit.mode = real_inner ? EvaluationMode::sequential : EvaluationMode::sequential_warm_start;
    fit.inner_nonconverged = c_scan.nonconverged + d_scan.nonconverged;
    return fit;
}

} // namespace

Rank1HankelFit approx_l1(const ComplexMatrix& x, const GridSpec& grid, const WeiszfeldConfig& cfg)
{
    return approx_l1_impl(x, grid, cfg, false);
}

Rank1HankelFit approx_l1_real(const ComplexMatrix& x, const GridSpec& grid,
                              const WeiszfeldConfig& cfg)
{
    GridSpec real_grid = grid;
    real_grid.restrict_real = true;
    return approx_l1_impl(x, real_grid, cfg, x.is_real());
}

} // namespace r1h
