#ifndef R1H_TESTS_SUPPORT_HPP
#define R1H_TESTS_SUPPORT_HPP

// Test-only helpers and brute-force oracles. Nothing here calls into the
// library's search code; oracles rebuild every quantity from the
// definitions with plain loops.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <r1h/matrix.hpp>

namespace r1h::test
{

using cd = std::complex<double>;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                   bool real = false)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            const double re = n(gen);
            const double im = real ? 0.0 : n(gen);
            m(i, j) = cd(re, im);
        }
    }
    return ComplexMatrix(m);
}

/// [1, z, .., z^{n-1}] / norm with the norm from an explicit power sum.
inline std::vector<cd> naive_structure(cd z, std::size_t n)
{
    std::vector<cd> v(n);
    cd p = 1.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        v[i] = p;
        ss += std::norm(p);
        p *= z;
    }
    const double nrm = std::sqrt(ss);
    for (auto& e : v)
    {
        e /= nrm;
    }
    return v;
}

/// c s_D(z) s_W(z)^T built entry by entry.
inline ComplexMatrix naive_rank1(cd c, cd z, std::size_t rows, std::size_t cols)
{
    const auto sd = naive_structure(z, rows);
    const auto sw = naive_structure(z, cols);
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
    {
        for (std::size_t j = 0; j < cols; ++j)
        {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c * sd[i] * sw[j];
        }
    }
    return ComplexMatrix(m);
}

/// s_D(z)^H X s_W(z)^* as a double sum.
inline cd naive_bilinear(const ComplexMatrix& x, cd z)
{
    const auto sd = naive_structure(z, x.rows());
    const auto sw = naive_structure(z, x.cols());
    cd acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
    {
        for (std::size_t j = 0; j < x.cols(); ++j)
        {
            acc += std::conj(sd[i]) * x(i, j) * std::conj(sw[j]);
        }
    }
    return acc;
}

inline ComplexMatrix naive_flip_both(const ComplexMatrix& x)
{
    Eigen::MatrixXcd m(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
    {
        for (std::size_t j = 0; j < x.cols(); ++j)
        {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                x(x.rows() - 1 - i, x.cols() - 1 - j);
        }
    }
    return ComplexMatrix(m);
}

inline ComplexMatrix naive_flip_rows(const ComplexMatrix& x)
{
    Eigen::MatrixXcd m(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
    {
        for (std::size_t j = 0; j < x.cols(); ++j)
        {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x(x.rows() - 1 - i, j);
        }
    }
    return ComplexMatrix(m);
}

/// Best |s_D^H X s_W^*| over the polar grid rho = k dr, phi = k dp, for X
/// and for J X J (the complementary problem), by direct double sums.
struct L2Oracle
{
    double best = -1.0;
    cd z;
};

inline L2Oracle dense_l2_oracle(const ComplexMatrix& x, double dr, double dp)
{
    const ComplexMatrix xf = naive_flip_both(x);
    L2Oracle out;
    const auto nr = static_cast<int>(std::ceil(1.0 / dr - 1e-9));
    const auto np = static_cast<int>(std::ceil(2.0 * std::numbers::pi / dp - 1e-9));
    for (int a = 0; a <= nr; ++a)
    {
        const double rho = std::min(1.0, a * dr);
        for (int b = 0; b < (rho == 0.0 ? 1 : np); ++b)
        {
            const cd z = std::polar(rho, b * dp);
            const double direct = std::abs(naive_bilinear(x, z));
            if (direct > out.best)
            {
                out.best = direct;
                out.z = z;
            }
            if (rho > 0.0)
            {
                const double flipped = std::abs(naive_bilinear(xf, z));
                if (flipped > out.best)
                {
                    out.best = flipped;
                    out.z = 1.0 / z;
                }
            }
        }
    }
    return out;
}

/// sum_k |x_k - c z^{i+j}|
inline double l1_inner(const ComplexMatrix& x, cd z, cd c)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
    {
        for (std::size_t j = 0; j < x.cols(); ++j)
        {
            acc += std::abs(x(i, j) - c * std::pow(z, static_cast<int>(i + j)));
        }
    }
    return acc;
}

///
/// Minimum of the convex function c -> l1_inner(x, z, c) by a multiscale
/// scan: a square of half-width `radius` around `centre` on an n x n
/// lattice, then repeated zooms around the best cell.
///
inline std::pair<double, cd> l1_scan_oracle(const ComplexMatrix& x, cd z, cd centre, double radius,
                                            int n = 2000, int zooms = 6)
{
    std::vector<cd> xs;
    std::vector<cd> as;
    for (std::size_t i = 0; i < x.rows(); ++i)
    {
        for (std::size_t j = 0; j < x.cols(); ++j)
        {
            xs.push_back(x(i, j));
            as.push_back(std::pow(z, static_cast<int>(i + j)));
        }
    }
    auto f = [&](cd c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k)
        {
            acc += std::abs(xs[k] - c * as[k]);
        }
        return acc;
    };
    double best = f(centre);
    cd best_c = centre;
    for (int level = 0; level <= zooms; ++level)
    {
        const double h = 2.0 * radius / n;
        const cd base = best_c;
        for (int a = 0; a <= n; ++a)
        {
            for (int b = 0; b <= n; ++b)
            {
                const cd c = base + cd(-radius + a * h, -radius + b * h);
                const double v = f(c);
                if (v < best)
                {
                    best = v;
                    best_c = c;
                }
            }
        }
        radius = 4.0 * h;
        n = 200;
    }
    return {best, best_c};
}

/// zhat within k polar grid cells of z0, measured on the disc side: both
/// points are inverted when either lies outside the unit circle.
inline bool within_cells(cd zhat, cd z0, double dr, double dp, double k)
{
    if (std::abs(zhat) > 1.0 || std::abs(z0) > 1.0)
    {
        zhat = 1.0 / zhat;
        z0 = 1.0 / z0;
    }
    const double radial = std::abs(std::abs(zhat) - std::abs(z0));
    const double angular = std::abs(std::remainder(std::arg(zhat) - std::arg(z0), 2 * std::numbers::pi));
    const bool near_origin = std::min(std::abs(zhat), std::abs(z0)) <= k * dr;
    return radial <= k * dr + 1e-12 && (near_origin || angular <= k * dp + 1e-12);
}

inline double max_entry_gap(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

} // namespace r1h::test

#endif
