#include <r1h/matrix.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <r1h/errors.hpp>

namespace r1h
{

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd values) : values_(std::move(values))
{
    if (values_.rows() < 1 || values_.cols() < 1)
    {
        throw InvalidArgument("ComplexMatrix: dimensions must be at least 1x1");
    }
    for (Eigen::Index k = 0; k < values_.size(); ++k)
    {
        const Complex v = values_.data()[k];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        {
            throw InvalidArgument("ComplexMatrix: non-finite entry at linear index "
                                  + std::to_string(k));
        }
    }
}

namespace
{

Eigen::MatrixXcd from_nested(std::initializer_list<std::initializer_list<Complex>> rows)
{
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    Eigen::MatrixXcd m(n_rows, n_cols);
    Eigen::Index i = 0;
    for (const auto& row : rows)
    {
        if (static_cast<Eigen::Index>(row.size()) != n_cols)
        {
            throw InvalidArgument("ComplexMatrix: ragged initializer");
        }
        Eigen::Index j = 0;
        for (const auto& v : row)
        {
            m(i, j++) = v;
        }
        ++i;
    }
    return m;
}

} // namespace

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(from_nested(rows))
{
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols)
{
    return ComplexMatrix(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                                static_cast<Eigen::Index>(cols)));
}

bool ComplexMatrix::is_zero() const
{
    return values_.isZero(0.0);
}

bool ComplexMatrix::is_real() const
{
    return values_.imag().isZero(0.0);
}

double ComplexMatrix::max_abs() const
{
    return values_.cwiseAbs().maxCoeff();
}

ComplexMatrix ComplexMatrix::conjugate() const
{
    return ComplexMatrix(values_.conjugate());
}

ComplexMatrix ComplexMatrix::scaled(Complex alpha) const
{
    return ComplexMatrix(Eigen::MatrixXcd(alpha * values_));
}

double l1_norm(const ComplexMatrix& a)
{
    return a.eigen().cwiseAbs().sum();
}

double l2_norm(const ComplexMatrix& a)
{
    return a.eigen().norm();
}

double l1_distance(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return (a.eigen() - b.eigen()).cwiseAbs().sum();
}

double l2_distance(const ComplexMatrix& a, const ComplexMatrix& b)
{
    return (a.eigen() - b.eigen()).norm();
}

ComplexMatrix hankel_from_vector(const HankelParams& p)
{
    if (p.rows == 0 || p.h.size() < p.rows)
    {
        throw InvalidArgument("hankel_from_vector: need M >= D >= 1 (M = "
                              + std::to_string(p.h.size()) + ", D = " + std::to_string(p.rows)
                              + ")");
    }
    const std::size_t n_cols = p.cols();
    Eigen::MatrixXcd m(p.rows, n_cols);
    for (std::size_t j = 0; j < n_cols; ++j)
    {
        for (std::size_t i = 0; i < p.rows; ++i)
        {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.h[i + j];
        }
    }
    return ComplexMatrix(std::move(m));
}

bool hankel_project_check(const ComplexMatrix& x, double tol)
{
    const std::size_t n_rows = x.rows();
    const std::size_t n_cols = x.cols();
    for (std::size_t m = 0; m + 1 < n_rows + n_cols; ++m)
    {
        const std::size_t i_lo = m >= n_cols ? m - n_cols + 1 : 0;
        const std::size_t i_hi = std::min(m, n_rows - 1);
        for (std::size_t a = i_lo; a <= i_hi; ++a)
        {
            for (std::size_t b = a + 1; b <= i_hi; ++b)
            {
                if (std::abs(x(a, m - a) - x(b, m - b)) > tol)
                {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<Complex> antidiagonal_sums(const ComplexMatrix& x)
{
    std::vector<Complex> g(x.rows() + x.cols() - 1, Complex{});
    for (std::size_t j = 0; j < x.cols(); ++j)
    {
        for (std::size_t i = 0; i < x.rows(); ++i)
        {
            g[i + j] += x(i, j);
        }
    }
    return g;
}

double power_vector_norm(double abs_z, std::size_t length)
{
    const auto d = static_cast<double>(length);
    if (std::abs(abs_z - 1.0) < unit_circle_branch_tol)
    {
        return std::sqrt(d);
    }
    if (abs_z == 0.0)
    {
        return 1.0;
    }
    const double log_r = abs_z < 0.5 ? std::log(abs_z) : std::log1p(abs_z - 1.0);
    const double num = -std::expm1(2.0 * d * log_r); // 1 - |z|^{2D}
    const double den = -std::expm1(2.0 * log_r);     // 1 - |z|^2
    return std::sqrt(num / den);
}

StructureVector structure_vector(Complex z, std::size_t length)
{
    if (length == 0)
    {
        throw InvalidArgument("structure_vector: length must be >= 1");
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    {
        throw InvalidArgument("structure_vector: generator must be finite");
    }
    const auto n = static_cast<Eigen::Index>(length);
    ComplexVector v(n);
    const double r = std::abs(z);
    if (r <= 1.0)
    {
        const double inv_norm = 1.0 / power_vector_norm(r, length);
        Complex p{1.0, 0.0};
        for (Eigen::Index k = 0; k < n; ++k)
        {
            v(k) = p * inv_norm;
            p *= z;
        }
    }
    else
    {
        const StructureVector reflected = structure_vector(1.0 / z, length);
        const Complex phase = unit_phase_power(z, length - 1);
        for (Eigen::Index k = 0; k < n; ++k)
        {
            v(k) = phase * reflected.v(n - 1 - k);
        }
        v(0) = Complex{std::abs(v(0)), 0.0};
    }
    return StructureVector{z, std::move(v)};
}

Complex unit_phase_power(Complex z, std::size_t n)
{
    if (z.imag() == 0.0)
    {
        return Complex{(z.real() < 0.0 && n % 2 == 1) ? -1.0 : 1.0, 0.0};
    }
    return std::polar(1.0, static_cast<double>(n) * std::arg(z));
}

ComplexMatrix flip(const ComplexMatrix& x, FlipMode mode)
{
    if (mode == FlipMode::rows)
    {
        return ComplexMatrix(Eigen::MatrixXcd(x.eigen().colwise().reverse()));
    }
    return ComplexMatrix(Eigen::MatrixXcd(x.eigen().reverse()));
}

ComplexMatrix rank1_hankel(Complex c, Complex z, std::size_t rows, std::size_t cols)
{
    const StructureVector sd = structure_vector(z, rows);
    const StructureVector sw = structure_vector(z, cols);
    return ComplexMatrix(Eigen::MatrixXcd(c * sd.v * sw.v.transpose()));
}

ComplexMatrix from_real(std::initializer_list<std::initializer_list<double>> rows)
{
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    Eigen::MatrixXcd m(n_rows, n_cols);
    Eigen::Index i = 0;
    for (const auto& row : rows)
    {
        if (static_cast<Eigen::Index>(row.size()) != n_cols)
        {
            throw InvalidArgument("from_real: ragged initializer");
        }
        Eigen::Index j = 0;
        for (double v : row)
        {
            m(i, j++) = Complex{v, 0.0};
        }
        ++i;
    }
    return ComplexMatrix(std::move(m));
}

} // namespace r1h
