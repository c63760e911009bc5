#ifndef R1H_MATRIX_HPP
#define R1H_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace r1h
{

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

///
/// Dense D x W complex matrix with finite entries.
///
/// Storage is column-major (Eigen's default), so the raw entry sequence is
/// vec(X): column 0 top to bottom, then column 1, and so on. Every module,
/// including the vectorized maximum-likelihood path, relies on this order.
/// Values are immutable once constructed.
///
class ComplexMatrix
{
public:
    /// Throws InvalidArgument on an empty matrix or a non-finite entry.
    explicit ComplexMatrix(Eigen::MatrixXcd values);

    /// Row-major nested initializer, convenient for small literals.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    /// 0-based access.
    const Complex& operator()(std::size_t i, std::size_t j) const
    {
        return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    const Eigen::MatrixXcd& eigen() const noexcept { return values_; }

    bool is_zero() const;
    bool is_real() const;

    double max_abs() const;

    ComplexMatrix conjugate() const;
    ComplexMatrix scaled(Complex alpha) const;

    friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b)
    {
        return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols()
               && a.values_ == b.values_;
    }

private:
    Eigen::MatrixXcd values_;
};

/// Element-wise L1 norm: sum of complex moduli.
double l1_norm(const ComplexMatrix& a);
/// Element-wise L2 (Frobenius) norm.
double l2_norm(const ComplexMatrix& a);

double l1_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double l2_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Generating vector of a D x (M - D + 1) Hankel matrix.
struct HankelParams
{
    std::vector<Complex> h;
    std::size_t rows = 1;

    std::size_t cols() const { return h.size() + 1 - rows; }
};

/// result(i, j) = h[i + j] (0-based). Throws InvalidArgument if M < D or D == 0.
ComplexMatrix hankel_from_vector(const HankelParams& p);

/// True iff every anti-diagonal has maximum pairwise entry distance <= tol.
bool hankel_project_check(const ComplexMatrix& x, double tol);

/// Anti-diagonal sums g[m] = sum_{i + j = m} x(i, j), m = 0 .. D + W - 2.
std::vector<Complex> antidiagonal_sums(const ComplexMatrix& x);

///
/// Normalized polynomial structure vector s_D(z) = [1, z, ..., z^{D-1}] / norm.
///
struct StructureVector
{
    Complex z;
    ComplexVector v;

    std::size_t size() const { return static_cast<std::size_t>(v.size()); }
};

/// Euclidean norm of [1, z, ..., z^{D-1}] via the closed form
/// sqrt((1 - |z|^{2D}) / (1 - |z|^2)), or sqrt(D) when ||z| - 1| < 1e-9.
/// Evaluated with log1p/expm1 so the relative error stays at machine
/// precision near the unit circle. Overflows for large |z|^D; callers with
/// |z| > 1 go through `structure_vector`, which reflects onto the disc.
double power_vector_norm(double abs_z, std::size_t length);

/// Threshold on ||z| - 1| below which the unit-circle branch is used.
inline constexpr double unit_circle_branch_tol = 1e-9;

/// Requires finite z and D >= 1. For |z| > 1 the vector is built from the
/// reflected point 1/z (s_D(z) = u^{D-1} J s_D(1/z), u = z/|z|) so large
/// generators never overflow. The first entry is real and positive.
StructureVector structure_vector(Complex z, std::size_t length);

enum class FlipMode
{
    rows, ///< J_D X
    both  ///< J_D X J_W
};

ComplexMatrix flip(const ComplexMatrix& x, FlipMode mode);

/// (z / |z|)^n, exactly +-1 when z is real. Requires z != 0.
Complex unit_phase_power(Complex z, std::size_t n);

/// c * s_D(z) s_W(z)^T
ComplexMatrix rank1_hankel(Complex c, Complex z, std::size_t rows, std::size_t cols);

/// Complex matrix from real-valued nested rows; handy in tests and tools.
ComplexMatrix from_real(std::initializer_list<std::initializer_list<double>> rows);

} // namespace r1h

#endif
