#ifndef R1H_RANK1_L1_HPP
#define R1H_RANK1_L1_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <r1h/grid.hpp>
#include <r1h/matrix.hpp>
#include <r1h/rank1.hpp>

namespace r1h
{

struct WeiszfeldConfig
{
    int max_iters = 100;
    /// Stop when |step| <= tol * |c|.
    double tol = 1e-10;
    /// Floor on residual moduli in the reweighting. Unset means
    /// 1e-12 * (1 + max |x_ij|), fixed per input matrix.
    std::optional<double> anchor_epsilon;
    /// Keep the objective value of every iterate in L1InnerSolution::trace.
    bool record_trace = false;

    void validate() const;
    double epsilon_for(const ComplexMatrix& x) const;
};

struct L1InnerSolution
{
    /// Minimizer of sum_ij |x_ij - c_tilde z^{i+j}|.
    Complex c_tilde;
    /// c_tilde / alpha(z): the scale multiplying s_D(z) s_W(z)^T.
    Complex c;
    double objective = 0.0;
    int iters_used = 0;
    bool converged = false;
    /// The final answer is a data point that passed the subgradient test.
    bool anchored = false;
    std::vector<double> trace;
};

/// 1 / (||[1, .., z^{D-1}]|| * ||[1, .., z^{W-1}]||)
double alpha(Complex z, std::size_t rows, std::size_t cols);

///
/// Weighted geometric median coefficient for a fixed generator.
///
/// Minimizes sum_ij |z|^{i+j} |x_ij z^{-(i+j)} - c| in the equivalent
/// form sum_ij |x_ij - c z^{i+j}|, which stays finite for every z
/// including 0. Weiszfeld iteration from the least-squares point, with
/// residual moduli floored at the anchor epsilon, followed by a test of the
/// nearest data point so minimizers sitting on an anchor come out exact.
/// Non-convergence within max_iters is reported, not thrown.
///
L1InnerSolution weighted_median_coeff(const ComplexMatrix& x, Complex z,
                                      const WeiszfeldConfig& cfg = {});

/// ||X - c_L1(z) s_D(z) s_W(z)^T||_1
double objective_l1(const ComplexMatrix& x, Complex z, const WeiszfeldConfig& cfg = {});

///
/// Optimal rank-1 Hankel approximation in the element-wise L1 norm.
///
/// C is the best grid value of objective_l1 on X and D-bar the best value on
/// J_D X J_W (equivalent to substituting 1/z, without the negative powers);
/// rho = 0 is excluded from the flipped search. C <= D-bar keeps the direct
/// argmin, otherwise z_hat is the reciprocal of the flipped one. Grid points
/// are visited in order with each Weiszfeld run warm-started from the
/// previous point's coefficient.
///
Rank1HankelFit approx_l1(const ComplexMatrix& x, const GridSpec& grid = GridSpec::default_l1(),
                         const WeiszfeldConfig& cfg = {});

/// z restricted to [-1, 1]. Real inputs use the exact weighted median of the
/// ratios x_ij / z^{i+j}, so c_hat is real as well.
Rank1HankelFit approx_l1_real(const ComplexMatrix& x,
                              const GridSpec& grid = GridSpec::default_l1(),
                              const WeiszfeldConfig& cfg = {});

namespace detail
{

/// Matrix entries with the anti-diagonal index of each one, the layout the
/// inner solvers iterate over.
struct DiagonalData
{
    std::vector<Complex> values;
    std::vector<std::uint32_t> diag;
    std::size_t n_diag = 0;

    explicit DiagonalData(const ComplexMatrix& x);
};

struct InnerResult
{
    Complex c;
    double objective = 0.0;
    int iters = 0;
    bool converged = false;
    bool anchored = false;
};

/// Minimizes sum_k |values_k - c * powers[diag_k]|. `trace` may be null.
InnerResult weiszfeld(const DiagonalData& data, std::span<const Complex> powers, Complex init,
                      const WeiszfeldConfig& cfg, double epsilon, std::vector<double>* trace);

/// Least-squares start sum x_k conj(a_k) / sum |a_k|^2.
Complex least_squares_coeff(const DiagonalData& data, std::span<const Complex> powers);

/// Exact minimizer over real c for real data and real powers.
InnerResult weighted_median_real(const DiagonalData& data, std::span<const Complex> powers);

double l1_objective(const DiagonalData& data, std::span<const Complex> powers, Complex c);

/// Lower bound on min_c l1_objective from the dual: the residual directions
/// at `c`, projected so that sum u_k conj(a_k) = 0 and scaled to |u_k| <= 1,
/// give Re sum conj(u_k) x_k. Tight when `c` is the minimizer and no
/// residual vanishes.
double l1_dual_bound(const DiagonalData& data, std::span<const Complex> powers, Complex c);

void fill_powers(Complex z, std::vector<Complex>& powers);

} // namespace detail

} // namespace r1h

#endif
