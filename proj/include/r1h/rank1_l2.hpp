#ifndef R1H_RANK1_L2_HPP
#define R1H_RANK1_L2_HPP

#include <r1h/grid.hpp>
#include <r1h/matrix.hpp>
#include <r1h/rank1.hpp>

namespace r1h
{

/// |s_D(z)^H X s_W(z)^*|, O(DW). Valid for any finite z.
double objective_l2(const ComplexMatrix& x, Complex z);

/// Optimal scale for a fixed generator: s_D(z)^H X s_W(z)^*.
Complex coefficient_l2(const ComplexMatrix& x, Complex z);

///
/// Optimal rank-1 Hankel approximation in the Frobenius norm by polar grid
/// search over the unit disc.
///
/// A is the best grid value of |s_D^H X s_W^*| and B the best value on
/// J_D X J_W. A >= B keeps the direct argmax, otherwise z_hat is the
/// reciprocal of the flipped argmax. The scale follows in closed form on
/// the original X. Inputs with |x_11| < |x_DW| are pre-flipped and the
/// result mapped back.
///
/// Throws DegenerateInput for a zero matrix or a zero optimal scale, and
/// ReciprocalOfZero when the winning generator is the point at infinity.
///
Rank1HankelFit approx_l2(const ComplexMatrix& x, const GridSpec& grid = GridSpec::default_l2());

/// Same search restricted to z in [-1, 1] (forces grid.restrict_real).
Rank1HankelFit approx_l2_real(const ComplexMatrix& x,
                              const GridSpec& grid = GridSpec::default_l2());

namespace detail
{

/// Best grid value of |sum_m g_m conj(z)^m| * alpha(z) and its location;
/// `g` are anti-diagonal sums. Ties keep the lowest traversal index.
struct L2Scan
{
    double value = -1.0;
    Complex z{};
};

L2Scan scan_l2(const std::vector<Complex>& g, std::size_t rows, std::size_t cols,
               const PolarGrid& grid);

} // namespace detail

} // namespace r1h

#endif
