#ifndef R1H_TOEPLITZ_HPP
#define R1H_TOEPLITZ_HPP

#include <optional>

#include <r1h/grid.hpp>
#include <r1h/rank1.hpp>
#include <r1h/rank1_l1.hpp>

namespace r1h
{

///
/// Rank-1 Toeplitz approximation through the exchange-matrix reduction: fit
/// a rank-1 Hankel H* to J_D X under the requested norm and return
/// T = J_D H*. Because J_D is a permutation, ||X - T|| equals the Hankel
/// residual, which is what `residual` reports. z_hat and c_hat describe H*.
///
/// `grid` defaults to the flavor's default grid; `cfg` is used for L1 only.
///
Rank1HankelFit toeplitz_approx(const ComplexMatrix& x, NormFlavor flavor,
                               std::optional<GridSpec> grid = std::nullopt,
                               const WeiszfeldConfig& cfg = {});

} // namespace r1h

#endif
