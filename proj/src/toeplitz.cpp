#include <r1h/toeplitz.hpp>

#include <r1h/rank1_l2.hpp>

namespace r1h
{

Rank1HankelFit toeplitz_approx(const ComplexMatrix& x, NormFlavor flavor,
                               std::optional<GridSpec> grid, const WeiszfeldConfig& cfg)
{
    const ComplexMatrix flipped = flip(x, FlipMode::rows);
    Rank1HankelFit fit =
        flavor == NormFlavor::l2
            ? approx_l2(flipped, grid.value_or(GridSpec::default_l2()))
            : approx_l1(flipped, grid.value_or(GridSpec::default_l1()), cfg);
    fit.approximation = flip(fit.approximation, FlipMode::rows);
    fit.structure = Structure::toeplitz;
    return fit;
}

} // namespace r1h
