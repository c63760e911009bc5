#ifndef R1H_RANK1_HPP
#define R1H_RANK1_HPP

#include <cstddef>
#include <string_view>

#include <r1h/matrix.hpp>

namespace r1h
{

enum class NormFlavor
{
    l2,
    l1
};

/// Which of the two complementary unit-disc problems produced z_hat, as seen
/// from the caller's matrix. `flipped` means z_hat is the reciprocal of a
/// grid point, so |z_hat| >= 1.
enum class Branch
{
    direct,
    flipped
};

enum class Structure
{
    hankel,
    toeplitz
};

enum class EvaluationMode
{
    sequential,
    sequential_warm_start
};

std::string_view to_string(NormFlavor f);
std::string_view to_string(Branch b);
std::string_view to_string(Structure s);
std::string_view to_string(EvaluationMode m);

///
/// Result of a rank-1 Hankel (or Toeplitz) approximation.
///
/// For the Hankel case `approximation == c_hat * s_D(z_hat) s_W(z_hat)^T`.
/// For the Toeplitz case the same (z_hat, c_hat) describe the Hankel factor
/// H and `approximation == J_D H`.
///
struct Rank1HankelFit
{
    /// Complex infinity when the fit is c e_D e_W^T, the z -> inf limit.
    Complex z_hat;
    Complex c_hat;
    ComplexMatrix approximation;
    double residual = 0.0;
    NormFlavor norm_flavor = NormFlavor::l2;
    Branch branch = Branch::direct;
    Structure structure = Structure::hankel;

    /// The input was replaced by J_D X J_W because |x_11| < |x_DW|.
    bool pre_flipped = false;
    /// Winning grid value (A or B for L2, C or D-bar for L1).
    double grid_objective = 0.0;
    bool refined = false;
    EvaluationMode mode = EvaluationMode::sequential;
    /// L1 only: grid points whose Weiszfeld loop hit the iteration cap.
    std::size_t inner_nonconverged = 0;
};

/// (c, z) describing J_D H J_W when H = c s_D(z) s_W(z)^T, z != 0:
/// the generator becomes 1/z and c picks up the phase u^{D+W-2}, u = z/|z|.
/// Throws ReciprocalOfZero for z == 0.
std::pair<Complex, Complex> reflect_rank1(Complex c, Complex z, std::size_t rows,
                                          std::size_t cols);

/// reflect_rank1, except that z == 0 gives (c, inf): J_D e_1 = e_D is the
/// limit of s_D(w) as w -> inf.
std::pair<Complex, Complex> post_flip_generator(Complex c, Complex z, std::size_t rows,
                                                std::size_t cols);

} // namespace r1h

#endif
