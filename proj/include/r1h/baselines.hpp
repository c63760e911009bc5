#ifndef R1H_BASELINES_HPP
#define R1H_BASELINES_HPP

#include <cstddef>
#include <optional>

#include <r1h/doa.hpp>

namespace r1h
{

struct BaselineEstimate
{
    double theta_deg = 0.0;
    /// Grid index of the winner; 0 for the gridless matrix pencil.
    std::size_t grid_index = 0;
    /// toeplitz_music: covariance had no positive eigenvalue, max_energy used.
    bool fallback = false;
    /// matrix_pencil: |log |z_hat|| > 1, or z_hat = 0.
    bool unreliable = false;
    /// matrix_pencil: the recovered generator.
    Complex z_hat;
};

/// Grid argmax of |a_M(theta)^H r|.
BaselineEstimate max_energy(const ComplexVector& r_tilde, const ArrayConfig& config,
                            const ThetaGrid& grid = {});

/// Lag-k covariance estimate (mean of r[m + k] conj(r[m]) over every available
/// pair), Hermitian Toeplitz fill, one-dimensional signal subspace, grid
/// argmax of the MUSIC pseudo-spectrum over the length-M steering vector.
BaselineEstimate toeplitz_music(const ComplexVector& r_tilde, const ArrayConfig& config,
                                const ThetaGrid& grid = {});

/// Default pencil parameter: floor(D / 2).
std::size_t default_pencil_param(std::size_t window);

///
/// Matrix pencil on the columns of X. Each column is cut into every window of
/// length L + 1 and the windows form the data matrix Y, (L + 1) rows. With u
/// the dominant left singular vector of Y, z_hat = u1^H u2 / u1^H u1 where u1
/// and u2 drop the last and first entry of u. L = D - 1 uses X itself, so the
/// pair is X without its last row and X without its first row.
/// Requires 1 <= L <= D - 1.
///
BaselineEstimate matrix_pencil(const ComplexMatrix& x, const ArrayConfig& config,
                               std::optional<std::size_t> pencil_param = std::nullopt);

/// MUSIC with the noise subspace spanned by left singular vectors 2..D of X
/// and the length-D structure vector. Requires D >= 2.
BaselineEstimate hankel_music(const ComplexMatrix& x, const ArrayConfig& config,
                              const ThetaGrid& grid = {});

/// Default smoothing length: D - 1, at least 2.
std::size_t default_smoothing_len(std::size_t window);

/// Forward-backward smoothed covariance of order L from every length-L
/// contiguous piece of every column: (R_f + J conj(R_f) J) / 2.
Eigen::MatrixXcd fbss_covariance(const ComplexMatrix& x, std::size_t smoothing_len);

/// MUSIC on fbss_covariance with the length-L steering vector. Throws
/// InvalidArgument when L < 2 or L > D.
BaselineEstimate fbss_music(const ComplexMatrix& x, const ArrayConfig& config,
                            const ThetaGrid& grid = {},
                            std::optional<std::size_t> smoothing_len = std::nullopt);

/// Hermitian Toeplitz covariance estimate used by toeplitz_music.
Eigen::MatrixXcd toeplitz_covariance(const ComplexVector& r_tilde);

} // namespace r1h

#endif
