#include <r1h/baselines.hpp>

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include <r1h/errors.hpp>

namespace r1h
{

namespace
{

using Index = Eigen::Index;

/// Grid argmax of |sum_m coeffs[m] conj(z)^m|, z = z_of_theta(theta).
/// For MUSIC with one signal vector e, 1 / ||E_n^H a||^2 = 1 / (|a|^2 - |e^H a|^2)
/// is increasing in |e^H a| = |sum_m e_m conj(z)^m|, so both spectra reduce
/// to this scan.
BaselineEstimate scan_poly(const ComplexVector& coeffs, const ArrayConfig& config,
                           const ThetaGrid& grid)
{
    const std::size_t n = grid.size();
    const auto len = coeffs.size();
    BaselineEstimate best;
    double best_value = -1.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const Complex w = std::conj(z_of_theta(grid.angle(k), config.spacing_ratio));
        Complex p = coeffs(len - 1);
        for (Index m = len - 1; m-- > 0;)
        {
            p = p * w + coeffs(m);
        }
        const double v = std::norm(p);
        if (v > best_value)
        {
            best_value = v;
            best.grid_index = k;
        }
    }
    best.theta_deg = grid.angle(best.grid_index);
    return best;
}

struct Dominant
{
    double value = 0.0;
    ComplexVector vector;
};

Dominant dominant_eigen(const Eigen::MatrixXcd& r)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
    if (eig.info() != Eigen::Success)
    {
        throw DegenerateInput("eigendecomposition did not converge");
    }
    const Index last = r.rows() - 1;
    return {eig.eigenvalues()(last), eig.eigenvectors().col(last)};
}

void check_config(const ComplexMatrix& x, const ArrayConfig& config, const char* who)
{
    config.validate();
    if (x.rows() != config.window || x.cols() != config.acquisitions())
    {
        throw InvalidArgument(std::string(who) + ": matrix shape does not match the array");
    }
}

} // namespace

BaselineEstimate max_energy(const ComplexVector& r_tilde, const ArrayConfig& config,
                            const ThetaGrid& grid)
{
    config.validate();
    if (static_cast<std::size_t>(r_tilde.size()) != config.elements)
    {
        throw InvalidArgument("max_energy: expected " + std::to_string(config.elements)
                              + " sensor values");
    }
    return scan_poly(r_tilde, config, grid);
}

Eigen::MatrixXcd toeplitz_covariance(const ComplexVector& r_tilde)
{
    const Index m = r_tilde.size();
    if (m < 1)
    {
        throw InvalidArgument("toeplitz_covariance: empty input");
    }
    ComplexVector lag(m);
    for (Index k = 0; k < m; ++k)
    {
        Complex acc{};
        for (Index i = 0; i + k < m; ++i)
        {
            acc += r_tilde(i + k) * std::conj(r_tilde(i));
        }
        lag(k) = acc / static_cast<double>(m - k);
    }
    Eigen::MatrixXcd r(m, m);
    for (Index i = 0; i < m; ++i)
    {
        for (Index j = 0; j < m; ++j)
        {
            r(i, j) = i >= j ? lag(i - j) : std::conj(lag(j - i));
        }
    }
    return r;
}

BaselineEstimate toeplitz_music(const ComplexVector& r_tilde, const ArrayConfig& config,
                                const ThetaGrid& grid)
{
    config.validate();
    if (config.elements < 2 || static_cast<std::size_t>(r_tilde.size()) != config.elements)
    {
        throw InvalidArgument("toeplitz_music: need M >= 2 sensor values matching the array");
    }
    const Dominant top = dominant_eigen(toeplitz_covariance(r_tilde));
    if (!(top.value > 0.0))
    {
        BaselineEstimate e = max_energy(r_tilde, config, grid);
        e.fallback = true;
        return e;
    }
    return scan_poly(top.vector, config, grid);
}

std::size_t default_pencil_param(std::size_t window)
{
    return window / 2;
}

BaselineEstimate matrix_pencil(const ComplexMatrix& x, const ArrayConfig& config,
                               std::optional<std::size_t> pencil_param)
{
    check_config(x, config, "matrix_pencil");
    const std::size_t d = x.rows();
    if (d < 2)
    {
        throw InvalidArgument("matrix_pencil: needs D >= 2");
    }
    const std::size_t l = pencil_param.value_or(default_pencil_param(d));
    if (l < 1 || l > d - 1)
    {
        throw InvalidArgument("matrix_pencil: pencil parameter must lie in [1, D - 1]");
    }

    // Y Y^H accumulated window by window; its top eigenvector is the
    // dominant left singular vector of Y
    const Index rows = static_cast<Index>(l + 1);
    const Index per_col = static_cast<Index>(d - l);
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(rows, rows);
    const Eigen::MatrixXcd& xe = x.eigen();
    for (Index j = 0; j < xe.cols(); ++j)
    {
        for (Index s = 0; s < per_col; ++s)
        {
            const auto piece = xe.col(j).segment(s, rows);
            gram.noalias() += piece * piece.adjoint();
        }
    }
    const ComplexVector u = dominant_eigen(gram).vector;
    const auto u1 = u.head(rows - 1);
    const auto u2 = u.tail(rows - 1);
    const double den = u1.squaredNorm();

    BaselineEstimate e;
    e.z_hat = den > 0.0 ? u1.dot(u2) / den : Complex{};
    if (e.z_hat == Complex{})
    {
        e.unreliable = true;
        e.theta_deg = 0.0;
        return e;
    }
    e.unreliable = std::abs(std::log(std::abs(e.z_hat))) > 1.0;
    e.theta_deg = theta_of_z(e.z_hat, config.spacing_ratio);
    return e;
}

BaselineEstimate hankel_music(const ComplexMatrix& x, const ArrayConfig& config,
                              const ThetaGrid& grid)
{
    check_config(x, config, "hankel_music");
    if (x.rows() < 2)
    {
        throw InvalidArgument("hankel_music: needs D >= 2");
    }
    const Eigen::MatrixXcd& xe = x.eigen();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(xe, Eigen::ComputeThinU);
    // s_D has unit norm on the circle and U is unitary, so
    // ||U_n^H s_D||^2 = 1 - |u_1^H s_D|^2
    return scan_poly(svd.matrixU().col(0), config, grid);
}

std::size_t default_smoothing_len(std::size_t window)
{
    return std::min(window, std::max<std::size_t>(window - 1, 2));
}

Eigen::MatrixXcd fbss_covariance(const ComplexMatrix& x, std::size_t smoothing_len)
{
    const std::size_t d = x.rows();
    if (smoothing_len < 2 || smoothing_len > d)
    {
        throw InvalidArgument("fbss: smoothing length " + std::to_string(smoothing_len)
                              + " outside [2, D = " + std::to_string(d) + "]");
    }
    const Index len = static_cast<Index>(smoothing_len);
    const Index per_col = static_cast<Index>(d - smoothing_len + 1);
    const Eigen::MatrixXcd& xe = x.eigen();
    Eigen::MatrixXcd forward = Eigen::MatrixXcd::Zero(len, len);
    for (Index j = 0; j < xe.cols(); ++j)
    {
        for (Index s = 0; s < per_col; ++s)
        {
            const auto piece = xe.col(j).segment(s, len);
            forward.noalias() += piece * piece.adjoint();
        }
    }
    forward /= static_cast<double>(per_col * xe.cols());
    const Eigen::MatrixXcd backward = forward.conjugate().reverse();
    return (forward + backward) / 2.0;
}

BaselineEstimate fbss_music(const ComplexMatrix& x, const ArrayConfig& config,
                            const ThetaGrid& grid, std::optional<std::size_t> smoothing_len)
{
    check_config(x, config, "fbss_music");
    const std::size_t len = smoothing_len.value_or(default_smoothing_len(x.rows()));
    const Dominant top = dominant_eigen(fbss_covariance(x, len));
    return scan_poly(top.vector, config, grid);
}

} // namespace r1h
