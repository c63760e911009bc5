// Quick brute-force cross-checks, for a sanity pass on a fresh build.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>

#include <r1h/bench.hpp>
#include <r1h/rank1_l1.hpp>
#include <r1h/rank1_l2.hpp>
#include <r1h/toeplitz.hpp>

namespace
{

using namespace r1h;
constexpr double pi = std::numbers::pi;

ComplexMatrix random_matrix(std::size_t d, std::size_t w, Rng& rng)
{
    Eigen::MatrixXcd m(d, w);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            m(i, j) = rng.complex_normal(1.0);
        }
    }
    return ComplexMatrix(std::move(m));
}

// c [1 z z^2 ..] [1 z ..]^T with the normalizations spelled out
ComplexMatrix hankel(Complex c, Complex z, std::size_t d, std::size_t w)
{
    double nd = 0.0, nw = 0.0;
    for (std::size_t k = 0; k < d; ++k)
    {
        nd += std::pow(std::abs(z), 2.0 * k);
    }
    for (std::size_t k = 0; k < w; ++k)
    {
        nw += std::pow(std::abs(z), 2.0 * k);
    }
    Eigen::MatrixXcd m(d, w);
    for (std::size_t i = 0; i < d; ++i)
    {
        for (std::size_t j = 0; j < w; ++j)
        {
            m(i, j) = c * std::pow(z, static_cast<double>(i + j)) / std::sqrt(nd * nw);
        }
    }
    return ComplexMatrix(std::move(m));
}

double brute_l2(const ComplexMatrix& x, Complex z)
{
    const ComplexMatrix s = hankel(1.0, z, x.rows(), x.cols());
    Complex acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
    {
        for (std::size_t j = 0; j < x.cols(); ++j)
        {
            acc += std::conj(s(i, j)) * x(i, j);
        }
    }
    return std::abs(acc);
}

// nested polar scan around c0 for min_c ||X - c S||_1
double brute_l1(const ComplexMatrix& x, Complex z)
{
    const ComplexMatrix s = hankel(1.0, z, x.rows(), x.cols());
    auto f = [&](Complex c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i)
        {
            for (std::size_t j = 0; j < x.cols(); ++j)
            {
                acc += std::abs(x(i, j) - c * s(i, j));
            }
        }
        return acc;
    };
    Complex centre = 0.0;
    double half = 2.0 * x.eigen().cwiseAbs().maxCoeff() / s.eigen().cwiseAbs().maxCoeff();
    double best = f(centre);
    for (int level = 0; level < 8; ++level)
    {
        const Complex c0 = centre;
        for (int a = -40; a <= 40; ++a)
        {
            for (int b = -40; b <= 40; ++b)
            {
                const Complex c = c0 + Complex(a, b) * (half / 40.0);
                const double v = f(c);
                if (v < best)
                {
                    best = v;
                    centre = c;
                }
            }
        }
        half /= 10.0;
    }
    return best;
}

} // namespace

int run_selftest(std::ostream& out)
{
    Rng rng(2718);
    int failed = 0;
    auto line = [&](bool ok, const std::string& what, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " (%.3g)", value);
        out << (ok ? "ok    " : "FAIL  ") << what << buf << '\n';
        failed += ok ? 0 : 1;
    };

    double worst = 0.0;
    for (int k = 0; k < 200; ++k)
    {
        const ComplexMatrix x = random_matrix(2 + k % 5, 2 + k % 3, rng);
        const Complex z = std::polar(1.5 * rng.uniform(), 2 * pi * rng.uniform());
        worst = std::max(worst, std::abs(objective_l2(x, z) - brute_l2(x, z)) / (1.0 + brute_l2(x, z)));
    }
    line(worst < 1e-12, "L2 objective matches the explicit bilinear form", worst);

    worst = 0.0;
    for (int k = 0; k < 20; ++k)
    {
        const ComplexMatrix x = random_matrix(3, 3, rng);
        const Complex z = std::polar(rng.uniform(), 2 * pi * rng.uniform());
        worst = std::max(worst, std::abs(objective_l1(x, z) - brute_l1(x, z)));
    }
    line(worst < 1e-6, "L1 inner solve matches a nested scan", worst);

    GridSpec coarse;
    coarse.delta_rho = 1.0 / 128;
    coarse.delta_phi = 2 * pi / 512;
    worst = 0.0;
    for (int k = 0; k < 10; ++k)
    {
        const Complex z = std::polar(0.2 + 0.8 * rng.uniform(), 2 * pi * rng.uniform());
        const ComplexMatrix x = hankel(rng.complex_normal(1.0), z, 4, 5);
        worst = std::max({worst, approx_l2(x, coarse).residual / x.eigen().norm(),
                          approx_l1(x, coarse).residual / x.eigen().cwiseAbs().sum()});
    }
    line(worst < 1e-2, "rank-1 Hankel inputs are recovered", worst);

    worst = 0.0;
    for (int k = 0; k < 5; ++k)
    {
        const ComplexMatrix x = random_matrix(4, 3, rng);
        Eigen::MatrixXcd jx = x.eigen().colwise().reverse();
        const double h = approx_l2(ComplexMatrix(jx), coarse).residual;
        worst = std::max(worst, std::abs(toeplitz_approx(x, NormFlavor::l2, coarse).residual - h) / h);
    }
    line(worst < 1e-12, "Toeplitz residual equals the row-flipped Hankel residual", worst);

    ExperimentConfig cfg;
    cfg.array_sizes = {8};
    cfg.snr_db = {0.0, 20.0};
    cfg.trials = 5;
    cfg.theta_step = 0.1;
    cfg.noise = NoiseModel::impulsive(0.1, 1.0, 200.0);
    cfg.methods = {Method::r1h_l2, Method::r1h_l1, Method::matched_filter_ml};
    const std::string a = format_csv(run_experiment(cfg).records);
    cfg.threads = 4;
    const std::string b = format_csv(run_experiment(cfg).records);
    line(a == b, "bench CSV independent of thread count", static_cast<double>(a.size()));

    out << (failed ? "selftest FAILED\n" : "selftest passed\n");
    return failed ? 1 : 0;
}
