// r1h: rank-1 Hankel/Toeplitz fits, single-scene DoA and the Monte Carlo bench.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <r1h/bench.hpp>
#include <r1h/errors.hpp>
#include <r1h/rank1_l1.hpp>
#include <r1h/rank1_l2.hpp>
#include <r1h/toeplitz.hpp>

int run_selftest(std::ostream& out);

namespace
{

using namespace r1h;

// "D W" then D*W "re im" pairs, row-major
ComplexMatrix read_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot open " + path.string());
    }
    std::size_t d = 0, w = 0;
    if (!(in >> d >> w) || d == 0 || w == 0)
    {
        throw InvalidArgument(path.string() + ": bad header, expected \"D W\"");
    }
    Eigen::MatrixXcd m(d, w);
    for (std::size_t i = 0; i < d; ++i)
    {
        for (std::size_t j = 0; j < w; ++j)
        {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im))
            {
                throw InvalidArgument(path.string() + ": expected " + std::to_string(d * w)
                                      + " complex entries");
            }
            m(i, j) = Complex(re, im);
        }
    }
    return ComplexMatrix(std::move(m));
}

void write_matrix(const ComplexMatrix& x, std::ostream& out)
{
    out << x.rows() << ' ' << x.cols() << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < x.rows(); ++i)
    {
        for (std::size_t j = 0; j < x.cols(); ++j)
        {
            out << (j ? "  " : "") << x(i, j).real() << ' ' << x(i, j).imag();
        }
        out << '\n';
    }
}

std::string show(Complex z)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gj", z.real(), z.imag());
    return buf;
}

struct ApproxArgs
{
    std::string input;
    std::string norm = "l2";
    bool toeplitz = false;
    bool real_axis = false;
    bool refine = false;
    std::string out;
};

int cmd_approx(const ApproxArgs& a)
{
    const ComplexMatrix x = read_matrix(a.input);
    const NormFlavor flavor = a.norm == "l1" ? NormFlavor::l1 : NormFlavor::l2;
    GridSpec grid = flavor == NormFlavor::l1 ? GridSpec::default_l1() : GridSpec::default_l2();
    grid.restrict_real = a.real_axis;
    grid.refine = a.refine;

    const Rank1HankelFit fit = a.toeplitz                   ? toeplitz_approx(x, flavor, grid)
                               : flavor == NormFlavor::l1 ? approx_l1(x, grid)
                                                          : approx_l2(x, grid);

    std::cout << "structure  " << to_string(fit.structure) << '\n'
              << "norm       " << to_string(fit.norm_flavor) << '\n'
              << "z_hat      " << show(fit.z_hat) << '\n'
              << "c_hat      " << show(fit.c_hat) << '\n'
              << "branch     " << to_string(fit.branch) << (fit.pre_flipped ? " (pre-flipped)" : "") << '\n';
    std::printf("residual   %.12g\n", fit.residual);
    if (fit.inner_nonconverged)
    {
        std::cout << "warning    " << fit.inner_nonconverged << " grid points hit the iteration cap\n";
    }
    if (!a.out.empty())
    {
        std::filesystem::create_directories(a.out);
        const auto path = std::filesystem::path(a.out) / "approximation.txt";
        std::ofstream f(path);
        if (!f)
        {
            throw IoError("cannot write " + path.string());
        }
        write_matrix(fit.approximation, f);
    }
    else
    {
        write_matrix(fit.approximation, std::cout);
    }
    return 0;
}

struct DoaArgs
{
    std::string input;
    std::size_t elements = 16;
    std::size_t window = 0;
    double theta = 20.0;
    double snr = 10.0;
    std::string noise = "white";
    double p = 0.1;
    std::vector<std::string> methods{"r1h_l2", "r1h_l1"};
    std::uint64_t seed = 1;
    double theta_step = 0.01;
    bool refine = false;
};

int cmd_doa(const DoaArgs& a)
{
    ExperimentConfig cfg;
    cfg.theta_step = a.theta_step;
    cfg.refine = a.refine;
    cfg.theta0.kind = ThetaPolicy::Kind::fixed;
    cfg.theta0.value = a.theta;
    cfg.noise = a.noise == "impulsive" ? NoiseModel::impulsive(a.p, 1.0, 200.0) : NoiseModel::white(1.0);
    cfg.noiseless = a.noise == "none";
    cfg.noise.validate();

    const DoaScene scene = [&] {
        if (a.input.empty())
        {
            return make_trial_scene(cfg, a.elements, a.window ? a.window : a.elements / 2, a.snr, a.seed);
        }
        ComplexMatrix x = read_matrix(a.input);
        const ArrayConfig arr{x.rows() + x.cols() - 1, x.rows(), cfg.spacing_ratio};
        return DoaScene{arr, std::numeric_limits<double>::quiet_NaN(), Complex{}, std::move(x), 0};
    }();
    scene.config.validate();

    for (const std::string& name : a.methods)
    {
        const Method m = parse_method(name);
        try
        {
            const double th = run_method(m, scene, cfg);
            if (std::isnan(scene.theta0))
            {
                std::printf("%-18s theta_hat %.6f\n", name.c_str(), th);
            }
            else
            {
                std::printf("%-18s theta_hat %.6f  abs_err %.6f\n", name.c_str(), th, std::abs(th - scene.theta0));
            }
        }
        catch (const std::exception& e)
        {
            std::printf("%-18s failed: %s\n", name.c_str(), e.what());
        }
    }
    return 0;
}

struct BenchArgs
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> threads;
    std::optional<double> theta_step;
    std::optional<bool> refine;
};

int cmd_bench(const BenchArgs& a)
{
    ExperimentConfig cfg;
    try
    {
        cfg = ExperimentConfig::load(a.config);
        if (a.seed)
        {
            cfg.master_seed = *a.seed;
        }
        if (a.threads)
        {
            cfg.threads = *a.threads;
        }
        if (a.theta_step)
        {
            cfg.theta_step = *a.theta_step;
        }
        if (a.refine)
        {
            cfg.refine = *a.refine;
        }
        cfg.validate();
    }
    catch (const InvalidConfiguration& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    catch (const IoError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    std::filesystem::path csv = cfg.csv_path;
    std::filesystem::path plot = cfg.plot_path;
    if (!a.out.empty())
    {
        std::filesystem::create_directories(a.out);
        csv = std::filesystem::path(a.out) / csv.filename();
        if (!plot.empty())
        {
            plot = std::filesystem::path(a.out) / plot.filename();
        }
    }

    const ExperimentResult res = run_experiment(cfg);
    emit_csv(res.records, csv);
    if (!plot.empty())
    {
        emit_plot(res.summary, plot, cfg.plot_format);
    }

    std::printf("%-18s %5s %5s %8s %6s %6s %14s\n", "method", "M", "D", "snr_db", "ok", "failed", "mean_abs_err");
    for (const CellSummary& c : res.summary)
    {
        std::printf("%-18s %5zu %5zu %8.2f %6zu %6zu %14.6g\n", std::string(to_string(c.method)).c_str(),
                    c.elements, c.window, c.snr_db, c.ok, c.failed, c.mean_abs_error);
    }
    std::cout << "wrote " << csv.string() << '\n';

    if (res.failed_fraction() > cfg.failure_threshold)
    {
        std::fprintf(stderr, "%zu failed trials (fraction %.4f, threshold %.4f)\n", res.failures(),
                     res.failed_fraction(), cfg.failure_threshold);
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rank-1 Hankel approximation and DoA benchmark"};
    app.require_subcommand(1);

    ApproxArgs ap;
    auto* approx = app.add_subcommand("approx", "Fit a rank-1 Hankel (or Toeplitz) matrix to a matrix file");
    approx->add_option("--input", ap.input, "Matrix file: \"D W\" then row-major \"re im\" pairs")->required();
    approx->add_option("--norm", ap.norm)->check(CLI::IsMember({"l2", "l1"}));
    approx->add_flag("--toeplitz", ap.toeplitz);
    approx->add_flag("--real", ap.real_axis, "Restrict z to [-1, 1]");
    approx->add_option("--refine", ap.refine);
    approx->add_option("--out", ap.out, "Write approximation.txt here instead of stdout");

    DoaArgs dp;
    auto* doa = app.add_subcommand("doa", "Estimate the angle of one simulated or loaded scene");
    doa->add_option("--input", dp.input, "Measurement matrix file (skips simulation)");
    doa->add_option("--elements", dp.elements);
    doa->add_option("--window", dp.window, "D, default M/2");
    doa->add_option("--theta", dp.theta);
    doa->add_option("--snr", dp.snr);
    doa->add_option("--noise", dp.noise)->check(CLI::IsMember({"white", "impulsive", "none"}));
    doa->add_option("--p", dp.p, "Impulse probability");
    doa->add_option("--method", dp.methods);
    doa->add_option("--seed", dp.seed);
    doa->add_option("--theta-step", dp.theta_step);
    doa->add_option("--refine", dp.refine);

    BenchArgs bp;
    auto* bench = app.add_subcommand("bench", "Run a Monte Carlo experiment from a config file");
    bench->add_option("--config", bp.config)->required();
    bench->add_option("--seed", bp.seed);
    bench->add_option("--out", bp.out);
    bench->add_option("--threads", bp.threads);
    bench->add_option("--theta-step", bp.theta_step);
    bench->add_option("--refine", bp.refine);

    auto* selftest = app.add_subcommand("selftest", "Check the solvers against brute-force oracles");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        if (*approx)
        {
            return cmd_approx(ap);
        }
        if (*doa)
        {
            return cmd_doa(dp);
        }
        if (*bench)
        {
            return cmd_bench(bp);
        }
        if (*selftest)
        {
            return run_selftest(std::cout);
        }
    }
    catch (const InvalidConfiguration& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
