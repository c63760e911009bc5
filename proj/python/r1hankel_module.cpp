#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <r1h/bench.hpp>
#include <r1h/errors.hpp>
#include <r1h/rank1_l1.hpp>
#include <r1h/rank1_l2.hpp>
#include <r1h/toeplitz.hpp>

namespace py = pybind11;
using namespace r1h;

namespace
{

GridSpec make_grid(NormFlavor flavor, std::optional<double> delta_rho, std::optional<double> delta_phi,
                   bool real_axis, bool refine)
{
    GridSpec g = flavor == NormFlavor::l1 ? GridSpec::default_l1() : GridSpec::default_l2();
    if (delta_rho)
    {
        g.delta_rho = *delta_rho;
    }
    if (delta_phi)
    {
        g.delta_phi = *delta_phi;
    }
    g.restrict_real = real_axis;
    g.refine = refine;
    return g;
}

NormFlavor flavor_of(const std::string& norm)
{
    if (norm == "l2")
    {
        return NormFlavor::l2;
    }
    if (norm == "l1")
    {
        return NormFlavor::l1;
    }
    throw InvalidArgument("norm must be 'l2' or 'l1'");
}

Rank1HankelFit fit(const Eigen::MatrixXcd& x, const std::string& norm, bool toeplitz,
                   std::optional<double> delta_rho, std::optional<double> delta_phi, bool real_axis,
                   bool refine)
{
    const NormFlavor flavor = flavor_of(norm);
    const GridSpec g = make_grid(flavor, delta_rho, delta_phi, real_axis, refine);
    const ComplexMatrix m(x);
    py::gil_scoped_release nogil;
    if (toeplitz)
    {
        return toeplitz_approx(m, flavor, g);
    }
    return flavor == NormFlavor::l1 ? approx_l1(m, g) : approx_l2(m, g);
}

} // namespace

PYBIND11_MODULE(_r1hankel, m)
{
    m.doc() = "Rank-1 Hankel/Toeplitz approximation and DoA estimation";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
    py::register_exception<InvalidConfiguration>(m, "InvalidConfiguration", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Rank1HankelFit>(m, "Fit")
        .def_readonly("z_hat", &Rank1HankelFit::z_hat)
        .def_readonly("c_hat", &Rank1HankelFit::c_hat)
        .def_readonly("residual", &Rank1HankelFit::residual)
        .def_readonly("pre_flipped", &Rank1HankelFit::pre_flipped)
        .def_readonly("grid_objective", &Rank1HankelFit::grid_objective)
        .def_property_readonly("approximation", [](const Rank1HankelFit& f) { return f.approximation.eigen(); })
        .def_property_readonly("branch", [](const Rank1HankelFit& f) { return std::string(to_string(f.branch)); })
        .def_property_readonly("structure",
                               [](const Rank1HankelFit& f) { return std::string(to_string(f.structure)); })
        .def("__repr__", [](const Rank1HankelFit& f) {
            return "<Fit " + std::string(to_string(f.structure)) + " " + std::string(to_string(f.norm_flavor))
                   + " residual=" + std::to_string(f.residual) + ">";
        });

    m.def("approx", &fit, py::arg("x"), py::arg("norm") = "l2", py::arg("toeplitz") = false,
          py::arg("delta_rho") = py::none(), py::arg("delta_phi") = py::none(), py::arg("real_axis") = false,
          py::arg("refine") = false, "Best rank-1 Hankel (or Toeplitz) fit of a complex matrix.");

    m.def("objective_l2", [](const Eigen::MatrixXcd& x, Complex z) { return objective_l2(ComplexMatrix(x), z); });
    m.def("objective_l1", [](const Eigen::MatrixXcd& x, Complex z) { return objective_l1(ComplexMatrix(x), z); });

    m.def("steering_vector", [](double theta, std::size_t elements, double spacing_ratio) {
        return steering_vector(theta, elements, spacing_ratio);
    }, py::arg("theta_deg"), py::arg("elements"), py::arg("spacing_ratio") = 0.5);

    m.def(
        "estimate_doa",
        [](const Eigen::MatrixXcd& x, const std::string& norm, double theta_step, double spacing_ratio) {
            const ComplexMatrix mx(x);
            const ArrayConfig cfg{mx.rows() + mx.cols() - 1, mx.rows(), spacing_ratio};
            const ThetaGrid grid{theta_step};
            py::gil_scoped_release nogil;
            return flavor_of(norm) == NormFlavor::l1
                       ? estimate_doa_l1(mx, cfg, grid, {}, {.two_stage = true}).theta_deg
                       : estimate_doa_l2(mx, cfg, grid).theta_deg;
        },
        py::arg("x"), py::arg("norm") = "l2", py::arg("theta_step") = 0.01, py::arg("spacing_ratio") = 0.5,
        "Angle in degrees from a D x W sliding-window measurement matrix.");

    m.def(
        "simulate_scene",
        [](std::size_t elements, std::size_t window, double theta, double snr_db, std::uint64_t seed,
           const std::string& noise) {
            ExperimentConfig cfg;
            cfg.theta0.kind = ThetaPolicy::Kind::fixed;
            cfg.theta0.value = theta;
            cfg.noiseless = noise == "none";
            if (noise == "impulsive")
            {
                cfg.noise = NoiseModel::impulsive(0.1, 1.0, 200.0);
            }
            return make_trial_scene(cfg, elements, window, snr_db, seed).measurements.eigen();
        },
        py::arg("elements"), py::arg("window"), py::arg("theta_deg"), py::arg("snr_db"), py::arg("seed") = 1,
        py::arg("noise") = "white");

    m.def(
        "run_bench",
        [](const std::string& ini) {
            const ExperimentConfig cfg = ExperimentConfig::parse_ini(ini);
            std::string csv;
            {
                py::gil_scoped_release nogil;
                csv = format_csv(run_experiment(cfg).records);
            }
            return csv;
        },
        py::arg("config_text"), "Run an experiment from INI text and return the CSV.");
}
