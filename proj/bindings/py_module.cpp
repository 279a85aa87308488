#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kcm/cm_tests.hpp"
#include "kcm/dgp.hpp"
#include "kcm/estimation.hpp"
#include "kcm/harness.hpp"
#include "kcm/io.hpp"

namespace py = pybind11;

namespace {

kcm::RegVariant variant_from_string(const std::string& name) {
    if (name == "hom") return kcm::RegVariant::hom;
    if (name == "het") return kcm::RegVariant::het;
    throw kcm::InputError("unknown regression variant: " + name);
}

}  // namespace

PYBIND11_MODULE(_kcm, m) {
    m.doc() = "Kernel conditional moment specification tests";

    py::register_exception<kcm::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<kcm::DegenerateDataError>(m, "DegenerateDataError", PyExc_RuntimeError);
    py::register_exception<kcm::IllPosedError>(m, "IllPosedError", PyExc_RuntimeError);
    py::register_exception<kcm::RegularizationError>(m, "RegularizationError",
                                                     PyExc_RuntimeError);

    py::class_<kcm::KernelSpec>(m, "KernelSpec")
        .def_readonly("bandwidth", &kcm::KernelSpec::bandwidth)
        .def_readonly("median_bandwidth", &kcm::KernelSpec::median_bandwidth)
        .def_property_readonly("family",
                               [](const kcm::KernelSpec& s) { return to_string(s.family); })
        .def("__repr__", [](const kcm::KernelSpec& s) {
            std::ostringstream out;
            out << "KernelSpec(" << to_string(s.family);
            if (s.median_bandwidth)
                out << ", bandwidth='median'";
            else if (s.family == kcm::KernelFamily::rbf ||
                     s.family == kcm::KernelFamily::laplacian)
                out << ", bandwidth=" << s.bandwidth;
            out << ")";
            return out.str();
        });

    m.def(
        "rbf_kernel",
        [](py::object sigma) {
            if (sigma.is_none()) return kcm::KernelSpec::rbf_median();
            return kcm::KernelSpec::rbf(sigma.cast<double>());
        },
        py::arg("sigma") = py::none(),
        "RBF kernel; sigma=None selects the median-heuristic bandwidth");
    m.def(
        "laplacian_kernel",
        [](py::object sigma) {
            if (sigma.is_none()) return kcm::KernelSpec::laplacian_median();
            return kcm::KernelSpec::laplacian(sigma.cast<double>());
        },
        py::arg("sigma") = py::none());
    m.def("imq_kernel", &kcm::KernelSpec::imq, py::arg("c"), py::arg("gamma"));
    m.def("linear_kernel", &kcm::KernelSpec::linear);
    m.def("polynomial_kernel", &kcm::KernelSpec::polynomial, py::arg("degree"),
          py::arg("offset") = 0.0);

    m.def("eval_kernel", &kcm::eval_kernel, py::arg("spec"), py::arg("x"), py::arg("y"));
    m.def("gram", &kcm::gram, py::arg("spec"), py::arg("X"));
    m.def("median_heuristic", &kcm::median_heuristic, py::arg("X"));

    py::class_<kcm::Dataset>(m, "Dataset")
        .def(py::init([](kcm::Matrix Z, std::vector<int> x_index) {
                 kcm::Dataset data{std::move(Z), std::move(x_index)};
                 data.validate();
                 return data;
             }),
             py::arg("Z"), py::arg("x_index"))
        .def_readonly("Z", &kcm::Dataset::Z)
        .def_readonly("x_index", &kcm::Dataset::x_index)
        .def_property_readonly("n", &kcm::Dataset::n)
        .def_property_readonly("p", &kcm::Dataset::p)
        .def_property_readonly("d", &kcm::Dataset::d)
        .def("x", &kcm::Dataset::x);

    py::class_<kcm::ResidualModel>(m, "ResidualModel")
        .def(py::init([](const std::string& kind, kcm::Vector theta, double tau) {
                 kcm::ResidualModel model;
                 model.kind = kcm::model_kind_from_string(kind);
                 model.theta = std::move(theta);
                 model.tau = tau;
                 return model;
             }),
             py::arg("kind"), py::arg("theta"), py::arg("tau") = 0.5)
        .def_readonly("theta", &kcm::ResidualModel::theta)
        .def_readonly("tau", &kcm::ResidualModel::tau)
        .def_property_readonly("kind",
                               [](const kcm::ResidualModel& model) { return to_string(model.kind); })
        .def_property_readonly("q", &kcm::ResidualModel::q)
        .def_property_readonly("linear_in_theta", &kcm::ResidualModel::linear_in_theta)
        .def("with_theta", &kcm::ResidualModel::with_theta, py::arg("theta"));

    m.def("residuals", &kcm::residuals, py::arg("model"), py::arg("data"));
    m.def(
        "perturb_theta",
        [](const kcm::Vector& theta0, double delta, std::uint64_t seed) {
            kcm::RngStream rng(seed);
            return kcm::perturb_theta(theta0, delta, rng);
        },
        py::arg("theta0"), py::arg("delta"), py::arg("seed"));

    m.def(
        "h_matrix",
        [](const kcm::ResidualModel& model, const kcm::Dataset& data,
           const kcm::KernelSpec& spec) { return kcm::h_matrix(model, data, spec).values; },
        py::arg("model"), py::arg("data"), py::arg("spec"),
        "H_ij = psi_i . psi_j k(x_i, x_j) as a dense array");
    m.def(
        "mmr_u",
        [](const kcm::ResidualModel& model, const kcm::Dataset& data,
           const kcm::KernelSpec& spec) {
            return kcm::mmr_u(kcm::h_matrix(model, data, spec)).value;
        },
        py::arg("model"), py::arg("data"), py::arg("spec"));
    m.def(
        "mmr_v",
        [](const kcm::ResidualModel& model, const kcm::Dataset& data,
           const kcm::KernelSpec& spec) {
            return kcm::mmr_v(kcm::h_matrix(model, data, spec)).value;
        },
        py::arg("model"), py::arg("data"), py::arg("spec"));
    m.def("cmme_eval", &kcm::cmme_eval, py::arg("model"), py::arg("data"), py::arg("spec"),
          py::arg("x_query"));
    m.def("cmmd_v", &kcm::cmmd_v, py::arg("base"), py::arg("theta1"), py::arg("theta2"),
          py::arg("data"), py::arg("spec"));
    m.def(
        "spectral_mmr_estimate",
        [](const kcm::ResidualModel& model, const kcm::Dataset& data, double sigma,
           int n_features, std::uint64_t seed) {
            return kcm::spectral_mmr_estimate(model, data, sigma, n_features,
                                              kcm::RngStream(seed));
        },
        py::arg("model"), py::arg("data"), py::arg("sigma"), py::arg("n_features"),
        py::arg("seed"));
    m.def(
        "mercer_finite_check",
        [](const kcm::ResidualModel& model, const kcm::Dataset& data, int dim_features) {
            return kcm::mercer_finite_check(model, data, dim_features);
        },
        py::arg("model"), py::arg("data"), py::arg("dim_features"));

    py::class_<kcm::TestOutcome>(m, "TestOutcome")
        .def_readonly("statistic", &kcm::TestOutcome::statistic)
        .def_readonly("critical_value", &kcm::TestOutcome::critical_value)
        .def_readonly("p_value", &kcm::TestOutcome::p_value)
        .def_readonly("reject", &kcm::TestOutcome::reject)
        .def_readonly("bootstrap_draws", &kcm::TestOutcome::bootstrap_draws)
        .def_readonly("alpha", &kcm::TestOutcome::alpha)
        .def_readonly("seed", &kcm::TestOutcome::seed)
        .def("__repr__", [](const kcm::TestOutcome& o) {
            std::ostringstream out;
            out << "TestOutcome(statistic=" << o.statistic
                << ", critical_value=" << o.critical_value << ", p_value=" << o.p_value
                << ", reject=" << (o.reject ? "True" : "False") << ")";
            return out.str();
        });

    m.def("kcm_test", &kcm::kcm_test, py::arg("model"), py::arg("data"), py::arg("spec"),
          py::arg("B") = 1000, py::arg("alpha") = 0.05, py::arg("seed") = 0,
          py::arg("threads") = 1);
    m.def("icm_stat", &kcm::icm_stat, py::arg("model"), py::arg("data"));
    m.def("icm_test", &kcm::icm_test, py::arg("model"), py::arg("data"), py::arg("B") = 1000,
          py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("smooth_stat", &kcm::smooth_stat, py::arg("model"), py::arg("data"),
          py::arg("bandwidth"));
    m.def("smooth_test", &kcm::smooth_test, py::arg("model"), py::arg("data"),
          py::arg("B") = 1000, py::arg("alpha") = 0.05, py::arg("seed") = 0,
          py::arg("threads") = 1);

    m.def("mmmr_objective", &kcm::mmmr_objective, py::arg("theta"), py::arg("base"),
          py::arg("data"), py::arg("spec"));
    m.def(
        "mmmr_fit",
        [](const kcm::ResidualModel& base, const kcm::Dataset& data, const kcm::KernelSpec& spec) {
            const kcm::FitResult fit = kcm::mmmr_fit(base, data, spec);
            return py::make_tuple(fit.theta_hat, fit.objective);
        },
        py::arg("base"), py::arg("data"), py::arg("spec"),
        "Closed-form fit for residuals linear in theta; returns (theta_hat, objective)");
    m.def(
        "mmmr_fit_numeric",
        [](const kcm::ResidualModel& base, const kcm::Dataset& data, const kcm::KernelSpec& spec,
           const kcm::Vector& lower, const kcm::Vector& upper) {
            const kcm::FitResult fit = kcm::mmmr_fit_numeric(base, data, spec, lower, upper);
            return py::make_tuple(fit.theta_hat, fit.objective);
        },
        py::arg("base"), py::arg("data"), py::arg("spec"), py::arg("lower"), py::arg("upper"));

    py::class_<kcm::IVSolution>(m, "IVSolution")
        .def_readonly("alpha", &kcm::IVSolution::alpha)
        .def_readonly("jitter_applied", &kcm::IVSolution::jitter_applied)
        .def("predict",
             py::overload_cast<const kcm::Matrix&>(&kcm::IVSolution::predict, py::const_),
             py::arg("query_points"));

    m.def(
        "mmr_iv_solve",
        [](const kcm::Matrix& treatments, const kcm::Vector& outcomes,
           const kcm::Matrix& instruments, double lambda, const kcm::KernelSpec& k_spec,
           const kcm::KernelSpec& l_spec) {
            kcm::IVProblem problem;
            problem.treatments = treatments;
            problem.outcomes = outcomes;
            problem.instruments = instruments;
            problem.lambda = lambda;
            problem.instrument_kernel = k_spec;
            problem.treatment_kernel = l_spec;
            return kcm::mmr_iv_solve(problem);
        },
        py::arg("treatments"), py::arg("outcomes"), py::arg("instruments"), py::arg("lambda_"),
        py::arg("instrument_kernel") = kcm::KernelSpec::rbf_median(),
        py::arg("treatment_kernel") = kcm::KernelSpec::rbf_median());

    m.def(
        "gen_reg",
        [](int n, int d, const std::string& variant, std::uint64_t seed) {
            kcm::RngStream rng(seed);
            return kcm::gen_reg(n, d, variant_from_string(variant), rng);
        },
        py::arg("n"), py::arg("d"), py::arg("variant"), py::arg("seed"));
    m.def(
        "gen_simeq",
        [](int n, std::uint64_t seed) {
            kcm::RngStream rng(seed);
            return kcm::gen_simeq(n, rng);
        },
        py::arg("n"), py::arg("seed"));
    m.def("reg_true_theta", &kcm::reg_true_theta, py::arg("d"));
    m.def(
        "simeq_true_theta",
        [](double l11, double l12, double l21, double l22) {
            const Eigen::Vector4d t = kcm::simeq_true_theta(l11, l12, l21, l22);
            return py::make_tuple(t(0), t(1), t(2), t(3));
        },
        py::arg("l11"), py::arg("l12"), py::arg("l21"), py::arg("l22"));

    py::class_<kcm::ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("n_grid", &kcm::ExperimentConfig::n_grid)
        .def_readwrite("delta_grid", &kcm::ExperimentConfig::delta_grid)
        .def_readwrite("trials", &kcm::ExperimentConfig::trials)
        .def_readwrite("B", &kcm::ExperimentConfig::bootstrap_size)
        .def_readwrite("alpha", &kcm::ExperimentConfig::alpha)
        .def_readwrite("master_seed", &kcm::ExperimentConfig::master_seed)
        .def_readwrite("d", &kcm::ExperimentConfig::d)
        .def_property(
            "dgp",
            [](const kcm::ExperimentConfig& c) { return to_string(c.dgp); },
            [](kcm::ExperimentConfig& c, const std::string& name) {
                c.dgp = kcm::dgp_kind_from_string(name);
            })
        .def_property(
            "tests",
            [](const kcm::ExperimentConfig& c) {
                std::vector<std::string> names;
                for (auto t : c.tests) names.push_back(to_string(t));
                return names;
            },
            [](kcm::ExperimentConfig& c, const std::vector<std::string>& names) {
                c.tests.clear();
                for (const auto& name : names) c.tests.push_back(kcm::test_kind_from_string(name));
            });

    py::class_<kcm::CellResult>(m, "CellResult")
        .def_property_readonly("test",
                               [](const kcm::CellResult& c) { return to_string(c.test); })
        .def_property_readonly("dgp", [](const kcm::CellResult& c) { return to_string(c.dgp); })
        .def_readonly("n", &kcm::CellResult::n)
        .def_readonly("delta", &kcm::CellResult::delta)
        .def_readonly("trials", &kcm::CellResult::trials)
        .def_readonly("rejections", &kcm::CellResult::rejections)
        .def_readonly("rate", &kcm::CellResult::rate)
        .def_readonly("se", &kcm::CellResult::se)
        .def_readonly("seed", &kcm::CellResult::seed)
        .def("__repr__", [](const kcm::CellResult& c) {
            std::ostringstream out;
            out << "CellResult(test=" << to_string(c.test) << ", n=" << c.n
                << ", delta=" << c.delta << ", rate=" << c.rate << ")";
            return out.str();
        });

    m.def("run_power", &kcm::run_power, py::arg("config"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_type1", &kcm::run_type1, py::arg("config"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "results_csv",
        [](const std::vector<kcm::CellResult>& results) {
            std::ostringstream out;
            kcm::write_results_csv(out, results);
            return out.str();
        },
        py::arg("results"));

#ifdef VERSION_INFO
#define KCM_STR_INNER(x) #x
#define KCM_STR(x) KCM_STR_INNER(x)
    m.attr("__version__") = KCM_STR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
