// Python bindings. Structured results cross the boundary as JSON text and are
// decoded in irka_lab/__init__.py, so they match the CLI report layout.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "irka_lab/generators.hpp"
#include "irka_lab/io.hpp"
#include "irka_lab/report.hpp"

namespace py = pybind11;
using namespace irka_lab;

namespace {

IrkaConfig make_config(int r, double tol, int max_sweeps, const std::string& init, std::uint64_t seed) {
    IrkaConfig cfg;
    cfg.r = r;
    cfg.tol = tol;
    cfg.max_sweeps = max_sweeps;
    cfg.init = init_strategy_from_string(init);
    cfg.seed = seed;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "IRKA model reduction core";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::object(py::exception<Error>(m, "IrkaLabError", PyExc_RuntimeError)); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            // instance carries the error code as .code
            const py::object& type = error_type.get_stored();
            py::object exc = type(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(type.ptr(), exc.ptr());
        }
    });

    py::class_<StateSpaceSystem>(m, "System")
        .def(py::init<MatrixXd, VectorXd, VectorXd>(), py::arg("A"), py::arg("b"), py::arg("c"))
        .def_property_readonly("A", &StateSpaceSystem::a)
        .def_property_readonly("b", &StateSpaceSystem::b)
        .def_property_readonly("c", &StateSpaceSystem::c)
        .def_property_readonly("n", &StateSpaceSystem::order)
        .def("poles", &StateSpaceSystem::eigenvalues)
        .def("transfer", [](const StateSpaceSystem& s, Complex z, int order) { return eval_transfer(s, z, order); },
             py::arg("s"), py::arg("order") = 0)
        .def("system_class", [](const StateSpaceSystem& s) { return std::string(to_string(classify(s).kind)); })
        .def("to_json", [](const StateSpaceSystem& s) { return io::dump(io::system_to_json(s)); })
        .def("__repr__", [](const StateSpaceSystem& s) {
            return "<irka_lab.System n=" + std::to_string(s.order()) + ">";
        });

    m.def("parse_system", [](const std::string& text) { return io::parse_system(text); }, py::arg("text"));
    m.def("random_sss", &generators::random_sss, py::arg("n"), py::arg("seed") = 0);
    m.def("rc_ladder", &generators::rc_ladder, py::arg("n"), py::arg("resistance") = 1.0,
          py::arg("capacitance") = 1.0);
    m.def("diagonal", &generators::diagonal, py::arg("poles"), py::arg("residues"));

    m.def("h2_norm", &h2_norm, py::arg("sys"));
    m.def("_h2_error", [](const StateSpaceSystem& full, const StateSpaceSystem& red) {
        return io::json(io::to_json(h2_error(full, red))).dump();
    });

    m.def("interpolant",
          [](const StateSpaceSystem& sys, const std::vector<Complex>& shifts) {
              return interpolant(sys, ShiftSet(shifts), is_sss(sys));
          },
          py::arg("sys"), py::arg("shifts"));
    m.def("hermite_residual",
          [](const StateSpaceSystem& full, const StateSpaceSystem& red, const std::vector<Complex>& shifts) {
              return max_residual(check_hermite(full, red, ShiftSet(shifts)));
          },
          py::arg("full"), py::arg("reduced"), py::arg("shifts"));

    m.def("_irka",
          [](const StateSpaceSystem& sys, int r, double tol, int max_sweeps, const std::string& init,
             std::uint64_t seed) {
              const IrkaConfig cfg = make_config(r, tol, max_sweeps, init, seed);
              cfg.validate(sys.order());
              const auto trace = run_irka(sys, cfg, initial_shifts(sys, r, cfg.init, cfg.seed));
              return std::make_pair(*trace.final_model, io::to_json(trace).dump());
          });
    m.def("_certify", [](const StateSpaceSystem& full, const StateSpaceSystem& red) {
        return io::to_json(certify(full, red)).dump();
    });
    m.def("_error_zeros", [](const StateSpaceSystem& full, const StateSpaceSystem& red) {
        return io::to_json(error_zeros(full, red)).dump();
    });
    m.def("_reduce_report",
          [](const std::string& system_text, int r, double tol, int max_sweeps, const std::string& init,
             std::uint64_t seed, bool certify_flag) {
              report::ReduceOptions options;
              options.config = make_config(r, tol, max_sweeps, init, seed);
              options.certify = certify_flag;
              options.timings = false;
              const auto outcome = report::reduce(system_text, options);
              return std::make_pair(outcome.report.dump(), outcome.exit_code);
          });
}
