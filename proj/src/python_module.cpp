#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdnet/bell_functionals.hpp"
#include "mdnet/cli.hpp"
#include "mdnet/cone_engine.hpp"
#include "mdnet/error.hpp"
#include "mdnet/json_io.hpp"
#include "mdnet/md_bounds.hpp"
#include "mdnet/oracles.hpp"
#include "mdnet/quantum_sim.hpp"

namespace py = pybind11;
using namespace mdnet;

namespace {

// Objects cross the boundary as JSON text in the library's own schemas.
Behavior behavior_arg(const std::string& text) { return behavior_from_json(parse_json(text)); }
Distribution distribution_arg(const std::string& text) { return distribution_from_json(parse_json(text)); }

} // namespace

PYBIND11_MODULE(_mdnet, m)
{
    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<NameError>(m, "NameError", base.ptr());
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<DegenerateEventError>(m, "DegenerateEventError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<EliminationAborted>(m, "EliminationAborted", base.ptr());

    m.def("evaluate", [](const std::string& functional, const std::string& behavior) {
        return evaluate(parse_functional(functional), behavior_arg(behavior));
    });
    m.def("bilocality", [](const std::string& behavior) {
        const auto v = bilocality(behavior_arg(behavior));
        return py::make_tuple(v.I, v.J, v.value);
    });
    m.def("no_signaling_violation",
          [](const std::string& behavior) { return is_no_signaling(behavior_arg(behavior)).worst_violation; });

    m.def("chsh_mi_lower", &chsh_mi_lower);
    m.def("chsh_l1_lower", &chsh_l1_lower);
    m.def("cglmp_l1_lower", &cglmp_l1_lower);
    m.def("pinsker_mi_to_l1", &pinsker_mi_to_l1);
    m.def("mermin_mi_lower", [](double value, const std::string& mode) {
        return mermin_mi_lower(value, parse_mermin_mode(mode));
    });
    m.def(
        "theta",
        [](const std::string& dist, const std::string& x, const std::string& y, const std::vector<std::string>& r) {
            const auto t = theta(distribution_arg(dist), x, y, r);
            return py::make_tuple(t.value, t.argmin, t.expressions[0], t.expressions[1], t.expressions[2]);
        },
        py::arg("dist"), py::arg("x") = "X", py::arg("y") = "Y", py::arg("r") = std::vector<std::string>{"R"});

    m.def("fritz_distribution", [](double v) { return dump(to_json(fritz_distribution(v))); });
    m.def("fritz_conditional", [](double v) { return dump(to_json(fritz_conditional(v))); });
    m.def("fritz_theta_paper_formula", &fritz_theta_paper_formula);
    m.def("fritz_theta_distribution", &fritz_theta_distribution);
    m.def("critical_visibility", [](const std::string& source, const std::string& bound) {
        return critical_visibility(parse_theta_source(source), parse_bound_kind(bound));
    });
    m.def("ghz_mermin_behavior", [] { return dump(to_json(ghz_mermin_behavior())); });
    m.def("bilocality_quantum_behavior", [] { return dump(to_json(bilocality_quantum_behavior())); });

    m.def("max_over_deterministic", [](const std::string& functional) {
        const auto r = max_over_deterministic(parse_functional(functional));
        return py::make_tuple(r.value, r.strategies);
    });
    m.def("verify_lemma1", [] {
        std::vector<py::tuple> rows;
        for (const auto& c : verify_lemma1_bounds().checks)
            rows.push_back(py::make_tuple(c.label, to_fraction_string(c.optimum), c.pass));
        return rows;
    });
    m.def("figure7_csv", [](int resolution) { return figure7_csv(figure7_curves(resolution)); });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
