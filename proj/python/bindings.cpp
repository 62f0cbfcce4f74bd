#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "critmatch/engine.hpp"
#include "critmatch/gen.hpp"
#include "critmatch/model.hpp"
#include "critmatch/oracle.hpp"
#include "critmatch/report.hpp"
#include "critmatch/verify.hpp"

namespace py = pybind11;
using namespace critmatch;

namespace {

py::object to_python(const nlohmann::json& j) {
    switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
        py::list out;
        for (const auto& item : j) out.append(to_python(item));
        return out;
    }
    case nlohmann::json::value_t::object: {
        py::dict out;
        for (const auto& [key, value] : j.items()) out[py::str(key)] = to_python(value);
        return out;
    }
    default: return py::none();
    }
}

Instance make_instance(std::size_t n_a, std::size_t n_b,
                       const std::vector<std::tuple<std::size_t, std::size_t, Rank, Rank>>& edges,
                       const std::vector<std::size_t>& critical_a, const std::vector<std::size_t>& critical_b) {
    Instance inst(n_a, n_b);
    for (auto [a, b, ra, rb] : edges) inst.edges.push_back({a, b, ra, rb});
    for (auto a : critical_a) {
        if (a >= n_a) throw py::index_error("critical A-vertex out of range");
        inst.critical_a[a] = true;
    }
    for (auto b : critical_b) {
        if (b >= n_b) throw py::index_error("critical B-vertex out of range");
        inst.critical_b[b] = true;
    }
    if (auto check = validate(inst); !check.ok()) throw py::value_error(check.violations.front());
    return inst;
}

std::vector<std::size_t> flagged(const std::vector<bool>& flags) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) out.push_back(i);
    return out;
}

}  // namespace

PYBIND11_MODULE(_critmatch, m) {
    m.doc() = "Critical relaxed stable matchings under two-sided ties";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
    py::register_exception<verify::MatchingError>(m, "MatchingError", PyExc_ValueError);
    py::register_exception<oracle::SizeGuardError>(m, "SizeGuardError", PyExc_ValueError);

    py::class_<Instance>(m, "Instance")
        .def(py::init(&make_instance), py::arg("n_a"), py::arg("n_b"), py::arg("edges"),
             py::arg("critical_a") = std::vector<std::size_t>{}, py::arg("critical_b") = std::vector<std::size_t>{})
        .def_readonly("n_a", &Instance::n_a)
        .def_readonly("n_b", &Instance::n_b)
        .def_property_readonly("edges",
                               [](const Instance& inst) {
                                   std::vector<std::tuple<std::size_t, std::size_t, Rank, Rank>> out;
                                   for (const auto& e : inst.edges) out.emplace_back(e.a, e.b, e.rank_a, e.rank_b);
                                   return out;
                               })
        .def_property_readonly("critical_a", [](const Instance& inst) { return flagged(inst.critical_a); })
        .def_property_readonly("critical_b", [](const Instance& inst) { return flagged(inst.critical_b); })
        .def_property_readonly("s", &Instance::s)
        .def_property_readonly("t", &Instance::t)
        .def("to_text", &serialize_instance)
        .def("to_json", [](const Instance& inst) { return instance_to_json(inst).dump(); })
        .def("__eq__", [](const Instance& x, const Instance& y) { return x == y; })
        .def("__repr__", [](const Instance& inst) {
            return "<Instance " + std::to_string(inst.n_a) + "x" + std::to_string(inst.n_b) + ", " +
                   std::to_string(inst.edges.size()) + " edges, s=" + std::to_string(inst.s()) +
                   ", t=" + std::to_string(inst.t()) + ">";
        });

    m.def("parse_instance", [](const std::string& text) { return parse_instance(text); }, py::arg("text"),
          "Parse the text or JSON instance format.");
    m.def("load_instance", [](const std::string& path) { return parse_instance(read_file(path)); }, py::arg("path"));

    m.def(
        "solve",
        [](const Instance& inst) {
            py::gil_scoped_release release;
            auto result = solve(inst);
            py::gil_scoped_acquire acquire;
            return to_python(to_json(result));
        },
        py::arg("instance"), "Run the solver; returns {'size', 'matching', 'stats'}.");

    m.def(
        "verify",
        [](const Instance& inst, const Matching& matching) {
            return to_python(verify::to_json(verify::make_report(inst, matching)));
        },
        py::arg("instance"), py::arg("matching"), "Audit a list of (a, b) pairs.");

    m.def(
        "blocking_pairs",
        [](const Instance& inst, const Matching& matching) {
            py::list out;
            for (const auto& bp : verify::blocking_pairs(inst, matching)) out.append(to_python(verify::to_json(bp)));
            return out;
        },
        py::arg("instance"), py::arg("matching"));

    m.def("max_critical_coverage", &verify::max_critical_coverage, py::arg("instance"));

    m.def(
        "oracle",
        [](const Instance& inst, std::size_t guard) {
            return to_python(oracle::to_json(oracle::max_critical_rsm(inst, guard)));
        },
        py::arg("instance"), py::arg("guard") = oracle::kDefaultGuard,
        "Exhaustive maximum critical relaxed stable matching (small instances only).");

    m.def(
        "more_popular",
        [](const Instance& inst, const Matching& first, const Matching& second) {
            switch (oracle::more_popular(inst, first, second)) {
            case oracle::Preference::First: return "first";
            case oracle::Preference::Second: return "second";
            case oracle::Preference::Tie: break;
            }
            return "tie";
        },
        py::arg("instance"), py::arg("first"), py::arg("second"));

    m.def(
        "random_instance",
        [](std::size_t n_a, std::size_t n_b, double edge_probability, double tie_density, double critical_fraction_a,
           double critical_fraction_b, std::uint64_t seed) {
            gen::GenParams p{n_a, n_b, edge_probability, tie_density, critical_fraction_a, critical_fraction_b, seed};
            return gen::random_instance(p);
        },
        py::arg("n_a") = 5, py::arg("n_b") = 5, py::arg("edge_probability") = 0.5, py::arg("tie_density") = 0.0,
        py::arg("critical_fraction_a") = 0.0, py::arg("critical_fraction_b") = 0.0, py::arg("seed") = 0);
}
