#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "manymatch/io.hpp"
#include "manymatch/penalty1d.hpp"
#include "manymatch/render.hpp"
#include "manymatch/solver.hpp"

namespace py = pybind11;
using namespace manymatch;

namespace {

Instance parse_instance(const std::string& text) { return instance_from_json(parse_json_text(text, "instance")); }

std::string solve_json(const std::string& instance, const std::string& mode, int precision,
                       std::optional<long> theta_exp, std::optional<double> epsilon) {
    RunConfig cfg;
    cfg.mode = parse_mode(mode);
    cfg.precision = precision;
    cfg.theta_exp = theta_exp;
    cfg.epsilon = epsilon;
    const Instance inst = parse_instance(instance);
    SolveOutput out;
    {
        py::gil_scoped_release release;
        out = solve(inst, cfg);
    }
    return result_to_json(out.record).dump();
}

py::tuple verify_json(const std::string& instance, const std::string& result) {
    const auto rec = result_from_json(parse_json_text(result, "result"));
    int digits = 30;
    if (auto it = rec.extra.find("precision"); it != rec.extra.end()) digits = std::stoi(it->second);
    const auto rep = verify(parse_instance(instance), rec, digits);
    return py::make_tuple(rep.ok, rep.message);
}

std::string render_json(const std::string& instance, const std::optional<std::string>& result, int size) {
    const Instance inst = parse_instance(instance);
    RenderOptions opt;
    opt.size = size;
    EdgeCover cover;
    if (result) {
        cover.edges = result_from_json(parse_json_text(*result, "result")).edges;
        opt.cover = &cover;
    }
    return render_svg(inst, opt);
}

py::tuple penalty_matching(const std::vector<std::int64_t>& positions, const std::vector<bool>& red,
                           const std::vector<std::int64_t>& penalties) {
    if (positions.size() != red.size() || positions.size() != penalties.size()) {
        throw InputError("penalty_matching: positions, colors and penalties differ in length");
    }
    std::vector<penalty1d::LinePoint<std::int64_t>> pts;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        pts.push_back({positions[i], red[i] ? Color::Red : Color::Blue, penalties[i]});
    }
    const auto sol = penalty1d::solve(pts);
    return py::make_tuple(sol.cost, sol.pairs, sol.unmatched);
}

}  // namespace

PYBIND11_MODULE(_manymatch, m) {
    m.doc() = "Exact minimum-cost many-to-many matching of red and blue grid points";
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    m.def("generate", [](std::size_t n, std::int64_t delta, std::uint64_t seed) {
        return instance_to_json(generate_instance(n, delta, seed)).dump();
    }, py::arg("n"), py::arg("delta"), py::arg("seed") = 0);
    m.def("solve", &solve_json, py::arg("instance"), py::arg("mode") = "exact", py::arg("precision") = 30,
          py::arg("theta_exp") = py::none(), py::arg("epsilon") = py::none());
    m.def("verify", &verify_json, py::arg("instance"), py::arg("result"));
    m.def("render", &render_json, py::arg("instance"), py::arg("result") = py::none(), py::arg("size") = 800);
    m.def("penalty_matching", &penalty_matching, py::arg("positions"), py::arg("red"), py::arg("penalties"),
          "Sorted integer positions; returns (cost, pairs, unmatched).");
}
