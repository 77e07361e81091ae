#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "qspace/errors.hpp"
#include "qspace/membership.hpp"
#include "qspace/report.hpp"
#include "qspace/skewpoly.hpp"

namespace py = pybind11;
using namespace qspace;

namespace {

nlohmann::json parse_json(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("json parse error: ") + e.what());
    }
}

SearchOptions make_options(int workers, int cap) {
    SearchOptions opts;
    opts.workers = workers;
    if (cap > 0) {
        opts.naive_cap = cap;
        opts.pruned_cap = cap;
    }
    return opts;
}

Engine parse_engine(const std::string& name) {
    if (name == "naive") return Engine::naive;
    if (name == "pruned") return Engine::pruned;
    throw ValidationError("unknown engine: " + name);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "graded automorphism group structure of multiparameter quantum affine "
              "spaces (native core)";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<CapExceededError>(m, "CapExceededError", PyExc_RuntimeError);

    py::class_<QMatrix>(m, "QMatrix")
        .def_static("from_json",
                    [](const std::string& text) { return QMatrix::from_json(parse_json(text)); })
        .def_static("load", &QMatrix::load)
        .def("to_json", [](const QMatrix& q) { return q.to_json().dump(); })
        .def_property_readonly("n", &QMatrix::size)
        .def("label", &QMatrix::label)
        .def("entry", [](const QMatrix& q, int i, int j) { return q.at(i, j).str(); })
        .def("__repr__", [](const QMatrix& q) {
            return "<QMatrix n=" + std::to_string(q.size()) + " over " + q.field().str() + ">";
        });

    py::class_<FieldMatrix>(m, "Matrix")
        .def_static("from_json", [](const std::string& text) {
            return FieldMatrix::from_json(parse_json(text));
        })
        .def_static("load", &FieldMatrix::load)
        .def("to_json", [](const FieldMatrix& mm) { return mm.to_json().dump(); })
        .def_property_readonly("n", &FieldMatrix::size)
        .def("entry", [](const FieldMatrix& mm, int i, int j) { return mm.at(i, j).str(); })
        .def("is_invertible", &FieldMatrix::is_invertible)
        .def("__mul__", [](const FieldMatrix& a, const FieldMatrix& b) { return a * b; })
        .def("transpose", &FieldMatrix::transpose)
        .def("inverse", &FieldMatrix::inverse)
        .def("__repr__", [](const FieldMatrix& mm) { return "<Matrix " + mm.str() + ">"; });

    m.def("block_decomposition",
          [](const QMatrix& q) { return block_decomposition(q).blocks; });

    m.def(
        "analyze",
        [](const QMatrix& q, const std::string& engine, int workers, int cap) {
            return analyze(q, parse_engine(engine), make_options(workers, cap))
                .to_json()
                .dump();
        },
        py::arg("q"), py::arg("engine") = "pruned", py::arg("workers") = 1,
        py::arg("cap") = 0);

    m.def(
        "compatible_permutations",
        [](const QMatrix& q, const std::string& engine, int workers, int cap) {
            std::vector<std::string> out;
            PermGroup p = compatible_group(q, parse_engine(engine), make_options(workers, cap));
            for (const Perm& pi : p.elements()) out.push_back(pi.cycles());
            return out;
        },
        py::arg("q"), py::arg("engine") = "pruned", py::arg("workers") = 1,
        py::arg("cap") = 0);

    m.def("is_member",
          [](const QMatrix& q, const FieldMatrix& mm) { return is_member(q, mm); });

    m.def("member_violation", [](const QMatrix& q, const FieldMatrix& mm) -> py::object {
        auto w = member_violation(q, mm);
        if (!w) return py::none();
        return py::make_tuple(w->i, w->j, w->s, w->t);
    });

    m.def("relations_preserved",
          [](const QMatrix& q, const FieldMatrix& mm) { return relations_preserved(q, mm); });

    m.def("skeleton", [](const FieldMatrix& mm) -> py::object {
        auto skel = skeleton_any(mm);
        if (!skel) return py::none();
        return py::cast(skel->cycles());
    });

    m.def(
        "skeletons",
        [](const FieldMatrix& mm, std::uint64_t cap) {
            std::vector<std::string> out;
            for (const Perm& pi : skeleton_all(mm, cap)) out.push_back(pi.cycles());
            return out;
        },
        py::arg("m"), py::arg("cap") = std::uint64_t{1000000});

    m.def("decompose", [](const QMatrix& q, const FieldMatrix& mm) {
        auto blocks = block_decomposition(q);
        auto dec = decompose_member(q, blocks, mm);
        return nlohmann::json{{"sigma", dec.sigma.cycles()},
                              {"block_part", dec.block_part.to_json()}}
            .dump();
    });

    m.def(
        "census",
        [](const QMatrix& q, std::uint64_t p, std::uint64_t budget, int workers) {
            std::uint64_t prime = p;
            if (prime == 0) {
                if (!q.field().is_prime_field()) {
                    throw ValidationError("census needs a finite field: pass p");
                }
                prime = q.field().modulus();
            }
            return census(q, prime, budget, workers).to_json().dump();
        },
        py::arg("q"), py::arg("p") = std::uint64_t{0},
        py::arg("budget") = kDefaultCensusBudget, py::arg("workers") = 1);

    m.def(
        "verify_homomorphism",
        [](const QMatrix& q, int samples, std::uint64_t seed) {
            auto blocks = block_decomposition(q);
            PermGroup p = compatible_group(q);
            PermGroup i = invariant_subgroup(q, p, blocks);
            return skeleton_coset_homomorphism(q, blocks, p, i, samples, seed);
        },
        py::arg("q"), py::arg("samples") = 200, py::arg("seed") = std::uint64_t{12345});
}
