// Python bindings for the core pipeline: metric spaces, Rips and
// degree-Rips complexes, slice invariants, stability certificates, and the
// controlled-equivalence radius.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ripshom/io.hpp"

namespace py = pybind11;
using namespace ripshom;

namespace {

ComplexSlice slice_from_lists(int vertex_count, const std::vector<std::vector<int>>& simplices) {
    std::vector<Simplex> out;
    out.reserve(simplices.size());
    for (const auto& v : simplices) out.push_back(Simplex{v});
    return ComplexSlice::from_simplices(vertex_count, std::move(out), true);
}

std::vector<std::vector<int>> slice_to_lists(const ComplexSlice& slice) {
    std::vector<std::vector<int>> out;
    out.reserve(slice.simplices.size());
    for (const auto& s : slice.simplices) out.push_back(s.v);
    return out;
}

}  // namespace

PYBIND11_MODULE(_ripshom, m) {
    m.doc() = "Rips and degree-Rips homotopy toolkit";

    py::register_exception<validation_error>(m, "ValidationError");
    py::register_exception<budget_error>(m, "BudgetError");

    py::class_<MetricPoints>(m, "MetricPoints")
        .def_static("from_euclidean", &MetricPoints::from_euclidean, py::arg("coords"))
        .def_static("from_distance_matrix", &MetricPoints::from_distance_matrix,
                    py::arg("labels"), py::arg("dist"), py::arg("tol") = kDefaultTol)
        .def("__len__", &MetricPoints::size)
        .def("dist", &MetricPoints::dist, py::arg("i"), py::arg("j"))
        .def("labels", &MetricPoints::labels)
        .def("max_dist", &MetricPoints::max_dist);

    py::class_<SubsetPair>(m, "SubsetPair")
        .def(py::init<MetricPoints, std::vector<int>>(), py::arg("ambient"), py::arg("members"))
        .def_readonly("members", &SubsetPair::members);

    m.def("hausdorff", &hausdorff, py::arg("xs"), py::arg("ys"), py::arg("ambient"));
    m.def("config_hausdorff_lt", &config_hausdorff_lt, py::arg("pair"), py::arg("k"),
          py::arg("r"));
    m.def("phase_grid",
          [](const MetricPoints& pts, double tol) { return phase_grid(pts, tol).values; },
          py::arg("points"), py::arg("tol") = kDefaultTol);

    py::class_<BifilteredComplex>(m, "BifilteredComplex")
        .def("poset_at",
             [](const BifilteredComplex& c, double s, int k, double tol) {
                 std::vector<std::vector<int>> out;
                 for (const auto& simplex : c.poset_at(s, k, tol)) out.push_back(simplex.v);
                 return out;
             },
             py::arg("s"), py::arg("k") = 0, py::arg("tol") = kDefaultTol)
        .def("to_json",
             [](const BifilteredComplex& c) { return complex_to_json(c).dump(); });

    m.def("build_rips",
          [](const MetricPoints& pts, int dim_cap) { return build_rips(pts, dim_cap); },
          py::arg("points"), py::arg("dim_cap") = 2);
    m.def("fill_degree_births",
          [](const BifilteredComplex& c, int deg_cap) { return fill_degree_births(c, deg_cap); },
          py::arg("complex"), py::arg("deg_cap") = 3);

    m.def("pi0",
          [](int vertex_count, const std::vector<std::vector<int>>& simplices) {
              return pi0(slice_from_lists(vertex_count, simplices));
          },
          py::arg("vertex_count"), py::arg("simplices"));
    m.def("homology_ranks",
          [](int vertex_count, const std::vector<std::vector<int>>& simplices, int p, int max_k) {
              return homology_ranks(slice_from_lists(vertex_count, simplices), p, max_k);
          },
          py::arg("vertex_count"), py::arg("simplices"), py::arg("p") = 2, py::arg("max_k") = 1);
    m.def("order_complex",
          [](int vertex_count, const std::vector<std::vector<int>>& simplices, int chain_cap) {
              return slice_to_lists(
                  order_complex(slice_from_lists(vertex_count, simplices), chain_cap));
          },
          py::arg("vertex_count"), py::arg("simplices"), py::arg("chain_cap") = 2);

    py::class_<AbelianInvariants>(m, "AbelianInvariants")
        .def_readonly("free_rank", &AbelianInvariants::free_rank)
        .def_readonly("torsion", &AbelianInvariants::torsion)
        .def("__eq__", [](const AbelianInvariants& a, const AbelianInvariants& b) { return a == b; })
        .def("__repr__", [](const AbelianInvariants& a) { return abelian_to_json(a).dump(); });

    m.def("fundamental_group_abelianization",
          [](int vertex_count, const std::vector<std::vector<int>>& simplices, int basepoint) {
              return abelianized_pi1(
                  groupoid_presentation(slice_from_lists(vertex_count, simplices), basepoint));
          },
          py::arg("vertex_count"), py::arg("simplices"), py::arg("basepoint"));
    m.def("integral_h1",
          [](int vertex_count, const std::vector<std::vector<int>>& simplices) {
              return integral_h1(slice_from_lists(vertex_count, simplices));
          },
          py::arg("vertex_count"), py::arg("simplices"));

    py::class_<InterleavingCertificate>(m, "InterleavingCertificate")
        .def_readonly("r", &InterleavingCertificate::r)
        .def_readonly("k", &InterleavingCertificate::k)
        .def_readonly("overall", &InterleavingCertificate::overall)
        .def("to_json", [](const InterleavingCertificate& c) {
            return certificate_to_json(c).dump();
        });

    m.def("verify_interleaving",
          [](const SubsetPair& pair, double r, int k, int dim_cap) {
              return verify_interleaving(pair, r, k, dim_cap);
          },
          py::arg("pair"), py::arg("r"), py::arg("k") = 0, py::arg("dim_cap") = 2);

    m.def("phase_gap_check",
          [](const SubsetPair& pair, int k, double r, int gap_index, int dim_cap) {
              return phase_gap_check(pair, k, r, gap_index, dim_cap);
          },
          py::arg("pair"), py::arg("k"), py::arg("r"), py::arg("gap_index"),
          py::arg("dim_cap") = 2);

    m.def("crossmap_stability_check",
          [](const MetricPoints& xs, const MetricPoints& ys,
             const std::vector<std::vector<double>>& cross, double r, double s, int p,
             int max_k) {
              const auto verdict = crossmap_stability_check(xs, ys, cross, r, s, p, max_k);
              return verdict.overall;
          },
          py::arg("xs"), py::arg("ys"), py::arg("cross_dist"), py::arg("r"), py::arg("s"),
          py::arg("p") = 2, py::arg("max_k") = 1);

    m.def("controlled_equivalence_radius",
          [](const SubsetPair& pair, int dim_cap, const std::vector<int>& primes,
             int max_k) -> py::object {
              const auto bundle = pair_invariant_bundle(pair, dim_cap, primes, max_k);
              const auto radius = controlled_equivalence_radius(bundle);
              if (!radius) return py::none();
              return py::float_(*radius);
          },
          py::arg("pair"), py::arg("dim_cap") = 2, py::arg("primes") = std::vector<int>{2},
          py::arg("max_k") = 1);
}
