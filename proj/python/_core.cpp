// Python bindings. Matrices cross the boundary as complex128 numpy arrays.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "overlap_lab/conditional.hpp"
#include "overlap_lab/errors.hpp"
#include "overlap_lab/experiments.hpp"
#include "overlap_lab/formulas.hpp"
#include "overlap_lab/overlaps.hpp"

namespace py = pybind11;
using namespace overlap_lab;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& a) {
    if (a.ndim() != 2) throw DimensionMismatch("expected a 2-d array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return ComplexMatrix(rows, cols, std::vector<Complex>(a.data(), a.data() + a.size()));
}

py::array_t<Complex> to_array(const ComplexMatrix& m) {
    py::array_t<Complex> out({m.rows(), m.cols()});
    std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
    return out;
}

py::array_t<Complex> to_array(const Spectrum& s) {
    py::array_t<Complex> out(static_cast<py::ssize_t>(s.size()));
    std::copy(s.values.begin(), s.values.end(), out.mutable_data());
    return out;
}

Spectrum to_spectrum(const ComplexArray& a) {
    if (a.ndim() != 1) throw DimensionMismatch("expected a 1-d array of eigenvalues");
    return Spectrum{std::vector<Complex>(a.data(), a.data() + a.size())};
}

py::dict verdict(const KsVerdict& v) {
    py::dict d;
    d["statistic"] = v.statistic;
    d["n"] = v.n;
    d["m"] = v.m;
    d["alpha"] = v.alpha;
    d["critical"] = v.critical;
    d["pass"] = v.pass;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Eigenvalue and eigenvector-overlap statistics of non-Hermitian random matrices";

    // Derived types are registered after their bases so they are matched first.
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DegenerateSpectrum>(m, "DegenerateSpectrum", numerical.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", numerical.ptr());
    auto parameter = py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<EmptyInput>(m, "EmptyInput", parameter.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);

    py::class_<EnsembleSpec>(m, "EnsembleSpec")
        .def_static("ginibre", &EnsembleSpec::ginibre, py::arg("n"))
        .def_static("spherical", &EnsembleSpec::spherical, py::arg("n"))
        .def_static("truncated_unitary", &EnsembleSpec::truncated_unitary, py::arg("n"), py::arg("m"))
        .def_property_readonly("n", &EnsembleSpec::n)
        .def_property_readonly("m", &EnsembleSpec::m)
        .def_property_readonly("tag", &EnsembleSpec::tag)
        .def("__eq__", [](const EnsembleSpec& a, const EnsembleSpec& b) { return a == b; })
        .def("__repr__", &EnsembleSpec::label);

    m.def(
        "sample_matrix",
        [](const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t stream) {
            RngStream rng(seed, stream);
            return to_array(sample_matrix(spec, rng));
        },
        py::arg("spec"), py::arg("seed") = 1, py::arg("stream") = 0);

    m.def(
        "schur",
        [](const ComplexArray& a) {
            const SchurForm s = schur(to_matrix(a));
            return py::make_tuple(to_array(s.u), to_array(s.t), to_array(s.eigenvalues));
        },
        py::arg("a"), "Returns (u, t, eigenvalues) with a = u t u*.");

    m.def(
        "overlap_matrix",
        [](const ComplexArray& a) {
            const OverlapMatrix o = overlap_matrix(to_matrix(a));
            return py::make_tuple(to_array(o.entries), to_array(o.spectrum));
        },
        py::arg("a"), "Returns (overlaps, eigenvalues).");

    m.def(
        "overlap_pair",
        [](const ComplexArray& t) {
            const OverlapPair p = overlap_pair_recurrence(to_matrix(t));
            return py::make_tuple(p.o11, p.o12);
        },
        py::arg("t"), "O_11 and O_12 of an upper triangular matrix.");

    m.def(
        "conditional_schur",
        [](const ComplexArray& eigenvalues, const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t stream) {
            RngStream rng(seed, stream);
            return to_array(conditional_schur(to_spectrum(eigenvalues), spec, rng).t);
        },
        py::arg("eigenvalues"), py::arg("spec"), py::arg("seed") = 1, py::arg("stream") = 0);

    m.def(
        "quenched_ov11", [](const ComplexArray& l, const EnsembleSpec& spec) { return quenched_ov11(to_spectrum(l), spec); },
        py::arg("eigenvalues"), py::arg("spec"));
    m.def(
        "quenched_ov12",
        [](const ComplexArray& l, const EnsembleSpec& spec, bool printed) {
            return quenched_ov12(to_spectrum(l), spec, printed);
        },
        py::arg("eigenvalues"), py::arg("spec"), py::arg("use_printed") = false);
    m.def(
        "quenched_trace",
        [](const ComplexArray& l, const EnsembleSpec& spec, bool printed) {
            return quenched_trace(to_spectrum(l), spec, printed);
        },
        py::arg("eigenvalues"), py::arg("spec"), py::arg("use_printed_tue") = false);

    m.def("inv_gamma2_cdf", &inv_gamma2_cdf, py::arg("x"));
    m.def("inv_gamma2_median", &inv_gamma2_median);

    m.def(
        "origin_limit_samples",
        [](const EnsembleSpec& spec, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
            RngStream rng(seed, stream);
            py::array_t<double> out(static_cast<py::ssize_t>(count));
            double* p = out.mutable_data();
            for (std::size_t i = 0; i < count; ++i) p[i] = origin_limit_sample(spec, rng);
            return out;
        },
        py::arg("spec"), py::arg("count"), py::arg("seed") = 1, py::arg("stream") = 0,
        "Draws of O_11/N conditioned on an eigenvalue at the origin.");

    m.def(
        "ks_two_sample",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b, double alpha) {
            return verdict(ks_two_sample({a.data(), static_cast<std::size_t>(a.size())},
                                         {b.data(), static_cast<std::size_t>(b.size())}, alpha));
        },
        py::arg("a"), py::arg("b"), py::arg("alpha") = 0.001);

    m.def("experiment_names", &experiment_names);

    // The report is returned as JSON text; the package wrapper decodes it.
    m.def(
        "run_verify_json",
        [](const std::string& config_json) {
            const ExperimentConfig config = ExperimentConfig::from_json(nlohmann::json::parse(config_json));
            config.validate();
            nlohmann::json report;
            {
                py::gil_scoped_release release;
                report = run_verify(config);
            }
            return report.dump();
        },
        py::arg("config_json"));
}
