// py_core.cpp — Python bindings for the core operations

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zenolind/experiment.hpp"
#include "zenolind/lindblad.hpp"
#include "zenolind/markov.hpp"
#include "zenolind/operator_core.hpp"
#include "zenolind/zeno.hpp"

namespace py = pybind11;
using namespace zenolind;

namespace {

lme::LindbladModel make_model(const std::vector<int>& dims, const std::vector<int>& dissipative_sites,
                              const Matrix& hamiltonian,
                              const std::vector<std::pair<Matrix, double>>& jumps, double gamma) {
    ops::TensorSpace space(dims, dissipative_sites);
    lme::LindbladModel m;
    m.space = space;
    m.hamiltonian = ops::Operator(space, hamiltonian);
    for (const auto& [l, rate] : jumps) m.jumps.emplace_back(ops::Operator(space, l), rate);
    m.gamma = gamma;
    m.validate();
    return m;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lindblad dynamics of boundary-driven spin chains, strong-dissipation reduction "
              "and Markov steady states";

    py::register_exception<NumericalContractError>(m, "NumericalContractError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<zeno::TargetSpec>(m, "TargetSpec")
        .def(py::init<>())
        .def(py::init([](double theta, double phi, double mu) {
                 zeno::TargetSpec s{theta, phi, mu};
                 s.validate();
                 return s;
             }),
             py::arg("theta"), py::arg("phi"), py::arg("mu"))
        .def_readwrite("theta", &zeno::TargetSpec::theta)
        .def_readwrite("phi", &zeno::TargetSpec::phi)
        .def_readwrite("mu", &zeno::TargetSpec::mu);

    // ---- operator algebra ----
    m.def("kron", [](const Matrix& a, const Matrix& b) { return ops::kron(a, b); },
          "Kronecker product");
    m.def(
        "partial_trace",
        [](const Matrix& x, const std::vector<int>& dims, const std::vector<int>& over) {
            return ops::partial_trace(ops::Operator(ops::TensorSpace(dims), x), over).entries;
        },
        py::arg("matrix"), py::arg("dims"), py::arg("over"),
        "Partial trace over the listed tensor factors");
    m.def("pauli_x", &ops::pauli_x);
    m.def("pauli_y", &ops::pauli_y);
    m.def("pauli_z", &ops::pauli_z);
    m.def(
        "hermitian_eig",
        [](const Matrix& a) {
            const auto es = ops::hermitian_eig(a);
            return std::make_pair(es.values, es.vectors);
        },
        "Eigenvalues (ascending) and phase-fixed eigenvectors of a Hermitian matrix");

    // ---- Lindblad dynamics ----
    m.def("dissipator_apply",
          [](const Matrix& l, const Matrix& x) { return lme::dissipator_apply(l, x); });
    m.def(
        "superoperator_matrix",
        [](const std::vector<int>& dims, const std::vector<int>& diss, const Matrix& h,
           const std::vector<std::pair<Matrix, double>>& jumps, double gamma, bool rescaled) {
            return lme::superoperator_matrix(make_model(dims, diss, h, jumps, gamma), rescaled);
        },
        py::arg("dims"), py::arg("dissipative_sites"), py::arg("hamiltonian"), py::arg("jumps"),
        py::arg("gamma"), py::arg("rescaled") = false);
    m.def(
        "ness_full",
        [](const std::vector<int>& dims, const std::vector<int>& diss, const Matrix& h,
           const std::vector<std::pair<Matrix, double>>& jumps, double gamma) {
            return lme::ness_full(make_model(dims, diss, h, jumps, gamma)).op.entries;
        },
        py::arg("dims"), py::arg("dissipative_sites"), py::arg("hamiltonian"), py::arg("jumps"),
        py::arg("gamma"), "Exact steady state of the full master equation");

    // ---- reduction ----
    m.def("single_spin_dissipator", [](const zeno::TargetSpec& spec) {
        const auto d = zeno::single_spin_dissipator(spec);
        return std::make_tuple(d.l1, d.l2, d.psi0);
    });
    m.def("dissipator_spectrum", [](const zeno::TargetSpec& spec) {
        const auto s = zeno::dissipator_spectrum_analytic(spec);
        return std::make_tuple(s.psis, s.xis, s.phis);
    });
    m.def("bloch_frame", &zeno::bloch_frame, py::arg("theta"), py::arg("phi"));
    m.def("xyz_chain_hamiltonian",
          [](int n, double jx, double jy, double jz) {
              return zeno::xyz_chain_hamiltonian(n, jx, jy, jz).entries;
          },
          py::arg("n_sites"), py::arg("jx"), py::arg("jy"), py::arg("jz"));

    py::class_<zeno::EffectiveModel>(m, "EffectiveModel")
        .def_property_readonly("h_d", [](const zeno::EffectiveModel& e) { return e.h_d.entries; })
        .def_property_readonly("h_a", [](const zeno::EffectiveModel& e) { return e.generator.h_a; })
        .def_property_readonly("a_matrix",
                               [](const zeno::EffectiveModel& e) { return e.generator.a_matrix; })
        .def_property_readonly("jumps",
                               [](const zeno::EffectiveModel& e) {
                                   std::vector<std::pair<Matrix, double>> out;
                                   for (const auto& j : e.generator.jumps) out.emplace_back(j.op, j.rate);
                                   return out;
                               })
        .def_property_readonly("gamma", [](const zeno::EffectiveModel& e) { return e.gamma; });

    m.def(
        "reduce_chain",
        [](int n_sites, double jx, double jy, double jz, const zeno::TargetSpec& left,
           const std::optional<zeno::TargetSpec>& right, double gamma) {
            const ops::Operator h = zeno::xyz_chain_hamiltonian(n_sites, jx, jy, jz);
            std::vector<int> sites{0};
            std::vector<zeno::TargetSpec> targets{left};
            if (right) {
                sites.push_back(n_sites - 1);
                targets.push_back(*right);
            }
            const ops::Operator marked(h.space.with_dissipative(sites), h.entries);
            return zeno::reduce_targeted_model(marked, targets, gamma, true);
        },
        py::arg("n_sites"), py::arg("jx"), py::arg("jy"), py::arg("jz"), py::arg("left"),
        py::arg("right") = std::nullopt, py::arg("gamma") = 1.0,
        "Effective model of an XYZ chain with targeting dissipators on the boundary spins");

    // ---- Markov reduction ----
    m.def("markov_chain", [](const zeno::EffectiveModel& eff) {
        const auto chain = markov::markov_rates(eff);
        const auto nu = markov::stationary_distribution(chain);
        return std::make_tuple(chain.basis.values, chain.basis.vectors, chain.rates, chain.generator,
                               nu.nu);
    });
    m.def("stationary_reduced_state", [](const zeno::EffectiveModel& eff) {
        const auto chain = markov::markov_rates(eff);
        const auto nu = markov::stationary_distribution(chain);
        return markov::assemble_R_infinity(nu, chain.basis);
    });

    m.attr("__version__") = "0.1.0";
}
