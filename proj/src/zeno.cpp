#include "zenolind/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace zenolind::zeno {

using ops::identity_matrix;
using ops::unvectorize;
using ops::vectorize;

void TargetSpec::validate() const {
    if (std::abs(mu) > 1.0) throw std::invalid_argument("TargetSpec: |mu| must be <= 1");
}

int DissipatorSpectrum::local_dim() const {
    int d = 1;
    for (int x : local_dims) d *= x;
    return d;
}

void DissipatorSpectrum::validate(const Matrix& dissipator_superop) const {
    const int d0 = local_dim();
    if (static_cast<int>(psis.size()) != d0 * d0) {
        throw NumericalContractError("DissipatorSpectrum: incomplete eigenbasis");
    }
    for (std::size_t k = 0; k < psis.size(); ++k) {
        const double resid =
            (dissipator_superop * vectorize(psis[k]) - xis[k] * vectorize(psis[k])).norm();
        if (resid > 1e-12 * std::max(1.0, std::abs(xis[k])) * psis[k].norm() + 1e-12) {
            throw NumericalContractError("DissipatorSpectrum: eigenpair residual above 1e-12");
        }
        for (std::size_t j = 0; j < psis.size(); ++j) {
            const Complex overlap = (phis[k] * psis[j]).trace();
            const Complex expected = (k == j) ? 1.0 : 0.0;
            if (std::abs(overlap - expected) > 1e-12 * std::max(1.0, psis[j].norm() * phis[k].norm())) {
                throw NumericalContractError("DissipatorSpectrum: dual basis not trace-orthonormal");
            }
        }
        const double tr = std::abs(Complex(psis[k].trace()) - Complex(k == 0 ? 1.0 : 0.0));
        if (tr > 1e-12) {
            throw NumericalContractError("DissipatorSpectrum: trace normalization violated");
        }
    }
}

Eigen::Vector2cd target_ket(const TargetSpec& spec) {
    Eigen::Vector2cd v;
    v << std::cos(spec.theta / 2.0) * std::exp(-kImag * (spec.phi / 2.0)),
        std::sin(spec.theta / 2.0) * std::exp(kImag * (spec.phi / 2.0));
    return v;
}

Eigen::Vector2cd target_ket_perp(const TargetSpec& spec) {
    Eigen::Vector2cd v;
    v << std::sin(spec.theta / 2.0) * std::exp(-kImag * (spec.phi / 2.0)),
        -std::cos(spec.theta / 2.0) * std::exp(kImag * (spec.phi / 2.0));
    return v;
}

SingleSpinDissipator single_spin_dissipator(const TargetSpec& spec) {
    spec.validate();
    const Eigen::Vector2cd k0 = target_ket(spec);
    const Eigen::Vector2cd kp = target_ket_perp(spec);
    SingleSpinDissipator out;
    out.l1 = std::sqrt((1.0 + spec.mu) / 2.0) * (k0 * kp.adjoint());
    out.l2 = std::sqrt((1.0 - spec.mu) / 2.0) * (kp * k0.adjoint());
    out.psi0 = 0.5 * (1.0 + spec.mu) * (k0 * k0.adjoint()) + 0.5 * (1.0 - spec.mu) * (kp * kp.adjoint());
    return out;
}

DissipatorSpectrum dissipator_spectrum_analytic(const TargetSpec& spec) {
    spec.validate();
    const Eigen::Vector2cd k0 = target_ket(spec);
    const Eigen::Vector2cd kp = target_ket_perp(spec);
    const Matrix p00 = k0 * k0.adjoint();
    const Matrix ppp = kp * kp.adjoint();
    const Matrix p0p = k0 * kp.adjoint();
    const Matrix pp0 = kp * k0.adjoint();

    DissipatorSpectrum s;
    s.local_dims = {2};
    s.psis = {0.5 * (1.0 + spec.mu) * p00 + 0.5 * (1.0 - spec.mu) * ppp, p0p, pp0, p00 - ppp};
    s.xis = {0.0, -0.5, -0.5, -1.0};
    s.phis = {identity_matrix(2), pp0, p0p, 0.5 * (1.0 - spec.mu) * p00 - 0.5 * (1.0 + spec.mu) * ppp};
    return s;
}

namespace {

void fix_matrix_phase(Matrix& m) {
    Eigen::Index r = 0, c = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > best + 1e-14) {
                best = std::abs(m(i, j));
                r = i;
                c = j;
            }
        }
    if (best > 0) m *= std::conj(m(r, c)) / std::abs(m(r, c));
}

} // namespace

DissipatorSpectrum dissipator_spectrum_numeric(const Matrix& dissipator_superop,
                                               const std::vector<int>& local_dims) {
    int d0 = 1;
    for (int x : local_dims) d0 *= x;
    const int n = d0 * d0;
    if (dissipator_superop.rows() != n || dissipator_superop.cols() != n) {
        throw std::invalid_argument("dissipator_spectrum_numeric: superoperator size mismatch");
    }

    Eigen::ComplexEigenSolver<Matrix> solver(dissipator_superop);
    if (solver.info() != Eigen::Success) {
        throw DiagonalizabilityError("dissipator_spectrum_numeric: eigensolver failed");
    }
    Vector evals = solver.eigenvalues();
    Matrix evecs = solver.eigenvectors();

    const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Dark state first, then deterministic order for the decaying modes.
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(evals(a)), mb = std::abs(evals(b));
        if (std::abs(ma - mb) > 1e-12 * scale) return ma < mb;
        if (std::abs(evals(a).real() - evals(b).real()) > 1e-12 * scale)
            return evals(a).real() > evals(b).real();
        return evals(a).imag() < evals(b).imag();
    });

    int kernel_count = 0;
    for (int k : order) {
        if (std::abs(evals(k)) < 1e-10 * scale) ++kernel_count;
        if (evals(k).real() > 1e-10 * scale) {
            throw NumericalContractError(
                "dissipator_spectrum_numeric: eigenvalue with positive real part");
        }
    }
    if (kernel_count != 1) {
        throw DegenerateKernelError("dissipator_spectrum_numeric: kernel dimension is " +
                                    std::to_string(kernel_count) + ", expected 1");
    }

    Matrix basis(n, n);
    std::vector<Complex> xis(n);
    for (int k = 0; k < n; ++k) {
        basis.col(k) = evecs.col(order[k]);
        xis[k] = evals(order[k]);
    }
    xis[0] = 0.0;

    // Scale the dark state to unit trace, then fix residual phases.
    Matrix psi0 = unvectorize(basis.col(0), d0);
    const Complex tr0 = psi0.trace();
    if (std::abs(tr0) < 1e-10) {
        throw DegenerateKernelError("dissipator_spectrum_numeric: dark state is traceless");
    }
    basis.col(0) /= tr0;

    DissipatorSpectrum s;
    s.local_dims = local_dims;
    s.psis.resize(n);
    for (int k = 0; k < n; ++k) {
        Matrix psi = unvectorize(basis.col(k), d0);
        if (k > 0) {
            // Decaying modes are traceless; remove the numerical trace drift
            // along the dark state before phase fixing.
            psi -= psi.trace() * unvectorize(basis.col(0), d0);
            fix_matrix_phase(psi);
            psi /= psi.norm();
            basis.col(k) = vectorize(psi);
        }
        s.psis[k] = std::move(psi);
    }

    Eigen::JacobiSVD<Matrix> svd(basis);
    const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    if (!(cond < 1e8)) {
        throw DiagonalizabilityError(
            "dissipator_spectrum_numeric: eigenvector matrix condition number above 1e8");
    }

    const Matrix inv = basis.partialPivLu().inverse();
    s.xis = std::move(xis);
    s.phis.resize(n);
    for (int k = 0; k < n; ++k) {
        // Row k of the inverse lists tr(phi_k ·) coefficients: phi_k = row^T reshaped.
        Matrix phi = unvectorize(inv.row(k).transpose(), d0).transpose();
        s.phis[k] = std::move(phi);
    }
    // The dual of the dark state is the identity by construction; snap it.
    if ((s.phis[0] - identity_matrix(d0)).norm() > 1e-8) {
        throw NumericalContractError("dissipator_spectrum_numeric: dual of the dark state is not I");
    }
    s.phis[0] = identity_matrix(d0);
    return s;
}

DissipatorSpectrum compose_spectra(const DissipatorSpectrum& a, const DissipatorSpectrum& b) {
    DissipatorSpectrum out;
    out.local_dims = a.local_dims;
    out.local_dims.insert(out.local_dims.end(), b.local_dims.begin(), b.local_dims.end());
    const std::size_t na = a.psis.size(), nb = b.psis.size();
    out.psis.reserve(na * nb);
    out.phis.reserve(na * nb);
    out.xis.reserve(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            out.psis.push_back(ops::kron(a.psis[i], b.psis[j]));
            out.phis.push_back(ops::kron(a.phis[i], b.phis[j]));
            out.xis.push_back(a.xis[i] + b.xis[j]);
        }
    return out;
}

Matrix coeffs_C(const DissipatorSpectrum& spectrum) {
    const int n = static_cast<int>(spectrum.psis.size());
    Matrix c(n, n);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
            c(m, k) = (spectrum.phis[m].adjoint() * spectrum.phis[k] * spectrum.psis[0]).trace();
        }
    return c;
}

std::vector<Matrix> hamiltonian_components_g(const Operator& h, const DissipatorSpectrum& spectrum) {
    if (!ops::is_hermitian(h.entries)) {
        throw std::invalid_argument("hamiltonian_components_g: Hamiltonian is not Hermitian");
    }
    if (h.space.dissipative_dims() != spectrum.local_dims) {
        throw std::invalid_argument("hamiltonian_components_g: dissipative factors do not match spectrum");
    }
    std::vector<Matrix> g;
    g.reserve(spectrum.psis.size());
    for (const Matrix& psi : spectrum.psis) {
        const Operator lifted = ops::lift_dissipative(h.space, psi);
        g.push_back(
            ops::trace_out_dissipative(Operator(h.space, Matrix(lifted.entries * h.entries))).entries);
    }

    // Reconstruction: H must equal Σ_n phi_n ⊗ g_n.
    Matrix rebuilt = Matrix::Zero(h.dim(), h.dim());
    for (std::size_t k = 0; k < g.size(); ++k) {
        rebuilt += ops::split_product(h.space, spectrum.phis[k], g[k]).entries;
    }
    const double resid = (rebuilt - h.entries).norm();
    if (resid > 1e-11 * std::max(1.0, h.entries.norm())) {
        throw NumericalContractError("hamiltonian_components_g: reconstruction residual " +
                                     std::to_string(resid) + " above 1e-11");
    }
    return g;
}

Operator projected_hamiltonian(const Operator& h, const Matrix& psi0) {
    if (std::abs(Complex(psi0.trace()) - Complex(1.0)) > 1e-9) {
        throw std::invalid_argument("projected_hamiltonian: psi0 must have unit trace");
    }
    if (!ops::is_hermitian(psi0, 1e-9)) {
        throw std::invalid_argument("projected_hamiltonian: psi0 must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (psi0 + Matrix(psi0.adjoint())), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw std::invalid_argument("projected_hamiltonian: psi0 must be positive semidefinite");
    }
    const Operator lifted = ops::lift_dissipative(h.space, psi0);
    Operator h_d = ops::trace_out_dissipative(Operator(h.space, Matrix(lifted.entries * h.entries)));
    if (!ops::is_hermitian(h_d.entries, 1e-12)) {
        throw NumericalContractError("projected_hamiltonian: result is not Hermitian to 1e-12");
    }
    return h_d;
}

Matrix effective_superoperator(const EffectiveGenerator& gen, int dim) {
    const Matrix id = identity_matrix(dim);
    Matrix m = -kImag * (ops::kron(id, gen.h_a) - ops::kron(gen.h_a.transpose(), id));
    for (const auto& jump : gen.jumps) {
        const Matrix ldl = jump.op.adjoint() * jump.op;
        m += jump.rate * (ops::kron(jump.op.conjugate(), jump.op) - 0.5 * ops::kron(id, ldl)
                          - 0.5 * ops::kron(ldl.transpose(), id));
    }
    return m;
}

EffectiveGenerator effective_generator(const Matrix& c_positive, const std::vector<Complex>& xis_positive,
                                       const std::vector<Matrix>& g_positive) {
    const int k = static_cast<int>(g_positive.size());
    if (c_positive.rows() != k || c_positive.cols() != k || static_cast<int>(xis_positive.size()) != k) {
        throw std::invalid_argument("effective_generator: inconsistent input sizes");
    }
    for (const Complex& xi : xis_positive) {
        if (!(xi.real() < 0.0)) {
            throw std::invalid_argument("effective_generator: eigenvalues must have negative real part");
        }
    }

    Matrix y(k, k);
    for (int m = 0; m < k; ++m)
        for (int n = 0; n < k; ++n) y(m, n) = -c_positive(m, n) / std::conj(xis_positive[m]);

    EffectiveGenerator gen;
    gen.a_matrix = y + Matrix(y.adjoint());
    gen.b_matrix = (y - Matrix(y.adjoint())) / (2.0 * kImag);

    const int dim = k > 0 ? static_cast<int>(g_positive[0].rows()) : 1;
    gen.h_a = Matrix::Zero(dim, dim);
    for (int m = 0; m < k; ++m)
        for (int n = 0; n < k; ++n) {
            if (gen.b_matrix(m, n) != Complex(0.0)) {
                gen.h_a += gen.b_matrix(m, n) * Matrix(g_positive[m].adjoint() * g_positive[n]);
            }
        }
    gen.h_a = 0.5 * (gen.h_a + Matrix(gen.h_a.adjoint()));

    Eigen::SelfAdjointEigenSolver<Matrix> es(gen.a_matrix);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw NumericalContractError("effective_generator: coefficient matrix A is not PSD");
    }
    for (int q = k - 1; q >= 0; --q) { // descending rates
        const double rate = es.eigenvalues()(q);
        if (rate < 1e-12) continue;
        Matrix jump = Matrix::Zero(dim, dim);
        for (int n = 0; n < k; ++n) jump += std::conj(es.eigenvectors()(n, q)) * g_positive[n];
        gen.jumps.push_back({std::move(jump), rate});
    }

    // The canonical Lindblad form must reproduce the raw second-order sum
    // Σ_mn [Y_mn (g_n R g_m† - g_m† g_n R) + h.c.].
    const Matrix id = identity_matrix(dim);
    Matrix direct = Matrix::Zero(dim * dim, dim * dim);
    for (int m = 0; m < k; ++m)
        for (int n = 0; n < k; ++n) {
            direct += y(m, n) * (ops::kron(g_positive[m].conjugate(), g_positive[n])
                                 - ops::kron(id, Matrix(g_positive[m].adjoint() * g_positive[n])));
            direct += std::conj(y(m, n))
                      * (ops::kron(g_positive[n].conjugate(), g_positive[m])
                         - ops::kron(Matrix(g_positive[n].adjoint() * g_positive[m]).transpose(), id));
        }
    const Matrix canonical = effective_superoperator(gen, dim);
    const double scale = std::max(1.0, direct.norm());
    if ((canonical - direct).norm() > 1e-11 * scale) {
        throw NumericalContractError("effective_generator: canonical form does not match the raw sum");
    }
    return gen;
}

std::array<Eigen::Vector3d, 3> bloch_frame(double theta, double phi) {
    auto unit = [](double t, double p) {
        return Eigen::Vector3d(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t));
    };
    return {unit(theta, phi), unit(M_PI / 2.0 - theta, phi + M_PI), unit(M_PI / 2.0, phi + M_PI / 2.0)};
}

Operator xyz_chain_hamiltonian(int n_sites, double jx, double jy, double jz) {
    if (n_sites < 2) throw std::invalid_argument("xyz_chain_hamiltonian: need at least 2 sites");
    const TensorSpace space(std::vector<int>(n_sites, 2));
    Matrix h = Matrix::Zero(space.total_dim(), space.total_dim());
    const std::array<Matrix, 3> paulis{ops::pauli_x(), ops::pauli_y(), ops::pauli_z()};
    const std::array<double, 3> j{jx, jy, jz};
    for (int n = 0; n + 1 < n_sites; ++n) {
        for (int a = 0; a < 3; ++a) {
            const Matrix bond = ops::kron(paulis[a], paulis[a]);
            h += j[a] * ops::embed_local(bond, n, space).entries;
        }
    }
    return Operator(space, std::move(h));
}

LindbladModel targeted_chain_model(const Operator& h, const std::vector<TargetSpec>& targets,
                                   double gamma) {
    const auto& sites = h.space.dissipative_sites();
    if (targets.size() != sites.size()) {
        throw std::invalid_argument("targeted_chain_model: one TargetSpec per dissipative site required");
    }
    LindbladModel m;
    m.space = h.space;
    m.hamiltonian = h;
    m.gamma = gamma;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const SingleSpinDissipator diss = single_spin_dissipator(targets[k]);
        m.jumps.emplace_back(ops::embed_local(diss.l1, sites[k], h.space), 1.0);
        m.jumps.emplace_back(ops::embed_local(diss.l2, sites[k], h.space), 1.0);
    }
    m.validate();
    return m;
}

EffectiveModel reduce_targeted_model(const Operator& h, const std::vector<TargetSpec>& targets,
                                     double gamma, bool assert_locality) {
    const auto& sites = h.space.dissipative_sites();
    if (sites.empty()) throw std::invalid_argument("reduce_targeted_model: no dissipative sites marked");
    if (targets.size() != sites.size()) {
        throw std::invalid_argument("reduce_targeted_model: one TargetSpec per dissipative site required");
    }
    if (gamma <= 0.0) throw std::invalid_argument("reduce_targeted_model: gamma must be positive");

    EffectiveModel model;
    model.space = h.space;
    model.gamma = gamma;
    model.spectrum = dissipator_spectrum_analytic(targets[0]);
    for (std::size_t k = 1; k < targets.size(); ++k) {
        model.spectrum = compose_spectra(model.spectrum, dissipator_spectrum_analytic(targets[k]));
    }

    const std::vector<Matrix> g_all = hamiltonian_components_g(h, model.spectrum);
    model.h_d = Operator(TensorSpace(h.space.free_dims()), g_all[0]);
    if (!ops::is_hermitian(model.h_d.entries, 1e-12)) {
        throw NumericalContractError("reduce_targeted_model: projected Hamiltonian not Hermitian");
    }

    if (assert_locality && targets.size() > 1) {
        // Components with more than one decaying boundary index must vanish
        // for nearest-neighbour interactions.
        const int per_site = 4;
        const double scale = std::max(1.0, h.entries.norm());
        for (std::size_t k = 1; k < g_all.size(); ++k) {
            int idx = static_cast<int>(k);
            int nonzero_digits = 0;
            for (std::size_t s = 0; s < targets.size(); ++s) {
                if (idx % per_site != 0) ++nonzero_digits;
                idx /= per_site;
            }
            if (nonzero_digits > 1 && g_all[k].norm() > 1e-12 * scale) {
                throw NumericalContractError(
                    "reduce_targeted_model: locality violation, cross component " + std::to_string(k) +
                    " has norm " + std::to_string(g_all[k].norm()));
            }
        }
    }

    model.g_ops.assign(g_all.begin() + 1, g_all.end());
    const Matrix c = coeffs_C(model.spectrum);
    const int n = static_cast<int>(model.spectrum.psis.size());
    model.generator = effective_generator(c.bottomRightCorner(n - 1, n - 1),
                                          {model.spectrum.xis.begin() + 1, model.spectrum.xis.end()},
                                          model.g_ops);
    return model;
}

EffectiveModel compose_two_boundary(const Operator& h, const TargetSpec& left, const TargetSpec& right,
                                    double gamma) {
    if (h.space.n_sites() < 3) {
        throw std::invalid_argument("compose_two_boundary: chain length must be at least 3");
    }
    const Operator marked(h.space.with_dissipative({0, h.space.n_sites() - 1}), h.entries);
    return reduce_targeted_model(marked, {left, right}, gamma, /*assert_locality=*/true);
}

LindbladModel EffectiveModel::effective_lme() const {
    LindbladModel m;
    m.space = h_d.space;
    m.hamiltonian = Operator(h_d.space, Matrix(h_d.entries + generator.h_a / gamma));
    m.gamma = 1.0 / gamma;
    for (const auto& jump : generator.jumps) {
        m.jumps.emplace_back(Operator(h_d.space, jump.op), jump.rate);
    }
    m.validate();
    return m;
}

// ---- projector / pseudo-inverse machinery ------------------------------------

Matrix kernel_projector(const Matrix& generator) {
    Matrix e = generator.exp();
    for (int iter = 0; iter < 64; ++iter) {
        Matrix squared = e * e;
        const double delta = (squared - e).norm();
        e = std::move(squared);
        if (delta < 1e-13 * std::max(1.0, e.norm())) {
            return e;
        }
    }
    throw DegenerateKernelError("kernel_projector: exp(Mt) did not converge to a projector");
}

Matrix dissipator_pseudo_inverse(const Matrix& dissipator_superop, const Matrix& p0) {
    const Eigen::Index n = dissipator_superop.rows();
    const Matrix shifted = dissipator_superop + p0;
    return shifted.partialPivLu().solve(Matrix::Identity(n, n)) - p0;
}

namespace {

Matrix commutator_superoperator(const Matrix& h, double gamma) {
    const Matrix id = identity_matrix(static_cast<int>(h.rows()));
    return (-kImag / gamma) * (ops::kron(id, h) - ops::kron(h.transpose(), id));
}

double spectral_norm(const Matrix& m) {
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace

DysonReport verify_dyson(const LindbladModel& m, const Matrix& psi0, const std::vector<double>& times,
                         const std::vector<double>& gammas, std::uint64_t seed) {
    m.validate();
    const int d = m.space.total_dim();
    if (static_cast<long long>(d) * d > 4096) {
        throw std::invalid_argument("verify_dyson: superoperator dimension guard exceeded");
    }
    const Matrix l0 = lme::dissipator_superoperator(m);
    const Matrix p0 = kernel_projector(l0);
    const Matrix q0 = Matrix::Identity(d * d, d * d) - p0;
    const Matrix s = dissipator_pseudo_inverse(l0, p0);

    DysonReport report;
    report.pseudo_inverse_residual = std::max((l0 * s - q0).norm(), (s * l0 - q0).norm());

    // P0 X = psi0 ⊗ tr X over the dissipative factors, on random test operators.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        Matrix x(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) x(i, j) = Complex(gauss(rng), gauss(rng));
        const Operator reduced = ops::trace_out_dissipative(Operator(m.space, x));
        const Matrix expected = ops::split_product(m.space, psi0, reduced.entries).entries;
        const double resid = (unvectorize(p0 * vectorize(x), d) - expected).norm() / x.norm();
        report.projector_action_residual = std::max(report.projector_action_residual, resid);
    }

    for (double gamma : gammas) {
        const Matrix k = commutator_superoperator(m.hamiltonian.entries, gamma);
        const Matrix full = l0 + k;
        const Matrix pkp = p0 * k * p0;
        const Matrix pkqskp = p0 * k * q0 * s * k * p0;
        for (double t : times) {
            const Matrix exact = p0 * (full * t).exp() * p0;
            const Matrix expansion = p0 + t * pkp + (t * t / 2.0) * pkp * pkp - t * pkqskp;
            report.propagator.push_back({t, gamma, spectral_norm(exact - expansion)});
        }
    }
    return report;
}

Matrix brute_force_effective_superoperator(const LindbladModel& m, const Matrix& psi0) {
    const int d = m.space.total_dim();
    const int d1 = m.space.free_dim();
    const Matrix l0 = lme::dissipator_superoperator(m);
    const Matrix p0 = kernel_projector(l0);
    const Matrix q0 = Matrix::Identity(d * d, d * d) - p0;
    const Matrix s = dissipator_pseudo_inverse(l0, p0);
    const Matrix k = commutator_superoperator(m.hamiltonian.entries, m.gamma);
    const Matrix core = -(m.gamma * m.gamma) * (p0 * k * q0 * s * k * p0);

    Matrix w(d1 * d1, d1 * d1);
    for (int b = 0; b < d1; ++b)
        for (int a = 0; a < d1; ++a) {
            Matrix basis_elem = Matrix::Zero(d1, d1);
            basis_elem(a, b) = 1.0;
            const Matrix lifted = ops::split_product(m.space, psi0, basis_elem).entries;
            const Vector image = core * vectorize(lifted);
            const Operator reduced =
                ops::trace_out_dissipative(Operator(m.space, unvectorize(image, d)));
            w.col(a + static_cast<Eigen::Index>(b) * d1) = vectorize(reduced.entries);
        }
    return w;
}

} // namespace zenolind::zeno
