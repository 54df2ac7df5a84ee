#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "test_support.hpp"
#include "zenolind/lindblad.hpp"
#include "zenolind/zeno.hpp"

using namespace zenolind;
using lme::DensityMatrix;
using lme::LindbladModel;
using ops::Matrix;
using ops::Operator;
using ops::TensorSpace;
using testsup::random_hermitian;
using testsup::random_matrix;

namespace {

LindbladModel single_spin_model(const zeno::TargetSpec& spec, double gamma) {
    const TensorSpace space({2}, {0});
    const auto diss = zeno::single_spin_dissipator(spec);
    LindbladModel m;
    m.space = space;
    m.hamiltonian = Operator(space, Matrix::Zero(2, 2));
    m.jumps.emplace_back(Operator(space, diss.l1), 1.0);
    m.jumps.emplace_back(Operator(space, diss.l2), 1.0);
    m.gamma = gamma;
    return m;
}

LindbladModel squares_model(double gamma) {
    const Operator h = zeno::xyz_chain_hamiltonian(4, 1.0, 2.2, 0.77);
    const Operator marked(h.space.with_dissipative({0, 3}), h.entries);
    return zeno::targeted_chain_model(
        marked, {{M_PI / 3.0, M_PI / 4.0, 0.9}, {3.0 * M_PI / 7.0, 4.0 * M_PI / 15.0, 0.7}}, gamma);
}

} // namespace

TEST_CASE("dissipator action on projectors and trace annihilation") {
    Matrix l = Matrix::Zero(2, 2);
    l(1, 0) = 1.0; // |1><0| with |0> = e_0
    Matrix x = Matrix::Zero(2, 2);
    x(0, 0) = 1.0;
    const Matrix got = lme::dissipator_apply(l, x);
    Matrix want = Matrix::Zero(2, 2);
    want(1, 1) = 1.0;
    want(0, 0) = -1.0;
    CHECK((got - want).norm() == doctest::Approx(0.0));

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix lr = random_matrix(4, rng), xr = random_matrix(4, rng);
        CHECK(std::abs(lme::dissipator_apply(lr, xr).trace()) < 1e-12 * lr.norm() * lr.norm() * xr.norm());
        // Hermiticity preservation on Hermitian input.
        const Matrix xh = random_hermitian(4, rng);
        const Matrix out = lme::dissipator_apply(lr, xh);
        CHECK((out - Matrix(out.adjoint())).norm() < 1e-12 * out.norm());
    }
}

TEST_CASE("targeting jumps annihilate their dark state") {
    for (const zeno::TargetSpec spec :
         {zeno::TargetSpec{0.0, 0.0, 1.0}, {0.7, 1.3, 0.4}, {2.1, 4.9, -0.3}, {1.0, 0.2, 0.0}}) {
        const auto diss = zeno::single_spin_dissipator(spec);
        const Matrix total =
            lme::dissipator_apply(diss.l1, diss.psi0) + lme::dissipator_apply(diss.l2, diss.psi0);
        CHECK(total.norm() < 1e-13);
    }
}

TEST_CASE("liouvillian: pure dissipation, rescaled scaling, superoperator agreement") {
    const zeno::TargetSpec spec{0.9, 0.4, 0.5};
    LindbladModel m = single_spin_model(spec, 7.0);
    std::mt19937_64 rng(22);
    const Operator rho(m.space, testsup::random_density(2, rng));

    // H = 0: the right-hand side is Γ times the bare dissipator.
    Matrix direct = Matrix::Zero(2, 2);
    for (const auto& [l, rate] : m.jumps) direct += rate * lme::dissipator_apply(l.entries, rho.entries);
    CHECK((lme::liouvillian_apply(m, rho).entries - Matrix(7.0 * direct)).norm() < 1e-13);

    // With the state inside the dissipator kernel the rescaled right-hand side
    // is the perturbative commutator alone and shrinks linearly in 1/Γ.
    const Operator h2 = zeno::xyz_chain_hamiltonian(2, 1.0, 2.2, 0.77);
    const Operator marked(h2.space.with_dissipative({0}), h2.entries);
    LindbladModel chain = zeno::targeted_chain_model(marked, {spec}, 1.0);
    const Matrix r = testsup::random_density(2, rng);
    const auto diss = zeno::single_spin_dissipator(spec);
    const Operator rho_kernel(chain.space, ops::kron(diss.psi0, r));
    chain.gamma = 1e3;
    const double n3 = lme::liouvillian_apply(chain, rho_kernel, true).entries.norm();
    chain.gamma = 1e4;
    const double n4 = lme::liouvillian_apply(chain, rho_kernel, true).entries.norm();
    CHECK(n3 / n4 == doctest::Approx(10.0).epsilon(1e-9));

    // Superoperator matrix reproduces the map in both conventions.
    chain.gamma = 3.7;
    for (bool rescaled : {false, true}) {
        const Matrix superop = lme::superoperator_matrix(chain, rescaled);
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix x = random_matrix(4, rng);
            const Matrix via_matrix = ops::unvectorize(superop * ops::vectorize(x), 4);
            const Matrix via_apply = lme::liouvillian_apply(chain, Operator(chain.space, x), rescaled).entries;
            CHECK((via_matrix - via_apply).norm() < 1e-12 * std::max(1.0, via_apply.norm()));
        }
    }
}

TEST_CASE("superoperator spectra in simple limits") {
    LindbladModel empty;
    empty.space = TensorSpace({2});
    empty.hamiltonian = Operator(empty.space, Matrix::Zero(2, 2));
    empty.gamma = 1.0;
    CHECK(lme::superoperator_matrix(empty).norm() == doctest::Approx(0.0));

    LindbladModel pure = empty;
    pure.hamiltonian = Operator(pure.space, ops::pauli_z());
    pure.gamma = 5.0;
    const Matrix m = lme::superoperator_matrix(pure, true);
    Eigen::ComplexEigenSolver<Matrix> es(m);
    std::vector<double> imag;
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(es.eigenvalues()(i).real()) < 1e-14);
        imag.push_back(es.eigenvalues()(i).imag());
    }
    std::sort(imag.begin(), imag.end());
    CHECK(imag[0] == doctest::Approx(-2.0 / 5.0));
    CHECK(imag[1] == doctest::Approx(0.0));
    CHECK(imag[2] == doctest::Approx(0.0));
    CHECK(imag[3] == doctest::Approx(2.0 / 5.0));

    LindbladModel big;
    big.space = TensorSpace({2, 2, 2, 2, 2, 2, 2});
    big.hamiltonian = Operator(big.space, Matrix::Zero(128, 128));
    CHECK_THROWS_AS((void)lme::superoperator_matrix(big), std::invalid_argument);
}

TEST_CASE("evolve: analytic two-level decay and constant trajectories") {
    const TensorSpace space({2});
    Matrix lower = Matrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    LindbladModel m;
    m.space = space;
    m.hamiltonian = Operator(space, Matrix::Zero(2, 2));
    m.jumps.emplace_back(Operator(space, lower), 1.0);
    m.gamma = 3.0;

    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    const auto traj = lme::evolve(m, DensityMatrix{Operator(space, excited)}, 1.0 / 3.0, 1.0 / 3.0);
    CHECK(traj.times.back() == doctest::Approx(1.0 / 3.0));
    CHECK(traj.states.back().op.entries(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

    LindbladModel frozen;
    frozen.space = space;
    frozen.hamiltonian = Operator(space, Matrix::Zero(2, 2));
    frozen.gamma = 1.0;
    const auto still = lme::evolve(frozen, DensityMatrix{Operator(space, excited)}, 2.0, 0.5);
    for (const auto& st : still.states) {
        CHECK((st.op.entries - excited).norm() < 1e-14);
    }
}

TEST_CASE("evolve: powered-transfer path agrees with plain stepping") {
    LindbladModel m = squares_model(20.0);
    std::mt19937_64 rng(23);
    Matrix rho0 = testsup::random_density(16, rng);
    const DensityMatrix start{Operator(m.space, rho0)};
    const auto fast = lme::evolve(m, start, 2.0, 0.5);
    const auto slow = lme::evolve(m, start, 2.0, 0.5, {.force_stepwise = true});
    REQUIRE(fast.states.size() == slow.states.size());
    for (std::size_t i = 0; i < fast.states.size(); ++i) {
        CHECK((fast.states[i].op.entries - slow.states[i].op.entries).norm() < 1e-12);
    }
}

TEST_CASE("evolve: halving the step barely changes the populated-dynamics scenario") {
    LindbladModel m = squares_model(50.0);
    const auto eff = zeno::compose_two_boundary(zeno::xyz_chain_hamiltonian(4, 1.0, 2.2, 0.77),
                                                {M_PI / 3.0, M_PI / 4.0, 0.9},
                                                {3.0 * M_PI / 7.0, 4.0 * M_PI / 15.0, 0.7}, 50.0);
    const auto basis = ops::hermitian_eig(eff.h_d);
    RealVector diag(4);
    diag << 0.01, 0.4, 0.1, 0.49;
    Matrix r0 = Matrix::Zero(4, 4);
    for (int a = 0; a < 4; ++a) {
        r0 += diag(a) * Matrix(basis.vectors.col(a) * basis.vectors.col(a).adjoint());
    }
    const Operator rho0 = ops::split_product(m.space, eff.spectrum.psis[0], r0);

    const auto coarse = lme::evolve(m, DensityMatrix{rho0}, 3000.0, 3000.0);
    const auto fine = lme::evolve(m, DensityMatrix{rho0}, 3000.0, 3000.0, {.step_refinement = 2});
    CHECK((coarse.states.back().op.entries - fine.states.back().op.entries).norm() < 1e-8);
    CHECK(coarse.max_drift_rate <= 1e-9);
}

TEST_CASE("trace and Hermiticity are preserved by the generator") {
    std::mt19937_64 rng(24);
    LindbladModel m = squares_model(35.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix rho = random_hermitian(16, rng);
        for (bool rescaled : {false, true}) {
            const Matrix out = lme::liouvillian_apply(m, Operator(m.space, rho), rescaled).entries;
            CHECK(std::abs(out.trace()) < 1e-12 * std::max(1.0, out.norm()));
            CHECK((out - Matrix(out.adjoint())).norm() < 1e-12 * std::max(1.0, out.norm()));
        }
    }
}

TEST_CASE("ness_full: dark states, detailed balance, long-time agreement") {
    const zeno::TargetSpec spec{1.1, 0.6, 0.55};
    const LindbladModel m = single_spin_model(spec, 4.0);
    const auto rho = lme::ness_full(m);
    CHECK((rho.op.entries - zeno::single_spin_dissipator(spec).psi0).norm() < 1e-10);

    // Classical detailed balance between the two levels.
    const double mu = 0.37;
    const TensorSpace space({2});
    Matrix down = Matrix::Zero(2, 2), up = Matrix::Zero(2, 2);
    down(0, 1) = 1.0;
    up(1, 0) = 1.0;
    LindbladModel two;
    two.space = space;
    two.hamiltonian = Operator(space, Matrix::Zero(2, 2));
    two.jumps.emplace_back(Operator(space, down), (1.0 + mu) / 2.0);
    two.jumps.emplace_back(Operator(space, up), (1.0 - mu) / 2.0);
    two.gamma = 2.0;
    const auto balanced = lme::ness_full(two);
    CHECK(balanced.op.entries(0, 0).real() == doctest::Approx((1.0 + mu) / 2.0).epsilon(1e-12));
    CHECK(balanced.op.entries(1, 1).real() == doctest::Approx((1.0 - mu) / 2.0).epsilon(1e-12));

    // Long-time integration reaches the same state.
    const Operator h2 = zeno::xyz_chain_hamiltonian(2, 1.0, 2.2, 0.77);
    const Operator marked(h2.space.with_dissipative({0}), h2.entries);
    const LindbladModel chain = zeno::targeted_chain_model(marked, {spec}, 5.0);
    const Matrix superop = lme::superoperator_matrix(chain, false);
    Eigen::ComplexEigenSolver<Matrix> es(superop);
    double slowest = 1e300;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double re = -es.eigenvalues()(i).real();
        if (re > 1e-10) slowest = std::min(slowest, re);
    }
    const double t_end = 50.0 / slowest;
    std::mt19937_64 rng(25);
    const DensityMatrix start{Operator(chain.space, testsup::random_density(4, rng))};
    const auto traj = lme::evolve(chain, start, t_end, t_end / 4.0);
    const auto direct = lme::ness_full(chain);
    CHECK((traj.states.back().op.entries - direct.op.entries).norm() < 1e-6);
}

TEST_CASE("ness_full rejects degenerate steady states") {
    // Two decoupled dissipation-free spins: every diagonal state is stationary.
    LindbladModel m;
    m.space = TensorSpace({2});
    m.hamiltonian = Operator(m.space, ops::pauli_z());
    m.gamma = 1.0;
    CHECK_THROWS_AS((void)lme::ness_full(m), DegenerateKernelError);
}

TEST_CASE("leakage out of the dark-state slice shrinks like 1/Gamma") {
    const std::vector<double> gammas{50.0, 100.0, 200.0, 400.0};
    std::vector<double> leaks;
    const Matrix r0 = 0.25 * ops::identity_matrix(4);
    for (double gamma : gammas) {
        LindbladModel m = squares_model(gamma);
        const Matrix psi0 = zeno::compose_two_boundary(zeno::xyz_chain_hamiltonian(4, 1.0, 2.2, 0.77),
                                                       {M_PI / 3.0, M_PI / 4.0, 0.9},
                                                       {3.0 * M_PI / 7.0, 4.0 * M_PI / 15.0, 0.7}, gamma)
                               .spectrum.psis[0];
        const Operator rho0 = ops::split_product(m.space, psi0, r0);
        const auto traj = lme::evolve(m, DensityMatrix{rho0}, 5.0, 0.25);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            if (traj.times[i] < 1.0) continue;
            const Matrix reduced = ops::trace_out_dissipative(traj.states[i].op).entries;
            const Matrix slice = ops::split_product(m.space, psi0, reduced).entries;
            worst = std::max(worst, (traj.states[i].op.entries - slice).norm());
        }
        leaks.push_back(worst);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        sx += std::log(gammas[i]);
        sy += std::log(leaks[i]);
        sxx += std::log(gammas[i]) * std::log(gammas[i]);
        sxy += std::log(gammas[i]) * std::log(leaks[i]);
    }
    const double n = static_cast<double>(gammas.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope < -0.8);
    CHECK(slope > -1.2);
}
