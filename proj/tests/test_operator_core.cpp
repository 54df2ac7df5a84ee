#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "zenolind/operator_core.hpp"
#include "zenolind/zeno.hpp"

using namespace zenolind;
using ops::Matrix;
using ops::Operator;
using ops::TensorSpace;
using testsup::random_hermitian;
using testsup::random_matrix;

namespace {

// Naive partial trace over one factor set, decoding digits index by index.
// Oracle for the stride-based production implementation.
Matrix partial_trace_bruteforce(const Matrix& x, const std::vector<int>& dims,
                                const std::vector<int>& over) {
    const int n = static_cast<int>(dims.size());
    int d = 1;
    for (int v : dims) d *= v;
    std::vector<bool> traced(n, false);
    for (int s : over) traced[s] = true;

    auto digits = [&](int idx) {
        std::vector<int> out(n);
        for (int s = n - 1; s >= 0; --s) {
            out[s] = idx % dims[s];
            idx /= dims[s];
        }
        return out;
    };
    int d_keep = 1;
    for (int s = 0; s < n; ++s)
        if (!traced[s]) d_keep *= dims[s];

    auto kept_index = [&](const std::vector<int>& dg) {
        int out = 0;
        for (int s = 0; s < n; ++s)
            if (!traced[s]) out = out * dims[s] + dg[s];
        return out;
    };

    Matrix out = Matrix::Zero(d_keep, d_keep);
    for (int i = 0; i < d; ++i) {
        const auto di = digits(i);
        for (int j = 0; j < d; ++j) {
            const auto dj = digits(j);
            bool match = true;
            for (int s = 0; s < n; ++s)
                if (traced[s] && di[s] != dj[s]) match = false;
            if (match) out(kept_index(di), kept_index(dj)) += x(i, j);
        }
    }
    return out;
}

} // namespace

TEST_CASE("kron identities and trace multiplicativity") {
    const Operator i2(TensorSpace({2}), ops::identity_matrix(2));
    const Operator i4 = ops::kron(i2, i2);
    CHECK((i4.entries - ops::identity_matrix(4)).norm() == doctest::Approx(0.0));
    CHECK(i4.space.dims() == std::vector<int>{2, 2});

    // sigma_z ⊗ sigma_x: +sigma_x and -sigma_x on the diagonal blocks
    const Matrix zx = ops::kron(ops::pauli_z(), ops::pauli_x());
    CHECK((zx.block(0, 0, 2, 2) - ops::pauli_x()).norm() == doctest::Approx(0.0));
    CHECK((zx.block(2, 2, 2, 2) + ops::pauli_x()).norm() == doctest::Approx(0.0));
    CHECK(zx.block(0, 2, 2, 2).norm() == doctest::Approx(0.0));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix a = random_matrix(2, rng), b = random_matrix(2, rng);
        const Complex lhs = ops::kron(a, b).trace();
        const Complex rhs = a.trace() * b.trace();
        CHECK(std::abs(lhs - rhs) < 1e-13 * std::abs(rhs) + 1e-13);
    }
}

TEST_CASE("kron is associative up to space relabeling") {
    std::mt19937_64 rng(12);
    const Operator a(TensorSpace({2}), random_matrix(2, rng));
    const Operator b(TensorSpace({3}), random_matrix(3, rng));
    const Operator c(TensorSpace({2}), random_matrix(2, rng));
    const Matrix left = ops::kron(ops::kron(a, b), c).entries;
    const Matrix right = ops::kron(a, ops::kron(b, c)).entries;
    CHECK((left - right).norm() < 1e-13 * left.norm());
}

TEST_CASE("partial trace: unit-trace factor and identity") {
    std::mt19937_64 rng(13);
    const Matrix r = random_matrix(4, rng);
    Matrix psi = testsup::random_density(2, rng);
    const Operator prod = ops::kron(Operator(TensorSpace({2}), psi), Operator(TensorSpace({2, 2}), r));
    const Operator reduced = ops::partial_trace(prod, {0});
    CHECK((reduced.entries - r).norm() < 1e-13 * r.norm());
    CHECK(reduced.space.dims() == std::vector<int>{2, 2});

    const Operator i4(TensorSpace({2, 2}), ops::identity_matrix(4));
    CHECK((ops::partial_trace(i4, {0}).entries - 2.0 * ops::identity_matrix(2)).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("partial trace matches the index-loop oracle on a 4-factor operator") {
    std::mt19937_64 rng(14);
    const std::vector<int> dims{2, 2, 2, 2};
    const Matrix x = random_matrix(16, rng);
    const Operator op(TensorSpace(dims), x);
    for (const std::vector<int>& over : {std::vector<int>{0}, {3}, {0, 3}, {1, 2}, {0, 1, 2}}) {
        const Matrix got = ops::partial_trace(op, over).entries;
        const Matrix want = partial_trace_bruteforce(x, dims, over);
        CHECK((got - want).norm() < 1e-13 * want.norm());
    }
    // Trace is preserved.
    const Matrix reduced = ops::partial_trace(op, {1, 3}).entries;
    CHECK(std::abs(reduced.trace() - x.trace()) < 1e-12);
}

TEST_CASE("partial trace of kron factorizes exactly") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix a = random_matrix(2, rng), b = random_matrix(4, rng);
        const Operator prod =
            ops::kron(Operator(TensorSpace({2}), a), Operator(TensorSpace({4}), b));
        const Matrix reduced = ops::partial_trace(prod, {1}).entries;
        CHECK((reduced - Matrix(b.trace() * a)).norm() < 1e-13 * reduced.norm());
    }
}

TEST_CASE("commutator, dagger, frobenius norm") {
    const Operator sz(TensorSpace({2}), ops::pauli_z());
    const Operator sx(TensorSpace({2}), ops::pauli_x());
    const Matrix expect = 2.0 * kImag * ops::pauli_y();
    CHECK((ops::commutator(sz, sx).entries - expect).norm() == doctest::Approx(0.0));

    CHECK(ops::frobenius_norm(Operator(TensorSpace({2}), ops::identity_matrix(2))) ==
          doctest::Approx(std::sqrt(2.0)));

    std::mt19937_64 rng(16);
    const Operator x(TensorSpace({2, 2}), random_matrix(4, rng));
    CHECK((ops::dagger(ops::dagger(x)).entries - x.entries).norm() == doctest::Approx(0.0));

    // dagger([H, X]) = -[H, dagger(X)] for Hermitian H
    const Operator h(TensorSpace({2, 2}), random_hermitian(4, rng));
    const Matrix lhs = ops::dagger(ops::commutator(h, x)).entries;
    const Matrix rhs = -ops::commutator(h, ops::dagger(x)).entries;
    CHECK((lhs - rhs).norm() < 1e-13 * lhs.norm());

    const Operator other(TensorSpace({4}), random_matrix(4, rng));
    CHECK_THROWS_AS((void)ops::commutator(h, other), std::invalid_argument);
}

TEST_CASE("hermitian_eig on Pauli matrices with the phase convention") {
    const auto es_z = ops::hermitian_eig(ops::pauli_z());
    CHECK(es_z.values(0) == doctest::Approx(-1.0));
    CHECK(es_z.values(1) == doctest::Approx(1.0));
    // Ascending order puts |1> first, |0> second; phases make entries +1.
    CHECK(std::abs(es_z.vectors(1, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(es_z.vectors(0, 1) - Complex(1.0)) < 1e-14);

    const auto es_x = ops::hermitian_eig(ops::pauli_x());
    CHECK(es_x.values(0) == doctest::Approx(-1.0));
    CHECK(es_x.values(1) == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)ops::hermitian_eig(Matrix(ops::pauli_x() + kImag * ops::identity_matrix(2))),
                    NumericalContractError);
}

TEST_CASE("hermitian_eig reconstruction on a projected chain Hamiltonian") {
    const auto h = zeno::xyz_chain_hamiltonian(4, 1.0, 2.2, 0.77);
    const auto model = zeno::compose_two_boundary(
        h, {M_PI / 3.0, M_PI / 4.0, 0.9}, {3.0 * M_PI / 7.0, 4.0 * M_PI / 15.0, 0.7}, 100.0);
    const auto es = ops::hermitian_eig(model.h_d);
    const Matrix rebuilt =
        es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    CHECK((rebuilt - model.h_d.entries).norm() < 1e-10 * model.h_d.entries.norm());
}

TEST_CASE("eigenvalue sum equals the trace; unitary invariance of the norm") {
    std::mt19937_64 rng(17);
    const Matrix a = random_hermitian(6, rng);
    const auto es = ops::hermitian_eig(a);
    CHECK(es.values.sum() == doctest::Approx(a.trace().real()).epsilon(1e-10));

    // Unitary from the eigenvectors of another random Hermitian matrix.
    const Matrix u = ops::hermitian_eig(Matrix(random_hermitian(6, rng))).vectors;
    const Matrix x = random_matrix(6, rng);
    CHECK(Matrix(u * x * u.adjoint()).norm() == doctest::Approx(x.norm()).epsilon(1e-12));

    // Orthonormality of eigenvectors.
    CHECK((Matrix(es.vectors.adjoint() * es.vectors) - ops::identity_matrix(6)).norm() < 1e-12);
}

TEST_CASE("embed_local places factors correctly") {
    const TensorSpace space({2, 2});
    const Matrix left = ops::embed_local(ops::pauli_z(), 0, space).entries;
    CHECK((left - ops::kron(ops::pauli_z(), ops::identity_matrix(2))).norm() == doctest::Approx(0.0));
    const Matrix right = ops::embed_local(ops::pauli_z(), 1, space).entries;
    CHECK((right - ops::kron(ops::identity_matrix(2), ops::pauli_z())).norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS((void)ops::embed_local(ops::pauli_z(), 2, space), std::invalid_argument);
    CHECK_THROWS_AS((void)ops::embed_local(ops::identity_matrix(8), 1, space), std::invalid_argument);
}

TEST_CASE("embedding commutes with partial trace over untouched sites") {
    std::mt19937_64 rng(18);
    const TensorSpace space({2, 2, 2});
    const Matrix local = random_matrix(2, rng);
    const Operator embedded = ops::embed_local(local, 1, space);
    // Tracing out site 2 then comparing against embedding in the reduced space.
    const Matrix traced = ops::partial_trace(embedded, {2}).entries;
    const Matrix direct = 2.0 * ops::embed_local(local, 1, TensorSpace({2, 2})).entries;
    CHECK((traced - direct).norm() < 1e-13 * direct.norm());
}

TEST_CASE("split_product matches kron for contiguous layouts and handles interleaving") {
    std::mt19937_64 rng(19);
    const Matrix a = random_matrix(2, rng);
    const Matrix b = random_matrix(4, rng);

    const TensorSpace leading({2, 2, 2}, {0});
    const Matrix via_split = ops::split_product(leading, a, b).entries;
    CHECK((via_split - ops::kron(a, b)).norm() == doctest::Approx(0.0));

    // Dissipative factors on both ends: compare against an explicit kron chain.
    const TensorSpace ends({2, 2, 2}, {0, 2});
    const Matrix al = random_matrix(2, rng), ar = random_matrix(2, rng);
    const Matrix mid = random_matrix(2, rng);
    const Matrix expected = ops::kron(al, ops::kron(mid, ar));
    const Matrix got = ops::split_product(ends, ops::kron(al, ar), mid).entries;
    CHECK((got - expected).norm() < 1e-13 * expected.norm());
}
